//! Discrete Hardy spaces on homogeneous rooted trees.
//!
//! A rooted tree where the root has q+1 children and every other vertex has
//! q children is homogeneous of degree q+1. The space T_p collects functions
//! whose level means M_p(n, f) stay bounded; composition with a self-map of
//! the tree acts on these spaces, and this crate computes the quantities
//! that control that action at a finite truncation depth: norms, counting
//! functions, certified lower bounds, exact truncated operator norms, and
//! compactness diagnostics.

pub mod error;
mod exec;
pub mod maps;
pub mod ops;
pub mod sample;
pub mod space;
pub mod tree;

pub use error::{Error, Result};
pub use exec::Mode;
pub use maps::{
    counting_function, counting_function_seq, default_chosen, displacement_profile,
    ChildSelector, CountingTable, DisplacementProfile, DisplacementStats, MapEntry, MapFile,
    PartialAutomorphism, SelfMap,
};
pub use ops::{
    automorphism_norm, compactness_diagnostics, compose, compose_max, compose_seq,
    diagnostics_from_counts, lower_bound_from_counts, lower_bound_fw, opnorm_infinity,
    sequential_probe, sufficiency_from_counts, sufficiency_series, truncated_opnorm,
    truncated_opnorm_from_counts, truncated_opnorm_seq, DecayEntry, DiagnosticsReport, Hint,
    HintStatus, InfinityOpNorm, LowerBound, OracleResult, ProbeEntry, ProbeReport,
    SufficiencyEntry, SufficiencySeries, TrialFamily,
};
pub use sample::{
    random_ball_vertex, random_dense_function, random_sparse_function, random_total_map,
    random_vertex_at,
};
pub use space::{
    extremal_fw, extremal_stack, growth_bound_check, weight, FunctionEntry, FunctionFile,
    GrowthReport, NormReport, PExponent, TreeFunction,
};
pub use tree::{TreeParams, Vertex, DEFAULT_DEPTH_CAP};
