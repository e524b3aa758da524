//! Composition operators and the machinery that bounds them.
//!
//! Composition is literal: (C_phi f)(v) = f(phi(v)), evaluated level by
//! level out to a requested depth. Everything else in this module reasons
//! about the operator without ever extrapolating past the data it has: the
//! counting table drives certified lower bounds, an exact truncated operator
//! norm, upper estimates, and finite-depth compactness diagnostics.

pub mod bounds;
pub mod diagnostics;

pub use bounds::{
    automorphism_norm, lower_bound_from_counts, lower_bound_fw, opnorm_infinity,
    sufficiency_from_counts, sufficiency_series, truncated_opnorm, truncated_opnorm_from_counts,
    truncated_opnorm_seq, InfinityOpNorm, LowerBound, OracleResult, SufficiencyEntry,
    SufficiencySeries,
};
pub use diagnostics::{
    compactness_diagnostics, diagnostics_from_counts, sequential_probe, DecayEntry,
    DiagnosticsReport, Hint, HintStatus, ProbeEntry, ProbeReport, TrialFamily,
};

use crate::error::{Error, Result};
use crate::exec::{self, Mode};
use crate::maps::SelfMap;
use crate::space::TreeFunction;

/// f(phi(v)) for every v out to `out_depth`, returned dense.
pub fn compose(map: &SelfMap, f: &TreeFunction, out_depth: usize) -> Result<TreeFunction> {
    compose_mode(map, f, out_depth, Mode::Auto)
}

pub fn compose_seq(map: &SelfMap, f: &TreeFunction, out_depth: usize) -> Result<TreeFunction> {
    compose_mode(map, f, out_depth, Mode::Seq)
}

fn compose_mode(
    map: &SelfMap,
    f: &TreeFunction,
    out_depth: usize,
    mode: Mode,
) -> Result<TreeFunction> {
    let params = *map.params();
    if params.q() != f.params().q() {
        return Err(Error::ParamsMismatch {
            left: params.q(),
            right: f.params().q(),
        });
    }
    if out_depth > map.coverage_depth() {
        return Err(Error::CoverageDepth {
            requested: out_depth,
            coverage: map.coverage_depth(),
        });
    }
    let mut levels = Vec::with_capacity(out_depth + 1);
    for n in 0..=out_depth {
        let vertices = params.level_vertices(n)?;
        let values = exec::try_map(&vertices, mode, |v| {
            let w = map.eval(v)?;
            if w.depth() > f.depth() {
                return Err(Error::ComposeEscape {
                    vertex: v.to_string(),
                    image_level: w.depth(),
                    depth: f.depth(),
                });
            }
            f.value(&w)
        })?;
        levels.push(values);
    }
    TreeFunction::dense(params, levels)
}

/// Compose out to the deepest level whose images all stay inside f's domain,
/// capped by the map's coverage. Errors if even the root escapes.
pub fn compose_max(map: &SelfMap, f: &TreeFunction) -> Result<TreeFunction> {
    let params = *map.params();
    let cap = map.coverage_depth().min(params.depth_cap());
    let mut reachable: Option<usize> = None;
    'levels: for n in 0..=cap {
        for v in params.level_vertices(n)? {
            if map.eval(&v)?.depth() > f.depth() {
                break 'levels;
            }
        }
        reachable = Some(n);
    }
    match reachable {
        Some(depth) => compose(map, f, depth),
        None => {
            let root_image = map.root_image()?;
            Err(Error::ComposeEscape {
                vertex: "o".to_string(),
                image_level: root_image.depth(),
                depth: f.depth(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{extremal_fw, PExponent};
    use crate::tree::TreeParams;
    use num_complex::Complex64;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
    }

    fn random_like_function(params: TreeParams, depth: usize) -> TreeFunction {
        // deterministic but irregular values: enough texture to catch
        // permutation mistakes in composition
        let mut levels = Vec::new();
        let mut state = 1u64;
        for n in 0..=depth {
            let size = params.level_size(n).unwrap() as usize;
            let mut level = Vec::with_capacity(size);
            for _ in 0..size {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let re = ((state >> 33) as f64) / (u32::MAX as f64) - 0.5;
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let im = ((state >> 33) as f64) / (u32::MAX as f64) - 0.5;
                level.push(Complex64::new(re, im));
            }
            levels.push(level);
        }
        TreeFunction::dense(params, levels).unwrap()
    }

    #[test]
    fn identity_composition_returns_the_same_values() {
        let params = TreeParams::new(2).unwrap();
        let f = random_like_function(params, 4);
        let g = compose(&SelfMap::identity(params), &f, 4).unwrap();
        for v in params.ball_vertices(4).unwrap() {
            assert_eq!(f.value(&v).unwrap(), g.value(&v).unwrap());
        }
    }

    #[test]
    fn parent_composition_shifts_level_means_down_by_one() {
        let params = TreeParams::new(3).unwrap();
        let f = random_like_function(params, 5);
        let g = compose(&SelfMap::parent(params), &f, 6).unwrap();
        for p in [PExponent::finite(1.0).unwrap(), PExponent::finite(2.0).unwrap()] {
            let fr = f.tp_norm(p).unwrap();
            let gr = g.tp_norm(p).unwrap();
            assert!(close(gr.per_level[0], fr.per_level[0]));
            assert!(close(gr.per_level[1], fr.per_level[0]));
            for n in 2..=6 {
                assert!(close(gr.per_level[n], fr.per_level[n - 1]), "n={n}");
            }
            assert!(close(gr.sup, fr.sup));
        }
    }

    #[test]
    fn escape_names_the_first_offending_vertex() {
        let params = TreeParams::new(2).unwrap();
        let f = random_like_function(params, 3);
        let child = SelfMap::child(params, 0).unwrap();
        let err = compose(&child, &f, 3).unwrap_err();
        match err {
            Error::ComposeEscape {
                vertex,
                image_level,
                depth,
            } => {
                assert_eq!(vertex, "0.0.0");
                assert_eq!(image_level, 4);
                assert_eq!(depth, 3);
            }
            other => panic!("expected escape, got {other}"),
        }
        let g = compose_max(&child, &f).unwrap();
        assert_eq!(g.depth(), 2);
        let v = params.parse_vertex("1.0").unwrap();
        assert_eq!(
            g.value(&v).unwrap(),
            f.value(&params.parse_vertex("1.0.0").unwrap()).unwrap()
        );
    }

    #[test]
    fn composition_with_extremal_atom_counts_preimages() {
        let params = TreeParams::new(2).unwrap();
        let p = PExponent::finite(1.0).unwrap();
        let parent = SelfMap::parent(params);
        let w = params.parse_vertex("1").unwrap();
        let fw = extremal_fw(&params, &w, p).unwrap().extended(2).unwrap();
        let g = compose(&parent, &fw, 2).unwrap();
        for v in params.level_vertices(2).unwrap() {
            let expected = if v.parent().unwrap() == w { 3.0 } else { 0.0 };
            assert_eq!(g.value(&v).unwrap().re, expected);
        }
        let report = g.tp_norm(p).unwrap();
        assert!(close(report.per_level[2], 2.0 * 3.0 / 6.0));
    }

    #[test]
    fn mismatched_branching_is_rejected() {
        let q2 = TreeParams::new(2).unwrap();
        let q3 = TreeParams::new(3).unwrap();
        let f = random_like_function(q3, 2);
        assert!(matches!(
            compose(&SelfMap::identity(q2), &f, 2),
            Err(Error::ParamsMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn sequential_and_auto_composition_agree_exactly() {
        let params = TreeParams::new(2).unwrap();
        let f = random_like_function(params, 6);
        let map = SelfMap::parent(params);
        let a = compose(&map, &f, 6).unwrap();
        let b = compose_seq(&map, &f, 6).unwrap();
        for v in params.ball_vertices(6).unwrap() {
            assert_eq!(a.value(&v).unwrap(), b.value(&v).unwrap());
        }
    }
}
