use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the crate: domain errors (root has no
/// parent, function queried beyond its depth), range errors (depth cap,
/// exact-arithmetic overflow), and malformed input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("branching parameter q must be >= 1, got {q}")]
    QRange { q: u32 },
    #[error("level {n} exceeds the depth cap {cap}")]
    DepthCap { n: usize, cap: usize },
    #[error("level size overflows exact arithmetic at level {n} (q = {q})")]
    LevelOverflow { n: usize, q: u32 },
    #[error("level {n} is too large to enumerate on this platform")]
    LevelTooLarge { n: usize },
    #[error("rank {rank} out of range for level {n} of size {size}")]
    RankRange { rank: u128, n: usize, size: u128 },
    #[error("word arithmetic overflow on a vertex of depth {depth}")]
    WordOverflow { depth: usize },
    #[error("letter {letter} at position {pos} out of range for q = {q}")]
    LetterRange { letter: u32, pos: usize, q: u32 },
    #[error("invalid child index {index} at {vertex} (q = {q})")]
    ChildIndex { index: u32, vertex: String, q: u32 },
    #[error("cannot parse vertex {text:?}: {reason}")]
    VertexParse { text: String, reason: String },
    #[error("p must be a real >= 1, got {0}")]
    PRange(f64),
    #[error("operation requires a finite exponent p")]
    PNotFinite,
    #[error("function is not defined beyond depth {depth}, queried at {vertex}")]
    BeyondDepth { vertex: String, depth: usize },
    #[error("dense level {n} holds {got} values, expected {want}")]
    DenseLevelSize { n: usize, got: usize, want: u128 },
    #[error("operands live on different trees (q = {left} vs q = {right})")]
    ParamsMismatch { left: u32, right: u32 },
    #[error("the zero function admits no growth ratio")]
    ZeroFunction,
    #[error("map covers depth {coverage}, evaluated at {vertex}")]
    Coverage { vertex: String, coverage: usize },
    #[error("requested depth {requested} exceeds map coverage {coverage}")]
    CoverageDepth { requested: usize, coverage: usize },
    #[error("chosen vertex {vertex} is not at level {level}")]
    ChosenLevel { vertex: String, level: usize },
    #[error("map table is missing {vertex}")]
    MissingVertex { vertex: String },
    #[error("map table lists {vertex} beyond the declared depth {depth}")]
    EntryBeyondDepth { vertex: String, depth: usize },
    #[error("composition escapes the function domain at {vertex}: image level {image_level} > depth {depth}")]
    ComposeEscape { vertex: String, image_level: usize, depth: usize },
    #[error("file declares q = {file_q}, expected q = {expected_q}")]
    QMismatch { file_q: u32, expected_q: u32 },
    #[error("not an automorphism on the covered ball: {reason}")]
    NotAutomorphism { reason: String },
    #[error("series accumulation overflows exact arithmetic at level {n}")]
    SeriesOverflow { n: usize },
    #[error("trial sequence must march outward: {reason}")]
    BadTrialSequence { reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
