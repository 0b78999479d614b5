use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("signature ({0}, {1}, {2}) is not hyperbolic")]
    NonHyperbolic(u32, u32, u32),
    #[error("triangle group construction failed: {0}")]
    Construction(String),
    #[error("no level-{k} lift: {reason}")]
    NoLevelLift { k: u32, reason: String },
    #[error("unsupported cyclic factor: gcd(q = {q}, k = {k}) != 1")]
    UnsupportedCyclicFactor { q: u32, k: u32 },
    #[error("condition (*) violated: p = {p} must exceed the level k = {k}")]
    ConditionViolated { p: u32, k: u32 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("word-length cap {cap} exceeded before the orbit ball of radius {radius} was exhausted")]
    WordLengthCap { cap: usize, radius: f64 },
    #[error("inconsistent weight homomorphism: {0}")]
    WeightCollision(String),
    #[error("degenerate constraint: the chart plane of the identity")]
    DegenerateConstraint,
    #[error("carved region is empty")]
    EmptyRegion,
    #[error("carved region reaches the light cone (non-compact)")]
    NonCompact,
    #[error("facet planarity residual {0:e} exceeds tolerance")]
    Planarity(f64),
    #[error("polyhedron assembly failed: {0}")]
    Assembly(String),
    #[error("degenerate polyhedron: mu = {0}")]
    DegenerateMu(f64),
    #[error("orbit radius iteration cap reached without a relevance certificate (last R = {radius}, R* = {needed})")]
    IterationCap { radius: f64, needed: f64 },
    #[error("face pairing failed: {0}")]
    Pairing(String),
    #[error("quotient complex: {0}")]
    Quotient(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn at(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
