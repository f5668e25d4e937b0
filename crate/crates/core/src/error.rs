use thiserror::Error;

/// Direction of a ladder move, `J_+` (up) or `J_-` (down).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("singular deformation: s = {s} lies within 1e-12 of a multiple of pi")]
    SingularDeformation { s: f64 },

    #[error("hyperbolic q-number needs a nonzero deformation, got t = {t}")]
    ZeroHyperbolic { t: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unitarity violation: c = {c}, m = {m}, direction {sign} gives radicand {radicand}")]
    UnitarityViolation {
        c: f64,
        m: f64,
        sign: Sign,
        radicand: f64,
    },

    #[error("branch {branch} is incompatible with cos(s) = {cos_s}")]
    BranchMismatch { branch: String, cos_s: f64 },

    #[error("insufficient grid: {0}")]
    InsufficientGrid(String),

    #[error("no unitary truncation at this anchor: |N|^2 = {value} on link {link}")]
    NoUnitaryTruncation { link: usize, value: f64 },

    #[error("q = exp(is) is a root of unity (s/pi = {p}/{l}); the coupled construction needs a generic q")]
    RootOfUnity { p: i64, l: i64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
