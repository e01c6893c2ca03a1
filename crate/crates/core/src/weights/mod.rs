//! Weight laws, the offspring distributions they induce, and the scalar
//! budget functions used by the structure finder.

mod laws;
mod model;
mod parse;
mod phi;
pub mod quad;

pub use laws::*;
pub use model::{poisson_pmf, WeightModel, QUAD_RTOL};
pub use phi::PhiSpec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LawError {
    #[error("invalid weight model: {0}")]
    InvalidModel(String),
    #[error("power-law exponent {alpha} gives an infinite mean (need alpha > 2)")]
    InfiniteMean { alpha: f64 },
    #[error("offspring mean nu = {nu} is not supercritical")]
    Subcritical { nu: f64 },
    #[error("nu is infinite, so the target (1 + nu) / 2 is undefined")]
    InfiniteNu,
    #[error("eps0 = {eps0} too large: (1 - eps0) nu = {reach} cannot reach {target}")]
    EpsilonTooLarge { eps0: f64, reach: f64, target: f64 },
    #[error("no K <= {limit} reaches the target")]
    NoK0Found { limit: u64 },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
}
