use crate::geometry::{Configuration, RegionLabel};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The configuration is not a point of the space-like domain.
    #[error("configuration {config:?} lies outside the domain (region {region:?})")]
    OutsideDomain {
        config: Configuration,
        region: RegionLabel,
    },

    /// A finite-difference stencil would straddle a branch line or leave the domain.
    #[error("stencil of width {step} at {config:?} is within {margin} of a branch boundary")]
    StencilTooClose {
        config: Configuration,
        step: f64,
        margin: f64,
    },

    #[error("tensor current has imaginary part {imag:e} for |psi|^2 = {norm_sq:e}")]
    NonRealCurrent { imag: f64, norm_sq: f64 },

    #[error("hypersurface is not space-like: sup|f'| = {slope}")]
    NotSpaceLike { slope: f64 },

    #[error("initial data are not compactly supported")]
    UnboundedSupport,

    #[error("single-time slice is identically zero")]
    ZeroSlice,

    #[error("initial slice is not a product state (sigma2/sigma1 = {ratio:e})")]
    NotProduct { ratio: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("scenario config: {0}")]
    Config(#[from] serde_json::Error),
}
