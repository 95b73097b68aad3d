//! Exact coefficient rings and truncated series arithmetic.
//!
//! The tower is `ExactScalar ⊂ APoly ⊂ ZLoop`, with [`BiSeries`] the
//! truncated `(q, q̄)`-series over `ZLoop` and [`LoopMatrix`] square
//! matrices of those.

pub mod apoly;
pub mod biseries;
pub mod json;
pub mod linalg;
pub mod loopmatrix;
pub mod scalar;
pub mod zloop;

pub use apoly::APoly;
pub use biseries::BiSeries;
pub use linalg::Matrix;
pub use loopmatrix::{LoopMatrix, ZMatrix};
pub use scalar::{rat, ExactScalar};
pub use zloop::ZLoop;
