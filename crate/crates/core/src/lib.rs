//! Exact tt*-geometry of the quantum cohomology of the projective line.
//!
//! The crate computes the Hermitian metric `h_{0̄0}` of the Cecotti–Vafa
//! structure of `P¹` by a recursive Birkhoff factorization over exact
//! rationals, and checks it against an independent recursion for the
//! coefficients `F_n`, numerical Painlevé III integration, the Γ̂-integral
//! structure on `K(P¹)`, and a finite-dimensional Lefschetz `sl₂` toolkit.

pub mod birkhoff;
pub mod error;
pub mod exact;
pub mod gamma;
pub mod golden;
pub mod painleve;
pub mod qde;
pub mod sl2;
pub mod ttstar;

pub use error::{Error, Result};
pub use exact::{rat, APoly, BiSeries, ExactScalar, LoopMatrix, Matrix, ZLoop, ZMatrix};
