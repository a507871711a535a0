//! Exact computations with morphisms from the matrix point `Space M_n(C)`
//! into affine and projective targets.
//!
//! Everything is computed over the Gaussian rationals Q(i) with no
//! floating point: a morphism point is a tuple of commuting matrices per
//! chart, and its image scheme, Chan-Paton module, gauge algebra and
//! Hilbert/Chow classification are derived by exact linear algebra.

pub mod artinian;
pub mod error;
pub mod expr;
pub mod groebner;
pub mod higgsing;
pub mod jordan;
pub mod matrix;
pub mod moduli;
pub mod ncword;
pub mod poly;
pub mod scalar;
pub mod span;
pub mod unipoly;

pub use error::{Error, Result};
pub use matrix::{Matrix, Subspace};
pub use scalar::{GaussianInteger, GaussianRational};
pub use span::MatrixSpan;
pub use unipoly::UniPoly;
