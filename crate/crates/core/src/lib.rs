pub mod certificate;
pub mod corpus;
pub mod error;
pub mod exterior;
pub mod g2;
pub mod io;
pub mod jordan;
pub mod lie;
pub mod matrix;
pub mod oracle;
pub mod poly;
pub mod random;
pub mod report;
pub mod scalar;
pub mod selftest;

pub use error::{Error, Result};
pub use exterior::{dual_iso, dual_iso_inverse, Multivector, Variance, Volume};
pub use matrix::{Matrix, Signature};
pub use poly::{invariant_factors, Poly, Root, Roots};
pub use scalar::{FieldMode, Scalar};
