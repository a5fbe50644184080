//! Quantum tori, Lusztig charts of `GL_q(N)` and their embeddings.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod classical;
pub mod cluster;
pub mod error;
pub mod glq;
pub mod morphism;
pub mod numeric;
pub mod report;
pub mod scalar;
pub mod skew;
pub mod tori;

pub use algebra::{normal_mul, q_commutation_exponent, AlgebraSignature, Monomial, Polynomial};
pub use error::{Error, Result};
pub use morphism::{apply_morphism, check_morphism, Image, Morphism, MorphismReport};
pub use scalar::LaurentScalar;
