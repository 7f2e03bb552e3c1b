//! Exact computations with Lie-Rinehart algebras over finitely presented
//! commutative algebras: axiom checks, enveloping algebras, Rinehart
//! cohomology, Poisson algebras and their differentials, prequantization,
//! and dimension counts for reduced quantum spaces.
//!
//! The core types are generic over [`scalar::Scalar`]; the aliases below fix
//! the two fields that ship with the crate.

pub mod cohomology;
pub mod derivation;
pub mod description;
pub mod enveloping;
pub mod error;
pub mod lie_rinehart;
pub mod linalg;
pub mod orbits;
pub mod parse;
pub mod poisson;
pub mod poly;
pub mod prequant;
pub mod presets;
pub mod quotient;
pub mod report;
pub mod scalar;

pub use description::Description;
pub use error::{Error, Result};
pub use report::{Certification, Check, Report, Status};
pub use scalar::{Gaussian, Rational};

pub type QPoly = poly::Poly<Rational>;
pub type GPoly = poly::Poly<Gaussian>;
pub type QAlgebra = quotient::QuotientAlgebra<Rational>;
pub type GAlgebra = quotient::QuotientAlgebra<Gaussian>;
pub type QLieRinehart = lie_rinehart::LieRinehartAlgebra<Rational>;
pub type GLieRinehart = lie_rinehart::LieRinehartAlgebra<Gaussian>;
pub type QPoisson = poisson::PoissonAlgebra<Rational>;
pub type GPoisson = poisson::PoissonAlgebra<Gaussian>;
pub type GPrequantum = prequant::PrequantumModule<Gaussian>;
