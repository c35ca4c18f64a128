//! Numerical Dixmier traces and spectral zeta residues for multiplication
//! operators on flat tori and on abstract diagonal models.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix it to `f64`.

// `!(x > y)` is how NaN inputs get refused; tabulated constants keep full
// precision for both scalar widths
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod abstract_model;
pub mod counterexample_l1;
pub mod error;
pub mod extrapolation;
pub mod quadrature;
pub mod scalar;
pub mod sequence_limits;
pub mod special;
pub mod spectral_lattice;
pub mod torus_operators;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ZetaValue64 = spectral_lattice::ZetaValue<f64>;
pub type SymbolFunction64 = spectral_lattice::SymbolFunction<f64>;
pub type Residue64 = spectral_lattice::Residue<f64>;
pub type BoundedSequence64 = sequence_limits::BoundedSequence<f64>;
pub type LimitBracket64 = sequence_limits::LimitBracket<f64>;
pub type TorusFunction64 = torus_operators::TorusFunction<f64>;
pub type FourierTable64 = torus_operators::FourierTable<f64>;
pub type CompressedOperator64 = torus_operators::CompressedOperator<f64>;
pub type SingularSpectrum64 = torus_operators::SingularSpectrum<f64>;
pub type DixmierBracket64 = torus_operators::DixmierBracket<f64>;
pub type DiagonalModel64 = abstract_model::DiagonalModel<f64>;
pub type DiagonalElement64 = counterexample_l1::DiagonalElement<f64>;
