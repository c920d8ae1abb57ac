//! Realizing finite rational matrix groups as orthogonal groups of algebraic
//! form families, and those orthogonal groups as automorphism groups of
//! minimal Sullivan algebras.
//!
//! The crate is layered:
//!
//! * [`poly`] and [`matrix`]: exact sparse polynomials and dense matrices,
//!   generic over a [`Scalar`] field.
//! * [`groups`] and [`quadratic`]: finite matrix groups, their action on
//!   polynomials, Reynolds averaging, orthogonal-group membership and
//!   congruence diagonalization of quadratic forms.
//! * [`realizable`]: realizable form families and the constructions that
//!   produce them.
//! * [`cdga`]: free graded-commutative algebras with differentials and their
//!   morphisms.
//! * [`realization`]: the Sullivan model of a realizable family, lifting of
//!   orthogonal transformations, homotopy witnesses, and classification of
//!   automorphisms.
//!
//! Concrete exact-rational aliases ([`Rat`], [`QPoly`], [`QMatrix`], ...) are
//! provided for the common case.

pub mod cdga;
pub mod groups;
pub mod matrix;
pub mod poly;
pub mod quadratic;
pub mod realizable;
pub mod realization;
pub mod scalar;

pub use scalar::Scalar;

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rat = num_rational::BigRational;
pub type QPoly = poly::Poly<Rat>;
pub type QMatrix = matrix::Matrix<Rat>;
pub type QMatrixGroup = groups::FiniteMatrixGroup<Rat>;
pub type QFormFamily = groups::FormFamily<Rat>;
pub type QGcaElement = cdga::GcaElement<Rat>;
pub type QCdga = cdga::Cdga<Rat>;
pub type QDgaMorphism = cdga::DgaMorphism<Rat>;

/// Shorthand for `num / den` as a [`Rat`].
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}
