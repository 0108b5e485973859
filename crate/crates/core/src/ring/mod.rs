//! Exact rationals, multivariate (Laurent) polynomials, rational function fields and
//! group rings of the supported quotient groups.

mod group_ring;
mod laurent;
pub mod poly;
mod ratfunc;

pub use group_ring::{Group, GroupElement, GroupRingElement};
pub use laurent::{newton_polytope, LaurentPoly};
pub use poly::{poly_gcd, Poly};
pub use ratfunc::RationalFunction;

/// Arbitrary-precision rational number, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Convenience constructor for small rationals.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Convenience constructor for integers.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
