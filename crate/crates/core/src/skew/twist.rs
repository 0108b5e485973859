use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::ring::RationalFunction;

/// Powers `A^m` with `|m|` up to this bound are memoized.
pub const DEFAULT_MEMO_CAP: i64 = 64;

/// Monomial automorphism `t^v -> t^{A v}` of `Q(t_1, ..., t_k)` given by a unimodular
/// integer matrix `A`.
pub struct Twist {
    matrix: IntMatrix,
    inverse: IntMatrix,
    identity: bool,
    memo_cap: i64,
    memo: RwLock<HashMap<i64, Arc<IntMatrix>>>,
}

impl Twist {
    pub fn new(matrix: IntMatrix) -> Result<Arc<Twist>> {
        Self::with_memo_cap(matrix, DEFAULT_MEMO_CAP)
    }

    pub fn with_memo_cap(matrix: IntMatrix, memo_cap: i64) -> Result<Arc<Twist>> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Input("twist matrix must be square".into()));
        }
        let det = matrix.det()?;
        if det.abs() != BigInt::from(1) {
            return Err(Error::Input(format!("twist matrix has determinant {det}, not +-1")));
        }
        let inverse = matrix.inverse_unimodular()?;
        let identity = matrix.is_identity();
        Ok(Arc::new(Twist {
            matrix,
            inverse,
            identity,
            memo_cap,
            memo: RwLock::new(HashMap::new()),
        }))
    }

    pub fn identity(k: usize) -> Arc<Twist> {
        Self::new(IntMatrix::identity(k)).expect("identity is unimodular")
    }

    /// Number of field variables.
    pub fn k(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    /// `A^m` for any integer `m`.
    pub fn power(&self, m: i64) -> Result<Arc<IntMatrix>> {
        if self.identity || m == 0 {
            return Ok(Arc::new(IntMatrix::identity(self.k())));
        }
        let memoize = m.abs() <= self.memo_cap;
        if memoize {
            if let Some(p) = self.memo.read().expect("memo lock").get(&m) {
                return Ok(p.clone());
            }
        }
        let base = if m > 0 { &self.matrix } else { &self.inverse };
        let mut acc = IntMatrix::identity(self.k());
        for _ in 0..m.unsigned_abs() {
            acc = acc.mul(base)?;
        }
        let acc = Arc::new(acc);
        if memoize {
            // concurrent fills compute the same value, so last writer wins harmlessly
            self.memo.write().expect("memo lock").insert(m, acc.clone());
        }
        Ok(acc)
    }

    /// Image exponent `A^m v` of the monomial `t^v`.
    pub fn apply_exponent(&self, m: i64, v: &[i64]) -> Result<Vec<i64>> {
        if self.identity || m == 0 {
            return Ok(v.to_vec());
        }
        self.power(m)?.mul_vec(v)
    }

    /// `sigma^m(f)`: substitutes `t^v -> t^{A^m v}` in numerator and denominator.
    pub fn apply(&self, m: i64, f: &RationalFunction) -> Result<RationalFunction> {
        if self.identity || m == 0 || f.as_constant().is_some() {
            return Ok(f.clone());
        }
        let p = self.power(m)?;
        // validate once so the substitution closure cannot fail
        for (e, _) in f.numer().terms().chain(f.denom().terms()) {
            let v: Vec<i64> = e.iter().map(|&x| x as i64).collect();
            p.mul_vec(&v)?;
        }
        Ok(f.substitute_monomials(|v| p.mul_vec(v).expect("checked above")))
    }
}

impl PartialEq for Twist {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for Twist {}

impl fmt::Debug for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Twist({:?})", self.matrix)
    }
}

/// Free-standing form of [`Twist::apply`].
pub fn apply_twist(twist: &Twist, m: i64, f: &RationalFunction) -> Result<RationalFunction> {
    twist.apply(m, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{LaurentPoly, Rational};
    use num_traits::One;

    fn mono(e: &[i64]) -> RationalFunction {
        RationalFunction::from_laurent(&LaurentPoly::monomial(e.to_vec(), Rational::one()))
    }

    #[test]
    fn inversion_twist_sends_t_to_its_inverse() {
        let tw = Twist::new(IntMatrix::from_rows(vec![vec![-1]]).unwrap()).unwrap();
        let img = tw.apply(1, &mono(&[1])).unwrap();
        assert_eq!(img, mono(&[-1]));
        assert!(!img.denom().is_one());
    }

    #[test]
    fn constants_are_fixed() {
        let tw = Twist::new(IntMatrix::from_rows(vec![vec![1, 1], vec![0, 1]]).unwrap()).unwrap();
        let c = RationalFunction::constant(2, Rational::from_integer(7.into()));
        assert_eq!(tw.apply(5, &c).unwrap(), c);
    }

    #[test]
    fn shear_twist_on_product_of_variables() {
        let tw = Twist::new(IntMatrix::from_rows(vec![vec![1, 1], vec![0, 1]]).unwrap()).unwrap();
        assert_eq!(tw.apply(1, &mono(&[1, 1])).unwrap(), mono(&[2, 1]));
    }

    #[test]
    fn powers_compose() {
        let tw = Twist::new(IntMatrix::from_rows(vec![vec![2, 1], vec![1, 1]]).unwrap()).unwrap();
        let f = mono(&[1, -2]);
        let a = tw.apply(3, &tw.apply(-5, &f).unwrap()).unwrap();
        assert_eq!(a, tw.apply(-2, &f).unwrap());
    }

    #[test]
    fn non_unimodular_matrix_is_rejected() {
        assert!(Twist::new(IntMatrix::from_rows(vec![vec![2]]).unwrap()).is_err());
    }
}
