use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{Monomial, Poly};
use super::Rational;
use crate::error::{Error, Result};
use crate::polytope::IntegralPolytope;

/// Multivariate Laurent polynomial with rational coefficients.
///
/// The support is stored as-is; no monomial normalization is applied.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, Rational>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exps: Vec<i64>, c: Rational) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { nvars, terms }
    }

    pub fn from_terms<I>(nvars: usize, it: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Rational)>,
    {
        let mut p = LaurentPoly::zero(nvars);
        for (e, c) in it {
            if e.len() != nvars {
                return Err(Error::Mismatch(format!(
                    "exponent vector of length {} in a {nvars}-variable polynomial",
                    e.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, e: Vec<i64>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i64]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Exponent vectors carrying nonzero coefficients.
    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms.keys().cloned().collect()
    }

    fn check(&self, rhs: &LaurentPoly) -> Result<()> {
        if self.nvars != rhs.nvars {
            return Err(Error::Mismatch(format!(
                "Laurent polynomials in {} and {} variables",
                self.nvars, rhs.nvars
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &LaurentPoly) -> Result<LaurentPoly> {
        self.check(rhs)?;
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, rhs: &LaurentPoly) -> Result<LaurentPoly> {
        self.check(rhs)?;
        let mut out = LaurentPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    /// Multiplies by the monomial with exponent `e`.
    pub fn shift(&self, e: &[i64]) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.iter().zip(e).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Componentwise minimum exponent of the support.
    pub fn min_exponents(&self) -> Vec<i64> {
        let mut m: Option<Vec<i64>> = None;
        for e in self.terms.keys() {
            match &mut m {
                None => m = Some(e.clone()),
                Some(m) => {
                    for (a, b) in m.iter_mut().zip(e) {
                        *a = (*a).min(*b);
                    }
                }
            }
        }
        m.unwrap_or_else(|| vec![0; self.nvars])
    }

    /// Splits as `x^shift * p` with `p` an ordinary polynomial having no monomial factor.
    pub fn to_shifted_poly(&self) -> (Vec<i64>, Poly) {
        let m = self.min_exponents();
        let p = Poly::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, c)| {
                let ex: Monomial = e.iter().zip(&m).map(|(a, b)| (a - b) as u32).collect();
                (ex, c.clone())
            }),
        );
        (m, p)
    }

    pub fn from_poly(p: &Poly) -> LaurentPoly {
        LaurentPoly {
            nvars: p.nvars(),
            terms: p
                .terms()
                .map(|(e, c)| (e.iter().map(|&x| x as i64).collect(), c.clone()))
                .collect(),
        }
    }

    /// Applies the monomial substitution `x^e -> x^{f(e)}`.
    pub fn map_exponents(&self, nvars: usize, f: impl Fn(&[i64]) -> Vec<i64>) -> LaurentPoly {
        let mut out = LaurentPoly::zero(nvars);
        for (e, c) in &self.terms {
            out.add_term(f(e), c.clone());
        }
        out
    }

    /// Newton polytope: extreme points of the convex hull of the support.
    pub fn newton_polytope(&self) -> Result<IntegralPolytope> {
        if self.is_zero() {
            return Err(Error::Input("Newton polytope of the zero polynomial".into()));
        }
        if self.nvars == 0 {
            return IntegralPolytope::canonicalize(0, vec![vec![]]);
        }
        IntegralPolytope::canonicalize(self.nvars, self.support())
    }
}

/// Newton polytope of a nonzero Laurent polynomial.
pub fn newton_polytope(f: &LaurentPoly) -> Result<IntegralPolytope> {
    f.newton_polytope()
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("variable count mismatch")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(&-rhs).expect("variable count mismatch")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("variable count mismatch")
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self.terms.iter().rev().collect();
        super::poly::fmt_terms(f, terms.into_iter().map(|(e, c)| (e.as_slice(), c)), self.nvars)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn one_plus_t_times_one_minus_t() {
        let a = LaurentPoly::from_terms(1, [(vec![0], q(1)), (vec![1], q(1))]).unwrap();
        let b = LaurentPoly::from_terms(1, [(vec![0], q(1)), (vec![1], q(-1))]).unwrap();
        let want = LaurentPoly::from_terms(1, [(vec![0], q(1)), (vec![2], q(-1))]).unwrap();
        assert_eq!(&a * &b, want);
    }

    #[test]
    fn mismatched_variable_counts_error() {
        let a = LaurentPoly::one(1);
        let b = LaurentPoly::one(2);
        assert!(matches!(a.try_mul(&b), Err(Error::Mismatch(_))));
        assert!(matches!(a.try_add(&b), Err(Error::Mismatch(_))));
    }

    #[test]
    fn newton_polytope_examples() {
        let c = LaurentPoly::constant(2, q(5));
        assert_eq!(c.newton_polytope().unwrap().vertices(), &[vec![0, 0]]);

        let f = LaurentPoly::from_terms(
            2,
            [(vec![0, 0], q(1)), (vec![2, 0], q(1)), (vec![0, 1], q(1))],
        )
        .unwrap();
        assert_eq!(
            f.newton_polytope().unwrap().vertices(),
            &[vec![0, 0], vec![0, 1], vec![2, 0]]
        );

        let g = LaurentPoly::from_terms(1, [(vec![0], q(1)), (vec![1], q(1)), (vec![2], q(1))])
            .unwrap();
        assert_eq!(g.newton_polytope().unwrap().vertices(), &[vec![0], vec![2]]);

        assert!(LaurentPoly::zero(1).newton_polytope().is_err());
    }

    #[test]
    fn newton_polytope_is_translation_covariant() {
        let f = LaurentPoly::from_terms(
            2,
            [(vec![0, 0], q(1)), (vec![1, 3], q(-2)), (vec![2, 1], q(1)), (vec![1, 1], q(7))],
        )
        .unwrap();
        let shifted = f.shift(&[-4, 2]);
        let p = f.newton_polytope().unwrap();
        let ps = shifted.newton_polytope().unwrap();
        assert_eq!(p.translate(&[-4, 2]), ps);
    }
}
