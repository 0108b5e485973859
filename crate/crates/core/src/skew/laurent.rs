use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::twist::Twist;
use crate::error::{Error, Result};
use crate::ring::{Rational, RationalFunction};

/// Element `sum_m f_m u^m` of the twisted Laurent ring `Q(t)_sigma[u, u^-1]`, with
/// multiplication rule `u^m f = sigma^m(f) u^m`.
#[derive(Clone)]
pub struct SkewLaurentPoly {
    twist: Arc<Twist>,
    coeffs: BTreeMap<i64, RationalFunction>,
}

impl PartialEq for SkewLaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.twist, &other.twist) || self.twist == other.twist)
            && self.coeffs == other.coeffs
    }
}

impl Eq for SkewLaurentPoly {}

impl SkewLaurentPoly {
    pub fn zero(twist: &Arc<Twist>) -> Self {
        SkewLaurentPoly { twist: twist.clone(), coeffs: BTreeMap::new() }
    }

    pub fn one(twist: &Arc<Twist>) -> Self {
        Self::constant(twist, RationalFunction::one(twist.k()))
    }

    pub fn constant(twist: &Arc<Twist>, f: RationalFunction) -> Self {
        Self::monomial(twist, f, 0)
    }

    /// `f * u^m`.
    pub fn monomial(twist: &Arc<Twist>, f: RationalFunction, m: i64) -> Self {
        assert_eq!(f.nvars(), twist.k(), "coefficient field mismatch");
        let mut coeffs = BTreeMap::new();
        if !f.is_zero() {
            coeffs.insert(m, f);
        }
        SkewLaurentPoly { twist: twist.clone(), coeffs }
    }

    /// The variable `u`.
    pub fn u(twist: &Arc<Twist>) -> Self {
        Self::monomial(twist, RationalFunction::one(twist.k()), 1)
    }

    pub fn from_coeffs<I>(twist: &Arc<Twist>, it: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, RationalFunction)>,
    {
        let mut out = Self::zero(twist);
        for (m, f) in it {
            if f.nvars() != twist.k() {
                return Err(Error::Mismatch("coefficient field mismatch".into()));
            }
            out.add_term(m, &f)?;
        }
        Ok(out)
    }

    pub(crate) fn add_term(&mut self, m: i64, f: &RationalFunction) -> Result<()> {
        if f.is_zero() {
            return Ok(());
        }
        match self.coeffs.get(&m) {
            None => {
                self.coeffs.insert(m, f.clone());
            }
            Some(g) => {
                let s = g.try_add(f)?;
                if s.is_zero() {
                    self.coeffs.remove(&m);
                } else {
                    self.coeffs.insert(m, s);
                }
            }
        }
        Ok(())
    }

    pub fn twist(&self) -> &Arc<Twist> {
        &self.twist
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &RationalFunction)> {
        self.coeffs.iter().map(|(&m, f)| (m, f))
    }

    pub fn coeff(&self, m: i64) -> RationalFunction {
        self.coeffs.get(&m).cloned().unwrap_or_else(|| RationalFunction::zero(self.twist.k()))
    }

    /// Number of nonzero coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn low(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Largest exponent with a nonzero coefficient.
    pub fn high(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// `n_+ - n_-` for a nonzero element.
    pub fn degree(&self) -> Result<usize> {
        match (self.low(), self.high()) {
            (Some(lo), Some(hi)) => Ok((hi - lo) as usize),
            _ => Err(Error::Input("degree of the zero element".into())),
        }
    }

    /// True for the units `f u^m` with `f != 0`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    fn same_ring(&self, rhs: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.twist, &rhs.twist) || self.twist == rhs.twist {
            Ok(())
        } else {
            Err(Error::Mismatch("twisted Laurent polynomials over different twists".into()))
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.same_ring(rhs)?;
        let mut out = self.clone();
        for (&m, f) in &rhs.coeffs {
            out.add_term(m, f)?;
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.try_add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        SkewLaurentPoly {
            twist: self.twist.clone(),
            coeffs: self.coeffs.iter().map(|(&m, f)| (m, f.neg())).collect(),
        }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.same_ring(rhs)?;
        let mut out = Self::zero(&self.twist);
        for (&i, f) in &self.coeffs {
            for (&j, g) in &rhs.coeffs {
                let moved = self.twist.apply(i, g)?;
                out.add_term(i + j, &f.try_mul(&moved)?)?;
            }
        }
        Ok(out)
    }

    /// Left multiplication by the unit `f u^m`.
    pub fn left_mul_monomial(&self, f: &RationalFunction, m: i64) -> Result<Self> {
        Self::monomial(&self.twist, f.clone(), m).try_mul(self)
    }

    /// Right multiplication by the unit `f u^m`.
    pub fn right_mul_monomial(&self, f: &RationalFunction, m: i64) -> Result<Self> {
        self.try_mul(&Self::monomial(&self.twist, f.clone(), m))
    }

    /// Multiplicative inverse of a unit `f u^m`.
    pub fn unit_inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::Input("element is not a unit".into()));
        }
        let (&m, f) = self.coeffs.iter().next().unwrap();
        // (f u^m)^-1 = u^-m f^-1 = sigma^-m(f^-1) u^-m
        let g = self.twist.apply(-m, &f.inv()?)?;
        Ok(Self::monomial(&self.twist, g, -m))
    }

    /// Division with remainder `a = q * p + r` with `deg r < deg p` (or `r = 0`).
    pub fn left_div_rem(a: &Self, p: &Self) -> Result<(Self, Self)> {
        a.same_ring(p)?;
        let (Some(plo), Some(phi)) = (p.low(), p.high()) else {
            return Err(Error::DivisionByZero);
        };
        let pdeg = phi - plo;
        let plead = &p.coeffs[&phi];
        let mut q = Self::zero(&a.twist);
        let mut r = a.clone();
        while let (Some(rlo), Some(rhi)) = (r.low(), r.high()) {
            if rhi - rlo < pdeg {
                break;
            }
            let shift = rhi - phi;
            // c u^shift * plead u^phi = c sigma^shift(plead) u^rhi
            let c = r.coeffs[&rhi].try_div(&a.twist.apply(shift, plead)?)?;
            let term = Self::monomial(&a.twist, c, shift);
            r = r.try_sub(&term.try_mul(p)?)?;
            q = q.try_add(&term)?;
        }
        Ok((q, r))
    }

    /// Division with remainder `a = p * q + r` with `deg r < deg p` (or `r = 0`).
    pub fn right_div_rem(a: &Self, p: &Self) -> Result<(Self, Self)> {
        a.same_ring(p)?;
        let (Some(plo), Some(phi)) = (p.low(), p.high()) else {
            return Err(Error::DivisionByZero);
        };
        let pdeg = phi - plo;
        let plead = &p.coeffs[&phi];
        let mut q = Self::zero(&a.twist);
        let mut r = a.clone();
        while let (Some(rlo), Some(rhi)) = (r.low(), r.high()) {
            if rhi - rlo < pdeg {
                break;
            }
            let shift = rhi - phi;
            // plead u^phi * c u^shift = plead sigma^phi(c) u^rhi
            let c = a.twist.apply(-phi, &r.coeffs[&rhi].try_div(plead)?)?;
            let term = Self::monomial(&a.twist, c, shift);
            r = r.try_sub(&p.try_mul(&term)?)?;
            q = q.try_add(&term)?;
        }
        Ok((q, r))
    }

    /// Storage estimate in bytes over all coefficients.
    pub fn byte_size(&self) -> usize {
        self.coeffs.values().map(|f| f.byte_size()).sum()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.twist);
        }
        SkewLaurentPoly {
            twist: self.twist.clone(),
            coeffs: self.coeffs.iter().map(|(&m, f)| (m, f.scale(c))).collect(),
        }
    }
}

/// Free-standing product, as in `skew_mul(x, y)`.
pub fn skew_mul(x: &SkewLaurentPoly, y: &SkewLaurentPoly) -> Result<SkewLaurentPoly> {
    x.try_mul(y)
}

impl fmt::Debug for SkewLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SkewLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&m, c) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match m {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*u")?,
                _ => write!(f, "({c})*u^{m}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::IntMatrix;
    use crate::ring::LaurentPoly;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn rf(k: usize, terms: &[(&[i64], i64)]) -> RationalFunction {
        RationalFunction::from_laurent(
            &LaurentPoly::from_terms(k, terms.iter().map(|(e, c)| (e.to_vec(), q(*c)))).unwrap(),
        )
    }

    fn klein() -> Arc<Twist> {
        Twist::new(IntMatrix::from_rows(vec![vec![-1]]).unwrap()).unwrap()
    }

    #[test]
    fn klein_twist_square() {
        let tw = klein();
        let t = SkewLaurentPoly::constant(&tw, rf(1, &[(&[1], 1)]));
        let x = t.try_add(&SkewLaurentPoly::u(&tw)).unwrap();
        let sq = x.try_mul(&x).unwrap();
        let want = SkewLaurentPoly::from_coeffs(
            &tw,
            [
                (0, rf(1, &[(&[2], 1)])),
                (1, rf(1, &[(&[1], 1), (&[-1], 1)])),
                (2, RationalFunction::one(1)),
            ],
        )
        .unwrap();
        assert_eq!(sq, want);
    }

    #[test]
    fn degree_examples() {
        let tw = Twist::identity(0);
        let x = SkewLaurentPoly::from_coeffs(
            &tw,
            [(2, RationalFunction::constant(0, q(3))), (-1, RationalFunction::one(0))],
        )
        .unwrap();
        assert_eq!(x.degree().unwrap(), 3);
        assert_eq!(SkewLaurentPoly::one(&tw).degree().unwrap(), 0);
        assert!(SkewLaurentPoly::zero(&tw).degree().is_err());
    }

    #[test]
    fn conjugation_by_u_is_the_twist() {
        let tw = Twist::new(IntMatrix::from_rows(vec![vec![2, 1], vec![1, 1]]).unwrap()).unwrap();
        let f = rf(2, &[(&[1, 0], 1), (&[0, -1], 3), (&[0, 0], -2)]);
        let u = SkewLaurentPoly::u(&tw);
        let uinv = u.unit_inverse().unwrap();
        let lhs = u
            .try_mul(&SkewLaurentPoly::constant(&tw, f.clone()))
            .unwrap()
            .try_mul(&uinv)
            .unwrap();
        assert_eq!(lhs, SkewLaurentPoly::constant(&tw, tw.apply(1, &f).unwrap()));
    }

    #[test]
    fn twist_mismatch_is_an_error() {
        let a = SkewLaurentPoly::one(&klein());
        let b = SkewLaurentPoly::one(&Twist::identity(1));
        assert!(matches!(a.try_mul(&b), Err(Error::Mismatch(_))));
    }

    #[test]
    fn division_with_remainder_both_sides() {
        let tw = klein();
        let a = SkewLaurentPoly::from_coeffs(
            &tw,
            [(3, rf(1, &[(&[1], 1)])), (0, rf(1, &[(&[0], 2)])), (-1, rf(1, &[(&[2], 1)]))],
        )
        .unwrap();
        let p = SkewLaurentPoly::from_coeffs(
            &tw,
            [(1, rf(1, &[(&[1], 1), (&[0], 1)])), (0, rf(1, &[(&[-1], 1)]))],
        )
        .unwrap();
        let (ql, rl) = SkewLaurentPoly::left_div_rem(&a, &p).unwrap();
        assert!(rl.is_zero() || rl.degree().unwrap() < p.degree().unwrap());
        assert_eq!(ql.try_mul(&p).unwrap().try_add(&rl).unwrap(), a);
        let (qr, rr) = SkewLaurentPoly::right_div_rem(&a, &p).unwrap();
        assert!(rr.is_zero() || rr.degree().unwrap() < p.degree().unwrap());
        assert_eq!(p.try_mul(&qr).unwrap().try_add(&rr).unwrap(), a);
    }
}
