use std::fmt;

use num_traits::{One, Zero};

use super::laurent::LaurentPoly;
use super::poly::{poly_gcd, Poly};
use super::Rational;
use crate::error::{Error, Result};

/// Element of the rational function field `Q(t_1, ..., t_k)`.
///
/// Canonical form: numerator and denominator are coprime ordinary polynomials and
/// the denominator has graded-lex leading coefficient 1. Equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn zero(nvars: usize) -> Self {
        RationalFunction { num: Poly::zero(nvars), den: Poly::one(nvars) }
    }

    pub fn one(nvars: usize) -> Self {
        RationalFunction { num: Poly::one(nvars), den: Poly::one(nvars) }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        RationalFunction { num: Poly::constant(nvars, c), den: Poly::one(nvars) }
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars();
        RationalFunction { num: p, den: Poly::one(n) }
    }

    /// Builds `num / den` in canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if num.nvars() != den.nvars() {
            return Err(Error::Mismatch("numerator and denominator variable counts".into()));
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        let n = num.nvars();
        if num.is_zero() {
            return Self::zero(n);
        }
        if let Some(c) = den.as_constant() {
            return RationalFunction { num: num.scale(&c.recip()), den: Poly::one(n) };
        }
        let g = poly_gcd(&num, &den).expect("denominator is nonzero");
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.recip();
            RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    /// A Laurent polynomial as a fraction of ordinary polynomials.
    pub fn from_laurent(p: &LaurentPoly) -> Self {
        let (shift, poly) = p.to_shifted_poly();
        Self::with_monomial_factor(poly, Poly::one(p.nvars()), &shift)
    }

    /// The fraction `n / d` of two Laurent polynomials.
    pub fn from_laurent_fraction(n: &LaurentPoly, d: &LaurentPoly) -> Result<Self> {
        if n.nvars() != d.nvars() {
            return Err(Error::Mismatch("fraction of Laurent polynomials".into()));
        }
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (sn, pn) = n.to_shifted_poly();
        let (sd, pd) = d.to_shifted_poly();
        let shift: Vec<i64> = sn.iter().zip(&sd).map(|(a, b)| a - b).collect();
        Ok(Self::with_monomial_factor(pn, pd, &shift))
    }

    /// `x^shift * num / den`, with negative exponents moved to the denominator.
    fn with_monomial_factor(num: Poly, den: Poly, shift: &[i64]) -> Self {
        let pos: Vec<u32> = shift.iter().map(|&e| e.max(0) as u32).collect();
        let neg: Vec<u32> = shift.iter().map(|&e| (-e).max(0) as u32).collect();
        let num = if pos.iter().any(|&e| e > 0) { num.shift(&pos) } else { num };
        let den = if neg.iter().any(|&e| e > 0) { den.shift(&neg) } else { den };
        Self::normalized(num, den)
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// The Laurent polynomial this is equal to, when the denominator is a monomial.
    pub fn to_laurent(&self) -> Option<LaurentPoly> {
        if !self.den.is_monomial() {
            return None;
        }
        let (e, c) = self.den.terms().next().unwrap();
        let shift: Vec<i64> = e.iter().map(|&x| -(x as i64)).collect();
        Some(LaurentPoly::from_poly(&self.num).shift(&shift).scale(&c.recip()))
    }

    fn check(&self, rhs: &Self) -> Result<()> {
        if self.nvars() != rhs.nvars() {
            return Err(Error::Mismatch(format!(
                "rational functions in {} and {} variables",
                self.nvars(),
                rhs.nvars()
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return Ok(RationalFunction { num, den: self.den.clone() });
            }
            return Ok(Self::normalized(num, self.den.clone()));
        }
        // with g = gcd(b, d): a/b + c/d = (a d' + c b') / (g b' d'), and only g can
        // share factors with the new numerator
        let g = poly_gcd(&self.den, &rhs.den)?;
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d1) + &(&rhs.num * &b1);
        if num.is_zero() {
            return Ok(Self::zero(self.nvars()));
        }
        let den = &(&b1 * &d1) * &g;
        if g.is_one() {
            return Ok(Self::with_monic_den(num, den));
        }
        let h = poly_gcd(&num, &g)?;
        if h.is_one() {
            return Ok(Self::with_monic_den(num, den));
        }
        let num = num.div_exact(&h).expect("gcd divides");
        let den = den.div_exact(&h).expect("gcd divides");
        Ok(Self::with_monic_den(num, den))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.try_add(&rhs.neg())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero(self.nvars()));
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Ok(RationalFunction { num: &self.num * &rhs.num, den: self.den.clone() });
        }
        // cross-cancel so the product is already coprime
        let g1 = poly_gcd(&self.num, &rhs.den)?;
        let g2 = poly_gcd(&rhs.num, &self.den)?;
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d = rhs.den.div_exact(&g1).expect("gcd divides");
        let c = rhs.num.div_exact(&g2).expect("gcd divides");
        let b = self.den.div_exact(&g2).expect("gcd divides");
        Ok(Self::with_monic_den(&a * &c, &b * &d))
    }

    /// Scales a coprime pair so that the denominator is monic.
    fn with_monic_den(num: Poly, den: Poly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.recip();
            RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        self.try_mul(&rhs.inv()?)
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Applies the monomial substitution `t^e -> t^{f(e)}` (which may produce negative
    /// exponents) to numerator and denominator and renormalizes.
    pub fn substitute_monomials(&self, f: impl Fn(&[i64]) -> Vec<i64>) -> Self {
        let n = self.nvars();
        let ln = LaurentPoly::from_poly(&self.num).map_exponents(n, &f);
        let ld = LaurentPoly::from_poly(&self.den).map_exponents(n, &f);
        Self::from_laurent_fraction(&ln, &ld).expect("substitution is an automorphism")
    }

    /// Storage estimate in bytes.
    pub fn byte_size(&self) -> usize {
        self.num.byte_size() + self.den.byte_size()
    }

    /// Evaluates at a rational point; `None` if the denominator vanishes there.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else if self.num.len() == 1 {
            write!(f, "{}/({})", self.num, self.den)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn lp(n: usize, terms: &[(&[i64], i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(n, terms.iter().map(|(e, c)| (e.to_vec(), q(*c)))).unwrap()
    }

    #[test]
    fn fraction_times_its_inverse_is_one() {
        let f = RationalFunction::from_laurent(&lp(2, &[(&[1, 0], 1), (&[0, 2], 3)]));
        let g = RationalFunction::from_laurent(&lp(2, &[(&[1, 1], 2), (&[0, 0], -1)]));
        let fg = f.try_div(&g).unwrap();
        let gf = g.try_div(&f).unwrap();
        assert!(fg.try_mul(&gf).unwrap().is_one());
    }

    #[test]
    fn inverse_of_variable() {
        let t = RationalFunction::from_laurent(&lp(1, &[(&[1], 1)]));
        let tinv = RationalFunction::from_laurent(&lp(1, &[(&[-1], 1)]));
        assert_eq!(t.inv().unwrap(), tinv);
        assert!(tinv.try_mul(&t).unwrap().is_one());
    }

    #[test]
    fn inverting_zero_fails() {
        assert_eq!(RationalFunction::zero(1).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn canonical_form_is_unique() {
        // (t^2 - 1)/(2t - 2) == (t + 1)/2
        let a = RationalFunction::from_laurent_fraction(
            &lp(1, &[(&[2], 1), (&[0], -1)]),
            &lp(1, &[(&[1], 2), (&[0], -2)]),
        )
        .unwrap();
        let b = RationalFunction::from_laurent(&lp(1, &[(&[1], 1), (&[0], 1)]))
            .scale(&Rational::new(1.into(), 2.into()));
        assert_eq!(a, b);
        assert!(a.denom().is_one());
    }

    #[test]
    fn denominator_sign_convention() {
        let a = RationalFunction::from_laurent_fraction(
            &lp(1, &[(&[0], 1)]),
            &lp(1, &[(&[1], -3), (&[0], 1)]),
        )
        .unwrap();
        assert!(a.denom().leading_coeff().is_one());
    }
}
