//! Sparse multivariate polynomials over the rationals with nonnegative exponents,
//! plus exact division and a recursive gcd.
//!
//! The gcd views a polynomial as univariate in its highest-index variable with
//! coefficients in the remaining variables, strips contents recursively and runs a
//! primitive pseudo-remainder sequence on the primitive parts.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

pub type Monomial = Vec<u32>;

/// Graded lexicographic comparison of exponent vectors.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn monomial(nvars: usize, exps: Monomial, c: Rational) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { nvars, terms }
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    /// Builds a polynomial from (exponent, coefficient) pairs, merging repeats.
    pub fn from_terms<I>(nvars: usize, it: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Poly::zero(nvars);
        for (e, c) in it {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Monomial, c: Rational) {
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

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(e, c)| c.is_one() && e.iter().all(|&x| x == 0))
    }

    /// The coefficient if this is a constant polynomial (zero included).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Leading term under graded lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    /// Scales so that the graded-lex leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Multiplies by the monomial `x^e`.
    pub fn shift(&self, e: &[u32]) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.iter().zip(e).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Componentwise minimum exponent over the support (zeros for the zero polynomial).
    pub fn min_exponents(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.nvars];
        };
        let mut m = first.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    /// Divides by the monomial `x^e`; every term must be divisible.
    pub fn unshift(&self, e: &[u32]) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.iter().zip(e).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        // BTreeMap order on equal-length vectors is lex, a monomial order.
        let (de, dc) = d.terms.iter().next_back().unwrap();
        let mut r = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((re, rc)) = r.terms.iter().next_back() {
            if re.iter().zip(de).any(|(a, b)| a < b) {
                return None;
            }
            let e: Monomial = re.iter().zip(de).map(|(a, b)| a - b).collect();
            let c = rc / dc;
            r = &r - &d.shift(&e).scale(&c);
            q.add_term(e, c);
        }
        Some(q)
    }

    /// Coefficients as a univariate polynomial in `x_v`; each coefficient is free of `x_v`.
    pub fn coefficients_in(&self, v: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let d = std::mem::replace(&mut e2[v], 0);
            out.entry(d)
                .or_insert_with(|| Poly::zero(self.nvars))
                .add_term(e2, c.clone());
        }
        out
    }

    fn leading_coeff_in(&self, v: usize) -> Poly {
        let d = self.degree_in(v);
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] == d {
                let mut e2 = e.clone();
                e2[v] = 0;
                p.add_term(e2, c.clone());
            }
        }
        p
    }

    /// Storage estimate in bytes of all coefficient numerators and denominators.
    pub fn byte_size(&self) -> usize {
        self.terms
            .values()
            .map(|c| ((c.numer().bits() + c.denom().bits()) as usize).div_ceil(8))
            .sum()
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }
}

fn highest_var(a: &Poly, b: &Poly) -> Option<usize> {
    (0..a.nvars).rev().find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
}

/// Rational multiple with coprime integer coefficients and positive grlex leading coefficient.
fn integer_primitive(p: &Poly) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let mut den = BigInt::one();
    for c in p.terms.values() {
        den = den.lcm(c.denom());
    }
    let mut num = BigInt::zero();
    for c in p.terms.values() {
        num = num.gcd(&(c.numer() * (&den / c.denom())));
    }
    let mut f = Rational::new(den, num);
    if p.leading_coeff().is_negative() {
        f = -f;
    }
    if f.is_one() {
        p.clone()
    } else {
        p.scale(&f)
    }
}

/// Pseudo-remainder of `p` by `q` as univariate polynomials in `x_v`.
fn pseudo_rem(p: &Poly, q: &Poly, v: usize) -> Poly {
    let dq = q.degree_in(v);
    let lq = q.leading_coeff_in(v);
    let mut r = p.clone();
    while !r.is_zero() && r.degree_in(v) >= dq {
        let dr = r.degree_in(v);
        let lr = r.leading_coeff_in(v);
        let mut e = vec![0; p.nvars];
        e[v] = dr - dq;
        r = &(&r * &lq) - &(&lr.shift(&e) * q);
    }
    r
}

fn content_in(p: &Poly, v: usize) -> Poly {
    let mut g = Poly::zero(p.nvars);
    for c in p.coefficients_in(v).values() {
        g = gcd_int(&g, c);
        if g.as_constant().is_some() {
            return Poly::one(p.nvars);
        }
    }
    g
}

fn primitive_part(p: &Poly, v: usize) -> Poly {
    let c = content_in(p, v);
    integer_primitive(&p.div_exact(&c).expect("content divides"))
}

const PRIME: u64 = (1 << 61) - 1;

fn rational_mod(f: &Field, c: &Rational) -> Option<u64> {
    let d = f.reduce(c.denom());
    (d != 0).then(|| f.mul(f.reduce(c.numer()), f.inv(d)))
}

/// Image modulo `f` as a dense univariate polynomial in `x_v`, the other variables
/// evaluated at `point`. `None` when the leading coefficient vanishes.
fn image_mod(f: &Field, p: &Poly, v: usize, point: &[u64]) -> Option<Vec<u64>> {
    let mut out = vec![0u64; p.degree_in(v) as usize + 1];
    for (e, c) in &p.terms {
        let mut t = rational_mod(f, c)?;
        for (i, &k) in e.iter().enumerate() {
            if i != v && k > 0 {
                t = f.mul(t, f.pow(point[i], k as u64));
            }
        }
        let slot = &mut out[e[v] as usize];
        *slot = (*slot + t) % f.0;
    }
    (*out.last().unwrap() != 0).then_some(out)
}

/// Certifies `deg_v gcd(a, b) = 0` by reduction modulo a prime at a pseudo-random
/// point where both leading coefficients survive.
fn coprime_in(a: &Poly, b: &Poly, v: usize) -> bool {
    let f = Field(PRIME);
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    for _ in 0..3 {
        let point: Vec<u64> = (0..a.nvars)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 3) % PRIME
            })
            .collect();
        if let (Some(x), Some(y)) = (image_mod(&f, a, v, &point), image_mod(&f, b, v, &point)) {
            return f.gcd(x, y).len() == 1;
        }
    }
    false
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if let Some(&b) = BASES.iter().find(|&&b| n % b == 0) {
        return n == b;
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    'witness: for &a in &BASES {
        let mut x = 1u64;
        let (mut base, mut e) = (a, d);
        while e > 0 {
            if e & 1 == 1 {
                x = mul(x, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

struct Field(u64);

impl Field {
    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.0 - 2)
    }

    fn reduce(&self, c: &BigInt) -> u64 {
        u64::try_from(c.mod_floor(&BigInt::from(self.0))).expect("residue fits")
    }

    /// Monic gcd of dense polynomials.
    fn gcd(&self, mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
        let p = self.0;
        let trim = |x: &mut Vec<u64>| {
            while x.last() == Some(&0) {
                x.pop();
            }
        };
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let inv = self.inv(*b.last().unwrap());
            while a.len() >= b.len() {
                let f = self.mul(*a.last().unwrap(), inv);
                let shift = a.len() - b.len();
                for (i, &y) in b.iter().enumerate() {
                    a[shift + i] = (a[shift + i] + p - self.mul(f, y)) % p;
                }
                trim(&mut a);
            }
            std::mem::swap(&mut a, &mut b);
        }
        let inv = self.inv(*a.last().unwrap());
        a.iter().map(|&x| self.mul(x, inv)).collect()
    }
}

/// Sparse polynomial over `Z/p`, lex-ordered so the last entry is the leading term.
type ModPoly = BTreeMap<Monomial, u64>;

const MAX_PRIMES: usize = 64;
const EXTRA_POINTS: usize = 8;

fn trim(x: &mut Vec<u64>) {
    while x.last() == Some(&0) {
        x.pop();
    }
}

impl Field {
    fn uni_eval(&self, x: &[u64], a: u64) -> u64 {
        x.iter().rev().fold(0, |acc, &c| (self.mul(acc, a) + c) % self.0)
    }

    fn uni_mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        if x.is_empty() || y.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; x.len() + y.len() - 1];
        for (i, &a) in x.iter().enumerate() {
            for (j, &b) in y.iter().enumerate() {
                out[i + j] = (out[i + j] + self.mul(a, b)) % self.0;
            }
        }
        out
    }

    fn uni_div_exact(&self, x: &[u64], d: &[u64]) -> Vec<u64> {
        let mut r = x.to_vec();
        trim(&mut r);
        if r.is_empty() {
            return r;
        }
        let inv = self.inv(*d.last().unwrap());
        let mut q = vec![0; r.len() + 1 - d.len()];
        while r.len() >= d.len() {
            let c = self.mul(*r.last().unwrap(), inv);
            let shift = r.len() - d.len();
            q[shift] = c;
            for (i, &y) in d.iter().enumerate() {
                r[shift + i] = (r[shift + i] + self.0 - self.mul(c, y)) % self.0;
            }
            trim(&mut r);
        }
        q
    }

    fn reduce_poly(&self, p: &Poly) -> ModPoly {
        p.terms
            .iter()
            .map(|(e, c)| (e.clone(), self.reduce(c.numer())))
            .filter(|(_, c)| *c != 0)
            .collect()
    }

    fn sub_scaled(&self, acc: &mut ModPoly, e: &[u32], c: u64, d: &ModPoly) {
        for (de, dc) in d {
            let m: Monomial = de.iter().zip(e).map(|(a, b)| a + b).collect();
            let t = (acc.get(&m).copied().unwrap_or(0) + self.0 - self.mul(c, *dc)) % self.0;
            if t == 0 {
                acc.remove(&m);
            } else {
                acc.insert(m, t);
            }
        }
    }

    fn mp_div_exact(&self, a: &ModPoly, d: &ModPoly) -> bool {
        let (de, dc) = d.iter().next_back().expect("nonzero divisor");
        let inv = self.inv(*dc);
        let mut r = a.clone();
        while let Some((re, rc)) = r.iter().next_back() {
            if re.iter().zip(de).any(|(a, b)| a < b) {
                return false;
            }
            let e: Monomial = re.iter().zip(de).map(|(a, b)| a - b).collect();
            let c = self.mul(*rc, inv);
            self.sub_scaled(&mut r, &e, c, d);
        }
        true
    }

    /// Coefficients in `Z/p[x_{k-1}]`, keyed by the monomial with `x_{k-1}` removed.
    fn split(&self, a: &ModPoly, k: usize) -> BTreeMap<Monomial, Vec<u64>> {
        let mut out: BTreeMap<Monomial, Vec<u64>> = BTreeMap::new();
        for (e, &c) in a {
            let mut key = e.clone();
            let d = std::mem::replace(&mut key[k - 1], 0) as usize;
            let slot = out.entry(key).or_default();
            if slot.len() <= d {
                slot.resize(d + 1, 0);
            }
            slot[d] = c;
        }
        out
    }

    fn join(&self, parts: &BTreeMap<Monomial, Vec<u64>>, k: usize) -> ModPoly {
        let mut out = ModPoly::new();
        for (key, coeffs) in parts {
            for (d, &c) in coeffs.iter().enumerate() {
                if c != 0 {
                    let mut e = key.clone();
                    e[k - 1] = d as u32;
                    out.insert(e, c);
                }
            }
        }
        out
    }

    fn uni_gcd_all<'a>(&self, xs: impl Iterator<Item = &'a Vec<u64>>) -> Vec<u64> {
        let mut g: Vec<u64> = Vec::new();
        for x in xs {
            g = self.gcd(g, x.clone());
            if g.len() == 1 {
                break;
            }
        }
        g
    }

    /// Gcd in `Z/p[x_0, ..., x_{k-1}]` by evaluating `x_{k-1}` and interpolating,
    /// up to a scalar. `None` when no answer was certified.
    fn pgcd(&self, a: &ModPoly, b: &ModPoly, k: usize) -> Option<ModPoly> {
        let nvars = a.keys().next()?.len();
        if k == 1 {
            let dense = |x: &ModPoly| {
                let mut v = vec![0; x.keys().next_back().map_or(0, |e| e[0] as usize + 1)];
                for (e, &c) in x {
                    v[e[0] as usize] = c;
                }
                v
            };
            let g = self.gcd(dense(a), dense(b));
            let mut out = ModPoly::new();
            for (d, &c) in g.iter().enumerate() {
                if c != 0 {
                    let mut e = vec![0; nvars];
                    e[0] = d as u32;
                    out.insert(e, c);
                }
            }
            return Some(out);
        }
        let (mut sa, mut sb) = (self.split(a, k), self.split(b, k));
        let ca = self.uni_gcd_all(sa.values());
        let cb = self.uni_gcd_all(sb.values());
        let content = self.gcd(ca.clone(), cb.clone());
        for x in sa.values_mut() {
            *x = self.uni_div_exact(x, &ca);
        }
        for x in sb.values_mut() {
            *x = self.uni_div_exact(x, &cb);
        }
        let (a, b) = (self.join(&sa, k), self.join(&sb, k));
        let lca = sa.values().next_back()?.clone();
        let lcb = sb.values().next_back()?.clone();
        let gamma = self.gcd(lca.clone(), lcb.clone());
        let gamma = self.uni_mul(&gamma, &[self.inv(*gamma.last()?)]);
        let deg = |s: &BTreeMap<Monomial, Vec<u64>>| s.values().map(|x| x.len().saturating_sub(1)).max().unwrap_or(0);
        let bound = gamma.len() - 1 + deg(&sa).min(deg(&sb));
        let lift = |g: ModPoly| -> ModPoly {
            let mut parts = self.split(&g, k);
            for x in parts.values_mut() {
                *x = self.uni_mul(x, &content);
            }
            self.join(&parts, k)
        };
        let mut interp: Option<(Monomial, BTreeMap<Monomial, Vec<u64>>)> = None;
        let mut q: Vec<u64> = vec![1];
        let mut points = 0;
        let mut alpha = 0u64;
        while alpha < self.0 {
            alpha += 1;
            if self.uni_eval(&lca, alpha) == 0 || self.uni_eval(&lcb, alpha) == 0 {
                continue;
            }
            let eval = |x: &BTreeMap<Monomial, Vec<u64>>| -> ModPoly {
                x.iter()
                    .map(|(e, c)| (e.clone(), self.uni_eval(c, alpha)))
                    .filter(|(_, c)| *c != 0)
                    .collect()
            };
            let image = self.pgcd(&eval(&sa), &eval(&sb), k - 1)?;
            let (lead, lc) = image.iter().next_back().map(|(e, c)| (e.clone(), *c))?;
            if lead.iter().all(|&x| x == 0) {
                let mut one = ModPoly::new();
                one.insert(vec![0; nvars], 1);
                return Some(lift(one));
            }
            let scale = self.mul(self.uni_eval(&gamma, alpha), self.inv(lc));
            match &mut interp {
                Some((l, _)) if lead > *l => continue,
                Some((l, h)) if lead == *l => {
                    let f = self.inv(self.uni_eval(&q, alpha));
                    let keys: Vec<Monomial> = h.keys().chain(image.keys()).cloned().collect();
                    for key in keys {
                        let want = self.mul(image.get(&key).copied().unwrap_or(0), scale);
                        let slot = h.entry(key).or_default();
                        let have = self.uni_eval(slot, alpha);
                        let corr = self.mul((want + self.0 - have) % self.0, f);
                        let add = self.uni_mul(&q, &[corr]);
                        if slot.len() < add.len() {
                            slot.resize(add.len(), 0);
                        }
                        for (s, a) in slot.iter_mut().zip(&add) {
                            *s = (*s + a) % self.0;
                        }
                        trim(slot);
                    }
                }
                _ => {
                    let h = image.iter().map(|(e, &c)| (e.clone(), vec![self.mul(c, scale)])).collect();
                    interp = Some((lead, h));
                    q = vec![1];
                    points = 0;
                }
            }
            q = self.uni_mul(&q, &[self.0 - alpha, 1]);
            points += 1;
            if points > bound {
                let (_, h) = interp.as_ref()?;
                let mut h = h.clone();
                h.retain(|_, v| !v.is_empty());
                let c = self.uni_gcd_all(h.values());
                for x in h.values_mut() {
                    *x = self.uni_div_exact(x, &c);
                }
                let cand = self.join(&h, k);
                if self.mp_div_exact(&a, &cand) && self.mp_div_exact(&b, &cand) {
                    return Some(lift(cand));
                }
                if points > bound + EXTRA_POINTS {
                    return None;
                }
            }
        }
        None
    }
}

/// Gcd by modular images in each variable, Chinese remaindering over 61-bit primes,
/// accepted only once the candidate divides both inputs. `None` asks the caller to
/// fall back to the remainder sequence.
fn modular_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let (a, b) = (integer_primitive(a), integer_primitive(b));
    let n = a.nvars;
    let k = highest_var(&a, &b)? + 1;
    let (la, lb) = (a.terms.values().next_back()?.numer().clone(), b.terms.values().next_back()?.numer().clone());
    let gamma = la.gcd(&lb);
    let mut modulus = BigInt::one();
    let mut acc: Option<(Monomial, BTreeMap<Monomial, BigInt>)> = None;
    let mut previous: Option<BTreeMap<Monomial, BigInt>> = None;
    let mut prime = PRIME + 2;
    let mut used = 0;
    while used < MAX_PRIMES {
        prime -= 2;
        while !is_prime(prime) {
            prime -= 2;
        }
        let f = Field(prime);
        if f.reduce(&la) == 0 || f.reduce(&lb) == 0 {
            continue;
        }
        used += 1;
        let g = f.pgcd(&f.reduce_poly(&a), &f.reduce_poly(&b), k)?;
        let (lead, lc) = g.iter().next_back().map(|(e, c)| (e.clone(), *c))?;
        if lead.iter().all(|&x| x == 0) {
            return Some(Poly::one(n));
        }
        let scale = f.mul(f.reduce(&gamma), f.inv(lc));
        let p_big = BigInt::from(prime);
        match &mut acc {
            Some((l, _)) if lead > *l => continue,
            Some((l, h)) if lead == *l => {
                let m_inv = BigInt::from(f.inv(f.reduce(&modulus)));
                let keys: Vec<Monomial> = h.keys().chain(g.keys()).cloned().collect();
                for key in keys {
                    let r = BigInt::from(f.mul(g.get(&key).copied().unwrap_or(0), scale));
                    let x = h.entry(key).or_insert_with(BigInt::zero);
                    let t = ((r - &*x) * &m_inv).mod_floor(&p_big);
                    *x += &modulus * t;
                }
                modulus *= &p_big;
            }
            _ => {
                let h = g.iter().map(|(e, &c)| (e.clone(), BigInt::from(f.mul(c, scale)))).collect();
                acc = Some((lead, h));
                modulus = p_big;
                previous = None;
                continue;
            }
        }
        let half = &modulus >> 1u32;
        let symmetric: BTreeMap<Monomial, BigInt> = acc
            .as_ref()?
            .1
            .iter()
            .map(|(e, x)| (e.clone(), if *x > half { x - &modulus } else { x.clone() }))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        if previous.as_ref() == Some(&symmetric) {
            let cand = integer_primitive(&Poly::from_terms(
                n,
                symmetric.iter().map(|(e, c)| (e.clone(), Rational::from_integer(c.clone()))),
            ));
            let divides = a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some();
            return divides.then_some(cand);
        }
        previous = Some(symmetric);
    }
    None
}

/// Gcd up to a rational factor, returned in [`integer_primitive`] form.
fn gcd_int(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return integer_primitive(b);
    }
    if b.is_zero() {
        return integer_primitive(a);
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one(a.nvars);
    }
    let ma = a.min_exponents();
    let mb = b.min_exponents();
    let m: Monomial = ma.iter().zip(&mb).map(|(x, y)| *x.min(y)).collect();
    if a.is_monomial() || b.is_monomial() {
        return Poly::monomial(a.nvars, m, Rational::one());
    }
    if ma.iter().chain(&mb).any(|&e| e > 0) {
        return gcd_int(&a.unshift(&ma), &b.unshift(&mb)).shift(&m);
    }
    let Some(v) = highest_var(a, b) else {
        return Poly::one(a.nvars);
    };
    if a.degree_in(v) == 0 {
        return gcd_int(a, &content_in(b, v));
    }
    if b.degree_in(v) == 0 {
        return gcd_int(&content_in(a, v), b);
    }
    if coprime_in(a, b, v) {
        // the gcd is free of x_v, so it divides every coefficient in x_v
        let mut g = Poly::zero(a.nvars);
        for c in a.coefficients_in(v).values().chain(b.coefficients_in(v).values()) {
            g = gcd_int(&g, c);
            if g.as_constant().is_some() {
                return Poly::one(a.nvars);
            }
        }
        return g;
    }
    if let Some(g) = modular_gcd(a, b) {
        return g;
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd_int(&ca, &cb);
    let mut p = integer_primitive(&a.div_exact(&ca).expect("content divides"));
    let mut q = integer_primitive(&b.div_exact(&cb).expect("content divides"));
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = pseudo_rem(&p, &q, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            q = Poly::one(a.nvars);
            break;
        }
        p = q;
        q = primitive_part(&r, v);
    }
    integer_primitive(&(&c * &primitive_part(&q, v)))
}

/// Greatest common divisor, normalized to graded-lex leading coefficient 1.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Result<Poly> {
    if a.nvars != b.nvars {
        return Err(Error::Mismatch(format!(
            "gcd of polynomials in {} and {} variables",
            a.nvars, b.nvars
        )));
    }
    if a.is_zero() && b.is_zero() {
        return Err(Error::Input("gcd(0, 0) is undefined".into()));
    }
    Ok(gcd_int(&integer_primitive(a), &integer_primitive(b)).monic())
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn fmt_monomial<T: fmt::Display + PartialEq + Zero + One + Copy>(
    f: &mut fmt::Formatter<'_>,
    e: &[T],
    names: &[&str],
) -> fmt::Result {
    let mut first = true;
    for (i, &k) in e.iter().enumerate() {
        if k.is_zero() {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        let name = names.get(i).copied().unwrap_or("x");
        if names.len() <= i {
            write!(f, "{name}{}", i + 1)?;
        } else {
            write!(f, "{name}")?;
        }
        if !k.is_one() {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

pub(crate) fn var_names(n: usize) -> Vec<String> {
    match n {
        1 => vec!["t".into()],
        _ => (1..=n).map(|i| format!("t{i}")).collect(),
    }
}

pub(crate) fn fmt_terms<'a, T>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a [T], &'a Rational)>,
    nvars: usize,
) -> fmt::Result
where
    T: fmt::Display + PartialEq + Zero + One + Copy + 'a,
{
    let names = var_names(nvars);
    let names: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut first = true;
    for (e, c) in terms {
        let is_const = e.iter().all(|k| k.is_zero());
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        first = false;
        if is_const {
            write!(f, "{mag}")?;
        } else {
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            fmt_monomial(f, e, &names)?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex_cmp(b.0, a.0));
        fmt_terms(f, terms.into_iter().map(|(e, c)| (e.as_slice(), c)), self.nvars)
    }
}
