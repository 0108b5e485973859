//! Slow, independent reference computations used by the self-test and the test suite.
//!
//! Nothing here shares code paths with the main pipeline beyond the ring arithmetic:
//! cokernels come from truncated linear algebra instead of diagonalization, Fox
//! derivatives from the recursive product rule, determinants from Laplace expansion.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::polytope::IntegralPolytope;
use crate::presentation::{FreeWord, Letter, QuotientMap};
use crate::reduction::SkewMatrix;
use crate::ring::{GroupElement, GroupRingElement, RationalFunction};
use crate::skew::{SkewLaurentPoly, Twist};

/// Rank of a matrix over the field of rational functions by Gaussian elimination.
pub fn rank_over_field(rows: &[Vec<RationalFunction>]) -> Result<usize> {
    let mut m: Vec<Vec<RationalFunction>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..m.len())
            .filter(|&i| !m[i][col].is_zero())
            .min_by_key(|&i| m[i][col].byte_size());
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        let inv = m[rank][col].inv()?;
        let prow = m[rank].clone();
        for i in rank + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].try_mul(&inv)?;
            for j in col..ncols {
                if !prow[j].is_zero() {
                    m[i][j] = m[i][j].try_sub(&f.try_mul(&prow[j])?)?;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    Ok(rank)
}

const P: u64 = (1 << 61) - 1;

fn mul_p(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn inv_p(a: u64) -> u64 {
    let (mut acc, mut base, mut e) = (1, a, P - 2);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_p(acc, base);
        }
        base = mul_p(base, base);
        e >>= 1;
    }
    acc
}

fn rational_at(c: &crate::ring::Rational) -> Option<u64> {
    let p = BigInt::from(P);
    let n = u64::try_from(c.numer().mod_floor(&p)).ok()?;
    let d = u64::try_from(c.denom().mod_floor(&p)).ok()?;
    (d != 0).then(|| mul_p(n, inv_p(d)))
}

fn poly_at(f: &crate::ring::Poly, point: &[u64]) -> Option<u64> {
    let mut acc = 0;
    for (e, c) in f.terms() {
        let mut t = rational_at(c)?;
        for (&x, &k) in point.iter().zip(e) {
            for _ in 0..k {
                t = mul_p(t, x);
            }
        }
        acc = (acc + t) % P;
    }
    Some(acc)
}

/// Value modulo `2^61 - 1` at `point`, or `None` where the denominator vanishes.
fn specialize(f: &RationalFunction, point: &[u64]) -> Option<u64> {
    let d = poly_at(f.denom(), point)?;
    (d != 0).then(|| Some(mul_p(poly_at(f.numer(), point)?, inv_p(d))))?
}

fn rank_mod_p(mut m: Vec<Vec<u64>>) -> usize {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][col] != 0) else { continue };
        m.swap(rank, p);
        let inv = inv_p(m[rank][col]);
        let prow = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[col] == 0 {
                continue;
            }
            let f = mul_p(row[col], inv);
            for j in col..ncols {
                row[j] = (row[j] + P - mul_p(f, prow[j])) % P;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Ranks over the function field, estimated at a pseudo-random point modulo a 61-bit prime.
/// A rank drop needs the point to hit a nonzero minor's zero set, which has probability at
/// most its degree over `2^61`.
fn specialized_ranks(blocks: &[&[Vec<RationalFunction>]], nvars: usize) -> Result<Vec<usize>> {
    let mut state: u64 = 0x2545_F491_4F6C_DD1D;
    for _ in 0..8 {
        let point: Vec<u64> = (0..nvars)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state % P
            })
            .collect();
        let values: Option<Vec<Vec<Vec<u64>>>> = blocks
            .iter()
            .map(|b| b.iter().map(|r| r.iter().map(|f| specialize(f, &point)).collect()).collect())
            .collect();
        if let Some(v) = values {
            return Ok(v.into_iter().map(rank_mod_p).collect());
        }
    }
    Err(Error::Input("no admissible specialization point found".into()))
}

/// Outcome of the truncated cokernel computation at two window sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedCoker {
    /// `None` when the map `x -> x M` has a kernel.
    pub coker: Option<usize>,
    /// Whether windows `N` and `N + 1` gave the same answer.
    pub stable: bool,
}

fn coker_at(m: &SkewMatrix, n: i64) -> Result<Option<usize>> {
    let twist = m.twist().clone();
    let nv = twist.k();
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut lo = 0i64;
    let mut hi = 0i64;
    for r in m.rows() {
        for x in r {
            if let (Some(a), Some(b)) = (x.low(), x.high()) {
                lo = lo.min(a);
                hi = hi.max(b);
            }
        }
    }
    let c = lo.abs().max(hi.abs());
    // preimages of window vectors can reach past the window by the degree of the adjugate
    let reach = c * (2 * rows.max(1) as i64 - 1);
    let (pmin, pmax) = (-n - reach - c, n + reach + c);
    let width = (pmax - pmin + 1) as usize;
    let idx = |col: usize, p: i64| col * width + (p - pmin) as usize;
    let mut v = Vec::new();
    for j in -n - reach..=n + reach {
        for i in 0..rows {
            let mut row = vec![RationalFunction::zero(nv); cols * width];
            for (col, x) in m.rows()[i].iter().enumerate() {
                for (e, f) in x.coeffs() {
                    row[idx(col, j + e)] = twist.apply(j, f)?;
                }
            }
            v.push(row);
        }
    }
    let outside: Vec<Vec<RationalFunction>> = v
        .iter()
        .map(|row| {
            (0..cols)
                .flat_map(|col| (pmin..=pmax).filter(|p| p.abs() > n).map(move |p| (col, p)))
                .map(|(col, p)| row[idx(col, p)].clone())
                .collect()
        })
        .collect();
    let [full, out_rank] = specialized_ranks(&[&v, &outside], nv)?[..] else { unreachable!() };
    if full < v.len() {
        return Ok(None);
    }
    let window = cols * (2 * n as usize + 1);
    Ok(Some(window + out_rank - full))
}

/// Multiplies each row on the left by a power of `u` so that its exponents straddle zero.
fn centered(m: &SkewMatrix) -> Result<SkewMatrix> {
    let twist = m.twist();
    let one = RationalFunction::constant(twist.k(), crate::ring::int(1));
    let rows = m
        .rows()
        .iter()
        .map(|r| {
            let lo = r.iter().filter_map(|x| x.low()).min().unwrap_or(0);
            let hi = r.iter().filter_map(|x| x.high()).max().unwrap_or(0);
            let unit = SkewLaurentPoly::monomial(twist, one.clone(), -(lo + (hi - lo).div_euclid(2)));
            r.iter().map(|x| unit.try_mul(x)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SkewMatrix::from_rows(twist, rows)
}

/// `dim_K coker(x -> x M)` for `M` over `K_sigma[u, u^-1]`, computed by restricting to
/// the window of `u`-degrees `[-n, n]` and comparing with `[-n-1, n+1]`. Rows are first
/// recentred by units, so `n` of about half the degree of the matrix suffices.
pub fn truncated_coker(m: &SkewMatrix, n: usize) -> Result<TruncatedCoker> {
    let m = &centered(m)?;
    let a = coker_at(m, n as i64)?;
    let b = coker_at(m, n as i64 + 1)?;
    Ok(TruncatedCoker { coker: b, stable: a == b })
}

fn letter_image(mu: &QuotientMap, l: Letter) -> Result<GroupElement> {
    let g = mu.image(l.generator);
    if l.inverse {
        mu.group().inv(g)
    } else {
        Ok(g.clone())
    }
}

fn fox_rec(
    letters: &[Letter],
    g: usize,
    mu: &QuotientMap,
) -> Result<(GroupRingElement, GroupElement)> {
    let group = mu.group();
    match letters {
        [] => Ok((GroupRingElement::zero(group), group.identity())),
        [l] => {
            let img = letter_image(mu, *l)?;
            let d = if l.generator != g {
                GroupRingElement::zero(group)
            } else if l.inverse {
                GroupRingElement::basis(group, img.clone()).neg()
            } else {
                GroupRingElement::one(group)
            };
            Ok((d, img))
        }
        _ => {
            let (left, right) = letters.split_at(letters.len() / 2);
            let (da, a) = fox_rec(left, g, mu)?;
            let (db, b) = fox_rec(right, g, mu)?;
            let shifted = GroupRingElement::basis(group, a.clone()).try_mul(&db)?;
            Ok((da.try_add(&shifted)?, group.mul(&a, &b)?))
        }
    }
}

/// Fox derivative from `d(uv) = du + u dv`, splitting the word in halves.
pub fn fox_derivative_recursive(w: &FreeWord, g: usize, mu: &QuotientMap) -> Result<GroupRingElement> {
    Ok(fox_rec(w.letters(), g, mu)?.0)
}

/// Checks `sum_i dw/dx_i (mu(x_i) - 1) = mu(w) - 1`.
pub fn fundamental_identity(w: &FreeWord, grad: &[GroupRingElement], mu: &QuotientMap) -> Result<bool> {
    let group = mu.group();
    let one = GroupRingElement::one(group);
    let mut lhs = GroupRingElement::zero(group);
    for (i, d) in grad.iter().enumerate() {
        let x = GroupRingElement::basis(group, mu.image(i).clone()).try_sub(&one)?;
        lhs = lhs.try_add(&d.try_mul(&x)?)?;
    }
    let rhs = GroupRingElement::basis(group, mu.eval_word(w)?).try_sub(&one)?;
    Ok(lhs == rhs)
}

/// Determinant over the commutative ring `K[u, u^-1]` by Laplace expansion.
pub fn commutative_det(m: &SkewMatrix) -> Result<SkewLaurentPoly> {
    if !m.twist().is_identity() {
        return Err(Error::Unsupported("the ordinary determinant needs an identity twist".into()));
    }
    if !m.is_square() {
        return Err(Error::Mismatch("determinant of a non-square matrix".into()));
    }
    laplace(m.twist(), &m.rows().to_vec())
}

fn laplace(twist: &Arc<Twist>, m: &[Vec<SkewLaurentPoly>]) -> Result<SkewLaurentPoly> {
    if m.is_empty() {
        return Ok(SkewLaurentPoly::one(twist));
    }
    let mut acc = SkewLaurentPoly::zero(twist);
    for j in 0..m.len() {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<SkewLaurentPoly>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = m[0][j].try_mul(&laplace(twist, &minor)?)?;
        acc = if j % 2 == 0 { acc.try_add(&term)? } else { acc.try_sub(&term)? };
    }
    Ok(acc)
}

/// Whether `a` and `b` differ by a unit `c u^m`, checked by exact division.
pub fn associated(a: &SkewLaurentPoly, b: &SkewLaurentPoly) -> Result<bool> {
    if a.is_zero() || b.is_zero() {
        return Ok(a.is_zero() && b.is_zero());
    }
    let (q, r) = SkewLaurentPoly::left_div_rem(a, b)?;
    Ok(r.is_zero() && q.is_unit())
}

/// Free reduction by repeatedly deleting adjacent inverse pairs until nothing changes.
pub fn naive_reduce(raw: &[(usize, i8)]) -> Vec<(usize, i8)> {
    let mut w: Vec<(usize, i8)> = raw.iter().filter(|(_, e)| *e != 0).map(|&(g, e)| (g, e.signum())).collect();
    loop {
        let pos = w.windows(2).position(|p| p[0].0 == p[1].0 && p[0].1 == -p[1].1);
        match pos {
            Some(i) => {
                w.drain(i..i + 2);
            }
            None => return w,
        }
    }
}

fn cross(o: &[i64], a: &[i64], b: &[i64]) -> i128 {
    (a[0] - o[0]) as i128 * (b[1] - o[1]) as i128 - (a[1] - o[1]) as i128 * (b[0] - o[0]) as i128
}

/// Vertices of a planar convex hull by Andrew's monotone chain, with collinear points dropped.
pub fn monotone_chain(points: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let pts: Vec<Vec<i64>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if pts.len() <= 2 {
        return pts.into_iter().collect();
    }
    let mut hull: Vec<Vec<i64>> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec<i64>>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while hull.len() >= start + 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
    }
    hull.into_iter().collect()
}

/// Agreement between [`IntegralPolytope::canonicalize`] and the monotone chain in the plane.
pub fn hull_agrees(points: &[Vec<i64>]) -> Result<bool> {
    let p = IntegralPolytope::canonicalize(2, points.iter().cloned())?;
    let ours: BTreeSet<Vec<i64>> = p.vertices().iter().cloned().collect();
    Ok(ours == monotone_chain(points))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Determinantal divisors `gcd` of all `i x i` minors, for `i = 1, 2, ...` while nonzero.
pub fn determinantal_divisors(m: &[Vec<i64>]) -> Result<Vec<BigInt>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let sub: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                g = g.gcd(&IntMatrix::from_rows(sub)?.det()?);
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(g.abs());
    }
    Ok(out)
}

/// Checks that the invariant factors multiply out to the determinantal divisors.
pub fn smith_agrees(m: &[Vec<i64>], divisors: &[BigInt]) -> Result<bool> {
    let dd = determinantal_divisors(m)?;
    if dd.len() != divisors.len() {
        return Ok(false);
    }
    let mut prod = BigInt::from(1);
    for (d, expected) in divisors.iter().zip(&dd) {
        prod *= d;
        if &prod != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::smith_normal_form;
    use crate::ring::int;

    fn rf(k: usize, c: i64) -> RationalFunction {
        RationalFunction::constant(k, int(c))
    }

    #[test]
    fn truncated_coker_of_scalars() {
        let tw = Twist::identity(0);
        let f = SkewLaurentPoly::from_coeffs(&tw, [(0, rf(0, 1)), (1, rf(0, -1)), (2, rf(0, 1))]).unwrap();
        let m = SkewMatrix::from_rows(&tw, vec![vec![f]]).unwrap();
        let r = truncated_coker(&m, 2).unwrap();
        assert_eq!(r, TruncatedCoker { coker: Some(2), stable: true });
        let z = SkewMatrix::from_rows(&tw, vec![vec![SkewLaurentPoly::zero(&tw)]]).unwrap();
        assert_eq!(truncated_coker(&z, 1).unwrap().coker, None);
    }

    #[test]
    fn naive_reduction_and_hull() {
        assert_eq!(naive_reduce(&[(0, 1), (1, 1), (1, -1), (0, -1), (2, 1)]), vec![(2, 1)]);
        let pts = vec![vec![0, 0], vec![2, 0], vec![1, 0], vec![0, 2], vec![1, 1]];
        assert_eq!(monotone_chain(&pts).len(), 3);
        assert!(hull_agrees(&pts).unwrap());
    }

    #[test]
    fn smith_against_minors() {
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith_normal_form(&m);
        assert!(smith_agrees(&m, &s.divisors).unwrap());
        assert_eq!(s.divisors, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }
}
