//! Integral polytopes, Minkowski sums, the polytope Grothendieck group and the
//! seminorms they define.
//!
//! A polytope is stored as the sorted list of its extreme points, so semantic equality
//! is structural equality. Extreme points are found with an exact feasibility test:
//! a point is dropped when it is a convex combination of the remaining ones.

mod simplex;

use std::collections::BTreeSet;
use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{int, LaurentPoly, Rational};

pub use simplex::feasible;

/// Largest supported ambient dimension.
pub const MAX_DIMENSION: usize = 6;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntegralPolytope {
    dim: usize,
    vertices: Vec<Vec<i64>>,
}

impl IntegralPolytope {
    /// Extreme points of the convex hull of a nonempty set of lattice points.
    pub fn canonicalize(dim: usize, points: impl IntoIterator<Item = Vec<i64>>) -> Result<Self> {
        if dim > MAX_DIMENSION {
            return Err(Error::Input(format!(
                "polytopes are limited to dimension {MAX_DIMENSION}, got {dim}"
            )));
        }
        let set: BTreeSet<Vec<i64>> = points.into_iter().collect();
        if set.is_empty() {
            return Err(Error::Input("polytope of an empty point set".into()));
        }
        if let Some(p) = set.iter().find(|p| p.len() != dim) {
            return Err(Error::Mismatch(format!("point {p:?} in dimension {dim}")));
        }
        let vertices = extreme_points(dim, set.into_iter().collect());
        Ok(IntegralPolytope { dim, vertices })
    }

    /// Same as [`IntegralPolytope::canonicalize`] for rational input; every point must
    /// be a lattice point.
    pub fn from_rational_points(dim: usize, points: &[Vec<Rational>]) -> Result<Self> {
        let mut out = Vec::with_capacity(points.len());
        for p in points {
            let mut q = Vec::with_capacity(p.len());
            for x in p {
                if !x.is_integer() {
                    return Err(Error::Input(format!("{x} is not an integer coordinate")));
                }
                q.push(
                    x.to_integer()
                        .to_i64()
                        .ok_or_else(|| Error::Input("coordinate out of range".into()))?,
                );
            }
            out.push(q);
        }
        Self::canonicalize(dim, out)
    }

    /// The one-point polytope `{p}`.
    pub fn point(p: Vec<i64>) -> Self {
        IntegralPolytope { dim: p.len(), vertices: vec![p] }
    }

    pub fn origin(dim: usize) -> Self {
        Self::point(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn translate(&self, v: &[i64]) -> Self {
        let mut vertices: Vec<Vec<i64>> = self
            .vertices
            .iter()
            .map(|p| p.iter().zip(v).map(|(a, b)| a + b).collect())
            .collect();
        vertices.sort();
        IntegralPolytope { dim: self.dim, vertices }
    }

    /// The reflection `-P`.
    pub fn negate(&self) -> Self {
        let mut vertices: Vec<Vec<i64>> =
            self.vertices.iter().map(|p| p.iter().map(|x| -x).collect()).collect();
        vertices.sort();
        IntegralPolytope { dim: self.dim, vertices }
    }

    /// Half the width of the polytope in direction `phi`.
    pub fn seminorm(&self, phi: &[i64]) -> Result<Rational> {
        seminorm_eval(self, phi)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Mismatch(format!(
                "polytopes in dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }
}

fn extreme_points(dim: usize, mut pts: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    if pts.len() <= 1 {
        return pts;
    }
    if dim == 1 {
        let lo = pts.iter().min().unwrap().clone();
        let hi = pts.iter().max().unwrap().clone();
        return if lo == hi { vec![lo] } else { vec![lo, hi] };
    }
    let certain = certain_vertices(dim, &pts);
    let mut i = 0;
    while i < pts.len() {
        if certain.contains(&pts[i]) || pts.len() == 1 {
            i += 1;
            continue;
        }
        let p = pts[i].clone();
        let others: Vec<&Vec<i64>> =
            pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q).collect();
        if in_convex_hull(&p, &others) {
            // removing a non-extreme point leaves the hull unchanged
            pts.remove(i);
        } else {
            i += 1;
        }
    }
    pts.sort();
    pts
}

/// Points that uniquely maximize a coordinate functional; these are vertices for sure
/// and need no feasibility test.
fn certain_vertices(dim: usize, pts: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    let mut dirs: Vec<Vec<i64>> = Vec::new();
    for i in 0..dim {
        let mut e = vec![0; dim];
        e[i] = 1;
        dirs.push(e.clone());
        e[i] = -1;
        dirs.push(e);
    }
    let skew: Vec<i64> = (0..dim as i64).map(|i| 1 + i * 7).collect();
    dirs.push(skew.clone());
    dirs.push(skew.iter().map(|x| -x).collect());
    for d in dirs {
        let vals: Vec<i64> = pts.iter().map(|p| p.iter().zip(&d).map(|(a, b)| a * b).sum()).collect();
        let max = *vals.iter().max().unwrap();
        let hits: Vec<usize> = (0..pts.len()).filter(|&i| vals[i] == max).collect();
        if hits.len() == 1 {
            out.insert(pts[hits[0]].clone());
        }
    }
    out
}

/// Exact test: is `p` a convex combination of `others`?
pub(crate) fn in_convex_hull(p: &[i64], others: &[&Vec<i64>]) -> bool {
    if others.is_empty() {
        return false;
    }
    let dim = p.len();
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(dim + 1);
    let mut b: Vec<Rational> = Vec::with_capacity(dim + 1);
    for c in 0..dim {
        a.push(others.iter().map(|q| int(q[c])).collect());
        b.push(int(p[c]));
    }
    a.push(vec![int(1); others.len()]);
    b.push(int(1));
    feasible(&a, &b)
}

/// Canonical form of a finite point set.
pub fn canonicalize(dim: usize, points: impl IntoIterator<Item = Vec<i64>>) -> Result<IntegralPolytope> {
    IntegralPolytope::canonicalize(dim, points)
}

/// `P + Q = conv{p + q}` over pairs of vertices.
pub fn minkowski_sum(p: &IntegralPolytope, q: &IntegralPolytope) -> Result<IntegralPolytope> {
    p.check_dim(q)?;
    let mut pts = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for a in &p.vertices {
        for b in &q.vertices {
            pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
        }
    }
    IntegralPolytope::canonicalize(p.dim, pts)
}

/// `1/2 (max phi - min phi)` over the vertices.
pub fn seminorm_eval(p: &IntegralPolytope, phi: &[i64]) -> Result<Rational> {
    if phi.len() != p.dim {
        return Err(Error::Mismatch(format!(
            "covector of length {} on a polytope in dimension {}",
            phi.len(),
            p.dim
        )));
    }
    let vals = p.vertices.iter().map(|v| v.iter().zip(phi).map(|(a, b)| a * b).sum::<i64>());
    let (lo, hi) = vals.fold((i64::MAX, i64::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)));
    Ok(Rational::new((hi - lo).into(), 2.into()))
}

/// Formal difference `[plus] - [minus]` in the Grothendieck group of integral polytopes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeDifference {
    pub plus: IntegralPolytope,
    pub minus: IntegralPolytope,
}

impl PolytopeDifference {
    pub fn new(plus: IntegralPolytope, minus: IntegralPolytope) -> Result<Self> {
        plus.check_dim(&minus)?;
        Ok(PolytopeDifference { plus, minus })
    }

    pub fn zero(dim: usize) -> Self {
        PolytopeDifference { plus: IntegralPolytope::origin(dim), minus: IntegralPolytope::origin(dim) }
    }

    pub fn from_polytope(p: IntegralPolytope) -> Self {
        let dim = p.dim;
        PolytopeDifference { plus: p, minus: IntegralPolytope::origin(dim) }
    }

    pub fn dim(&self) -> usize {
        self.plus.dim
    }

    /// Group operation `([P]-[Q]) + ([P']-[Q']) = [P+P'] - [Q+Q']`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(PolytopeDifference {
            plus: minkowski_sum(&self.plus, &other.plus)?,
            minus: minkowski_sum(&self.minus, &other.minus)?,
        })
    }

    pub fn neg(&self) -> Self {
        PolytopeDifference { plus: self.minus.clone(), minus: self.plus.clone() }
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        difference_equal(self, other)
    }

    pub fn eval(&self, phi: &[i64]) -> Result<Rational> {
        d_eval(self, phi)
    }
}

/// `[P0] - [Q0] = [P1] - [Q1]` iff `P0 + Q1 = P1 + Q0`.
pub fn difference_equal(a: &PolytopeDifference, b: &PolytopeDifference) -> Result<bool> {
    a.plus.check_dim(&b.plus)?;
    Ok(minkowski_sum(&a.plus, &b.minus)? == minkowski_sum(&b.plus, &a.minus)?)
}

/// Class of the unit `f / g` in the polytope group: `[P(f)] - [P(g)]`.
pub fn polytope_of_unit(f: &LaurentPoly, g: &LaurentPoly) -> Result<PolytopeDifference> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::Input("polytope of a fraction with a zero numerator or denominator".into()));
    }
    if f.nvars() != g.nvars() {
        return Err(Error::Mismatch("numerator and denominator variable counts".into()));
    }
    PolytopeDifference::new(f.newton_polytope()?, g.newton_polytope()?)
}

/// Evaluation homomorphism `[P] - [Q] -> ||phi||_P - ||phi||_Q`.
pub fn d_eval(z: &PolytopeDifference, phi: &[i64]) -> Result<Rational> {
    Ok(seminorm_eval(&z.plus, phi)? - seminorm_eval(&z.minus, phi)?)
}

impl fmt::Debug for IntegralPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{:?}", self.vertices)
    }
}

impl fmt::Display for IntegralPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn poly(pts: &[&[i64]]) -> IntegralPolytope {
        let dim = pts[0].len();
        IntegralPolytope::canonicalize(dim, pts.iter().map(|p| p.to_vec())).unwrap()
    }

    #[test]
    fn collinear_middle_point_is_dropped() {
        assert_eq!(poly(&[&[0, 0], &[1, 0], &[2, 0]]).vertices(), &[vec![0, 0], vec![2, 0]]);
    }

    #[test]
    fn midpoint_of_hypotenuse_is_dropped() {
        assert_eq!(
            poly(&[&[0, 0], &[2, 0], &[0, 2], &[1, 1]]).vertices(),
            &[vec![0, 0], vec![0, 2], vec![2, 0]]
        );
    }

    #[test]
    fn single_point_and_empty_input() {
        assert_eq!(poly(&[&[3, -1]]).vertices(), &[vec![3, -1]]);
        assert!(IntegralPolytope::canonicalize(2, Vec::<Vec<i64>>::new()).is_err());
    }

    #[test]
    fn non_lattice_points_are_rejected() {
        let pts = vec![
            vec![rat(0, 1), rat(0, 1)],
            vec![rat(1, 1), rat(1, 1)],
            vec![rat(2, 1), rat(0, 1)],
            vec![rat(1, 1), rat(1, 2)],
        ];
        assert!(IntegralPolytope::from_rational_points(2, &pts).is_err());
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let p = poly(&[&[0, 0, 0], &[1, 1, 1], &[2, 0, 1], &[1, 0, 0], &[0, 2, 1], &[1, 1, 0]]);
        let again = IntegralPolytope::canonicalize(3, p.vertices().to_vec()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn minkowski_sum_examples() {
        let o = IntegralPolytope::origin(2);
        let tri = poly(&[&[0, 0], &[2, 0], &[0, 2]]);
        assert_eq!(minkowski_sum(&o, &tri).unwrap(), tri);
        let e1 = poly(&[&[0, 0], &[1, 0]]);
        let e2 = poly(&[&[0, 0], &[0, 1]]);
        assert_eq!(
            minkowski_sum(&e1, &e2).unwrap().vertices(),
            &[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert!(minkowski_sum(&e1, &IntegralPolytope::origin(3)).is_err());
    }

    #[test]
    fn seminorm_examples() {
        let tri = poly(&[&[0, 0], &[2, 0], &[0, 2]]);
        assert_eq!(seminorm_eval(&tri, &[1, 0]).unwrap(), rat(1, 1));
        assert_eq!(seminorm_eval(&IntegralPolytope::origin(2), &[5, -3]).unwrap(), rat(0, 1));
        let seg = poly(&[&[0, 0], &[1, 2]]);
        assert_eq!(seminorm_eval(&seg, &[1, 1]).unwrap(), rat(3, 2));
    }

    #[test]
    fn difference_examples() {
        let p = poly(&[&[0, 0], &[2, 1]]);
        let q = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        let a = PolytopeDifference::new(p.clone(), p.clone()).unwrap();
        let b = PolytopeDifference::new(q.clone(), q.clone()).unwrap();
        assert!(difference_equal(&a, &b).unwrap());
        let c = PolytopeDifference::from_polytope(p.clone());
        let d = PolytopeDifference::from_polytope(q.clone());
        assert!(!difference_equal(&c, &d).unwrap());
        assert_eq!(d_eval(&a, &[1, 1]).unwrap(), rat(0, 1));
    }

    #[test]
    fn polytope_of_unit_cancels_common_factors() {
        let f = LaurentPoly::from_terms(2, [(vec![0, 0], int(1)), (vec![1, 0], int(1))]).unwrap();
        let g = LaurentPoly::from_terms(2, [(vec![0, 0], int(1)), (vec![0, 1], int(-2))]).unwrap();
        let h = LaurentPoly::from_terms(2, [(vec![1, 1], int(3)), (vec![0, 0], int(1))]).unwrap();
        let a = polytope_of_unit(&(&f * &h), &(&g * &h)).unwrap();
        let b = polytope_of_unit(&f, &g).unwrap();
        assert!(difference_equal(&a, &b).unwrap());
        let one = LaurentPoly::one(2);
        assert!(difference_equal(&polytope_of_unit(&one, &one).unwrap(), &PolytopeDifference::zero(2)).unwrap());
        assert!(polytope_of_unit(&LaurentPoly::zero(2), &one).is_err());
        assert!(int(0) == d_eval(&PolytopeDifference::zero(2), &[1, 2]).unwrap());
    }
}
