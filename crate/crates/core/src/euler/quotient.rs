use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::presentation::{abelianization, smith_normal_form, unimodular_inverse, Presentation, QuotientMap};
use crate::ring::{Group, GroupElement, GroupRingElement, LaurentPoly, RationalFunction};
use crate::skew::{SkewLaurentPoly, Twist};

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Input(format!("integer {x} does not fit in 64 bits")))
}

/// A homomorphism from the presentation's group onto one of the supported quotients.
#[derive(Clone, Debug)]
pub struct QuotientSpec {
    map: QuotientMap,
}

impl QuotientSpec {
    /// `mu` into `Z^rank`.
    pub fn abelian(rank: usize, images: Vec<GroupElement>) -> Result<Self> {
        Ok(QuotientSpec { map: QuotientMap::new(Group::abelian(rank), images)? })
    }

    /// `mu` into `Z^k x|_A Z`; images are `[v_1, ..., v_k, m]`.
    pub fn poly_z(matrix: IntMatrix, images: Vec<GroupElement>) -> Result<Self> {
        Ok(QuotientSpec { map: QuotientMap::new(Group::poly_z(matrix)?, images)? })
    }

    /// The projection onto the free part of the abelianization.
    pub fn abelianization(p: &Presentation) -> Result<Self> {
        let ab = abelianization(p);
        let images = (0..p.generator_count())
            .map(|i| ab.projection.iter().map(|row| to_i64(&row[i])).collect())
            .collect::<Result<Vec<_>>>()?;
        Self::abelian(ab.free_rank, images)
    }

    pub fn map(&self) -> &QuotientMap {
        &self.map
    }

    pub fn group(&self) -> &Arc<Group> {
        self.map.group()
    }

    pub fn images(&self) -> &[GroupElement] {
        self.map.images()
    }

    pub fn kind_name(&self) -> &'static str {
        match **self.group() {
            Group::Abelian { .. } => "abelian",
            Group::PolyZ { .. } => "polyz",
        }
    }

    /// Checks that the map is defined on every generator and kills every relator.
    pub fn validate(&self, p: &Presentation) -> Result<()> {
        if self.map.generators() != p.generator_count() {
            return Err(Error::Input(format!(
                "quotient gives {} images for {} generators",
                self.map.generators(),
                p.generator_count()
            )));
        }
        for (j, r) in p.relators().iter().enumerate() {
            let g = self.map.eval_word(r)?;
            if !Group::is_identity(&g) {
                return Err(Error::Input(format!(
                    "relator {} maps to {g:?}, not the identity",
                    j + 1
                )));
            }
        }
        Ok(())
    }
}

/// A character `phi: G -> Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PhiSpec {
    /// Covector on `Z^n`.
    Abelian(Vec<i64>),
    /// `phi(v, m) = c m` on `Z^k x|_A Z`.
    PolyZ(i64),
}

impl PhiSpec {
    pub fn check(&self, group: &Group) -> Result<()> {
        match (self, group) {
            (PhiSpec::Abelian(v), Group::Abelian { rank }) if v.len() == *rank => Ok(()),
            (PhiSpec::Abelian(v), Group::Abelian { rank }) => Err(Error::Input(format!(
                "phi has length {} but the quotient has rank {rank}",
                v.len()
            ))),
            (PhiSpec::PolyZ(_), Group::PolyZ { .. }) => Ok(()),
            (PhiSpec::Abelian(_), Group::PolyZ { .. }) => Err(Error::Unsupported(
                "on a poly-Z quotient phi must be a multiple of the Z-coordinate, given as one integer"
                    .into(),
            )),
            (PhiSpec::PolyZ(_), Group::Abelian { .. }) => {
                Err(Error::Input("abelian quotients need phi as an integer vector".into()))
            }
        }
    }

    pub fn eval(&self, g: &[i64]) -> i64 {
        match self {
            PhiSpec::Abelian(v) => v.iter().zip(g).map(|(a, b)| a * b).sum(),
            PhiSpec::PolyZ(c) => c * g.last().copied().unwrap_or(0),
        }
    }

    /// `k * phi`.
    pub fn scaled(&self, k: i64) -> PhiSpec {
        match self {
            PhiSpec::Abelian(v) => PhiSpec::Abelian(v.iter().map(|x| x * k).collect()),
            PhiSpec::PolyZ(c) => PhiSpec::PolyZ(c * k),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            PhiSpec::Abelian(v) => v.iter().all(|&x| x == 0),
            PhiSpec::PolyZ(c) => *c == 0,
        }
    }
}

/// Outcome of [`reduce_phi`].
#[derive(Clone, Debug)]
pub enum PhiReduction {
    /// `phi o mu` has image `k Z` with `k >= 1`; the Euler characteristic is `k` times
    /// the one for the reduced data.
    Reduced(ReducedData),
    /// `phi o mu = 0`.
    Trivial,
}

/// Quotient data after restricting to the image of `mu` and dividing `phi` by `k`.
#[derive(Clone, Debug)]
pub struct ReducedData {
    /// `mu'` into the reduced group (the lattice `im mu` in its own coordinates for
    /// abelian quotients, the original group for poly-Z quotients).
    pub map: QuotientMap,
    /// Character on the reduced group, surjective there.
    pub phi: PhiSpec,
    pub k: u64,
    /// Human-readable list of reductions applied.
    pub notes: Vec<String>,
    lattice: Option<Lattice>,
}

impl ReducedData {
    /// Data used as given: `phi` must be surjective on the target of `map`.
    pub(crate) fn direct(map: QuotientMap, phi: PhiSpec) -> Self {
        ReducedData { map, phi, k: 1, notes: Vec::new(), lattice: None }
    }
}

/// Coordinates on a sublattice `L` of `Z^n` with basis `b_j = d_j * row_j(R^-1)`.
#[derive(Clone, Debug)]
struct Lattice {
    right: Vec<Vec<BigInt>>,
    divisors: Vec<BigInt>,
}

impl Lattice {
    fn coordinates(&self, g: &[i64]) -> Result<Vec<i64>> {
        let n = g.len();
        let mut out = Vec::with_capacity(self.divisors.len());
        for (j, d) in self.divisors.iter().enumerate() {
            let s: BigInt = (0..n).map(|i| BigInt::from(g[i]) * &self.right[i][j]).sum();
            let (q, r) = s.div_rem(d);
            if !r.is_zero() {
                return Err(Error::Input(format!("{g:?} is not in the image of mu")));
            }
            out.push(to_i64(&q)?);
        }
        for j in self.divisors.len()..n {
            let s: BigInt = (0..n).map(|i| BigInt::from(g[i]) * &self.right[i][j]).sum();
            if !s.is_zero() {
                return Err(Error::Input(format!("{g:?} is not in the image of mu")));
            }
        }
        Ok(out)
    }

    fn basis(&self) -> Result<Vec<Vec<i64>>> {
        let rinv = unimodular_inverse(&self.right);
        self.divisors
            .iter()
            .enumerate()
            .map(|(j, d)| rinv[j].iter().map(|x| to_i64(&(x * d))).collect())
            .collect()
    }
}

fn gcd_all(xs: impl IntoIterator<Item = i64>) -> u64 {
    xs.into_iter().fold(0u64, |g, x| g.gcd(&x.unsigned_abs()))
}

/// Restricts to the image of `mu` and divides `phi` by the index `k` of `phi(mu(pi))`.
pub fn reduce_phi(q: &QuotientSpec, phi: &PhiSpec) -> Result<PhiReduction> {
    phi.check(q.group())?;
    match &**q.group() {
        Group::Abelian { rank } => {
            let images = q.images();
            let snf = smith_normal_form(images);
            let lattice = if images.is_empty() {
                Lattice { right: identity_big(*rank), divisors: Vec::new() }
            } else {
                Lattice { right: snf.right, divisors: snf.divisors }
            };
            let r = lattice.divisors.len();
            let full = r == *rank && lattice.divisors.iter().all(|d| d.abs() == BigInt::from(1));
            let (coords, basis, lattice) = if full {
                (images.to_vec(), identity_i64(*rank), None)
            } else {
                let coords = images.iter().map(|g| lattice.coordinates(g)).collect::<Result<Vec<_>>>()?;
                let basis = lattice.basis()?;
                (coords, basis, Some(lattice))
            };
            let phi_r: Vec<i64> = basis.iter().map(|b| phi.eval(b)).collect();
            let k = gcd_all(phi_r.iter().copied());
            if k == 0 {
                return Ok(PhiReduction::Trivial);
            }
            let mut notes = Vec::new();
            if !full {
                notes.push(format!("restricted to the image of mu, a rank-{r} sublattice of Z^{rank}"));
            }
            if k > 1 {
                notes.push(format!("divided phi by {k}"));
            }
            let phi2 = PhiSpec::Abelian(phi_r.iter().map(|x| x / k as i64).collect());
            Ok(PhiReduction::Reduced(ReducedData {
                map: QuotientMap::new(Group::abelian(r), coords)?,
                phi: phi2,
                k,
                notes,
                lattice,
            }))
        }
        Group::PolyZ { .. } => {
            let PhiSpec::PolyZ(c) = phi else { unreachable!("checked above") };
            if *c == 0 || q.images().iter().all(|g| g.last() == Some(&0)) {
                return Ok(PhiReduction::Trivial);
            }
            let k = c.unsigned_abs();
            let mut notes = Vec::new();
            if k > 1 || *c < 0 {
                notes.push(format!("replaced phi = {c} m by m"));
            }
            Ok(PhiReduction::Reduced(ReducedData {
                map: q.map().clone(),
                phi: PhiSpec::PolyZ(1),
                k,
                notes,
                lattice: None,
            }))
        }
    }
}

fn identity_big(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect()).collect()
}

fn identity_i64(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Unimodular matrix whose last row is the primitive vector `v`.
pub fn unimodular_completion(v: &[i64]) -> Result<IntMatrix> {
    let r = v.len();
    if r == 0 || gcd_all(v.iter().copied()) != 1 {
        return Err(Error::Input(format!("{v:?} is not a primitive vector")));
    }
    let mut e = vec![0; r];
    e[r - 1] = 1;
    if v == e.as_slice() {
        return Ok(IntMatrix::identity(r));
    }
    // L [v] R = [1 0 ... 0] gives v = +-(row 0 of R^-1)
    let snf = smith_normal_form(&[v.to_vec()]);
    let rinv = unimodular_inverse(&snf.right);
    let mut rows: Vec<Vec<i64>> = rinv[1..]
        .iter()
        .map(|row| row.iter().map(to_i64).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    rows.push(v.to_vec());
    IntMatrix::from_rows(rows)
}

/// How group elements of the reduced quotient become twisted Laurent monomials.
#[derive(Clone, Debug)]
enum SplitKind {
    /// `g -> t^{(P g)_{0..r-1}} u^{(P g)_{r-1}}`, untwisted.
    Abelian { completion: IntMatrix },
    /// `(v, m) -> t^v u^m`, twisted by `A`.
    PolyZ,
}

/// The identification of `Q[G]` with a subring of `Q(K)_sigma[u^+-1]` along `phi`.
#[derive(Clone, Debug)]
pub struct Splitting {
    twist: Arc<Twist>,
    kind: SplitKind,
    reduced: ReducedData,
}

impl Splitting {
    pub fn twist(&self) -> &Arc<Twist> {
        &self.twist
    }

    pub fn reduced(&self) -> &ReducedData {
        &self.reduced
    }

    /// Scaling factor `k` of [`reduce_phi`].
    pub fn k(&self) -> u64 {
        self.reduced.k
    }

    /// The change of basis on the reduced lattice (abelian quotients only).
    pub fn completion(&self) -> Option<&IntMatrix> {
        match &self.kind {
            SplitKind::Abelian { completion } => Some(completion),
            SplitKind::PolyZ => None,
        }
    }

    /// `(t-exponent, u-exponent)` of a reduced group element.
    pub fn split_element(&self, g: &[i64]) -> Result<(Vec<i64>, i64)> {
        match &self.kind {
            SplitKind::Abelian { completion } => {
                let mut e = completion.mul_vec(g)?;
                let m = e.pop().unwrap_or(0);
                Ok((e, m))
            }
            SplitKind::PolyZ => {
                let (v, m) = g.split_at(g.len() - 1);
                Ok((v.to_vec(), m[0]))
            }
        }
    }

    /// Value of the reduced character on a reduced group element.
    pub fn phi(&self, g: &[i64]) -> Result<i64> {
        Ok(self.split_element(g)?.1)
    }

    /// Rewrites an element of the reduced group ring as a twisted Laurent polynomial.
    pub fn rewrite(&self, x: &GroupRingElement) -> Result<SkewLaurentPoly> {
        if **x.group() != **self.reduced.map.group() {
            return Err(Error::Mismatch("group ring element over a different group".into()));
        }
        let k = self.twist.k();
        let mut by_power: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (g, c) in x.terms() {
            let (v, m) = self.split_element(g)?;
            by_power
                .entry(m)
                .or_insert_with(|| LaurentPoly::zero(k))
                .add_term(v, c.clone());
        }
        SkewLaurentPoly::from_coeffs(
            &self.twist,
            by_power.into_iter().map(|(m, f)| (m, RationalFunction::from_laurent(&f))),
        )
    }

    /// Maps an element of the original quotient group into the reduced group.
    pub fn reduce_element(&self, g: &[i64]) -> Result<GroupElement> {
        match &self.reduced.lattice {
            Some(l) => l.coordinates(g),
            None => Ok(g.to_vec()),
        }
    }

    /// Rewrites an element of the original quotient's group ring.
    pub fn rewrite_ambient(&self, x: &GroupRingElement) -> Result<SkewLaurentPoly> {
        let group = self.reduced.map.group();
        let mut y = GroupRingElement::zero(group);
        for (g, c) in x.terms() {
            y.add_term(self.reduce_element(g)?, c.clone());
        }
        self.rewrite(&y)
    }
}

/// Splits the reduced quotient as `K x| Z` along the reduced character.
pub fn split_reduced(reduced: ReducedData) -> Result<Splitting> {
    match &**reduced.map.group() {
        Group::Abelian { rank } => {
            let PhiSpec::Abelian(v) = &reduced.phi else { unreachable!("abelian reduction") };
            let completion = unimodular_completion(v)?;
            Ok(Splitting {
                twist: Twist::identity(rank - 1),
                kind: SplitKind::Abelian { completion },
                reduced,
            })
        }
        Group::PolyZ { twist } => Ok(Splitting { twist: twist.clone(), kind: SplitKind::PolyZ, reduced }),
    }
}

/// [`reduce_phi`] followed by [`split_reduced`]; a trivial `phi o mu` is an input error.
pub fn split_along_phi(q: &QuotientSpec, phi: &PhiSpec) -> Result<Splitting> {
    match reduce_phi(q, phi)? {
        PhiReduction::Reduced(r) => split_reduced(r),
        PhiReduction::Trivial => Err(Error::Input("phi o mu is trivial; no splitting exists".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    #[test]
    fn completion_is_unimodular_with_last_row_phi() {
        for v in [vec![2, 3], vec![0, 1], vec![1, 0], vec![3, 5, 7], vec![-4, 9], vec![6, 10, 15]] {
            let p = unimodular_completion(&v).unwrap();
            assert_eq!(p.det().unwrap().abs(), BigInt::from(1));
            assert_eq!(p.rows().last().unwrap(), &v);
        }
        assert!(unimodular_completion(&[2, 4]).is_err());
    }

    #[test]
    fn already_split_abelian() {
        let q = QuotientSpec::abelian(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let s = split_along_phi(&q, &PhiSpec::Abelian(vec![0, 1])).unwrap();
        assert_eq!(s.twist().k(), 1);
        assert_eq!(s.split_element(&[3, 5]).unwrap(), (vec![3], 5));
        assert_eq!(s.k(), 1);
    }

    #[test]
    fn reduction_to_image_and_scaling() {
        // mu hits 3Z inside Z; phi = 1 then has index 3 on the image
        let q = QuotientSpec::abelian(1, vec![vec![3], vec![3]]).unwrap();
        let PhiReduction::Reduced(r) = reduce_phi(&q, &PhiSpec::Abelian(vec![1])).unwrap() else {
            panic!("expected reduction")
        };
        assert_eq!(r.k, 3);
        assert_eq!(r.map.images(), &[vec![1], vec![1]]);
        let q = QuotientSpec::abelian(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert!(matches!(reduce_phi(&q, &PhiSpec::Abelian(vec![0, 0])).unwrap(), PhiReduction::Trivial));
        let PhiReduction::Reduced(r) = reduce_phi(&q, &PhiSpec::Abelian(vec![2, 4])).unwrap() else {
            panic!("expected reduction")
        };
        assert_eq!((r.k, r.phi), (2, PhiSpec::Abelian(vec![1, 2])));
    }

    #[test]
    fn rewrite_is_multiplicative() {
        let q = QuotientSpec::abelian(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let s = split_along_phi(&q, &PhiSpec::Abelian(vec![2, 3])).unwrap();
        let g = q.group();
        let a = GroupRingElement::one(g).try_add(&GroupRingElement::term(g, vec![1, -1], int(2))).unwrap();
        let b = GroupRingElement::basis(g, vec![0, 2]).try_sub(&GroupRingElement::basis(g, vec![3, 1])).unwrap();
        let lhs = s.rewrite(&a.try_mul(&b).unwrap()).unwrap();
        let rhs = s.rewrite(&a).unwrap().try_mul(&s.rewrite(&b).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(s.phi(&[1, 1]).unwrap(), 5);
    }

    #[test]
    fn poly_z_split_uses_the_twist() {
        let q = QuotientSpec::poly_z(IntMatrix::from_rows(vec![vec![-1]]).unwrap(), vec![vec![0, 1], vec![1, 0]])
            .unwrap();
        let s = split_along_phi(&q, &PhiSpec::PolyZ(-2)).unwrap();
        assert_eq!(s.k(), 2);
        assert!(!s.twist().is_identity());
        let g = q.group();
        let a = GroupRingElement::basis(g, vec![0, 1]);
        let b = GroupRingElement::basis(g, vec![1, 0]);
        let lhs = s.rewrite(&a.try_mul(&b).unwrap()).unwrap();
        let rhs = s.rewrite(&a).unwrap().try_mul(&s.rewrite(&b).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(matches!(
            PhiSpec::Abelian(vec![1]).check(g),
            Err(Error::Unsupported(_))
        ));
    }
}
