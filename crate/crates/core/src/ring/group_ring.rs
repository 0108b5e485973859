use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::Rational;
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::skew::Twist;

/// Group element: a vector in `Z^n` for abelian groups, or `(v, m)` stored as
/// `[v_1, ..., v_k, m]` for `Z^k x|_A Z`.
pub type GroupElement = Vec<i64>;

/// The supported torsion-free elementary amenable quotients.
#[derive(Clone)]
pub enum Group {
    /// Free abelian group `Z^rank`.
    Abelian { rank: usize },
    /// Semidirect product `Z^k x|_A Z` with `(v, m)(v', m') = (v + A^m v', m + m')`.
    PolyZ { twist: Arc<Twist> },
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Group::Abelian { rank: a }, Group::Abelian { rank: b }) => a == b,
            (Group::PolyZ { twist: a }, Group::PolyZ { twist: b }) => a == b,
            _ => false,
        }
    }
}

impl Eq for Group {}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Abelian { rank } => write!(f, "Z^{rank}"),
            Group::PolyZ { twist } => write!(f, "Z^{} x| {:?} Z", twist.k(), twist.matrix()),
        }
    }
}

impl Group {
    pub fn abelian(rank: usize) -> Arc<Group> {
        Arc::new(Group::Abelian { rank })
    }

    pub fn poly_z(matrix: IntMatrix) -> Result<Arc<Group>> {
        Ok(Arc::new(Group::PolyZ { twist: Twist::new(matrix)? }))
    }

    /// Length of the integer vector representing an element.
    pub fn element_len(&self) -> usize {
        match self {
            Group::Abelian { rank } => *rank,
            Group::PolyZ { twist } => twist.k() + 1,
        }
    }

    pub fn identity(&self) -> GroupElement {
        vec![0; self.element_len()]
    }

    pub fn check(&self, g: &[i64]) -> Result<()> {
        if g.len() != self.element_len() {
            return Err(Error::Input(format!(
                "group element {g:?} does not belong to {self:?}"
            )));
        }
        Ok(())
    }

    pub fn mul(&self, g: &[i64], h: &[i64]) -> Result<GroupElement> {
        match self {
            Group::Abelian { .. } => g
                .iter()
                .zip(h)
                .map(|(a, b)| a.checked_add(*b).ok_or_else(overflow))
                .collect(),
            Group::PolyZ { twist } => {
                let k = twist.k();
                let m = g[k];
                let moved = twist.apply_exponent(m, &h[..k])?;
                let mut out: Vec<i64> = g[..k]
                    .iter()
                    .zip(&moved)
                    .map(|(a, b)| a.checked_add(*b).ok_or_else(overflow))
                    .collect::<Result<_>>()?;
                out.push(m.checked_add(h[k]).ok_or_else(overflow)?);
                Ok(out)
            }
        }
    }

    pub fn inv(&self, g: &[i64]) -> Result<GroupElement> {
        match self {
            Group::Abelian { .. } => Ok(g.iter().map(|x| -x).collect()),
            Group::PolyZ { twist } => {
                // (v, m)^-1 = (-A^-m v, -m)
                let k = twist.k();
                let m = g[k];
                let mut out: Vec<i64> =
                    twist.apply_exponent(-m, &g[..k])?.into_iter().map(|x| -x).collect();
                out.push(-m);
                Ok(out)
            }
        }
    }

    pub fn is_identity(g: &[i64]) -> bool {
        g.iter().all(|&x| x == 0)
    }
}

fn overflow() -> Error {
    Error::Input("integer overflow in group arithmetic".into())
}

/// Finite formal sum of group elements with rational coefficients.
#[derive(Clone)]
pub struct GroupRingElement {
    group: Arc<Group>,
    terms: BTreeMap<GroupElement, Rational>,
}

impl PartialEq for GroupRingElement {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.terms == other.terms
    }
}

impl Eq for GroupRingElement {}

impl GroupRingElement {
    pub fn zero(group: &Arc<Group>) -> Self {
        GroupRingElement { group: group.clone(), terms: BTreeMap::new() }
    }

    pub fn one(group: &Arc<Group>) -> Self {
        Self::basis(group, group.identity())
    }

    /// The group element `g` viewed in the group ring.
    pub fn basis(group: &Arc<Group>, g: GroupElement) -> Self {
        Self::term(group, g, Rational::one())
    }

    pub fn term(group: &Arc<Group>, g: GroupElement, c: Rational) -> Self {
        let mut out = Self::zero(group);
        out.add_term(g, c);
        out
    }

    pub(crate) fn add_term(&mut self, g: GroupElement, c: Rational) {
        debug_assert_eq!(g.len(), self.group.element_len());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
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

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: &[i64]) -> Rational {
        self.terms.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    fn same_group(&self, rhs: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.group, &rhs.group) || self.group == rhs.group {
            Ok(())
        } else {
            Err(Error::Mismatch("group ring elements over different groups".into()))
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.same_group(rhs)?;
        let mut out = self.clone();
        for (g, c) in &rhs.terms {
            out.add_term(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.try_add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        GroupRingElement {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(g, c)| (g.clone(), -c)).collect(),
        }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.same_group(rhs)?;
        let mut out = Self::zero(&self.group);
        for (g, a) in &self.terms {
            for (h, b) in &rhs.terms {
                out.add_term(self.group.mul(g, h)?, a * b);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.group);
        for (g, x) in &self.terms {
            out.add_term(g.clone(), x * c);
        }
        out
    }
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(g, c)| format!("{c}*{g:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    #[test]
    fn poly_z_multiplication_follows_semidirect_rule() {
        let g = Group::poly_z(IntMatrix::from_rows(vec![vec![-1]]).unwrap()).unwrap();
        // u * t * u^-1 = t^-1
        let u = vec![0, 1];
        let t = vec![1, 0];
        let ut = g.mul(&u, &t).unwrap();
        let conj = g.mul(&ut, &g.inv(&u).unwrap()).unwrap();
        assert_eq!(conj, vec![-1, 0]);
        for x in [vec![3, -2], vec![-1, 5]] {
            assert!(Group::is_identity(&g.mul(&x, &g.inv(&x).unwrap()).unwrap()));
        }
    }

    #[test]
    fn group_ring_product_distributes() {
        let g = Group::abelian(1);
        let a = GroupRingElement::one(&g).try_add(&GroupRingElement::basis(&g, vec![1])).unwrap();
        let b = GroupRingElement::one(&g)
            .try_sub(&GroupRingElement::basis(&g, vec![1]))
            .unwrap();
        let p = a.try_mul(&b).unwrap();
        assert_eq!(p.coeff(&[0]), int(1));
        assert_eq!(p.coeff(&[1]), int(0));
        assert_eq!(p.coeff(&[2]), int(-1));
    }
}
