use super::pipeline::{chi2, ChiOptions, EulerResult};
use super::quotient::{reduce_phi, PhiReduction, PhiSpec, QuotientSpec};
use crate::error::{Error, Result};
use crate::polytope::{d_eval, IntegralPolytope, PolytopeDifference};
use crate::presentation::{fox_matrix, FreeWord, Presentation};
use crate::ring::{int, Group, GroupRingElement, LaurentPoly, Rational};

/// The determinant side of an abelian computation: the ordinary determinant of the
/// deleted Fox matrix, its Newton polytope, and the two halves of the degree bridge.
#[derive(Clone, Debug)]
pub struct BridgeReport {
    pub result: EulerResult,
    /// Determinant in the coordinates of the image of `mu`.
    pub det: LaurentPoly,
    pub polytope: IntegralPolytope,
    /// Reduced character on the image lattice.
    pub phi: Vec<i64>,
    /// Half the sum of the diagonal degrees.
    pub half_degree: Rational,
    /// Seminorm of the determinant polytope at the reduced character.
    pub d_eval: Rational,
}

impl BridgeReport {
    pub fn agrees(&self) -> bool {
        self.half_degree == self.d_eval
    }
}

/// Group ring element of a free abelian group as a Laurent polynomial.
pub fn to_laurent(x: &GroupRingElement) -> Result<LaurentPoly> {
    let Group::Abelian { rank } = **x.group() else {
        return Err(Error::Unsupported("only abelian group rings are commutative".into()));
    };
    LaurentPoly::from_terms(rank, x.terms().map(|(g, c)| (g.clone(), c.clone())))
}

/// Determinant by Laplace expansion along the first row.
pub fn laurent_det(m: &[Vec<LaurentPoly>], nvars: usize) -> Result<LaurentPoly> {
    let n = m.len();
    if n == 0 {
        return Ok(LaurentPoly::one(nvars));
    }
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Input("determinant of a non-square matrix".into()));
    }
    let mut acc = LaurentPoly::zero(nvars);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<LaurentPoly>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = m[0][j].try_mul(&laurent_det(&minor, nvars)?)?;
        acc = if j % 2 == 0 { acc.try_add(&term)? } else { acc.try_add(&term.scale(&int(-1)))? };
    }
    Ok(acc)
}

/// Computes the Euler characteristic and checks it against the Newton polytope of the
/// ordinary determinant: half the cokernel dimension equals the seminorm at `phi`.
pub fn polytope_bridge(
    p: &Presentation,
    dual: Option<&[FreeWord]>,
    q: &QuotientSpec,
    phi: &PhiSpec,
    opts: &ChiOptions,
) -> Result<BridgeReport> {
    if !matches!(**q.group(), Group::Abelian { .. }) {
        return Err(Error::Unsupported(
            "determinant polytopes are only available for abelian quotients".into(),
        ));
    }
    let result = chi2(p, dual, q, phi, opts)?;
    let PhiReduction::Reduced(r) = reduce_phi(q, phi)? else {
        return Err(Error::Input("phi o mu is trivial; the bridge needs a nontrivial character".into()));
    };
    let PhiSpec::Abelian(phi2) = r.phi.clone() else {
        return Err(Error::Unsupported("abelian quotient with a non-abelian character".into()));
    };
    let nvars = phi2.len();
    let fox = fox_matrix(p, &r.map)?;
    let col = result.diagnostics.deleted_column;
    let row = result.diagnostics.deleted_row;
    let m: Vec<Vec<LaurentPoly>> = fox
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != row)
        .map(|(_, rw)| {
            rw.iter()
                .enumerate()
                .filter(|(j, _)| Some(*j) != col)
                .map(|(_, x)| to_laurent(x))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let det = laurent_det(&m, nvars)?;
    let polytope = det.newton_polytope()?;
    let value = d_eval(&PolytopeDifference::from_polytope(polytope.clone()), &phi2)?;
    let half_degree = Rational::new((result.diagnostics.coker_dim as i64).into(), 2.into());
    Ok(BridgeReport { result, det, polytope, phi: phi2, half_degree, d_eval: value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_bridge() {
        let p = Presentation::parse(&["x", "y"], &["x y x y^-1 x^-1 y^-1"]).unwrap();
        let q = QuotientSpec::abelianization(&p).unwrap();
        let b = polytope_bridge(&p, None, &q, &PhiSpec::Abelian(vec![1]), &ChiOptions::default()).unwrap();
        assert!(b.agrees());
        assert_eq!(b.d_eval, int(1));
        assert_eq!(b.polytope.vertices().len(), 2);
    }

    #[test]
    fn hopf_link_bridge() {
        let p = Presentation::parse(&["x", "y"], &["x y x^-1 y^-1"]).unwrap();
        let q = QuotientSpec::abelianization(&p).unwrap();
        let b = polytope_bridge(&p, None, &q, &PhiSpec::Abelian(vec![2, 1]), &ChiOptions::default()).unwrap();
        assert!(b.agrees());
    }
}
