use num_traits::One;
use serde::{Deserialize, Serialize};

use super::pipeline::{Diagnostics, EulerResult};
use crate::error::{Error, Result};
use crate::ring::{int, Rational};

/// Base orbifold of a Seifert fibration: genus, number of boundary circles and
/// cone point orders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertBase {
    pub genus: u64,
    pub boundary: u64,
    pub cone_orders: Vec<u64>,
}

impl SeifertBase {
    pub fn orbifold_euler_characteristic(&self) -> Result<Rational> {
        let mut chi = int(2) - int(2 * self.genus as i64) - int(self.boundary as i64);
        for &a in &self.cone_orders {
            if a == 0 {
                return Err(Error::Input("cone point order must be positive".into()));
            }
            chi -= Rational::one() - Rational::new(1.into(), (a as i64).into());
        }
        Ok(chi)
    }
}

/// `chi_orb(base) * fiber_index` for a Seifert fibered manifold whose fiber maps to an
/// infinite cyclic subgroup of index `fiber_index` under `phi o mu`.
pub fn seifert_chi2(base: &SeifertBase, fiber_index: u64) -> Result<Rational> {
    if fiber_index == 0 {
        return Err(Error::Input("the fiber must have infinite image (index >= 1)".into()));
    }
    Ok(base.orbifold_euler_characteristic()? * int(fiber_index as i64))
}

/// Sum over the pieces of a JSJ decomposition.
pub fn jsj_sum(pieces: &[EulerResult]) -> Result<EulerResult> {
    if pieces.is_empty() {
        return Err(Error::Input("jsj_sum needs at least one piece".into()));
    }
    if pieces.len() == 1 {
        return Ok(pieces[0].clone());
    }
    let chi: i64 = pieces.iter().map(|p| p.chi2).sum();
    let diagnostics = Diagnostics {
        reductions: vec![format!("sum over {} pieces", pieces.len())],
        ..Diagnostics::default()
    };
    Ok(EulerResult::new(chi, diagnostics))
}

/// Thurston norm of a knot exterior's generator from the knot genus: `max(2g - 1, 0)`.
pub fn thurston_from_genus(g: u64) -> u64 {
    (2 * g).saturating_sub(1)
}

/// Norm of a fibered class with fiber Euler characteristic `chi_f`: `max(-chi_f, 0)`.
pub fn fibered_norm(chi_f: i64) -> u64 {
    if chi_f < 0 {
        chi_f.unsigned_abs()
    } else {
        0
    }
}

/// Norm of a pulled-back class on an `n`-sheeted cover.
pub fn cover_scale(x: u64, n: u64) -> u64 {
    x * n
}

/// `k (1 - b)` with boundary and `k (2 - b)` without, where `b` is the rational first
/// Betti number of the infinite cyclic cover.
pub fn infinite_cyclic_chi2(dim_h1: u64, boundary: bool, k: u64) -> i64 {
    let base = if boundary { 1 } else { 2 };
    k as i64 * (base - dim_h1 as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seifert_examples() {
        let trefoil = SeifertBase { genus: 0, boundary: 1, cone_orders: vec![2, 3] };
        assert_eq!(seifert_chi2(&trefoil, 6).unwrap(), int(-1));
        let torus = SeifertBase { genus: 1, boundary: 0, cone_orders: vec![] };
        assert_eq!(seifert_chi2(&torus, 3).unwrap(), int(0));
        let annulus = SeifertBase { genus: 0, boundary: 2, cone_orders: vec![] };
        assert_eq!(seifert_chi2(&annulus, 1).unwrap(), int(0));
        assert!(seifert_chi2(&annulus, 0).is_err());
    }

    #[test]
    fn norm_oracles() {
        assert_eq!(thurston_from_genus(1), 1);
        assert_eq!(thurston_from_genus(0), 0);
        assert_eq!(fibered_norm(-1), 1);
        assert_eq!(fibered_norm(2), 0);
        assert_eq!(cover_scale(3, 4), 12);
        assert_eq!(infinite_cyclic_chi2(2, true, 1), -1);
        assert_eq!(infinite_cyclic_chi2(2, false, 3), 0);
    }

    #[test]
    fn jsj_sums() {
        let a = EulerResult::new(-1, Diagnostics::default());
        let b = EulerResult::new(-2, Diagnostics::default());
        assert_eq!(jsj_sum(&[a.clone()]).unwrap(), a);
        assert_eq!(jsj_sum(&[a.clone(), b.clone()]).unwrap().chi2, -3);
        assert_eq!(jsj_sum(&[b, a]).unwrap().thurston_lower_bound, 3);
        assert!(jsj_sum(&[]).is_err());
    }
}
