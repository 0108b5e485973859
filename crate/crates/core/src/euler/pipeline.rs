use serde::{Deserialize, Serialize};

use super::quotient::{
    reduce_phi, split_reduced, PhiReduction, PhiSpec, QuotientSpec, ReducedData, Splitting,
};
use crate::error::{Error, Result};
use crate::presentation::{fox_matrix, FreeWord, Presentation, QuotientMap};
use crate::reduction::{diagonalize_with, Limits, PivotStrategy, SkewMatrix};
use crate::ring::{Group, GroupRingElement};

/// Per-run information attached to an [`EulerResult`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub deleted_column: Option<usize>,
    pub deleted_row: Option<usize>,
    pub diagonal_degrees: Vec<usize>,
    pub coker_dim: usize,
    /// `|phi mu(x_i)|` plus, in the closed case, `|phi mu(x'_j)|`, for the reduced character.
    pub boundary_terms: i64,
    /// Index `k` of `phi(mu(pi))` in `Z`; the result is `k` times the reduced value.
    pub scaling_factor: u64,
    pub reductions: Vec<String>,
    pub trivial_phi: bool,
    /// Results for every valid deleted column (or column/row pair) when verification ran.
    pub verified_choices: Vec<(usize, Option<usize>, i64)>,
}

/// A computed L2-Euler characteristic with its Thurston-norm lower bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerResult {
    pub chi2: i64,
    pub thurston_lower_bound: i64,
    pub diagnostics: Diagnostics,
}

impl EulerResult {
    pub fn new(chi2: i64, diagnostics: Diagnostics) -> Self {
        EulerResult { chi2, thurston_lower_bound: -chi2, diagnostics }
    }
}

/// Knobs for the pipeline.
#[derive(Clone, Debug, Default)]
pub struct ChiOptions {
    /// Column to delete; defaults to the first generator with nontrivial image.
    pub column: Option<usize>,
    /// Row to delete in the closed case; defaults to the first dual generator with
    /// nontrivial image.
    pub row: Option<usize>,
    /// Recompute for every valid choice and require agreement.
    pub all_choices: bool,
    pub strategy: PivotStrategy,
    pub limits: Limits,
}

/// The data that determines which rows and columns may be deleted.
struct Shape<'a> {
    dual: Option<&'a [FreeWord]>,
}

impl Shape<'_> {
    fn check(&self, p: &Presentation) -> Result<()> {
        match self.dual {
            None if p.deficiency() != 1 => Err(Error::Input(format!(
                "a presentation of a manifold with boundary needs deficiency 1, got {}",
                p.deficiency()
            ))),
            Some(d) if p.deficiency() != 0 => Err(Error::Input(format!(
                "a closed presentation needs as many relators as generators ({} vs {}, {} dual generators)",
                p.relators().len(),
                p.generator_count(),
                d.len()
            ))),
            Some(d) if d.len() != p.generator_count() => Err(Error::Input(format!(
                "expected {} dual generators, got {}",
                p.generator_count(),
                d.len()
            ))),
            _ => Ok(()),
        }
    }
}

fn nontrivial(map: &QuotientMap, w: &FreeWord) -> Result<bool> {
    Ok(!Group::is_identity(&map.eval_word(w)?))
}

fn valid_columns(map: &QuotientMap) -> Vec<usize> {
    (0..map.generators()).filter(|&i| !Group::is_identity(map.image(i))).collect()
}

fn valid_rows(map: &QuotientMap, dual: &[FreeWord]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (j, w) in dual.iter().enumerate() {
        if nontrivial(map, w)? {
            out.push(j);
        }
    }
    Ok(out)
}

/// Largest number of relators for which [`check_dual`] runs.
const DUAL_CHECK_MAX: usize = 6;

/// The cellular boundaries of a closed presentation compose to zero:
/// `sum_j +-(mu(x'_j)^(+-1) - 1) dr_j/dx_i = 0` for every `i`, with the orientation of each
/// relator free and the factor on either side.
fn check_dual(p: &Presentation, map: &QuotientMap, dual: &[FreeWord]) -> Result<()> {
    let m = dual.len();
    if m > DUAL_CHECK_MAX {
        return Ok(());
    }
    let group = map.group();
    let fox = fox_matrix(p, map)?;
    let one = GroupRingElement::one(group);
    for left in [true, false] {
        // terms[j][o][i]: row j, orientation o, column i
        let mut terms = Vec::with_capacity(m);
        for (w, row) in dual.iter().zip(&fox) {
            let g = map.eval_word(w)?;
            let mut per = Vec::with_capacity(2);
            for h in [group.inv(&g)?, g] {
                let f = GroupRingElement::basis(group, h).try_sub(&one)?;
                let cols = row
                    .iter()
                    .map(|x| if left { f.try_mul(x) } else { x.try_mul(&f) })
                    .collect::<Result<Vec<_>>>()?;
                per.push(cols);
            }
            terms.push(per);
        }
        for mask in 0..1usize << (2 * m).saturating_sub(1) {
            let mut vanishes = true;
            for i in 0..p.generator_count() {
                let mut acc = GroupRingElement::zero(group);
                for (j, per) in terms.iter().enumerate() {
                    let bits = if j == 0 { mask & 1 } else { mask >> (2 * j - 1) & 3 };
                    let t = &per[bits & 1][i];
                    acc = if bits & 2 == 0 { acc.try_add(t)? } else { acc.try_sub(t)? };
                }
                if !acc.is_zero() {
                    vanishes = false;
                    break;
                }
            }
            if vanishes {
                return Ok(());
            }
        }
    }
    Err(Error::Input(
        "dual generators do not match the relators: the boundary maps do not compose to zero".into(),
    ))
}

fn pick(choice: Option<usize>, valid: &[usize], what: &str) -> Result<usize> {
    match choice {
        Some(c) if valid.contains(&c) => Ok(c),
        Some(c) => Err(Error::Input(format!("{what} {c} does not have an infinite-order image"))),
        None => valid
            .first()
            .copied()
            .ok_or_else(|| Error::Input(format!("no {what} has an infinite-order image"))),
    }
}

/// Result of one deletion choice, before scaling.
struct Evaluation {
    chi: i64,
    degrees: Vec<usize>,
    coker: usize,
    boundary_terms: i64,
}

fn rewrite_matrix(split: &Splitting, fox: &[Vec<GroupRingElement>], cols: usize) -> Result<SkewMatrix> {
    let rows = fox
        .iter()
        .map(|r| r.iter().map(|x| split.rewrite(x)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(SkewMatrix::zeros(split.twist(), 0, cols));
    }
    SkewMatrix::from_rows(split.twist(), rows)
}

fn evaluate(
    split: &Splitting,
    full: &SkewMatrix,
    dual: Option<&[FreeWord]>,
    col: usize,
    row: Option<usize>,
    opts: &ChiOptions,
) -> Result<Evaluation> {
    let map = &split.reduced().map;
    let a = full.delete(row, Some(col));
    let d = diagonalize_with(&a, opts.strategy, &opts.limits)?;
    if !d.injective {
        return Err(Error::NotAcyclic(format!(
            "the Fox matrix with column {}{} deleted is not injective over the twisted Laurent ring",
            col + 1,
            row.map(|r| format!(" and row {}", r + 1)).unwrap_or_default()
        )));
    }
    let degrees: Vec<usize> = d.diagonal.iter().map(|x| x.degree()).collect::<Result<_>>()?;
    let coker: usize = degrees.iter().sum();
    let mut boundary = split.phi(map.image(col))?.abs();
    if let (Some(j), Some(dual)) = (row, dual) {
        boundary += split.phi(&map.eval_word(&dual[j])?)?.abs();
    }
    Ok(Evaluation { chi: boundary - coker as i64, degrees, coker, boundary_terms: boundary })
}

fn run(
    p: &Presentation,
    dual: Option<&[FreeWord]>,
    q: &QuotientSpec,
    phi: &PhiSpec,
    opts: &ChiOptions,
) -> Result<EulerResult> {
    Shape { dual }.check(p)?;
    q.validate(p)?;
    if let Some(d) = dual {
        for w in d {
            if w.max_generator().is_some_and(|g| g >= p.generator_count()) {
                return Err(Error::Input("dual generator uses an undeclared generator".into()));
            }
        }
        check_dual(p, q.map(), d)?;
    }
    match reduce_phi(q, phi)? {
        PhiReduction::Reduced(r) => run_reduced(p, dual, r, opts),
        PhiReduction::Trivial => run_trivial(p, dual, q, opts),
    }
}

fn run_reduced(
    p: &Presentation,
    dual: Option<&[FreeWord]>,
    reduced: ReducedData,
    opts: &ChiOptions,
) -> Result<EulerResult> {
    let split = split_reduced(reduced)?;
    let map = &split.reduced().map;
    let fox = fox_matrix(p, map)?;
    let full = rewrite_matrix(&split, &fox, p.generator_count())?;
    let cols = valid_columns(map);
    let rows = match dual {
        Some(d) => Some(valid_rows(map, d)?),
        None => None,
    };
    let col = pick(opts.column, &cols, "generator")?;
    let row = match &rows {
        Some(r) => Some(pick(opts.row, r, "dual generator")?),
        None => None,
    };
    let e = evaluate(&split, &full, dual, col, row, opts)?;
    let k = split.k() as i64;
    let mut diagnostics = Diagnostics {
        deleted_column: Some(col),
        deleted_row: row,
        diagonal_degrees: e.degrees,
        coker_dim: e.coker,
        boundary_terms: e.boundary_terms,
        scaling_factor: split.k(),
        reductions: split.reduced().notes.clone(),
        trivial_phi: false,
        verified_choices: Vec::new(),
    };
    if opts.all_choices {
        let row_choices: Vec<Option<usize>> = match &rows {
            Some(r) => r.iter().map(|&j| Some(j)).collect(),
            None => vec![None],
        };
        for &c in &cols {
            for &r in &row_choices {
                let other = evaluate(&split, &full, dual, c, r, opts)?.chi * k;
                diagnostics.verified_choices.push((c, r, other));
                if other != e.chi * k {
                    let at = |c: usize, r: Option<usize>| match r {
                        Some(r) => format!("column {} and row {}", c + 1, r + 1),
                        None => format!("column {}", c + 1),
                    };
                    return Err(Error::Mismatch(format!(
                        "deleting {} gives chi = {other}, deleting {} gives {}",
                        at(c, r),
                        at(col, row),
                        e.chi * k
                    )));
                }
            }
        }
    }
    Ok(EulerResult::new(e.chi * k, diagnostics))
}

/// Trivial `phi o mu`: the answer is 0 exactly when the deleted matrix is invertible
/// over the skew field of `G`, which is certified through an auxiliary splitting.
fn run_trivial(
    p: &Presentation,
    dual: Option<&[FreeWord]>,
    q: &QuotientSpec,
    opts: &ChiOptions,
) -> Result<EulerResult> {
    let aux = auxiliary_reduction(q)?;
    let split = split_reduced(aux)?;
    let map = &split.reduced().map;
    let fox = fox_matrix(p, map)?;
    let full = rewrite_matrix(&split, &fox, p.generator_count())?;
    let col = pick(opts.column, &valid_columns(map), "generator")?;
    let row = match dual {
        Some(d) => Some(pick(opts.row, &valid_rows(map, d)?, "dual generator")?),
        None => None,
    };
    let a = full.delete(row, Some(col));
    let d = diagonalize_with(&a, opts.strategy, &opts.limits)?;
    if !d.injective {
        return Err(Error::NotAcyclic(
            "phi o mu is trivial and the deleted Fox matrix is not invertible over D(G)".into(),
        ));
    }
    let diagnostics = Diagnostics {
        deleted_column: Some(col),
        deleted_row: row,
        scaling_factor: 0,
        reductions: vec!["phi o mu is trivial; acyclicity certified with an auxiliary character".into()],
        trivial_phi: true,
        ..Diagnostics::default()
    };
    Ok(EulerResult::new(0, diagnostics))
}

/// Some character that is nontrivial on the image of `mu`.
fn auxiliary_reduction(q: &QuotientSpec) -> Result<ReducedData> {
    match &**q.group() {
        Group::Abelian { rank } => {
            for i in 0..*rank {
                let mut v = vec![0; *rank];
                v[i] = 1;
                if let PhiReduction::Reduced(r) = reduce_phi(q, &PhiSpec::Abelian(v))? {
                    return Ok(r);
                }
            }
            Err(Error::Input("mu is trivial".into()))
        }
        Group::PolyZ { twist } => {
            if let PhiReduction::Reduced(r) = reduce_phi(q, &PhiSpec::PolyZ(1))? {
                return Ok(r);
            }
            // the image lies in Z^k, which is abelian and sits inside G
            let images = q.images().iter().map(|g| g[..g.len() - 1].to_vec()).collect();
            auxiliary_reduction(&QuotientSpec::abelian(twist.k(), images)?)
        }
    }
}

/// Euler characteristic of a presentation of a 3-manifold with nonempty boundary
/// (deficiency one), deleting one Fox matrix column.
pub fn chi2_boundary(p: &Presentation, q: &QuotientSpec, phi: &PhiSpec) -> Result<EulerResult> {
    run(p, None, q, phi, &ChiOptions::default())
}

pub fn chi2_boundary_with(
    p: &Presentation,
    q: &QuotientSpec,
    phi: &PhiSpec,
    opts: &ChiOptions,
) -> Result<EulerResult> {
    run(p, None, q, phi, opts)
}

/// Euler characteristic of a closed 3-manifold from a Heegaard presentation and its
/// dual generators, deleting one column and one row.
pub fn chi2_closed(
    p: &Presentation,
    dual: &[FreeWord],
    q: &QuotientSpec,
    phi: &PhiSpec,
) -> Result<EulerResult> {
    run(p, Some(dual), q, phi, &ChiOptions::default())
}

pub fn chi2_closed_with(
    p: &Presentation,
    dual: &[FreeWord],
    q: &QuotientSpec,
    phi: &PhiSpec,
    opts: &ChiOptions,
) -> Result<EulerResult> {
    run(p, Some(dual), q, phi, opts)
}

/// The deleted Fox matrix over the twisted Laurent ring, as handed to the
/// diagonalization, together with the boundary terms and the scaling factor.
#[derive(Clone, Debug)]
pub struct TwistedMatrix {
    pub matrix: SkewMatrix,
    pub column: usize,
    pub row: Option<usize>,
    pub boundary_terms: i64,
    pub k: u64,
}

/// Builds the matrix the pipeline would diagonalize; `phi o mu` must be nontrivial.
pub fn twisted_matrix(
    p: &Presentation,
    dual: Option<&[FreeWord]>,
    q: &QuotientSpec,
    phi: &PhiSpec,
    opts: &ChiOptions,
) -> Result<TwistedMatrix> {
    Shape { dual }.check(p)?;
    q.validate(p)?;
    let PhiReduction::Reduced(r) = reduce_phi(q, phi)? else {
        return Err(Error::Input("phi o mu is trivial".into()));
    };
    let split = split_reduced(r)?;
    let map = &split.reduced().map;
    let fox = fox_matrix(p, map)?;
    let full = rewrite_matrix(&split, &fox, p.generator_count())?;
    let column = pick(opts.column, &valid_columns(map), "generator")?;
    let row = match dual {
        Some(d) => Some(pick(opts.row, &valid_rows(map, d)?, "dual generator")?),
        None => None,
    };
    let mut boundary_terms = split.phi(map.image(column))?.abs();
    if let (Some(j), Some(d)) = (row, dual) {
        boundary_terms += split.phi(&map.eval_word(&d[j])?)?.abs();
    }
    Ok(TwistedMatrix { matrix: full.delete(row, Some(column)), column, row, boundary_terms, k: split.k() })
}

/// Dispatches on the presence of dual generators.
pub fn chi2(
    p: &Presentation,
    dual: Option<&[FreeWord]>,
    q: &QuotientSpec,
    phi: &PhiSpec,
    opts: &ChiOptions,
) -> Result<EulerResult> {
    run(p, dual, q, phi, opts)
}

/// The degree `delta = -chi`; a non-acyclic input is reported as an error.
pub fn delta_invariant(
    p: &Presentation,
    dual: Option<&[FreeWord]>,
    q: &QuotientSpec,
    phi: &PhiSpec,
) -> Result<i64> {
    Ok(-run(p, dual, q, phi, &ChiOptions::default())?.chi2)
}

/// Recomputes `chi(k phi)` for an abelian quotient without the scaling rule: the
/// image of `mu` is stretched by `k` along `phi` inside its own lattice, which turns
/// `k phi` into a character that is still surjective on the ambient lattice, and the
/// Fox matrix is evaluated from scratch in that lattice without further reduction.
pub fn chi2_stretched(
    p: &Presentation,
    dual: Option<&[FreeWord]>,
    q: &QuotientSpec,
    phi: &PhiSpec,
    k: u64,
    opts: &ChiOptions,
) -> Result<EulerResult> {
    if !matches!(**q.group(), Group::Abelian { .. }) {
        return Err(Error::Unsupported("stretching is only available for abelian quotients".into()));
    }
    Shape { dual }.check(p)?;
    q.validate(p)?;
    let PhiReduction::Reduced(r) = reduce_phi(q, phi)? else {
        return Err(Error::Input("phi o mu is trivial".into()));
    };
    let split = split_reduced(r.clone())?;
    let completion = split.completion().expect("abelian splitting").clone();
    // in split coordinates (t, u) the stretched map sends (t, u) to (t, k u)
    let images = r
        .map
        .images()
        .iter()
        .map(|g| {
            let (mut v, m) = split.split_element(g)?;
            let km = m.checked_mul(k as i64).ok_or_else(|| Error::Input("overflow".into()))?;
            v.push(km);
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let n = completion.nrows();
    let mut e = vec![0; n];
    e[n - 1] = 1;
    let direct = ReducedData::direct(QuotientMap::new(Group::abelian(n), images)?, PhiSpec::Abelian(e));
    let mut res = run_reduced(p, dual, direct, opts)?;
    res.chi2 *= r.k as i64;
    res.thurston_lower_bound = -res.chi2;
    res.diagnostics.scaling_factor *= r.k;
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::IntMatrix;

    fn trefoil() -> Presentation {
        Presentation::parse(&["x", "y"], &["x y x y^-1 x^-1 y^-1"]).unwrap()
    }

    #[test]
    fn trefoil_chi_is_minus_one() {
        let p = trefoil();
        let q = QuotientSpec::abelianization(&p).unwrap();
        let phi = PhiSpec::Abelian(vec![1]);
        let r = chi2_boundary(&p, &q, &phi).unwrap();
        assert_eq!(r.chi2, -1);
        assert_eq!(r.thurston_lower_bound, 1);
        assert_eq!(r.diagnostics.coker_dim, 2);
        let r = chi2_boundary(&p, &q, &PhiSpec::Abelian(vec![-3])).unwrap();
        assert_eq!(r.chi2, -3);
        let r = chi2_stretched(&p, None, &q, &phi, 3, &ChiOptions::default()).unwrap();
        assert_eq!(r.chi2, -3);
        let opts = ChiOptions { all_choices: true, ..ChiOptions::default() };
        let r = chi2_boundary_with(&p, &q, &phi, &opts).unwrap();
        assert_eq!(r.diagnostics.verified_choices.len(), 2);
    }

    #[test]
    fn stretched_image_of_mu() {
        // mu(x) = mu(y) = t^3 into Z with phi = id: index 3, chi = -3
        let p = trefoil();
        let q = QuotientSpec::abelian(1, vec![vec![3], vec![3]]).unwrap();
        assert_eq!(chi2_boundary(&p, &q, &PhiSpec::Abelian(vec![1])).unwrap().chi2, -3);
    }

    #[test]
    fn solid_torus() {
        let p = Presentation::parse::<&str>(&["x"], &[]).unwrap();
        let q = QuotientSpec::abelianization(&p).unwrap();
        for k in 1..4 {
            assert_eq!(chi2_boundary(&p, &q, &PhiSpec::Abelian(vec![k])).unwrap().chi2, k);
        }
    }

    #[test]
    fn hopf_link_trivial_and_nontrivial_phi() {
        let p = Presentation::parse(&["x", "y"], &["x y x^-1 y^-1"]).unwrap();
        let q = QuotientSpec::abelianization(&p).unwrap();
        assert_eq!(chi2_boundary(&p, &q, &PhiSpec::Abelian(vec![1, 1])).unwrap().chi2, 0);
        let r = chi2_boundary(&p, &q, &PhiSpec::Abelian(vec![0, 0])).unwrap();
        assert!(r.diagnostics.trivial_phi);
        assert_eq!(r.chi2, 0);
    }

    #[test]
    fn klein_bottle_bundle() {
        let p = Presentation::parse(&["a", "b"], &["a b a^-1 b"]).unwrap();
        let q = QuotientSpec::poly_z(IntMatrix::from_rows(vec![vec![-1]]).unwrap(), vec![vec![0, 1], vec![1, 0]])
            .unwrap();
        let opts = ChiOptions { all_choices: true, ..ChiOptions::default() };
        let r = chi2_boundary_with(&p, &q, &PhiSpec::PolyZ(1), &opts).unwrap();
        assert_eq!(r.chi2, 0);
    }

    #[test]
    fn punctured_torus_bundle() {
        let p = Presentation::parse(&["a", "b", "s"], &["s a s^-1 b^-1 a^-1", "s b s^-1 b^-1 a^-1 b^-1"])
            .unwrap();
        let q = QuotientSpec::poly_z(
            IntMatrix::from_rows(vec![vec![1, 1], vec![1, 2]]).unwrap(),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        )
        .unwrap();
        let opts = ChiOptions { all_choices: true, ..ChiOptions::default() };
        let r = chi2_boundary_with(&p, &q, &PhiSpec::PolyZ(1), &opts).unwrap();
        assert_eq!(r.chi2, -1);
        assert_eq!(chi2_boundary(&p, &q, &PhiSpec::PolyZ(2)).unwrap().chi2, -2);
    }

    #[test]
    fn three_torus_closed() {
        let p = Presentation::parse(&["x", "y", "z"], &["x y x^-1 y^-1", "y z y^-1 z^-1", "z x z^-1 x^-1"])
            .unwrap();
        let dual: Vec<FreeWord> = ["z", "x", "y"].iter().map(|s| p.parse_word(s).unwrap()).collect();
        let q = QuotientSpec::abelianization(&p).unwrap();
        let opts = ChiOptions { all_choices: true, ..ChiOptions::default() };
        let r = chi2_closed_with(&p, &dual, &q, &PhiSpec::Abelian(vec![1, 0, 0]), &opts).unwrap();
        assert_eq!(r.chi2, 0);
        assert_eq!(r.diagnostics.verified_choices.len(), 9);
    }

    #[test]
    fn input_errors() {
        let p = trefoil();
        let q = QuotientSpec::abelian(1, vec![vec![1], vec![2]]).unwrap();
        assert!(matches!(chi2_boundary(&p, &q, &PhiSpec::Abelian(vec![1])), Err(Error::Input(_))));
        let closed = Presentation::parse(&["x"], &["x"]).unwrap();
        let q = QuotientSpec::abelianization(&closed).unwrap();
        assert!(chi2_boundary(&closed, &q, &PhiSpec::Abelian(vec![])).is_err());
    }
}
