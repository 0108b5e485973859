//! The acceptance suite: fourteen exact checks against closed-form families,
//! independent oracles and randomized property runs, with pinned seeds and time budgets.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{builtin_job, builtin_jobs, Job};
use crate::error::{Error, Result};
use crate::euler::{
    chi2, chi2_stretched, infinite_cyclic_chi2, seifert_chi2, split_along_phi, thurston_from_genus,
    twisted_matrix, ChiOptions, PhiSpec, QuotientSpec, SeifertBase,
};
use crate::intmat::IntMatrix;
use crate::oracles::{
    associated, commutative_det, fox_derivative_recursive, fundamental_identity, truncated_coker,
};
use crate::polytope::{
    d_eval, difference_equal, minkowski_sum, polytope_of_unit, IntegralPolytope, PolytopeDifference,
};
use crate::presentation::{fox_gradient, reduce_word, FreeWord, QuotientMap};
use crate::reduction::{coker_dim, diagonalize, ik_bound_check, SkewMatrix};
use crate::ring::{int, Group, GroupRingElement, LaurentPoly, RationalFunction};
use crate::skew::{SkewLaurentPoly, Twist};

/// Seed of every randomized criterion.
pub const SEED: u64 = 0x5EED_2024_0001;

/// Sample sizes of the randomized criteria.
pub const LAURENT_SAMPLES: usize = 200;
pub const IK_SAMPLES: usize = 100;
pub const NEWTON_SAMPLES: usize = 100;
pub const BRIDGE_SAMPLES: usize = 100;
pub const FOX_SAMPLES: usize = 200;
pub const POLYTOPE_SAMPLES: usize = 100;
pub const DET_SAMPLES: usize = 100;
pub const SCALING_RANGE: std::ops::RangeInclusive<i64> = 1..=5;
pub const MIN_COLUMN_ENTRIES: usize = 5;

/// Expected values the suite compares against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Goldens {
    pub trefoil_chi2: i64,
    pub trefoil_genus: u64,
    pub figure_eight_chi2: i64,
    /// Coefficients of the Alexander polynomial, constant term first.
    pub figure_eight_alexander: Vec<i64>,
    pub seifert_trefoil: i64,
    pub infinite_cyclic_dim_h1: u64,
}

impl Default for Goldens {
    fn default() -> Self {
        Goldens {
            trefoil_chi2: -1,
            trefoil_genus: 1,
            figure_eight_chi2: -1,
            figure_eight_alexander: vec![1, -3, 1],
            seifert_trefoil: -1,
            infinite_cyclic_dim_h1: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u64,
    pub budget_ms: Option<u64>,
}

impl std::fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let budget = self.budget_ms.map(|b| format!(" / {b} ms")).unwrap_or_default();
        write!(
            f,
            "[{}] {:>2} {} ({} ms{budget}): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms,
            self.detail
        )
    }
}

struct Criterion {
    id: u8,
    name: &'static str,
    budget: Option<Duration>,
    run: fn(&Goldens) -> Result<Outcome>,
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { passed: true, detail: detail.into() })
}

fn fail(detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { passed: false, detail: detail.into() })
}

const fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "trefoil exterior", budget: secs(1), run: trefoil },
    Criterion { id: 2, name: "figure-eight knot", budget: secs(1), run: figure_eight },
    Criterion { id: 3, name: "torus knots", budget: secs(5), run: torus_knots },
    Criterion { id: 4, name: "scaling law", budget: None, run: scaling },
    Criterion { id: 5, name: "column-choice independence", budget: None, run: columns },
    Criterion { id: 6, name: "degree equals cokernel dimension", budget: secs(30), run: laurent_degree },
    Criterion { id: 7, name: "cokernel bound for A + u I_k", budget: secs(60), run: ik_bound },
    Criterion { id: 8, name: "Newton polytope product law", budget: None, run: newton_product },
    Criterion { id: 9, name: "polytope-degree bridge", budget: None, run: bridge },
    Criterion { id: 10, name: "fundamental Fox identity", budget: None, run: fox_identity },
    Criterion { id: 11, name: "Seifert cross-check", budget: None, run: seifert },
    Criterion { id: 12, name: "polytope group axioms", budget: None, run: polytope_group },
    Criterion { id: 13, name: "determinant degree", budget: None, run: det_degree },
    Criterion { id: 14, name: "infinite cyclic cover", budget: None, run: infinite_cyclic },
];

pub fn criterion_count() -> usize {
    CRITERIA.len()
}

/// Runs one criterion by id.
pub fn run_one(id: u8, goldens: &Goldens) -> Option<CriterionReport> {
    CRITERIA.iter().find(|c| c.id == id).map(|c| execute(c, goldens))
}

pub fn run_all(goldens: &Goldens) -> Vec<CriterionReport> {
    CRITERIA.iter().map(|c| execute(c, goldens)).collect()
}

fn execute(c: &Criterion, goldens: &Goldens) -> CriterionReport {
    let start = Instant::now();
    let outcome = (c.run)(goldens);
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(o) => (o.passed, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(b) = c.budget {
        if elapsed > b {
            passed = false;
            detail = format!("{detail}; over the time budget");
        }
    }
    CriterionReport {
        id: c.id,
        name: c.name.to_string(),
        passed,
        detail,
        elapsed_ms: elapsed.as_millis() as u64,
        budget_ms: c.budget.map(|b| b.as_millis() as u64),
    }
}

fn run_job(job: &Job, opts: &ChiOptions) -> Result<crate::euler::EulerResult> {
    chi2(&job.presentation, job.dual(), &job.quotient, &job.phi, opts)
}

fn trefoil(g: &Goldens) -> Result<Outcome> {
    let job = builtin_job("trefoil")?;
    let r = run_job(&job, &ChiOptions::default())?;
    let norm = thurston_from_genus(g.trefoil_genus) as i64;
    if r.chi2 != g.trefoil_chi2 {
        return fail(format!("chi2: expected {}, got {}", g.trefoil_chi2, r.chi2));
    }
    if r.thurston_lower_bound != norm {
        return fail(format!("lower bound {} differs from max(2g-1, 0) = {norm}", r.thurston_lower_bound));
    }
    pass(format!("chi2 = {}, lower bound = {norm} = max(2g-1, 0)", r.chi2))
}

fn figure_eight(g: &Goldens) -> Result<Outcome> {
    let job = builtin_job("figure_eight")?;
    let r = run_job(&job, &ChiOptions::default())?;
    if r.chi2 != g.figure_eight_chi2 {
        return fail(format!("chi2: expected {}, got {}", g.figure_eight_chi2, r.chi2));
    }
    let tm = twisted_matrix(&job.presentation, None, &job.quotient, &job.phi, &ChiOptions::default())?;
    if tm.matrix.nrows() != 1 || tm.matrix.ncols() != 1 {
        return fail("deleted Fox matrix is not 1x1");
    }
    let tw = tm.matrix.twist().clone();
    let expected = SkewLaurentPoly::from_coeffs(
        &tw,
        g.figure_eight_alexander
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as i64, RationalFunction::constant(tw.k(), int(c)))),
    )?;
    let entry = tm.matrix.get(0, 0);
    if !associated(entry, &expected)? {
        return fail(format!("deleted Fox entry {entry:?} is not a unit multiple of {expected:?}"));
    }
    pass(format!("chi2 = {}, deleted Fox entry {entry:?} ~ {expected:?}", r.chi2))
}

fn torus_knots(_: &Goldens) -> Result<Outcome> {
    let mut checked = 0;
    for p in 2..=7i64 {
        for q in p + 1..=7 {
            if p.gcd(&q) != 1 {
                continue;
            }
            let job = builtin_job(&format!("torus_knot_{p}_{q}"))?;
            let r = run_job(&job, &ChiOptions::default())?;
            let expected = p * q - p - q;
            let from_genus = job.genus.map(|g| thurston_from_genus(g) as i64);
            if -r.chi2 != expected || from_genus != Some(expected) {
                return fail(format!(
                    "T({p},{q}): -chi2 = {}, pq - p - q = {expected}, 2g - 1 = {from_genus:?}",
                    -r.chi2
                ));
            }
            checked += 1;
        }
    }
    if checked != 11 {
        return fail(format!("expected 11 torus knots, checked {checked}"));
    }
    pass(format!("{checked} torus knots, -chi2 = pq - p - q = 2g - 1"))
}

fn scaling(_: &Goldens) -> Result<Outcome> {
    let jobs = builtin_jobs()?;
    let mut checks = 0;
    for job in &jobs {
        let base = run_job(job, &ChiOptions::default())?.chi2;
        let abelian = matches!(**job.quotient.group(), Group::Abelian { .. });
        for k in SCALING_RANGE {
            let scaled = chi2(&job.presentation, job.dual(), &job.quotient, &job.phi.scaled(k), &ChiOptions::default())?;
            if scaled.chi2 != k * base {
                return fail(format!("{}: chi(k phi) = {} for k = {k}, k chi(phi) = {}", job.name, scaled.chi2, k * base));
            }
            if abelian && !job.phi.is_zero() {
                let s = chi2_stretched(
                    &job.presentation,
                    job.dual(),
                    &job.quotient,
                    &job.phi,
                    k as u64,
                    &ChiOptions::default(),
                )?;
                if s.chi2 != k * base {
                    return fail(format!(
                        "{}: stretched recomputation gives {} for k = {k}, expected {}",
                        job.name,
                        s.chi2,
                        k * base
                    ));
                }
            }
            checks += 1;
        }
    }
    pass(format!("{} corpus entries x k = 1..5 ({checks} checks)", jobs.len()))
}

fn columns(_: &Goldens) -> Result<Outcome> {
    let opts = ChiOptions { all_choices: true, ..ChiOptions::default() };
    let mut multi = 0;
    let mut choices = 0;
    for job in builtin_jobs()? {
        let r = run_job(&job, &opts)?;
        let n = r.diagnostics.verified_choices.len();
        if n >= 2 {
            multi += 1;
        }
        choices += n;
    }
    if multi < MIN_COLUMN_ENTRIES {
        return fail(format!("only {multi} presentations with two or more valid choices"));
    }
    pass(format!("{multi} presentations, {choices} deletion choices, all agree"))
}

fn twists(rng: &mut ChaCha8Rng) -> Result<Arc<Twist>> {
    let mats: &[&[&[i64]]] = &[
        &[],
        &[&[1]],
        &[&[-1]],
        &[&[1, 0], &[0, 1]],
        &[&[1, 1], &[0, 1]],
        &[&[0, -1], &[1, 0]],
        &[&[2, 1], &[1, 1]],
    ];
    let m = mats[rng.gen_range(0..mats.len())];
    if m.is_empty() {
        return Ok(Twist::identity(0));
    }
    Twist::new(IntMatrix::from_rows(m.iter().map(|r| r.to_vec()).collect())?)
}

fn random_laurent(rng: &mut ChaCha8Rng, nvars: usize, terms: usize, lo: i64, hi: i64) -> Result<LaurentPoly> {
    loop {
        let f = LaurentPoly::from_terms(
            nvars,
            (0..terms).map(|_| {
                let e: Vec<i64> = (0..nvars).map(|_| rng.gen_range(lo..=hi)).collect();
                let mut c = rng.gen_range(-3..=3);
                if c == 0 {
                    c = 1;
                }
                (e, int(c))
            }),
        )?;
        if !f.is_zero() {
            return Ok(f);
        }
    }
}

fn random_coefficient(rng: &mut ChaCha8Rng, nvars: usize) -> Result<RationalFunction> {
    if nvars == 0 {
        let mut c = rng.gen_range(-4..=4);
        if c == 0 {
            c = 1;
        }
        return Ok(RationalFunction::constant(0, crate::ring::rat(c, rng.gen_range(1..=3))));
    }
    let terms = rng.gen_range(1..=2);
    let num = random_laurent(rng, nvars, terms, -1, 1)?;
    if rng.gen_bool(0.25) {
        let den = random_laurent(rng, nvars, 2, 0, 1)?;
        RationalFunction::from_laurent_fraction(&num, &den)
    } else {
        Ok(RationalFunction::from_laurent(&num))
    }
}

fn random_skew(rng: &mut ChaCha8Rng, tw: &Arc<Twist>, max_deg: i64, allow_zero: bool) -> Result<SkewLaurentPoly> {
    if allow_zero && rng.gen_bool(0.2) {
        return Ok(SkewLaurentPoly::zero(tw));
    }
    let lo = rng.gen_range(-1..=1);
    let d = rng.gen_range(0..=max_deg);
    let mut coeffs = Vec::new();
    for m in lo..=lo + d {
        let interior = m != lo && m != lo + d;
        if interior && rng.gen_bool(0.3) {
            continue;
        }
        coeffs.push((m, random_coefficient(rng, tw.k())?));
    }
    SkewLaurentPoly::from_coeffs(tw, coeffs)
}

fn laurent_degree(_: &Goldens) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut twisted = 0;
    for i in 0..LAURENT_SAMPLES {
        let tw = twists(&mut rng)?;
        if !tw.is_identity() {
            twisted += 1;
        }
        let x = random_skew(&mut rng, &tw, 3, false)?;
        let deg = x.degree()?;
        let m = SkewMatrix::from_rows(&tw, vec![vec![x.clone()]])?;
        let ours = coker_dim(&m)?;
        let oracle = truncated_coker(&m, deg.div_ceil(2).max(1))?;
        if !oracle.stable || oracle.coker != Some(deg) || ours != Some(deg) {
            return fail(format!(
                "sample {i}: deg = {deg}, coker_dim = {ours:?}, truncated oracle = {:?} (stable: {})",
                oracle.coker, oracle.stable
            ));
        }
    }
    pass(format!("{LAURENT_SAMPLES} elements ({twisted} with a nontrivial twist), oracle agrees"))
}

fn ik_bound(_: &Goldens) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let mut injective = 0;
    for i in 0..IK_SAMPLES {
        let tw = twists(&mut rng)?;
        let n = rng.gen_range(1..=4);
        let k = rng.gen_range(0..=n);
        let a: Vec<Vec<RationalFunction>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        if rng.gen_bool(0.3) {
                            Ok(RationalFunction::zero(tw.k()))
                        } else {
                            random_coefficient(&mut rng, tw.k())
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let r = ik_bound_check(&tw, &a, k, n)?;
        if !r.holds {
            return fail(format!("sample {i}: n = {n}, k = {k}, cokernel dimension {:?}", r.dimension));
        }
        if r.injective {
            injective += 1;
        }
    }
    pass(format!("{IK_SAMPLES} triples, {injective} injective, all within the bound"))
}

fn newton_product(_: &Goldens) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    for i in 0..NEWTON_SAMPLES {
        let nv = rng.gen_range(1..=3);
        let f = random_bounded(&mut rng, nv, 5)?;
        let g = random_bounded(&mut rng, nv, 5)?;
        let lhs = f.try_mul(&g)?.newton_polytope()?;
        let rhs = minkowski_sum(&f.newton_polytope()?, &g.newton_polytope()?)?;
        if lhs.vertices() != rhs.vertices() {
            return fail(format!("pair {i}: P(fg) = {:?}, P(f) + P(g) = {:?}", lhs.vertices(), rhs.vertices()));
        }
    }
    pass(format!("{NEWTON_SAMPLES} pairs, vertex sets equal"))
}

/// Random polynomial with total degree at most `deg`.
fn random_bounded(rng: &mut ChaCha8Rng, nvars: usize, deg: i64) -> Result<LaurentPoly> {
    loop {
        let terms = rng.gen_range(1..=5);
        let f = LaurentPoly::from_terms(
            nvars,
            (0..terms).map(|_| {
                let mut left = deg;
                let e: Vec<i64> = (0..nvars)
                    .map(|_| {
                        let x = rng.gen_range(0..=left);
                        left -= x;
                        x
                    })
                    .collect();
                (e, int(rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 }))
            }),
        )?;
        if !f.is_zero() {
            return Ok(f);
        }
    }
}

fn random_primitive(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let g = v.iter().fold(0i64, |g, x| g.gcd(x));
        if g == 1 {
            return v;
        }
    }
}

fn bridge(_: &Goldens) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    for i in 0..BRIDGE_SAMPLES {
        let n = rng.gen_range(1..=3);
        let terms = rng.gen_range(1..=5);
        let f = random_laurent(&mut rng, n, terms, -2, 2)?;
        let phi = random_primitive(&mut rng, n);
        let images = (0..n).map(|j| (0..n).map(|c| i64::from(c == j)).collect()).collect();
        let q = QuotientSpec::abelian(n, images)?;
        let split = split_along_phi(&q, &PhiSpec::Abelian(phi.clone()))?;
        let group = Group::abelian(n);
        let mut x = GroupRingElement::zero(&group);
        for (e, c) in f.terms() {
            x = x.try_add(&GroupRingElement::term(&group, e.clone(), c.clone()))?;
        }
        let deg = split.rewrite_ambient(&x)?.degree()?;
        let value = d_eval(&polytope_of_unit(&f, &LaurentPoly::one(n))?, &phi)?;
        let twice = value * int(2);
        if twice != int(deg as i64) {
            return fail(format!("sample {i}: f = {f}, phi = {phi:?}: 2 d_eval = {twice}, degree {deg}"));
        }
    }
    pass(format!("{BRIDGE_SAMPLES} elements, 2 d_eval = degree of the rewrite"))
}

fn random_quotient(rng: &mut ChaCha8Rng, gens: usize) -> Result<QuotientMap> {
    if rng.gen_bool(0.5) {
        let r = rng.gen_range(1..=3);
        let images = (0..gens).map(|_| (0..r).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        QuotientMap::new(Group::abelian(r), images)
    } else {
        let tw = loop {
            let t = twists(rng)?;
            if t.k() > 0 {
                break t;
            }
        };
        let images = (0..gens).map(|_| (0..=tw.k()).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        QuotientMap::new(Group::poly_z(tw.matrix().clone())?, images)
    }
}

fn fox_identity(_: &Goldens) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10);
    let mut total_len = 0;
    for i in 0..FOX_SAMPLES {
        let gens = rng.gen_range(1..=4);
        let len = rng.gen_range(0..=20);
        let raw: Vec<(usize, i8)> =
            (0..len).map(|_| (rng.gen_range(0..gens), if rng.gen_bool(0.5) { 1 } else { -1 })).collect();
        let w: FreeWord = reduce_word(&raw, gens)?;
        total_len += w.len();
        let mu = random_quotient(&mut rng, gens)?;
        let grad = fox_gradient(&w, &mu)?;
        if !fundamental_identity(&w, &grad, &mu)? {
            return fail(format!("word {i}: identity fails"));
        }
        for (g, d) in grad.iter().enumerate() {
            if *d != fox_derivative_recursive(&w, g, &mu)? {
                return fail(format!("word {i}: derivative by generator {g} differs from the product-rule oracle"));
            }
        }
    }
    pass(format!("{FOX_SAMPLES} words (total reduced length {total_len}), identity and product rule hold"))
}

fn seifert(g: &Goldens) -> Result<Outcome> {
    let base = SeifertBase { genus: 0, boundary: 1, cone_orders: vec![2, 3] };
    let s = seifert_chi2(&base, 6)?;
    let r = run_job(&builtin_job("trefoil")?, &ChiOptions::default())?;
    if s != int(g.seifert_trefoil) || s != int(r.chi2) {
        return fail(format!("Seifert formula {s}, expected {}, pipeline {}", g.seifert_trefoil, r.chi2));
    }
    pass(format!("chi_orb(D(2,3)) * 6 = {s} = pipeline chi2"))
}

fn random_polytope(rng: &mut ChaCha8Rng, dim: usize) -> Result<IntegralPolytope> {
    let n = rng.gen_range(1..=6);
    IntegralPolytope::canonicalize(dim, (0..n).map(|_| (0..dim).map(|_| rng.gen_range(-3..=3)).collect()))
}

fn polytope_group(_: &Goldens) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 12);
    let mut equal_cases = 0;
    for i in 0..POLYTOPE_SAMPLES {
        let dim = rng.gen_range(1..=3);
        let p = random_polytope(&mut rng, dim)?;
        let r = random_polytope(&mut rng, dim)?;
        let q = if rng.gen_bool(0.3) {
            equal_cases += 1;
            let mut pts = p.vertices().to_vec();
            pts.reverse();
            pts.extend(p.vertices().iter().cloned());
            IntegralPolytope::canonicalize(dim, pts)?
        } else {
            random_polytope(&mut rng, dim)?
        };
        let sums_equal = minkowski_sum(&p, &r)? == minkowski_sum(&q, &r)?;
        if sums_equal != (p == q) {
            return fail(format!("instance {i}: cancellation fails for P = {:?}, Q = {:?}", p.vertices(), q.vertices()));
        }
        let z = PolytopeDifference::new(p.clone(), q.clone())?;
        let shifted = PolytopeDifference::new(minkowski_sum(&p, &r)?, minkowski_sum(&q, &r)?)?;
        if !difference_equal(&z, &shifted)? {
            return fail(format!("instance {i}: [P] - [Q] differs from [P + R] - [Q + R]"));
        }
        if !z.add(&z.neg())?.equals(&PolytopeDifference::zero(dim))? {
            return fail(format!("instance {i}: z + (-z) is not zero"));
        }
        let w = PolytopeDifference::from_polytope(r.clone());
        if !z.add(&w)?.equals(&w.add(&z)?)? {
            return fail(format!("instance {i}: addition does not commute"));
        }
        let phi: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
        if z.add(&w)?.eval(&phi)? != z.eval(&phi)? + w.eval(&phi)? {
            return fail(format!("instance {i}: evaluation is not additive"));
        }
    }
    pass(format!("{POLYTOPE_SAMPLES} instances ({equal_cases} with P = Q), all axioms hold"))
}

fn det_degree(_: &Goldens) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 13);
    let mut done = 0;
    let mut commutative = 0;
    let mut attempts = 0;
    while done < DET_SAMPLES {
        attempts += 1;
        if attempts > 20 * DET_SAMPLES {
            return fail(format!("only {done} injective samples found"));
        }
        let tw = loop {
            let t = twists(&mut rng)?;
            if t.k() <= 1 {
                break t;
            }
        };
        let n = rng.gen_range(1..=3);
        let rows = (0..n)
            .map(|_| (0..n).map(|_| random_skew(&mut rng, &tw, 2, true)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let m = SkewMatrix::from_rows(&tw, rows)?;
        let d = diagonalize(&m)?;
        let Some(det) = d.det_class.clone() else { continue };
        let coker = d.coker_dim().expect("injective");
        let span = m
            .rows()
            .iter()
            .map(|r| {
                let lo = r.iter().filter_map(|x| x.low()).min().unwrap_or(0);
                let hi = r.iter().filter_map(|x| x.high()).max().unwrap_or(0);
                (hi - lo) as usize
            })
            .max()
            .unwrap_or(0);
        let oracle = truncated_coker(&m, span.div_ceil(2).max(1))?;
        if det.degree()? != coker || oracle.coker != Some(coker) || !oracle.stable {
            return fail(format!(
                "sample {done}: det degree {}, coker_dim {coker}, truncated oracle {:?}",
                det.degree()?,
                oracle.coker
            ));
        }
        if tw.is_identity() {
            if !associated(&det, &commutative_det(&m)?)? {
                return fail(format!("sample {done}: det class is not a unit multiple of the determinant"));
            }
            commutative += 1;
        }
        done += 1;
    }
    pass(format!(
        "{done} injective matrices, degree = coker_dim = oracle; {commutative} also matched the ordinary determinant"
    ))
}

fn infinite_cyclic(g: &Goldens) -> Result<Outcome> {
    let oracle = infinite_cyclic_chi2(g.infinite_cyclic_dim_h1, true, 1);
    let r = run_job(&builtin_job("trefoil")?, &ChiOptions::default())?;
    if oracle != r.chi2 || r.diagnostics.coker_dim as u64 != g.infinite_cyclic_dim_h1 {
        return fail(format!(
            "oracle {oracle}, pipeline {} with cokernel dimension {}",
            r.chi2, r.diagnostics.coker_dim
        ));
    }
    pass(format!("1 - dim H1 = {oracle} = pipeline chi2"))
}

/// Summary line for a list of reports.
pub fn summary(reports: &[CriterionReport]) -> String {
    let passed = reports.iter().filter(|r| r.passed).count();
    format!("{passed}/{} criteria passed", reports.len())
}

/// Error for a run with failures, for callers that need a `Result`.
pub fn require_all(reports: &[CriterionReport]) -> Result<()> {
    match reports.iter().find(|r| !r.passed) {
        None => Ok(()),
        Some(r) => Err(Error::Mismatch(format!("criterion {} failed: {}", r.id, r.detail))),
    }
}
