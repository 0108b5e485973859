use l2euler::corpus::{builtin_job, builtin_jobs, Job};
use l2euler::euler::{
    chi2, chi2_stretched, cover_scale, delta_invariant, fibered_norm, infinite_cyclic_chi2, jsj_sum,
    seifert_chi2, thurston_from_genus, ChiOptions, EulerResult, PhiSpec, SeifertBase,
};
use l2euler::ring::{rat, Group};
use l2euler::Error;

fn run(job: &Job, opts: &ChiOptions) -> Result<EulerResult, Error> {
    chi2(&job.presentation, job.dual(), &job.quotient, &job.phi, opts)
}

const KNOT_EXTERIORS: &[&str] = &[
    "trefoil",
    "trefoil_wirtinger",
    "figure_eight",
    "torus_knot_2_3",
    "torus_knot_2_5",
    "torus_knot_2_7",
    "torus_knot_3_4",
    "torus_knot_3_5",
    "torus_knot_3_7",
    "torus_knot_4_5",
    "torus_knot_4_7",
    "torus_knot_5_6",
    "torus_knot_5_7",
    "torus_knot_6_7",
];

#[test]
fn lower_bound_never_exceeds_the_known_norm() {
    for job in builtin_jobs().unwrap() {
        let r = run(&job, &ChiOptions::default()).unwrap();
        if let Some(norm) = job.expected_norm {
            assert!(r.thurston_lower_bound <= norm, "{}: bound {} > norm {norm}", job.name, r.thurston_lower_bound);
        }
    }
}

#[test]
fn knot_exteriors_attain_the_genus_bound() {
    for name in KNOT_EXTERIORS {
        let job = builtin_job(name).unwrap();
        let r = run(&job, &ChiOptions::default()).unwrap();
        let g = job.genus.expect("knots carry their genus");
        assert_eq!(r.thurston_lower_bound, thurston_from_genus(g) as i64, "{name}");
    }
}

#[test]
fn delta_is_minus_chi_on_the_corpus() {
    for job in builtin_jobs().unwrap() {
        let chi = run(&job, &ChiOptions::default()).unwrap().chi2;
        let delta = delta_invariant(&job.presentation, job.dual(), &job.quotient, &job.phi).unwrap();
        assert_eq!(delta, -chi, "{}", job.name);
    }
}

#[test]
fn every_deletion_choice_agrees() {
    let opts = ChiOptions { all_choices: true, ..ChiOptions::default() };
    for job in builtin_jobs().unwrap() {
        let r = run(&job, &opts).unwrap();
        assert!(!r.diagnostics.verified_choices.is_empty(), "{}", job.name);
        assert!(r.diagnostics.verified_choices.iter().all(|c| c.2 == r.chi2), "{}", job.name);
    }
}

#[test]
fn explicit_column_choice_is_honoured() {
    let job = builtin_job("trefoil_wirtinger").unwrap();
    for column in 0..job.presentation.generator_count() {
        let opts = ChiOptions { column: Some(column), ..ChiOptions::default() };
        let r = run(&job, &opts).unwrap();
        assert_eq!(r.diagnostics.deleted_column, Some(column));
        assert_eq!(r.chi2, -1);
    }
}

#[test]
fn scaling_by_k_multiplies_chi() {
    for job in builtin_jobs().unwrap() {
        let base = run(&job, &ChiOptions::default()).unwrap().chi2;
        for k in 1..=4 {
            let phi = job.phi.scaled(k);
            let r = chi2(&job.presentation, job.dual(), &job.quotient, &phi, &ChiOptions::default()).unwrap();
            assert_eq!(r.chi2, k * base, "{} at k = {k}", job.name);
            assert_eq!(r.diagnostics.scaling_factor % k as u64, 0);
            if matches!(**job.quotient.group(), Group::Abelian { .. }) {
                let s = chi2_stretched(&job.presentation, job.dual(), &job.quotient, &job.phi, k as u64, &ChiOptions::default())
                    .unwrap();
                assert_eq!(s.chi2, k * base, "{} stretched at k = {k}", job.name);
            }
        }
    }
}

#[test]
fn special_values() {
    let chi = |name: &str| run(&builtin_job(name).unwrap(), &ChiOptions::default()).unwrap().chi2;
    assert_eq!(chi("solid_torus"), 1);
    assert_eq!(chi("three_torus"), 0);
    assert_eq!(chi("hopf_link"), 0);
    assert_eq!(chi("klein_bundle"), 0);
    assert_eq!(chi("punctured_torus_bundle"), -1);
    let pb = builtin_job("punctured_torus_bundle").unwrap();
    assert_eq!(run(&pb, &ChiOptions::default()).unwrap().thurston_lower_bound, fibered_norm(-1) as i64);
}

#[test]
fn trivial_character_gives_zero_when_certified() {
    let job = builtin_job("hopf_link").unwrap();
    let r = chi2(&job.presentation, None, &job.quotient, &PhiSpec::Abelian(vec![0, 0]), &ChiOptions::default());
    match r {
        Ok(r) => {
            assert_eq!(r.chi2, 0);
            assert!(r.diagnostics.trivial_phi);
        }
        Err(e) => assert!(matches!(e, Error::NotAcyclic(_)), "{e}"),
    }
}

#[test]
fn size_guard_aborts_large_reductions() {
    let job = builtin_job("torus_knot_6_7").unwrap();
    let mut opts = ChiOptions::default();
    opts.limits.max_bytes = 4;
    assert!(matches!(run(&job, &opts), Err(Error::SizeGuard { .. })));
}

#[test]
fn closed_formulas() {
    assert_eq!(thurston_from_genus(0), 0);
    assert_eq!(thurston_from_genus(1), 1);
    assert_eq!(fibered_norm(-1), 1);
    assert_eq!(fibered_norm(2), 0);
    assert_eq!(cover_scale(3, 4), 12);
    assert_eq!(infinite_cyclic_chi2(2, true, 1), -1);
    assert_eq!(infinite_cyclic_chi2(2, false, 1), 0);
    let trefoil = SeifertBase { genus: 0, boundary: 1, cone_orders: vec![2, 3] };
    assert_eq!(trefoil.orbifold_euler_characteristic().unwrap(), rat(-1, 6));
    assert_eq!(seifert_chi2(&trefoil, 6).unwrap(), rat(-1, 1));
    let torus = SeifertBase { genus: 1, boundary: 0, cone_orders: vec![] };
    assert_eq!(seifert_chi2(&torus, 5).unwrap(), rat(0, 1));
    let annulus = SeifertBase { genus: 0, boundary: 2, cone_orders: vec![] };
    assert_eq!(seifert_chi2(&annulus, 3).unwrap(), rat(0, 1));
}

#[test]
fn jsj_sum_adds_and_ignores_order() {
    let a = run(&builtin_job("trefoil").unwrap(), &ChiOptions::default()).unwrap();
    let b = run(&builtin_job("torus_knot_2_5").unwrap(), &ChiOptions::default()).unwrap();
    assert_eq!(jsj_sum(std::slice::from_ref(&a)).unwrap(), a);
    let ab = jsj_sum(&[a.clone(), b.clone()]).unwrap();
    assert_eq!(ab.chi2, -4);
    assert_eq!(ab.chi2, jsj_sum(&[b, a]).unwrap().chi2);
    assert!(jsj_sum(&[]).is_err());
}

#[test]
fn mismatched_dual_generators_are_rejected() {
    let p = l2euler::presentation::Presentation::parse(
        &["x", "y", "z"],
        &["x y x^-1 y^-1", "x z x^-1 z^-1", "y z y^-1 z^-1"],
    )
    .unwrap();
    let q = l2euler::euler::QuotientSpec::abelianization(&p).unwrap();
    let phi = PhiSpec::Abelian(vec![0, 1, 0]);
    let words = |ws: &[&str]| ws.iter().map(|w| p.parse_word(w).unwrap()).collect::<Vec<_>>();
    let wrong = words(&["z", "x", "y"]);
    let err = chi2(&p, Some(&wrong), &q, &phi, &ChiOptions::default()).unwrap_err();
    assert!(matches!(err, Error::Input(_)), "{err}");
    let right = words(&["z", "y^-1", "x"]);
    let opts = ChiOptions { all_choices: true, ..ChiOptions::default() };
    assert_eq!(chi2(&p, Some(&right), &q, &phi, &opts).unwrap().chi2, 0);
}
