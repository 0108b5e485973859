//! Seifert fibred pieces from their base orbifolds, and additivity over a decomposition.

use l2euler::corpus::builtin_job;
use l2euler::euler::{chi2, jsj_sum, seifert_chi2, ChiOptions, SeifertBase};

fn main() -> l2euler::Result<()> {
    let base = SeifertBase { genus: 0, boundary: 1, cone_orders: vec![2, 3] };
    let from_formula = seifert_chi2(&base, 6)?;
    let job = builtin_job("trefoil")?;
    let from_fox = chi2(&job.presentation, None, &job.quotient, &job.phi, &ChiOptions::default())?;
    println!("trefoil: orbifold formula {from_formula}, Fox calculus {}", from_fox.chi2);

    let pieces = ["trefoil", "torus_knot_2_5", "torus_knot_3_4"]
        .iter()
        .map(|n| {
            let j = builtin_job(n)?;
            chi2(&j.presentation, j.dual(), &j.quotient, &j.phi, &ChiOptions::default())
        })
        .collect::<l2euler::Result<Vec<_>>>()?;
    println!("sum over three pieces: {}", jsj_sum(&pieces)?.chi2);
    Ok(())
}
