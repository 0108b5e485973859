//! Mapping tori over poly-Z quotients Z^k x| Z: the twisted Fox matrix and its degree.

use l2euler::corpus::builtin_job;
use l2euler::euler::{chi2, twisted_matrix, ChiOptions};

fn main() -> l2euler::Result<()> {
    for name in ["punctured_torus_bundle", "klein_bundle"] {
        let job = builtin_job(name)?;
        let opts = ChiOptions::default();
        let m = twisted_matrix(&job.presentation, job.dual(), &job.quotient, &job.phi, &opts)?;
        println!("{} (twist {:?})", job.name, m.matrix.twist().matrix());
        for row in m.matrix.rows() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            println!("  [{}]", cells.join(", "));
        }
        let r = chi2(&job.presentation, job.dual(), &job.quotient, &job.phi, &opts)?;
        println!("  coker dim {}, boundary terms {}, chi2 = {}", r.diagnostics.coker_dim, r.diagnostics.boundary_terms, r.chi2);
    }
    Ok(())
}
