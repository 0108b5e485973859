//! L2-Euler characteristics of the built-in corpus, next to the known Thurston norms.

use l2euler::corpus::builtin_jobs;
use l2euler::euler::{chi2, ChiOptions};

fn main() -> l2euler::Result<()> {
    println!("{:<48} {:>5} {:>6} {:>5}", "presentation", "chi2", "bound", "norm");
    for job in builtin_jobs()? {
        let r = chi2(&job.presentation, job.dual(), &job.quotient, &job.phi, &ChiOptions::default())?;
        let norm = job.expected_norm.map_or("-".to_string(), |n| n.to_string());
        println!("{:<48} {:>5} {:>6} {:>5}", job.name, r.chi2, r.thurston_lower_bound, norm);
    }
    Ok(())
}
