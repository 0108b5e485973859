//! The Newton polytope of the Hopf link's determinant and the seminorm it induces,
//! compared with half the cokernel dimension for several characters.

use l2euler::corpus::builtin_job;
use l2euler::euler::{polytope_bridge, ChiOptions, PhiSpec};

fn main() -> l2euler::Result<()> {
    let job = builtin_job("hopf_link")?;
    for phi in [[1, 0], [0, 1], [1, 1], [2, 1], [3, -2]] {
        let b = polytope_bridge(&job.presentation, None, &job.quotient, &PhiSpec::Abelian(phi.to_vec()), &ChiOptions::default())?;
        println!(
            "phi = {phi:?}: det = {}, polytope {}, deg/2 = {}, seminorm = {}",
            b.det, b.polytope, b.half_degree, b.d_eval
        );
        assert!(b.agrees());
    }
    Ok(())
}
