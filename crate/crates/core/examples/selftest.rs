//! Runs the acceptance criteria given on the command line, or all of them.

use l2euler::acceptance::{run_all, run_one, summary, Goldens};

fn main() {
    let ids: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let goldens = Goldens::default();
    let reports = if ids.is_empty() {
        run_all(&goldens)
    } else {
        ids.iter().filter_map(|&id| run_one(id, &goldens)).collect()
    };
    for r in &reports {
        println!("{r}");
    }
    println!("{}", summary(&reports));
}
