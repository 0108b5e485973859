//! A closed manifold: the 3-torus, where a row of the Fox matrix is deleted as well,
//! checked over every admissible column and row. Dual generator `j` is the loop
//! transverse to the torus of relator `j`.

use l2euler::euler::{chi2, ChiOptions, PhiSpec, QuotientSpec};
use l2euler::presentation::Presentation;

fn main() -> l2euler::Result<()> {
    let p = Presentation::parse(
        &["x", "y", "z"],
        &["x y x^-1 y^-1", "y z y^-1 z^-1", "z x z^-1 x^-1"],
    )?;
    let dual: Vec<_> = ["z", "x", "y"].iter().map(|w| p.parse_word(w)).collect::<Result<_, _>>()?;
    let q = QuotientSpec::abelianization(&p)?;
    let opts = ChiOptions { all_choices: true, ..ChiOptions::default() };
    for phi in [vec![1, 0, 0], vec![0, 2, 0], vec![1, 1, 3]] {
        let r = chi2(&p, Some(&dual), &q, &PhiSpec::Abelian(phi.clone()), &opts)?;
        println!(
            "phi = {phi:?}: chi2 = {}, {} (column, row) choices agree",
            r.chi2,
            r.diagnostics.verified_choices.len()
        );
    }
    Ok(())
}
