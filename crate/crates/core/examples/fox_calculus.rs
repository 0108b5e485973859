//! Fox derivatives of the figure-eight relator, pushed to the group ring of Z.

use l2euler::euler::QuotientSpec;
use l2euler::presentation::{fox_gradient, Presentation};

fn main() -> l2euler::Result<()> {
    let p = Presentation::parse(&["x", "y"], &["x^-1 y x y^-1 x y x^-1 y^-1 x y^-1"])?;
    let q = QuotientSpec::abelianization(&p)?;
    let r = &p.relators()[0];
    println!("relator {}", r.display_with(p.generators()));
    for (g, d) in fox_gradient(r, q.map())?.iter().enumerate() {
        let terms: Vec<String> = d.terms().map(|(e, c)| format!("{c}*t^{}", e[0])).collect();
        println!("  d/d{} = {}", p.generators()[g], terms.join(" + "));
    }
    Ok(())
}
