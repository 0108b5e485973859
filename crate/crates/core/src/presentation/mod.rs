//! Free-group words, finite presentations, Fox calculus and abelianization.

mod fox;
mod snf;
mod word;

pub use fox::{fox_derivative, fox_gradient, fox_matrix, QuotientMap};
pub use snf::{abelianization_of_matrix, smith_normal_form, unimodular_inverse, AbelianizationData, SmithForm};
pub use word::{parse_word, reduce_word, FreeWord, Letter};

use crate::error::{Error, Result};

/// A finite presentation `<x_1, ..., x_a | R_1, ..., R_b>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<FreeWord>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<FreeWord>) -> Result<Self> {
        for (i, name) in generators.iter().enumerate() {
            if name.is_empty() || generators[..i].contains(name) {
                return Err(Error::Input(format!("invalid or duplicate generator name '{name}'")));
            }
        }
        for r in &relators {
            if let Some(g) = r.max_generator() {
                if g >= generators.len() {
                    return Err(Error::Input(format!("relator references generator {g}")));
                }
            }
        }
        Ok(Presentation { generators, relators })
    }

    /// Parses relator strings over the given generator names.
    pub fn parse<S: AsRef<str>>(generators: &[S], relators: &[S]) -> Result<Self> {
        let names: Vec<String> = generators.iter().map(|s| s.as_ref().to_string()).collect();
        let rels = relators
            .iter()
            .map(|r| parse_word(r.as_ref(), &names))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(names, rels)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[FreeWord] {
        &self.relators
    }

    /// Number of generators minus number of relators.
    pub fn deficiency(&self) -> i64 {
        self.generators.len() as i64 - self.relators.len() as i64
    }

    pub fn parse_word(&self, s: &str) -> Result<FreeWord> {
        parse_word(s, &self.generators)
    }

    /// Relator exponent-sum matrix, one row per relator.
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators.iter().map(|r| r.exponent_sums(self.generators.len())).collect()
    }
}

/// Abelianization of a presentation via the Smith normal form of its exponent-sum matrix.
pub fn abelianization(p: &Presentation) -> AbelianizationData {
    abelianization_of_matrix(&p.exponent_matrix(), p.generator_count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn presentation_basics() {
        let p = Presentation::parse(&["x", "y"], &["x y x y^-1 x^-1 y^-1"]).unwrap();
        assert_eq!(p.deficiency(), 1);
        assert_eq!(p.exponent_matrix(), vec![vec![1, -1]]);
        assert!(Presentation::parse(&["x", "x"], &[]).is_err());
    }

    #[test]
    fn abelianization_invariant_under_relator_moves() {
        let a = Presentation::parse(&["x", "y", "z"], &["x^2 y", "y z^-3"]).unwrap();
        let b = Presentation::parse(&["x", "y", "z"], &["z^3 y^-1", "x^2 y"]).unwrap();
        let (da, db) = (abelianization(&a), abelianization(&b));
        assert_eq!(da.free_rank, db.free_rank);
        assert_eq!(da.torsion, db.torsion);
        assert_eq!(da.free_rank, 1);
        let t = abelianization(&Presentation::parse(&["x"], &["x^2"]).unwrap());
        assert_eq!((t.free_rank, t.torsion), (0, vec![BigInt::from(2)]));
    }
}
