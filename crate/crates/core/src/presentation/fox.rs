use std::sync::Arc;

use num_traits::One;

use super::word::FreeWord;
use super::Presentation;
use crate::error::{Error, Result};
use crate::ring::{Group, GroupElement, GroupRingElement, Rational};

/// A homomorphism from the free group on the generators to a supported quotient,
/// given by the image of each generator.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    group: Arc<Group>,
    images: Vec<GroupElement>,
    inverses: Vec<GroupElement>,
}

impl QuotientMap {
    pub fn new(group: Arc<Group>, images: Vec<GroupElement>) -> Result<Self> {
        let mut inverses = Vec::with_capacity(images.len());
        for g in &images {
            group.check(g)?;
            inverses.push(group.inv(g)?);
        }
        Ok(QuotientMap { group, images, inverses })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn generators(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, generator: usize) -> &GroupElement {
        &self.images[generator]
    }

    fn check_word(&self, w: &FreeWord) -> Result<()> {
        match w.max_generator() {
            Some(g) if g >= self.images.len() => Err(Error::Input(format!(
                "word uses generator {g} but the quotient map has {} images",
                self.images.len()
            ))),
            _ => Ok(()),
        }
    }

    /// Image of a word in the quotient group.
    pub fn eval_word(&self, w: &FreeWord) -> Result<GroupElement> {
        self.check_word(w)?;
        let mut p = self.group.identity();
        for l in w.letters() {
            let x = if l.inverse { &self.inverses[l.generator] } else { &self.images[l.generator] };
            p = self.group.mul(&p, x)?;
        }
        Ok(p)
    }
}

/// All Fox derivatives of `w` at once, pushed forward through `mu`.
///
/// The running prefix is accumulated left to right: a letter `x_g` contributes
/// `+mu(prefix)` before it is appended, and `x_g^-1` contributes `-mu(prefix)` after.
pub fn fox_gradient(w: &FreeWord, mu: &QuotientMap) -> Result<Vec<GroupRingElement>> {
    mu.check_word(w)?;
    let group = mu.group();
    let mut out = vec![GroupRingElement::zero(group); mu.generators()];
    let mut prefix = group.identity();
    for l in w.letters() {
        if l.inverse {
            prefix = group.mul(&prefix, &mu.inverses[l.generator])?;
            out[l.generator].add_term(prefix.clone(), -Rational::one());
        } else {
            out[l.generator].add_term(prefix.clone(), Rational::one());
            prefix = group.mul(&prefix, &mu.images[l.generator])?;
        }
    }
    Ok(out)
}

/// The Fox derivative `d w / d x_g` pushed forward to the group ring of the quotient.
pub fn fox_derivative(w: &FreeWord, g: usize, mu: &QuotientMap) -> Result<GroupRingElement> {
    if g >= mu.generators() {
        return Err(Error::Input(format!("generator index {g} out of range")));
    }
    Ok(fox_gradient(w, mu)?.swap_remove(g))
}

/// Fox matrix with entry `(j, i) = d R_j / d x_i`.
pub fn fox_matrix(p: &Presentation, mu: &QuotientMap) -> Result<Vec<Vec<GroupRingElement>>> {
    if mu.generators() != p.generator_count() {
        return Err(Error::Input(format!(
            "quotient map has {} images for {} generators",
            mu.generators(),
            p.generator_count()
        )));
    }
    p.relators().iter().map(|r| fox_gradient(r, mu)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_word;
    use crate::ring::int;

    fn names(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    fn z1(n: usize) -> QuotientMap {
        QuotientMap::new(Group::abelian(1), vec![vec![1]; n]).unwrap()
    }

    #[test]
    fn base_rules() {
        let n = names(&["x"]);
        let mu = z1(1);
        let d = fox_derivative(&parse_word("x", &n).unwrap(), 0, &mu).unwrap();
        assert_eq!(d, GroupRingElement::one(mu.group()));
        let d = fox_derivative(&parse_word("x^-1", &n).unwrap(), 0, &mu).unwrap();
        assert_eq!(d, GroupRingElement::term(mu.group(), vec![-1], int(-1)));
    }

    #[test]
    fn trefoil_derivatives() {
        let n = names(&["x", "y"]);
        let w = parse_word("x y x y^-1 x^-1 y^-1", &n).unwrap();
        let g = fox_gradient(&w, &z1(2)).unwrap();
        // 1 - t + t^2 and -(t^2 - t + 1)
        for (e, c) in [(0, 1), (1, -1), (2, 1)] {
            assert_eq!(g[0].coeff(&[e]), int(c));
            assert_eq!(g[1].coeff(&[e]), int(-c));
        }
        assert_eq!(g[0].terms().count(), 3);
        assert_eq!(g[1].terms().count(), 3);
    }

    #[test]
    fn commutator_over_z2() {
        let n = names(&["x", "y"]);
        let mu = QuotientMap::new(Group::abelian(2), vec![vec![1, 0], vec![0, 1]]).unwrap();
        let g = fox_gradient(&parse_word("x y x^-1 y^-1", &n).unwrap(), &mu).unwrap();
        assert_eq!(g[0].coeff(&[0, 0]), int(1));
        assert_eq!(g[0].coeff(&[0, 1]), int(-1));
        assert_eq!(g[1].coeff(&[1, 0]), int(1));
        assert_eq!(g[1].coeff(&[0, 0]), int(-1));
    }

    #[test]
    fn out_of_range_word_is_rejected() {
        let n = names(&["x", "y"]);
        let w = parse_word("x y", &n).unwrap();
        assert!(matches!(fox_gradient(&w, &z1(1)), Err(Error::Input(_))));
    }
}
