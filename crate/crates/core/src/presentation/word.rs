use std::fmt;

use crate::error::{Error, Result};

/// One letter `x_i^{+1}` or `x_i^{-1}` of a free-group word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, sign: i8) -> Self {
        Letter { generator, inverse: sign < 0 }
    }

    pub fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }
}

/// A freely reduced word in the free group on `generators` letters.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord { letters: Vec::new() }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    /// Reduced product `self * other`.
    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        FreeWord { letters: out }
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, generators: usize) -> Vec<i64> {
        let mut v = vec![0; generators];
        for l in &self.letters {
            v[l.generator] += i64::from(l.sign());
        }
        v
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }

    /// Renders the word with the given generator names in token syntax.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        WordDisplay { word: self, names }
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inv()) {
        out.pop();
    } else {
        out.push(l);
    }
}

/// Freely reduces a sequence of signed letters `(generator, +-1)`.
pub fn reduce_word(raw: &[(usize, i8)], generators: usize) -> Result<FreeWord> {
    let mut out = Vec::with_capacity(raw.len());
    for &(g, s) in raw {
        if g >= generators {
            return Err(Error::Input(format!(
                "generator index {g} out of range for {generators} generators"
            )));
        }
        if s != 1 && s != -1 {
            return Err(Error::Input(format!("letter sign must be +-1, got {s}")));
        }
        push_reduced(&mut out, Letter::new(g, s));
    }
    Ok(FreeWord { letters: out })
}

fn resolve(token: &str, names: &[String]) -> Option<(usize, bool)> {
    if let Some(i) = names.iter().position(|n| n == token) {
        return Some((i, false));
    }
    let mut chars = token.chars();
    if let (Some(c), None) = (chars.next(), chars.next()) {
        if c.is_ascii_uppercase() {
            let lower = c.to_ascii_lowercase().to_string();
            return names.iter().position(|n| *n == lower).map(|i| (i, true));
        }
    }
    None
}

/// Parses a word over the named generators.
///
/// Token syntax: whitespace-separated `name`, `name^-1` or `name^k`. Compact syntax
/// (no whitespace, single-letter generators): `xyXY`, uppercase meaning inverse.
/// The strings `""` and `"1"` denote the empty word.
pub fn parse_word(s: &str, names: &[String]) -> Result<FreeWord> {
    let s = s.trim();
    if s.is_empty() || s == "1" {
        return Ok(FreeWord::empty());
    }
    let compact = !s.contains(char::is_whitespace)
        && !s.contains('^')
        && resolve(s, names).is_none()
        && s.chars().all(|c| c.is_ascii_alphabetic())
        && names.iter().all(|n| n.len() == 1 && n.chars().all(|c| c.is_ascii_lowercase()));
    let mut raw: Vec<(usize, i8)> = Vec::new();
    if compact {
        for c in s.chars() {
            let (g, inv) = resolve(&c.to_string(), names)
                .ok_or_else(|| Error::Parse(format!("unknown generator '{c}' in \"{s}\"")))?;
            raw.push((g, if inv { -1 } else { 1 }));
        }
    } else {
        for tok in s.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                None => (tok, 1i64),
                Some((n, e)) => {
                    let e = e.trim_matches(|c| c == '{' || c == '}' || c == '(' || c == ')');
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in token '{tok}'")))?;
                    (n, e)
                }
            };
            let (g, inv) = resolve(name, names)
                .ok_or_else(|| Error::Parse(format!("unknown generator '{name}' in \"{s}\"")))?;
            let sign: i8 = if (exp < 0) ^ inv { -1 } else { 1 };
            if exp.unsigned_abs() > 1_000_000 {
                return Err(Error::Parse(format!("exponent too large in token '{tok}'")));
            }
            for _ in 0..exp.unsigned_abs() {
                raw.push((g, sign));
            }
        }
    }
    reduce_word(&raw, names.len())
}

struct WordDisplay<'a> {
    word: &'a FreeWord,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.word.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let name = self.names.get(l.generator).map(String::as_str).unwrap_or("?");
            if l.inverse {
                write!(f, "{name}^-1")?;
            } else {
                write!(f, "{name}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| if l.inverse { format!("x{}^-1", l.generator) } else { format!("x{}", l.generator) })
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn cancellation() {
        assert!(reduce_word(&[(0, 1), (0, -1)], 1).unwrap().is_empty());
        let w = reduce_word(&[(0, 1), (1, 1), (1, -1), (0, 1)], 2).unwrap();
        assert_eq!(w, reduce_word(&[(0, 1), (0, 1)], 2).unwrap());
        assert_eq!(w.len(), 2);
    }

    #[test]
    fn unknown_generator_is_an_input_error() {
        assert!(matches!(reduce_word(&[(2, 1)], 2), Err(Error::Input(_))));
    }

    #[test]
    fn token_and_compact_syntax_agree() {
        let n = names(&["x", "y"]);
        let a = parse_word("x y x y^-1 x^-1 y^-1", &n).unwrap();
        let b = parse_word("xyxYXY", &n).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
        assert_eq!(parse_word("x^3 y^-2", &n).unwrap().exponent_sums(2), vec![3, -2]);
        assert_eq!(parse_word("X", &n).unwrap(), parse_word("x^-1", &n).unwrap());
    }

    #[test]
    fn malformed_tokens_are_parse_errors() {
        let n = names(&["x", "y"]);
        assert!(matches!(parse_word("x z", &n), Err(Error::Parse(_))));
        assert!(matches!(parse_word("x^a", &n), Err(Error::Parse(_))));
        assert!(parse_word("1", &n).unwrap().is_empty());
    }

    #[test]
    fn display_round_trips() {
        let n = names(&["a", "b"]);
        let w = parse_word("a a b^-1 a", &n).unwrap();
        let text = w.display_with(&n).to_string();
        assert_eq!(parse_word(&text, &n).unwrap(), w);
    }
}
