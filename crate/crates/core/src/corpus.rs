//! Presentation files: one TOML document per presentation, plus the built-in corpus.
//!
//! ```toml
//! name = "trefoil"
//! generators = ["x", "y"]
//! relators = ["x y x y^-1 x^-1 y^-1"]
//! genus = 1
//! expected_norm = 1
//! phi = [1]
//!
//! [quotient]          # optional, defaults to the abelianization
//! kind = "abelian"
//! rank = 1
//! images = [[1], [1]]
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::{PhiSpec, QuotientSpec};
use crate::intmat::IntMatrix;
use crate::presentation::{FreeWord, Presentation};
use crate::ring::Group;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuotientKind {
    Abelian,
    #[serde(alias = "poly_z", alias = "poly-z")]
    Polyz,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientFile {
    pub kind: QuotientKind,
    pub rank: Option<usize>,
    pub matrix: Option<Vec<Vec<i64>>>,
    pub images: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub name: Option<String>,
    pub generators: Vec<String>,
    #[serde(default)]
    pub relators: Vec<String>,
    pub dual_generators: Option<Vec<String>>,
    pub expected_norm: Option<i64>,
    pub genus: Option<u64>,
    pub quotient: Option<QuotientFile>,
    pub phi: Option<PhiSpec>,
}

/// A parsed file, ready for the pipeline.
#[derive(Clone, Debug)]
pub struct Job {
    pub name: String,
    pub presentation: Presentation,
    pub dual: Option<Vec<FreeWord>>,
    pub quotient: QuotientSpec,
    pub phi: PhiSpec,
    pub expected_norm: Option<i64>,
    pub genus: Option<u64>,
}

impl Job {
    pub fn dual(&self) -> Option<&[FreeWord]> {
        self.dual.as_deref()
    }
}

impl PresentationFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))
    }

    pub fn build(&self, fallback_name: &str) -> Result<Job> {
        let presentation = Presentation::parse(&self.generators, &self.relators)?;
        let dual = match &self.dual_generators {
            Some(ws) => Some(ws.iter().map(|w| presentation.parse_word(w)).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        let quotient = match &self.quotient {
            None => QuotientSpec::abelianization(&presentation)?,
            Some(q) => match q.kind {
                QuotientKind::Abelian => {
                    let rank = match (q.rank, q.images.first()) {
                        (Some(r), _) => r,
                        (None, Some(g)) => g.len(),
                        (None, None) => 0,
                    };
                    QuotientSpec::abelian(rank, q.images.clone())?
                }
                QuotientKind::Polyz => {
                    let m = q
                        .matrix
                        .clone()
                        .ok_or_else(|| Error::Input("a polyz quotient needs a matrix".into()))?;
                    QuotientSpec::poly_z(IntMatrix::from_rows(m)?, q.images.clone())?
                }
            },
        };
        let phi = match &self.phi {
            Some(p) => p.clone(),
            None => default_phi(&quotient),
        };
        Ok(Job {
            name: self.name.clone().unwrap_or_else(|| fallback_name.to_string()),
            presentation,
            dual,
            quotient,
            phi,
            expected_norm: self.expected_norm,
            genus: self.genus,
        })
    }
}

/// The first coordinate character on an abelian quotient, the projection to `Z` on a polyZ one.
pub fn default_phi(q: &QuotientSpec) -> PhiSpec {
    match &**q.group() {
        Group::Abelian { rank } => {
            let mut v = vec![0; *rank];
            if let Some(x) = v.first_mut() {
                *x = 1;
            }
            PhiSpec::Abelian(v)
        }
        Group::PolyZ { .. } => PhiSpec::PolyZ(1),
    }
}

pub fn parse_job(text: &str, fallback_name: &str) -> Result<Job> {
    PresentationFile::from_toml(text)?.build(fallback_name)
}

pub fn load_job(path: &Path) -> Result<Job> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("input");
    parse_job(&text, stem)
}

/// Expands directories into their `.toml` files, sorted by file name.
pub fn expand_paths(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| Error::Input(format!("{}: {e}", p.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "toml"))
                .collect();
            files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
            out.extend(files);
        } else if p.exists() {
            out.push(p.clone());
        } else {
            return Err(Error::Input(format!("{}: no such file or directory", p.display())));
        }
    }
    Ok(out)
}

macro_rules! corpus {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../data/corpus/", $name, ".toml")))),*]
    };
}

/// The built-in corpus as `(file stem, TOML text)` pairs, sorted by name.
pub const BUILTIN: &[(&str, &str)] = corpus![
    "figure_eight",
    "hopf_link",
    "klein_bundle",
    "punctured_torus_bundle",
    "solid_torus",
    "three_torus",
    "torus_knot_2_3",
    "torus_knot_2_5",
    "torus_knot_2_7",
    "torus_knot_3_4",
    "torus_knot_3_5",
    "torus_knot_3_7",
    "torus_knot_4_5",
    "torus_knot_4_7",
    "torus_knot_5_6",
    "torus_knot_5_7",
    "torus_knot_6_7",
    "trefoil",
    "trefoil_wirtinger",
];

pub fn builtin_jobs() -> Result<Vec<Job>> {
    BUILTIN.iter().map(|(n, t)| parse_job(t, n)).collect()
}

pub fn builtin_job(name: &str) -> Result<Job> {
    let (n, t) = BUILTIN
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Input(format!("no built-in presentation named {name}")))?;
    parse_job(t, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_corpus_parses() {
        let jobs = builtin_jobs().unwrap();
        assert_eq!(jobs.len(), BUILTIN.len());
        let t = builtin_job("trefoil").unwrap();
        assert_eq!(t.genus, Some(1));
        assert_eq!(t.phi, PhiSpec::Abelian(vec![1]));
    }

    #[test]
    fn malformed_files() {
        assert!(matches!(PresentationFile::from_toml("generators = 3"), Err(Error::Parse(_))));
        let bad = "generators = [\"x\"]\nrelators = [\"x^\"]\n";
        assert!(matches!(parse_job(bad, "bad"), Err(Error::Parse(_))));
        let unknown = "generators = [\"x\"]\ncolour = 1\n";
        assert!(matches!(PresentationFile::from_toml(unknown), Err(Error::Parse(_))));
    }
}

