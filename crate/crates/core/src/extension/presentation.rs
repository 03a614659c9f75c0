use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A letter of a relator: generator 0 (`x`) or 1 (`y`), possibly inverted.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SourceLetter {
    pub gen: u8,
    pub inv: bool,
}

/// A two-generator presentation `⟨x, y | R₁, …, R_m⟩`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SourcePresentation {
    generators: [char; 2],
    relators: Vec<Vec<SourceLetter>>,
}

/// The JSON shape: `{"generators": ["x", "y"], "relators": ["xYxy"]}`,
/// uppercase letters meaning inverses.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize, Debug)]
pub struct PresentationFile {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
}

impl SourcePresentation {
    pub fn new(generators: [char; 2], relators: &[&str]) -> Result<Self> {
        let file = PresentationFile {
            generators: generators.iter().map(|c| c.to_string()).collect(),
            relators: relators.iter().map(|s| s.to_string()).collect(),
        };
        Self::from_file(&file)
    }

    /// `⟨x, y | x y x⁻¹ y⁻¹⟩`, the presentation shipped as the default.
    pub fn sample() -> Self {
        Self::new(['x', 'y'], &["xyXY"]).unwrap()
    }

    pub fn from_file(file: &PresentationFile) -> Result<Self> {
        let gens: Vec<char> = file
            .generators
            .iter()
            .map(|g| {
                let mut cs = g.chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) if c.is_lowercase() => Ok(c),
                    _ => Err(Error::Presentation(format!(
                        "generator {g:?} must be a single lowercase letter"
                    ))),
                }
            })
            .collect::<Result<_>>()?;
        if gens.len() != 2 || gens[0] == gens[1] {
            return Err(Error::Presentation("need exactly two distinct generators".into()));
        }
        if file.relators.is_empty() {
            return Err(Error::Presentation("need at least one relator".into()));
        }
        let mut relators = Vec::with_capacity(file.relators.len());
        for r in &file.relators {
            let mut w: Vec<SourceLetter> = Vec::with_capacity(r.len());
            for c in r.chars() {
                let lower = c.to_lowercase().next().unwrap();
                let gen = gens
                    .iter()
                    .position(|&g| g == lower)
                    .ok_or_else(|| Error::Presentation(format!("letter {c:?} in relator {r:?} is not a generator")))?;
                let l = SourceLetter { gen: gen as u8, inv: c.is_uppercase() };
                if w.last().is_some_and(|p| p.gen == l.gen && p.inv != l.inv) {
                    return Err(Error::Presentation(format!("relator {r:?} is not freely reduced")));
                }
                w.push(l);
            }
            if w.is_empty() {
                return Err(Error::Presentation("empty relator".into()));
            }
            relators.push(w);
        }
        Ok(SourcePresentation { generators: [gens[0], gens[1]], relators })
    }

    pub fn parse_json(s: &str) -> Result<Self> {
        let file: PresentationFile =
            serde_json::from_str(s).map_err(|e| Error::Presentation(format!("bad presentation JSON: {e}")))?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> PresentationFile {
        PresentationFile {
            generators: self.generators.iter().map(|c| c.to_string()).collect(),
            relators: self.relators.iter().map(|r| self.relator_string(r)).collect(),
        }
    }

    fn relator_string(&self, r: &[SourceLetter]) -> String {
        r.iter()
            .map(|l| {
                let c = self.generators[l.gen as usize];
                if l.inv {
                    c.to_uppercase().next().unwrap()
                } else {
                    c
                }
            })
            .collect()
    }

    pub fn generators(&self) -> [char; 2] {
        self.generators
    }

    pub fn relators(&self) -> &[Vec<SourceLetter>] {
        &self.relators
    }
}

impl fmt::Display for SourcePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.relator_string(r)).collect();
        write!(f, "<{}, {} | {}>", self.generators[0], self.generators[1], rels.join(", "))
    }
}
