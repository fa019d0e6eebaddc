use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zpmod::RingSpec;

/// Index of a generator inside its [`GeneratorSet`]; words are sequences of these.
pub type Letter = u16;
pub type Word = Vec<Letter>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

/// An ordered set of named, positively graded generators of a free
/// Z/p^r-module V. Parity of a generator is the parity of its degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GeneratorRepr", into = "GeneratorRepr")]
pub struct GeneratorSet {
    ring: RingSpec,
    gens: Vec<Generator>,
}

#[derive(Serialize, Deserialize)]
struct GeneratorRepr {
    p: u64,
    r: u32,
    generators: Vec<Generator>,
}

impl TryFrom<GeneratorRepr> for GeneratorSet {
    type Error = Error;
    fn try_from(g: GeneratorRepr) -> Result<Self> {
        GeneratorSet::new(RingSpec::new(g.p, g.r)?, g.generators)
    }
}

impl From<GeneratorSet> for GeneratorRepr {
    fn from(g: GeneratorSet) -> Self {
        GeneratorRepr {
            p: g.ring.p(),
            r: g.ring.s(),
            generators: g.gens,
        }
    }
}

impl GeneratorSet {
    pub fn new(ring: RingSpec, gens: Vec<Generator>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::invalid("generator set is empty"));
        }
        if gens.len() > Letter::MAX as usize {
            return Err(Error::invalid("too many generators"));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.degree == 0 {
                return Err(Error::invalid(format!("generator {} has degree 0", g.name)));
            }
            if g.name.is_empty() || gens[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::invalid(format!("generator name {:?} is empty or repeated", g.name)));
            }
        }
        Ok(GeneratorSet { ring, gens })
    }

    /// Convenience constructor from (name, degree) pairs.
    pub fn from_pairs(ring: RingSpec, pairs: &[(&str, u32)]) -> Result<Self> {
        GeneratorSet::new(
            ring,
            pairs
                .iter()
                .map(|&(name, degree)| Generator {
                    name: name.to_string(),
                    degree,
                })
                .collect(),
        )
    }

    /// `n` generators `x1, …, xn`, all in the same degree.
    pub fn uniform(ring: RingSpec, n: usize, degree: u32) -> Result<Self> {
        let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let pairs: Vec<(&str, u32)> = names.iter().map(|s| (s.as_str(), degree)).collect();
        GeneratorSet::from_pairs(ring, &pairs)
    }

    /// The pair `x` (degree `n`) and `y = dx` (degree `n − 1`).
    pub fn acyclic_pair(ring: RingSpec, n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("deg(x) must be at least 2 so that dx has positive degree"));
        }
        GeneratorSet::from_pairs(ring, &[("x", n), ("y", n - 1)])
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    /// The same generators over another coefficient ring.
    pub fn with_ring(&self, ring: RingSpec) -> GeneratorSet {
        GeneratorSet {
            ring,
            gens: self.gens.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn name(&self, i: Letter) -> &str {
        &self.gens[i as usize].name
    }

    pub fn degree(&self, i: Letter) -> u32 {
        self.gens[i as usize].degree
    }

    pub fn is_odd(&self, i: Letter) -> bool {
        self.degree(i) % 2 == 1
    }

    pub fn index_of(&self, name: &str) -> Result<Letter> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .map(|i| i as Letter)
            .ok_or_else(|| Error::invalid(format!("unknown generator {name:?}")))
    }

    pub fn word_degree(&self, word: &[Letter]) -> i64 {
        word.iter().map(|&l| self.degree(l) as i64).sum()
    }

    pub fn max_degree(&self) -> u32 {
        self.gens.iter().map(|g| g.degree).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> u32 {
        self.gens.iter().map(|g| g.degree).min().unwrap_or(0)
    }
}
