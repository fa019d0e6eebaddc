use std::collections::BTreeMap;

use serde_json::Value;

use super::generators::{GeneratorSet, Letter, Word};
use super::tree::{BracketTree, FreeNAElement};
use crate::error::{Error, Result};
use crate::zpmod::RingSpec;

/// An element of the reduced tensor algebra T(V) = ⊕_{k≥1} V^{⊗k}: a
/// Z/p^r-combination of nonempty words, stored sorted with nonzero
/// coefficients. Sums across weights are allowed; see [`Self::zeta`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorElement {
    ring: RingSpec,
    terms: BTreeMap<Word, u64>,
}

impl TensorElement {
    pub fn zero(ring: RingSpec) -> Self {
        TensorElement {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn word(ring: RingSpec, word: Word) -> Self {
        TensorElement::from_terms(ring, [(word, 1)])
    }

    pub fn from_terms(ring: RingSpec, terms: impl IntoIterator<Item = (Word, u64)>) -> Self {
        let mut e = TensorElement::zero(ring);
        for (w, c) in terms {
            e.add_term(w, c);
        }
        e
    }

    /// Builds an element from a coordinate vector over an indexed list of words.
    pub fn from_coordinates(ring: RingSpec, words: &[Word], coords: &[u64]) -> Self {
        TensorElement::from_terms(ring, words.iter().cloned().zip(coords.iter().copied()))
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Word, u64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, word: &[Letter]) -> u64 {
        self.terms.get(word).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, word: Word, coeff: u64) {
        assert!(!word.is_empty(), "the reduced tensor algebra has no empty word");
        let c = self.ring.norm(coeff);
        if c == 0 {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = self.ring.add(*o.get(), c);
                if sum == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &TensorElement) -> TensorElement {
        self.add(&other.scale(self.ring.neg(1)))
    }

    pub fn scale(&self, c: u64) -> TensorElement {
        TensorElement::from_terms(self.ring, self.terms.iter().map(|(w, &a)| (w.clone(), self.ring.mul(a, c))))
    }

    /// Concatenation product.
    pub fn mul(&self, other: &TensorElement) -> TensorElement {
        let mut out = TensorElement::zero(self.ring);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let mut w = Vec::with_capacity(a.len() + b.len());
                w.extend_from_slice(a);
                w.extend_from_slice(b);
                out.add_term(w, self.ring.mul(ca, cb));
            }
        }
        out
    }

    /// Graded commutator `ab − (−1)^{|a||b|} ba`, extended bilinearly over
    /// homogeneous components.
    pub fn bracket(&self, other: &TensorElement, gens: &GeneratorSet) -> TensorElement {
        let mut out = TensorElement::zero(self.ring);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let c = self.ring.mul(ca, cb);
                let odd = gens.word_degree(a) % 2 != 0 && gens.word_degree(b) % 2 != 0;
                let mut ab = a.clone();
                ab.extend_from_slice(b);
                let mut ba = b.clone();
                ba.extend_from_slice(a);
                out.add_term(ab, c);
                out.add_term(ba, if odd { c } else { self.ring.neg(c) });
            }
        }
        out
    }

    /// ζ_i: the weight-i homogeneous part.
    pub fn zeta(&self, i: usize) -> TensorElement {
        TensorElement {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == i)
                .map(|(w, &c)| (w.clone(), c))
                .collect(),
        }
    }

    /// ι_i: inclusion of V^{⊗i} into T(V); rejects elements with other weights.
    pub fn iota(&self, i: usize) -> Result<TensorElement> {
        if self.terms.keys().any(|w| w.len() != i) {
            return Err(Error::invalid(format!("element is not concentrated in weight {i}")));
        }
        Ok(self.clone())
    }

    /// Weights present, ascending.
    pub fn weights(&self) -> Vec<usize> {
        let w: std::collections::BTreeSet<usize> = self.terms.keys().map(Vec::len).collect();
        w.into_iter().collect()
    }

    pub fn is_homogeneous(&self, gens: &GeneratorSet) -> bool {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return true };
        let (k, d) = (first.len(), gens.word_degree(first));
        it.all(|w| w.len() == k && gens.word_degree(w) == d)
    }

    /// Coefficients reduced into Z/p^u (u ≤ r).
    pub fn reduce(&self, u: u32) -> Result<TensorElement> {
        let ring = self.ring.reduce_to(u)?;
        Ok(TensorElement::from_terms(ring, self.terms.iter().map(|(w, &c)| (w.clone(), c))))
    }

    /// Every coefficient divisible by p, i.e. zero after reduction mod p.
    pub fn vanishes_mod_p(&self) -> bool {
        self.terms.values().all(|&c| c % self.ring.p() == 0)
    }

    pub fn coordinates(&self, index: &std::collections::HashMap<Word, usize>, len: usize) -> Vec<u64> {
        let mut v = vec![0; len];
        for (w, &c) in &self.terms {
            v[index[w]] = c;
        }
        v
    }

    /// `[{"coeff":c,"word":["x","y"]}, …]`, sorted by word.
    pub fn to_json(&self, gens: &GeneratorSet) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(w, &c)| {
                    serde_json::json!({
                        "coeff": c,
                        "word": w.iter().map(|&l| gens.name(l)).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value, gens: &GeneratorSet) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::invalid("tensor element must be a JSON array"))?;
        let mut e = TensorElement::zero(*gens.ring());
        for t in arr {
            let c = t["coeff"].as_i64().ok_or_else(|| Error::invalid("term without integer coeff"))?;
            let word = t["word"]
                .as_array()
                .ok_or_else(|| Error::invalid("term without word"))?
                .iter()
                .map(|n| n.as_str().ok_or_else(|| Error::invalid("word letters must be names")).and_then(|n| gens.index_of(n)))
                .collect::<Result<Word>>()?;
            if word.is_empty() {
                return Err(Error::invalid("empty word"));
            }
            e.add_term(word, gens.ring().from_i64(c));
        }
        Ok(e)
    }

    pub fn display(&self, gens: &GeneratorSet) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(w, &c)| {
                let word: String = w.iter().map(|&l| gens.name(l)).collect::<Vec<_>>().join("");
                if c == 1 {
                    word
                } else {
                    format!("{c}·{word}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// The image of a tree in T(V): leaves are generators and each bracket
/// expands as `ab − (−1)^{|a||b|} ba`.
pub fn embed_tree(tree: &BracketTree, gens: &GeneratorSet) -> TensorElement {
    match tree {
        BracketTree::Leaf(i) => TensorElement::word(*gens.ring(), vec![*i]),
        BracketTree::Node { left, right, .. } => embed_tree(left, gens).bracket(&embed_tree(right, gens), gens),
    }
}

/// Linear extension of [`embed_tree`] to formal combinations.
pub fn embed_tensor(xi: &FreeNAElement, gens: &GeneratorSet) -> TensorElement {
    let mut out = TensorElement::zero(*xi.ring());
    for (t, &c) in xi.terms() {
        let img = embed_tree(t, gens);
        out = out.add(&img.scale(c));
    }
    out
}

/// dim V^{⊗k} = n^k for the reduced tensor algebra (k ≥ 1).
pub fn tensor_dim(gens: &GeneratorSet, k: usize) -> Result<num_bigint::BigUint> {
    if k == 0 {
        return Err(Error::invalid("the reduced tensor algebra starts in weight 1"));
    }
    Ok(num_bigint::BigUint::from(gens.len()).pow(k as u32))
}
