use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde_json::Value;

use super::generators::{GeneratorSet, Letter};
use crate::error::{Error, Result};
use crate::zpmod::RingSpec;

/// A bracketing of generators: a leaf or a bracket `[left, right]`.
///
/// Trees are ordered by weight first; trees of equal weight compare leaves
/// by generator index and brackets lexicographically by (left, right).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BracketTree {
    Leaf(Letter),
    Node {
        left: Box<BracketTree>,
        right: Box<BracketTree>,
        weight: usize,
    },
}

impl BracketTree {
    pub fn leaf(i: Letter) -> Self {
        BracketTree::Leaf(i)
    }

    pub fn node(left: BracketTree, right: BracketTree) -> Self {
        let weight = left.weight() + right.weight();
        BracketTree::Node {
            left: Box::new(left),
            right: Box::new(right),
            weight,
        }
    }

    /// The right-normed bracket `[w1, [w2, … [w_{k-1}, w_k]…]]`.
    pub fn right_normed(word: &[Letter]) -> Self {
        let (&last, rest) = word.split_last().expect("nonempty word");
        rest.iter()
            .rev()
            .fold(BracketTree::Leaf(last), |acc, &l| BracketTree::node(BracketTree::Leaf(l), acc))
    }

    pub fn weight(&self) -> usize {
        match self {
            BracketTree::Leaf(_) => 1,
            BracketTree::Node { weight, .. } => *weight,
        }
    }

    pub fn degree(&self, gens: &GeneratorSet) -> i64 {
        match self {
            BracketTree::Leaf(i) => gens.degree(*i) as i64,
            BracketTree::Node { left, right, .. } => left.degree(gens) + right.degree(gens),
        }
    }

    /// Leaves from left to right.
    pub fn leaves(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.weight());
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Letter>) {
        match self {
            BracketTree::Leaf(i) => out.push(*i),
            BracketTree::Node { left, right, .. } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    /// Number of occurrences of each generator among `n` generators.
    pub fn content(&self, n: usize) -> Vec<usize> {
        let mut c = vec![0; n];
        for l in self.leaves() {
            c[l as usize] += 1;
        }
        c
    }

    pub fn children(&self) -> Option<(&BracketTree, &BracketTree)> {
        match self {
            BracketTree::Leaf(_) => None,
            BracketTree::Node { left, right, .. } => Some((left, right)),
        }
    }

    /// Nested arrays of generator names, e.g. `["x",["x","y"]]`.
    pub fn to_json(&self, gens: &GeneratorSet) -> Value {
        match self {
            BracketTree::Leaf(i) => Value::String(gens.name(*i).to_string()),
            BracketTree::Node { left, right, .. } => Value::Array(vec![left.to_json(gens), right.to_json(gens)]),
        }
    }

    pub fn from_json(v: &Value, gens: &GeneratorSet) -> Result<Self> {
        match v {
            Value::String(s) => Ok(BracketTree::Leaf(gens.index_of(s)?)),
            Value::Array(a) if a.len() == 2 => Ok(BracketTree::node(
                BracketTree::from_json(&a[0], gens)?,
                BracketTree::from_json(&a[1], gens)?,
            )),
            _ => Err(Error::invalid(format!("not a bracket tree: {v}"))),
        }
    }

    /// Bracket notation with generator names, e.g. `[x,[x,y]]`.
    pub fn display(&self, gens: &GeneratorSet) -> String {
        match self {
            BracketTree::Leaf(i) => gens.name(*i).to_string(),
            BracketTree::Node { left, right, .. } => {
                format!("[{},{}]", left.display(gens), right.display(gens))
            }
        }
    }
}

impl Ord for BracketTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight().cmp(&other.weight()).then_with(|| match (self, other) {
            (BracketTree::Leaf(a), BracketTree::Leaf(b)) => a.cmp(b),
            (BracketTree::Leaf(_), BracketTree::Node { .. }) => Ordering::Less,
            (BracketTree::Node { .. }, BracketTree::Leaf(_)) => Ordering::Greater,
            (BracketTree::Node { left: l1, right: r1, .. }, BracketTree::Node { left: l2, right: r2, .. }) => {
                l1.cmp(l2).then_with(|| r1.cmp(r2))
            }
        })
    }
}

impl PartialOrd for BracketTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A formal Z/p^r-linear combination of bracket trees: an element of the
/// free nonassociative algebra L′(V). No Lie relations are imposed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeNAElement {
    ring: RingSpec,
    terms: BTreeMap<BracketTree, u64>,
}

impl FreeNAElement {
    pub fn zero(ring: RingSpec) -> Self {
        FreeNAElement {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_tree(ring: RingSpec, tree: BracketTree) -> Self {
        FreeNAElement::from_terms(ring, [(tree, 1)])
    }

    pub fn generator(gens: &GeneratorSet, i: Letter) -> Self {
        FreeNAElement::from_tree(*gens.ring(), BracketTree::Leaf(i))
    }

    pub fn from_terms(ring: RingSpec, terms: impl IntoIterator<Item = (BracketTree, u64)>) -> Self {
        let mut e = FreeNAElement::zero(ring);
        for (t, c) in terms {
            e.add_term(t, c);
        }
        e
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<BracketTree, u64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, tree: BracketTree, coeff: u64) {
        let c = self.ring.norm(coeff);
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(tree);
        match entry {
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

    pub fn add(&self, other: &FreeNAElement) -> FreeNAElement {
        let mut out = self.clone();
        for (t, &c) in &other.terms {
            out.add_term(t.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: u64) -> FreeNAElement {
        FreeNAElement::from_terms(self.ring, self.terms.iter().map(|(t, &a)| (t.clone(), self.ring.mul(a, c))))
    }

    /// Bilinear extension of `[a, b]`.
    pub fn bracket(&self, other: &FreeNAElement) -> FreeNAElement {
        let mut out = FreeNAElement::zero(self.ring);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term(BracketTree::node(a.clone(), b.clone()), self.ring.mul(ca, cb));
            }
        }
        out
    }

    /// Common weight of all terms, if homogeneous and nonzero.
    pub fn weight(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(BracketTree::weight);
        let w = it.next()?;
        it.all(|x| x == w).then_some(w)
    }

    /// Common topological degree of all terms, if homogeneous and nonzero.
    pub fn degree(&self, gens: &GeneratorSet) -> Option<i64> {
        let mut it = self.terms.keys().map(|t| t.degree(gens));
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn is_homogeneous(&self, gens: &GeneratorSet) -> bool {
        self.is_zero() || (self.weight().is_some() && self.degree(gens).is_some())
    }

    pub fn display(&self, gens: &GeneratorSet) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(t, &c)| if c == 1 { t.display(gens) } else { format!("{c}·{}", t.display(gens)) })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// `[{"coeff":c,"tree":…}, …]` in canonical tree order.
    pub fn to_json(&self, gens: &GeneratorSet) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(t, &c)| serde_json::json!({"coeff": c, "tree": t.to_json(gens)}))
                .collect(),
        )
    }
}
