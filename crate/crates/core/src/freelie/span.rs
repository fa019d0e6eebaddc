//! The free graded Lie algebra L(V) modelled as the commutator span inside
//! T(V), one weight at a time.
//!
//! By antisymmetry and Jacobi every bracket of weight k is an integral
//! combination of right-normed brackets `[w1,[w2,…,w_k]]`, so the n^k
//! right-normed words span L(V)^k. Ranks and summand decompositions of the
//! span come from Smith normal form of the (words × brackets) matrix, one
//! topological degree at a time.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use super::generators::{GeneratorSet, Letter, Word};
use super::hall::witt;
use super::tensor::TensorElement;
use super::tree::BracketTree;
use crate::error::Result;
use crate::limits::Limits;
use crate::zpmod::{free_span, GradedModule, Matrix, RingSpec};

/// Words of one weight and one topological degree, with the span of the
/// right-normed brackets as a matrix (rows indexed by `words`).
#[derive(Debug, Clone)]
pub struct DegreeBlock {
    pub degree: i64,
    pub words: Vec<Word>,
    pub index: HashMap<Word, usize>,
    /// Columns: nonzero tensor images of right-normed brackets.
    pub spanning: Matrix,
}

/// All words of weight k over the generators, grouped by degree.
#[derive(Debug, Clone)]
pub struct WeightSpace {
    pub weight: usize,
    pub ring: RingSpec,
    pub blocks: BTreeMap<i64, DegreeBlock>,
}

/// All words of length k in lexicographic order.
pub fn words_of_length(n: usize, k: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..n).map(move |l| {
                    let mut w2 = w.clone();
                    w2.push(l as Letter);
                    w2
                })
            })
            .collect();
    }
    out
}

/// Tensor images of the right-normed brackets of every word of length k,
/// built suffix-first: E(a·w) = a·E(w) − (−1)^{|a||w|} E(w)·a.
pub fn right_normed_images(gens: &GeneratorSet, k: usize) -> Vec<(Word, TensorElement)> {
    let ring = *gens.ring();
    let n = gens.len();
    let mut level: Vec<(Word, TensorElement)> =
        (0..n).map(|l| (vec![l as Letter], TensorElement::word(ring, vec![l as Letter]))).collect();
    for _ in 1..k {
        let mut next = Vec::with_capacity(level.len() * n);
        for a in 0..n as Letter {
            let leaf = TensorElement::word(ring, vec![a]);
            for (w, e) in &level {
                let mut word = Vec::with_capacity(w.len() + 1);
                word.push(a);
                word.extend_from_slice(w);
                next.push((word, leaf.bracket(e, gens)));
            }
        }
        level = next;
    }
    level
}

impl WeightSpace {
    pub fn build(gens: &GeneratorSet, k: usize, limits: &Limits) -> Result<WeightSpace> {
        limits.check_words(gens.len(), k)?;
        let ring = *gens.ring();
        let mut words_by_degree: BTreeMap<i64, Vec<Word>> = BTreeMap::new();
        for w in words_of_length(gens.len(), k) {
            words_by_degree.entry(gens.word_degree(&w)).or_default().push(w);
        }
        let mut columns: BTreeMap<i64, Vec<TensorElement>> = BTreeMap::new();
        for (w, e) in right_normed_images(gens, k) {
            if !e.is_zero() {
                columns.entry(gens.word_degree(&w)).or_default().push(e);
            }
        }
        let mut blocks = BTreeMap::new();
        for (degree, words) in words_by_degree {
            let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
            let cols: Vec<Vec<u64>> = columns
                .get(&degree)
                .map(|cs| cs.iter().map(|e| e.coordinates(&index, words.len())).collect())
                .unwrap_or_default();
            let spanning = Matrix::from_columns(words.len(), &cols);
            blocks.insert(
                degree,
                DegreeBlock {
                    degree,
                    words,
                    index,
                    spanning,
                },
            );
        }
        Ok(WeightSpace { weight: k, ring, blocks })
    }

    pub fn block(&self, degree: i64) -> Option<&DegreeBlock> {
        self.blocks.get(&degree)
    }
}

/// The weight-k component of L(V) ⊗ Z/p^u.
#[derive(Debug, Clone, Serialize)]
pub struct LieComponent {
    pub weight: usize,
    /// Summand decomposition by topological degree, over Z/p^u.
    pub module: GradedModule,
    /// One generator per summand, in the module's canonical order within each degree.
    #[serde(skip)]
    pub basis: Vec<(i64, TensorElement)>,
}

impl LieComponent {
    pub fn total_dim(&self) -> usize {
        self.module.summand_count()
    }
}

/// The weight-k component of L(V) over Z/p^u, u ≤ r.
pub fn lie_component(gens: &GeneratorSet, k: usize, u: u32, limits: &Limits) -> Result<LieComponent> {
    let ring = gens.ring().reduce_to(u)?;
    let reduced = gens.with_ring(ring);
    let space = WeightSpace::build(&reduced, k, limits)?;
    let mut components = BTreeMap::new();
    let mut basis = Vec::new();
    for (&d, block) in &space.blocks {
        let (exps, vecs) = free_span(&ring, &block.spanning);
        for v in vecs {
            basis.push((d, TensorElement::from_coordinates(ring, &block.words, &v)));
        }
        components.insert(d, exps);
    }
    Ok(LieComponent {
        weight: k,
        module: GradedModule::new(ring, components)?,
        basis,
    })
}

/// Every bracket tree of weight k on n generators (Catalan(k−1)·n^k trees).
pub fn all_trees(n: usize, k: usize) -> Vec<BracketTree> {
    let mut memo: Vec<Vec<BracketTree>> = vec![Vec::new()];
    memo.push((0..n).map(|i| BracketTree::Leaf(i as Letter)).collect());
    for w in 2..=k {
        let mut level = Vec::new();
        for a in 1..w {
            for l in &memo[a] {
                for r in &memo[w - a] {
                    level.push(BracketTree::node(l.clone(), r.clone()));
                }
            }
        }
        memo.push(level);
    }
    memo.swap_remove(k)
}

#[derive(Debug, Clone, Serialize)]
pub struct PbwRow {
    pub weight: usize,
    pub dim: usize,
    pub even: usize,
    pub odd: usize,
    #[serde(serialize_with = "crate::serde_util::biguint::serialize")]
    pub witt: BigUint,
    pub matches_witt: bool,
}

/// Dimension diagnostics of L(V) ⊗ F_p against the Witt numbers and the
/// Poincaré–Birkhoff–Witt series identity. Never asserts.
#[derive(Debug, Clone, Serialize)]
pub struct PbwReport {
    pub rows: Vec<PbwRow>,
    /// Coefficients of Π (1+t^k)^{o_k} (1−t^k)^{−e_k} mod t^{K+1}.
    #[serde(serialize_with = "crate::serde_util::bigint_list")]
    pub series: Vec<BigInt>,
    /// Coefficients of 1/(1 − n t) mod t^{K+1}.
    #[serde(serialize_with = "crate::serde_util::bigint_list")]
    pub expected: Vec<BigInt>,
    pub series_matches: bool,
}

fn truncated_mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn pbw_series_diagnostic(gens: &GeneratorSet, max_weight: usize, limits: &Limits) -> Result<PbwReport> {
    let len = max_weight + 1;
    let mut rows = Vec::new();
    let mut series = vec![BigInt::zero(); len];
    series[0] = BigInt::one();
    for k in 1..=max_weight {
        let comp = lie_component(gens, k, 1, limits)?;
        let (mut even, mut odd) = (0, 0);
        for (d, exps) in comp.module.components() {
            if d % 2 == 0 {
                even += exps.len();
            } else {
                odd += exps.len();
            }
        }
        let w = witt(gens.len() as u64, k as u64)?;
        // (1 + t^k)^{odd}
        for _ in 0..odd {
            let mut f = vec![BigInt::zero(); len];
            f[0] = BigInt::one();
            f[k] = BigInt::one();
            series = truncated_mul(&series, &f, len);
        }
        // (1 − t^k)^{−even} = (Σ_j t^{kj})^{even}
        for _ in 0..even {
            let mut f = vec![BigInt::zero(); len];
            for j in (0..len).step_by(k) {
                f[j] = BigInt::one();
            }
            series = truncated_mul(&series, &f, len);
        }
        let dim = even + odd;
        rows.push(PbwRow {
            weight: k,
            dim,
            even,
            odd,
            matches_witt: BigUint::from(dim) == w,
            witt: w,
        });
    }
    let expected: Vec<BigInt> = (0..len).map(|i| BigInt::from(gens.len()).pow(i as u32)).collect();
    Ok(PbwReport {
        series_matches: series == expected,
        rows,
        series,
        expected,
    })
}
