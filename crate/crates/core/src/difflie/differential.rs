use crate::error::{Error, Result};
use crate::freelie::{BracketTree, FreeNAElement, GeneratorSet, Letter, TensorElement};
use crate::zpmod::RingSpec;

/// A differential on the free algebra on V, determined by its values on the
/// generators. Each d(v) is a linear combination of generators of degree
/// deg(v) − 1, so the extension preserves weight; d² = 0 is checked on V.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialSpec {
    gens: GeneratorSet,
    /// `images[i]` = d(gen_i) as (generator, coefficient) pairs.
    images: Vec<Vec<(Letter, u64)>>,
}

impl DifferentialSpec {
    /// `images[i]` is d of generator i, given as an element of L′(V) of weight 1.
    pub fn new(gens: GeneratorSet, images: Vec<FreeNAElement>) -> Result<Self> {
        if images.len() != gens.len() {
            return Err(Error::invalid(format!(
                "differential needs {} generator images, got {}",
                gens.len(),
                images.len()
            )));
        }
        let ring = *gens.ring();
        let mut out = Vec::with_capacity(images.len());
        for (i, img) in images.iter().enumerate() {
            let deg = gens.degree(i as Letter) as i64;
            let mut terms = Vec::new();
            for (t, &c) in img.terms() {
                let BracketTree::Leaf(j) = t else {
                    return Err(Error::invalid(format!(
                        "d({}) must be a combination of generators to preserve weight",
                        gens.name(i as Letter)
                    )));
                };
                if gens.degree(*j) as i64 != deg - 1 {
                    return Err(Error::invalid(format!(
                        "d({}) = … {} … does not lower degree by exactly one",
                        gens.name(i as Letter),
                        gens.name(*j)
                    )));
                }
                terms.push((*j, ring.norm(c)));
            }
            out.push(terms);
        }
        let spec = DifferentialSpec { gens, images: out };
        for i in 0..spec.gens.len() {
            let dd = spec.apply_letter_twice(i as Letter);
            if dd.iter().any(|&c| c != 0) {
                return Err(Error::invalid(format!(
                    "d∘d ≠ 0 on generator {}",
                    spec.gens.name(i as Letter)
                )));
            }
        }
        Ok(spec)
    }

    /// Differential given by `d(a) = b` for each listed (a, b); unlisted generators are cycles.
    pub fn from_pairs(gens: GeneratorSet, pairs: &[(&str, &str)]) -> Result<Self> {
        let ring = *gens.ring();
        let mut images = vec![FreeNAElement::zero(ring); gens.len()];
        for &(a, b) in pairs {
            let ia = gens.index_of(a)? as usize;
            let ib = gens.index_of(b)?;
            images[ia] = images[ia].add(&FreeNAElement::generator(&gens, ib));
        }
        DifferentialSpec::new(gens, images)
    }

    /// L(x, dx): x in degree n, y = dx in degree n − 1.
    pub fn acyclic_pair(ring: RingSpec, n: u32) -> Result<Self> {
        let gens = GeneratorSet::acyclic_pair(ring, n)?;
        DifferentialSpec::from_pairs(gens, &[("x", "y")])
    }

    pub fn gens(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn ring(&self) -> &RingSpec {
        self.gens.ring()
    }

    /// Coefficients reduced into Z/p^u.
    pub fn reduce(&self, u: u32) -> Result<DifferentialSpec> {
        let ring = self.ring().reduce_to(u)?;
        Ok(DifferentialSpec {
            gens: self.gens.with_ring(ring),
            images: self
                .images
                .iter()
                .map(|t| t.iter().map(|&(j, c)| (j, c % ring.modulus())).filter(|&(_, c)| c != 0).collect())
                .collect(),
        })
    }

    pub fn image_of(&self, i: Letter) -> &[(Letter, u64)] {
        &self.images[i as usize]
    }

    fn apply_letter_twice(&self, i: Letter) -> Vec<u64> {
        let ring = self.ring();
        let mut acc = vec![0; self.gens.len()];
        for &(j, c) in self.image_of(i) {
            for &(k, c2) in self.image_of(j) {
                acc[k as usize] = ring.add(acc[k as usize], ring.mul(c, c2));
            }
        }
        acc
    }

    /// The derivation on trees: d[a,b] = [da,b] + (−1)^{|a|}[a,db].
    pub fn differentiate_tree(&self, tree: &BracketTree) -> FreeNAElement {
        let ring = *self.ring();
        match tree {
            BracketTree::Leaf(i) => {
                FreeNAElement::from_terms(ring, self.image_of(*i).iter().map(|&(j, c)| (BracketTree::Leaf(j), c)))
            }
            BracketTree::Node { left, right, .. } => {
                let l = FreeNAElement::from_tree(ring, (**left).clone());
                let r = FreeNAElement::from_tree(ring, (**right).clone());
                let first = self.differentiate_tree(left).bracket(&r);
                let second = l.bracket(&self.differentiate_tree(right));
                let sign = ring.sign(left.degree(&self.gens) % 2 != 0);
                first.add(&second.scale(sign))
            }
        }
    }

    pub fn differentiate(&self, xi: &FreeNAElement) -> FreeNAElement {
        let mut out = FreeNAElement::zero(*xi.ring());
        for (t, &c) in xi.terms() {
            out = out.add(&self.differentiate_tree(t).scale(c));
        }
        out
    }

    /// d on words: Σ_i (−1)^{|w_1 … w_{i−1}|} w_1 … d(w_i) … w_k.
    pub fn differentiate_tensor(&self, e: &TensorElement) -> TensorElement {
        let ring = *e.ring();
        let mut out = TensorElement::zero(ring);
        for (w, &c) in e.terms() {
            self.differentiate_word_into(w, c, &mut out);
        }
        out
    }

    pub(crate) fn differentiate_word_into(&self, w: &[Letter], c: u64, out: &mut TensorElement) {
        let ring = *out.ring();
        let mut prefix_odd = false;
        for (pos, &l) in w.iter().enumerate() {
            let sign = ring.sign(prefix_odd);
            for &(j, cj) in self.image_of(l) {
                let mut w2 = w.to_vec();
                w2[pos] = j;
                out.add_term(w2, ring.mul(ring.mul(c, cj), sign));
            }
            prefix_odd ^= self.gens.is_odd(l);
        }
    }
}
