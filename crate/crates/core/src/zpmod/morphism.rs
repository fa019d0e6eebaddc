use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::module::GradedModule;
use super::ring::RingSpec;
use super::snf::{
    kernel_generators, rank_mod_p, relation_matrix, smith_normal_form_matrix, submodule_exponents, Invertible,
    SnfResult,
};
use crate::error::{Error, Result};

/// A homomorphism of graded Z/p^s-modules raising degree by `shift`.
///
/// `blocks[d]` is the matrix from the summands of `domain` in degree `d` to
/// the summands of `codomain` in degree `d + shift`, rows indexed by codomain
/// summands in canonical order. A block is stored for exactly those degrees
/// where both sides are nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MorphismRepr", into = "MorphismRepr")]
pub struct ModuleMorphism {
    domain: GradedModule,
    codomain: GradedModule,
    shift: i64,
    blocks: BTreeMap<i64, Matrix>,
}

#[derive(Serialize, Deserialize)]
struct MorphismRepr {
    domain: GradedModule,
    codomain: GradedModule,
    shift: i64,
    blocks: BTreeMap<i64, Matrix>,
}

impl TryFrom<MorphismRepr> for ModuleMorphism {
    type Error = Error;
    fn try_from(r: MorphismRepr) -> Result<Self> {
        ModuleMorphism::new(r.domain, r.codomain, r.shift, r.blocks)
    }
}

impl From<ModuleMorphism> for MorphismRepr {
    fn from(m: ModuleMorphism) -> Self {
        MorphismRepr {
            domain: m.domain,
            codomain: m.codomain,
            shift: m.shift,
            blocks: m.blocks,
        }
    }
}

/// Violated hypotheses of [`ModuleMorphism::factor_tensor_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorTensorViolation {
    DomainNotFree,
    ComplementNotKilled,
    CompositeNotInjective,
}

/// A change of basis of a graded module: per degree, the matrix whose columns
/// are the new basis vectors in old coordinates, and its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisChange {
    pub blocks: BTreeMap<i64, Invertible>,
}

/// Values an entry may take for a map Z/p^{from} → Z/p^{to}: multiples of
/// p^{max(0, to − from)} below p^{to}. Returns (step, modulus).
fn entry_range(ring: &RingSpec, from: u32, to: u32) -> (u64, u64) {
    (ring.pow_p(to.saturating_sub(from)), ring.pow_p(to))
}

impl ModuleMorphism {
    pub fn new(
        domain: GradedModule,
        codomain: GradedModule,
        shift: i64,
        mut blocks: BTreeMap<i64, Matrix>,
    ) -> Result<Self> {
        domain.same_ring(&codomain)?;
        let ring = *domain.ring();
        for (&d, exps) in domain.components() {
            let target = codomain.exponents(d + shift);
            if target.is_empty() {
                if blocks.get(&d).is_some_and(|m| !m.is_zero() && m.rows() > 0) {
                    return Err(Error::invalid(format!("block at degree {d} maps into a zero component")));
                }
                blocks.remove(&d);
                continue;
            }
            let m = blocks
                .get_mut(&d)
                .ok_or_else(|| Error::invalid(format!("missing block at degree {d}")))?;
            if m.rows() != target.len() || m.cols() != exps.len() {
                return Err(Error::invalid(format!(
                    "block at degree {d} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.len(),
                    exps.len()
                )));
            }
            for (i, &ti) in target.iter().enumerate() {
                for (j, &tj) in exps.iter().enumerate() {
                    let (step, modulus) = entry_range(&ring, tj, ti);
                    let a = m[(i, j)] % ring.modulus() % modulus;
                    if !a.is_multiple_of(step) {
                        return Err(Error::invalid(format!(
                            "entry ({i},{j}) at degree {d} is not a well-defined map Z/p^{tj} -> Z/p^{ti}"
                        )));
                    }
                    m[(i, j)] = a;
                }
            }
        }
        if let Some(d) = blocks.keys().find(|d| domain.exponents(**d).is_empty()) {
            return Err(Error::invalid(format!("block at degree {d} has zero domain")));
        }
        Ok(ModuleMorphism {
            domain,
            codomain,
            shift,
            blocks,
        })
    }

    /// Single-degree convenience constructor from signed rows.
    pub fn from_rows(domain: GradedModule, codomain: GradedModule, rows: &[Vec<i64>]) -> Result<Self> {
        let degree = *domain
            .components()
            .keys()
            .next()
            .ok_or_else(|| Error::invalid("domain is zero"))?;
        let m = Matrix::from_rows(domain.ring(), rows);
        ModuleMorphism::new(domain, codomain, 0, BTreeMap::from([(degree, m)]))
    }

    pub fn zero(domain: GradedModule, codomain: GradedModule, shift: i64) -> Result<Self> {
        let blocks = domain
            .components()
            .iter()
            .filter(|(d, _)| !codomain.exponents(**d + shift).is_empty())
            .map(|(&d, e)| (d, Matrix::zeros(codomain.exponents(d + shift).len(), e.len())))
            .collect();
        ModuleMorphism::new(domain, codomain, shift, blocks)
    }

    pub fn identity(module: &GradedModule) -> Self {
        let blocks = module
            .components()
            .iter()
            .map(|(&d, e)| (d, Matrix::identity(e.len())))
            .collect();
        ModuleMorphism::new(module.clone(), module.clone(), 0, blocks).expect("identity is well defined")
    }

    /// A uniformly random well-defined morphism.
    pub fn random<R: Rng + ?Sized>(domain: &GradedModule, codomain: &GradedModule, shift: i64, rng: &mut R) -> Self {
        let ring = *domain.ring();
        let mut blocks = BTreeMap::new();
        for (&d, exps) in domain.components() {
            let target = codomain.exponents(d + shift);
            if target.is_empty() {
                continue;
            }
            let mut m = Matrix::zeros(target.len(), exps.len());
            for (i, &ti) in target.iter().enumerate() {
                for (j, &tj) in exps.iter().enumerate() {
                    let (step, modulus) = entry_range(&ring, tj, ti);
                    m[(i, j)] = step * rng.gen_range(0..modulus / step);
                }
            }
            blocks.insert(d, m);
        }
        ModuleMorphism::new(domain.clone(), codomain.clone(), shift, blocks).expect("random entries are well defined")
    }

    pub fn domain(&self) -> &GradedModule {
        &self.domain
    }

    pub fn codomain(&self) -> &GradedModule {
        &self.codomain
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn ring(&self) -> &RingSpec {
        self.domain.ring()
    }

    pub fn blocks(&self) -> &BTreeMap<i64, Matrix> {
        &self.blocks
    }

    pub fn block(&self, degree: i64) -> Option<&Matrix> {
        self.blocks.get(&degree)
    }

    /// Image of a domain element (summand coordinates) in degree `degree`.
    pub fn apply(&self, degree: i64, x: &[u64]) -> Vec<u64> {
        let target = self.codomain.exponents(degree + self.shift);
        match self.blocks.get(&degree) {
            Some(m) => m
                .apply(self.ring(), x)
                .into_iter()
                .zip(target)
                .map(|(a, &t)| a % self.ring().pow_p(t))
                .collect(),
            None => vec![0; target.len()],
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModuleMorphism) -> Result<ModuleMorphism> {
        if first.codomain != self.domain {
            return Err(Error::invalid("composition: codomain and domain differ"));
        }
        let ring = *self.ring();
        let shift = first.shift + self.shift;
        let mut blocks = BTreeMap::new();
        for (&d, exps) in first.domain.components() {
            let target = self.codomain.exponents(d + shift);
            if target.is_empty() {
                continue;
            }
            let block = match (first.blocks.get(&d), self.blocks.get(&(d + first.shift))) {
                (Some(f), Some(g)) => g.mul(&ring, f),
                _ => Matrix::zeros(target.len(), exps.len()),
            };
            blocks.insert(d, block);
        }
        ModuleMorphism::new(first.domain.clone(), self.codomain.clone(), shift, blocks)
    }

    /// `φ ⊗ Z/p^u`.
    pub fn tensor_reduce(&self, u: u32) -> Result<ModuleMorphism> {
        let domain = self.domain.tensor_reduce(u)?;
        let codomain = self.codomain.tensor_reduce(u)?;
        let modulus = domain.ring().modulus();
        let blocks = self.blocks.iter().map(|(&d, m)| (d, m.reduced(modulus))).collect();
        ModuleMorphism::new(domain, codomain, self.shift, blocks)
    }

    /// Summand decomposition of Im(φ) for arbitrary domain and codomain.
    pub fn image(&self) -> GradedModule {
        let ring = *self.ring();
        let mut components = BTreeMap::new();
        for (&d, m) in &self.blocks {
            let exps = submodule_exponents(&ring, self.codomain.exponents(d + self.shift), m);
            components.insert(d + self.shift, exps);
        }
        GradedModule::new(ring, components).expect("image exponents are valid")
    }

    /// Summand decomposition of Im(φ), requiring a free codomain. Its count of
    /// Z/p^s summands equals the rank of φ ⊗ Z/p (see [`Self::rank_mod_p`]).
    pub fn image_dims(&self) -> Result<GradedModule> {
        if !self.codomain.is_free() {
            return Err(Error::Unsupported("image_dims requires a free codomain".into()));
        }
        let ring = *self.ring();
        let mut components = BTreeMap::new();
        for (&d, m) in &self.blocks {
            let snf = smith_normal_form_matrix(&ring, m);
            let exps: Vec<u32> = snf
                .diagonal
                .iter()
                .filter(|&&v| v < ring.s())
                .map(|&v| ring.s() - v)
                .collect();
            components.insert(d + self.shift, exps);
        }
        GradedModule::new(ring, components)
    }

    /// Total rank of φ ⊗ Z/p over all degrees.
    pub fn rank_mod_p(&self) -> usize {
        self.blocks.values().map(|m| rank_mod_p(self.ring(), m)).sum()
    }

    /// A nonzero kernel element, if any: (degree, coordinates).
    pub fn kernel_witness(&self) -> Option<(i64, Vec<u64>)> {
        let ring = *self.ring();
        for (&d, exps) in self.domain.components() {
            let target = self.codomain.exponents(d + self.shift);
            if target.is_empty() {
                // everything in this degree maps to zero
                return Some((d, unit_vector(exps.len(), 0)));
            }
            let m = &self.blocks[&d];
            let stacked = m.hcat(&relation_matrix(&ring, target));
            let ker = kernel_generators(&ring, &stacked);
            for c in 0..ker.cols() {
                let x: Vec<u64> = (0..exps.len()).map(|j| ker[(j, c)] % ring.pow_p(exps[j])).collect();
                if x.iter().any(|&a| a != 0) {
                    return Some((d, x));
                }
            }
        }
        None
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_witness().is_none()
    }

    pub fn is_surjective(&self) -> bool {
        self.image() == self.codomain
    }

    /// Smith normal form of every block; both sides must be free.
    pub fn smith_normal_form(&self) -> Result<BTreeMap<i64, SnfResult>> {
        if !self.domain.is_free() || !self.codomain.is_free() {
            return Err(Error::Unsupported(
                "smith_normal_form needs free domain and codomain; lift to a free cover first".into(),
            ));
        }
        Ok(self
            .blocks
            .iter()
            .map(|(&d, m)| (d, smith_normal_form_matrix(self.ring(), m)))
            .collect())
    }

    /// For an injection from a free module, a change of basis of the codomain
    /// after which φ(x_i) = e_i for every domain generator, exhibiting the
    /// image as a direct summand.
    ///
    /// Works one generator at a time: in current coordinates φ(x_j) must have a
    /// unit coefficient on some free codomain summand not yet used, and that
    /// summand's basis vector is replaced by φ(x_j). If no such coefficient
    /// exists then p^{s-1}(x_j − Σ_{i<j} b_i x_i) is a nonzero kernel element.
    pub fn split_injection_normalize(&self) -> Result<BasisChange> {
        if !self.domain.is_free() {
            return Err(Error::Unsupported("split_injection_normalize needs a free domain".into()));
        }
        let ring = *self.ring();
        let s = ring.s();
        let mut out = BTreeMap::new();
        for (&d, exps) in self.codomain.components() {
            out.insert(d, Invertible::identity(exps.len()));
        }
        for (&d, dom) in self.domain.components() {
            let c = d + self.shift;
            let target = self.codomain.exponents(c);
            let m = dom.len();
            if target.is_empty() {
                return Err(Error::NotInjective {
                    degree: d,
                    witness: unit_vector(m, 0),
                });
            }
            let a = &self.blocks[&d];
            let free_rows = target.iter().take_while(|&&t| t == s).count();
            let basis = out.get_mut(&c).expect("codomain degree present");
            for j in 0..m {
                let mut b = basis.inverse.apply(&ring, &a.column(j));
                for (bi, &t) in b.iter_mut().zip(target) {
                    *bi %= ring.pow_p(t);
                }
                let Some(i) = (j..free_rows).find(|&i| ring.is_unit(b[i])) else {
                    let top = ring.pow_p(s - 1);
                    let mut witness = vec![0; m];
                    for (k, w) in witness.iter_mut().enumerate().take(j) {
                        *w = ring.neg(ring.mul(top, b[k]));
                    }
                    witness[j] = top;
                    return Err(Error::NotInjective { degree: d, witness });
                };
                basis.matrix.swap_cols(i, j);
                basis.inverse.swap_rows(i, j);
                b.swap(i, j);
                // replace basis vector j by b (current coordinates)
                let bj_inv = ring.inv(b[j]).expect("pivot is a unit");
                let mut e_inv_col: Vec<u64> = b.iter().map(|&x| ring.neg(ring.mul(x, bj_inv))).collect();
                e_inv_col[j] = bj_inv;
                // Q ← Q·E: column j of Q becomes Q·b
                let new_col = basis.matrix.apply(&ring, &b);
                for (r, &x) in new_col.iter().enumerate() {
                    basis.matrix[(r, j)] = x;
                }
                // Q⁻¹ ← E⁻¹·Q⁻¹
                let row_j: Vec<u64> = basis.inverse.row(j).to_vec();
                for (r, &coef) in e_inv_col.iter().enumerate() {
                    if r == j {
                        continue;
                    }
                    basis.inverse.add_row_multiple(&ring, r, j, coef);
                }
                for (col, &x) in row_j.iter().enumerate() {
                    basis.inverse[(j, col)] = ring.mul(x, bj_inv);
                }
            }
        }
        Ok(BasisChange { blocks: out })
    }

    /// Given f = `self`: X → A ⊕ B and g: A ⊕ B → Y, where `in_a[d][i]` marks
    /// which summands of the middle module in degree d belong to A, returns
    /// whether g ∘ i_A ∘ π_A ∘ f is injective. Requires X free,
    /// p^{s-1}·B = 0 and g ∘ f injective.
    pub fn factor_tensor_check(
        &self,
        g: &ModuleMorphism,
        in_a: &BTreeMap<i64, Vec<bool>>,
    ) -> Result<std::result::Result<bool, FactorTensorViolation>> {
        let middle = &self.codomain;
        if g.domain() != middle {
            return Err(Error::invalid("factor_tensor_check: g does not start where f ends"));
        }
        for (&d, exps) in middle.components() {
            if in_a.get(&d).map_or(0, Vec::len) != exps.len() {
                return Err(Error::invalid(format!("split mask missing or wrong length at degree {d}")));
            }
        }
        if !self.domain.is_free() {
            return Ok(Err(FactorTensorViolation::DomainNotFree));
        }
        let s = self.ring().s();
        for (&d, exps) in middle.components() {
            if exps.iter().zip(&in_a[&d]).any(|(&t, &a)| !a && t >= s) {
                return Ok(Err(FactorTensorViolation::ComplementNotKilled));
            }
        }
        if !g.compose(self)?.is_injective() {
            return Ok(Err(FactorTensorViolation::CompositeNotInjective));
        }
        let projection = ModuleMorphism::new(
            middle.clone(),
            middle.clone(),
            0,
            middle
                .components()
                .keys()
                .map(|&d| {
                    let mask = &in_a[&d];
                    let mut m = Matrix::zeros(mask.len(), mask.len());
                    for (i, &keep) in mask.iter().enumerate() {
                        if keep {
                            m[(i, i)] = 1;
                        }
                    }
                    (d, m)
                })
                .collect(),
        )?;
        Ok(Ok(g.compose(&projection)?.compose(self)?.is_injective()))
    }
}

fn unit_vector(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}
