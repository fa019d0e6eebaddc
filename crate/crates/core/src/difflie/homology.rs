use std::collections::BTreeMap;

use serde::Serialize;

use super::differential::DifferentialSpec;
use crate::error::Result;
use crate::freelie::{TensorElement, WeightSpace};
use crate::limits::Limits;
use crate::zpmod::{free_span, kernel_generators, span_quotient, GradedModule, Matrix, RingSpec};

/// One weight of (L(V), d) in the commutator-span model: the word blocks by
/// degree, their spanning brackets G_d and the word-level differential D_d
/// from degree d to degree d − 1.
#[derive(Debug, Clone)]
pub struct LieWeightComplex {
    pub space: WeightSpace,
    pub spec: DifferentialSpec,
    pub differential: BTreeMap<i64, Matrix>,
}

impl LieWeightComplex {
    /// Builds weight `k` over Z/p^u.
    pub fn build(spec: &DifferentialSpec, k: usize, u: u32, limits: &Limits) -> Result<Self> {
        let spec = spec.reduce(u)?;
        let space = WeightSpace::build(spec.gens(), k, limits)?;
        let ring = space.ring;
        let mut differential = BTreeMap::new();
        for (&d, block) in &space.blocks {
            let Some(target) = space.block(d - 1) else { continue };
            let mut m = Matrix::zeros(target.words.len(), block.words.len());
            for (j, w) in block.words.iter().enumerate() {
                let mut img = TensorElement::zero(ring);
                spec.differentiate_word_into(w, 1, &mut img);
                for (w2, &c) in img.terms() {
                    m[(target.index[w2], j)] = c;
                }
            }
            differential.insert(d, m);
        }
        Ok(LieWeightComplex {
            space,
            spec,
            differential,
        })
    }

    pub fn ring(&self) -> &RingSpec {
        &self.space.ring
    }

    pub fn weight(&self) -> usize {
        self.space.weight
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.space.blocks.keys().copied()
    }

    fn rows(&self, d: i64) -> usize {
        self.space.block(d).map_or(0, |b| b.words.len())
    }

    /// Columns spanning L_d.
    pub fn spanning(&self, d: i64) -> Matrix {
        self.space
            .block(d)
            .map_or_else(|| Matrix::zeros(0, 0), |b| b.spanning.clone())
    }

    /// Columns spanning d(L_{d+1}) ⊆ words of degree d.
    pub fn boundaries(&self, d: i64) -> Matrix {
        match (self.differential.get(&(d + 1)), self.space.block(d + 1)) {
            (Some(dm), Some(b)) => dm.mul(self.ring(), &b.spanning),
            _ => Matrix::zeros(self.rows(d), 0),
        }
    }

    /// Columns spanning the cycles Z_d = G_d · ker(D_d G_d).
    pub fn cycles(&self, d: i64) -> Matrix {
        let g = self.spanning(d);
        match self.differential.get(&d) {
            Some(dm) => {
                let dg = dm.mul(self.ring(), &g);
                let ker = kernel_generators(self.ring(), &dg);
                g.mul(self.ring(), &ker)
            }
            None => g,
        }
    }
}

/// L, Z, B and H of one weight, as summand decompositions by degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightHomology {
    pub weight: usize,
    pub l: GradedModule,
    pub z: GradedModule,
    pub b: GradedModule,
    pub h: GradedModule,
}

impl WeightHomology {
    fn dims(m: &GradedModule) -> BTreeMap<i64, usize> {
        m.components().iter().map(|(&d, e)| (d, e.len())).collect()
    }

    /// Summand counts (over F_p: dimensions) per degree.
    pub fn dims_l(&self) -> BTreeMap<i64, usize> {
        Self::dims(&self.l)
    }
    pub fn dims_z(&self) -> BTreeMap<i64, usize> {
        Self::dims(&self.z)
    }
    pub fn dims_b(&self) -> BTreeMap<i64, usize> {
        Self::dims(&self.b)
    }
    pub fn dims_h(&self) -> BTreeMap<i64, usize> {
        Self::dims(&self.h)
    }
}

/// Homology of the weight-k component of L(V) ⊗ Z/p^u.
pub fn homology(spec: &DifferentialSpec, k: usize, u: u32, limits: &Limits) -> Result<WeightHomology> {
    let cx = LieWeightComplex::build(spec, k, u, limits)?;
    Ok(homology_of(&cx))
}

pub fn homology_of(cx: &LieWeightComplex) -> WeightHomology {
    let ring = *cx.ring();
    let mut l = BTreeMap::new();
    let mut z = BTreeMap::new();
    let mut b = BTreeMap::new();
    let mut h = BTreeMap::new();
    for d in cx.degrees() {
        let ambient = vec![ring.s(); cx.rows(d)];
        let cyc = cx.cycles(d);
        let bnd = cx.boundaries(d);
        l.insert(d, free_span(&ring, &cx.spanning(d)).0);
        z.insert(d, free_span(&ring, &cyc).0);
        b.insert(d, free_span(&ring, &bnd).0);
        h.insert(d, span_quotient(&ring, &ambient, &cyc, &bnd));
    }
    let module = |c| GradedModule::new(ring, c).expect("span exponents are valid");
    WeightHomology {
        weight: cx.weight(),
        l: module(l),
        z: module(z),
        b: module(b),
        h: module(h),
    }
}
