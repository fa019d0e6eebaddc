use std::collections::BTreeMap;

use serde::Serialize;

use super::differential::DifferentialSpec;
use super::homology::LieWeightComplex;
use crate::error::{Error, Result};
use crate::freelie::TensorElement;
use crate::limits::Limits;
use crate::zpmod::{kernel_generators, rank_mod_p, smith_normal_form_matrix, Matrix, RingSpec};

/// One (weight, degree) spot of a bigraded complex of F_p-vector spaces.
#[derive(Debug, Clone)]
pub struct Spot {
    pub rank: usize,
    /// Matrix of d into (degree − 1, same weight): rank(degree − 1) × rank.
    pub d: Matrix,
    /// Realization of the coordinate basis, if the complex came from L(V).
    pub basis: Vec<TensorElement>,
}

/// A complex over F_p bigraded by (degree, weight), with d of bidegree (−1, 0).
#[derive(Debug, Clone)]
pub struct BigradedComplex {
    field: RingSpec,
    /// Keyed by (weight, degree).
    spots: BTreeMap<(usize, i64), Spot>,
}

impl BigradedComplex {
    /// Validates shapes and d² = 0.
    pub fn new(p: u64, spots: BTreeMap<(usize, i64), Spot>) -> Result<Self> {
        let field = RingSpec::new(p, 1)?;
        let cx = BigradedComplex { field, spots };
        for (&(w, deg), spot) in &cx.spots {
            let below = cx.rank(w, deg - 1);
            if spot.d.rows() != below || spot.d.cols() != spot.rank {
                return Err(Error::invalid(format!(
                    "d at (degree {deg}, weight {w}) has shape {}x{}, expected {below}x{}",
                    spot.d.rows(),
                    spot.d.cols(),
                    spot.rank
                )));
            }
            if let Some(next) = cx.spots.get(&(w, deg - 1)) {
                if !next.d.mul(&field, &spot.d).reduced(p).is_zero() {
                    return Err(Error::invalid(format!("d² ≠ 0 at (degree {deg}, weight {w})")));
                }
            }
        }
        Ok(cx)
    }

    /// Weights `weights` of (L(V) ⊗ F_p, d), in a basis extracted from the
    /// commutator span by Smith normal form.
    pub fn from_lie(spec: &DifferentialSpec, weights: std::ops::RangeInclusive<usize>, limits: &Limits) -> Result<Self> {
        let field = spec.ring().reduce_to(1)?;
        let mut spots = BTreeMap::new();
        for k in weights {
            let cx = LieWeightComplex::build(spec, k, 1, limits)?;
            // basis of L_d: leading columns of U⁻¹; coordinates of v ∈ L_d: leading entries of U·v
            let mut frames: BTreeMap<i64, (Matrix, Matrix, usize)> = BTreeMap::new();
            for d in cx.degrees() {
                let snf = smith_normal_form_matrix(&field, &cx.spanning(d));
                let r = snf.unit_rank();
                frames.insert(d, (snf.u.matrix, snf.u.inverse, r));
            }
            for (&d, (_, u_inv, r)) in &frames {
                let block = cx.space.block(d).expect("degree present");
                let basis_cols: Vec<Vec<u64>> = (0..*r).map(|i| u_inv.column(i)).collect();
                let below = frames.get(&(d - 1)).map_or(0, |f| f.2);
                let mut dm = Matrix::zeros(below, *r);
                if let (Some(word_d), Some((u_below, _, _))) = (cx.differential.get(&d), frames.get(&(d - 1))) {
                    for (j, col) in basis_cols.iter().enumerate() {
                        let img = u_below.apply(&field, &word_d.apply(&field, col));
                        for i in 0..below {
                            dm[(i, j)] = img[i];
                        }
                        debug_assert!(img[below..].iter().all(|&x| x == 0), "image leaves the span");
                    }
                }
                let basis = basis_cols
                    .iter()
                    .map(|c| TensorElement::from_coordinates(field, &block.words, c))
                    .collect();
                if *r > 0 {
                    spots.insert((k, d), Spot { rank: *r, d: dm, basis });
                }
            }
        }
        BigradedComplex::new(field.p(), spots)
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn spots(&self) -> &BTreeMap<(usize, i64), Spot> {
        &self.spots
    }

    pub fn rank(&self, weight: usize, degree: i64) -> usize {
        self.spots.get(&(weight, degree)).map_or(0, |s| s.rank)
    }

    fn d(&self, weight: usize, degree: i64) -> Matrix {
        match self.spots.get(&(weight, degree)) {
            Some(s) => s.d.clone(),
            None => Matrix::zeros(self.rank(weight, degree - 1), 0),
        }
    }

    /// dim H at a spot.
    pub fn homology_dim(&self, weight: usize, degree: i64) -> usize {
        let n = self.rank(weight, degree);
        let out = rank_mod_p(&self.field, &self.d(weight, degree));
        let inc = rank_mod_p(&self.field, &self.d(weight, degree + 1));
        n - out - inc
    }

    /// Coordinates at a spot as a tensor, when the basis is known.
    pub fn realize(&self, weight: usize, degree: i64, coords: &[u64]) -> Option<TensorElement> {
        let spot = self.spots.get(&(weight, degree))?;
        if spot.basis.len() != coords.len() {
            return None;
        }
        let mut out = TensorElement::zero(self.field);
        for (b, &c) in spot.basis.iter().zip(coords) {
            out = out.add(&b.scale(c));
        }
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisPair {
    pub weight: usize,
    /// Degree of the source; the target lies one below.
    pub degree: i64,
    pub source: Vec<u64>,
    pub target: Vec<u64>,
}

/// Pairs (x, y = dx) with deg x even and (z, w = dz) with deg z odd forming a
/// basis of an exact complex.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AcyclicBasis {
    pub even: Vec<BasisPair>,
    pub odd: Vec<BasisPair>,
}

impl AcyclicBasis {
    pub fn pairs(&self) -> impl Iterator<Item = &BasisPair> {
        self.even.iter().chain(&self.odd)
    }
}

/// Inductive construction from the bottom degree up: in each degree take a
/// basis of ker d (all boundaries, by exactness) and lift every element
/// through d using the Smith normal form of the differential above.
pub fn acyclic_basis(cx: &BigradedComplex) -> Result<AcyclicBasis> {
    let field = cx.field;
    for &(w, deg) in cx.spots.keys() {
        if cx.homology_dim(w, deg) != 0 {
            return Err(Error::NotAcyclic { degree: deg, weight: w });
        }
    }
    let mut out = AcyclicBasis::default();
    for &(w, deg) in cx.spots.keys() {
        let kernel = kernel_generators(&field, &cx.d(w, deg));
        if kernel.cols() == 0 {
            continue;
        }
        let above = cx.d(w, deg + 1);
        let snf = smith_normal_form_matrix(&field, &above);
        let r = snf.unit_rank();
        for c in 0..kernel.cols() {
            let y = kernel.column(c);
            let uy = snf.u.matrix.apply(&field, &y);
            let mut z = vec![0; above.cols()];
            z[..r].copy_from_slice(&uy[..r]);
            let x = snf.v.matrix.apply(&field, &z);
            debug_assert_eq!(above.apply(&field, &x), y);
            let pair = BasisPair {
                weight: w,
                degree: deg + 1,
                source: x,
                target: y,
            };
            if (deg + 1) % 2 == 0 {
                out.even.push(pair);
            } else {
                out.odd.push(pair);
            }
        }
    }
    Ok(out)
}
