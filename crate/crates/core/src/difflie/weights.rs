//! The weighted dimension dim^k(M) = Σ_{i≤k} dim(M^i)/i and the size
//! comparisons between L(V), its homology and its boundaries.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serialize;

use super::differential::DifferentialSpec;
use super::homology::{homology, LieWeightComplex};
use crate::error::{Error, Result};
use crate::freelie::witt;
use crate::growth::GrowthSequence;
use crate::limits::Limits;
use crate::serde_util::rational_string;
use crate::zpmod::rank_mod_p;

/// dim^k from dimensions indexed by weight (weights ≥ 1; missing weights are 0).
pub fn weighted_dim(dims: &BTreeMap<usize, usize>, k: usize) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::invalid("dim^k needs k ≥ 1"));
    }
    if dims.contains_key(&0) {
        return Err(Error::invalid("weights start at 1"));
    }
    Ok(dims
        .range(1..=k)
        .map(|(&i, &d)| BigRational::new(BigInt::from(d), BigInt::from(i)))
        .sum())
}

/// Total dimensions of L, HL and BL over F_p per weight.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct WeightTotals {
    pub l: BTreeMap<usize, usize>,
    pub h: BTreeMap<usize, usize>,
    pub b: BTreeMap<usize, usize>,
}

pub fn weight_totals(spec: &DifferentialSpec, max_weight: usize, limits: &Limits) -> Result<WeightTotals> {
    limits.check_words(spec.gens().len(), max_weight)?;
    let mut t = WeightTotals::default();
    for w in 1..=max_weight {
        let h = homology(spec, w, 1, limits)?;
        t.l.insert(w, h.l.summand_count());
        t.h.insert(w, h.h.summand_count());
        t.b.insert(w, h.b.summand_count());
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityRow {
    pub k: usize,
    #[serde(serialize_with = "rational_string")]
    pub dim_l: BigRational,
    #[serde(serialize_with = "rational_string")]
    pub dim_h: BigRational,
    #[serde(serialize_with = "rational_string")]
    pub dim_b: BigRational,
    /// dim^k(HL) < dim^k(L)/p
    pub homology_small: bool,
    /// dim^k(BL) > (p−1)/(2p)·dim^k(L)
    pub boundaries_large: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub p: u64,
    pub rows: Vec<InequalityRow>,
}

impl InequalityReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.homology_small && r.boundaries_large)
    }
}

fn require_acyclic_generators(spec: &DifferentialSpec, limits: &Limits) -> Result<()> {
    let h = homology(spec, 1, 1, limits)?;
    if let Some((&degree, _)) = h.h.components().iter().next() {
        return Err(Error::NotAcyclic { degree, weight: 1 });
    }
    Ok(())
}

/// Evaluates both weighted-dimension inequalities for k = 1..=max_k over F_p.
pub fn check_weight_inequalities(spec: &DifferentialSpec, max_k: usize, limits: &Limits) -> Result<InequalityReport> {
    require_acyclic_generators(spec, limits)?;
    let p = spec.ring().p();
    let totals = weight_totals(spec, max_k, limits)?;
    let pr = BigRational::from_integer(BigInt::from(p));
    let coeff = BigRational::new(BigInt::from(p - 1), BigInt::from(2 * p));
    let mut rows = Vec::new();
    for k in 1..=max_k {
        let dim_l = weighted_dim(&totals.l, k)?;
        let dim_h = weighted_dim(&totals.h, k)?;
        let dim_b = weighted_dim(&totals.b, k)?;
        rows.push(InequalityRow {
            k,
            homology_small: dim_h < &dim_l / &pr,
            boundaries_large: dim_b > &coeff * &dim_l,
            dim_l,
            dim_h,
            dim_b,
        });
    }
    Ok(InequalityReport { p, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryBoundRow {
    pub k: usize,
    /// n·k, the degree cut-off.
    pub degree: i64,
    /// dim ⊕_{j ≤ nk} BL_j.
    #[serde(serialize_with = "crate::serde_util::biguint::serialize")]
    pub boundaries: BigUint,
    /// (p−1)/(2pk)·W_ℓ(k).
    #[serde(serialize_with = "rational_string")]
    pub bound: BigRational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryGrowth {
    pub p: u64,
    /// ℓ = dim V.
    pub ell: usize,
    /// n = top degree of V.
    pub n: u32,
    /// Cumulative boundary dimensions by topological degree, 1..=nK.
    pub cumulative: GrowthSequence,
    pub rows: Vec<BoundaryBoundRow>,
}

impl BoundaryGrowth {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

/// Cumulative boundary dimensions of L(V) ⊗ F_p and the bound
/// dim(⊕_{j≤nk} BL_j) > (p−1)/(2pk)·W_ℓ(k) for k = 1..=max_k.
///
/// Every weight w with w·(least generator degree) ≤ nK can reach degrees
/// ≤ nK, so all of them are included; the count is exact, not truncated.
pub fn boundary_growth(spec: &DifferentialSpec, max_k: usize, limits: &Limits) -> Result<BoundaryGrowth> {
    let gens = spec.gens();
    let ell = gens.len();
    if ell < 2 {
        return Err(Error::Precondition("V must have total dimension at least 2".into()));
    }
    if max_k == 0 {
        return Err(Error::invalid("K must be at least 1"));
    }
    require_acyclic_generators(spec, limits)?;
    let field = spec.ring().reduce_to(1)?;
    let p = field.p();
    let n = gens.max_degree();
    let top = n as i64 * max_k as i64;
    let max_weight = (top / gens.min_degree() as i64) as usize;
    limits.check_words(ell, max_weight)?;
    let mut by_degree = vec![0usize; top as usize + 1];
    for w in 1..=max_weight {
        let cx = LieWeightComplex::build(spec, w, 1, limits)?;
        for d in cx.degrees().filter(|&d| d <= top) {
            by_degree[d as usize] += rank_mod_p(&field, &cx.boundaries(d));
        }
    }
    let mut running = 0usize;
    let cumulative: Vec<BigUint> = by_degree[1..]
        .iter()
        .map(|&b| {
            running += b;
            BigUint::from(running)
        })
        .collect();
    let mut rows = Vec::new();
    for k in 1..=max_k {
        let degree = n as i64 * k as i64;
        let boundaries = cumulative[degree as usize - 1].clone();
        let bound = BigRational::new(BigInt::from(p - 1), BigInt::from(2 * p * k as u64))
            * BigRational::from_integer(witt(ell as u64, k as u64)?.into());
        rows.push(BoundaryBoundRow {
            k,
            degree,
            holds: BigRational::from_integer(boundaries.clone().into()) > bound,
            boundaries,
            bound,
        });
    }
    Ok(BoundaryGrowth {
        p,
        ell,
        n,
        cumulative: GrowthSequence::from_values(1, cumulative),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zpmod::RingSpec;

    fn spec(p: u64) -> DifferentialSpec {
        DifferentialSpec::acyclic_pair(RingSpec::new(p, 1).unwrap(), 2).unwrap()
    }

    #[test]
    fn weighted_dim_examples() {
        let dims = BTreeMap::from([(1, 2), (2, 2)]);
        assert_eq!(weighted_dim(&dims, 2).unwrap(), BigRational::from_integer(3.into()));
        assert_eq!(weighted_dim(&dims, 1).unwrap(), BigRational::from_integer(2.into()));
        assert_eq!(weighted_dim(&BTreeMap::new(), 4).unwrap(), BigRational::from_integer(0.into()));
        assert!(weighted_dim(&dims, 0).is_err());
    }

    #[test]
    fn inequalities_small_k() {
        let rep = check_weight_inequalities(&spec(3), 3, &Limits::default()).unwrap();
        assert!(rep.all_hold());
        assert_eq!(rep.rows[1].dim_l, BigRational::from_integer(3.into()));
    }

    #[test]
    fn boundary_bound_at_k_two() {
        let g = boundary_growth(&spec(3), 2, &Limits::default()).unwrap();
        assert!(g.all_hold());
        assert!(g.rows[1].boundaries >= BigUint::from(1u32));
        assert_eq!(g.rows[1].bound, BigRational::new(1.into(), 6.into()));
    }

    #[test]
    fn boundary_growth_needs_two_generators() {
        let r = RingSpec::new(3, 1).unwrap();
        let g = crate::freelie::GeneratorSet::uniform(r, 1, 2).unwrap();
        let s = DifferentialSpec::from_pairs(g, &[]).unwrap();
        assert!(matches!(boundary_growth(&s, 2, &Limits::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn non_acyclic_generators_rejected() {
        let r = RingSpec::new(3, 1).unwrap();
        let g = crate::freelie::GeneratorSet::uniform(r, 2, 2).unwrap();
        let s = DifferentialSpec::from_pairs(g, &[]).unwrap();
        assert!(matches!(
            check_weight_inequalities(&s, 2, &Limits::default()),
            Err(Error::NotAcyclic { weight: 1, .. })
        ));
    }
}
