//! Symbolic wedges of mod p^r Moore spaces: prime splitting, mod-p^s homology
//! bookkeeping, smash products and Hilton–Milnor factor counts.
//!
//! Conventions: P^n(q) has cells in dimensions n − 1 and n. Smash products
//! follow P^n(p^r) ∧ P^m(p^r) ≃ P^{n+m}(p^r) ∨ P^{n+m−1}(p^r) for p^r ≠ 2.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freelie::{witt, witt_multigraded};
use crate::growth::GrowthSequence;
use crate::serde_util::{rational_string, rational_to_f64};
use crate::zpmod::is_prime;

/// P^dim(p^r).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MooreSummand {
    pub dim: u32,
    pub p: u64,
    pub r: u32,
}

impl MooreSummand {
    pub fn new(dim: u32, p: u64, r: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::invalid(format!("Moore space dimension {dim} < 2")));
        }
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if r == 0 {
            return Err(Error::invalid("P^n(1) is contractible; exponent must be ≥ 1"));
        }
        Ok(MooreSummand { dim, p, r })
    }

    pub fn order(&self) -> Option<u64> {
        self.p.checked_pow(self.r)
    }
}

/// A finite wedge of Moore spaces with multiplicities, sorted by (dim, p, r).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<WedgeEntry>", into = "Vec<WedgeEntry>")]
pub struct MooreWedge {
    summands: BTreeMap<MooreSummand, BigUint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeEntry {
    pub dim: u32,
    pub p: u64,
    pub r: u32,
    #[serde(with = "crate::serde_util::biguint")]
    pub mult: BigUint,
}

impl TryFrom<Vec<WedgeEntry>> for MooreWedge {
    type Error = Error;
    fn try_from(entries: Vec<WedgeEntry>) -> Result<Self> {
        let mut w = MooreWedge::default();
        for e in entries {
            if e.mult.is_zero() {
                return Err(Error::invalid("multiplicities must be at least 1"));
            }
            w.insert(MooreSummand::new(e.dim, e.p, e.r)?, e.mult);
        }
        Ok(w)
    }
}

impl From<MooreWedge> for Vec<WedgeEntry> {
    fn from(w: MooreWedge) -> Self {
        w.summands
            .into_iter()
            .map(|(s, mult)| WedgeEntry {
                dim: s.dim,
                p: s.p,
                r: s.r,
                mult,
            })
            .collect()
    }
}

impl MooreWedge {
    pub fn single(s: MooreSummand) -> Self {
        let mut w = MooreWedge::default();
        w.insert(s, BigUint::one());
        w
    }

    pub fn insert(&mut self, s: MooreSummand, mult: BigUint) {
        if !mult.is_zero() {
            *self.summands.entry(s).or_default() += mult;
        }
    }

    pub fn summands(&self) -> &BTreeMap<MooreSummand, BigUint> {
        &self.summands
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Number of Moore spaces, with multiplicity.
    pub fn count(&self) -> BigUint {
        self.summands.values().sum()
    }

    pub fn wedge(&self, other: &MooreWedge) -> MooreWedge {
        let mut out = self.clone();
        for (s, m) in &other.summands {
            out.insert(*s, m.clone());
        }
        out
    }

    /// Dimension shift (suspension) by `k`.
    pub fn suspend(&self, k: u32) -> MooreWedge {
        MooreWedge {
            summands: self
                .summands
                .iter()
                .map(|(s, m)| (MooreSummand { dim: s.dim + k, ..*s }, m.clone()))
                .collect(),
        }
    }

    pub fn max_dim(&self) -> Option<u32> {
        self.summands.keys().map(|s| s.dim).max()
    }

    /// The common (p, r) of all summands, if there is one.
    fn common_ring(&self) -> Option<(u64, u32)> {
        let mut it = self.summands.keys().map(|s| (s.p, s.r));
        let first = it.next()?;
        it.all(|x| x == first).then_some(first)
    }
}

impl std::fmt::Display for MooreWedge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_empty() {
            return write!(f, "*");
        }
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|(s, m)| {
                let base = format!("P^{}({}^{})", s.dim, s.p, s.r);
                if m.is_one() {
                    base
                } else {
                    format!("{m}·{base}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" ∨ "))
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// P^n(ℓ) split into one Moore space per prime-power factor of ℓ.
pub fn crt_split(n: u32, ell: u64) -> Result<MooreWedge> {
    if ell <= 1 {
        return Err(Error::invalid(format!("P^{n}({ell}) is contractible; ℓ must be ≥ 2")));
    }
    if n < 3 {
        return Err(Error::Precondition(format!("prime splitting needs n ≥ 3, got {n}")));
    }
    let mut w = MooreWedge::default();
    for (p, r) in factorize(ell) {
        w.insert(MooreSummand::new(n, p, r)?, BigUint::one());
    }
    Ok(w)
}

/// Reduced mod p^s homology Poincaré polynomial: coefficient list indexed by degree.
/// Summands at other primes contribute nothing.
pub fn homology_poincare(w: &MooreWedge, p: u64, s: u32) -> Result<Vec<BigUint>> {
    if !is_prime(p) || s == 0 {
        return Err(Error::invalid("coefficients must be Z/p^s with p prime, s ≥ 1"));
    }
    let mut coeffs: Vec<BigUint> = Vec::new();
    for (m, mult) in &w.summands {
        if m.p != p {
            continue;
        }
        if s > m.r {
            return Err(Error::invalid(format!(
                "coefficient exponent s = {s} exceeds r = {} of P^{}({}^{})",
                m.r, m.dim, m.p, m.r
            )));
        }
        let top = m.dim as usize;
        if coeffs.len() <= top {
            coeffs.resize(top + 1, BigUint::zero());
        }
        coeffs[top] += mult;
        coeffs[top - 1] += mult;
    }
    Ok(coeffs)
}

/// Product of two coefficient lists.
pub fn poly_mul(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn trim(mut v: Vec<BigUint>) -> Vec<BigUint> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn check_smashable(p: u64, r: u32) -> Result<()> {
    if p == 2 && r == 1 {
        return Err(Error::Unsupported("smash rule excludes p^r = 2".into()));
    }
    Ok(())
}

/// Smash product, distributed over wedges.
pub fn smash(a: &MooreWedge, b: &MooreWedge) -> Result<MooreWedge> {
    if a.is_empty() || b.is_empty() {
        return Ok(MooreWedge::default());
    }
    let (pa, ra) = a
        .common_ring()
        .ok_or_else(|| Error::Unsupported("wedge mixes coefficient rings".into()))?;
    let (pb, rb) = b
        .common_ring()
        .ok_or_else(|| Error::Unsupported("wedge mixes coefficient rings".into()))?;
    if (pa, ra) != (pb, rb) {
        return Err(Error::Unsupported(format!("cannot smash P({pa}^{ra}) with P({pb}^{rb})")));
    }
    check_smashable(pa, ra)?;
    let mut out = MooreWedge::default();
    for (x, mx) in &a.summands {
        for (y, my) in &b.summands {
            let m = mx * my;
            let d = x.dim + y.dim;
            out.insert(MooreSummand { dim: d, p: pa, r: ra }, m.clone());
            out.insert(MooreSummand { dim: d - 1, p: pa, r: ra }, m);
        }
    }
    Ok(out)
}

/// (P^n)^{∧k1} ∧ (P^m)^{∧k2} = ⋁_{i=0}^{k−1} C(k−1, i)·P^{k1·n + k2·m − i}.
pub fn smash_power_binomial(n: u32, m: u32, k1: u32, k2: u32, p: u64, r: u32) -> Result<MooreWedge> {
    MooreSummand::new(n, p, r)?;
    MooreSummand::new(m, p, r)?;
    check_smashable(p, r)?;
    let k = k1 + k2;
    if k == 0 {
        return Err(Error::invalid("k1 + k2 must be at least 1"));
    }
    let top = k1 * n + k2 * m;
    let mut out = MooreWedge::default();
    for i in 0..k {
        out.insert(
            MooreSummand { dim: top - i, p, r },
            binomial(BigUint::from(k - 1), BigUint::from(i)),
        );
    }
    Ok(out)
}

/// One group of Hilton–Milnor factors: all basic products with content (k1, k2).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HiltonMilnorFactor {
    pub weight: u32,
    pub k1: u32,
    pub k2: u32,
    /// Number of basic products with this content.
    #[serde(serialize_with = "crate::serde_util::biguint::serialize")]
    pub count: BigUint,
    /// The suspended smash power, one per basic product.
    pub wedge: MooreWedge,
}

/// Upper bound on K for Hilton–Milnor enumeration.
pub const MAX_HM_WEIGHT: u32 = 64;

/// Factors of ΩΣ(P^n ∨ P^m) indexed by basic products of weight ≤ K on two
/// generators, grouped by content. Per weight the counts sum to W_2(k).
pub fn hilton_milnor_expansion(n: u32, m: u32, p: u64, r: u32, max_k: u32) -> Result<Vec<HiltonMilnorFactor>> {
    if max_k == 0 {
        return Err(Error::invalid("K must be at least 1"));
    }
    if max_k > MAX_HM_WEIGHT {
        return Err(Error::Resource(format!("K = {max_k} exceeds {MAX_HM_WEIGHT}")));
    }
    let mut out = Vec::new();
    for k in 1..=max_k {
        for k1 in (0..=k).rev() {
            let k2 = k - k1;
            let count = witt_multigraded(&[k1 as u64, k2 as u64])?;
            if count.is_zero() {
                continue;
            }
            let wedge = smash_power_binomial(n, m, k1, k2, p, r)?.suspend(1);
            out.push(HiltonMilnorFactor {
                weight: k,
                k1,
                k2,
                count,
                wedge,
            });
        }
    }
    Ok(out)
}

/// Parameters of the homotopy-summand lower bound: wedge P^{n+1}(p^r) ∨
/// P^{m+1}(p^r), coefficients Z/p^s, stable offset j, maximal weight K.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthParams {
    pub n: u32,
    pub m: u32,
    pub p: u64,
    pub r: u32,
    pub s: u32,
    pub j: u32,
    #[serde(rename = "K")]
    pub max_k: u32,
}

impl GrowthParams {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.m < 2 {
            return Err(Error::invalid("n and m must be at least 2"));
        }
        MooreSummand::new(self.n, self.p, self.r)?;
        if self.s == 0 || self.s > self.r {
            return Err(Error::invalid(format!("need 1 ≤ s ≤ r, got s = {}, r = {}", self.s, self.r)));
        }
        check_smashable(self.p, self.r)?;
        if self.max_k == 0 {
            return Err(Error::invalid("K must be at least 1"));
        }
        if self.max_k > MAX_HM_WEIGHT {
            return Err(Error::Resource(format!("K = {} exceeds {MAX_HM_WEIGHT}", self.max_k)));
        }
        Ok(())
    }

    /// Weight k contributes once k > (j+1)/(min(n,m) − 1).
    pub fn contributes(&self, k: u32) -> bool {
        let low = self.n.min(self.m) - 1;
        k as u64 * low as u64 > (self.j + 1) as u64
    }

    /// Top dimension k·max(n,m) + 1 of the weight-k factor's Moore spaces.
    pub fn max_dim(&self, k: u32) -> u32 {
        k * self.n.max(self.m) + 1
    }

    /// Homotopy degree at which weight k is booked.
    pub fn booked_at(&self, k: u32) -> u32 {
        self.max_dim(k) + self.j
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Contribution {
    pub k: u32,
    /// 2^{k−1}·W_2(k).
    #[serde(serialize_with = "crate::serde_util::biguint::serialize")]
    pub count: BigUint,
    pub maxdim: u32,
    pub booked_at: u32,
    /// Whether k passes the threshold and enters the cumulative sequence.
    pub booked: bool,
    /// (1/(2k))·4^k.
    #[serde(serialize_with = "rational_string")]
    pub asymptotic: BigRational,
    pub asymptotic_approx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthCertificate {
    pub params: GrowthParams,
    pub contributions: Vec<Contribution>,
    /// (M, a_M) for every M from the first to the last booking degree.
    pub cumulative: GrowthSequence,
}

/// Lower-bound sequence a_M = Σ 2^{k−1}·W_2(k) over booked weights k with
/// k·max(n,m) + 1 + j ≤ M.
pub fn growth_certificate(params: &GrowthParams) -> Result<GrowthCertificate> {
    params.validate()?;
    let mut contributions = Vec::new();
    for k in 1..=params.max_k {
        let count = BigUint::from(2u32).pow(k - 1) * witt(2, k as u64)?;
        let asymptotic = BigRational::new(BigUint::from(4u32).pow(k).into(), BigUint::from(2 * k).into());
        contributions.push(Contribution {
            k,
            maxdim: params.max_dim(k),
            booked_at: params.booked_at(k),
            booked: params.contributes(k),
            asymptotic_approx: rational_to_f64(&asymptotic),
            asymptotic,
            count,
        });
    }
    let booked: Vec<&Contribution> = contributions.iter().filter(|c| c.booked).collect();
    let cumulative = match (booked.first(), booked.last()) {
        (Some(first), Some(last)) => {
            let mut by_m: BTreeMap<u32, BigUint> = BTreeMap::new();
            for c in &booked {
                *by_m.entry(c.booked_at).or_default() += &c.count;
            }
            let mut running = BigUint::zero();
            let values: Vec<BigUint> = (first.booked_at..=last.booked_at)
                .map(|mm| {
                    if let Some(v) = by_m.get(&mm) {
                        running += v;
                    }
                    running.clone()
                })
                .collect();
            GrowthSequence::from_values(first.booked_at as i64, values)
        }
        _ => GrowthSequence::from_values(1, std::iter::empty()),
    };
    Ok(GrowthCertificate {
        params: *params,
        contributions,
        cumulative,
    })
}
