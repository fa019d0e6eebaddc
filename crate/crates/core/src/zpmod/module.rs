use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::ring::RingSpec;
use crate::error::{Error, Result};

/// A finitely generated graded Z/p^s-module, recorded degree-wise as the
/// multiset of its cyclic summand exponents (sorted descending).
///
/// Two modules are isomorphic exactly when their canonical forms agree, so
/// `PartialEq` is isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ModuleRepr", into = "ModuleRepr")]
pub struct GradedModule {
    ring: RingSpec,
    components: BTreeMap<i64, Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct ModuleRepr {
    p: u64,
    s: u32,
    components: BTreeMap<i64, Vec<u32>>,
}

impl TryFrom<ModuleRepr> for GradedModule {
    type Error = Error;
    fn try_from(r: ModuleRepr) -> Result<Self> {
        let ring = RingSpec::new(r.p, r.s)?;
        GradedModule::new(ring, r.components)
    }
}

impl From<GradedModule> for ModuleRepr {
    fn from(m: GradedModule) -> Self {
        ModuleRepr {
            p: m.ring.p(),
            s: m.ring.s(),
            components: m.components,
        }
    }
}

impl GradedModule {
    /// Validates exponents and normalizes to canonical form. Exponent 0 (a free
    /// Z summand) and exponents above s are rejected.
    pub fn new(ring: RingSpec, components: BTreeMap<i64, Vec<u32>>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (deg, mut exps) in components {
            for &t in &exps {
                ring.check_exponent(t)?;
            }
            if exps.is_empty() {
                continue;
            }
            exps.sort_unstable_by(|a, b| b.cmp(a));
            out.insert(deg, exps);
        }
        Ok(GradedModule {
            ring,
            components: out,
        })
    }

    pub fn zero(ring: RingSpec) -> Self {
        GradedModule {
            ring,
            components: BTreeMap::new(),
        }
    }

    /// A module concentrated in one degree.
    pub fn concentrated(ring: RingSpec, degree: i64, exponents: Vec<u32>) -> Result<Self> {
        GradedModule::new(ring, BTreeMap::from([(degree, exponents)]))
    }

    /// The free module of the given rank in one degree.
    pub fn free(ring: RingSpec, degree: i64, rank: usize) -> Self {
        GradedModule::concentrated(ring, degree, vec![ring.s(); rank]).expect("s is a valid exponent")
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn components(&self) -> &BTreeMap<i64, Vec<u32>> {
        &self.components
    }

    /// Exponents in one degree (empty if the component is zero).
    pub fn exponents(&self, degree: i64) -> &[u32] {
        self.components.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.components
            .values()
            .flatten()
            .all(|&t| t == self.ring.s())
    }

    pub fn is_free_in(&self, degree: i64) -> bool {
        self.exponents(degree).iter().all(|&t| t == self.ring.s())
    }

    /// Number of Z/p^t summands over the given degree range.
    pub fn dim_of(&self, t: u32, degrees: RangeInclusive<i64>) -> Result<usize> {
        self.ring.check_exponent(t)?;
        Ok(self
            .components
            .range(degrees)
            .flat_map(|(_, e)| e.iter())
            .filter(|&&e| e == t)
            .count())
    }

    /// Number of Z/p^t summands in all degrees.
    pub fn dim_total(&self, t: u32) -> Result<usize> {
        self.dim_of(t, i64::MIN..=i64::MAX)
    }

    /// Total number of cyclic summands.
    pub fn summand_count(&self) -> usize {
        self.components.values().map(Vec::len).sum()
    }

    /// log_p of the order of the module.
    pub fn log_order(&self) -> u64 {
        self.components.values().flatten().map(|&t| t as u64).sum()
    }

    /// `M ⊗ Z/p^u`: every exponent t becomes min(t, u); the result lives over Z/p^u.
    pub fn tensor_reduce(&self, u: u32) -> Result<GradedModule> {
        let ring = self.ring.reduce_to(u)?;
        let components = self
            .components
            .iter()
            .map(|(&d, e)| (d, e.iter().map(|&t| t.min(u)).collect()))
            .collect();
        GradedModule::new(ring, components)
    }

    pub fn direct_sum(&self, other: &GradedModule) -> Result<GradedModule> {
        self.same_ring(other)?;
        let mut components = self.components.clone();
        for (&d, e) in &other.components {
            components.entry(d).or_default().extend(e);
        }
        GradedModule::new(self.ring, components)
    }

    /// Graded Tor over Z/p^s. On cyclic summands Z/p^t, Z/p^u it is
    /// Z/p^e with e = min(t, u, s − t, s − u) (from the 2-periodic free
    /// resolution of Z/p^t); degrees add.
    pub fn tor(&self, other: &GradedModule) -> Result<GradedModule> {
        self.same_ring(other)?;
        let s = self.ring.s();
        let mut components: BTreeMap<i64, Vec<u32>> = BTreeMap::new();
        for (&d1, e1) in &self.components {
            for (&d2, e2) in &other.components {
                for &t in e1 {
                    for &u in e2 {
                        let e = t.min(u).min(s - t).min(s - u);
                        if e > 0 {
                            components.entry(d1 + d2).or_default().push(e);
                        }
                    }
                }
            }
        }
        GradedModule::new(self.ring, components)
    }

    pub(crate) fn same_ring(&self, other: &GradedModule) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left_p: self.ring.p(),
                left_s: self.ring.s(),
                right_p: other.ring.p(),
                right_s: other.ring.s(),
            });
        }
        Ok(())
    }

    /// Annihilated by p^e in every degree.
    pub fn killed_by(&self, e: u32) -> bool {
        self.components.values().flatten().all(|&t| t <= e)
    }
}

impl std::fmt::Display for GradedModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, exps) in &self.components {
            for t in exps {
                if !first {
                    write!(f, " ⊕ ")?;
                }
                first = false;
                write!(f, "Z/{}^{}[{}]", self.ring.p(), t, d)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z9() -> RingSpec {
        RingSpec::new(3, 2).unwrap()
    }

    #[test]
    fn dim_reads_canonical_form() {
        let m = GradedModule::concentrated(z9(), 0, vec![1, 2, 1]).unwrap();
        assert_eq!(m.exponents(0), &[2, 1, 1]);
        assert_eq!(m.dim_of(2, 0..=0).unwrap(), 1);
        assert_eq!(m.dim_of(1, 0..=0).unwrap(), 2);
        assert_eq!(GradedModule::zero(z9()).dim_of(1, 0..=10).unwrap(), 0);
        assert!(matches!(m.dim_of(3, 0..=0), Err(Error::InvalidExponent { .. })));
        assert!(matches!(m.dim_of(0, 0..=0), Err(Error::InvalidExponent { .. })));
    }

    #[test]
    fn tensor_reduce_min_rule() {
        let m = GradedModule::concentrated(z9(), 0, vec![2, 1]).unwrap();
        let r = m.tensor_reduce(1).unwrap();
        assert_eq!(r.exponents(0), &[1, 1]);
        assert_eq!(r.ring().s(), 1);
        assert_eq!(m.tensor_reduce(2).unwrap(), m);
    }

    #[test]
    fn tensor_reduce_identity_from_sandwich_argument() {
        // M' = Z/p^3 ⊕ Z/p over Z/p^3, u = 2
        let ring = RingSpec::new(5, 3).unwrap();
        let m = GradedModule::concentrated(ring, 0, vec![3, 1]).unwrap();
        let r = m.tensor_reduce(2).unwrap();
        assert_eq!(r.exponents(0), &[2, 1]);
        let lhs = r.dim_total(2).unwrap();
        let rhs: usize = (2..=3).map(|t| m.dim_total(t).unwrap()).sum();
        assert_eq!(lhs, 1);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn rejects_free_z_and_oversized_summands() {
        assert!(GradedModule::concentrated(z9(), 0, vec![0]).is_err());
        assert!(GradedModule::concentrated(z9(), 0, vec![3]).is_err());
    }

    #[test]
    fn tor_cases() {
        let r = z9();
        let z3 = GradedModule::concentrated(r, 0, vec![1]).unwrap();
        let free = GradedModule::free(r, 0, 1);
        assert_eq!(z3.tor(&z3).unwrap().exponents(0), &[1]);
        assert!(free.tor(&z3).unwrap().is_zero());
        assert!(z3.tor(&free).unwrap().is_zero());
        let other = GradedModule::zero(RingSpec::new(3, 3).unwrap());
        assert!(matches!(z3.tor(&other), Err(Error::RingMismatch { .. })));
    }

    #[test]
    fn tor_degrees_add() {
        let r = RingSpec::new(3, 3).unwrap();
        let m = GradedModule::concentrated(r, 2, vec![1, 2]).unwrap();
        let n = GradedModule::concentrated(r, 3, vec![2]).unwrap();
        let t = m.tor(&n).unwrap();
        // min(1,2,2,1)=1, min(2,2,1,1)=1
        assert_eq!(t.exponents(5), &[1, 1]);
    }

    #[test]
    fn json_shape() {
        let m = GradedModule::concentrated(RingSpec::new(3, 2).unwrap(), 4, vec![1, 2, 1]).unwrap();
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, r#"{"p":3,"s":2,"components":{"4":[2,1,1]}}"#);
        let back: GradedModule = serde_json::from_str(&js).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<GradedModule>(r#"{"p":3,"s":2,"components":{"4":[0]}}"#).is_err());
        assert!(serde_json::from_str::<GradedModule>(r#"{"p":6,"s":2,"components":{}}"#).is_err());
    }
}
