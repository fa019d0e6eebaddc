//! The explicit cycles τ_k(x) = ad^{p^k−1}(x)(dx) and
//! σ_k(x) = ½ Σ_{j=1}^{p^k−1} (C(p^k, j)/p) [ad^{j−1}(x)(dx), ad^{p^k−1−j}(x)(dx)].

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::ToPrimitive;

use super::differential::DifferentialSpec;
use super::homology::LieWeightComplex;
use crate::error::{Error, Result};
use crate::freelie::{embed_tensor, FreeNAElement};
use crate::limits::Limits;
use crate::zpmod::{rank_mod_p, Matrix};

fn check_input(spec: &DifferentialSpec, x: &FreeNAElement, k: u32, limits: &Limits) -> Result<(usize, u64)> {
    let gens = spec.gens();
    let p = spec.ring().p();
    if x.is_zero() || !x.is_homogeneous(gens) {
        return Err(Error::invalid("x must be a nonzero homogeneous element"));
    }
    let deg = x.degree(gens).expect("homogeneous");
    if deg % 2 != 0 {
        return Err(Error::Parity(format!("x has odd degree {deg}; τ and σ need an even class")));
    }
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let q = p
        .checked_pow(k)
        .ok_or_else(|| Error::Resource(format!("{p}^{k} overflows")))?;
    let weight = (q as usize).saturating_mul(x.weight().expect("homogeneous"));
    limits.check_tau_sigma(p, weight)?;
    Ok((weight, q))
}

/// ad^{m}(x)(dx) for m = 0, …, count−1.
fn ad_powers(spec: &DifferentialSpec, x: &FreeNAElement, count: usize) -> Vec<FreeNAElement> {
    let mut out = Vec::with_capacity(count);
    let mut cur = spec.differentiate(x);
    for _ in 0..count {
        let next = x.bracket(&cur);
        out.push(cur);
        cur = next;
    }
    out
}

/// τ_k(x) = [x,[x,…,[x,dx]…]] with p^k − 1 copies of x.
pub fn tau(spec: &DifferentialSpec, x: &FreeNAElement, k: u32, limits: &Limits) -> Result<FreeNAElement> {
    let (_, q) = check_input(spec, x, k, limits)?;
    Ok(ad_powers(spec, x, q as usize).pop().expect("q ≥ 2"))
}

/// The coefficients ½·C(p^k, j)/p mod p for j = 1, …, p^k − 1.
pub fn sigma_coefficients(p: u64, k: u32) -> Result<Vec<u64>> {
    if p == 2 {
        return Err(Error::Unsupported("σ_k needs ½, so p must be odd".into()));
    }
    let q = p.pow(k);
    let half = p.div_ceil(2);
    let big_q = BigUint::from(q);
    Ok((1..q)
        .map(|j| {
            let c = binomial(big_q.clone(), BigUint::from(j));
            let (quot, rem) = (&c / p, &c % p);
            debug_assert_eq!(rem, BigUint::from(0u32));
            let c = (quot % p).to_u64().expect("reduced mod p");
            c * half % p
        })
        .collect())
}

/// σ_k(x); coefficients are integers reduced mod p, even when the ring is Z/p^r.
pub fn sigma(spec: &DifferentialSpec, x: &FreeNAElement, k: u32, limits: &Limits) -> Result<FreeNAElement> {
    let coeffs = sigma_coefficients(spec.ring().p(), k)?;
    let (_, q) = check_input(spec, x, k, limits)?;
    let q = q as usize;
    // a[m] = ad^m(x)(dx)
    let a = ad_powers(spec, x, q - 1);
    let mut out = FreeNAElement::zero(*spec.ring());
    for j in 1..q {
        let c = coeffs[j - 1];
        if c == 0 {
            continue;
        }
        out = out.add(&a[j - 1].bracket(&a[q - 1 - j]).scale(c));
    }
    Ok(out)
}

/// Whether d(ξ) vanishes mod p in the tensor algebra.
pub fn is_cycle_mod_p(spec: &DifferentialSpec, xi: &FreeNAElement) -> bool {
    embed_tensor(&spec.differentiate(xi), spec.gens()).vanishes_mod_p()
}

/// Whether the given cycles have linearly independent classes in HL ⊗ F_p.
/// Elements must be homogeneous; non-cycles are rejected.
pub fn classes_independent(spec: &DifferentialSpec, elems: &[FreeNAElement], limits: &Limits) -> Result<bool> {
    let field_spec = spec.reduce(1)?;
    let gens = field_spec.gens();
    let ring = *gens.ring();
    let mut groups: BTreeMap<(usize, i64), Vec<FreeNAElement>> = BTreeMap::new();
    for e in elems {
        let e = FreeNAElement::from_terms(ring, e.terms().iter().map(|(t, &c)| (t.clone(), c)));
        if !is_cycle_mod_p(&field_spec, &e) {
            return Err(Error::Precondition("element is not a cycle mod p".into()));
        }
        let (Some(w), Some(d)) = (e.weight(), e.degree(gens)) else {
            return Ok(false);
        };
        groups.entry((w, d)).or_default().push(e);
    }
    let mut complexes: BTreeMap<usize, LieWeightComplex> = BTreeMap::new();
    for ((w, d), es) in groups {
        if let std::collections::btree_map::Entry::Vacant(e) = complexes.entry(w) {
            e.insert(LieWeightComplex::build(&field_spec, w, 1, limits)?);
        }
        let cx = &complexes[&w];
        let block = cx.space.block(d).expect("degree present in weight");
        let cols: Vec<Vec<u64>> = es
            .iter()
            .map(|e| embed_tensor(e, gens).coordinates(&block.index, block.words.len()))
            .collect();
        let b = cx.boundaries(d);
        let with = b.hcat(&Matrix::from_columns(block.words.len(), &cols));
        if rank_mod_p(&ring, &with) - rank_mod_p(&ring, &b) != es.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::{BracketTree, GeneratorSet};
    use crate::zpmod::RingSpec;

    fn spec(p: u64) -> DifferentialSpec {
        DifferentialSpec::acyclic_pair(RingSpec::new(p, 1).unwrap(), 2).unwrap()
    }

    fn x(spec: &DifferentialSpec) -> FreeNAElement {
        FreeNAElement::generator(spec.gens(), 0)
    }

    #[test]
    fn tau_shapes() {
        let s = spec(3);
        let t = tau(&s, &x(&s), 1, &Limits::default()).unwrap();
        assert_eq!(t.display(s.gens()), "[x,[x,y]]");
        assert_eq!(t.degree(s.gens()), Some(5));
        let s5 = spec(5);
        let t5 = tau(&s5, &x(&s5), 1, &Limits::default()).unwrap();
        assert_eq!(t5.display(s5.gens()), "[x,[x,[x,[x,y]]]]");
        assert_eq!(t5.weight(), Some(5));
    }

    #[test]
    fn sigma_one_at_three_is_y_xy() {
        let s = spec(3);
        let sg = sigma(&s, &x(&s), 1, &Limits::default()).unwrap();
        assert_eq!(sg.degree(s.gens()), Some(4));
        let expected = FreeNAElement::from_tree(*s.ring(), BracketTree::right_normed(&[1, 0, 1]));
        assert_eq!(embed_tensor(&sg, s.gens()), embed_tensor(&expected, s.gens()));
    }

    #[test]
    fn coefficient_table() {
        assert_eq!(sigma_coefficients(3, 1).unwrap(), vec![2, 2]);
        // C(5,j)/5 = 1,2,2,1 halved mod 5
        assert_eq!(sigma_coefficients(5, 1).unwrap(), vec![3, 1, 1, 3]);
        assert!(matches!(sigma_coefficients(2, 1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn tau_sigma_are_independent_cycles() {
        let s = spec(3);
        let lim = Limits::default();
        let t = tau(&s, &x(&s), 1, &lim).unwrap();
        let sg = sigma(&s, &x(&s), 1, &lim).unwrap();
        assert!(is_cycle_mod_p(&s, &t));
        assert!(is_cycle_mod_p(&s, &sg));
        assert!(classes_independent(&s, &[t, sg], &lim).unwrap());
    }

    #[test]
    fn parity_and_guard_errors() {
        let s = spec(3);
        let y = FreeNAElement::generator(s.gens(), 1);
        assert!(matches!(tau(&s, &y, 1, &Limits::default()), Err(Error::Parity(_))));
        assert!(matches!(tau(&s, &x(&s), 3, &Limits::default()), Err(Error::Resource(_))));
        let g = GeneratorSet::acyclic_pair(RingSpec::new(2, 1).unwrap(), 2).unwrap();
        let s2 = DifferentialSpec::from_pairs(g, &[("x", "y")]).unwrap();
        assert!(matches!(sigma(&s2, &x(&s2), 1, &Limits::default()), Err(Error::Unsupported(_))));
    }
}
