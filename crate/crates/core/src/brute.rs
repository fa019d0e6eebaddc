//! Element-enumeration oracles for small finite modules ⊕ Z/p^{t_i}.
//!
//! Everything here works on explicit element sets and is deliberately
//! independent of the Smith-normal-form code it is used to check. Elements
//! are coordinate vectors with entry i reduced mod p^{t_i}.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::zpmod::{Matrix, RingSpec};

pub type Element = Vec<u64>;

/// Refuses to enumerate modules with more than p^MAX_LOG_ORDER elements.
pub const MAX_LOG_ORDER: u32 = 14;

fn check_size(ring: &RingSpec, exps: &[u32]) -> Result<()> {
    let log: u32 = exps.iter().sum();
    if log > MAX_LOG_ORDER || (ring.p() as f64).powi(log as i32) > 5e6 {
        return Err(Error::Resource(format!("module of order {}^{log} is too large to enumerate", ring.p())));
    }
    Ok(())
}

/// Every element of ⊕ Z/p^{t_i}.
pub fn elements(ring: &RingSpec, exps: &[u32]) -> Result<Vec<Element>> {
    check_size(ring, exps)?;
    let mut out = vec![Vec::new()];
    for &t in exps {
        let q = ring.pow_p(t);
        out = out
            .into_iter()
            .flat_map(|e| {
                (0..q).map(move |a| {
                    let mut e2 = e.clone();
                    e2.push(a);
                    e2
                })
            })
            .collect();
    }
    Ok(out)
}

pub fn reduce(ring: &RingSpec, exps: &[u32], x: &mut [u64]) {
    for (a, &t) in x.iter_mut().zip(exps) {
        *a = ring.norm(*a) % ring.pow_p(t);
    }
}

pub fn add(ring: &RingSpec, exps: &[u32], x: &[u64], y: &[u64]) -> Element {
    let mut z: Element = x.iter().zip(y).map(|(&a, &b)| ring.add(a, b)).collect();
    reduce(ring, exps, &mut z);
    z
}

pub fn scale(ring: &RingSpec, exps: &[u32], c: u64, x: &[u64]) -> Element {
    let mut z: Element = x.iter().map(|&a| ring.mul(c, a)).collect();
    reduce(ring, exps, &mut z);
    z
}

/// Image of `x` under the matrix `m` into ⊕ Z/p^{target_i}.
pub fn apply(ring: &RingSpec, target: &[u32], m: &Matrix, x: &[u64]) -> Element {
    let mut y = vec![0u64; m.rows()];
    for (i, yi) in y.iter_mut().enumerate() {
        for (j, &xj) in x.iter().enumerate() {
            *yi = ring.add(*yi, ring.mul(m[(i, j)], xj));
        }
    }
    reduce(ring, target, &mut y);
    y
}

/// The least e with p^e·x = 0.
pub fn order_log(ring: &RingSpec, exps: &[u32], x: &[u64]) -> u32 {
    x.iter()
        .zip(exps)
        .filter(|(&a, _)| a != 0)
        .map(|(&a, &t)| t - ring.valuation(a).min(t))
        .max()
        .unwrap_or(0)
}

/// The subgroup generated by `gens`.
pub fn span(ring: &RingSpec, exps: &[u32], gens: &[Element]) -> HashSet<Element> {
    let mut set: HashSet<Element> = HashSet::from([vec![0; exps.len()]]);
    for g in gens {
        let mut g = g.clone();
        reduce(ring, exps, &mut g);
        let ord = ring.pow_p(order_log(ring, exps, &g));
        let multiples: Vec<Element> = (1..ord).map(|c| scale(ring, exps, c, &g)).collect();
        let base: Vec<Element> = set.iter().cloned().collect();
        for x in &base {
            for m in &multiples {
                set.insert(add(ring, exps, x, m));
            }
        }
    }
    set
}

fn ilog(p: u64, mut n: usize) -> Option<u32> {
    let mut e = 0;
    while n > 1 {
        if !n.is_multiple_of(p as usize) {
            return None;
        }
        n /= p as usize;
        e += 1;
    }
    Some(e)
}

/// Decodes a finite abelian p-group from L_e = log_p |{x : p^e x = 0}|:
/// the number of summands of exponent ≥ e is L_e − L_{e−1}.
fn decode(levels: &[u32]) -> Vec<u32> {
    let at_least: Vec<u32> = levels.windows(2).map(|w| w[1] - w[0]).collect();
    let mut exps = Vec::new();
    for (e, &n) in at_least.iter().enumerate() {
        let next = at_least.get(e + 1).copied().unwrap_or(0);
        exps.extend(std::iter::repeat_n(e as u32 + 1, (n - next) as usize));
    }
    exps.sort_unstable_by(|a, b| b.cmp(a));
    exps
}

/// Structure of `big / small` (a subgroup pair inside ⊕ Z/p^{t_i}) from
/// counting how many elements p^e kills modulo `small`.
pub fn quotient_structure(
    ring: &RingSpec,
    exps: &[u32],
    big: &HashSet<Element>,
    small: &HashSet<Element>,
) -> Vec<u32> {
    let s = ring.s();
    let mut levels = Vec::with_capacity(s as usize + 1);
    for e in 0..=s {
        let pe = ring.pow_p(e);
        let killed = big.iter().filter(|x| small.contains(&scale(ring, exps, pe, x))).count();
        levels.push(ilog(ring.p(), killed / small.len()).expect("subgroup orders are p-powers"));
    }
    decode(&levels)
}

pub fn structure(ring: &RingSpec, exps: &[u32], set: &HashSet<Element>) -> Vec<u32> {
    quotient_structure(ring, exps, set, &HashSet::from([vec![0; exps.len()]]))
}

/// Number of x with m·x = 0, for m : ⊕ Z/p^{dom} → ⊕ Z/p^{cod}.
pub fn kernel_size(ring: &RingSpec, dom: &[u32], cod: &[u32], m: &Matrix) -> Result<usize> {
    Ok(elements(ring, dom)?
        .iter()
        .filter(|x| apply(ring, cod, m, x).iter().all(|&a| a == 0))
        .count())
}

pub fn image_set(ring: &RingSpec, dom: &[u32], cod: &[u32], m: &Matrix) -> Result<HashSet<Element>> {
    let gens: Vec<Element> = (0..m.cols()).map(|j| {
        let mut e = vec![0; dom.len()];
        e[j] = 1;
        apply(ring, cod, m, &e)
    }).collect();
    Ok(span(ring, cod, &gens))
}

/// Tor_1(Z/p^t, N) = ker(p^t on N) / p^{s−t}·N, from the periodic resolution
/// … → R →(p^{s−t}) R →(p^t) R → Z/p^t.
pub fn tor_cyclic(ring: &RingSpec, t: u32, n: &[u32]) -> Result<Vec<u32>> {
    let s = ring.s();
    let all = elements(ring, n)?;
    let kernel: HashSet<Element> = all
        .iter()
        .filter(|x| scale(ring, n, ring.pow_p(t), x).iter().all(|&a| a == 0))
        .cloned()
        .collect();
    let image: HashSet<Element> = all.iter().map(|x| scale(ring, n, ring.pow_p(s - t), x)).collect();
    Ok(quotient_structure(ring, n, &kernel, &image))
}
