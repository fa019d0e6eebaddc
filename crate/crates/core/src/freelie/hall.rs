//! Möbius function, Witt's necklace formula and Hall basic products.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::generators::Letter;
use super::tree::BracketTree;
use crate::error::{Error, Result};

/// The number-theoretic Möbius function.
pub fn mobius(n: u64) -> Result<i8> {
    if n == 0 {
        return Err(Error::invalid("mobius is defined for positive integers"));
    }
    let mut n = n;
    let mut sign = 1i8;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return Ok(0);
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    Ok(sign)
}

fn divisors(k: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=k).take_while(|d| d * d <= k).filter(|d| k.is_multiple_of(*d)).collect();
    let upper: Vec<u64> = out.iter().rev().map(|d| k / d).filter(|&q| q * q != k).collect();
    out.extend(upper);
    out
}

/// W_n(k) = (1/k) Σ_{d|k} μ(d) n^{k/d}, exactly.
pub fn witt(n: u64, k: u64) -> Result<BigUint> {
    if n == 0 || k == 0 {
        return Err(Error::invalid("witt needs n ≥ 1 and k ≥ 1"));
    }
    let mut sum = BigInt::zero();
    for d in divisors(k) {
        let mu = mobius(d)?;
        if mu != 0 {
            let term = BigInt::from(n).pow((k / d) as u32);
            sum += term * mu as i32;
        }
    }
    let (q, r) = sum.div_rem(&BigInt::from(k));
    assert!(r.is_zero(), "Witt sum must be divisible by k");
    Ok(q.to_biguint().expect("Witt numbers are non-negative"))
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Number of basic products with the given content (occurrence count of each
/// generator): (1/k) Σ_{d | gcd} μ(d) (k/d)! / Π (c_i/d)!.
pub fn witt_multigraded(content: &[u64]) -> Result<BigUint> {
    let k: u64 = content.iter().sum();
    if k == 0 {
        return Err(Error::invalid("content must have positive weight"));
    }
    let g = content.iter().fold(0u64, |a, &b| a.gcd(&b));
    let mut sum = BigInt::zero();
    for d in divisors(g) {
        let mu = mobius(d)?;
        if mu == 0 {
            continue;
        }
        let denom = content.iter().fold(BigUint::one(), |acc, &c| acc * factorial(c / d));
        let multinomial = factorial(k / d) / denom;
        sum += BigInt::from(multinomial) * mu as i32;
    }
    let (q, r) = sum.div_rem(&BigInt::from(k));
    assert!(r.is_zero(), "multigraded Witt sum must be divisible by k");
    Ok(q.to_biguint().expect("non-negative"))
}

/// Basic products of every weight up to `max_weight` on `n` generators.
///
/// Weight 1 is the generators in order. A tree `[u, v]` of higher weight is
/// basic iff `u`, `v` are basic, `u > v`, and when `u = [u1, u2]` also
/// `u2 ≤ v`; the order is that of [`BracketTree`] (weight first, then
/// recursive comparison of subtrees). `result[k-1]` holds weight `k`, sorted.
pub fn basic_products_upto(n: usize, max_weight: usize) -> Vec<Vec<BracketTree>> {
    let mut by_weight: Vec<Vec<BracketTree>> = Vec::with_capacity(max_weight);
    if max_weight == 0 {
        return by_weight;
    }
    by_weight.push((0..n).map(|i| BracketTree::Leaf(i as Letter)).collect());
    for k in 2..=max_weight {
        let mut level = Vec::new();
        for wu in 1..k {
            let wv = k - wu;
            // u > v forces wt(u) ≥ wt(v)
            if wu < wv {
                continue;
            }
            for u in &by_weight[wu - 1] {
                for v in &by_weight[wv - 1] {
                    if u <= v {
                        continue;
                    }
                    if let Some((_, u2)) = u.children() {
                        if u2 > v {
                            continue;
                        }
                    }
                    level.push(BracketTree::node(u.clone(), v.clone()));
                }
            }
        }
        level.sort();
        by_weight.push(level);
    }
    by_weight
}

/// Basic products of weight exactly `k`; there are W_n(k) of them.
pub fn basic_products(n: usize, k: usize) -> Result<Vec<BracketTree>> {
    if n == 0 || k == 0 {
        return Err(Error::invalid("basic_products needs n ≥ 1 and k ≥ 1"));
    }
    Ok(basic_products_upto(n, k).pop().unwrap_or_default())
}
