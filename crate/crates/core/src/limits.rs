//! Resource guards. Every enumeration that grows exponentially in the weight
//! checks a [`Limits`] before allocating.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest admissible number of words n^k in one weight.
    pub max_words: u64,
    /// Largest weight of τ_k/σ_k, per prime; `None` uses [`default_tau_sigma_weight`].
    pub tau_sigma_weight: Option<usize>,
    /// Disables every guard.
    pub unsafe_limits: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_words: 1 << 20,
            tau_sigma_weight: None,
            unsafe_limits: false,
        }
    }
}

/// p^k·wt(x) bound for τ/σ: 12 at p = 3, 5 at p = 5, p otherwise.
pub fn default_tau_sigma_weight(p: u64) -> usize {
    match p {
        3 => 12,
        5 => 5,
        _ => p as usize,
    }
}

impl Limits {
    pub fn unbounded() -> Self {
        Limits {
            unsafe_limits: true,
            ..Limits::default()
        }
    }

    pub fn check_words(&self, n: usize, k: usize) -> Result<()> {
        if self.unsafe_limits {
            return Ok(());
        }
        let words = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if words > self.max_words as u128 {
            return Err(Error::Resource(format!(
                "{n}^{k} words exceed the limit of {}; pass --unsafe-limits to override",
                self.max_words
            )));
        }
        Ok(())
    }

    pub fn check_tau_sigma(&self, p: u64, weight: usize) -> Result<()> {
        if self.unsafe_limits {
            return Ok(());
        }
        let max = self.tau_sigma_weight.unwrap_or_else(|| default_tau_sigma_weight(p));
        if weight > max {
            return Err(Error::Resource(format!(
                "weight {weight} exceeds the τ/σ limit {max} at p = {p}; pass --unsafe-limits to override"
            )));
        }
        Ok(())
    }
}
