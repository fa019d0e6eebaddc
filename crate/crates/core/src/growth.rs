//! Exponential-growth diagnostics for integer sequences.
//!
//! liminf ln(a_m)/m cannot be read off finitely many terms; the report uses
//! the infimum of ln(a_m)/m over a tail window (by default the last half of
//! the points) and calls the sequence exponential when that infimum exceeds a
//! threshold ε (default 0.05). All floating point in the crate lives here.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freelie::witt;
use crate::serde_util::biguint::Big;

pub const DEFAULT_EPSILON: f64 = 0.05;
pub const DEFAULT_WINDOW: f64 = 0.5;

/// Points (m, a_m) with strictly increasing positive indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(i64, Big)>", into = "Vec<(i64, Big)>")]
pub struct GrowthSequence {
    points: Vec<(i64, BigUint)>,
}

impl TryFrom<Vec<(i64, Big)>> for GrowthSequence {
    type Error = Error;
    fn try_from(points: Vec<(i64, Big)>) -> Result<Self> {
        GrowthSequence::new(points.into_iter().map(|(m, v)| (m, v.0)).collect())
    }
}

impl From<GrowthSequence> for Vec<(i64, Big)> {
    fn from(s: GrowthSequence) -> Self {
        s.points.into_iter().map(|(m, v)| (m, Big(v))).collect()
    }
}

impl GrowthSequence {
    pub fn new(points: Vec<(i64, BigUint)>) -> Result<Self> {
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::invalid("sequence indices must be strictly increasing"));
        }
        Ok(GrowthSequence { points })
    }

    /// Values a_start, a_{start+1}, ….
    pub fn from_values(start: i64, values: impl IntoIterator<Item = BigUint>) -> Self {
        GrowthSequence {
            points: values.into_iter().enumerate().map(|(i, v)| (start + i as i64, v)).collect(),
        }
    }

    pub fn points(&self) -> &[(i64, BigUint)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_monotone(&self) -> bool {
        self.points.windows(2).all(|w| w[0].1 <= w[1].1)
    }
}

/// Natural logarithm of a positive big integer, accurate to binary64 for any size.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64 bits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Exponential,
    Inconclusive,
    Subexponential,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    /// (m, ln(a_m)/m); `None` where a_m = 0.
    pub ratios: Vec<(i64, Option<f64>)>,
    /// Infimum of the ratios over the tail window; `None` if the window holds a zero.
    pub tail_inf: Option<f64>,
    /// exp(tail_inf).
    pub base: Option<f64>,
    pub verdict: Verdict,
    pub epsilon: f64,
    pub window: f64,
    pub window_start: i64,
}

/// Analyzes `seq` with tail window = last ⌈window·len⌉ points.
///
/// Verdict: any zero in the window → subexponential; tail infimum > ε →
/// exponential; otherwise inconclusive while the ratios are still rising
/// across the window, subexponential once they are not.
pub fn analyze(seq: &GrowthSequence, epsilon: f64, window: f64) -> Result<GrowthReport> {
    if seq.len() < 2 {
        return Err(Error::invalid("growth analysis needs at least two points"));
    }
    if !(window > 0.0 && window <= 1.0) {
        return Err(Error::invalid("window fraction must lie in (0, 1]"));
    }
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::invalid("epsilon must be a non-negative number"));
    }
    if seq.points[0].0 < 1 {
        return Err(Error::invalid("indices must be positive"));
    }
    let ratios: Vec<(i64, Option<f64>)> = seq
        .points
        .iter()
        .map(|(m, a)| (*m, (!a.is_zero()).then(|| ln_big(a) / *m as f64)))
        .collect();
    let len = ratios.len();
    let take = ((window * len as f64).ceil() as usize).clamp(1, len);
    let tail = &ratios[len - take..];
    let window_start = tail[0].0;
    let tail_vals: Option<Vec<f64>> = tail.iter().map(|(_, r)| *r).collect();
    let (tail_inf, verdict) = match tail_vals {
        None => (None, Verdict::Subexponential),
        Some(v) => {
            let inf = v.iter().copied().fold(f64::INFINITY, f64::min);
            let verdict = if inf > epsilon {
                Verdict::Exponential
            } else if v.len() >= 2 && v[v.len() - 1] > v[0] {
                Verdict::Inconclusive
            } else {
                Verdict::Subexponential
            };
            (Some(inf), verdict)
        }
    };
    Ok(GrowthReport {
        ratios,
        base: tail_inf.map(f64::exp),
        tail_inf,
        verdict,
        epsilon,
        window,
        window_start,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WittRatio {
    pub k: u64,
    #[serde(serialize_with = "crate::serde_util::biguint::serialize")]
    pub witt: BigUint,
    /// k·W_n(k)/n^k, exact.
    #[serde(serialize_with = "crate::serde_util::rational_string")]
    pub exact: BigRational,
    pub approx: f64,
}

/// k·W_n(k)/n^k for k = 1..=max_k; tends to 1.
pub fn witt_asymptotic(n: u64, max_k: u64) -> Result<Vec<WittRatio>> {
    if n < 2 {
        return Err(Error::invalid("witt_asymptotic needs n ≥ 2"));
    }
    (1..=max_k)
        .map(|k| {
            let w = witt(n, k)?;
            let exact = BigRational::new((BigUint::from(k) * &w).into(), BigUint::from(n).pow(k as u32).into());
            let approx = crate::serde_util::rational_to_f64(&exact);
            Ok(WittRatio { k, witt: w, exact, approx })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_sequence() {
        let seq = GrowthSequence::from_values(1, (1..=40).map(|m| BigUint::from(2u32).pow(m)));
        let rep = analyze(&seq, DEFAULT_EPSILON, DEFAULT_WINDOW).unwrap();
        assert!((rep.tail_inf.unwrap() - std::f64::consts::LN_2).abs() < 1e-12);
        assert_eq!(rep.verdict, Verdict::Exponential);
    }

    #[test]
    fn zero_in_window_is_subexponential() {
        let seq = GrowthSequence::from_values(1, [5u32, 7, 0, 0].map(BigUint::from));
        let rep = analyze(&seq, DEFAULT_EPSILON, DEFAULT_WINDOW).unwrap();
        assert_eq!(rep.verdict, Verdict::Subexponential);
        assert_eq!(rep.tail_inf, None);
        assert_eq!(rep.ratios[2].1, None);
    }

    #[test]
    fn rejects_short_and_unordered() {
        assert!(analyze(&GrowthSequence::from_values(1, [BigUint::from(1u32)]), 0.05, 0.5).is_err());
        assert!(GrowthSequence::new(vec![(2, 1u32.into()), (2, 3u32.into())]).is_err());
    }

    #[test]
    fn huge_values_have_finite_logs() {
        let x = BigUint::from(3u32).pow(5000);
        assert!((ln_big(&x) - 5000.0 * 3f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn witt_ratio_at_twenty() {
        let r = witt_asymptotic(2, 20).unwrap();
        assert_eq!(
            r[19].exact,
            BigRational::new(1047540.into(), 1048576.into())
        );
        assert_eq!(r[0].exact, BigRational::from_integer(1.into()));
    }
}
