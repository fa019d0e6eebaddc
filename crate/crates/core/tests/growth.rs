use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;

use zpgrowth::growth::{analyze, witt_asymptotic, GrowthSequence, Verdict, DEFAULT_EPSILON, DEFAULT_WINDOW};

fn seq(values: impl IntoIterator<Item = u64>) -> GrowthSequence {
    GrowthSequence::from_values(1, values.into_iter().map(BigUint::from))
}

#[test]
fn polynomial_growth_is_subexponential() {
    let rep = analyze(&seq((1..=10_000u64).map(|m| m * m)), DEFAULT_EPSILON, DEFAULT_WINDOW).unwrap();
    assert_eq!(rep.verdict, Verdict::Subexponential);
    assert!(rep.tail_inf.unwrap() < 0.01);
    assert_eq!(rep.window_start, 5001);
}

#[test]
fn geometric_growth_is_exponential() {
    let s = GrowthSequence::from_values(1, (1..=40u32).map(|m| BigUint::from(2u32).pow(m)));
    let rep = analyze(&s, DEFAULT_EPSILON, DEFAULT_WINDOW).unwrap();
    assert!((rep.tail_inf.unwrap() - 2f64.ln()).abs() < 1e-12);
    assert!((rep.base.unwrap() - 2.0).abs() < 1e-11);
    assert_eq!(rep.verdict, Verdict::Exponential);
}

#[test]
fn short_and_invalid_inputs() {
    assert!(analyze(&seq([3]), 0.05, 0.5).is_err());
    assert!(analyze(&seq([3, 4]), 0.05, 0.0).is_err());
    assert!(analyze(&seq([3, 4]), -1.0, 0.5).is_err());
    assert!(GrowthSequence::new(vec![(0, 1u32.into()), (1, 2u32.into())])
        .map(|s| analyze(&s, 0.05, 0.5))
        .unwrap()
        .is_err());
    assert!(serde_json::from_str::<GrowthSequence>("[[2,1],[1,3]]").is_err());
}

#[test]
fn witt_ratios() {
    let r = witt_asymptotic(2, 20).unwrap();
    assert_eq!(r[19].exact, BigRational::new(1047540.into(), 1048576.into()));
    assert!((r[19].approx - 0.999012).abs() < 1e-6);
    assert_eq!(r[0].exact, BigRational::from_integer(1.into()));
    assert!((r[19].approx - 1.0).abs() < (r[5].approx - 1.0).abs());
    for x in &r[13..] {
        assert!((x.approx - 1.0).abs() < 0.01, "k={}", x.k);
    }
    // crude envelope |ratio − 1| ≤ 2k·n^{⌊k/2⌋+1}/n^k
    for n in 2..=4u64 {
        for x in witt_asymptotic(n, 24).unwrap().iter().skip(1) {
            let k = x.k as i32;
            let env = 2.0 * k as f64 * (n as f64).powi(k / 2 + 1) / (n as f64).powi(k);
            assert!((x.approx - 1.0).abs() <= env, "n={n} k={k}");
        }
    }
    assert!(witt_asymptotic(1, 5).is_err());
}

#[test]
fn report_json_shape_and_determinism() {
    let s = seq([1, 2, 4, 8, 16, 32]);
    let a = serde_json::to_string(&analyze(&s, 0.05, 0.5).unwrap()).unwrap();
    let b = serde_json::to_string(&analyze(&s, 0.05, 0.5).unwrap()).unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["verdict"], "exponential");
    assert_eq!(v["ratios"][0][0], 1);
    assert!(v["tail_inf"].is_number());
    assert!(v["base"].is_number());
}

#[test]
fn huge_values_round_trip() {
    let s = GrowthSequence::from_values(1, [BigUint::from(3u32).pow(100), BigUint::from(3u32).pow(200)]);
    let js = serde_json::to_string(&s).unwrap();
    assert!(js.contains('"'));
    assert_eq!(serde_json::from_str::<GrowthSequence>(&js).unwrap(), s);
    assert_eq!(serde_json::from_str::<GrowthSequence>("[[1,5],[2,\"7\"]]").unwrap(), seq([5, 7]));
}

proptest! {
    #[test]
    fn scaling_shifts_ratios_and_keeps_exponential(base in 2u32..6, c in prop::sample::select(vec![2u32, 10]), len in 30u32..60) {
        let plain = GrowthSequence::from_values(1, (1..=len).map(|m| BigUint::from(base).pow(m)));
        let scaled = GrowthSequence::from_values(1, (1..=len).map(|m| BigUint::from(base).pow(m) * c));
        let a = analyze(&plain, DEFAULT_EPSILON, DEFAULT_WINDOW).unwrap();
        let b = analyze(&scaled, DEFAULT_EPSILON, DEFAULT_WINDOW).unwrap();
        for ((m, x), (_, y)) in a.ratios.iter().zip(&b.ratios) {
            prop_assert!((y.unwrap() - x.unwrap() - (c as f64).ln() / *m as f64).abs() < 1e-9);
        }
        prop_assert_eq!(a.verdict, Verdict::Exponential);
        prop_assert_eq!(b.verdict, Verdict::Exponential);
    }
}
