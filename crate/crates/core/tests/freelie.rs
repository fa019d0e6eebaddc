use std::collections::BTreeMap;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zpgrowth::freelie::{
    all_trees, basic_products, embed_tensor, lie_component, mobius, pbw_series_diagnostic, tensor_dim, witt,
    BracketTree, FreeNAElement, GeneratorSet, Letter, TensorElement,
};
use zpgrowth::selftest::random_tree;
use zpgrowth::zpmod::RingSpec;
use zpgrowth::Limits;

/// Lyndon words of length k over n letters: strictly smaller than every
/// proper rotation. Their number is the Witt number.
fn lyndon_count(n: usize, k: usize) -> u64 {
    let mut count = 0;
    let total = n.pow(k as u32);
    let mut w = vec![0usize; k];
    for mut idx in 0..total {
        for c in w.iter_mut() {
            *c = idx % n;
            idx /= n;
        }
        if (1..k).all(|r| {
            let rot: Vec<usize> = w[r..].iter().chain(&w[..r]).copied().collect();
            w < rot
        }) {
            count += 1;
        }
    }
    count
}

/// Rank mod a prime by plain Gaussian elimination on rows.
fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let inv = |a: u64| (1..p).find(|b| a * b % p == 1).unwrap();
    let mut rank = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else { continue };
        rows.swap(rank, piv);
        let f = inv(rows[rank][c] % p);
        let pivot_row: Vec<u64> = rows[rank].iter().map(|&x| x * f % p).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] % p != 0 {
                let m = row[c] % p;
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x % p + p * p - m * y % p) % p;
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// dim of the span of all bracket trees of weight k, over F_p, by elimination.
fn lie_dim_oracle(gens: &GeneratorSet, k: usize) -> usize {
    let p = gens.ring().p();
    let rows: Vec<Vec<u64>> = all_trees(gens.len(), k)
        .into_iter()
        .map(|t| {
            let e = embed_tensor(&FreeNAElement::from_tree(*gens.ring(), t), gens);
            let mut v = vec![0u64; gens.len().pow(k as u32)];
            for (w, &c) in e.terms() {
                let idx = w.iter().fold(0usize, |acc, &l| acc * gens.len() + l as usize);
                v[idx] = c % p;
            }
            v
        })
        .collect();
    rank_mod(rows, p)
}

fn xy(p: u64) -> GeneratorSet {
    GeneratorSet::from_pairs(RingSpec::new(p, 1).unwrap(), &[("x", 2), ("y", 1)]).unwrap()
}

#[test]
fn mobius_values() {
    assert_eq!(mobius(1).unwrap(), 1);
    assert_eq!(mobius(12).unwrap(), 0);
    assert_eq!(mobius(6).unwrap(), 1);
    assert_eq!(mobius(30).unwrap(), -1);
    assert!(mobius(0).is_err());
}

#[test]
fn witt_matches_lyndon_enumeration() {
    for k in 1..=12 {
        assert_eq!(witt(2, k as u64).unwrap(), BigUint::from(lyndon_count(2, k)), "n=2 k={k}");
    }
    for k in 1..=8 {
        assert_eq!(witt(3, k as u64).unwrap(), BigUint::from(lyndon_count(3, k)), "n=3 k={k}");
    }
    let w: Vec<u64> = (1..=6).map(|k| witt(2, k).unwrap().try_into().unwrap()).collect();
    assert_eq!(w, [2, 1, 2, 3, 6, 9]);
    assert_eq!(witt(1, 2).unwrap(), BigUint::from(0u32));
    // (2^20 − 2^10 − 2^4 + 2^2)/20
    assert_eq!(witt(2, 20).unwrap(), BigUint::from(52377u32));
}

#[test]
fn basic_product_counts_match_witt() {
    for k in 1..=12 {
        assert_eq!(BigUint::from(basic_products(2, k).unwrap().len()), witt(2, k as u64).unwrap(), "n=2 k={k}");
    }
    for k in 1..=8 {
        assert_eq!(BigUint::from(basic_products(3, k).unwrap().len()), witt(3, k as u64).unwrap(), "n=3 k={k}");
    }
    assert!(basic_products(1, 2).unwrap().is_empty());
    let two = basic_products(2, 2).unwrap();
    assert_eq!(two.len(), 1);
    assert_eq!(two[0].leaves().len(), 2);
}

#[test]
fn basic_products_are_deterministic_and_distinct() {
    let a = basic_products(3, 6).unwrap();
    let b = basic_products(3, 6).unwrap();
    assert_eq!(a, b);
    let mut sorted = a.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), a.len());
}

#[test]
fn embedding_examples() {
    let g = xy(3);
    let r = *g.ring();
    let x = FreeNAElement::generator(&g, 0);
    let y = FreeNAElement::generator(&g, 1);
    let xy_t = embed_tensor(&x.bracket(&y), &g);
    assert_eq!(xy_t, TensorElement::from_terms(r, [(vec![0, 1], 1), (vec![1, 0], 2)]));
    assert_eq!(embed_tensor(&y.bracket(&y), &g), TensorElement::from_terms(r, [(vec![1, 1], 2)]));
    assert!(embed_tensor(&x.bracket(&x), &g).is_zero());
}

#[test]
fn lie_component_examples_against_elimination() {
    let g = xy(3);
    let lim = Limits::default();
    let totals: Vec<usize> = (1..=3).map(|k| lie_component(&g, k, 1, &lim).unwrap().total_dim()).collect();
    assert_eq!(totals, [2, 2, 2]);
    for k in 1..=5 {
        assert_eq!(lie_component(&g, k, 1, &lim).unwrap().total_dim(), lie_dim_oracle(&g, k), "k={k}");
    }
    let c1 = lie_component(&g, 1, 1, &lim).unwrap();
    assert_eq!(c1.module.exponents(2), &[1]);
    assert_eq!(c1.module.exponents(1), &[1]);
    // [x,[y,y]] = 2[y,[x,y]] and [y,[y,y]] = 0
    let x = FreeNAElement::generator(&g, 0);
    let y = FreeNAElement::generator(&g, 1);
    let a = embed_tensor(&x.bracket(&y.bracket(&y)), &g);
    let b = embed_tensor(&y.bracket(&x.bracket(&y)), &g);
    assert_eq!(a, b.scale(2));
    assert!(embed_tensor(&y.bracket(&y.bracket(&y)), &g).is_zero());
}

#[test]
fn ungraded_control_matches_witt() {
    let g = GeneratorSet::uniform(RingSpec::new(5, 1).unwrap(), 2, 2).unwrap();
    let lim = Limits::default();
    for k in 1..=8 {
        let c = lie_component(&g, k, 1, &lim).unwrap();
        assert_eq!(BigUint::from(c.total_dim()), witt(2, k as u64).unwrap(), "k={k}");
        assert!(c.module.is_free());
    }
}

#[test]
fn lie_component_over_z9_has_torsion() {
    // [y,y] embeds as 2yy, a unit multiple, so it is free; [x,[y,y]] = 2[y,[x,y]]
    let g = GeneratorSet::from_pairs(RingSpec::new(3, 2).unwrap(), &[("x", 2), ("y", 1)]).unwrap();
    let c = lie_component(&g, 3, 2, &Limits::default()).unwrap();
    let p_only = lie_component(&g, 3, 1, &Limits::default()).unwrap();
    assert_eq!(c.module.tensor_reduce(1).unwrap().summand_count(), p_only.total_dim().max(c.total_dim()));
    for (d, v) in &c.basis {
        assert_eq!(g.word_degree(v.terms().keys().next().unwrap()), *d);
    }
}

#[test]
fn pbw_diagnostic_examples() {
    let lim = Limits::default();
    let even = GeneratorSet::uniform(RingSpec::new(5, 1).unwrap(), 2, 2).unwrap();
    let rep = pbw_series_diagnostic(&even, 6, &lim).unwrap();
    assert!(rep.rows.iter().all(|r| r.matches_witt));
    assert!(rep.series_matches);
    let mixed = pbw_series_diagnostic(&xy(3), 2, &lim).unwrap();
    assert_eq!(mixed.rows[1].dim, 2);
    assert_eq!(mixed.rows[1].witt, BigUint::from(1u32));
    assert!(!mixed.rows[1].matches_witt);
    let single = GeneratorSet::uniform(RingSpec::new(3, 1).unwrap(), 1, 2).unwrap();
    let rep = pbw_series_diagnostic(&single, 5, &lim).unwrap();
    assert!(rep.rows[1..].iter().all(|r| r.dim == 0));
}

#[test]
fn size_guard() {
    let g = GeneratorSet::uniform(RingSpec::new(3, 1).unwrap(), 2, 2).unwrap();
    assert!(matches!(
        lie_component(&g, 21, 1, &Limits::default()),
        Err(zpgrowth::Error::Resource(_))
    ));
}

#[test]
fn tensor_dims_and_projections() {
    let g2 = GeneratorSet::uniform(RingSpec::new(3, 1).unwrap(), 2, 1).unwrap();
    let g3 = GeneratorSet::uniform(RingSpec::new(3, 1).unwrap(), 3, 1).unwrap();
    assert_eq!(tensor_dim(&g2, 5).unwrap(), BigUint::from(32u32));
    assert_eq!(tensor_dim(&g3, 2).unwrap(), BigUint::from(9u32));
    assert!(tensor_dim(&g2, 0).is_err());
    let r = *g2.ring();
    let e = TensorElement::from_terms(r, [(vec![0, 1], 1), (vec![0], 1)]);
    assert_eq!(e.zeta(2), TensorElement::word(r, vec![0, 1]));
    assert_eq!(e.zeta(1), TensorElement::word(r, vec![0]));
}

#[test]
fn json_shapes() {
    let g = xy(3);
    let t = BracketTree::node(BracketTree::leaf(0), BracketTree::node(BracketTree::leaf(0), BracketTree::leaf(1)));
    assert_eq!(t.to_json(&g), serde_json::json!(["x", ["x", "y"]]));
    assert_eq!(BracketTree::from_json(&t.to_json(&g), &g).unwrap(), t);
    let e = TensorElement::from_terms(*g.ring(), [(vec![0, 1, 1], 2)]);
    assert_eq!(e.to_json(&g), serde_json::json!([{"coeff": 2, "word": ["x", "y", "y"]}]));
    assert_eq!(TensorElement::from_json(&e.to_json(&g), &g).unwrap(), e);
}

#[test]
fn right_normed_words_span_all_brackets() {
    // the span of all trees equals the span of right-normed brackets
    for (p, pairs) in [(3u64, vec![("x", 2u32), ("y", 1)]), (5, vec![("a", 1), ("b", 1), ("c", 2)])] {
        let g = GeneratorSet::from_pairs(RingSpec::new(p, 1).unwrap(), &pairs).unwrap();
        for k in 1..=4 {
            assert_eq!(lie_component(&g, k, 1, &Limits::default()).unwrap().total_dim(), lie_dim_oracle(&g, k));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn embedding_is_a_commutator_homomorphism(seed in any::<u64>(), wa in 1usize..4, wb in 1usize..4) {
        let g = GeneratorSet::from_pairs(RingSpec::new(3, 2).unwrap(), &[("a", 2), ("b", 1), ("c", 3)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = FreeNAElement::from_tree(*g.ring(), random_tree(&mut rng, 3, wa));
        let b = FreeNAElement::from_tree(*g.ring(), random_tree(&mut rng, 3, wb));
        let lhs = embed_tensor(&a.bracket(&b), &g);
        let rhs = embed_tensor(&a, &g).bracket(&embed_tensor(&b, &g), &g);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobi_and_antisymmetry(seed in any::<u64>()) {
        let g = GeneratorSet::from_pairs(RingSpec::new(5, 1).unwrap(), &[("a", 2), ("b", 1), ("c", 3)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mk = |rng: &mut ChaCha8Rng| FreeNAElement::from_tree(*g.ring(), random_tree(rng, 3, 2));
        let (a, b, c) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
        let m = |e: &FreeNAElement| embed_tensor(e, &g);
        let sign = |x: &FreeNAElement, y: &FreeNAElement| {
            let odd = x.degree(&g).unwrap() % 2 != 0 && y.degree(&g).unwrap() % 2 != 0;
            g.ring().sign(odd)
        };
        prop_assert!(m(&a.bracket(&b)).add(&m(&b.bracket(&a)).scale(sign(&a, &b))).is_zero());
        let jac = m(&a.bracket(&b.bracket(&c)))
            .sub(&m(&a.bracket(&b).bracket(&c)))
            .sub(&m(&b.bracket(&a.bracket(&c))).scale(sign(&a, &b)));
        prop_assert!(jac.is_zero());
    }

    #[test]
    fn odd_cube_vanishes(seed in any::<u64>(), w in 1usize..4) {
        let g = GeneratorSet::from_pairs(RingSpec::new(3, 3).unwrap(), &[("a", 2), ("b", 1)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tree(&mut rng, 2, w);
        prop_assume!(t.degree(&g) % 2 != 0);
        let x = FreeNAElement::from_tree(*g.ring(), t);
        prop_assert!(embed_tensor(&x.bracket(&x.bracket(&x)), &g).is_zero());
    }
}

#[test]
fn leaves_content_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let t = random_tree(&mut rng, 3, 6);
        let mut counts: BTreeMap<Letter, usize> = BTreeMap::new();
        for l in t.leaves() {
            *counts.entry(l).or_default() += 1;
        }
        let content = t.content(3);
        for (l, c) in counts {
            assert_eq!(content[l as usize], c);
        }
    }
}
