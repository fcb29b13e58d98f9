mod common;

use common::rng;
use hibtdf::auxgen::{
    adaptive_level, aux_adaptive, aux_selective, partition, sample_adaptive_draw, Verdict,
};
use hibtdf::groups::{Bls12Suite, GroupSuite, TransparentSuite};
use hibtdf::hibtdf::HierId;
use hibtdf::Error;

fn identities<S: GroupSuite>(s: &S, range: u64) -> Vec<HierId<S>> {
    let mut ids = Vec::new();
    for a in 0..range {
        ids.push(HierId::from_u64(s, &[vec![1, a]]));
        for b in 0..range {
            ids.push(HierId::from_u64(s, &[vec![1, a], vec![1, b]]));
        }
    }
    ids
}

fn prefix_law<S: GroupSuite>(s: &S) -> usize {
    let ids = identities(s, 5);
    let mut checked = 0;
    for star in &ids {
        let aux = aux_selective(s, star, 2, 2).unwrap();
        for id in &ids {
            let verdict = partition(s, &aux, id).unwrap().verdict;
            let expected = if id.is_prefix_of(star) {
                Verdict::Lossy
            } else {
                Verdict::Injective
            };
            assert_eq!(verdict, expected, "id {:?} against id* {:?}", id.levels, star.levels);
            checked += 1;
        }
    }
    checked
}

#[test]
fn selective_partition_is_the_prefix_relation() {
    assert_eq!(prefix_law(&TransparentSuite::new(11).unwrap()), 30 * 30);
    assert_eq!(prefix_law(&Bls12Suite::new()), 30 * 30);
}

#[test]
fn selective_rejects_bad_targets() {
    let s = TransparentSuite::new(11).unwrap();
    let star = HierId::from_u64(&s, &[vec![2, 1]]);
    assert!(matches!(aux_selective(&s, &star, 1, 2), Err(Error::Identity(_))));
    let deep = HierId::from_u64(&s, &[vec![1, 1], vec![1, 1]]);
    assert!(matches!(aux_selective(&s, &deep, 1, 2), Err(Error::Depth { .. })));
}

/// Pearson statistic of observed counts against the uniform distribution.
fn chi_square(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum()
}

#[test]
fn adaptive_draws_are_uniform() {
    let (width, q) = (3usize, 2u64);
    let mut rng = rng(11);
    let mut y_prime = [0u64; 4];
    let mut xi = [0u64; 3];
    let mut tails = [[0u64; 4]; 2];
    for _ in 0..40_000 {
        let d = sample_adaptive_draw(width, q, &mut rng);
        y_prime[d.y_prime as usize] += 1;
        xi[d.xi as usize] += 1;
        for (t, v) in tails.iter_mut().zip(&d.tail) {
            t[*v as usize] += 1;
        }
    }
    // 0.1% critical values: 16.27 for 3 degrees of freedom, 13.82 for 2
    assert!(chi_square(&y_prime) < 16.27);
    assert!(chi_square(&xi) < 13.82);
    for t in &tails {
        assert!(chi_square(t) < 16.27);
    }
}

#[test]
fn adaptive_first_coordinate_covers_the_shifted_range() {
    // y' − 2ξq with y' ∈ [0, 2q), ξ ∈ [0, μ) hits every value of (−2q(μ−1), 2q) exactly once
    let s = TransparentSuite::new(1_000_003).unwrap();
    let (width, q) = (3usize, 2u64);
    let mut seen = std::collections::HashMap::new();
    let mut rng = rng(12);
    for _ in 0..20_000 {
        let d = sample_adaptive_draw(width, q, &mut rng);
        let level = adaptive_level(&s, q, &d);
        let signed = d.y_prime as i64 - 2 * q as i64 * d.xi as i64;
        assert_eq!(level[0], s.scalar_from_i64(signed));
        *seen.entry(signed).or_insert(0u64) += 1;
    }
    let mut keys: Vec<i64> = seen.keys().copied().collect();
    keys.sort();
    assert_eq!(keys, (-8..4).collect::<Vec<_>>());
    let counts: Vec<u64> = keys.iter().map(|k| seen[k]).collect();
    // 11 degrees of freedom
    assert!(chi_square(&counts) < 31.26);
}

#[test]
fn adaptive_vectors_have_the_requested_shape() {
    let s = TransparentSuite::new(1_000_003).unwrap();
    let aux = aux_adaptive(&s, 3, 4, 5, &mut rng(13)).unwrap();
    assert!(aux.check(3, 4).is_ok());
    assert!(aux_adaptive(&TransparentSuite::new(13).unwrap(), 1, 2, 4, &mut rng(1)).is_err());
}
