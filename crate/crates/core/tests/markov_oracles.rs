//! Transition model checked against exact arithmetic and exhaustive
//! enumeration of erasure patterns.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;
use rlnc_tdd::{log_binomial, transition_prob, transition_row, LinkParameters};

fn exact_binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for t in 1..=k {
        c = c * BigUint::from(n - k + t) / BigUint::from(t);
    }
    c
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn link(pe: f64, pa: f64) -> LinkParameters {
    LinkParameters::new(1.0, 0.0, 1.0, pe, pa).unwrap()
}

#[test]
fn log_binomial_matches_big_integers() {
    let c = exact_binomial(50, 25);
    assert_eq!(c, BigUint::from(126_410_606_437_752u64));
    let got = log_binomial(50, 25).unwrap();
    assert!((got - ln_big(&c)).abs() / ln_big(&c) <= 1e-12);

    let mut cases: Vec<(u64, u64)> = Vec::new();
    for n in (1..=400).step_by(7) {
        for k in 0..=n {
            cases.push((n, k));
        }
    }
    for n in [1000u64, 2500, 5000] {
        for k in (1..=n).step_by(97) {
            cases.push((n, k));
        }
    }
    for n in [10_000u64, 123_457, 1_000_000] {
        for k in [1u64, 2, 3, 7, 10, 25, 50] {
            cases.push((n, k));
        }
    }
    for (n, k) in cases {
        let exact = ln_big(&exact_binomial(n, k));
        let got = log_binomial(n, k).unwrap();
        if exact == 0.0 {
            assert_eq!(got, 0.0, "C({n},{k})");
        } else {
            let rel = (got - exact).abs() / exact;
            assert!(rel <= 1e-12, "C({n},{k}): rel err {rel:e}");
        }
    }
}

/// Probability of each next state by enumerating every erasure pattern of
/// the burst and both ACK outcomes.
fn enumerate_row(i: usize, burst: u32, pe: f64, pa: f64) -> Vec<f64> {
    let mut row = vec![0.0; i + 1];
    for pattern in 0u32..1 << burst {
        let successes = pattern.count_ones();
        let p = (1.0 - pe).powi(successes as i32) * pe.powi((burst - successes) as i32);
        row[i.saturating_sub(successes as usize)] += (1.0 - pa) * p;
        row[i] += pa * p;
    }
    row
}

#[test]
fn rows_match_exhaustive_enumeration() {
    for &pe in &[0.0f64, 0.05, 0.3, 0.5, 0.77, 0.99] {
        for &pa in &[0.0, 0.1, 0.6] {
            for burst in 1..=12u32 {
                for i in 1..=burst as usize {
                    let row = transition_row(i, u64::from(burst), &link(pe, pa)).unwrap();
                    let oracle = enumerate_row(i, burst, pe, pa);
                    for (j, (a, b)) in row.iter().zip(&oracle).enumerate() {
                        assert!(
                            (a - b).abs() <= 1e-12,
                            "i={i} N={burst} j={j} Pe={pe} Pe_ack={pa}: {a} vs {b}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn enumeration_reproduces_worked_example() {
    let row = enumerate_row(2, 3, 0.5, 0.1);
    assert!((row[1] - 0.3375).abs() < 1e-15);
    let ours = transition_row(2, 3, &link(0.5, 0.1)).unwrap();
    assert!((ours[1] - row[1]).abs() < 1e-15);
}

#[test]
fn log_domain_agrees_with_direct_evaluation() {
    for &pe in &[0.01f64, 0.2, 0.5, 0.9] {
        for burst in 1..=60u64 {
            for i in 1..=burst.min(20) as usize {
                for j in 1..i {
                    let d = (i - j) as u64;
                    let direct = 0.9
                        * exact_binomial(burst, d).to_f64().unwrap()
                        * (1.0 - pe).powi(d as i32)
                        * pe.powi((burst - d) as i32);
                    if direct < 1e-290 {
                        continue;
                    }
                    let got = transition_prob(i, j, burst, &link(pe, 0.1)).unwrap();
                    assert!(
                        (got - direct).abs() <= 1e-10 * direct,
                        "i={i} j={j} N={burst} Pe={pe}"
                    );
                }
            }
        }
    }
}

#[test]
fn staying_put_gets_less_likely_with_longer_bursts() {
    for &pe in &[0.01f64, 0.5, 0.95] {
        for &pa in &[0.0, 0.3] {
            let l = link(pe, pa);
            let mut prev = f64::INFINITY;
            for burst in 1..=200u64 {
                let stay = transition_prob(1, 1, burst, &l).unwrap();
                // strict while the drop is representable next to Pe_ack
                let drop = (1.0 - pa) * pe.powi(burst as i32 - 1) * (1.0 - pe);
                if drop > 1e-13 * prev.min(1.0) {
                    assert!(stay < prev, "Pe={pe} N={burst}");
                } else {
                    assert!(stay <= prev, "Pe={pe} N={burst}");
                }
                prev = stay;
            }
        }
    }
}

proptest! {
    #[test]
    fn rows_are_stochastic(
        i in 1usize..60,
        extra in 0u64..3000,
        pe in 0.0f64..0.999,
        pa in 0.0f64..0.999,
    ) {
        let burst = i as u64 + extra;
        let row = transition_row(i, burst, &link(pe, pa)).unwrap();
        prop_assert_eq!(row.len(), i + 1);
        prop_assert!(row.iter().all(|p| (0.0..=1.0).contains(p)));
        prop_assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }
}
