//! Recursive searches against exhaustive grids, and the Lambert-W closed
//! form against the integer optimum.

use rlnc_tdd::{
    expected_energy, expected_time, lambert_w_minus1, n1_closed_form, optimize_energy,
    optimize_time, CodingParameters, DerivedTiming, LinkParameters, Policy,
};

fn fig4(block: usize, pe: f64, pa: f64) -> (LinkParameters, CodingParameters) {
    (
        LinkParameters::new(1.5e6, 0.125, 1.0, pe, pa).unwrap(),
        CodingParameters::new(block, 10_000, 80, 20, 100).unwrap(),
    )
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |c, t| c * (n - t) as f64 / (t + 1) as f64)
}

/// Direct floating evaluation of the cost recursion, no log domain.
fn naive_cost(policy: &[u64], pe: f64, pa: f64, round: impl Fn(u64) -> f64) -> f64 {
    let mut e: Vec<f64> = Vec::new();
    for (idx, &n) in policy.iter().enumerate() {
        let i = idx + 1;
        let stall = 1.0 - pe.powi(n as i32);
        let mut acc = 0.0;
        for j in 1..i {
            let d = (i - j) as u64;
            acc += binomial(n, d) * (1.0 - pe).powi(d as i32) * pe.powi((n - d) as i32) * e[j - 1];
        }
        e.push(round(n) / ((1.0 - pa) * stall) + acc / stall);
    }
    *e.last().unwrap()
}

/// Exhaustive minimum over `N_i ∈ [i, cap]` for every state, lexicographic
/// order, strict improvement only.
fn grid_minimum(block: usize, cap: u64, mut cost: impl FnMut(&[u64]) -> f64) -> (Vec<u64>, f64) {
    let mut current: Vec<u64> = (1..=block as u64).collect();
    let mut best = (current.clone(), cost(&current));
    loop {
        // odometer increment, last state fastest
        let mut k = block;
        loop {
            if k == 0 {
                return best;
            }
            k -= 1;
            if current[k] < cap {
                current[k] += 1;
                break;
            }
            current[k] = k as u64 + 1;
        }
        let v = cost(&current);
        if v < best.1 {
            best = (current.clone(), v);
        }
    }
}

#[test]
fn energy_search_matches_grid() {
    for block in 1..=3 {
        for &pe in &[0.1, 0.3, 0.5, 0.8] {
            for &pa in &[0.0, 0.1] {
                let (link, coding) = fig4(block, pe, pa);
                let t = DerivedTiming::new(&link, &coding);
                let r = optimize_energy(&link, &coding).unwrap();
                let (_, grid) = grid_minimum(block, 40, |p| {
                    naive_cost(p, pe, pa, |n| n as f64 * t.packet_energy + t.ack_energy)
                });
                assert!(
                    (r.objective - grid).abs() <= 1e-12 * grid,
                    "M={block} Pe={pe} Pe_ack={pa}: {} vs {grid}",
                    r.objective
                );
            }
        }
    }
}

#[test]
fn energy_policy_matches_grid_policy() {
    let (link, coding) = fig4(3, 0.25, 0.05);
    let t = DerivedTiming::new(&link, &coding);
    let r = optimize_energy(&link, &coding).unwrap();
    let (policy, _) = grid_minimum(3, 40, |p| {
        naive_cost(p, 0.25, 0.05, |n| n as f64 * t.packet_energy + t.ack_energy)
    });
    assert_eq!(r.policy.as_slice(), policy.as_slice());
}

#[test]
fn time_policy_matches_grid_policy() {
    let (link, coding) = fig4(2, 0.3, 0.1);
    let t = DerivedTiming::new(&link, &coding);
    let r = optimize_time(&link, &coding).unwrap();
    let (policy, value) = grid_minimum(2, 120, |p| {
        naive_cost(p, 0.3, 0.1, |n| n as f64 * t.packet_time + t.wait_time)
    });
    assert_eq!(r.policy.as_slice(), policy.as_slice());
    assert!((r.objective - value).abs() <= 1e-12 * value);
}

#[test]
fn long_waits_favour_longer_bursts() {
    // T_p = 1 ms, T_ack = 1 ms, round trip 9 ms: T_w = 10·T_p
    let link = LinkParameters::new(1e6, 4.5e-3, 1.0, 0.5, 0.0).unwrap();
    let coding = CodingParameters::new(1, 979, 1, 20, 1000).unwrap();
    let t = DerivedTiming::new(&link, &coding);
    assert!((t.wait_time - 10.0 * t.packet_time).abs() < 1e-15);

    let time = optimize_time(&link, &coding).unwrap();
    let energy = optimize_energy(&link, &coding).unwrap();
    let (scan, _) = grid_minimum(1, 200, |p| {
        naive_cost(p, 0.5, 0.0, |n| n as f64 * t.packet_time + t.wait_time)
    });
    assert_eq!(time.policy.as_slice(), scan.as_slice());
    assert!(time.policy.packets(1) > energy.policy.packets(1));
}

#[test]
fn tie_example_single_state() {
    // E_ack = E_p at Pe = 0.5: N = 1 and N = 2 both give 4·E_p
    let link = LinkParameters::new(1.0, 0.0, 1.0, 0.5, 0.0).unwrap();
    let coding = CodingParameters::new(1, 8, 1, 1, 10).unwrap();
    let r = optimize_energy(&link, &coding).unwrap();
    assert_eq!(r.policy.as_slice(), &[1]);
    assert_eq!(r.objective, 40.0);
    let two = expected_energy(&Policy::new(vec![2]).unwrap(), &link, &coding).unwrap();
    assert_eq!(two[0], 40.0);
}

fn bisect_w_minus1(x: f64) -> f64 {
    // w·e^w is decreasing on (-inf, -1]
    let (mut lo, mut hi) = (-800.0f64, -1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.exp() > x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn lambert_matches_bisection() {
    let w = lambert_w_minus1(-0.1840).unwrap();
    assert!((w - bisect_w_minus1(-0.1840)).abs() < 1e-10);
    // the quoted -2.6781 is rounded loosely; the root is -2.677824...
    assert!((w + 2.6781).abs() < 5e-4);
    assert!((w + 2.677_824_073).abs() < 1e-9);
    for k in 1..100 {
        let x = -(-1f64).exp() * k as f64 / 100.0;
        let w = lambert_w_minus1(x).unwrap();
        assert!((w - bisect_w_minus1(x)).abs() <= 1e-9 * w.abs(), "x={x}");
    }
}

/// Single-state geometry with `E_ack/E_p = ack_bits / 10_000`.
fn ratio_case(pe: f64, ack_bits: u64) -> (LinkParameters, CodingParameters) {
    (
        LinkParameters::new(1e6, 0.0, 1.0, pe, 0.0).unwrap(),
        CodingParameters::new(1, 9_979, 1, 20, ack_bits).unwrap(),
    )
}

#[test]
fn closed_form_worked_example() {
    let (link, coding) = ratio_case(0.5, 10_000);
    let cf = n1_closed_form(&link, &coding).unwrap();
    let w = bisect_w_minus1(-(-1.0 + 0.5f64.ln()).exp());
    let oracle = (1.0 + w) / 0.5f64.ln() - 1.0;
    assert!((cf.n_star - oracle).abs() < 1e-9);
    assert!((cf.n_star - 1.421).abs() < 1e-3);
    let best = optimize_energy(&link, &coding).unwrap().policy.packets(1);
    assert!(best == 1 || best == 2);
}

#[test]
fn closed_form_brackets_integer_optimum() {
    for step in 1..=19 {
        let pe = step as f64 * 0.05;
        for ack_bits in [100u64, 1_000, 10_000] {
            let (link, coding) = ratio_case(pe, ack_bits);
            let cf = n1_closed_form(&link, &coding).unwrap();
            let best = optimize_energy(&link, &coding).unwrap().policy.packets(1);
            let lo = (cf.n_star.floor() as u64).max(1);
            let hi = (cf.n_star.ceil() as u64).max(1);
            assert!(
                best == lo || best == hi,
                "Pe={pe} ratio={}: N*={} integer {best}",
                ack_bits as f64 / 10_000.0,
                cf.n_star
            );
        }
    }
}

#[test]
fn zero_ack_cost_clamps() {
    // an ACK cost far below one coded packet pushes N* towards 0
    let link = LinkParameters::new(1e6, 0.0, 1.0, 0.5, 0.0).unwrap();
    let coding = CodingParameters::new(1, 10_000_000, 1, 1, 1).unwrap();
    let cf = n1_closed_form(&link, &coding).unwrap();
    assert!(cf.n_star < 1.0 && cf.n_star >= 0.0);
    assert!(cf.clamped);
    assert_eq!(cf.feasible, 1.0);
}

#[test]
fn each_policy_wins_its_own_objective() {
    for block in [1usize, 3, 10] {
        for &pe in &[1e-5, 0.25, 0.5, 0.8, 0.95] {
            for &pa in &[0.0, 0.1] {
                let (link, coding) = fig4(block, pe, pa);
                let e_opt = optimize_energy(&link, &coding).unwrap();
                let t_opt = optimize_time(&link, &coding).unwrap();
                let e_of_t = expected_energy(&t_opt.policy, &link, &coding).unwrap();
                let t_of_e = expected_time(&e_opt.policy, &link, &coding).unwrap();
                assert!(e_opt.objective <= e_of_t[block - 1] * (1.0 + 1e-12));
                assert!(t_opt.objective <= t_of_e[block - 1] * (1.0 + 1e-12));
            }
        }
    }
}

#[test]
fn energy_bursts_grow_with_missing_dofs() {
    let mut violations = Vec::new();
    for &pe in &[1e-5, 0.1, 0.25, 0.3, 0.5, 0.8] {
        for &pa in &[0.0, 0.1] {
            let (link, coding) = fig4(10, pe, pa);
            let p = optimize_energy(&link, &coding).unwrap().policy;
            if p.as_slice().windows(2).any(|w| w[1] < w[0]) {
                violations.push((pe, pa, p));
            }
        }
    }
    // observed property, reported rather than asserted
    if !violations.is_empty() {
        eprintln!("non-monotone energy policies: {violations:?}");
    }
}
