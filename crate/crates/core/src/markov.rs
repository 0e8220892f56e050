//! Absorbing Markov chain over the number of missing degrees of freedom.
//!
//! State `i` is the number of dofs the receiver still needs; state 0 is
//! absorbing. In state `i` the transmitter sends `N_i` coded packets and
//! waits for one ACK. The chain only moves downwards, so the transition
//! matrix is lower triangular.
//!
//! Probabilities are assembled in the log domain. `Pe^N` underflows near
//! `N = 1075` for `Pe = 0.5`, while the binomial coefficient in front of it
//! overflows long before, so neither can be formed directly.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::LinkParameters;

/// `ln(p^k)` with `0^0 = 1`.
pub(crate) fn ln_pow(p: f64, k: u64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * p.ln()
    }
}

/// `p^k` with `0^0 = 1`.
pub(crate) fn pow(p: f64, k: u64) -> f64 {
    if k == 0 {
        1.0
    } else {
        p.powf(k as f64)
    }
}

/// `1 - p^k`, accurate when `p^k` is close to one.
pub(crate) fn one_minus_pow(p: f64, k: u64) -> f64 {
    if k == 0 {
        0.0
    } else if p <= 0.5 {
        1.0 - p.powf(k as f64)
    } else {
        -(k as f64 * p.ln()).exp_m1()
    }
}

/// ln(m!) for m <= 15 from exact factorials.
const SMALL_FACTORIAL: [f64; 16] = [
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
];

/// Stirling remainder `ln(m!) - (m ln m - m + ln(2πm)/2)`.
fn stirling_remainder(m: u64) -> f64 {
    if m < SMALL_FACTORIAL.len() as u64 {
        let mf = m as f64;
        return SMALL_FACTORIAL[m as usize].ln() - (mf * mf.ln() - mf + 0.5 * (2.0 * PI * mf).ln());
    }
    let inv = 1.0 / m as f64;
    let inv2 = inv * inv;
    // 1/12m - 1/360m^3 + 1/1260m^5 - 1/1680m^7 + 1/1188m^9
    inv * (1.0 / 12.0
        - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))))
}

/// Natural log of the binomial coefficient `C(n, k)`.
///
/// Small coefficients are formed exactly in 128-bit integers. Larger ones use
/// the Stirling expansion written as a sum of non-negative terms,
/// `k ln(n/k) - (n-k) ln(1 - k/n)`, so nothing cancels.
pub fn log_binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(format!("C({n}, {k}) requires k <= n")));
    }
    let k = k.min(n - k);
    if k == 0 {
        return Ok(0.0);
    }

    let mut exact: u128 = 1;
    let mut fits = true;
    for t in 1..=u128::from(k) {
        // c * (n - k + t) / t stays integral at every step
        match exact.checked_mul(u128::from(n - k) + t) {
            Some(v) => exact = v / t,
            None => {
                fits = false;
                break;
            }
        }
    }
    if fits {
        return Ok((exact as f64).ln());
    }

    let (nf, kf) = (n as f64, k as f64);
    let rest = (n - k) as f64;
    let main = kf * (nf / kf).ln() - rest * (-kf / nf).ln_1p();
    let half_log = 0.5 * (nf / (2.0 * PI * kf * rest)).ln();
    let correction = stirling_remainder(n) - stirling_remainder(k) - stirling_remainder(n - k);
    Ok(main + half_log + correction)
}

fn check_states(i: usize, j: usize, packets: u64) -> Result<()> {
    if i < 1 {
        return Err(Error::Domain(format!("state {i} must be >= 1")));
    }
    if j > i {
        return Err(Error::Domain(format!(
            "chain cannot move up from state {i} to {j}"
        )));
    }
    if packets < 1 {
        return Err(Error::Domain("a round sends at least one packet".into()));
    }
    Ok(())
}

/// Log-probability that exactly `i - j` of `N` packets arrive:
/// `ln[C(N, i-j) (1-Pe)^(i-j) Pe^(N-i+j)]`, or `-inf` when the burst is
/// shorter than the state (`N < i`).
pub(crate) fn ln_progress_weight(i: usize, j: usize, packets: u64, pe: f64) -> f64 {
    let delivered = (i - j) as u64;
    if packets < i as u64 {
        return f64::NEG_INFINITY;
    }
    let lost = packets - delivered;
    // N >= i >= i - j, so the binomial is always defined here
    log_binomial(packets, delivered).expect("delivered <= packets")
        + ln_pow(1.0 - pe, delivered)
        + ln_pow(pe, lost)
}

/// Probability of moving from state `i` to state `j` after a burst of
/// `packets` coded packets and one ACK.
///
/// * `0 < j < i`: ACK delivered and exactly `i - j` packets arrived.
/// * `j == i`: ACK lost, or every packet erased.
/// * `j == 0`: everything else.
///
/// A burst shorter than `i` can never land on an intermediate state; this
/// mirrors the gate on `N_i >= i` in the model.
pub fn transition_prob(i: usize, j: usize, packets: u64, link: &LinkParameters) -> Result<f64> {
    check_states(i, j, packets)?;
    if j == 0 {
        let row = transition_row(i, packets, link)?;
        return Ok(row[0]);
    }
    Ok(nonzero_target_prob(i, j, packets, link))
}

fn nonzero_target_prob(i: usize, j: usize, packets: u64, link: &LinkParameters) -> f64 {
    let pe = link.pkt_erasure();
    let pa = link.ack_erasure();
    if j == i {
        (1.0 - pa) * pow(pe, packets) + pa
    } else {
        (1.0 - pa) * ln_progress_weight(i, j, packets, pe).exp()
    }
}

/// Full row `P_{i→0}, …, P_{i→i}` of the transition matrix.
///
/// The entry for state 0 is the complement of the rest, which also absorbs
/// bursts that deliver more than `i` packets.
pub fn transition_row(i: usize, packets: u64, link: &LinkParameters) -> Result<Vec<f64>> {
    check_states(i, 0, packets)?;
    let mut row = vec![0.0; i + 1];
    for (j, slot) in row.iter_mut().enumerate().skip(1) {
        *slot = nonzero_target_prob(i, j, packets, link);
    }
    let rest: f64 = row[1..].iter().sum();
    row[0] = (1.0 - rest).max(0.0);
    Ok(row)
}
