//! Lower real branch of the Lambert W function.

use std::f64::consts::E;

use crate::error::{Error, Result};

const BRANCH_POINT: f64 = -1.0 / E;

/// `W_{-1}(x)`: the solution `w <= -1` of `w·e^w = x` for `x ∈ [-1/e, 0)`.
///
/// Works on `h(w) = ln(-w) + w - ln(-x)`, which is increasing on
/// `(-∞, -1]` and has no exponential to overflow. The root is bracketed in
/// `[2 ln(-x) - 2, -1]` and refined by Newton steps, falling back to
/// bisection whenever a step leaves the bracket. Arguments within a few ulps
/// below `-1/e` are treated as the branch point.
pub fn lambert_w_minus1(x: f64) -> Result<f64> {
    if !(BRANCH_POINT * (1.0 + 4.0 * f64::EPSILON)..0.0).contains(&x) {
        return Err(Error::Domain(format!(
            "W_-1 is defined on [-1/e, 0), got {x}"
        )));
    }
    let target = (-x).ln();
    let h = |w: f64| (-w).ln() + w - target;

    let mut hi = -1.0;
    if h(hi) <= 0.0 {
        return Ok(-1.0);
    }
    let mut lo = 2.0 * target - 2.0;
    let mut w = if x > -0.25 {
        // asymptotic seed ln(-x) - ln(-ln(-x))
        (target - (-target).ln()).clamp(lo, hi)
    } else {
        // near the branch point w ≈ -1 - sqrt(2(1 + e·x))
        (-1.0 - (2.0 * (1.0 + E * x)).max(0.0).sqrt()).clamp(lo, hi)
    };

    for _ in 0..200 {
        let hw = h(w);
        if hw == 0.0 {
            return Ok(w);
        }
        if hw < 0.0 {
            lo = w;
        } else {
            hi = w;
        }
        let slope = 1.0 + 1.0 / w;
        let mut next = w - hw / slope;
        if !(next > lo && next < hi) || slope == 0.0 {
            next = 0.5 * (lo + hi);
        }
        if (next - w).abs() <= 4.0 * f64::EPSILON * w.abs() {
            return Ok(next);
        }
        w = next;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(x: f64) -> f64 {
        let w = lambert_w_minus1(x).unwrap();
        (w * w.exp() - x).abs() / x.abs()
    }

    #[test]
    fn exact_points() {
        assert_eq!(lambert_w_minus1(-(-1f64).exp()).unwrap(), -1.0);
        let w = lambert_w_minus1(-2.0 * (-2f64).exp()).unwrap();
        assert!((w + 2.0).abs() < 1e-12);
        let w = lambert_w_minus1(-10.0 * (-10f64).exp()).unwrap();
        assert!((w + 10.0).abs() < 1e-12);
    }

    #[test]
    fn residual_across_domain() {
        for k in 1..2000 {
            let x = BRANCH_POINT * k as f64 / 2000.0;
            assert!(residual(x) <= 1e-12, "x = {x}");
        }
        for e in 1..300 {
            let x = -(10f64).powi(-e);
            assert!(residual(x) <= 1e-12, "x = {x}");
        }
    }

    #[test]
    fn outside_domain() {
        assert!(lambert_w_minus1(0.0).is_err());
        assert!(lambert_w_minus1(0.1).is_err());
        assert!(lambert_w_minus1(-0.5).is_err());
        assert!(lambert_w_minus1(f64::NAN).is_err());
    }
}
