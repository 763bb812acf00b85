//! Scalar maximization and root bracketing.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizes `f` on [lo, hi]: a scan with spacing `step` locates the best
/// sample, then golden-section search on its neighbourhood refines it until
/// the bracket is narrower than `tol`.
pub fn maximize<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, step: f64, tol: f64) -> Result<(f64, f64)> {
    if !(lo <= hi) || !(step > 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bad search interval [{lo}, {hi}] with step {step} and tolerance {tol}"
        )));
    }
    let count = ((hi - lo) / step).floor() as usize + 1;
    let sample = |k: usize| (lo + step * k as f64).min(hi);
    let (mut best_k, mut best_f) = (0, f(lo));
    for k in 1..count {
        let v = f(sample(k));
        if v > best_f {
            best_k = k;
            best_f = v;
        }
    }
    if count == 1 {
        return Ok((lo, best_f));
    }
    let mut a = sample(best_k.saturating_sub(1));
    let mut b = if best_k + 1 < count { sample(best_k + 1) } else { hi };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // the refined point never loses against the best scan sample
    if fx >= best_f {
        Ok((x, fx))
    } else {
        Ok((sample(best_k), best_f))
    }
}

/// Finds x in [lo, hi] with f(x) = target for monotone `f`, stopping when
/// |f(x) − target| < `f_tol` or the bracket collapses.
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, target: f64, f_tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a) - target, f(b) - target);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Convergence(format!(
            "target {target} is not bracketed on [{lo}, {hi}]"
        )));
    }
    let rising = fb > 0.0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m) - target;
        if fm.abs() < f_tol || b - a < 1e-15 * (1.0 + m.abs()) {
            return Ok(m);
        }
        if (fm > 0.0) == rising {
            b = m;
        } else {
            a = m;
        }
    }
    Err(Error::Convergence(format!("bisection for {target} did not converge")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_peak() {
        let (x, fx) = maximize(|x| 2.0 - (x - 0.3217).powi(2), 0.0, 1.0, 1e-3, 1e-9).unwrap();
        assert!((x - 0.3217).abs() < 1e-6);
        assert!((fx - 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_point_interval() {
        let (x, fx) = maximize(|x| x * x, 0.7, 0.7, 1e-3, 1e-6).unwrap();
        assert_eq!((x, fx), (0.7, 0.7 * 0.7));
    }

    #[test]
    fn peak_at_boundary() {
        let (x, _) = maximize(|x| x, 0.0, 1.0, 1e-3, 1e-9).unwrap();
        assert!((x - 1.0).abs() < 1e-6);
    }

    #[test]
    fn bisection_on_decreasing_function() {
        let x = bisect(|x| (-x).exp(), 0.0, 5.0, 0.25, 1e-12).unwrap();
        assert!((x - 4f64.ln()).abs() < 1e-10);
        assert!(bisect(|x| x, 1.0, 2.0, 0.0, 1e-9).is_err());
    }
}
