//! Beam-splitter action through images of two-mode number states.
//!
//! U|m,n⟩ = (c â† − s b̂†)^m (s â† + c b̂†)^n |0,0⟩ / √(m! n!) is built one
//! creation operator at a time, which stays stable where the closed binomial
//! sum would cancel catastrophically.

use num_complex::Complex64 as C64;

use super::{FockState, ZERO};

/// Images U|m,n⟩ for m, n < cutoff, each indexed by the photon number k on
/// the first port within block N = m + n (the second port holds N − k).
pub(super) struct BlockImages {
    cutoff: usize,
    images: Vec<Vec<C64>>,
}

impl BlockImages {
    pub(super) fn new(cutoff: usize, t: f64) -> Self {
        let (c, s) = (t.sqrt(), (1.0 - t).sqrt());
        let mut images: Vec<Vec<C64>> = Vec::with_capacity(cutoff * cutoff);
        for m in 0..cutoff {
            for n in 0..cutoff {
                let img = if m == 0 && n == 0 {
                    vec![C64::new(1.0, 0.0)]
                } else if m > 0 {
                    raise(&images[(m - 1) * cutoff + n], c, -s, m)
                } else {
                    raise(&images[n - 1], s, c, n)
                };
                images.push(img);
            }
        }
        Self { cutoff, images }
    }

    fn get(&self, m: usize, n: usize) -> &[C64] {
        &self.images[m * self.cutoff + n]
    }
}

// (x â† + y b̂†) v / √count on a block vector of total number N − 1.
fn raise(v: &[C64], x: f64, y: f64, count: usize) -> Vec<C64> {
    let total = v.len();
    let norm = 1.0 / (count as f64).sqrt();
    let mut out = vec![ZERO; total + 1];
    for (k, &a) in v.iter().enumerate() {
        out[k + 1] += a * (x * ((k + 1) as f64).sqrt() * norm);
        out[k] += a * (y * ((total - k) as f64).sqrt() * norm);
    }
    out
}

/// U|m,n⟩ expanded over |k, m+n−k⟩, indexed by k.
pub fn number_state_image(m: usize, n: usize, t: f64) -> Vec<C64> {
    let (c, s) = (t.sqrt(), (1.0 - t).sqrt());
    let mut img = vec![C64::new(1.0, 0.0)];
    for k in 1..=n {
        img = raise(&img, s, c, k);
    }
    for k in 1..=m {
        img = raise(&img, c, -s, k);
    }
    img
}

pub(super) fn apply(state: &FockState, mode_i: usize, mode_j: usize, images: &BlockImages) -> FockState {
    let d = images.cutoff;
    let si = state.stride(mode_i);
    let sj = state.stride(mode_j);
    let len = state.amplitudes.len();
    let mut out = vec![ZERO; len];
    for base in 0..len {
        if (base / si) % d != 0 || (base / sj) % d != 0 {
            continue;
        }
        for m in 0..d {
            for n in 0..d {
                let a = state.amplitudes[base + m * si + n * sj];
                if a == ZERO {
                    continue;
                }
                let total = m + n;
                let img = images.get(m, n);
                let lo = total.saturating_sub(d - 1);
                let hi = total.min(d - 1);
                for k in lo..=hi {
                    out[base + k * si + (total - k) * sj] += img[k] * a;
                }
            }
        }
    }
    FockState {
        cutoffs: state.cutoffs.clone(),
        amplitudes: out,
        truncation_error: state.truncation_error,
    }
}
