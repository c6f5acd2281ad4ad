//! Gap between the second upper bound and the superposition lower bound.

use rayon::prelude::*;

use crate::optimize::{minimize_scalar, ScalarInterval};

use super::{lower_bound_value, upper_ii_value, GaussianChannelSpec};

/// `1/2 log2(3/2 + sqrt 2)`, the supremum of the gap over all `(P, Q)`.
pub fn universal_gap() -> f64 {
    0.5 * (1.5 + std::f64::consts::SQRT_2).log2()
}

/// `upper_ii - lower_bound` at one operating point.
pub fn gap(spec: &GaussianChannelSpec) -> f64 {
    gap_raw(spec.p(), spec.q())
}

pub(crate) fn gap_raw(p: f64, q: f64) -> f64 {
    upper_ii_value(p, q) - lower_bound_value(p, q)
}

/// `n` points spaced evenly in `log10` between `lo` and `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)
                }
            })
            .collect(),
    }
}

/// Largest gap found on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapPeak {
    pub p: f64,
    pub q: f64,
    pub gap: f64,
}

/// Maximum of [`gap`] over the product grid `ps x qs`, evaluated in
/// parallel. Ties resolve to the first point in row-major order.
pub fn sup_gap_on_grid(ps: &[f64], qs: &[f64]) -> GapPeak {
    ps.par_iter()
        .map(|&p| {
            qs.iter()
                .map(|&q| GapPeak { p, q, gap: gap_raw(p, q) })
                .fold(None, pick_larger)
                .expect("nonempty grid")
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(None, pick_larger)
        .expect("nonempty grid")
}

fn pick_larger(best: Option<GapPeak>, next: GapPeak) -> Option<GapPeak> {
    match best {
        Some(b) if b.gap >= next.gap => Some(b),
        _ => Some(next),
    }
}

/// Analytic maximum of the gap over `Q <= 2`: attained at `Q = 2`,
/// `P = (9 - sqrt 17)/4`, with value `1/2 log2((5 + sqrt 17)/4)`.
pub fn regional_peak_closed_form() -> GapPeak {
    let r17 = 17f64.sqrt();
    GapPeak {
        p: (9.0 - r17) / 4.0,
        q: 2.0,
        gap: 0.5 * ((5.0 + r17) / 4.0).log2(),
    }
}

/// Numeric maximum of the gap along `Q = 2` for `P` in `[0, p_max]`.
pub fn regional_peak_numeric(p_max: f64) -> GapPeak {
    let domain = ScalarInterval::new(0.0, p_max).expect("p_max must be a finite nonnegative number");
    let m = minimize_scalar(|p| -gap_raw(p, 2.0), domain);
    GapPeak {
        p: m.arg,
        q: 2.0,
        gap: -m.value,
    }
}
