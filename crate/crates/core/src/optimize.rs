//! Derivative-free scalar and two-parameter optimizers.
//!
//! The bound objectives contain `[x]+` kinks, so everything here is grid
//! search followed by golden-section refinement. Non-finite objective values
//! (NaN from `inf - inf` at domain edges) rank as `+inf` when minimizing.

use crate::error::{Error, Result};

/// Points in the coarse grid of [`minimize_scalar`].
pub const SCALAR_GRID_POINTS: usize = 2001;
/// Points per axis in the coarse grid of [`maximize_on_simplex`].
pub const SIMPLEX_GRID_POINTS: usize = 200;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// A closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarInterval {
    lo: f64,
    hi: f64,
}

impl ScalarInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo <= hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::Domain {
                what: "interval",
                value: lo,
                domain: "finite lo <= hi",
            })
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.lo..=self.hi).contains(&x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub arg: f64,
    pub value: f64,
}

fn rank(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> Minimum {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = rank(f(c));
    let mut fd = rank(f(d));
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = rank(f(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = rank(f(d));
        }
    }
    if fc <= fd {
        Minimum { arg: c, value: fc }
    } else {
        Minimum { arg: d, value: fd }
    }
}

/// Minimizes `f` over `domain`: a 2001-point grid locates the best cell,
/// then golden-section search refines inside the neighbouring bracket.
/// Always returns the best point seen.
pub fn minimize_scalar<F: Fn(f64) -> f64>(f: F, domain: ScalarInterval) -> Minimum {
    let n = SCALAR_GRID_POINTS;
    let step = domain.width() / (n - 1) as f64;
    let point = |i: usize| {
        if i == n - 1 {
            domain.hi
        } else {
            domain.lo + step * i as f64
        }
    };
    let mut best = Minimum {
        arg: domain.lo,
        value: rank(f(domain.lo)),
    };
    let mut best_i = 0;
    for i in 1..n {
        let x = point(i);
        let v = rank(f(x));
        if v < best.value {
            best = Minimum { arg: x, value: v };
            best_i = i;
        }
    }
    if domain.width() == 0.0 {
        return best;
    }
    let a = point(best_i.saturating_sub(1));
    let b = point((best_i + 1).min(n - 1));
    let tol = 1e-13 * (1.0 + domain.lo.abs().max(domain.hi.abs()));
    let refined = golden_section(&f, a, b, tol);
    if refined.value < best.value {
        refined
    } else {
        best
    }
}

/// Maximum found by [`maximize_on_simplex`]: `first + second <= total`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexMaximum {
    pub first: f64,
    pub second: f64,
    pub value: f64,
}

/// Maximizes `f(first, second)` over `{first, second >= 0, first + second <= total}`.
///
/// The simplex is parameterized as `second = total * s`,
/// `first = (total - second) * t` with `(s, t)` in the unit square. A
/// 200 x 200 grid is followed by alternating golden-section refinement of
/// `s` and `t` inside the best cell's neighbourhood.
pub fn maximize_on_simplex<F: Fn(f64, f64) -> f64>(total: f64, f: F) -> SimplexMaximum {
    let n = SIMPLEX_GRID_POINTS;
    let eval = |s: f64, t: f64| {
        let second = total * s;
        let first = (total - second) * t;
        f(first, second)
    };
    let grid = |i: usize| i as f64 / (n - 1) as f64;
    let (mut bs, mut bt, mut bv) = (0.0, 0.0, f64::NEG_INFINITY);
    let (mut bi, mut bj) = (0, 0);
    for i in 0..n {
        for j in 0..n {
            let v = eval(grid(i), grid(j));
            if v > bv {
                (bs, bt, bv, bi, bj) = (grid(i), grid(j), v, i, j);
            }
        }
    }
    let cell = |k: usize| (grid(k.saturating_sub(1)), grid((k + 1).min(n - 1)));
    let (s_lo, s_hi) = cell(bi);
    let (t_lo, t_hi) = cell(bj);
    for _ in 0..8 {
        let s_min = golden_section(|s| -eval(s, bt), s_lo, s_hi, 1e-14);
        if -s_min.value > bv {
            bs = s_min.arg;
            bv = -s_min.value;
        }
        let t_min = golden_section(|t| -eval(bs, t), t_lo, t_hi, 1e-14);
        if -t_min.value > bv {
            bt = t_min.arg;
            bv = -t_min.value;
        }
    }
    let second = total * bs;
    SimplexMaximum {
        first: (total - second) * bt,
        second,
        value: bv,
    }
}
