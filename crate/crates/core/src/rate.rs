use std::fmt;

/// Whether a rate is achievable, a converse, or the capacity itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Lower,
    Upper,
    Exact,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
            BoundKind::Exact => "exact",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A rate in bits per channel use, tagged with its kind and the method that
/// produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBound {
    value: f64,
    kind: BoundKind,
    method: &'static str,
}

impl RateBound {
    /// Rounding residue down to `-1e-12` is clamped to zero.
    ///
    /// # Panics
    ///
    /// Panics if `value` is not finite or is clearly negative; every caller
    /// in this crate produces rates from validated parameters.
    pub fn new(value: f64, kind: BoundKind, method: &'static str) -> Self {
        assert!(
            value.is_finite() && value >= -1e-12,
            "{method}: rate {value} is not a finite nonnegative number"
        );
        Self {
            value: value.max(0.0),
            kind,
            method,
        }
    }

    pub fn lower(value: f64, method: &'static str) -> Self {
        Self::new(value, BoundKind::Lower, method)
    }

    pub fn upper(value: f64, method: &'static str) -> Self {
        Self::new(value, BoundKind::Upper, method)
    }

    pub fn exact(value: f64, method: &'static str) -> Self {
        Self::new(value, BoundKind::Exact, method)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn kind(&self) -> BoundKind {
        self.kind
    }

    pub fn method(&self) -> &'static str {
        self.method
    }
}

impl fmt::Display for RateBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6} ({}, {})", self.value, self.kind, self.method)
    }
}
