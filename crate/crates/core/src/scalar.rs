//! Scalar means and grid-search evaluations of their variational forms.
//!
//! The grid searches here never use the closed-form maximizer, so they can
//! serve as an independent check on the closed forms and on the 1x1 case of
//! the operator means.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarPair {
    alpha: f64,
    beta: f64,
}

impl ScalarPair {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(alpha) && ok(beta) {
            Ok(Self { alpha, beta })
        } else {
            Err(Error::InvalidScalar { alpha, beta })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn swapped(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
        }
    }
}

/// A mixing weight. Weights built with [`Weight::new`] lie in the open
/// interval (0, 1); [`Weight::closed`] also admits the endpoints.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Weight {
    value: f64,
    closed: bool,
}

impl Weight {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(Self { value, closed: false })
        } else {
            Err(Error::WeightOutOfRange {
                value,
                range: "(0, 1)",
            })
        }
    }

    pub fn closed(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self { value, closed: true })
        } else {
            Err(Error::LambdaOutOfRange(value))
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Whether the weight was constructed with endpoints allowed.
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// `1 - nu`.
    pub fn complement(&self) -> Self {
        Self {
            value: 1.0 - self.value,
            closed: self.closed,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeanKind {
    Arithmetic,
    Harmonic,
    Geometric,
    Contraharmonic,
}

impl MeanKind {
    pub const ALL: [MeanKind; 4] = [
        MeanKind::Harmonic,
        MeanKind::Geometric,
        MeanKind::Arithmetic,
        MeanKind::Contraharmonic,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MeanKind::Arithmetic => "arithmetic",
            MeanKind::Harmonic => "harmonic",
            MeanKind::Geometric => "geometric",
            MeanKind::Contraharmonic => "contraharmonic",
        }
    }
}

impl FromStr for MeanKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        MeanKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown mean '{s}' (expected arithmetic, harmonic, geometric or contraharmonic)"))
    }
}

impl fmt::Display for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Gini-Beckenbach-Lehmer mean `(a^s + b^s) / (a^(s-1) + b^(s-1))`.
pub fn lehmer_mean(s: f64, p: ScalarPair) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    (a.powf(s) + b.powf(s)) / (a.powf(s - 1.0) + b.powf(s - 1.0))
}

/// One-dimensional case of the weighted operator means.
pub fn scalar_weighted_mean(kind: MeanKind, nu: Weight, p: ScalarPair) -> f64 {
    let v = nu.value;
    let (a, b) = (p.alpha, p.beta);
    match kind {
        MeanKind::Arithmetic => (1.0 - v) * a + v * b,
        MeanKind::Harmonic => 1.0 / ((1.0 - v) / a + v / b),
        MeanKind::Geometric => a.powf(1.0 - v) * b.powf(v),
        MeanKind::Contraharmonic => {
            (1.0 - v) / v * b + v / (1.0 - v) * a - 1.0 / ((1.0 - v) / a + v / b)
        }
    }
}

pub const GRID_LO: f64 = -1.0;
pub const GRID_HI: f64 = 2.0;

/// Maximum of `f` over a uniform grid of `[GRID_LO, GRID_HI]`, followed by a
/// second grid of step `step / 100` over the two cells around the best node.
fn grid_max(step: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    assert!(step > 0.0 && step <= 0.01, "grid step must lie in (0, 0.01]");
    let scan = |lo: f64, hi: f64, h: f64| {
        let count = ((hi - lo) / h).ceil() as usize;
        (0..=count)
            .map(|k| (lo + k as f64 * h).min(hi))
            .map(|s| (s, f(s)))
            .fold((lo, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
    };
    let (s0, _) = scan(GRID_LO, GRID_HI, step);
    let lo = (s0 - step).max(GRID_LO);
    let hi = (s0 + step).min(GRID_HI);
    scan(lo, hi, step / 100.0)
}

/// Grid maximum of `s -> a - 2a s^2 + b - 2b (1 - s)^2`.
pub fn scalar_variational_oracle(p: ScalarPair, grid_step: f64) -> f64 {
    scalar_variational_argmax(p, grid_step).1
}

/// As [`scalar_variational_oracle`], also returning the maximizing node.
pub fn scalar_variational_argmax(p: ScalarPair, grid_step: f64) -> (f64, f64) {
    let (a, b) = (p.alpha, p.beta);
    grid_max(grid_step, |s| {
        let t = 1.0 - s;
        a - 2.0 * a * s * s + b - 2.0 * b * t * t
    })
}

/// Grid maximum of `s -> (1-nu)^-1 (nu a - s^2 a) + nu^-1 ((1-nu) b - (1-s)^2 b)`.
pub fn scalar_weighted_variational_oracle(nu: Weight, p: ScalarPair, grid_step: f64) -> f64 {
    scalar_weighted_variational_argmax(nu, p, grid_step).1
}

pub fn scalar_weighted_variational_argmax(nu: Weight, p: ScalarPair, grid_step: f64) -> (f64, f64) {
    let v = nu.value;
    let (a, b) = (p.alpha, p.beta);
    grid_max(grid_step, |s| {
        let t = 1.0 - s;
        (v * a - s * s * a) / (1.0 - v) + ((1.0 - v) * b - t * t * b) / v
    })
}
