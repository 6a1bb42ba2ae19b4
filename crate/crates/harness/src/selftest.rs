//! Cross-checks of the closed-form scalar means against grid-search
//! maximization and against the 1x1 operator means.

use contraharmonic::means::{contraharmonic_mean, equal_args_coefficient};
use contraharmonic::scalar::{
    lehmer_mean, scalar_variational_oracle, scalar_weighted_mean, scalar_weighted_variational_oracle, MeanKind,
    ScalarPair, Weight,
};
use contraharmonic::HermitianPD;
use rand::Rng;

use crate::generate::{log_uniform, trial_rng};

pub const ORACLE_GRID_STEP: f64 = 1e-4;
pub const ORACLE_TOL: f64 = 1e-6;
pub const FIXTURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// Largest deviation observed.
    pub deviation: f64,
    pub tol: f64,
}

impl Check {
    pub fn pass(&self) -> bool {
        self.deviation <= self.tol
    }
}

fn pair(a: f64, b: f64) -> ScalarPair {
    ScalarPair::new(a, b).expect("fixture scalars are positive")
}

fn weight(v: f64) -> Weight {
    Weight::new(v).expect("fixture weights lie in (0, 1)")
}

fn operator_1x1(nu: Weight, p: ScalarPair) -> f64 {
    let a = HermitianPD::diag(&[p.alpha()]).expect("positive scalar");
    let b = HermitianPD::diag(&[p.beta()]).expect("positive scalar");
    contraharmonic_mean(nu, &a, &b).expect("1x1 means are defined").matrix()[(0, 0)].re
}

/// Fixed values of the contraharmonic means.
pub fn fixture_checks() -> Vec<Check> {
    let mut checks = vec![
        Check {
            name: "C(3,6) = 5".into(),
            deviation: (lehmer_mean(2.0, pair(3.0, 6.0)) - 5.0).abs(),
            tol: FIXTURE_TOL,
        },
        Check {
            name: "C_1/2(1,3) = 2.5".into(),
            deviation: (scalar_weighted_mean(MeanKind::Contraharmonic, weight(0.5), pair(1.0, 3.0)) - 2.5).abs(),
            tol: FIXTURE_TOL,
        },
        Check {
            name: "C_1/3(1,2) = 3.3".into(),
            deviation: (scalar_weighted_mean(MeanKind::Contraharmonic, weight(1.0 / 3.0), pair(1.0, 2.0)) - 3.3)
                .abs(),
            tol: FIXTURE_TOL,
        },
    ];
    for (label, v) in [("1/4", 0.25), ("1/3", 1.0 / 3.0), ("1/2", 0.5), ("2/3", 2.0 / 3.0)] {
        let nu = weight(v);
        let expected = (3.0 * v * v - 3.0 * v + 1.0) / (v - v * v);
        let scalar = scalar_weighted_mean(MeanKind::Contraharmonic, nu, pair(1.0, 1.0));
        let operator = operator_1x1(nu, pair(1.0, 1.0));
        let deviation = (scalar - expected)
            .abs()
            .max((operator - expected).abs())
            .max((equal_args_coefficient(nu) - expected).abs());
        checks.push(Check {
            name: format!("C_{label}(a,a)/a = (3v^2-3v+1)/(v-v^2)"),
            deviation,
            tol: FIXTURE_TOL,
        });
    }
    checks
}

/// Random pairs in `[1e-2, 1e2]^2` and weights in `[0.05, 0.95]`: grid
/// maxima against closed forms, and closed forms against 1x1 operator means.
pub fn oracle_checks(pairs: usize, seed: u64) -> Vec<Check> {
    let mut rng = trial_rng(seed, 1, u64::MAX, 0);
    let mut unweighted = 0f64;
    let mut weighted = 0f64;
    let mut operator = 0f64;
    let mut ordering = 0f64;
    for _ in 0..pairs {
        let p = pair(log_uniform(1e-2, 1e2, &mut rng), log_uniform(1e-2, 1e2, &mut rng));
        let nu = weight(rng.random_range(0.05..0.95));

        let m2 = lehmer_mean(2.0, p);
        unweighted = unweighted.max((scalar_variational_oracle(p, ORACLE_GRID_STEP) - m2).abs());

        let c = scalar_weighted_mean(MeanKind::Contraharmonic, nu, p);
        weighted = weighted.max((scalar_weighted_variational_oracle(nu, p, ORACLE_GRID_STEP) - c).abs());
        operator = operator.max((operator_1x1(nu, p) - c).abs() / c.max(1.0));

        // Lehmer means increase with the order s.
        let ms: Vec<f64> = [0.0, 0.5, 1.0, 2.0].iter().map(|&s| lehmer_mean(s, p)).collect();
        for w in ms.windows(2) {
            ordering = ordering.max((w[0] - w[1]) / w[1].max(1.0));
        }
    }
    vec![
        Check {
            name: format!("grid max of unweighted objective = M_2 ({pairs} pairs)"),
            deviation: unweighted,
            tol: ORACLE_TOL,
        },
        Check {
            name: format!("grid max of weighted objective = C_nu ({pairs} pairs)"),
            deviation: weighted,
            tol: ORACLE_TOL,
        },
        Check {
            name: format!("1x1 operator C_nu = scalar C_nu ({pairs} pairs)"),
            deviation: operator,
            tol: FIXTURE_TOL,
        },
        Check {
            name: format!("M_0 <= M_1/2 <= M_1 <= M_2 ({pairs} pairs)"),
            deviation: ordering.max(0.0),
            tol: FIXTURE_TOL,
        },
    ]
}

pub fn run_selftest(pairs: usize, seed: u64) -> Vec<Check> {
    let mut checks = fixture_checks();
    checks.extend(oracle_checks(pairs, seed));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_pass() {
        for c in fixture_checks() {
            assert!(c.pass(), "{c:?}");
        }
    }

    #[test]
    fn small_oracle_run_passes() {
        for c in oracle_checks(50, 7) {
            assert!(c.pass(), "{c:?}");
        }
    }
}
