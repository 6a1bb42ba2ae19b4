//! Randomized verification campaigns over every property.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use contraharmonic::inequalities::{
    check_bounds_remark, check_congruence, check_contraction, check_convexity_mix, check_functional,
    check_homogeneity_and_embedding, check_mixed_mean, check_norm_lower_bound, check_refined_upper, check_symmetry,
    lambda_lower_bound,
};
use contraharmonic::means::{
    check_product_identity, check_square_identity, contraharmonic_mean, gap_identity, objective, witness_pair,
    Decomposition,
};
use contraharmonic::order::compare_equal;
use contraharmonic::{loewner_leq, PropertyId, Weight};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::generate::{
    gen_decomposition, gen_functional, gen_invertible, gen_pd, log_uniform, trial_rng,
};

pub const MAX_DIM: usize = 16;
pub const DEFAULT_NU_RANGE: (f64, f64) = (0.05, 0.95);
pub const EXTREME_NU_RANGE: (f64, f64) = (1e-3, 1.0 - 1e-3);
pub const EXTREME_TOL: f64 = 1e-6;
pub const DEFAULT_COND_CAP: f64 = 1e6;
/// Decompositions sampled per trial for the variational and gap checks.
pub const DEFAULT_DECOMPOSITIONS: usize = 4;

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("invalid campaign configuration: {0}")]
    InvalidConfig(String),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot write report: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot write report: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub dims: RangeInclusive<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub nu_range: (f64, f64),
    pub cond_cap: f64,
    pub properties: Vec<PropertyId>,
    pub decompositions: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            dims: 1..=8,
            trials: 500,
            seed: 42,
            tol: contraharmonic::DEFAULT_TOL,
            nu_range: DEFAULT_NU_RANGE,
            cond_cap: DEFAULT_COND_CAP,
            properties: PropertyId::all(),
            decompositions: DEFAULT_DECOMPOSITIONS,
        }
    }
}

impl CampaignConfig {
    /// Weights in `[1e-3, 1 - 1e-3]` with the tolerance relaxed to `1e-6`.
    pub fn with_extreme_weights(mut self) -> Self {
        self.nu_range = EXTREME_NU_RANGE;
        self.tol = EXTREME_TOL;
        self
    }

    pub fn validate(&self) -> Result<(), CampaignError> {
        let bad = |msg: String| Err(CampaignError::InvalidConfig(msg));
        let (lo, hi) = (*self.dims.start(), *self.dims.end());
        if lo < 1 || hi > MAX_DIM || lo > hi {
            return bad(format!("dims {lo}..{hi} must satisfy 1 <= lo <= hi <= {MAX_DIM}"));
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol {} must be positive", self.tol));
        }
        let (a, b) = self.nu_range;
        if !(0.0 < a && a <= b && b < 1.0) {
            return bad(format!("nu range [{a}, {b}] must lie inside (0, 1)"));
        }
        if !(self.cond_cap >= 1.0) || !self.cond_cap.is_finite() {
            return bad(format!("condition cap {} must be finite and >= 1", self.cond_cap));
        }
        if self.decompositions == 0 {
            return bad("at least one decomposition per trial is required".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub trial: usize,
    pub dim: usize,
    pub property: PropertyId,
    pub nu: Option<f64>,
    pub mu: Option<f64>,
    pub lambda: Option<f64>,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertySummary {
    pub property: PropertyId,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub min_margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignSummary {
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub properties: Vec<PropertySummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignResult {
    pub reports: Vec<PropertyReport>,
    pub summary: CampaignSummary,
}

impl CampaignResult {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

struct Outcome {
    mu: Option<f64>,
    lambda: Option<f64>,
    margin: f64,
}

impl Outcome {
    fn plain(margin: f64) -> Self {
        Self {
            mu: None,
            lambda: None,
            margin,
        }
    }
}

/// Draws the inputs of one trial and evaluates the property on them.
pub fn run_trial(config: &CampaignConfig, dim: usize, property: PropertyId, trial: usize) -> PropertyReport {
    let mut rng = trial_rng(config.seed, dim, property.index(), trial as u64);
    let (lo, hi) = config.nu_range;
    let nu_value = if lo == hi { lo } else { rng.random_range(lo..hi) };
    let outcome = Weight::new(nu_value)
        .map_err(|e| e.to_string())
        .and_then(|nu| evaluate(config, dim, property, nu, &mut rng).map_err(|e| e.to_string()));
    let (mu, lambda, margin) = match outcome {
        Ok(o) => (o.mu, o.lambda, o.margin),
        // A predicate that cannot even be evaluated counts as a violation.
        Err(_) => (None, None, f64::NEG_INFINITY),
    };
    PropertyReport {
        trial,
        dim,
        property,
        nu: Some(nu_value),
        mu,
        lambda,
        margin,
        pass: margin >= -config.tol,
    }
}

fn evaluate<R: Rng>(
    config: &CampaignConfig,
    dim: usize,
    property: PropertyId,
    nu: Weight,
    rng: &mut R,
) -> contraharmonic::Result<Outcome> {
    let tol = config.tol;
    let cap = config.cond_cap;
    let a = gen_pd(dim, cap, rng);
    let b = gen_pd(dim, cap, rng);
    let draw_weight = |rng: &mut R| {
        let (lo, hi) = config.nu_range;
        let v = if lo == hi { lo } else { rng.random_range(lo..hi) };
        Weight::new(v)
    };

    let outcome = match property {
        PropertyId::Symmetry => Outcome::plain(check_symmetry(nu, &a, &b, tol)?.margin()),
        PropertyId::Homogeneity | PropertyId::ScalarEmbed => {
            let r = log_uniform(0.1, 10.0, rng);
            let alpha = log_uniform(1e-2, 1e2, rng);
            let beta = log_uniform(1e-2, 1e2, rng);
            let report = check_homogeneity_and_embedding(nu, &a, &b, r, alpha, beta, tol)?;
            if property == PropertyId::Homogeneity {
                Outcome::plain(report.homogeneity.margin())
            } else {
                Outcome::plain(report.embedding.margin())
            }
        }
        PropertyId::BoundsRemark => {
            let r = check_bounds_remark(nu, &a, &b, tol)?;
            Outcome::plain(r.lower.margin.min(r.upper.margin))
        }
        PropertyId::ConvexityMix => {
            let mu = draw_weight(rng)?;
            let c = gen_pd(dim, cap, rng);
            let d = gen_pd(dim, cap, rng);
            let v = check_convexity_mix(nu, mu, &a, &b, &c, &d, tol)?;
            Outcome {
                mu: Some(mu.value()),
                lambda: None,
                margin: v.margin,
            }
        }
        PropertyId::Congruence => {
            let z = gen_invertible(dim, rng);
            Outcome::plain(check_congruence(nu, &a, &b, &z, tol)?.margin())
        }
        PropertyId::MixedMean => {
            let mu = draw_weight(rng)?;
            let v = check_mixed_mean(nu, mu, &a, &b, tol)?;
            Outcome {
                mu: Some(mu.value()),
                lambda: None,
                margin: v.margin,
            }
        }
        PropertyId::Functional => {
            let phi = gen_functional(dim, rng);
            Outcome::plain(check_functional(nu, &a, &b, &phi, tol)?.margin)
        }
        PropertyId::NormLower => Outcome::plain(check_norm_lower_bound(nu, &a, &b, tol)?.margin),
        PropertyId::LambdaFamily => {
            let lambda: f64 = rng.random_range(0.0..=1.0);
            let (_, v) = lambda_lower_bound(nu, lambda, &a, &b, tol)?;
            Outcome {
                mu: None,
                lambda: Some(lambda),
                margin: v.margin,
            }
        }
        PropertyId::Contraction => Outcome::plain(check_contraction(nu, &a, &b, tol)?.margin),
        PropertyId::RefinedUpper => Outcome::plain(check_refined_upper(nu, &a, &b, tol)?.margin),
        PropertyId::Variational => {
            let c = contraharmonic_mean(nu, &a, &b)?;
            let witness = witness_pair(nu, &a, &b)?;
            let mut margin = f64::INFINITY;
            for _ in 0..config.decompositions {
                let (d, _) = gen_decomposition(dim, &witness, rng);
                let f = objective(nu, &a, &b, &d)?;
                margin = margin.min(loewner_leq(&f, c.matrix(), tol)?.margin);
            }
            Outcome::plain(margin)
        }
        PropertyId::Attainment => {
            let c = contraharmonic_mean(nu, &a, &b)?;
            let d: Decomposition = witness_pair(nu, &a, &b)?.into();
            let f = objective(nu, &a, &b, &d)?;
            Outcome::plain(compare_equal(&f, c.matrix(), tol)?.margin())
        }
        PropertyId::GapIdentity => {
            let witness = witness_pair(nu, &a, &b)?;
            let mut margin = f64::INFINITY;
            for _ in 0..config.decompositions {
                let (d, _) = gen_decomposition(dim, &witness, rng);
                margin = margin.min(gap_identity(nu, &a, &b, &d)?.report(tol).margin());
            }
            Outcome::plain(margin)
        }
        PropertyId::ProductIdentity => Outcome::plain(check_product_identity(nu, &a, &b, tol)?.margin()),
        PropertyId::SquareIdentity => Outcome::plain(check_square_identity(nu, &a, &b, tol)?.margin()),
    };
    Ok(outcome)
}

/// Runs every `(dim, property, trial)` cell, in parallel, and returns the
/// reports in that lexicographic order.
pub fn fuzz_campaign(config: &CampaignConfig) -> Result<CampaignResult, CampaignError> {
    config.validate()?;
    let cells: Vec<(usize, PropertyId, usize)> = config
        .dims
        .clone()
        .flat_map(|dim| {
            config
                .properties
                .iter()
                .flat_map(move |&p| (0..config.trials).map(move |t| (dim, p, t)))
        })
        .collect();
    let reports: Vec<PropertyReport> = cells
        .into_par_iter()
        .map(|(dim, p, t)| run_trial(config, dim, p, t))
        .collect();
    let summary = summarize(&config.properties, &reports);
    Ok(CampaignResult { reports, summary })
}

pub fn summarize(properties: &[PropertyId], reports: &[PropertyReport]) -> CampaignSummary {
    let mut per: BTreeMap<PropertyId, PropertySummary> = properties
        .iter()
        .map(|&p| {
            (
                p,
                PropertySummary {
                    property: p,
                    trials: 0,
                    passed: 0,
                    failed: 0,
                    min_margin: None,
                },
            )
        })
        .collect();
    for r in reports {
        let s = per.entry(r.property).or_insert_with(|| PropertySummary {
            property: r.property,
            trials: 0,
            passed: 0,
            failed: 0,
            min_margin: None,
        });
        s.trials += 1;
        if r.pass {
            s.passed += 1;
        } else {
            s.failed += 1;
        }
        s.min_margin = Some(s.min_margin.map_or(r.margin, |m: f64| m.min(r.margin)));
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut ordered: Vec<PropertySummary> = properties
        .iter()
        .filter(|p| seen.insert(**p))
        .filter_map(|p| per.remove(p))
        .collect();
    ordered.extend(per.into_values());
    CampaignSummary {
        trials: reports.len(),
        passed: reports.iter().filter(|r| r.pass).count(),
        failed: reports.iter().filter(|r| !r.pass).count(),
        properties: ordered,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_campaign() {
        let config = CampaignConfig {
            trials: 0,
            ..CampaignConfig::default()
        };
        let result = fuzz_campaign(&config).unwrap();
        assert!(result.reports.is_empty());
        assert_eq!(result.summary.trials, 0);
        assert_eq!(result.summary.failed, 0);
        assert!(result.summary.properties.iter().all(|p| p.trials == 0 && p.min_margin.is_none()));
        assert!(result.all_passed());
    }

    #[test]
    fn invalid_configs() {
        let base = CampaignConfig::default();
        for config in [
            CampaignConfig { dims: 0..=3, ..base.clone() },
            CampaignConfig { dims: 1..=17, ..base.clone() },
            CampaignConfig { tol: 0.0, ..base.clone() },
            CampaignConfig { nu_range: (0.0, 0.5), ..base.clone() },
            CampaignConfig { cond_cap: 0.5, ..base.clone() },
            CampaignConfig { decompositions: 0, ..base.clone() },
        ] {
            assert!(matches!(fuzz_campaign(&config), Err(CampaignError::InvalidConfig(_))));
        }
    }

    #[test]
    fn reports_are_ordered_and_keyed() {
        let config = CampaignConfig {
            dims: 2..=3,
            trials: 3,
            properties: vec![PropertyId::Symmetry, PropertyId::LambdaFamily, PropertyId::MixedMean],
            ..CampaignConfig::default()
        };
        let result = fuzz_campaign(&config).unwrap();
        assert_eq!(result.reports.len(), 18);
        let keys: Vec<_> = result.reports.iter().map(|r| (r.dim, r.property, r.trial)).collect();
        let mut sorted = keys.clone();
        sorted.sort_by_key(|&(d, p, t)| (d, config.properties.iter().position(|&q| q == p), t));
        assert_eq!(keys, sorted);
        for r in &result.reports {
            assert_eq!(r.lambda.is_some(), r.property.uses_lambda());
            assert_eq!(r.mu.is_some(), r.property.uses_mu());
            assert!(r.pass, "{r:?}");
        }
        // A single cell is reproducible in isolation.
        let again = run_trial(&config, 3, PropertyId::MixedMean, 2);
        assert!(result.reports.contains(&again));
    }

    #[test]
    fn extreme_weights_relax_tolerance() {
        let config = CampaignConfig::default().with_extreme_weights();
        assert_eq!(config.tol, EXTREME_TOL);
        assert_eq!(config.nu_range, EXTREME_NU_RANGE);
        assert!(config.validate().is_ok());
    }
}
