//! Identities and Loewner inequalities satisfied by the weighted
//! contraharmonic mean, each as a predicate that reports its margin.
//!
//! | id              | statement checked                                                    |
//! |-----------------|----------------------------------------------------------------------|
//! | `SYMMETRY`      | `C_nu(a, b) = C_{1-nu}(b, a)`                                         |
//! | `HOMOGENEITY`   | `C_nu(ra, rb) = r C_nu(a, b)`                                         |
//! | `SCALAR_EMBED`  | `C_nu(alpha e, beta e) = C_nu(alpha, beta) e`                         |
//! | `BOUNDS_REMARK` | `0 <= C_nu(a, b) <= A_nu(nu^-1 b, (1-nu)^-1 a)`                       |
//! | `CONVEXITY_MIX` | `C_nu(A_mu(a, b), A_mu(c, d)) <= A_mu(C_nu(a, c), C_nu(b, d))`        |
//! | `CONGRUENCE`    | `C_nu(z^* a z, z^* b z) = z^* C_nu(a, b) z`                           |
//! | `MIXED_MEAN`    | `C_nu(a, A_mu(a, b)) <= A_mu(gamma a, C_nu(a, b))`                    |
//! | `FUNCTIONAL`    | `C_nu(phi(a), phi(b)) <= phi(C_nu(a, b))`                             |
//! | `NORM_LOWER`    | `A_nu(nu^-1 b, (1-nu)^-1 a) - A_nu(alpha^2 a, beta^2 b) <= C_nu(a, b)` |
//! | `LAMBDA_FAMILY` | `(1-nu)^-1 (nu - l^2) a + nu^-1 (2l - l^2 - nu) b <= C_nu(a, b)`      |
//! | `CONTRACTION`   | `A_nu(b, a) = z^* C_nu(a, b) z` with `||z|| <= 1`                     |
//! | `REFINED_UPPER` | `C_nu(a, b) <= A_nu(nu^-1 b, (1-nu)^-1 a) - H_nu(m_a, m_b) e`         |
//!
//! The remaining ids cover the variational characterization itself:
//! `VARIATIONAL` (objective below the mean), `ATTAINMENT` (equality at the
//! witness), `GAP_IDENTITY`, `PRODUCT_IDENTITY` and `SQUARE_IDENTITY`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::means::{
    arithmetic_combination, contraharmonic_mean, equal_args_coefficient, gamma_coefficient, harmonic_mean,
    upper_arithmetic_bound,
};
use crate::order::{compare_equal, loewner_leq, EqualityReport, LoewnerVerdict};
use crate::scalar::{scalar_weighted_mean, MeanKind, ScalarPair, Weight};
use crate::spectral::{eig_hermitian, min_singular_value, op_norm, HermitianPD};

/// Invertibility threshold for congruence factors, relative to `||z||`.
pub const SINGULAR_Z_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropertyId {
    Symmetry,
    Homogeneity,
    ScalarEmbed,
    BoundsRemark,
    ConvexityMix,
    Congruence,
    MixedMean,
    Functional,
    NormLower,
    LambdaFamily,
    Contraction,
    RefinedUpper,
    Variational,
    Attainment,
    GapIdentity,
    ProductIdentity,
    SquareIdentity,
}

impl PropertyId {
    /// The twelve inequality predicates.
    pub const INEQUALITIES: [PropertyId; 12] = [
        PropertyId::Symmetry,
        PropertyId::Homogeneity,
        PropertyId::ScalarEmbed,
        PropertyId::BoundsRemark,
        PropertyId::ConvexityMix,
        PropertyId::Congruence,
        PropertyId::MixedMean,
        PropertyId::Functional,
        PropertyId::NormLower,
        PropertyId::LambdaFamily,
        PropertyId::Contraction,
        PropertyId::RefinedUpper,
    ];

    /// Checks of the variational characterization and its proof.
    pub const VARIATIONAL_IDS: [PropertyId; 5] = [
        PropertyId::Variational,
        PropertyId::Attainment,
        PropertyId::GapIdentity,
        PropertyId::ProductIdentity,
        PropertyId::SquareIdentity,
    ];

    pub fn all() -> Vec<PropertyId> {
        Self::INEQUALITIES.iter().chain(Self::VARIATIONAL_IDS.iter()).copied().collect()
    }

    pub fn name(&self) -> &'static str {
        match self {
            PropertyId::Symmetry => "SYMMETRY",
            PropertyId::Homogeneity => "HOMOGENEITY",
            PropertyId::ScalarEmbed => "SCALAR_EMBED",
            PropertyId::BoundsRemark => "BOUNDS_REMARK",
            PropertyId::ConvexityMix => "CONVEXITY_MIX",
            PropertyId::Congruence => "CONGRUENCE",
            PropertyId::MixedMean => "MIXED_MEAN",
            PropertyId::Functional => "FUNCTIONAL",
            PropertyId::NormLower => "NORM_LOWER",
            PropertyId::LambdaFamily => "LAMBDA_FAMILY",
            PropertyId::Contraction => "CONTRACTION",
            PropertyId::RefinedUpper => "REFINED_UPPER",
            PropertyId::Variational => "VARIATIONAL",
            PropertyId::Attainment => "ATTAINMENT",
            PropertyId::GapIdentity => "GAP_IDENTITY",
            PropertyId::ProductIdentity => "PRODUCT_IDENTITY",
            PropertyId::SquareIdentity => "SQUARE_IDENTITY",
        }
    }

    /// Index used to key per-property random streams.
    pub fn index(&self) -> u64 {
        *self as u64
    }

    pub fn uses_mu(&self) -> bool {
        matches!(self, PropertyId::ConvexityMix | PropertyId::MixedMean)
    }

    pub fn uses_lambda(&self) -> bool {
        matches!(self, PropertyId::LambdaFamily)
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PropertyId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        PropertyId::all()
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown property '{s}'"))
    }
}

impl Serialize for PropertyId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

pub fn check_symmetry(nu: Weight, a: &HermitianPD, b: &HermitianPD, tol: f64) -> Result<EqualityReport> {
    let left = contraharmonic_mean(nu, a, b)?;
    let right = contraharmonic_mean(nu.complement(), b, a)?;
    compare_equal(left.matrix(), right.matrix(), tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomogeneityReport {
    pub homogeneity: EqualityReport,
    pub embedding: EqualityReport,
}

/// `C_nu(ra, rb) = r C_nu(a, b)` and `C_nu(alpha e, beta e) = C_nu(alpha, beta) e`,
/// the latter in the dimension of `a`.
pub fn check_homogeneity_and_embedding(
    nu: Weight,
    a: &HermitianPD,
    b: &HermitianPD,
    r: f64,
    alpha: f64,
    beta: f64,
    tol: f64,
) -> Result<HomogeneityReport> {
    let pair = ScalarPair::new(alpha, beta)?;
    ScalarPair::new(r, r)?;
    let scaled = contraharmonic_mean(
        nu,
        &HermitianPD::new(a.matrix().scale(r))?,
        &HermitianPD::new(b.matrix().scale(r))?,
    )?;
    let base = contraharmonic_mean(nu, a, b)?;
    let homogeneity = compare_equal(scaled.matrix(), &base.matrix().scale(r), tol)?;

    let n = a.n();
    let embedded = contraharmonic_mean(nu, &HermitianPD::scalar(n, alpha)?, &HermitianPD::scalar(n, beta)?)?;
    let expected = ComplexMatrix::scalar(n, scalar_weighted_mean(MeanKind::Contraharmonic, nu, pair));
    let embedding = compare_equal(embedded.matrix(), &expected, tol)?;
    Ok(HomogeneityReport { homogeneity, embedding })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsReport {
    /// `0 <= C_nu(a, b)`.
    pub lower: LoewnerVerdict,
    /// `C_nu(a, b) <= A_nu(nu^-1 b, (1-nu)^-1 a)`.
    pub upper: LoewnerVerdict,
}

pub fn check_bounds_remark(nu: Weight, a: &HermitianPD, b: &HermitianPD, tol: f64) -> Result<BoundsReport> {
    let c = contraharmonic_mean(nu, a, b)?;
    let zero = ComplexMatrix::zeros(a.n());
    Ok(BoundsReport {
        lower: loewner_leq(&zero, c.matrix(), tol)?,
        upper: loewner_leq(c.matrix(), &upper_arithmetic_bound(nu, a, b), tol)?,
    })
}

/// `C_nu(A_mu(a, b), A_mu(c, d)) <= A_mu(C_nu(a, c), C_nu(b, d))`.
pub fn check_convexity_mix(
    nu: Weight,
    mu: Weight,
    a: &HermitianPD,
    b: &HermitianPD,
    c: &HermitianPD,
    d: &HermitianPD,
    tol: f64,
) -> Result<LoewnerVerdict> {
    a.check_same_dim(b)?;
    a.check_same_dim(c)?;
    a.check_same_dim(d)?;
    let mix_ab = HermitianPD::new(arithmetic_combination(mu, a.matrix(), b.matrix()))?;
    let mix_cd = HermitianPD::new(arithmetic_combination(mu, c.matrix(), d.matrix()))?;
    let lhs = contraharmonic_mean(nu, &mix_ab, &mix_cd)?;
    let c_ac = contraharmonic_mean(nu, a, c)?;
    let c_bd = contraharmonic_mean(nu, b, d)?;
    let rhs = arithmetic_combination(mu, c_ac.matrix(), c_bd.matrix());
    loewner_leq(lhs.matrix(), &rhs, tol)
}

/// `C_nu(z^* a z, z^* b z) = z^* C_nu(a, b) z` for invertible `z`.
pub fn check_congruence(
    nu: Weight,
    a: &HermitianPD,
    b: &HermitianPD,
    z: &ComplexMatrix,
    tol: f64,
) -> Result<EqualityReport> {
    a.check_same_dim(b)?;
    a.matrix().check_same_dim(z)?;
    let ratio = min_singular_value(z) / op_norm(z);
    if !(ratio > SINGULAR_Z_TOL) {
        return Err(Error::SingularZ { ratio });
    }
    let za = HermitianPD::new(a.matrix().sandwich(z))?;
    let zb = HermitianPD::new(b.matrix().sandwich(z))?;
    let lhs = contraharmonic_mean(nu, &za, &zb)?;
    let rhs = contraharmonic_mean(nu, a, b)?.matrix().sandwich(z);
    compare_equal(lhs.matrix(), &rhs, tol)
}

/// `C_nu(a, A_mu(a, b)) <= A_mu(gamma a, C_nu(a, b))`.
pub fn check_mixed_mean(nu: Weight, mu: Weight, a: &HermitianPD, b: &HermitianPD, tol: f64) -> Result<LoewnerVerdict> {
    a.check_same_dim(b)?;
    let mix = HermitianPD::new(arithmetic_combination(mu, a.matrix(), b.matrix()))?;
    let lhs = contraharmonic_mean(nu, a, &mix)?;
    let c = contraharmonic_mean(nu, a, b)?;
    let rhs = arithmetic_combination(mu, &a.matrix().scale(gamma_coefficient(nu)), c.matrix());
    loewner_leq(lhs.matrix(), &rhs, tol)
}

/// A positive linear functional `x -> trace(weight * x)` with `weight >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveFunctional {
    weight: ComplexMatrix,
}

impl PositiveFunctional {
    pub fn new(weight: ComplexMatrix) -> Result<Self> {
        let spectral = eig_hermitian(&weight)?;
        let scale = spectral.spectral_radius().max(f64::MIN_POSITIVE);
        if spectral.min_eigenvalue() < -1e-12 * scale {
            return Err(Error::NotPositiveSemidefinite(spectral.min_eigenvalue()));
        }
        if !(weight.trace().re > 0.0) {
            return Err(Error::ZeroFunctional);
        }
        Ok(Self { weight })
    }

    pub fn trace(n: usize) -> Self {
        Self {
            weight: ComplexMatrix::identity(n),
        }
    }

    /// `x -> <v, x v>`.
    pub fn vector_state(v: &[C64]) -> Result<Self> {
        let n = v.len();
        Self::new(ComplexMatrix::from_fn(n, |i, j| v[i] * v[j].conj()))
    }

    pub fn weight(&self) -> &ComplexMatrix {
        &self.weight
    }

    pub fn apply(&self, x: &ComplexMatrix) -> f64 {
        (&self.weight * x).trace().re
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarInequality {
    pub lhs: f64,
    pub rhs: f64,
    /// `(rhs - lhs) / max(1, |lhs|, |rhs|)`.
    pub margin: f64,
    pub holds: bool,
}

impl ScalarInequality {
    pub fn new(lhs: f64, rhs: f64, tol: f64) -> Self {
        let margin = (rhs - lhs) / 1f64.max(lhs.abs()).max(rhs.abs());
        Self {
            lhs,
            rhs,
            margin,
            holds: margin >= -tol,
        }
    }
}

/// `C_nu(phi(a), phi(b)) <= phi(C_nu(a, b))`.
pub fn check_functional(
    nu: Weight,
    a: &HermitianPD,
    b: &HermitianPD,
    phi: &PositiveFunctional,
    tol: f64,
) -> Result<ScalarInequality> {
    a.check_same_dim(b)?;
    a.matrix().check_same_dim(phi.weight())?;
    let pair = ScalarPair::new(phi.apply(a.matrix()), phi.apply(b.matrix()))?;
    let lhs = scalar_weighted_mean(MeanKind::Contraharmonic, nu, pair);
    let rhs = phi.apply(contraharmonic_mean(nu, a, b)?.matrix());
    Ok(ScalarInequality::new(lhs, rhs, tol))
}

/// Coefficients `alpha = ||b|| / A_nu(||b||, ||a||)` and
/// `beta = ||a|| / A_nu(||b||, ||a||)`, which satisfy
/// `(1 - nu) alpha + nu beta = 1`.
pub fn norm_lower_coefficients(nu: Weight, a: &HermitianPD, b: &HermitianPD) -> (f64, f64) {
    let v = nu.value();
    let (na, nb) = (a.norm(), b.norm());
    let mean = (1.0 - v) * nb + v * na;
    (nb / mean, na / mean)
}

/// `|(1 - nu) alpha + nu beta - 1|` when `beta` is taken equal to `alpha`,
/// which the normalization `(1 - nu) alpha + nu beta = 1` needs to be zero
/// for the bound to follow. Non-zero whenever `||a|| != ||b||`.
pub fn norm_lower_equal_coefficient_defect(nu: Weight, a: &HermitianPD, b: &HermitianPD) -> f64 {
    let v = nu.value();
    let (alpha, _) = norm_lower_coefficients(nu, a, b);
    ((1.0 - v) * alpha + v * alpha - 1.0).abs()
}

/// `A_nu(nu^-1 b, (1-nu)^-1 a) - A_nu(alpha^2 a, beta^2 b) <= C_nu(a, b)`.
pub fn check_norm_lower_bound(nu: Weight, a: &HermitianPD, b: &HermitianPD, tol: f64) -> Result<LoewnerVerdict> {
    a.check_same_dim(b)?;
    let (alpha, beta) = norm_lower_coefficients(nu, a, b);
    let subtracted = arithmetic_combination(nu, &a.matrix().scale(alpha * alpha), &b.matrix().scale(beta * beta));
    let lhs = &upper_arithmetic_bound(nu, a, b) - &subtracted;
    let c = contraharmonic_mean(nu, a, b)?;
    loewner_leq(&lhs, c.matrix(), tol)
}

/// Coefficients of `a` and `b` in the lower bound indexed by `lambda`.
pub fn lambda_coefficients(nu: Weight, lambda: f64) -> (f64, f64) {
    let v = nu.value();
    (
        (v - lambda * lambda) / (1.0 - v),
        (2.0 * lambda - lambda * lambda - v) / v,
    )
}

/// Returns `L(lambda) = (1-nu)^-1 (nu - lambda^2) a + nu^-1 (2 lambda - lambda^2 - nu) b`
/// and the verdict `L(lambda) <= C_nu(a, b)`.
pub fn lambda_lower_bound(
    nu: Weight,
    lambda: f64,
    a: &HermitianPD,
    b: &HermitianPD,
    tol: f64,
) -> Result<(ComplexMatrix, LoewnerVerdict)> {
    let lambda = Weight::closed(lambda)?.value();
    a.check_same_dim(b)?;
    let (ca, cb) = lambda_coefficients(nu, lambda);
    let bound = &a.matrix().scale(ca) + &b.matrix().scale(cb);
    let c = contraharmonic_mean(nu, a, b)?;
    let verdict = loewner_leq(&bound, c.matrix(), tol)?;
    Ok((bound, verdict))
}

/// `z = C_nu(a, b)^{-1/2} A_nu(b, a)^{1/2}`, a contraction with
/// `z^* C_nu(a, b) z = A_nu(b, a)`.
pub fn contraction_witness(nu: Weight, a: &HermitianPD, b: &HermitianPD) -> Result<ComplexMatrix> {
    let c = contraharmonic_mean(nu, a, b)?;
    let reversed = HermitianPD::new(arithmetic_combination(nu, b.matrix(), a.matrix()))?;
    Ok(&c.inv_sqrt() * &reversed.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionReport {
    pub norm: f64,
    pub reconstruction: EqualityReport,
    /// `min(1 - ||z||, -reconstruction residual)`.
    pub margin: f64,
    pub holds: bool,
}

pub fn check_contraction(nu: Weight, a: &HermitianPD, b: &HermitianPD, tol: f64) -> Result<ContractionReport> {
    let z = contraction_witness(nu, a, b)?;
    let c = contraharmonic_mean(nu, a, b)?;
    let target = arithmetic_combination(nu, b.matrix(), a.matrix());
    let reconstruction = compare_equal(&c.matrix().sandwich(&z), &target, tol)?;
    let norm = op_norm(&z);
    let margin = (1.0 - norm).min(reconstruction.margin());
    Ok(ContractionReport {
        norm,
        reconstruction,
        margin,
        holds: margin >= -tol,
    })
}

/// `C_nu(a, b) <= A_nu(nu^-1 b, (1-nu)^-1 a) - H_nu(||a^-1||^-1, ||b^-1||^-1) e`.
pub fn check_refined_upper(nu: Weight, a: &HermitianPD, b: &HermitianPD, tol: f64) -> Result<LoewnerVerdict> {
    a.check_same_dim(b)?;
    let pair = ScalarPair::new(a.min_eigenvalue(), b.min_eigenvalue())?;
    let shift = scalar_weighted_mean(MeanKind::Harmonic, nu, pair);
    let rhs = upper_arithmetic_bound(nu, a, b).add_identity(-shift);
    let c = contraharmonic_mean(nu, a, b)?;
    loewner_leq(c.matrix(), &rhs, tol)
}

/// `C_nu(a, a)` against `equal_args_coefficient(nu) * a`.
pub fn check_equal_arguments(nu: Weight, a: &HermitianPD, tol: f64) -> Result<EqualityReport> {
    let c = contraharmonic_mean(nu, a, a)?;
    compare_equal(c.matrix(), &a.matrix().scale(equal_args_coefficient(nu)), tol)
}

/// `H_nu(a, b) <= (1-nu)^-1 a` and `H_nu(a, b) <= nu^-1 b`.
pub fn check_harmonic_bounds(nu: Weight, a: &HermitianPD, b: &HermitianPD, tol: f64) -> Result<LoewnerVerdict> {
    let v = nu.value();
    let h = harmonic_mean(nu, a, b)?;
    let first = loewner_leq(h.matrix(), &a.matrix().scale(1.0 / (1.0 - v)), tol)?;
    let second = loewner_leq(h.matrix(), &b.matrix().scale(1.0 / v), tol)?;
    Ok(LoewnerVerdict::weakest(&[first, second], tol))
}
