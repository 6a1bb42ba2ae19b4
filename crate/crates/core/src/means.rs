//! Weighted operator means, the contraharmonic mean's variational objective,
//! the maximizing decomposition, and the algebraic identities behind it.
//!
//! Every inverse, root and power is taken through the spectral
//! decomposition carried by [`HermitianPD`].

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::order::{relative_residual, EqualityReport};
use crate::scalar::{MeanKind, Weight};
use crate::spectral::{op_norm, HermitianPD};

/// Tolerance on `x + y = e` for caller-supplied decompositions.
pub const DECOMPOSITION_TOL: f64 = 1e-10;

/// Validated inputs of a weighted mean.
#[derive(Debug, Clone)]
pub struct MeanParams {
    pub nu: Weight,
    pub a: HermitianPD,
    pub b: HermitianPD,
}

impl MeanParams {
    pub fn new(nu: Weight, a: HermitianPD, b: HermitianPD) -> Result<Self> {
        a.check_same_dim(&b)?;
        Ok(Self { nu, a, b })
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }
}

/// `nu^-1 (1 - nu)`, the ratio that recurs throughout.
fn odds(nu: Weight) -> f64 {
    (1.0 - nu.value()) / nu.value()
}

pub fn arithmetic_mean(nu: Weight, a: &HermitianPD, b: &HermitianPD) -> Result<HermitianPD> {
    a.check_same_dim(b)?;
    HermitianPD::new(arithmetic_combination(nu, a.matrix(), b.matrix()))
}

/// `(1 - nu) a + nu b` for arbitrary matrices.
pub fn arithmetic_combination(nu: Weight, a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let v = nu.value();
    &a.scale(1.0 - v) + &b.scale(v)
}

pub fn harmonic_mean(nu: Weight, a: &HermitianPD, b: &HermitianPD) -> Result<HermitianPD> {
    a.check_same_dim(b)?;
    let v = nu.value();
    let inner = HermitianPD::new(&a.inverse().scale(1.0 - v) + &b.inverse().scale(v))?;
    HermitianPD::new(inner.inverse())
}

pub fn geometric_mean(nu: Weight, a: &HermitianPD, b: &HermitianPD) -> Result<HermitianPD> {
    a.check_same_dim(b)?;
    let ratio = HermitianPD::new(b.matrix().sandwich(&a.inv_sqrt()))?;
    HermitianPD::new(ratio.powf(nu.value()).sandwich(&a.sqrt()))
}

/// `(1 - nu) nu^-1 b + nu (1 - nu)^-1 a - H_nu(a, b)`.
pub fn contraharmonic_mean(nu: Weight, a: &HermitianPD, b: &HermitianPD) -> Result<HermitianPD> {
    let h = harmonic_mean(nu, a, b)?;
    HermitianPD::new(&upper_arithmetic_bound(nu, a, b) - h.matrix())
}

/// `A_nu(nu^-1 b, (1 - nu)^-1 a) = (1 - nu) nu^-1 b + nu (1 - nu)^-1 a`.
pub fn upper_arithmetic_bound(nu: Weight, a: &HermitianPD, b: &HermitianPD) -> ComplexMatrix {
    let v = nu.value();
    &b.matrix().scale(odds(nu)) + &a.matrix().scale(v / (1.0 - v))
}

pub fn operator_mean(kind: MeanKind, nu: Weight, a: &HermitianPD, b: &HermitianPD) -> Result<HermitianPD> {
    match kind {
        MeanKind::Arithmetic => arithmetic_mean(nu, a, b),
        MeanKind::Harmonic => harmonic_mean(nu, a, b),
        MeanKind::Geometric => geometric_mean(nu, a, b),
        MeanKind::Contraharmonic => contraharmonic_mean(nu, a, b),
    }
}

/// `C_nu(a, a) = coefficient * a`, i.e. `(3 nu^2 - 3 nu + 1) / (nu - nu^2)`.
pub fn equal_args_coefficient(nu: Weight) -> f64 {
    let v = nu.value();
    (3.0 * v * v - 3.0 * v + 1.0) / (v - v * v)
}

/// `(2 nu^2 - 2 nu + 1) / (nu - nu^2)`.
pub fn gamma_coefficient(nu: Weight) -> f64 {
    let v = nu.value();
    (2.0 * v * v - 2.0 * v + 1.0) / (v - v * v)
}

/// The decomposition `z + w = e` at which the objective attains the mean.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessPair {
    pub z: ComplexMatrix,
    pub w: ComplexMatrix,
}

/// A pair `x + y = e`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
}

impl Decomposition {
    /// `y = e - x`, so the constraint holds exactly.
    pub fn from_x(x: ComplexMatrix) -> Self {
        let y = &ComplexMatrix::identity(x.n()) - &x;
        Self { x, y }
    }

    pub fn new(x: ComplexMatrix, y: ComplexMatrix) -> Result<Self> {
        x.check_same_dim(&y)?;
        let residual = constraint_residual(&x, &y);
        if residual <= DECOMPOSITION_TOL {
            Ok(Self { x, y })
        } else {
            Err(Error::DecompositionInvalid { residual })
        }
    }

    pub fn n(&self) -> usize {
        self.x.n()
    }
}

impl From<WitnessPair> for Decomposition {
    fn from(p: WitnessPair) -> Self {
        Self { x: p.z, y: p.w }
    }
}

/// `||x + y - e|| / max(1, ||x||, ||y||)`.
pub fn constraint_residual(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    let defect = (x + y).add_identity(-1.0);
    op_norm(&defect) / 1f64.max(op_norm(x)).max(op_norm(y))
}

/// `z = nu^-1 (1 - nu) (a + nu^-1 (1 - nu) b)^-1 b`, `w = (a + nu^-1 (1 - nu) b)^-1 a`.
pub fn witness_pair(nu: Weight, a: &HermitianPD, b: &HermitianPD) -> Result<WitnessPair> {
    a.check_same_dim(b)?;
    let k = odds(nu);
    let pencil = pencil(k, a, b)?;
    let z = pencil.solve(b.matrix())?.scale(k);
    let w = pencil.solve(a.matrix())?;
    Ok(WitnessPair { z, w })
}

/// `a + k b`.
fn pencil(k: f64, a: &HermitianPD, b: &HermitianPD) -> Result<HermitianPD> {
    HermitianPD::new(a.matrix() + &b.matrix().scale(k))
}

fn check_decomposition(a: &HermitianPD, b: &HermitianPD, d: &Decomposition) -> Result<()> {
    a.check_same_dim(b)?;
    a.matrix().check_same_dim(&d.x)?;
    d.x.check_same_dim(&d.y)?;
    let residual = constraint_residual(&d.x, &d.y);
    if residual <= DECOMPOSITION_TOL {
        Ok(())
    } else {
        Err(Error::DecompositionInvalid { residual })
    }
}

/// `(1 - nu)^-1 (nu a - x^* a x) + nu^-1 ((1 - nu) b - y^* b y)`. Hermitian,
/// not necessarily positive.
pub fn objective(nu: Weight, a: &HermitianPD, b: &HermitianPD, d: &Decomposition) -> Result<ComplexMatrix> {
    check_decomposition(a, b, d)?;
    Ok(objective_terms(nu, a, b, d).value())
}

/// The objective split into its constant part and the two quadratic terms,
/// all scaled: `value = constant - x_term - y_term`.
#[derive(Debug, Clone)]
pub struct ObjectiveTerms {
    pub constant: ComplexMatrix,
    pub x_term: ComplexMatrix,
    pub y_term: ComplexMatrix,
}

impl ObjectiveTerms {
    pub fn value(&self) -> ComplexMatrix {
        &(&self.constant - &self.x_term) - &self.y_term
    }

    /// Largest operator norm among the terms that are summed.
    pub fn scale(&self) -> f64 {
        op_norm(&self.constant).max(op_norm(&self.x_term)).max(op_norm(&self.y_term))
    }
}

pub fn objective_terms(nu: Weight, a: &HermitianPD, b: &HermitianPD, d: &Decomposition) -> ObjectiveTerms {
    let v = nu.value();
    ObjectiveTerms {
        constant: upper_arithmetic_bound(nu, a, b),
        x_term: a.matrix().sandwich(&d.x).scale(1.0 / (1.0 - v)),
        y_term: b.matrix().sandwich(&d.y).scale(1.0 / v),
    }
}

/// `r = nu^-1 (1 - nu) a^{-1/2} b a^{-1/2}`.
fn scaled_ratio(nu: Weight, a: &HermitianPD, b: &HermitianPD) -> Result<HermitianPD> {
    HermitianPD::new(b.matrix().sandwich(&a.inv_sqrt()).scale(odds(nu)))
}

/// `h = (e + r)^{1/2} a^{1/2} x a^{-1/2} - r (e + r)^{-1/2}` with `r` as in
/// [`scaled_ratio`]. It vanishes exactly at the witness decomposition.
pub fn residual_h(nu: Weight, a: &HermitianPD, b: &HermitianPD, d: &Decomposition) -> Result<ComplexMatrix> {
    check_decomposition(a, b, d)?;
    let r = scaled_ratio(nu, a, b)?;
    let shifted = HermitianPD::new(r.matrix().add_identity(1.0))?;
    let conj_x = &(&a.sqrt() * &d.x) * &a.inv_sqrt();
    Ok(&(&shifted.sqrt() * &conj_x) - &(r.matrix() * &shifted.inv_sqrt()))
}

/// Both sides of `C_nu(a, b) - objective(x) = (1 - nu)^-1 a^{1/2} h^* h a^{1/2}`.
#[derive(Debug, Clone)]
pub struct GapIdentity {
    pub gap: ComplexMatrix,
    pub h_form: ComplexMatrix,
    /// Largest operator norm among the summands forming `gap`.
    pub scale: f64,
}

impl GapIdentity {
    /// `||gap - h_form|| / max(1, scale, ||gap||, ||h_form||)`.
    pub fn residual(&self) -> f64 {
        let denom = 1f64
            .max(self.scale)
            .max(op_norm(&self.gap))
            .max(op_norm(&self.h_form));
        op_norm(&(&self.gap - &self.h_form)) / denom
    }

    pub fn report(&self, tol: f64) -> EqualityReport {
        EqualityReport::from_residual(self.residual(), tol)
    }
}

pub fn gap_identity(nu: Weight, a: &HermitianPD, b: &HermitianPD, d: &Decomposition) -> Result<GapIdentity> {
    let h = residual_h(nu, a, b, d)?;
    let c = contraharmonic_mean(nu, a, b)?;
    let terms = objective_terms(nu, a, b, d);
    let gap = c.matrix() - &terms.value();
    let h_form = ComplexMatrix::identity(a.n())
        .sandwich(&(&h * &a.sqrt()))
        .scale(1.0 / (1.0 - nu.value()));
    let scale = terms.scale().max(op_norm(c.matrix()));
    Ok(GapIdentity { gap, h_form, scale })
}

/// `a (a + nu^-1 (1 - nu) b)^-1 b = nu H_nu(a, b) = b (a + nu^-1 (1 - nu) b)^-1 a`.
pub fn check_product_identity(nu: Weight, a: &HermitianPD, b: &HermitianPD, tol: f64) -> Result<EqualityReport> {
    a.check_same_dim(b)?;
    let pencil = pencil(odds(nu), a, b)?;
    let target = harmonic_mean(nu, a, b)?.matrix().scale(nu.value());
    let left = a.matrix() * &pencil.solve(b.matrix())?;
    let right = b.matrix() * &pencil.solve(a.matrix())?;
    let residual = relative_residual(&left, &target).max(relative_residual(&right, &target));
    Ok(EqualityReport::from_residual(residual, tol))
}

/// `r - (e + nu (1 - nu)^-1 a^{1/2} b^-1 a^{1/2})^-1 = (e + r)^{-1/2} r^2 (e + r)^{-1/2}`.
pub fn check_square_identity(nu: Weight, a: &HermitianPD, b: &HermitianPD, tol: f64) -> Result<EqualityReport> {
    a.check_same_dim(b)?;
    let v = nu.value();
    let r = scaled_ratio(nu, a, b)?;
    let inv_ratio = b.inverse().sandwich(&a.sqrt()).scale(v / (1.0 - v));
    let left = r.matrix() - &HermitianPD::new(inv_ratio.add_identity(1.0))?.inverse();
    // The factors commute, so the right side is t^2 / (1 + t) applied to r.
    let right = r.apply(|t| t * t / (1.0 + t))?;
    Ok(EqualityReport::from_residual(relative_residual(&left, &right), tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::C64;
    use crate::order::DEFAULT_TOL;

    fn w(v: f64) -> Weight {
        Weight::new(v).unwrap()
    }

    fn s(x: f64) -> HermitianPD {
        HermitianPD::diag(&[x]).unwrap()
    }

    fn val(m: &ComplexMatrix) -> f64 {
        m[(0, 0)].re
    }

    fn sample_pair() -> (HermitianPD, HermitianPD) {
        let a = HermitianPD::new(
            ComplexMatrix::new(
                2,
                vec![C64::new(2.0, 0.0), C64::new(0.5, 0.3), C64::new(0.5, -0.3), C64::new(1.0, 0.0)],
            )
            .unwrap(),
        )
        .unwrap();
        let b = HermitianPD::new(ComplexMatrix::from_real_rows(&[vec![3.0, -1.0], vec![-1.0, 4.0]]).unwrap()).unwrap();
        (a, b)
    }

    #[test]
    fn arithmetic_examples() {
        assert!((val(arithmetic_mean(w(0.25), &s(4.0), &s(8.0)).unwrap().matrix()) - 5.0).abs() < 1e-15);
        let d = arithmetic_mean(
            w(0.5),
            &HermitianPD::diag(&[1.0, 3.0]).unwrap(),
            &HermitianPD::diag(&[3.0, 1.0]).unwrap(),
        )
        .unwrap();
        assert_eq!(d.matrix(), &ComplexMatrix::diag(&[2.0, 2.0]));
    }

    #[test]
    fn harmonic_and_geometric_examples() {
        assert!((val(harmonic_mean(w(0.5), &s(1.0), &s(3.0)).unwrap().matrix()) - 1.5).abs() < 1e-15);
        assert!((val(harmonic_mean(w(1.0 / 3.0), &s(1.0), &s(2.0)).unwrap().matrix()) - 1.2).abs() < 1e-15);
        assert!((val(geometric_mean(w(0.5), &s(1.0), &s(9.0)).unwrap().matrix()) - 3.0).abs() < 1e-15);
        assert!((val(geometric_mean(w(1.0 / 3.0), &s(1.0), &s(8.0)).unwrap().matrix()) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn equal_arguments_collapse() {
        let (a, _) = sample_pair();
        for v in [0.2, 0.5, 0.9] {
            for kind in [MeanKind::Arithmetic, MeanKind::Harmonic, MeanKind::Geometric] {
                let m = operator_mean(kind, w(v), &a, &a).unwrap();
                assert!(relative_residual(m.matrix(), a.matrix()) < 1e-14, "{kind} at {v}");
            }
        }
    }

    #[test]
    fn contraharmonic_examples() {
        assert!((val(contraharmonic_mean(w(0.5), &s(1.0), &s(3.0)).unwrap().matrix()) - 2.5).abs() < 1e-15);
        let (a, _) = sample_pair();
        let c = contraharmonic_mean(w(1.0 / 3.0), &a, &a).unwrap();
        assert!(relative_residual(c.matrix(), &a.matrix().scale(1.5)) < 1e-14);
        let c = contraharmonic_mean(
            w(0.5),
            &HermitianPD::diag(&[1.0, 3.0]).unwrap(),
            &HermitianPD::diag(&[3.0, 1.0]).unwrap(),
        )
        .unwrap();
        assert!(relative_residual(c.matrix(), &ComplexMatrix::diag(&[2.5, 2.5])) < 1e-15);
    }

    #[test]
    fn coefficients() {
        assert!((equal_args_coefficient(w(0.5)) - 1.0).abs() < 1e-15);
        assert!((equal_args_coefficient(w(1.0 / 3.0)) - 1.5).abs() < 1e-14);
        assert!((equal_args_coefficient(w(2.0 / 3.0)) - 1.5).abs() < 1e-14);
        assert!((gamma_coefficient(w(0.5)) - 2.0).abs() < 1e-15);
        assert!((gamma_coefficient(w(1.0 / 3.0)) - 2.5).abs() < 1e-14);
        assert!((gamma_coefficient(w(2.0 / 3.0)) - 2.5).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch() {
        let a = HermitianPD::scalar(2, 1.0).unwrap();
        let b = HermitianPD::scalar(3, 1.0).unwrap();
        assert_eq!(
            contraharmonic_mean(w(0.5), &a, &b).unwrap_err(),
            Error::DimensionMismatch { left: 2, right: 3 }
        );
        assert!(witness_pair(w(0.5), &a, &b).is_err());
        assert!(MeanParams::new(w(0.5), a, b).is_err());
    }

    #[test]
    fn witness_examples() {
        let p = witness_pair(w(0.5), &s(1.0), &s(3.0)).unwrap();
        assert!((val(&p.z) - 0.75).abs() < 1e-15);
        assert!((val(&p.w) - 0.25).abs() < 1e-15);
        let (a, _) = sample_pair();
        let p = witness_pair(w(0.3), &a, &a).unwrap();
        assert!(relative_residual(&p.z, &ComplexMatrix::scalar(2, 0.7)) < 1e-14);
        assert!(relative_residual(&p.w, &ComplexMatrix::scalar(2, 0.3)) < 1e-14);
        let p = witness_pair(w(0.5), &a, &a).unwrap();
        assert!(relative_residual(&p.z, &ComplexMatrix::scalar(2, 0.5)) < 1e-14);
        assert!(relative_residual(&p.z, &p.w) < 1e-14);
    }

    #[test]
    fn objective_examples() {
        let (a1, b1) = (s(1.0), s(3.0));
        let at_witness = objective(w(0.5), &a1, &b1, &Decomposition::from_x(ComplexMatrix::scalar(1, 0.75))).unwrap();
        assert!((val(&at_witness) - 2.5).abs() < 1e-15);
        let midpoint = objective(w(0.5), &a1, &b1, &Decomposition::from_x(ComplexMatrix::scalar(1, 0.5))).unwrap();
        assert!((val(&midpoint) - 2.0).abs() < 1e-15);

        let (a, b) = sample_pair();
        let nu = w(0.4);
        let boundary = objective(nu, &a, &b, &Decomposition::from_x(ComplexMatrix::identity(2))).unwrap();
        let expected = &b.matrix().scale(0.6 / 0.4) - a.matrix();
        assert!(relative_residual(&boundary, &expected) < 1e-14);
    }

    #[test]
    fn invalid_decomposition_is_rejected() {
        let (a, b) = sample_pair();
        let bad = Decomposition {
            x: ComplexMatrix::identity(2),
            y: ComplexMatrix::scalar(2, 0.5),
        };
        assert!(matches!(objective(w(0.5), &a, &b, &bad), Err(Error::DecompositionInvalid { .. })));
        assert!(residual_h(w(0.5), &a, &b, &bad).is_err());
        assert!(Decomposition::new(ComplexMatrix::identity(2), ComplexMatrix::identity(2)).is_err());
        assert!(Decomposition::new(ComplexMatrix::scalar(2, 0.25), ComplexMatrix::scalar(2, 0.75)).is_ok());
    }

    #[test]
    fn witness_attains_mean_and_zeroes_h() {
        let (a, b) = sample_pair();
        for v in [0.1, 0.35, 0.5, 0.8] {
            let nu = w(v);
            let d: Decomposition = witness_pair(nu, &a, &b).unwrap().into();
            assert!(constraint_residual(&d.x, &d.y) < 1e-14);
            let c = contraharmonic_mean(nu, &a, &b).unwrap();
            let f = objective(nu, &a, &b, &d).unwrap();
            assert!(relative_residual(&f, c.matrix()) < 1e-12);
            let h = residual_h(nu, &a, &b, &d).unwrap();
            assert!(op_norm(&h) < 1e-12);
        }
    }

    #[test]
    fn residual_h_scalar_value() {
        let h = residual_h(w(0.5), &s(1.0), &s(3.0), &Decomposition::from_x(ComplexMatrix::scalar(1, 0.5))).unwrap();
        assert!((h[(0, 0)].norm() - 0.5).abs() < 1e-15);
        let (a, _) = sample_pair();
        let h = residual_h(w(0.3), &a, &a, &Decomposition::from_x(ComplexMatrix::scalar(2, 0.7))).unwrap();
        assert!(op_norm(&h) < 1e-14);
    }

    #[test]
    fn gap_identity_on_arbitrary_x() {
        let (a, b) = sample_pair();
        let x = ComplexMatrix::new(
            2,
            vec![C64::new(0.3, -0.2), C64::new(1.1, 0.4), C64::new(-0.7, 0.0), C64::new(0.2, 0.9)],
        )
        .unwrap();
        let g = gap_identity(w(0.3), &a, &b, &Decomposition::from_x(x)).unwrap();
        assert!(g.residual() < 1e-13, "{}", g.residual());
    }

    #[test]
    fn proof_identities() {
        let r = check_product_identity(w(0.5), &s(1.0), &s(3.0), DEFAULT_TOL).unwrap();
        assert!(r.holds && r.residual < 1e-15);
        let r = check_square_identity(w(1.0 / 3.0), &s(1.0), &s(2.0), DEFAULT_TOL).unwrap();
        assert!(r.holds && r.residual < 1e-14);
        let (a, b) = sample_pair();
        for v in [0.3, 0.5, 0.7] {
            assert!(check_product_identity(w(v), &a, &b, DEFAULT_TOL).unwrap().residual < 1e-13);
            assert!(check_square_identity(w(v), &a, &b, DEFAULT_TOL).unwrap().residual < 1e-13);
            assert!(check_square_identity(w(v), &a, &a, DEFAULT_TOL).unwrap().residual < 1e-14);
        }
    }
}
