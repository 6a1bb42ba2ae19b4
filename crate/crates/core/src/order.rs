//! Loewner-order comparison and equality reports with scale-normalized margins.

use serde::Serialize;

use crate::error::Result;
use crate::matrix::ComplexMatrix;
use crate::spectral::{check_hermitian, eig_hermitian, op_norm};

/// Pass/fail threshold shared by every order and equality check.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Outcome of `lhs <= rhs`: the margin is the smallest eigenvalue of
/// `rhs - lhs` divided by `max(1, ||lhs||, ||rhs||)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoewnerVerdict {
    pub holds: bool,
    pub margin: f64,
}

impl LoewnerVerdict {
    pub fn from_margin(margin: f64, tol: f64) -> Self {
        Self {
            holds: margin >= -tol,
            margin,
        }
    }

    /// Combines several verdicts into the weakest one.
    pub fn weakest(verdicts: &[LoewnerVerdict], tol: f64) -> Self {
        let margin = verdicts.iter().map(|v| v.margin).fold(f64::INFINITY, f64::min);
        Self::from_margin(margin, tol)
    }
}

pub fn loewner_leq(lhs: &ComplexMatrix, rhs: &ComplexMatrix, tol: f64) -> Result<LoewnerVerdict> {
    lhs.check_same_dim(rhs)?;
    check_hermitian(lhs)?;
    check_hermitian(rhs)?;
    let gap = eig_hermitian(&(rhs - lhs))?;
    let scale = 1f64.max(op_norm(lhs)).max(op_norm(rhs));
    Ok(LoewnerVerdict::from_margin(gap.min_eigenvalue() / scale, tol))
}

/// `z^* a z`.
pub fn congruence(z: &ComplexMatrix, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    z.check_same_dim(a)?;
    check_hermitian(a)?;
    Ok(a.sandwich(z))
}

/// Result of comparing two quantities that should coincide: the residual is
/// `||lhs - rhs||_op / max(1, ||lhs||_op, ||rhs||_op)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EqualityReport {
    pub residual: f64,
    pub holds: bool,
}

impl EqualityReport {
    pub fn from_residual(residual: f64, tol: f64) -> Self {
        Self {
            residual,
            holds: residual <= tol,
        }
    }

    /// Signed so that `margin >= -tol` iff the report holds.
    pub fn margin(&self) -> f64 {
        -self.residual
    }

    pub fn worst(reports: &[EqualityReport], tol: f64) -> Self {
        let residual = reports.iter().map(|r| r.residual).fold(0.0, f64::max);
        Self::from_residual(residual, tol)
    }
}

pub fn relative_residual(lhs: &ComplexMatrix, rhs: &ComplexMatrix) -> f64 {
    let scale = 1f64.max(op_norm(lhs)).max(op_norm(rhs));
    op_norm(&(lhs - rhs)) / scale
}

pub fn compare_equal(lhs: &ComplexMatrix, rhs: &ComplexMatrix, tol: f64) -> Result<EqualityReport> {
    lhs.check_same_dim(rhs)?;
    Ok(EqualityReport::from_residual(relative_residual(lhs, rhs), tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn reflexive() {
        let a = ComplexMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let v = loewner_leq(&a, &a, DEFAULT_TOL).unwrap();
        assert!(v.holds);
        assert_eq!(v.margin, 0.0);
    }

    #[test]
    fn diagonal_margin() {
        let v = loewner_leq(
            &ComplexMatrix::diag(&[1.0, 2.0]),
            &ComplexMatrix::diag(&[2.0, 3.0]),
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(v.holds);
        assert!((v.margin - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn touching_margin() {
        let b = ComplexMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let v = loewner_leq(&ComplexMatrix::identity(2), &b, DEFAULT_TOL).unwrap();
        assert!(v.holds);
        assert!(v.margin.abs() < 1e-15);
        let v = loewner_leq(&b, &ComplexMatrix::identity(2), DEFAULT_TOL).unwrap();
        assert!(!v.holds);
        assert!((v.margin + 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let err = loewner_leq(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3), 1e-9).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 2, right: 3 });
        assert!(congruence(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn congruence_examples() {
        let a = ComplexMatrix::diag(&[1.0, 3.0]);
        assert_eq!(congruence(&ComplexMatrix::identity(2), &a).unwrap(), a);
        assert_eq!(
            congruence(&ComplexMatrix::scalar(2, 2.0), &a).unwrap(),
            ComplexMatrix::diag(&[4.0, 12.0])
        );
        let p = ComplexMatrix::diag(&[1.0, 0.0]);
        assert_eq!(congruence(&p, &ComplexMatrix::identity(2)).unwrap(), p);
    }
}
