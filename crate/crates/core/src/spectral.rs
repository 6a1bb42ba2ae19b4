//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and the
//! spectral calculus built on it (roots, inverses, real powers, norms).

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Off-diagonal Frobenius mass, relative to the input's, at which Jacobi is converged.
pub const JACOBI_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order and the unitary whose columns are the
/// matching eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.n() - 1]
    }

    /// Largest absolute eigenvalue.
    pub fn spectral_radius(&self) -> f64 {
        self.min_eigenvalue().abs().max(self.max_eigenvalue().abs())
    }

    /// `V diag(f(lambda)) V^*`. Fails if `f` is not finite at some eigenvalue.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
        let values = self
            .eigenvalues
            .iter()
            .map(|&l| {
                let v = f(l);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::DomainError { eigenvalue: l })
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(self.assemble(&values))
    }

    /// `V diag(values) V^*`, exactly Hermitian.
    pub fn assemble(&self, values: &[f64]) -> ComplexMatrix {
        let v = &self.vectors;
        let n = self.n();
        ComplexMatrix::hermitian_from_upper(n, |i, j| {
            let mut acc = C64::new(0.0, 0.0);
            for (k, &f) in values.iter().enumerate() {
                acc += v[(i, k)] * v[(j, k)].conj() * f;
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.assemble(&self.eigenvalues)
    }
}

/// Norm of the anti-Hermitian part and the bound it must respect.
fn hermitian_defect(m: &ComplexMatrix) -> (f64, f64) {
    let n = m.n();
    let skew = m - &m.adjoint();
    let skew_f = skew.frobenius_norm();
    if skew_f == 0.0 {
        return (0.0, HERMITIAN_TOL);
    }
    // ||K||_op <= ||K||_F and ||m||_op >= ||m||_F / sqrt(n): a cheap sufficient test.
    let cheap_limit = HERMITIAN_TOL * (m.frobenius_norm() / (n as f64).sqrt()).max(1.0);
    if skew_f <= cheap_limit {
        return (skew_f, cheap_limit);
    }
    // i * K is Hermitian with the same spectral norm as K.
    let ik = ComplexMatrix::hermitian_from_upper(n, |i, j| skew[(i, j)] * C64::new(0.0, 1.0));
    let skew_op = jacobi(&ik).0.spectral_radius();
    let limit = HERMITIAN_TOL * op_norm(m).max(1.0);
    (skew_op, limit)
}

/// Accepts `m` iff `||m - m^*||_op <= 1e-12 * max(1, ||m||_op)`.
pub fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let (skew, limit) = hermitian_defect(m);
    if skew <= limit {
        Ok(())
    } else {
        Err(Error::NotHermitian { skew, limit })
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<SpectralDecomposition> {
    check_hermitian(m)?;
    let h = hermitian_part(m);
    let (decomp, converged, off) = jacobi(&h);
    if converged {
        Ok(decomp)
    } else {
        Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            off,
        })
    }
}

/// `(m + m^*) / 2`, used only after `m` passed [`check_hermitian`].
fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::hermitian_from_upper(m.n(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.n();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi on an exactly Hermitian matrix. Returns the (sorted)
/// decomposition, whether it met the convergence criterion, and the final
/// off-diagonal mass.
///
/// Sweeps continue past the nominal criterion until every pair is below
/// the rounding level relative to its diagonal entries; the extra sweep is
/// cheap under quadratic convergence and gives small eigenvalues their full
/// relative accuracy.
fn jacobi(m: &ComplexMatrix) -> (SpectralDecomposition, bool, f64) {
    let n = m.n();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let target = JACOBI_TOL * m.frobenius_norm();

    let mut sweeps = 0;
    while sweeps < JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                rotated |= rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        if !rotated {
            break;
        }
    }
    let off = off_diagonal_mass(&a);
    let converged = off <= target || off == 0.0;

    let mut order: Vec<usize> = (0..n).collect();
    let diag = a.real_diagonal();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    (SpectralDecomposition { eigenvalues, vectors }, converged, off)
}

/// One two-sided rotation annihilating `a[p][q]`. Returns false when the
/// entry is already negligible.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) -> bool {
    let apq = a[(p, q)];
    let g = apq.norm();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if g == 0.0 || g <= 0.5 * f64::EPSILON * (app.abs() * aqq.abs()).sqrt() {
        if g != 0.0 {
            a[(p, q)] = C64::new(0.0, 0.0);
            a[(q, p)] = C64::new(0.0, 0.0);
        }
        return false;
    }
    // Phase-align a[p][q] to a real positive value, then a real rotation.
    let phase_conj = (apq / g).conj();
    let zeta = (aqq - app) / (2.0 * g);
    let t = if zeta.abs() > 1e150 {
        0.5 / zeta
    } else {
        let t = 1.0 / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
        if zeta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = phase_conj * (-s);
    let g_qq = phase_conj * c;

    let n = a.n();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let nkp = akp * g_pp + akq * g_qp;
        let nkq = akp * g_pq + akq * g_qq;
        a[(k, p)] = nkp;
        a[(p, k)] = nkp.conj();
        a[(k, q)] = nkq;
        a[(q, k)] = nkq.conj();
    }
    a[(p, p)] = C64::new(app - t * g, 0.0);
    a[(q, q)] = C64::new(aqq + t * g, 0.0);
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
    true
}

/// Spectral norm (largest singular value).
pub fn op_norm(m: &ComplexMatrix) -> f64 {
    if *m == m.adjoint() {
        return jacobi(m).0.spectral_radius();
    }
    let gram = ComplexMatrix::identity(m.n()).sandwich(m);
    jacobi(&gram).0.max_eigenvalue().max(0.0).sqrt()
}

/// Smallest singular value.
pub fn min_singular_value(m: &ComplexMatrix) -> f64 {
    let gram = ComplexMatrix::identity(m.n()).sandwich(m);
    jacobi(&gram).0.min_eigenvalue().max(0.0).sqrt()
}

/// A validated Hermitian positive-definite matrix together with its
/// eigendecomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianPD {
    base: ComplexMatrix,
    spectral: SpectralDecomposition,
}

impl HermitianPD {
    pub fn new(base: ComplexMatrix) -> Result<Self> {
        let spectral = eig_hermitian(&base)?;
        let min = spectral.min_eigenvalue();
        if !(min > 0.0) {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
        }
        Ok(Self { base, spectral })
    }

    /// `c * I` for `c > 0`.
    pub fn scalar(n: usize, c: f64) -> Result<Self> {
        Self::new(ComplexMatrix::scalar(n, c))
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::diag(values))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.base
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn spectral(&self) -> &SpectralDecomposition {
        &self.spectral
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.spectral.min_eigenvalue()
    }

    /// Operator norm, the largest eigenvalue.
    pub fn norm(&self) -> f64 {
        self.spectral.max_eigenvalue()
    }

    pub fn condition_number(&self) -> f64 {
        self.spectral.max_eigenvalue() / self.spectral.min_eigenvalue()
    }

    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
        self.spectral.apply(f)
    }

    pub fn sqrt(&self) -> ComplexMatrix {
        self.spectral.assemble(&self.mapped(f64::sqrt))
    }

    pub fn inv_sqrt(&self) -> ComplexMatrix {
        self.spectral.assemble(&self.mapped(|l| 1.0 / l.sqrt()))
    }

    pub fn inverse(&self) -> ComplexMatrix {
        self.spectral.assemble(&self.mapped(|l| 1.0 / l))
    }

    /// `self^-1 rhs` as `V (diag(1/lambda) (V^* rhs))`, without forming the
    /// inverse; much more accurate than `inverse() * rhs` when ill-conditioned.
    pub fn solve(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.base.check_same_dim(rhs)?;
        let v = &self.spectral.vectors;
        let mut coords = &v.adjoint() * rhs;
        let n = self.n();
        for (k, &l) in self.spectral.eigenvalues.iter().enumerate() {
            for j in 0..n {
                coords[(k, j)] /= l;
            }
        }
        Ok(v * &coords)
    }

    pub fn powf(&self, p: f64) -> ComplexMatrix {
        self.spectral.assemble(&self.mapped(|l| l.powf(p)))
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        self.base.check_same_dim(&other.base)
    }

    fn mapped(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.spectral.eigenvalues.iter().map(|&l| f(l)).collect()
    }
}

impl AsRef<ComplexMatrix> for HermitianPD {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.base
    }
}

/// `V diag(f(lambda)) V^*` for a positive-definite `m`.
pub fn matrix_function(m: &HermitianPD, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    m.apply(f)
}
