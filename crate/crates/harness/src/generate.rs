//! Random instances: positive-definite matrices with a bounded condition
//! number, decompositions of the unit, congruence factors and functionals.

use contraharmonic::means::{Decomposition, WitnessPair};
use contraharmonic::spectral::min_singular_value;
use contraharmonic::{op_norm, ComplexMatrix, HermitianPD, C64};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use contraharmonic::inequalities::{PositiveFunctional, SINGULAR_Z_TOL};

/// Interpolation weights toward a random decomposition; 0 is the witness itself.
pub const INTERPOLATION_WEIGHTS: [f64; 5] = [0.0, 0.01, 0.1, 0.5, 1.0];

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent stream for one `(seed, dim, property, trial)` cell, so the
/// draws of a trial never depend on scheduling.
pub fn trial_rng(seed: u64, dim: usize, property: u64, trial: u64) -> ChaCha8Rng {
    let mut h = splitmix64(seed);
    for part in [dim as u64, property, trial] {
        h = splitmix64(h ^ part);
    }
    ChaCha8Rng::seed_from_u64(h)
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Complex Gaussian matrix with entries of variance `1 / n`.
pub fn gaussian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let scale = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, |_, _| complex_normal(rng) * scale)
}

/// Unitary factor of a complex Gaussian matrix via Gram-Schmidt. The implied
/// R has a positive diagonal, which makes Q Haar-distributed.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = gaussian_matrix(n, rng);
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..n).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..n {
        // Two passes of modified Gram-Schmidt.
        for _ in 0..2 {
            for k in 0..j {
                let proj: C64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..n {
                    let v = cols[k][i];
                    cols[j][i] -= proj * v;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    ComplexMatrix::from_fn(n, |i, j| cols[j][i])
}

/// `Q diag(lambda) Q^*` with `lambda` log-uniform inside
/// `[cond_cap^{-1/2}, cond_cap^{1/2}]`.
pub fn gen_pd<R: Rng + ?Sized>(dim: usize, cond_cap: f64, rng: &mut R) -> HermitianPD {
    assert!(dim >= 1 && cond_cap >= 1.0);
    if cond_cap == 1.0 {
        return HermitianPD::scalar(dim, 1.0).expect("identity is positive definite");
    }
    // Keep the extremes a hair inside the interval so rounding in the
    // assembled matrix cannot push the measured condition number past the cap.
    let half_log = 0.5 * cond_cap.ln() * (1.0 - 1e-9);
    let q = random_unitary(dim, rng);
    let lambdas: Vec<f64> = (0..dim).map(|_| rng.random_range(-half_log..=half_log).exp()).collect();
    let d = ComplexMatrix::diag(&lambdas);
    let m = d.sandwich(&q.adjoint());
    HermitianPD::new(m).expect("generated matrix is positive definite")
}

/// `x = (1 - t) z + t g` for the witness `z`, a Gaussian `g` and `t` drawn
/// from [`INTERPOLATION_WEIGHTS`]; `y = e - x`.
pub fn gen_decomposition<R: Rng + ?Sized>(dim: usize, witness: &WitnessPair, rng: &mut R) -> (Decomposition, f64) {
    let t = INTERPOLATION_WEIGHTS[rng.random_range(0..INTERPOLATION_WEIGHTS.len())];
    let g = gaussian_matrix(dim, rng);
    let x = if t == 0.0 {
        witness.z.clone()
    } else {
        &witness.z.scale(1.0 - t) + &g.scale(t)
    };
    (Decomposition::from_x(x), t)
}

/// Complex Gaussian matrix, redrawn until comfortably invertible.
pub fn gen_invertible<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        let z = gaussian_matrix(dim, rng);
        if min_singular_value(&z) > 1e3 * SINGULAR_Z_TOL * op_norm(&z) {
            return z;
        }
    }
}

/// One of: the trace, a vector state, or `x -> trace(g^* g x)`.
pub fn gen_functional<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PositiveFunctional {
    match rng.random_range(0..3) {
        0 => PositiveFunctional::trace(dim),
        1 => {
            let v: Vec<C64> = (0..dim).map(|_| complex_normal(rng)).collect();
            PositiveFunctional::vector_state(&v).expect("rank-one weight is positive semidefinite")
        }
        _ => {
            let g = gaussian_matrix(dim, rng);
            PositiveFunctional::new(ComplexMatrix::identity(dim).sandwich(&g)).expect("Gram matrix is positive semidefinite")
        }
    }
}

/// Log-uniform draw in `[lo, hi]`.
pub fn log_uniform<R: Rng + ?Sized>(lo: f64, hi: f64, rng: &mut R) -> f64 {
    rng.random_range(lo.ln()..=hi.ln()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use contraharmonic::means::{constraint_residual, witness_pair};
    use contraharmonic::Weight;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = trial_rng(1, 5, 0, 0);
        let q = random_unitary(5, &mut rng);
        let gram = &q.adjoint() * &q;
        assert!((&gram - &ComplexMatrix::identity(5)).max_abs() < 1e-14);
    }

    #[test]
    fn pd_dimension_one_and_unit_cap() {
        let mut rng = trial_rng(3, 1, 0, 0);
        for _ in 0..50 {
            let a = gen_pd(1, 100.0, &mut rng);
            let v = a.matrix()[(0, 0)].re;
            assert!((0.1..=10.0).contains(&v));
        }
        let a = gen_pd(4, 1.0, &mut rng);
        assert_eq!(a.matrix(), &ComplexMatrix::identity(4));
    }

    #[test]
    fn pd_is_deterministic_per_stream() {
        let a = gen_pd(4, 1e6, &mut trial_rng(42, 4, 0, 7));
        let b = gen_pd(4, 1e6, &mut trial_rng(42, 4, 0, 7));
        let c = gen_pd(4, 1e6, &mut trial_rng(42, 4, 0, 8));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn decomposition_endpoints() {
        let mut rng = trial_rng(5, 3, 0, 0);
        let a = gen_pd(3, 1e3, &mut rng);
        let b = gen_pd(3, 1e3, &mut rng);
        let wit = witness_pair(Weight::new(0.4).unwrap(), &a, &b).unwrap();
        let mut seen_zero = false;
        for _ in 0..100 {
            let (d, t) = gen_decomposition(3, &wit, &mut rng);
            assert!(INTERPOLATION_WEIGHTS.contains(&t));
            let sum = &d.x + &d.y;
            assert!((&sum - &ComplexMatrix::identity(3)).max_abs() <= 4.0 * f64::EPSILON * (1.0 + d.x.max_abs()));
            assert!(constraint_residual(&d.x, &d.y) < 1e-15);
            if t == 0.0 {
                assert_eq!(d.x, wit.z);
                seen_zero = true;
            }
        }
        assert!(seen_zero);
    }

    #[test]
    fn functionals_are_valid() {
        let mut rng = trial_rng(9, 4, 0, 0);
        for _ in 0..30 {
            let phi = gen_functional(4, &mut rng);
            assert!(phi.weight().trace().re > 0.0);
        }
    }
}
