//! Small dense-vector helpers and a power iteration for self-adjoint operators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed used whenever an iteration needs a start vector and the caller does
/// not supply one.
pub const DEFAULT_SEED: u64 = 0x5EED_1EAF;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc + x * y)
}

pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Uniform samples in `[lo, hi)` from a ChaCha8 stream.
pub fn random_vec(len: usize, lo: f64, hi: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(lo..hi)).collect()
}

/// Outcome of [`power_iteration`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerEstimate {
    /// Magnitude of the dominant eigenvalue (the operator norm for a
    /// self-adjoint operator).
    pub value: f64,
    pub iterations: usize,
    /// Final relative residual `‖Mx − λx‖ / |λ|`.
    pub residual: f64,
    pub converged: bool,
}

/// Dominant eigenvalue magnitude of an operator that is self-adjoint in the
/// inner product `inner`.
///
/// Iterates `x ← Mx / ‖Mx‖` from a seeded random start and stops once the
/// relative eigen-residual drops below `tol`. The Rayleigh quotient error is
/// then of order `tol²`. A zero operator returns 0.
pub fn power_iteration<A, I>(dim: usize, mut apply: A, inner: I, tol: f64, max_iter: usize, seed: u64) -> PowerEstimate
where
    A: FnMut(&[f64]) -> Vec<f64>,
    I: Fn(&[f64], &[f64]) -> f64,
{
    let mut x = random_vec(dim, -1.0, 1.0, seed);
    let nx = inner(&x, &x).sqrt();
    x.iter_mut().for_each(|v| *v /= nx);

    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        let y = apply(&x);
        lambda = inner(&y, &x);
        let ny = inner(&y, &y).sqrt();
        if ny == 0.0 {
            return PowerEstimate {
                value: 0.0,
                iterations: it,
                residual: 0.0,
                converged: true,
            };
        }
        let r: Vec<f64> = y.iter().zip(&x).map(|(yi, xi)| yi - lambda * xi).collect();
        residual = inner(&r, &r).sqrt() / lambda.abs().max(f64::MIN_POSITIVE);
        x = y.into_iter().map(|v| v / ny).collect();
        if residual <= tol {
            return PowerEstimate {
                value: lambda.abs(),
                iterations: it,
                residual,
                converged: true,
            };
        }
    }
    PowerEstimate {
        value: lambda.abs(),
        iterations: max_iter,
        residual,
        converged: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_operator() {
        let d = [1.0, -5.0, 3.0, 0.5];
        let est = power_iteration(
            4,
            |x| x.iter().zip(&d).map(|(a, b)| a * b).collect(),
            dot,
            1e-12,
            10_000,
            7,
        );
        assert!(est.converged);
        assert!((est.value - 5.0).abs() < 1e-12);
    }

    #[test]
    fn zero_operator_is_zero() {
        let est = power_iteration(3, |x| vec![0.0; x.len()], dot, 1e-12, 10, 1);
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn random_vec_is_deterministic() {
        assert_eq!(random_vec(5, 0.0, 1.0, 3), random_vec(5, 0.0, 1.0, 3));
        assert_ne!(random_vec(5, 0.0, 1.0, 3), random_vec(5, 0.0, 1.0, 4));
    }
}
