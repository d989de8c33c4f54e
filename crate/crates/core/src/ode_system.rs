//! Leapfrog discretization of the skew system
//!
//! ```text
//! f' = A g,    g' = −Aᵀ f
//! ```
//!
//! where `A` is a dense `n × m` matrix: `f ∈ ℝⁿ` lives on integer steps and
//! `g ∈ ℝᵐ` on half steps. `A` may be rectangular and singular.

use crate::error::{positive, Error, Result};
use crate::linalg::{self, dot, norm_sq};

/// Dense row-major `rows × cols` matrix; its adjoint is the transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewOperator {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl SkewOperator {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "matrix",
                reason: "non-finite entry".into(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.iter().flat_map(|r| r.iter().copied()).collect())
    }

    /// Entries uniform in `[-1, 1)` from a seeded ChaCha8 stream.
    pub fn random(rows: usize, cols: usize, seed: u64) -> Result<Self> {
        Self::new(rows, cols, linalg::random_vec(rows * cols, -1.0, 1.0, seed))
    }

    /// Random `rows × cols` matrix of rank at most `rank`, formed as the
    /// product of seeded `rows × rank` and `rank × cols` factors.
    pub fn random_low_rank(rows: usize, cols: usize, rank: usize, seed: u64) -> Result<Self> {
        let left = Self::random(rows, rank.max(1), seed)?;
        let right = Self::random(rank.max(1), cols, seed.wrapping_add(1))?;
        let mut data = vec![0.0; rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                data[i * cols + j] = (0..rank).map(|k| left.get(i, k) * right.get(k, j)).sum();
            }
        }
        Self::new(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// `A g` for `g ∈ ℝᵐ`.
    pub fn apply(&self, g: &[f64]) -> Result<Vec<f64>> {
        if g.len() != self.cols {
            return Err(Error::Shape(format!("A expects length {}, got {}", self.cols, g.len())));
        }
        Ok(self.data.chunks_exact(self.cols).map(|row| dot(row, g)).collect())
    }

    /// `Aᵀ f` for `f ∈ ℝⁿ`.
    pub fn apply_adjoint(&self, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.rows {
            return Err(Error::Shape(format!(
                "Aᵀ expects length {}, got {}",
                self.rows,
                f.len()
            )));
        }
        let mut out = vec![0.0; self.cols];
        for (row, fi) in self.data.chunks_exact(self.cols).zip(f) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * fi;
            }
        }
        Ok(out)
    }
}

/// Spectral norm `‖A‖` by power iteration on `AᵀA` (seeded start vector),
/// converged to relative residual `tol`.
pub fn operator_norm(op: &SkewOperator, tol: f64) -> Result<f64> {
    positive("tol", tol)?;
    if op.data.iter().all(|&x| x == 0.0) {
        return Ok(0.0);
    }
    let est = linalg::power_iteration(
        op.cols,
        |x| {
            let ax = op.apply(x).expect("dimension checked");
            op.apply_adjoint(&ax).expect("dimension checked")
        },
        dot,
        tol,
        1_000_000,
        linalg::DEFAULT_SEED,
    );
    Ok(est.value.sqrt())
}

/// `f` at step `n` and `g` at step `n + 1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewState {
    pub f: Vec<f64>,
    pub g_half: Vec<f64>,
    pub n: u64,
    pub dt: f64,
}

impl SkewState {
    pub fn new(f: Vec<f64>, g_half: Vec<f64>, op: &SkewOperator, dt: f64) -> Result<Self> {
        positive("dt", dt)?;
        check_dims(&f, &g_half, op)?;
        Ok(Self { f, g_half, n: 0, dt })
    }

    pub fn norm(&self) -> f64 {
        linalg::max_abs(&self.f).max(linalg::max_abs(&self.g_half))
    }
}

fn check_dims(f: &[f64], g: &[f64], op: &SkewOperator) -> Result<()> {
    if f.len() != op.rows || g.len() != op.cols {
        return Err(Error::Shape(format!(
            "A is {}x{} but f has length {} and g has length {}",
            op.rows,
            op.cols,
            f.len(),
            g.len()
        )));
    }
    Ok(())
}

/// `g^{1/2} = g⁰ − (Δt/2) Aᵀ f⁰`.
pub fn init_g_half(f0: &[f64], g0: &[f64], op: &SkewOperator, dt: f64) -> Result<SkewState> {
    check_dims(f0, g0, op)?;
    let atf = op.apply_adjoint(f0)?;
    let g_half = g0.iter().zip(&atf).map(|(g, a)| g - 0.5 * dt * a).collect();
    SkewState::new(f0.to_vec(), g_half, op, dt)
}

pub fn leapfrog_step(state: &SkewState, op: &SkewOperator) -> Result<SkewState> {
    check_dims(&state.f, &state.g_half, op)?;
    let ag = op.apply(&state.g_half)?;
    let f: Vec<f64> = state.f.iter().zip(&ag).map(|(f, a)| f + state.dt * a).collect();
    let atf = op.apply_adjoint(&f)?;
    let g_half: Vec<f64> = state.g_half.iter().zip(&atf).map(|(g, a)| g - state.dt * a).collect();
    let n = state.n + 1;
    if f.iter().chain(&g_half).any(|x| !x.is_finite()) {
        return Err(Error::Instability { step: n });
    }
    Ok(SkewState {
        f,
        g_half,
        n,
        dt: state.dt,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConservedKind {
    /// `‖(f^{n+1}+f^n)/2‖² + ‖g^{n+1/2}‖² − (Δt²/4)‖A g^{n+1/2}‖²`.
    CHalf,
    /// `‖f^n‖² − (Δt²/4)‖Aᵀ f^n‖² + ‖(g^{n+1/2}+g^{n−1/2})/2‖²`.
    Cn,
    /// `½(‖f^n‖² + ‖(g^{n+1/2}+g^{n−1/2})/2‖²)`, the continuum quantity
    /// evaluated with the averaged half-step field.
    CContinuous,
    /// `½(‖f'‖² + ‖g'‖²)` with `f' ≈ (f^{n+1} − f^{n−1})/(2Δt)` and
    /// `g' ≈ (g^{n+1/2} − g^{n−1/2})/Δt`.
    EEnergy,
}

fn check_window(w: &[SkewState], min: usize, what: &str) -> Result<()> {
    if w.len() < min {
        return Err(Error::InvalidWindow(format!(
            "{what} needs {min} consecutive states, got {}",
            w.len()
        )));
    }
    for p in w.windows(2) {
        if p[1].n != p[0].n + 1 || p[1].dt != p[0].dt {
            return Err(Error::InvalidWindow(format!(
                "states at steps {} and {} are not consecutive",
                p[0].n, p[1].n
            )));
        }
    }
    Ok(())
}

fn avg(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect()
}

/// Evaluates `kind` over consecutive states: `CHalf` at level
/// `w[0].n + 1/2`; `Cn`, `CContinuous` at `w[1].n`; `EEnergy` at `w[1].n`
/// using `w[0..3]`.
pub fn conserved(w: &[SkewState], op: &SkewOperator, kind: ConservedKind) -> Result<f64> {
    let min = if kind == ConservedKind::EEnergy { 3 } else { 2 };
    check_window(w, min, &format!("{kind:?}"))?;
    for s in w {
        check_dims(&s.f, &s.g_half, op)?;
    }
    let dt = w[0].dt;
    Ok(match kind {
        ConservedKind::CHalf => {
            let ag = op.apply(&w[0].g_half)?;
            norm_sq(&avg(&w[1].f, &w[0].f)) + norm_sq(&w[0].g_half) - 0.25 * dt * dt * norm_sq(&ag)
        }
        ConservedKind::Cn => {
            let atf = op.apply_adjoint(&w[1].f)?;
            norm_sq(&w[1].f) - 0.25 * dt * dt * norm_sq(&atf) + norm_sq(&avg(&w[1].g_half, &w[0].g_half))
        }
        ConservedKind::CContinuous => 0.5 * (norm_sq(&w[1].f) + norm_sq(&avg(&w[1].g_half, &w[0].g_half))),
        ConservedKind::EEnergy => {
            let df: Vec<f64> = w[2].f.iter().zip(&w[0].f).map(|(a, b)| (a - b) / (2.0 * dt)).collect();
            let dg: Vec<f64> = w[1]
                .g_half
                .iter()
                .zip(&w[0].g_half)
                .map(|(a, b)| (a - b) / dt)
                .collect();
            0.5 * (norm_sq(&df) + norm_sq(&dg))
        }
    })
}

/// Residuals of the second order difference equations satisfied by the
/// scheme, at the centre of a three-state window:
///
/// * `f`: `‖(f^{n+1} − 2f^n + f^{n−1})/Δt² + A Aᵀ f^n‖` with `n = w[1].n`;
/// * `g`: `‖(g^{n+3/2} − 2g^{n+1/2} + g^{n−1/2})/Δt² + AᵀA g^{n+1/2}‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderResidual {
    pub f: f64,
    pub g: f64,
}

pub fn second_order_residual(w: &[SkewState], op: &SkewOperator) -> Result<SecondOrderResidual> {
    check_window(w, 3, "second order residual")?;
    let dt2 = w[0].dt * w[0].dt;
    let aatf = op.apply(&op.apply_adjoint(&w[1].f)?)?;
    let rf: Vec<f64> = (0..op.rows)
        .map(|i| (w[2].f[i] - 2.0 * w[1].f[i] + w[0].f[i]) / dt2 + aatf[i])
        .collect();
    let atag = op.apply_adjoint(&op.apply(&w[1].g_half)?)?;
    let rg: Vec<f64> = (0..op.cols)
        .map(|j| (w[2].g_half[j] - 2.0 * w[1].g_half[j] + w[0].g_half[j]) / dt2 + atag[j])
        .collect();
    Ok(SecondOrderResidual {
        f: norm_sq(&rf).sqrt(),
        g: norm_sq(&rg).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_of_simple_matrices() {
        let a = SkewOperator::from_rows(&[&[3.0]]).unwrap();
        assert!((operator_norm(&a, 1e-12).unwrap() - 3.0).abs() < 1e-12);
        let b = SkewOperator::from_rows(&[&[2.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]).unwrap();
        assert!((operator_norm(&b, 1e-12).unwrap() - 2.0).abs() < 1e-12);
        let z = SkewOperator::new(2, 2, vec![0.0; 4]).unwrap();
        assert_eq!(operator_norm(&z, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn init_formula() {
        let a = SkewOperator::from_rows(&[&[1.0]]).unwrap();
        let s = init_g_half(&[1.0], &[0.0], &a, 0.1).unwrap();
        assert!((s.g_half[0] + 0.05).abs() < 1e-17);
        let z = init_g_half(&[0.0], &[0.0], &a, 0.1).unwrap();
        assert_eq!(z.g_half, vec![0.0]);
    }

    #[test]
    fn shape_errors() {
        let a = SkewOperator::random(2, 3, 1).unwrap();
        assert!(matches!(
            init_g_half(&[1.0; 3], &[0.0; 3], &a, 0.1),
            Err(Error::Shape(_))
        ));
        assert!(matches!(a.apply(&[1.0; 2]), Err(Error::Shape(_))));
        assert!(matches!(SkewOperator::new(2, 2, vec![1.0; 3]), Err(Error::Shape(_))));
        let s = SkewState {
            f: vec![0.0; 3],
            g_half: vec![0.0; 3],
            n: 0,
            dt: 0.1,
        };
        assert!(matches!(leapfrog_step(&s, &a), Err(Error::Shape(_))));
    }

    #[test]
    fn zero_matrix_keeps_state_constant() {
        let a = SkewOperator::new(2, 3, vec![0.0; 6]).unwrap();
        let mut s = SkewState::new(vec![1.0, -2.0], vec![0.5, 0.25, 3.0], &a, 0.3).unwrap();
        let start = s.clone();
        for _ in 0..100 {
            s = leapfrog_step(&s, &a).unwrap();
        }
        assert_eq!(s.f, start.f);
        assert_eq!(s.g_half, start.g_half);
    }

    #[test]
    fn zero_state_has_zero_quantities() {
        let a = SkewOperator::random(2, 3, 9).unwrap();
        let s0 = SkewState::new(vec![0.0; 2], vec![0.0; 3], &a, 0.1).unwrap();
        let s1 = leapfrog_step(&s0, &a).unwrap();
        let s2 = leapfrog_step(&s1, &a).unwrap();
        let w = [s0, s1, s2];
        for k in [
            ConservedKind::CHalf,
            ConservedKind::Cn,
            ConservedKind::CContinuous,
            ConservedKind::EEnergy,
        ] {
            assert_eq!(conserved(&w, &a, k).unwrap(), 0.0);
        }
        let r = second_order_residual(&w, &a).unwrap();
        assert_eq!((r.f, r.g), (0.0, 0.0));
        assert!(matches!(
            second_order_residual(&w[..2], &a),
            Err(Error::InvalidWindow(_))
        ));
    }
}
