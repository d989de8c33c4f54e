//! Space-time staggered leapfrog for the periodic 1D wave system
//! `u_t = c v_x`, `v_t = c u_x`.
//!
//! `u[i]` sits at `x_i = iΔx` and `v[i]` at `x_{i+1/2}`; both arrays have
//! length `N` and wrap periodically.

use crate::error::{positive, Error, Result};
use crate::linalg::{self, norm_sq};

/// Direction of the periodic difference [`delta`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Integer sites to half sites: `δ(a)_{i+1/2} = a_{i+1} − a_i`.
    ToHalf,
    /// Half sites to integer sites: `δ(c)_i = c_{i+1/2} − c_{i−1/2}`.
    ToInt,
}

pub fn delta(values: &[f64], dir: Direction) -> Vec<f64> {
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    match dir {
        Direction::ToHalf => (0..n).map(|i| values[(i + 1) % n] - values[i]).collect(),
        Direction::ToInt => (0..n).map(|i| values[i] - values[(i + n - 1) % n]).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Wave1DState {
    pub u: Vec<f64>,
    pub v_half: Vec<f64>,
    pub n: u64,
    pub dt: f64,
    pub dx: f64,
    pub c: f64,
}

impl Wave1DState {
    pub fn new(u: Vec<f64>, v_half: Vec<f64>, c: f64, dt: f64, dx: f64) -> Result<Self> {
        positive("c", c)?;
        positive("dt", dt)?;
        positive("dx", dx)?;
        if u.len() < 2 || u.len() != v_half.len() {
            return Err(Error::Shape(format!(
                "u and v need equal length >= 2, got {} and {}",
                u.len(),
                v_half.len()
            )));
        }
        Ok(Self {
            u,
            v_half,
            n: 0,
            dt,
            dx,
            c,
        })
    }

    /// Courant number `cΔt/Δx`.
    pub fn courant(&self) -> f64 {
        self.c * self.dt / self.dx
    }

    pub fn norm(&self) -> f64 {
        linalg::max_abs(&self.u).max(linalg::max_abs(&self.v_half))
    }
}

/// `v^{1/2} = v⁰ + (cΔt/2Δx) δ(u⁰)` from collocated initial data.
pub fn init_v_half(u0: Vec<f64>, v0: &[f64], c: f64, dt: f64, dx: f64) -> Result<Wave1DState> {
    if u0.len() != v0.len() {
        return Err(Error::Shape(format!(
            "u0 has length {}, v0 has length {}",
            u0.len(),
            v0.len()
        )));
    }
    let r = 0.5 * c * dt / dx;
    let du = delta(&u0, Direction::ToHalf);
    let v_half = v0.iter().zip(&du).map(|(v, d)| v + r * d).collect();
    Wave1DState::new(u0, v_half, c, dt, dx)
}

pub fn leapfrog_step(state: &Wave1DState) -> Result<Wave1DState> {
    let r = state.courant();
    let dv = delta(&state.v_half, Direction::ToInt);
    let u: Vec<f64> = state.u.iter().zip(&dv).map(|(u, d)| u + r * d).collect();
    let du = delta(&u, Direction::ToHalf);
    let v_half: Vec<f64> = state.v_half.iter().zip(&du).map(|(v, d)| v + r * d).collect();
    let n = state.n + 1;
    if u.iter().chain(&v_half).any(|x| !x.is_finite()) {
        return Err(Error::Instability { step: n });
    }
    Ok(Wave1DState { u, v_half, n, ..*state })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConservedKind {
    /// `‖u^n‖² − (cΔt/2Δx)²‖δu^n‖² + ‖(v^{n+1/2}+v^{n−1/2})/2‖²` at `w[1].n`.
    Cn,
    /// `‖v^{n+1/2}‖² − (cΔt/2Δx)²‖δv^{n+1/2}‖² + ‖(u^{n+1}+u^n)/2‖²` at
    /// `w[0].n + 1/2`.
    CHalf,
}

/// Plain unweighted sums over two consecutive states.
pub fn conserved(w: &[Wave1DState], kind: ConservedKind) -> Result<f64> {
    if w.len() < 2 {
        return Err(Error::InvalidWindow(format!(
            "{kind:?} needs 2 consecutive states, got {}",
            w.len()
        )));
    }
    if w[1].n != w[0].n + 1 || w[1].dt != w[0].dt || w[1].u.len() != w[0].u.len() {
        return Err(Error::InvalidWindow(format!(
            "states at steps {} and {} are not consecutive",
            w[0].n, w[1].n
        )));
    }
    let r2 = (0.5 * w[0].courant()).powi(2);
    let avg = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect() };
    Ok(match kind {
        ConservedKind::Cn => {
            norm_sq(&w[1].u) - r2 * norm_sq(&delta(&w[1].u, Direction::ToHalf))
                + norm_sq(&avg(&w[1].v_half, &w[0].v_half))
        }
        ConservedKind::CHalf => {
            norm_sq(&w[0].v_half) - r2 * norm_sq(&delta(&w[0].v_half, Direction::ToInt))
                + norm_sq(&avg(&w[1].u, &w[0].u))
        }
    })
}

/// Largest stable time step `Δx/c`, from `Δt < (2/‖δ‖)Δx/c` with `‖δ‖ ≤ 2`.
pub fn cfl_max(dx: f64, c: f64) -> Result<f64> {
    Ok(positive("dx", dx)? / positive("c", c)?)
}

/// Power-iteration estimate of `‖δ‖` on `n` periodic points.
pub fn delta_norm_estimate(n: usize, tol: f64) -> Result<f64> {
    positive("tol", tol)?;
    if n < 2 {
        return Err(Error::Shape(format!("need at least 2 points, got {n}")));
    }
    let est = linalg::power_iteration(
        n,
        |x| {
            delta(&delta(x, Direction::ToHalf), Direction::ToInt)
                .into_iter()
                .map(|v| -v)
                .collect()
        },
        linalg::dot,
        tol,
        10_000_000,
        linalg::DEFAULT_SEED,
    );
    Ok(est.value.sqrt())
}

/// Exact `‖δ‖ = 2 sin(π⌊N/2⌋/N)` on `N` periodic points.
pub fn delta_norm_exact(n: usize) -> f64 {
    2.0 * (std::f64::consts::PI * (n / 2) as f64 / n as f64).sin()
}
