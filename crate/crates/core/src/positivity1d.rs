//! Positivity preserving periodic 1D schemes: flux-form upwind transport and
//! FTCS diffusion with a variable coefficient.
//!
//! Densities `rho[i]` sit at cell centers `x_{i+1/2}`; velocities and
//! diffusion coefficients at nodes `x_i`, so node `i` separates cells `i−1`
//! and `i`.

use crate::error::{positive, Error, Result};

fn check_arrays(rho: &[f64], node: &[f64], node_name: &'static str) -> Result<()> {
    if rho.len() < 2 || rho.len() != node.len() {
        return Err(Error::Shape(format!(
            "rho and {node_name} need equal length >= 2, got {} and {}",
            rho.len(),
            node.len()
        )));
    }
    if let Some(x) = rho.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::InvalidParameter {
            name: "rho",
            reason: format!("density must be nonnegative, got {x}"),
        });
    }
    if node.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter {
            name: node_name,
            reason: "non-finite entry".into(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportState {
    pub rho: Vec<f64>,
    pub vel: Vec<f64>,
    pub n: u64,
    pub dt: f64,
    pub dx: f64,
}

impl TransportState {
    pub fn new(rho: Vec<f64>, vel: Vec<f64>, dt: f64, dx: f64) -> Result<Self> {
        positive("dt", dt)?;
        positive("dx", dx)?;
        check_arrays(&rho, &vel, "vel")?;
        Ok(Self { rho, vel, n: 0, dt, dx })
    }

    /// Largest `|v_i|Δt/Δx`.
    pub fn courant(&self) -> f64 {
        self.vel
            .iter()
            .fold(0.0_f64, |m, v| m.max((v * self.dt / self.dx).abs()))
    }

    /// Largest fraction of a cell's content leaving it in one step.
    pub fn max_outflow(&self) -> f64 {
        let c = self.edge_courant();
        let n = c.len();
        (0..n).fold(0.0_f64, |m, i| m.max(outflow(&c, i, n)))
    }

    fn edge_courant(&self) -> Vec<f64> {
        self.vel.iter().map(|v| v * self.dt / self.dx).collect()
    }
}

/// Outflow fraction of cell `i` through nodes `i` and `i + 1`.
fn outflow(c: &[f64], i: usize, n: usize) -> f64 {
    c[(i + 1) % n].max(0.0) + (-c[i]).max(0.0)
}

/// Moves `to_right[i]·ρ_i` and `to_left[i]·ρ_i` out of every cell into its
/// neighbours. Each transfer is a single float added on one side and removed
/// on the other, and the second removal is clamped to what is left, so the
/// result is nonnegative in floating point.
fn exchange(rho: &[f64], to_right: &[f64], to_left: &[f64]) -> Vec<f64> {
    let n = rho.len();
    let mut kept = vec![0.0; n];
    let mut sent_r = vec![0.0; n];
    let mut sent_l = vec![0.0; n];
    for i in 0..n {
        let r = to_right[i] * rho[i];
        let rest = rho[i] - r;
        let l = (to_left[i] * rho[i]).min(rest);
        sent_r[i] = r;
        sent_l[i] = l;
        kept[i] = rest - l;
    }
    (0..n)
        .map(|i| kept[i] + (sent_r[(i + n - 1) % n] + sent_l[(i + 1) % n]))
        .collect()
}

/// Upwind flux-form step. Each node moves `|v_i|Δt/Δx` of its upwind
/// cell's content into the downwind cell; all transfers read the old `ρ`.
///
/// Requires `max|v|Δt/Δx ≤ 1` and, per cell, a total outflow fraction
/// `≤ 1`, which together make every update coefficient nonnegative.
pub fn transport_step(state: &TransportState) -> Result<TransportState> {
    let courant = state.courant();
    if courant > 1.0 {
        return Err(Error::Precondition(format!("max |v| dt/dx = {courant} exceeds 1")));
    }
    let c = state.edge_courant();
    let n = c.len();
    if let Some(i) = (0..n).find(|&i| outflow(&c, i, n) > 1.0) {
        let out = outflow(&c, i, n);
        return Err(Error::Precondition(format!(
            "cell {i} would lose a fraction {out} > 1 of its content"
        )));
    }
    let to_right: Vec<f64> = (0..n).map(|i| c[(i + 1) % n].max(0.0)).collect();
    let to_left: Vec<f64> = c.iter().map(|x| (-x).max(0.0)).collect();
    let next = exchange(&state.rho, &to_right, &to_left);
    Ok(TransportState {
        rho: next,
        n: state.n + 1,
        ..state.clone()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionState {
    pub rho: Vec<f64>,
    pub d: Vec<f64>,
    pub n: u64,
    pub dt: f64,
    pub dx: f64,
}

impl DiffusionState {
    pub fn new(rho: Vec<f64>, d: Vec<f64>, dt: f64, dx: f64) -> Result<Self> {
        positive("dt", dt)?;
        positive("dx", dx)?;
        check_arrays(&rho, &d, "D")?;
        if let Some(x) = d.iter().find(|x| **x < 0.0) {
            return Err(Error::InvalidParameter {
                name: "D",
                reason: format!("diffusion must be nonnegative, got {x}"),
            });
        }
        Ok(Self { rho, d, n: 0, dt, dx })
    }

    /// Largest `(D_{i+1} + D_i)Δt/Δx²`.
    pub fn stability_number(&self) -> f64 {
        let mu = self.dt / (self.dx * self.dx);
        let n = self.d.len();
        (0..n).fold(0.0_f64, |m, i| m.max(mu * (self.d[(i + 1) % n] + self.d[i])))
    }
}

/// FTCS step `ρ_{i+1/2} += (Δt/Δx²)(D_{i+1}ρ_{i+3/2} − (D_{i+1}+D_i)ρ_{i+1/2} + D_iρ_{i−1/2})`,
/// evaluated as an exchange between neighbouring cells.
pub fn diffusion_step(state: &DiffusionState) -> Result<DiffusionState> {
    let mu = state.dt / (state.dx * state.dx);
    let d = &state.d;
    let n = d.len();
    for i in 0..n {
        let s = mu * (d[(i + 1) % n] + d[i]);
        if s > 1.0 {
            return Err(Error::Precondition(format!(
                "(D_{{i+1}} + D_i) dt/dx^2 = {s} exceeds 1 at cell {i}"
            )));
        }
    }
    let to_right: Vec<f64> = (0..n).map(|i| mu * d[(i + 1) % n]).collect();
    let to_left: Vec<f64> = d.iter().map(|x| mu * x).collect();
    let next = exchange(&state.rho, &to_right, &to_left);
    Ok(DiffusionState {
        rho: next,
        n: state.n + 1,
        ..state.clone()
    })
}

/// `Δx Σρ`, summed in index order.
pub fn total_mass(rho: &[f64], dx: f64) -> f64 {
    dx * rho.iter().fold(0.0, |acc, x| acc + x)
}

pub fn min_value(rho: &[f64]) -> f64 {
    rho.iter().copied().fold(f64::INFINITY, f64::min)
}
