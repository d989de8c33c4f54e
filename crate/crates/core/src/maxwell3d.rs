//! Source-free Maxwell equations `εE' = R*H`, `μH' = −RE` on the dual-grid
//! lattice. With `ε = μ = 1` the update is the Yee scheme.

use crate::error::{positive, Error, Result};
use crate::mimetic3d::{
    apply_diff, apply_material, norm_sq, operator_norm_estimate, second_order, DiffOp, Field3, FieldKind, Material,
    SecondOrder, Star,
};
use std::sync::Arc;

/// Initial divergences `D*(εE)` and `D(μH)` against which drift is measured.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReference {
    pub div_e: Field3,
    pub div_h: Field3,
}

/// `E ∈ V_E` at step `n`, `H ∈ V_E*` at `n + 1/2`. `ε` is the `𝐀` lattice
/// and `μ` the `𝐁` lattice of `mat`.
#[derive(Debug, Clone)]
pub struct MaxwellState {
    pub e: Field3,
    pub h_half: Field3,
    pub mat: Arc<Material>,
    pub reference: Arc<DivergenceReference>,
    pub n: u64,
    pub dt: f64,
}

impl MaxwellState {
    pub fn norm(&self) -> f64 {
        self.e.max_abs().max(self.h_half.max_abs())
    }
}

fn div_e(e: &Field3, mat: &Material) -> Result<Field3> {
    apply_diff(DiffOp::DStar, &apply_material(Star::UpperA, e, mat)?)
}

fn div_h(h: &Field3, mat: &Material) -> Result<Field3> {
    apply_diff(DiffOp::D, &apply_material(Star::UpperB, h, mat)?)
}

/// `ε⁻¹R*H`.
pub fn e_rate(h: &Field3, mat: &Material) -> Result<Field3> {
    apply_material(Star::UpperAInv, &apply_diff(DiffOp::RStar, h)?, mat)
}

/// `μ⁻¹RE`.
pub fn h_rate(e: &Field3, mat: &Material) -> Result<Field3> {
    apply_material(Star::UpperBInv, &apply_diff(DiffOp::R, e)?, mat)
}

/// `H^{1/2} = H⁰ − (Δt/2)μ⁻¹RE⁰`; records the initial divergences.
pub fn init_h_half(e0: Field3, h0: &Field3, mat: Arc<Material>, dt: f64) -> Result<MaxwellState> {
    positive("dt", dt)?;
    e0.expect_kind(FieldKind::EdgeVector, "E")?;
    h0.expect_kind(FieldKind::DualEdgeVector, "H")?;
    if e0.grid() != mat.grid() || h0.grid() != mat.grid() {
        return Err(Error::Signature("fields and material live on different grids".into()));
    }
    let h_half = h0.add_scaled(-0.5 * dt, &h_rate(&e0, &mat)?)?;
    let reference = Arc::new(DivergenceReference {
        div_e: div_e(&e0, &mat)?,
        div_h: div_h(&h_half, &mat)?,
    });
    Ok(MaxwellState {
        e: e0,
        h_half,
        mat,
        reference,
        n: 0,
        dt,
    })
}

pub fn leapfrog_step(state: &MaxwellState) -> Result<MaxwellState> {
    let e = state.e.add_scaled(state.dt, &e_rate(&state.h_half, &state.mat)?)?;
    let h_half = state.h_half.add_scaled(-state.dt, &h_rate(&e, &state.mat)?)?;
    let n = state.n + 1;
    if !(e.is_finite() && h_half.is_finite()) {
        return Err(Error::Instability { step: n });
    }
    Ok(MaxwellState {
        e,
        h_half,
        mat: Arc::clone(&state.mat),
        reference: Arc::clone(&state.reference),
        n,
        dt: state.dt,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConservedKind {
    /// `‖(E^{n+1}+E^n)/2‖²_E + ‖H^{n+1/2}‖²_E* − (Δt²/4)‖ε⁻¹R*H^{n+1/2}‖²_E`
    /// at `w[0].n + 1/2`.
    CHalf,
    /// `‖E^n‖²_E − (Δt²/4)‖μ⁻¹RE^n‖²_E* + ‖(H^{n+1/2}+H^{n−1/2})/2‖²_E*` at
    /// `w[1].n`.
    Cn,
}

fn check_window(w: &[MaxwellState], min: usize) -> Result<()> {
    if w.len() < min {
        return Err(Error::InvalidWindow(format!(
            "need {min} consecutive states, got {}",
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

/// `ε`-weighted norms on `V_E` and `μ`-weighted norms on `V_E*`.
pub fn conserved(w: &[MaxwellState], kind: ConservedKind) -> Result<f64> {
    check_window(w, 2)?;
    let (mat, dt) = (&*w[0].mat, w[0].dt);
    let c3 = 0.25 * dt * dt;
    Ok(match kind {
        ConservedKind::CHalf => {
            norm_sq(&w[1].e.average(&w[0].e)?, mat)? + norm_sq(&w[0].h_half, mat)?
                - c3 * norm_sq(&e_rate(&w[0].h_half, mat)?, mat)?
        }
        ConservedKind::Cn => {
            norm_sq(&w[1].e, mat)? - c3 * norm_sq(&h_rate(&w[1].e, mat)?, mat)?
                + norm_sq(&w[1].h_half.average(&w[0].h_half)?, mat)?
        }
    })
}

/// Sup-norm drift of `D*(εE)` and `D(μH)` from their initial values.
pub fn divergence_diagnostics(state: &MaxwellState) -> Result<(f64, f64)> {
    let de = div_e(&state.e, &state.mat)?.max_abs_diff(&state.reference.div_e)?;
    let dh = div_h(&state.h_half, &state.mat)?.max_abs_diff(&state.reference.div_h)?;
    Ok((de, dh))
}

/// `Δt_max = 2/√‖ε⁻¹R*μ⁻¹R‖`.
pub fn cfl_estimate(mat: &Material, tol: f64) -> Result<f64> {
    Ok(2.0 / operator_norm_estimate(SecondOrder::CurlCurlC, mat, tol)?.sqrt())
}

/// `‖(E^{n+1} − 2E^n + E^{n−1})/Δt² + ε⁻¹R*μ⁻¹RE^n‖∞` at `w[1].n`.
pub fn second_order_residual(w: &[MaxwellState]) -> Result<f64> {
    check_window(w, 3)?;
    let ce = second_order(SecondOrder::CurlCurlC, &w[1].mat, &w[1].e)?;
    let dt2 = w[0].dt * w[0].dt;
    let (a, b, c) = (w[0].e.data(), w[1].e.data(), w[2].e.data());
    Ok((0..a.len()).fold(0.0_f64, |m, i| {
        m.max(((c[i] - 2.0 * b[i] + a[i]) / dt2 + ce.data()[i]).abs())
    }))
}
