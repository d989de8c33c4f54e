//! Mimetic leapfrog for the 3D scalar wave system `u' = a⁻¹D*v`,
//! `v' = 𝐀Gu`, and its mirror on the dual grid `u' = b⁻¹Dv`, `v' = 𝐁G*u`.

use crate::error::{positive, Error, Result};
use crate::mimetic3d::{
    apply_diff, apply_material, norm_sq, operator_norm_estimate, second_order, DiffOp, Field3, FieldKind, Material,
    SecondOrder, Star,
};
use std::sync::Arc;

/// Which of the two mirrored schemes a state follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarVariant {
    /// `u ∈ S_N`, `v ∈ V_F*`.
    Primal,
    /// `u ∈ S_N*`, `v ∈ V_F`.
    Starred,
}

impl ScalarVariant {
    pub fn u_kind(self) -> FieldKind {
        match self {
            ScalarVariant::Primal => FieldKind::NodeScalar,
            ScalarVariant::Starred => FieldKind::DualNodeScalar,
        }
    }

    pub fn v_kind(self) -> FieldKind {
        match self {
            ScalarVariant::Primal => FieldKind::DualFaceVector,
            ScalarVariant::Starred => FieldKind::FaceVector,
        }
    }

    pub fn from_u_kind(kind: FieldKind) -> Result<Self> {
        match kind {
            FieldKind::NodeScalar => Ok(ScalarVariant::Primal),
            FieldKind::DualNodeScalar => Ok(ScalarVariant::Starred),
            k => Err(Error::Signature(format!("scalar wave u must be S_N or S_N*, got {k}"))),
        }
    }

    /// Composite `L` with `u'' = L u`.
    pub fn laplacian(self) -> SecondOrder {
        match self {
            ScalarVariant::Primal => SecondOrder::LaplacianP,
            ScalarVariant::Starred => SecondOrder::LaplacianPStar,
        }
    }

    /// `a⁻¹D*v` (primal) or `b⁻¹Dv` (starred).
    pub fn u_rate(self, v: &Field3, mat: &Material) -> Result<Field3> {
        match self {
            ScalarVariant::Primal => apply_material(Star::LowerAInv, &apply_diff(DiffOp::DStar, v)?, mat),
            ScalarVariant::Starred => apply_material(Star::LowerBInv, &apply_diff(DiffOp::D, v)?, mat),
        }
    }

    /// `𝐀Gu` (primal) or `𝐁G*u` (starred).
    pub fn v_rate(self, u: &Field3, mat: &Material) -> Result<Field3> {
        match self {
            ScalarVariant::Primal => apply_material(Star::UpperA, &apply_diff(DiffOp::G, u)?, mat),
            ScalarVariant::Starred => apply_material(Star::UpperB, &apply_diff(DiffOp::GStar, u)?, mat),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScalarWaveState {
    pub u: Field3,
    pub v_half: Field3,
    pub mat: Arc<Material>,
    pub variant: ScalarVariant,
    pub n: u64,
    pub dt: f64,
}

impl ScalarWaveState {
    pub fn new(u: Field3, v_half: Field3, mat: Arc<Material>, dt: f64) -> Result<Self> {
        positive("dt", dt)?;
        let variant = ScalarVariant::from_u_kind(u.kind())?;
        v_half.expect_kind(variant.v_kind(), "scalar wave v")?;
        if u.grid() != mat.grid() || v_half.grid() != mat.grid() {
            return Err(Error::Signature("fields and material live on different grids".into()));
        }
        Ok(Self {
            u,
            v_half,
            mat,
            variant,
            n: 0,
            dt,
        })
    }

    pub fn norm(&self) -> f64 {
        self.u.max_abs().max(self.v_half.max_abs())
    }
}

/// `v^{1/2} = v⁰ + (Δt/2)𝐀Gu⁰` (or `𝐁G*u⁰` for the starred variant, chosen
/// by the kind of `u0`).
pub fn init_v_half(u0: Field3, v0: &Field3, mat: Arc<Material>, dt: f64) -> Result<ScalarWaveState> {
    let variant = ScalarVariant::from_u_kind(u0.kind())?;
    v0.expect_kind(variant.v_kind(), "scalar wave v")?;
    let rate = variant.v_rate(&u0, &mat)?;
    let v_half = v0.add_scaled(0.5 * dt, &rate)?;
    ScalarWaveState::new(u0, v_half, mat, dt)
}

pub fn leapfrog_step(state: &ScalarWaveState) -> Result<ScalarWaveState> {
    let var = state.variant;
    let u = state.u.add_scaled(state.dt, &var.u_rate(&state.v_half, &state.mat)?)?;
    let v_half = state.v_half.add_scaled(state.dt, &var.v_rate(&u, &state.mat)?)?;
    let n = state.n + 1;
    if !(u.is_finite() && v_half.is_finite()) {
        return Err(Error::Instability { step: n });
    }
    Ok(ScalarWaveState {
        u,
        v_half,
        mat: Arc::clone(&state.mat),
        variant: var,
        n,
        dt: state.dt,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConservedKind {
    /// `‖(u^{n+1}+u^n)/2‖² + ‖v^{n+1/2}‖² − (Δt²/4)‖a⁻¹D*v^{n+1/2}‖²` at
    /// `w[0].n + 1/2`.
    CHalf,
    /// `‖u^n‖² − (Δt²/4)‖𝐀Gu^n‖² + ‖(v^{n+1/2}+v^{n−1/2})/2‖²` at `w[1].n`.
    Cn,
}

fn check_window(w: &[ScalarWaveState], min: usize) -> Result<()> {
    if w.len() < min {
        return Err(Error::InvalidWindow(format!(
            "need {min} consecutive states, got {}",
            w.len()
        )));
    }
    for p in w.windows(2) {
        if p[1].n != p[0].n + 1 || p[1].dt != p[0].dt || p[1].variant != p[0].variant {
            return Err(Error::InvalidWindow(format!(
                "states at steps {} and {} are not consecutive",
                p[0].n, p[1].n
            )));
        }
    }
    Ok(())
}

/// Weighted-norm conserved quantities over consecutive states.
pub fn conserved(w: &[ScalarWaveState], kind: ConservedKind) -> Result<f64> {
    check_window(w, 2)?;
    let (mat, var, dt) = (&*w[0].mat, w[0].variant, w[0].dt);
    let c3 = 0.25 * dt * dt;
    Ok(match kind {
        ConservedKind::CHalf => {
            norm_sq(&w[1].u.average(&w[0].u)?, mat)? + norm_sq(&w[0].v_half, mat)?
                - c3 * norm_sq(&var.u_rate(&w[0].v_half, mat)?, mat)?
        }
        ConservedKind::Cn => {
            norm_sq(&w[1].u, mat)? - c3 * norm_sq(&var.v_rate(&w[1].u, mat)?, mat)?
                + norm_sq(&w[1].v_half.average(&w[0].v_half)?, mat)?
        }
    })
}

/// `‖R(𝐀⁻¹v)‖∞` (primal) or `‖R*(𝐁⁻¹v)‖∞` (starred).
pub fn curl_diagnostic(state: &ScalarWaveState) -> Result<f64> {
    let curl = match state.variant {
        ScalarVariant::Primal => apply_diff(DiffOp::R, &apply_material(Star::UpperAInv, &state.v_half, &state.mat)?)?,
        ScalarVariant::Starred => apply_diff(
            DiffOp::RStar,
            &apply_material(Star::UpperBInv, &state.v_half, &state.mat)?,
        )?,
    };
    Ok(curl.max_abs())
}

/// `Δt_max = 2/√‖L‖` with `L` the variant's Laplacian composite.
pub fn dt_max(mat: &Material, variant: ScalarVariant, tol: f64) -> Result<f64> {
    Ok(2.0 / operator_norm_estimate(variant.laplacian(), mat, tol)?.sqrt())
}

/// `‖(u^{n+1} − 2u^n + u^{n−1})/Δt² − L u^n‖∞` at `w[1].n`.
pub fn second_order_residual(w: &[ScalarWaveState]) -> Result<f64> {
    check_window(w, 3)?;
    let lu = second_order(w[1].variant.laplacian(), &w[1].mat, &w[1].u)?;
    let dt2 = w[0].dt * w[0].dt;
    let (a, b, c) = (w[0].u.data(), w[1].u.data(), w[2].u.data());
    Ok((0..a.len()).fold(0.0_f64, |m, i| {
        m.max(((c[i] - 2.0 * b[i] + a[i]) / dt2 - lu.data()[i]).abs())
    }))
}
