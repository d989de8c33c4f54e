//! The linear harmonic oscillator `u'' + ω² u = 0` written as the first order
//! system `u' = ω v`, `v' = −ω u`.
//!
//! Three discretizations are provided: the explicit leapfrog scheme on a
//! staggered time grid, the direct three-level recursion for the second order
//! equation, and the implicit Crank–Nicolson scheme.

use crate::error::{positive, Error, Result};

/// Leapfrog state: `u` at integer step `n`, `v_half` at step `n + 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscState {
    pub u: f64,
    pub v_half: f64,
    pub n: u64,
    pub dt: f64,
    pub omega: f64,
}

impl OscState {
    pub fn new(u: f64, v_half: f64, omega: f64, dt: f64) -> Result<Self> {
        check_params(omega, dt)?;
        if !(u.is_finite() && v_half.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "state",
                reason: "non-finite entry".into(),
            });
        }
        Ok(Self {
            u,
            v_half,
            n: 0,
            dt,
            omega,
        })
    }

    /// Max-norm of the stored pair.
    pub fn norm(&self) -> f64 {
        self.u.abs().max(self.v_half.abs())
    }
}

fn check_params(omega: f64, dt: f64) -> Result<()> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidFrequency(omega));
    }
    positive("dt", dt)?;
    Ok(())
}

/// Staggered start from `u(0)` and `u'(0)`: `v^{1/2} = u'(0) / ω`.
pub fn init_half(u0: f64, du0: f64, omega: f64, dt: f64) -> Result<OscState> {
    check_params(omega, dt)?;
    OscState::new(u0, du0 / omega, omega, dt)
}

/// Staggered start from the collocated pair `u(0)`, `v(0)`:
/// `v^{1/2} = v(0) − (Δt/2) ω u(0)`.
pub fn init_from_pair(u0: f64, v0: f64, omega: f64, dt: f64) -> Result<OscState> {
    check_params(omega, dt)?;
    OscState::new(u0, v0 - 0.5 * dt * omega * u0, omega, dt)
}

/// One leapfrog step. `u` is advanced first and the new `u` drives `v`.
pub fn leapfrog_step(state: &OscState) -> Result<OscState> {
    let k = state.dt * state.omega;
    let u = state.u + k * state.v_half;
    let v_half = state.v_half - k * u;
    let n = state.n + 1;
    if !(u.is_finite() && v_half.is_finite()) {
        return Err(Error::Instability { step: n });
    }
    Ok(OscState { u, v_half, n, ..*state })
}

/// Growth factor past which a trajectory is declared unstable.
pub const INSTABILITY_GROWTH: f64 = 1e12;

/// Runs `n_steps` leapfrog steps and returns every state including the
/// initial one. Fails with [`Error::Instability`] when a value becomes
/// non-finite or the max-norm exceeds [`INSTABILITY_GROWTH`] times its
/// initial value.
pub fn run_leapfrog(start: OscState, n_steps: usize) -> Result<Vec<OscState>> {
    let limit = INSTABILITY_GROWTH * start.norm();
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(start);
    let mut s = start;
    for _ in 0..n_steps {
        s = leapfrog_step(&s)?;
        if limit > 0.0 && s.norm() > limit {
            return Err(Error::Instability { step: s.n });
        }
        out.push(s);
    }
    Ok(out)
}

/// State of the direct second order recursion: `u^{n-1}` and `u^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscSecondOrderState {
    pub u_prev: f64,
    pub u_curr: f64,
    pub n: u64,
    pub dt: f64,
    pub omega: f64,
}

impl OscSecondOrderState {
    /// State at `n = 1` holding `(u^0, u^1)`.
    pub fn new(u0: f64, u1: f64, omega: f64, dt: f64) -> Result<Self> {
        check_params(omega, dt)?;
        Ok(Self {
            u_prev: u0,
            u_curr: u1,
            n: 1,
            dt,
            omega,
        })
    }
}

/// `u^{n+1} = (2 − (ωΔt)²) u^n − u^{n−1}`.
pub fn second_order_step(state: &OscSecondOrderState) -> Result<OscSecondOrderState> {
    let k = state.omega * state.dt;
    let next = (2.0 - k * k) * state.u_curr - state.u_prev;
    let n = state.n + 1;
    if !next.is_finite() {
        return Err(Error::Instability { step: n });
    }
    Ok(OscSecondOrderState {
        u_prev: state.u_curr,
        u_curr: next,
        n,
        ..*state
    })
}

/// The sequence `u^0, …, u^{n_steps}` of the direct recursion seeded with
/// `u^0 = u0`, `u^1 = u1`. For `n_steps == 0` only `u0` is returned.
pub fn second_order_run(u0: f64, u1: f64, omega: f64, dt: f64, n_steps: usize) -> Result<Vec<f64>> {
    let mut state = OscSecondOrderState::new(u0, u1, omega, dt)?;
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(u0);
    if n_steps == 0 {
        return Ok(out);
    }
    out.push(u1);
    for _ in 1..n_steps {
        state = second_order_step(&state)?;
        out.push(state.u_curr);
    }
    Ok(out)
}

/// Collocated Crank–Nicolson state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CNState {
    pub u: f64,
    pub v: f64,
    pub n: u64,
    pub dt: f64,
    pub omega: f64,
}

impl CNState {
    pub fn new(u: f64, v: f64, omega: f64, dt: f64) -> Result<Self> {
        check_params(omega, dt)?;
        Ok(Self { u, v, n: 0, dt, omega })
    }

    /// `(u² + v²) / 2`, exactly conserved by the scheme.
    pub fn energy(&self) -> f64 {
        0.5 * (self.u * self.u + self.v * self.v)
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `(β + γ)² + s² − 1 = 2βγ + γ² + s²` for `β = ±1`, accurate to well
/// below one ulp.
fn rotation_defect(base: f64, gamma: f64, s: f64) -> f64 {
    let (pg, ps) = (gamma * gamma, s * s);
    let (eg, es) = (gamma.mul_add(gamma, -pg), s.mul_add(s, -ps));
    let (a, ea) = two_sum(2.0 * base * gamma, pg);
    let (b, eb) = two_sum(a, ps);
    b + (((ea + eb) + eg) + es)
}

fn ulp_step(x: f64, k: i64) -> f64 {
    let mut y = x;
    for _ in 0..k.unsigned_abs() {
        y = if k > 0 { y.next_up() } else { y.next_down() };
    }
    y
}

/// Coefficients `(β, γ, s)` of the Crank–Nicolson rotation
/// `u' = βu + (γu − sv)`, `v' = βv + (su + γv)`, where the cosine
/// `(1 − h²)/(1 + h²)` is split as `β + γ` with `β = ±1` its nearest sign
/// and `s = 2h/(1 + h²)`. `γ` and `s` are rounded jointly to the pair within
/// a few ulps whose `(β + γ)² + s²` is closest to one.
pub fn cn_coefficients(h: f64) -> (f64, f64, f64) {
    let det = 1.0 + h * h;
    let s0 = 2.0 * h / det;
    let (base, g0) = if h * h <= 1.0 {
        (1.0, -2.0 * h * h / det)
    } else {
        (-1.0, 2.0 / det)
    };
    let mut best = (g0, s0, rotation_defect(base, g0, s0).abs());
    for i in -8..=8 {
        for j in -8..=8 {
            let (g, s) = (ulp_step(g0, i), ulp_step(s0, j));
            let d = rotation_defect(base, g, s).abs();
            if d < best.2 {
                best = (g, s, d);
            }
        }
    }
    (base, best.0, best.1)
}

/// One Crank–Nicolson step: solves
///
/// ```text
/// u' + h v' = u − h v
/// v' − h u' = v + h u,      h = ωΔt/2
/// ```
///
/// through its closed-form inverse, the rotation from [`cn_coefficients`].
pub fn crank_nicolson_step(state: &CNState) -> CNState {
    let (b, g, s) = cn_coefficients(0.5 * state.dt * state.omega);
    let (u, v) = (state.u, state.v);
    CNState {
        u: b * u + (g * u - s * v),
        v: b * v + (s * u + g * v),
        n: state.n + 1,
        ..*state
    }
}

/// Which conserved or energy-like quantity to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConservedKind {
    /// `C^n = ½[(1 − α²)(u^n)² + ((v^{n+1/2} + v^{n−1/2})/2)²]`, `α = ωΔt/2`.
    Cn,
    /// `C^{n+1/2} = ½[((u^{n+1} + u^n)/2)² + (1 − α²)(v^{n+1/2})²]`.
    CHalf,
    /// `(1 − α²)(u^n)² + ((u^{n+1} − u^{n−1})/(2ωΔt))²`.
    CSecondOrder,
    /// `((u')² + (ωu)²)/2` with the centered difference for `u'`.
    EClassical,
}

/// Consecutive states over which a conserved quantity is evaluated.
///
/// * `Staggered(w)`: `CHalf` at level `w[0].n + 1/2` and `Cn` at `w[1].n` use
///   `w[0..2]`; `CSecondOrder` and `EClassical` at `w[1].n` use `w[0..3]`.
/// * `SecondOrder(w)`: states `(u^{n−1}, u^n)` and `(u^n, u^{n+1})`;
///   `CSecondOrder` and `EClassical` are evaluated at `w[0].n`.
#[derive(Debug, Clone, Copy)]
pub enum OscWindow<'a> {
    Staggered(&'a [OscState]),
    SecondOrder(&'a [OscSecondOrderState]),
}

fn need(len: usize, min: usize, kind: ConservedKind) -> Result<()> {
    if len < min {
        return Err(Error::InvalidWindow(format!(
            "{kind:?} needs {min} consecutive states, got {len}"
        )));
    }
    Ok(())
}

fn check_staggered(w: &[OscState]) -> Result<()> {
    for p in w.windows(2) {
        if p[1].n != p[0].n + 1 || p[1].dt != p[0].dt || p[1].omega != p[0].omega {
            return Err(Error::InvalidWindow(format!(
                "states at steps {} and {} are not consecutive",
                p[0].n, p[1].n
            )));
        }
    }
    Ok(())
}

fn check_second_order(w: &[OscSecondOrderState]) -> Result<()> {
    for p in w.windows(2) {
        if p[1].n != p[0].n + 1 || p[1].u_prev != p[0].u_curr || p[1].dt != p[0].dt || p[1].omega != p[0].omega {
            return Err(Error::InvalidWindow(format!(
                "states at steps {} and {} are not consecutive",
                p[0].n, p[1].n
            )));
        }
    }
    Ok(())
}

fn c_second_order(u_prev: f64, u: f64, u_next: f64, omega: f64, dt: f64) -> f64 {
    let alpha = 0.5 * omega * dt;
    let d = (u_next - u_prev) / (2.0 * omega * dt);
    (1.0 - alpha * alpha) * u * u + d * d
}

fn e_classical(u_prev: f64, u: f64, u_next: f64, omega: f64, dt: f64) -> f64 {
    let du = (u_next - u_prev) / (2.0 * dt);
    0.5 * (du * du + (omega * u) * (omega * u))
}

pub fn conserved(window: OscWindow<'_>, kind: ConservedKind) -> Result<f64> {
    match window {
        OscWindow::Staggered(w) => {
            check_staggered(w)?;
            let alpha2 = |s: &OscState| (0.5 * s.omega * s.dt).powi(2);
            match kind {
                ConservedKind::CHalf => {
                    need(w.len(), 2, kind)?;
                    let avg = 0.5 * (w[1].u + w[0].u);
                    Ok(0.5 * (avg * avg + (1.0 - alpha2(&w[0])) * w[0].v_half * w[0].v_half))
                }
                ConservedKind::Cn => {
                    need(w.len(), 2, kind)?;
                    let avg = 0.5 * (w[1].v_half + w[0].v_half);
                    Ok(0.5 * ((1.0 - alpha2(&w[1])) * w[1].u * w[1].u + avg * avg))
                }
                ConservedKind::CSecondOrder => {
                    need(w.len(), 3, kind)?;
                    Ok(c_second_order(w[0].u, w[1].u, w[2].u, w[1].omega, w[1].dt))
                }
                ConservedKind::EClassical => {
                    need(w.len(), 3, kind)?;
                    Ok(e_classical(w[0].u, w[1].u, w[2].u, w[1].omega, w[1].dt))
                }
            }
        }
        OscWindow::SecondOrder(w) => {
            check_second_order(w)?;
            match kind {
                ConservedKind::CSecondOrder => {
                    need(w.len(), 2, kind)?;
                    Ok(c_second_order(
                        w[0].u_prev,
                        w[0].u_curr,
                        w[1].u_curr,
                        w[0].omega,
                        w[0].dt,
                    ))
                }
                ConservedKind::EClassical => {
                    need(w.len(), 2, kind)?;
                    Ok(e_classical(w[0].u_prev, w[0].u_curr, w[1].u_curr, w[0].omega, w[0].dt))
                }
                ConservedKind::Cn | ConservedKind::CHalf => Err(Error::InvalidWindow(format!(
                    "{kind:?} needs staggered states, got a second order window"
                ))),
            }
        }
    }
}

/// The uncorrected candidate `½[(u^n)² + ((v^{n+1/2} + v^{n−1/2})/2)²]` at
/// level `w[1].n`. It is not conserved; it changes by
/// `(ω²Δt²/8)((u^{n+1})² − (u^n)²)` per step.
pub fn uncorrected_cn(w: &[OscState]) -> Result<f64> {
    check_staggered(w)?;
    need(w.len(), 2, ConservedKind::Cn)?;
    let avg = 0.5 * (w[1].v_half + w[0].v_half);
    Ok(0.5 * (w[1].u * w[1].u + avg * avg))
}
