use super::field::{Field3, FieldKind};
use super::grid::GridSpec3;
use super::inner::{inner, norm_sq};
use super::material::{apply_material, Material, Star};
use super::ops::{apply_diff, DiffOp};
use crate::error::Result;

/// Relative residuals of the three summation-by-parts identities
///
/// ```text
/// ⟨𝐀Gs, n*⟩_F*    = −⟨s, a⁻¹D*n*⟩_N
/// ⟨𝐁⁻¹Rt, t*⟩_E*  = +⟨t, 𝐀⁻¹R*t*⟩_E
/// ⟨b⁻¹Dn, s*⟩_N*  = −⟨n, 𝐁G*s*⟩_F
/// ```
///
/// each scaled by `‖x‖‖y‖ + ‖x'‖‖y'‖` of the two pairings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjointReport {
    pub adjoint1: f64,
    pub adjoint2: f64,
    pub adjoint3: f64,
}

impl AdjointReport {
    pub fn max(&self) -> f64 {
        self.adjoint1.max(self.adjoint2).max(self.adjoint3)
    }
}

/// Sup-norm residuals of the exactness identities, each scaled by
/// `min(Δ)² / ‖input‖∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactnessReport {
    pub grad_const: f64,
    pub rg: f64,
    pub dr: f64,
    pub gstar_const: f64,
    pub rstar_gstar: f64,
    pub dstar_rstar: f64,
}

impl ExactnessReport {
    pub fn max(&self) -> f64 {
        [
            self.grad_const,
            self.rg,
            self.dr,
            self.gstar_const,
            self.rstar_gstar,
            self.dstar_rstar,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

struct Pairing {
    lhs: f64,
    rhs: f64,
    scale: f64,
}

impl Pairing {
    fn residual(&self, sign: f64) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            (self.lhs - sign * self.rhs).abs() / self.scale
        }
    }
}

fn pairing(
    lhs_space: FieldKind,
    x: &Field3,
    y: &Field3,
    rhs_space: FieldKind,
    x2: &Field3,
    y2: &Field3,
    mat: &Material,
) -> Result<Pairing> {
    let lhs = inner(lhs_space, x, y, mat)?;
    let rhs = inner(rhs_space, x2, y2, mat)?;
    let scale = (norm_sq(x, mat)? * norm_sq(y, mat)?).sqrt() + (norm_sq(x2, mat)? * norm_sq(y2, mat)?).sqrt();
    Ok(Pairing { lhs, rhs, scale })
}

/// Evaluates both sides of each adjoint identity on seeded random fields.
pub fn check_adjoints(grid: &GridSpec3, mat: &Material, seed: u64) -> Result<AdjointReport> {
    let s = Field3::random(FieldKind::NodeScalar, *grid, seed);
    let n_star = Field3::random(FieldKind::DualFaceVector, *grid, seed.wrapping_add(1));
    let t = Field3::random(FieldKind::EdgeVector, *grid, seed.wrapping_add(2));
    let t_star = Field3::random(FieldKind::DualEdgeVector, *grid, seed.wrapping_add(3));
    let n = Field3::random(FieldKind::FaceVector, *grid, seed.wrapping_add(4));
    let s_star = Field3::random(FieldKind::DualNodeScalar, *grid, seed.wrapping_add(5));
    adjoint_residuals(&s, &n_star, &t, &t_star, &n, &s_star, mat)
}

/// [`check_adjoints`] on caller-supplied fields.
pub(crate) fn adjoint_residuals(
    s: &Field3,
    n_star: &Field3,
    t: &Field3,
    t_star: &Field3,
    n: &Field3,
    s_star: &Field3,
    mat: &Material,
) -> Result<AdjointReport> {
    let ags = apply_material(Star::UpperA, &apply_diff(DiffOp::G, s)?, mat)?;
    let adn = apply_material(Star::LowerAInv, &apply_diff(DiffOp::DStar, n_star)?, mat)?;
    let p1 = pairing(
        FieldKind::DualFaceVector,
        &ags,
        n_star,
        FieldKind::NodeScalar,
        s,
        &adn,
        mat,
    )?;

    let brt = apply_material(Star::UpperBInv, &apply_diff(DiffOp::R, t)?, mat)?;
    let art = apply_material(Star::UpperAInv, &apply_diff(DiffOp::RStar, t_star)?, mat)?;
    let p2 = pairing(
        FieldKind::DualEdgeVector,
        &brt,
        t_star,
        FieldKind::EdgeVector,
        t,
        &art,
        mat,
    )?;

    let bdn = apply_material(Star::LowerBInv, &apply_diff(DiffOp::D, n)?, mat)?;
    let bgs = apply_material(Star::UpperB, &apply_diff(DiffOp::GStar, s_star)?, mat)?;
    let p3 = pairing(
        FieldKind::DualNodeScalar,
        &bdn,
        s_star,
        FieldKind::FaceVector,
        n,
        &bgs,
        mat,
    )?;

    Ok(AdjointReport {
        adjoint1: p1.residual(-1.0),
        adjoint2: p2.residual(1.0),
        adjoint3: p3.residual(-1.0),
    })
}

fn scaled_residual(out: &Field3, input: &Field3) -> f64 {
    let scale = input.max_abs();
    if scale == 0.0 {
        return out.max_abs();
    }
    out.max_abs() * input.grid().min_spacing().powi(2) / scale
}

/// Applies each vanishing composition to seeded random inputs.
pub fn check_exactness(grid: &GridSpec3, seed: u64) -> Result<ExactnessReport> {
    let c = Field3::from_fn(FieldKind::NodeScalar, *grid, |_, _| 0.7308);
    let c_star = Field3::from_fn(FieldKind::DualNodeScalar, *grid, |_, _| -1.913);
    let s = Field3::random(FieldKind::NodeScalar, *grid, seed);
    let t = Field3::random(FieldKind::EdgeVector, *grid, seed.wrapping_add(1));
    let s_star = Field3::random(FieldKind::DualNodeScalar, *grid, seed.wrapping_add(2));
    let t_star = Field3::random(FieldKind::DualEdgeVector, *grid, seed.wrapping_add(3));
    Ok(ExactnessReport {
        grad_const: scaled_residual(&apply_diff(DiffOp::G, &c)?, &c),
        rg: scaled_residual(&apply_diff(DiffOp::R, &apply_diff(DiffOp::G, &s)?)?, &s),
        dr: scaled_residual(&apply_diff(DiffOp::D, &apply_diff(DiffOp::R, &t)?)?, &t),
        gstar_const: scaled_residual(&apply_diff(DiffOp::GStar, &c_star)?, &c_star),
        rstar_gstar: scaled_residual(
            &apply_diff(DiffOp::RStar, &apply_diff(DiffOp::GStar, &s_star)?)?,
            &s_star,
        ),
        dstar_rstar: scaled_residual(
            &apply_diff(DiffOp::DStar, &apply_diff(DiffOp::RStar, &t_star)?)?,
            &t_star,
        ),
    })
}
