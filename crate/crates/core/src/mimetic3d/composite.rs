use super::field::{Field3, FieldKind};
use super::inner::inner;
use super::material::{apply_material, Material, Star};
use super::ops::{apply_diff, DiffOp};
use crate::error::{positive, Result};
use crate::linalg;

/// Second order operators built by chasing the exact-sequence diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SecondOrder {
    /// `a⁻¹ D* 𝐀 G` on `S_N`.
    LaplacianP,
    /// `D* 𝐀 G a⁻¹` on `S_C*`.
    LaplacianV,
    /// `𝐀⁻¹ R* 𝐁⁻¹ R` on `V_E`.
    CurlCurlC,
    /// `R* 𝐁⁻¹ R 𝐀⁻¹` on `V_F*`.
    CurlCurlS,
    /// `b⁻¹ D 𝐁 G*` on `S_N*`.
    LaplacianPStar,
    /// `𝐁⁻¹ R 𝐀⁻¹ R*` on `V_E*`.
    CurlCurlCStar,
}

enum Link {
    Diff(DiffOp),
    Mat(Star),
}

impl SecondOrder {
    /// Space the operator maps into itself; it is self-adjoint in this
    /// space's inner product.
    pub fn space(self) -> FieldKind {
        match self {
            SecondOrder::LaplacianP => FieldKind::NodeScalar,
            SecondOrder::LaplacianV => FieldKind::DualCellScalar,
            SecondOrder::CurlCurlC => FieldKind::EdgeVector,
            SecondOrder::CurlCurlS => FieldKind::DualFaceVector,
            SecondOrder::LaplacianPStar => FieldKind::DualNodeScalar,
            SecondOrder::CurlCurlCStar => FieldKind::DualEdgeVector,
        }
    }

    /// Laplacians are negative semidefinite, curl-curls positive.
    pub fn is_negative(self) -> bool {
        matches!(
            self,
            SecondOrder::LaplacianP | SecondOrder::LaplacianV | SecondOrder::LaplacianPStar
        )
    }

    /// Chain in application order (rightmost factor first).
    fn chain(self) -> [Link; 4] {
        use Link::{Diff, Mat};
        match self {
            SecondOrder::LaplacianP => [
                Diff(DiffOp::G),
                Mat(Star::UpperA),
                Diff(DiffOp::DStar),
                Mat(Star::LowerAInv),
            ],
            SecondOrder::LaplacianV => [
                Mat(Star::LowerAInv),
                Diff(DiffOp::G),
                Mat(Star::UpperA),
                Diff(DiffOp::DStar),
            ],
            SecondOrder::CurlCurlC => [
                Diff(DiffOp::R),
                Mat(Star::UpperBInv),
                Diff(DiffOp::RStar),
                Mat(Star::UpperAInv),
            ],
            SecondOrder::CurlCurlS => [
                Mat(Star::UpperAInv),
                Diff(DiffOp::R),
                Mat(Star::UpperBInv),
                Diff(DiffOp::RStar),
            ],
            SecondOrder::LaplacianPStar => [
                Diff(DiffOp::GStar),
                Mat(Star::UpperB),
                Diff(DiffOp::D),
                Mat(Star::LowerBInv),
            ],
            SecondOrder::CurlCurlCStar => [
                Diff(DiffOp::RStar),
                Mat(Star::UpperAInv),
                Diff(DiffOp::R),
                Mat(Star::UpperBInv),
            ],
        }
    }
}

/// Applies the composite; every intermediate kind is checked by the
/// constituent operators.
pub fn second_order(op: SecondOrder, mat: &Material, f: &Field3) -> Result<Field3> {
    f.expect_kind(op.space(), &format!("{op:?}"))?;
    let mut cur = f.clone();
    for link in op.chain() {
        cur = match link {
            Link::Diff(d) => apply_diff(d, &cur)?,
            Link::Mat(s) => apply_material(s, &cur, mat)?,
        };
    }
    Ok(cur)
}

/// Power-iteration estimate of `‖op‖` in the weighted inner product of its
/// space, to relative eigen-residual `tol`.
pub fn operator_norm_estimate(op: SecondOrder, mat: &Material, tol: f64) -> Result<f64> {
    positive("tol", tol)?;
    let grid = *mat.grid();
    grid.validate()?;
    let kind = op.space();
    let dim = kind.components() * grid.len();
    let wrap = |x: &[f64]| Field3::raw(kind, grid, x.to_vec());
    let est = linalg::power_iteration(
        dim,
        |x| second_order(op, mat, &wrap(x)).expect("kind checked").into_data(),
        |x, y| inner(kind, &wrap(x), &wrap(y), mat).expect("kind checked"),
        tol,
        1_000_000,
        linalg::DEFAULT_SEED,
    );
    Ok(est.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mimetic3d::GridSpec3;

    const ALL: [SecondOrder; 6] = [
        SecondOrder::LaplacianP,
        SecondOrder::LaplacianV,
        SecondOrder::CurlCurlC,
        SecondOrder::CurlCurlS,
        SecondOrder::LaplacianPStar,
        SecondOrder::CurlCurlCStar,
    ];

    #[test]
    fn kinds_close_up() {
        let g = GridSpec3::cube(3, 1.0).unwrap();
        let m = Material::random(g, 0.5, 2.0, 1).unwrap();
        for op in ALL {
            let out = second_order(op, &m, &Field3::random(op.space(), g, 2)).unwrap();
            assert_eq!(out.kind(), op.space());
        }
        assert!(second_order(SecondOrder::LaplacianP, &m, &Field3::zeros(FieldKind::EdgeVector, g)).is_err());
    }

    #[test]
    fn laplacian_of_constant() {
        let g = GridSpec3::cube(4, 1.0).unwrap();
        let m = Material::random(g, 0.5, 2.0, 7).unwrap();
        let c = Field3::from_fn(FieldKind::NodeScalar, g, |_, _| 2.5);
        assert_eq!(second_order(SecondOrder::LaplacianP, &m, &c).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn unit_laplacian_norm() {
        let g = GridSpec3::cube(4, 1.0).unwrap();
        let n = operator_norm_estimate(SecondOrder::LaplacianP, &Material::unit(g), 1e-10).unwrap();
        assert!((n - 12.0).abs() < 1e-9, "{n}");
    }
}
