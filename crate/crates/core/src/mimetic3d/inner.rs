use super::field::{Field3, FieldKind};
use super::material::{Material, Star};
use crate::error::Result;

/// Weight lattice of each space and whether it divides.
fn weight(space: FieldKind) -> (Star, bool) {
    match space {
        FieldKind::NodeScalar => (Star::LowerA, false),
        FieldKind::DualNodeScalar => (Star::LowerB, false),
        FieldKind::EdgeVector => (Star::UpperA, false),
        FieldKind::DualEdgeVector => (Star::UpperB, false),
        FieldKind::FaceVector => (Star::UpperB, true),
        FieldKind::DualFaceVector => (Star::UpperA, true),
        FieldKind::CellScalar => (Star::LowerB, true),
        FieldKind::DualCellScalar => (Star::LowerA, true),
    }
}

/// Weighted inner product on `space`, times `ΔxΔyΔz`.
///
/// Sums run sequentially over the flat storage order, so the result is
/// reproducible and symmetric in its arguments bit for bit.
pub fn inner(space: FieldKind, f1: &Field3, f2: &Field3, mat: &Material) -> Result<f64> {
    f1.expect_kind(space, "inner product")?;
    f1.check_compatible(f2)?;
    mat.check_grid(f1)?;
    let (star, divide) = weight(space);
    let w = mat.lattice(star);
    let mut acc = 0.0;
    if divide {
        for ((x, y), m) in f1.data().iter().zip(f2.data()).zip(w) {
            acc += (x * y) / m;
        }
    } else {
        for ((x, y), m) in f1.data().iter().zip(f2.data()).zip(w) {
            acc += m * (x * y);
        }
    }
    Ok(acc * f1.grid().cell_volume())
}

/// `⟨f, f⟩` in the field's own space.
pub fn norm_sq(f: &Field3, mat: &Material) -> Result<f64> {
    inner(f.kind(), f, f, mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mimetic3d::GridSpec3;

    #[test]
    fn single_spike() {
        let g = GridSpec3::cube(3, 1.0).unwrap();
        let m = Material::constant(g, 2.0, 1.0, 1.0, 1.0).unwrap();
        let mut f = Field3::zeros(FieldKind::NodeScalar, g);
        f.set(0, 1, 1, 1, 1.0);
        assert_eq!(inner(FieldKind::NodeScalar, &f, &f, &m).unwrap(), 2.0);
    }

    #[test]
    fn symmetric_and_positive() {
        let g = GridSpec3::new(3, 4, 5, 0.3, 0.7, 1.1).unwrap();
        let m = Material::random(g, 0.5, 2.0, 4).unwrap();
        for kind in FieldKind::ALL {
            let f = Field3::random(kind, g, 1);
            let h = Field3::random(kind, g, 2);
            assert_eq!(inner(kind, &f, &h, &m).unwrap(), inner(kind, &h, &f, &m).unwrap());
            assert!(norm_sq(&f, &m).unwrap() > 0.0);
            assert_eq!(norm_sq(&Field3::zeros(kind, g), &m).unwrap(), 0.0);
        }
    }

    #[test]
    fn kind_mismatch() {
        let g = GridSpec3::cube(2, 1.0).unwrap();
        let m = Material::unit(g);
        let f = Field3::zeros(FieldKind::NodeScalar, g);
        let h = Field3::zeros(FieldKind::DualNodeScalar, g);
        assert!(inner(FieldKind::NodeScalar, &f, &h, &m).is_err());
        assert!(inner(FieldKind::EdgeVector, &f, &f, &m).is_err());
    }
}
