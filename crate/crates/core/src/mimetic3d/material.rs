use super::field::{Field3, FieldKind};
use super::grid::GridSpec3;
use crate::error::{Error, Result};
use crate::linalg;

/// Pointwise star (material) multiplications and their inverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Star {
    /// `a: S_N → S_C*`
    LowerA,
    /// `b: S_N* → S_C`
    LowerB,
    /// `𝐀: V_E → V_F*`
    UpperA,
    /// `𝐁: V_E* → V_F`
    UpperB,
    /// `a⁻¹: S_C* → S_N`
    LowerAInv,
    /// `b⁻¹: S_C → S_N*`
    LowerBInv,
    /// `𝐀⁻¹: V_F* → V_E`
    UpperAInv,
    /// `𝐁⁻¹: V_F → V_E*`
    UpperBInv,
}

impl Star {
    pub fn domain(self) -> FieldKind {
        match self {
            Star::LowerA => FieldKind::NodeScalar,
            Star::LowerB => FieldKind::DualNodeScalar,
            Star::UpperA => FieldKind::EdgeVector,
            Star::UpperB => FieldKind::DualEdgeVector,
            Star::LowerAInv => FieldKind::DualCellScalar,
            Star::LowerBInv => FieldKind::CellScalar,
            Star::UpperAInv => FieldKind::DualFaceVector,
            Star::UpperBInv => FieldKind::FaceVector,
        }
    }

    pub fn codomain(self) -> FieldKind {
        self.inverse().domain()
    }

    pub fn inverse(self) -> Star {
        match self {
            Star::LowerA => Star::LowerAInv,
            Star::LowerB => Star::LowerBInv,
            Star::UpperA => Star::UpperAInv,
            Star::UpperB => Star::UpperBInv,
            Star::LowerAInv => Star::LowerA,
            Star::LowerBInv => Star::LowerB,
            Star::UpperAInv => Star::UpperA,
            Star::UpperBInv => Star::UpperB,
        }
    }

    fn is_inverse(self) -> bool {
        matches!(
            self,
            Star::LowerAInv | Star::LowerBInv | Star::UpperAInv | Star::UpperBInv
        )
    }
}

/// Scalar-diagonal material lattices.
///
/// `a` sits at primal nodes, `b` at cell centers, `𝐀` at the three edge
/// component sites and `𝐁` at the three face component sites.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    grid: GridSpec3,
    a: Vec<f64>,
    b: Vec<f64>,
    upper_a: Vec<f64>,
    upper_b: Vec<f64>,
}

fn check_positive(name: &'static str, v: &[f64], len: usize) -> Result<()> {
    if v.len() != len {
        return Err(Error::Shape(format!(
            "material `{name}` needs {len} values, got {}",
            v.len()
        )));
    }
    if let Some(x) = v.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("material values must be positive, got {x}"),
        });
    }
    Ok(())
}

impl Material {
    pub fn new(grid: GridSpec3, a: Vec<f64>, b: Vec<f64>, upper_a: Vec<f64>, upper_b: Vec<f64>) -> Result<Self> {
        grid.validate()?;
        let n = grid.len();
        check_positive("a", &a, n)?;
        check_positive("b", &b, n)?;
        check_positive("A", &upper_a, 3 * n)?;
        check_positive("B", &upper_b, 3 * n)?;
        Ok(Self {
            grid,
            a,
            b,
            upper_a,
            upper_b,
        })
    }

    pub fn constant(grid: GridSpec3, a: f64, b: f64, upper_a: f64, upper_b: f64) -> Result<Self> {
        let n = grid.len();
        Self::new(grid, vec![a; n], vec![b; n], vec![upper_a; 3 * n], vec![upper_b; 3 * n])
    }

    pub fn unit(grid: GridSpec3) -> Self {
        Self::constant(grid, 1.0, 1.0, 1.0, 1.0).expect("unit material is valid")
    }

    /// Independent uniform samples in `[lo, hi)` for every lattice.
    pub fn random(grid: GridSpec3, lo: f64, hi: f64, seed: u64) -> Result<Self> {
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::InvalidParameter {
                name: "material range",
                reason: format!("need 0 < lo < hi, got [{lo}, {hi})"),
            });
        }
        let n = grid.len();
        Self::new(
            grid,
            linalg::random_vec(n, lo, hi, seed),
            linalg::random_vec(n, lo, hi, seed.wrapping_add(1)),
            linalg::random_vec(3 * n, lo, hi, seed.wrapping_add(2)),
            linalg::random_vec(3 * n, lo, hi, seed.wrapping_add(3)),
        )
    }

    /// Samples analytic material functions at their staggered sites. The
    /// vector functions receive the component index.
    pub fn from_fns(
        grid: GridSpec3,
        a: impl Fn([f64; 3]) -> f64,
        b: impl Fn([f64; 3]) -> f64,
        upper_a: impl Fn(usize, [f64; 3]) -> f64,
        upper_b: impl Fn(usize, [f64; 3]) -> f64,
    ) -> Result<Self> {
        let sample = |kind, f: &dyn Fn(usize, [f64; 3]) -> f64| Field3::from_fn(kind, grid, f).into_data();
        Self::new(
            grid,
            sample(FieldKind::NodeScalar, &|_, p| a(p)),
            sample(FieldKind::CellScalar, &|_, p| b(p)),
            sample(FieldKind::EdgeVector, &upper_a),
            sample(FieldKind::FaceVector, &upper_b),
        )
    }

    /// Electromagnetic material: `𝐀 = ε` on edges, `𝐁 = μ` on faces,
    /// `a = b = 1`.
    pub fn maxwell(grid: GridSpec3, eps: Vec<f64>, mu: Vec<f64>) -> Result<Self> {
        let n = grid.len();
        Self::new(grid, vec![1.0; n], vec![1.0; n], eps, mu)
    }

    pub fn grid(&self) -> &GridSpec3 {
        &self.grid
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn upper_a(&self) -> &[f64] {
        &self.upper_a
    }

    pub fn upper_b(&self) -> &[f64] {
        &self.upper_b
    }

    /// Lattice backing `star` (the forward lattice for an inverse).
    pub(crate) fn lattice(&self, star: Star) -> &[f64] {
        match star {
            Star::LowerA | Star::LowerAInv => &self.a,
            Star::LowerB | Star::LowerBInv => &self.b,
            Star::UpperA | Star::UpperAInv => &self.upper_a,
            Star::UpperB | Star::UpperBInv => &self.upper_b,
        }
    }

    /// Every lattice multiplied by `s > 0`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        let m = |v: &[f64]| v.iter().map(|x| s * x).collect();
        Self::new(self.grid, m(&self.a), m(&self.b), m(&self.upper_a), m(&self.upper_b))
    }

    /// Same lattices on a grid with different spacings but equal counts.
    pub fn on_grid(&self, grid: GridSpec3) -> Result<Self> {
        if grid.counts() != self.grid.counts() {
            return Err(Error::Signature("material and grid lattice counts differ".into()));
        }
        Self::new(
            grid,
            self.a.clone(),
            self.b.clone(),
            self.upper_a.clone(),
            self.upper_b.clone(),
        )
    }

    pub(crate) fn check_grid(&self, f: &Field3) -> Result<()> {
        if *f.grid() != self.grid {
            return Err(Error::Signature("field and material live on different grids".into()));
        }
        Ok(())
    }
}

/// Pointwise product (or quotient, for inverses) at co-located sites. The
/// result carries the codomain kind.
pub fn apply_material(star: Star, f: &Field3, mat: &Material) -> Result<Field3> {
    f.expect_kind(star.domain(), &format!("{star:?}"))?;
    mat.check_grid(f)?;
    let w = mat.lattice(star);
    let data = if star.is_inverse() {
        f.data().iter().zip(w).map(|(x, m)| x / m).collect()
    } else {
        f.data().iter().zip(w).map(|(x, m)| x * m).collect()
    };
    Ok(Field3::raw(star.codomain(), *f.grid(), data))
}
