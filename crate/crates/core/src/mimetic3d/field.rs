use super::grid::GridSpec3;
use crate::error::{Error, Result};
use crate::linalg;
use serde::{Deserialize, Serialize};

/// The eight discrete field spaces of the primal and dual grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldKind {
    /// `S_N`, scalars at primal nodes.
    NodeScalar,
    /// `V_E`, tangential components on primal edges.
    EdgeVector,
    /// `V_F`, normal components on primal faces.
    FaceVector,
    /// `S_C`, scalars at primal cell centers.
    CellScalar,
    /// `S_C*`, scalars on dual cells (co-located with primal nodes).
    DualCellScalar,
    /// `V_F*`, dual faces (co-located with primal edges).
    DualFaceVector,
    /// `V_E*`, dual edges (co-located with primal faces).
    DualEdgeVector,
    /// `S_N*`, dual nodes (co-located with primal cell centers).
    DualNodeScalar,
}

impl FieldKind {
    pub const ALL: [FieldKind; 8] = [
        FieldKind::NodeScalar,
        FieldKind::EdgeVector,
        FieldKind::FaceVector,
        FieldKind::CellScalar,
        FieldKind::DualCellScalar,
        FieldKind::DualFaceVector,
        FieldKind::DualEdgeVector,
        FieldKind::DualNodeScalar,
    ];

    pub fn components(self) -> usize {
        if self.is_vector() {
            3
        } else {
            1
        }
    }

    pub fn is_vector(self) -> bool {
        matches!(
            self,
            FieldKind::EdgeVector | FieldKind::FaceVector | FieldKind::DualFaceVector | FieldKind::DualEdgeVector
        )
    }

    pub fn is_dual(self) -> bool {
        matches!(
            self,
            FieldKind::DualCellScalar
                | FieldKind::DualFaceVector
                | FieldKind::DualEdgeVector
                | FieldKind::DualNodeScalar
        )
    }

    /// Exponent `p` in the spatial unit `1/d^p`.
    pub fn dim_exponent(self) -> i32 {
        match self {
            FieldKind::NodeScalar | FieldKind::DualNodeScalar => 0,
            FieldKind::EdgeVector | FieldKind::DualEdgeVector => 1,
            FieldKind::FaceVector | FieldKind::DualFaceVector => 2,
            FieldKind::CellScalar | FieldKind::DualCellScalar => 3,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            FieldKind::NodeScalar => "S_N",
            FieldKind::EdgeVector => "V_E",
            FieldKind::FaceVector => "V_F",
            FieldKind::CellScalar => "S_C",
            FieldKind::DualCellScalar => "S_C*",
            FieldKind::DualFaceVector => "V_F*",
            FieldKind::DualEdgeVector => "V_E*",
            FieldKind::DualNodeScalar => "S_N*",
        }
    }

    /// Offset of component `comp` from the integer site `(i, j, k)`, in
    /// units of the spacing.
    pub fn offset(self, comp: usize) -> [f64; 3] {
        let edge = |c: usize| {
            let mut o = [0.0; 3];
            o[c] = 0.5;
            o
        };
        let face = |c: usize| {
            let mut o = [0.5; 3];
            o[c] = 0.0;
            o
        };
        match self {
            FieldKind::NodeScalar | FieldKind::DualCellScalar => [0.0; 3],
            FieldKind::CellScalar | FieldKind::DualNodeScalar => [0.5; 3],
            FieldKind::EdgeVector | FieldKind::DualFaceVector => edge(comp),
            FieldKind::FaceVector | FieldKind::DualEdgeVector => face(comp),
        }
    }
}

impl std::fmt::Display for FieldKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A discrete field: one lattice per component, components stored back to
/// back.
#[derive(Debug, Clone, PartialEq)]
pub struct Field3 {
    kind: FieldKind,
    grid: GridSpec3,
    data: Vec<f64>,
}

impl Field3 {
    pub fn zeros(kind: FieldKind, grid: GridSpec3) -> Self {
        Self {
            kind,
            grid,
            data: vec![0.0; kind.components() * grid.len()],
        }
    }

    pub fn from_vec(kind: FieldKind, grid: GridSpec3, data: Vec<f64>) -> Result<Self> {
        grid.validate()?;
        let want = kind.components() * grid.len();
        if data.len() != want {
            return Err(Error::Shape(format!(
                "{kind} on this grid needs {want} values, got {}",
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "field",
                reason: "non-finite entry".into(),
            });
        }
        Ok(Self { kind, grid, data })
    }

    pub(crate) fn raw(kind: FieldKind, grid: GridSpec3, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), kind.components() * grid.len());
        Self { kind, grid, data }
    }

    /// Samples `f(component, position)` at the staggered site of every
    /// component.
    pub fn from_fn(kind: FieldKind, grid: GridSpec3, mut f: impl FnMut(usize, [f64; 3]) -> f64) -> Self {
        let mut out = Self::zeros(kind, grid);
        let n = grid.len();
        let h = grid.spacings();
        for c in 0..kind.components() {
            let off = kind.offset(c);
            for k in 0..grid.nz {
                for j in 0..grid.ny {
                    for i in 0..grid.nx {
                        let p = [
                            (i as f64 + off[0]) * h[0],
                            (j as f64 + off[1]) * h[1],
                            (k as f64 + off[2]) * h[2],
                        ];
                        out.data[c * n + grid.index(i, j, k)] = f(c, p);
                    }
                }
            }
        }
        out
    }

    /// Entries uniform in `[-1, 1)` from a seeded ChaCha8 stream.
    pub fn random(kind: FieldKind, grid: GridSpec3, seed: u64) -> Self {
        Self {
            kind,
            grid,
            data: linalg::random_vec(kind.components() * grid.len(), -1.0, 1.0, seed),
        }
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn grid(&self) -> &GridSpec3 {
        &self.grid
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn component(&self, c: usize) -> &[f64] {
        let n = self.grid.len();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.grid.len();
        &mut self.data[c * n..(c + 1) * n]
    }

    pub fn get(&self, c: usize, i: usize, j: usize, k: usize) -> f64 {
        self.data[c * self.grid.len() + self.grid.index(i, j, k)]
    }

    pub fn set(&mut self, c: usize, i: usize, j: usize, k: usize, value: f64) {
        let n = self.grid.len();
        self.data[c * n + self.grid.index(i, j, k)] = value;
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.data)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn expect_kind(&self, kind: FieldKind, what: &str) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Signature(format!("{what} expects {kind}, got {}", self.kind)));
        }
        Ok(())
    }

    pub fn check_compatible(&self, other: &Field3) -> Result<()> {
        if self.kind != other.kind {
            return Err(Error::Signature(format!(
                "field kinds differ: {} and {}",
                self.kind, other.kind
            )));
        }
        if self.grid != other.grid {
            return Err(Error::Signature("fields live on different grids".into()));
        }
        Ok(())
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, s: f64, other: &Field3) -> Result<Field3> {
        self.check_compatible(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + s * b).collect();
        Ok(Field3 {
            kind: self.kind,
            grid: self.grid,
            data,
        })
    }

    /// `(self + other) / 2`.
    pub fn average(&self, other: &Field3) -> Result<Field3> {
        self.check_compatible(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| 0.5 * (a + b)).collect();
        Ok(Field3 {
            kind: self.kind,
            grid: self.grid,
            data,
        })
    }

    pub fn scale(&self, s: f64) -> Field3 {
        Field3 {
            kind: self.kind,
            grid: self.grid,
            data: self.data.iter().map(|x| s * x).collect(),
        }
    }

    /// Largest absolute entry of `self − other`.
    pub fn max_abs_diff(&self, other: &Field3) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())))
    }
}
