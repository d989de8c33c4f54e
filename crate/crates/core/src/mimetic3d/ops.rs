use super::field::{Field3, FieldKind};
use super::grid::GridSpec3;
use crate::error::Result;

/// First order difference operators of the two exact sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiffOp {
    /// `S_N → V_E`
    G,
    /// `V_E → V_F`
    R,
    /// `V_F → S_C`
    D,
    /// `S_N* → V_E*`
    GStar,
    /// `V_E* → V_F*`
    RStar,
    /// `V_F* → S_C*`
    DStar,
}

impl DiffOp {
    pub fn domain(self) -> FieldKind {
        match self {
            DiffOp::G => FieldKind::NodeScalar,
            DiffOp::R => FieldKind::EdgeVector,
            DiffOp::D => FieldKind::FaceVector,
            DiffOp::GStar => FieldKind::DualNodeScalar,
            DiffOp::RStar => FieldKind::DualEdgeVector,
            DiffOp::DStar => FieldKind::DualFaceVector,
        }
    }

    pub fn codomain(self) -> FieldKind {
        match self {
            DiffOp::G => FieldKind::EdgeVector,
            DiffOp::R => FieldKind::FaceVector,
            DiffOp::D => FieldKind::CellScalar,
            DiffOp::GStar => FieldKind::DualEdgeVector,
            DiffOp::RStar => FieldKind::DualFaceVector,
            DiffOp::DStar => FieldKind::DualCellScalar,
        }
    }

    fn forward(self) -> bool {
        matches!(self, DiffOp::G | DiffOp::R | DiffOp::D)
    }
}

/// Periodic difference quotient of one lattice along `axis`:
/// `(f[i+1] − f[i])/h` when `forward`, else `(f[i] − f[i−1])/h`.
fn diff(f: &[f64], g: &GridSpec3, axis: usize, forward: bool) -> Vec<f64> {
    let n = g.counts();
    let h = g.spacings()[axis];
    let stride = g.stride(axis);
    let span = stride * n[axis];
    let mut out = vec![0.0; f.len()];
    for (idx, o) in out.iter_mut().enumerate() {
        let pos = (idx / stride) % n[axis];
        let base = idx - pos * stride;
        *o = if forward {
            let next = if pos + 1 == n[axis] { base } else { idx + stride };
            (f[next] - f[idx]) / h
        } else {
            let prev = if pos == 0 { base + span - stride } else { idx - stride };
            (f[idx] - f[prev]) / h
        };
    }
    out
}

fn sub(a: Vec<f64>, b: Vec<f64>) -> Vec<f64> {
    a.into_iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn apply_diff(op: DiffOp, f: &Field3) -> Result<Field3> {
    f.expect_kind(op.domain(), &format!("{op:?}"))?;
    let g = *f.grid();
    let fw = op.forward();
    let data = match op {
        DiffOp::G | DiffOp::GStar => {
            let s = f.component(0);
            let mut d = diff(s, &g, 0, fw);
            d.extend(diff(s, &g, 1, fw));
            d.extend(diff(s, &g, 2, fw));
            d
        }
        DiffOp::R | DiffOp::RStar => {
            let (tx, ty, tz) = (f.component(0), f.component(1), f.component(2));
            let mut d = sub(diff(tz, &g, 1, fw), diff(ty, &g, 2, fw));
            d.extend(sub(diff(tx, &g, 2, fw), diff(tz, &g, 0, fw)));
            d.extend(sub(diff(ty, &g, 0, fw), diff(tx, &g, 1, fw)));
            d
        }
        DiffOp::D | DiffOp::DStar => {
            let x = diff(f.component(0), &g, 0, fw);
            let y = diff(f.component(1), &g, 1, fw);
            let z = diff(f.component(2), &g, 2, fw);
            x.iter().zip(&y).zip(&z).map(|((a, b), c)| a + b + c).collect()
        }
    };
    Ok(Field3::raw(op.codomain(), g, data))
}
