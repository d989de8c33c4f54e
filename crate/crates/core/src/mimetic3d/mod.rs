//! Dual-grid mimetic calculus on a periodic 3D lattice.
//!
//! The primal and dual grids carry eight kinds of discrete fields linked by
//! the two exact sequences
//!
//! ```text
//! S_N  --G-->  V_E  --R-->  V_F  --D-->  S_C
//!  |a          |A           |B⁻¹         |b⁻¹
//! S_C* <--D*-- V_F* <--R*-- V_E* <--G*-- S_N*
//! ```
//!
//! Each component lattice has `nx × ny × nz` sites, stored with `x` fastest.
//! The staggering offset of a component is metadata on the [`FieldKind`].

mod checks;
mod composite;
mod field;
mod grid;
mod inner;
mod material;
mod ops;
pub mod snapshot;

pub use checks::{check_adjoints, check_exactness, AdjointReport, ExactnessReport};
pub use composite::{operator_norm_estimate, second_order, SecondOrder};
pub use field::{Field3, FieldKind};
pub use grid::GridSpec3;
pub use inner::{inner, norm_sq};
pub use material::{apply_material, Material, Star};
pub use ops::{apply_diff, DiffOp};
