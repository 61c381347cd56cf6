//! Oriented affine lines of R^3 as the tangent bundle of S^2, with the
//! neutral-signature Kahler structure `(J, Omega, G)`, its isometries,
//! geodesics (planes and helicoids), line congruences and the Maslov index of
//! Lagrangian congruences.

pub mod cli;
pub mod congruence;
pub mod error;
pub mod geodesics;
pub mod isometry;
pub mod kahler;
pub mod linespace;
pub mod maslov;
pub mod numerics;

pub use error::{Error, Result};
pub use linespace::{Chart, EuclideanPoint, EuclideanVector, JacobiField, NullFrame, OrientedLine, TangentT, C64};
