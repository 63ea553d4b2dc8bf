//! Exact intersection theory, Fujita classification and polar-cylinder
//! certificates for the blow-up of `P(1,1,m)` at `m+4` general points.
//!
//! All arithmetic is over arbitrary-precision rationals; there is no floating
//! point anywhere in the crate.

pub mod blowdown;
pub mod classes;
pub mod cone;
pub mod curves;
pub mod cylinder;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod picard;
pub mod rational;
pub mod singular;

pub use classes::{DivisorClass, SingularClass};
pub use curves::{CurveKind, CurveRef};
pub use error::{Error, Result};
pub use picard::{SurfaceLattice, SurfaceModel};
pub use rational::Rat;
