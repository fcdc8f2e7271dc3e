//! Numerical laboratory for the porous medium equation with fractional
//! pressure, `u_t = ∇·(u ∇K_s u)`.

pub mod commands;
pub mod diagnostics;
pub mod error;
pub mod evolution;
pub mod fracops;
pub mod grid;
pub mod io;
pub mod obstacle;
pub mod oracle;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use evolution::{Exponents, FlowMode, SolverConfig};
pub use fracops::{FracParams, Operator, OperatorMode};
pub use grid::{Field, FieldKind, Grid};
