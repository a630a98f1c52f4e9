//! Electrostatics of a grounded, perfectly conducting toroid and the
//! non-retarded van der Waals interaction of an axially polarizable particle
//! placed on its symmetry axis.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: complete elliptic integrals and toroidal harmonics
//!   `P_{n-1/2}`, `Q_{n-1/2}`.
//! * [`geometry`]: toroidal coordinates and the toroid parameterization.
//! * [`greens`]: inverse-distance expansion, induced potential `V_H` for an
//!   on-axis point charge, charge/induced-charge energy.
//! * [`dispersion`]: mixed derivative of the induced Green's function, the
//!   axial van der Waals energy and force, and the root/threshold solvers.
//! * [`bem`]: an independent axisymmetric boundary-element solver used as an
//!   oracle for everything above.
//!
//! Lengths are in nanometres, charges in elementary charges, energies in eV.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bem;
pub mod dispersion;
pub mod error;
pub mod geometry;
pub mod greens;
pub mod series;
pub mod specfun;
pub mod units;

pub use error::{Error, Result};
pub use geometry::{ToroidGeometry, ToroidalCoords};
pub use greens::{AxialGreens, AxialSource, Normalization};
pub use series::{Evaluation, Truncation, Warning};

/// Library version, echoed in emitted data files.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
