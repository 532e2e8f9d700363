//! NV-centre ODMR simulation, Mie resonances of dielectric spheres and
//! double-Lorentzian fitting of ODMR spectra.

// `!(a > b)` forms deliberately treat NaN as a failed check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fit;
pub mod mie;
pub mod nv;
pub mod registry;
pub mod special;

pub use error::{Error, Result};
