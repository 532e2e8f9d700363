//! Nine-level NV⁻/NV⁰ rate and coherence model under optical pumping and a
//! near-resonant microwave drive.
//!
//! Level labels follow the usual scheme: 1-3 are the ground-state triplet
//! (m_s = 0, -1, +1), 4-6 the excited triplet, 7 the lumped singlet, 8-9 the
//! NV⁰ ground and excited states. All rates are angular (rad/s).

mod integrate;
mod odmr;
mod params;
mod steady;
mod system;

pub use integrate::{
    integrator_registry, time_evolve, time_evolve_with, BackwardEuler, Integrator, TrBdf2,
};
pub use odmr::{
    contrast_vs_coupling, odmr_spectrum, photoluminescence, resonance_fwhm, write_spectrum_csv,
    ContrastRow, OdmrSpectrum,
};
pub use params::{NvModelParams, TWO_PI};
pub use steady::{solve_steady_state, steady_state, SteadySolution};
pub use system::{build_system, LinearDynamics, NvState, STATE_DIM};
