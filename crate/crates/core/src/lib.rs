//! Resonant photon creation in a rectangular cavity loaded with a thin
//! dielectric slab of time-dependent permittivity.
//!
//! The crate solves the exact two-region eigenmode problem (transcendental
//! dispersion relations, normalized dual-potential mode functions, and the
//! inter-mode velocity coupling), evaluates the thin-slab first-order
//! formulas with their error orders, and integrates the resonantly driven
//! mode to obtain Bogoliubov coefficients and the created photon number.
//! Natural units (`c = eps0 = mu0 = hbar = 1`) throughout.

pub mod axial;
pub mod dispersion;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod modefn;
pub mod perturbation;
pub mod quad;
pub mod tolerances;

pub use dispersion::{
    dispersion_residual, enumerate_lowest_modes, homogeneous_omega_sq, solve_mode,
    solve_mode_by_scan, ModeSolution, SolvedMode,
};
pub use dynamics::{
    drive_ratio, evolve_auto, evolve_bogoliubov, instantaneous_omega_sq, photon_number_rwa,
    resonance_frequency, resonant_drive, squeezing_rate, DriveSpec, EvolutionResult,
    FrequencyMethod, ModeAmplitudeState,
};
pub use error::{Error, Result};
pub use geometry::{CavityGeometry, ModeIndex, PermittivityPair, Polarization};
pub use modefn::{
    build_mode_function, coupling_matrix_element, coupling_matrix_element_checked,
    default_coupling_step, overlap, overlap_quadrature, ModeFunction, Region,
};
pub use perturbation::{
    delta_omega2_tm, effective_length, error_order_fit, exact_omega2_shift, kx_te_first_order,
    kx_tm_first_order, perturbative_shift, ErrorOrderFit, PerturbativeShift,
};
