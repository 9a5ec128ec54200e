//! Conversion of the natural-unit squeezing rate to laboratory SI
//! figures for a microwave-cavity experiment.

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

/// Speed of light pinned for all conversions (m/s).
pub const SPEED_OF_LIGHT: f64 = 2.998e8;

/// Axial index of the reference TM mode. An axial-dominant mode keeps
/// the transverse wavenumber a small fraction of the eigenvalue, which
/// puts k_par^2/omega at the GHz scale for centimeter cavities - the
/// regime where fast permittivity switching is feasible.
pub const REFERENCE_AXIAL_INDEX: u32 = 5;

/// Laboratory-scale figures derived from the resonance condition of a
/// cubic cavity sized to the requested photon wavelength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiEstimate {
    /// Side of the cubic cavity, centimeters.
    pub cavity_side_cm: f64,
    /// Drive frequency omega / 2 pi, GHz.
    pub drive_frequency_ghz: f64,
    /// First-order squeezing rate, 1/s.
    pub squeezing_rate_per_s: f64,
    /// Time until the photon number reaches the target, seconds
    /// (infinite without a drive).
    pub time_to_target_s: f64,
    pub target_photons: f64,
    /// Validity notes for parameters outside the first-order regime.
    pub warnings: Vec<String>,
}

/// Estimate the photon creation figures for a cavity resonant at the
/// given photon wavelength.
///
/// The reference mode is TM (n, 1, 1) with `n = REFERENCE_AXIAL_INDEX`
/// in a cubic cavity; the drive sits on the parametric resonance
/// `omega = 2 Omega`. In natural units the rate is
/// `r = (k_par^2/omega)(chi/eps_bulk)(a/L)`; one factor of c converts it
/// to 1/s. The time to a photon number N follows from inverting
/// `N = sinh^2(r t)`.
pub fn estimate_physical(
    wavelength_cm: f64,
    chi_over_eps_bulk: f64,
    a_over_l: f64,
    target_photons: f64,
) -> Result<SiEstimate> {
    if wavelength_cm <= 0.0 || !wavelength_cm.is_finite() {
        bail!("wavelength must be positive, got {wavelength_cm} cm");
    }
    if chi_over_eps_bulk <= 0.0 || !chi_over_eps_bulk.is_finite() {
        bail!("chi/eps_bulk must be positive, got {chi_over_eps_bulk}");
    }
    if !(0.0..1.0).contains(&a_over_l) {
        bail!("slab fraction a/L must lie in [0, 1), got {a_over_l}");
    }
    if target_photons <= 0.0 || target_photons.is_nan() {
        bail!("target photon number must be positive, got {target_photons}");
    }

    let mut warnings = Vec::new();
    if chi_over_eps_bulk > 0.5 {
        warnings.push(format!(
            "chi/eps_bulk = {chi_over_eps_bulk} exceeds the physical bound 1/2; \
             treated as an order-one estimate"
        ));
    }
    if a_over_l > 0.1 {
        warnings.push(format!(
            "a/L = {a_over_l} is outside the thin-slab regime; first-order \
             figures are unreliable"
        ));
    }

    let n = REFERENCE_AXIAL_INDEX as f64;
    let mode_norm_sq = n * n + 2.0; // (n pi/L)^2 + 2 (pi/L)^2 in units of (pi/L)^2
    let wavelength_m = wavelength_cm / 100.0;
    // resonance: Omega = 2 pi c / wavelength = pi sqrt(n^2 + 2) c / L_box
    let cavity_side_m = 0.5 * wavelength_m * mode_norm_sq.sqrt();
    let omega_mode = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / wavelength_m;
    let omega_drive = 2.0 * omega_mode;
    // k_par^2 c^2 / omega_drive for the (n, 1, 1) mode of the cube
    let k_par_sq_c_sq = 2.0 * (std::f64::consts::PI * SPEED_OF_LIGHT / cavity_side_m).powi(2);
    let rate = k_par_sq_c_sq / omega_drive * chi_over_eps_bulk * a_over_l;
    let time = if rate > 0.0 {
        target_photons.sqrt().asinh() / rate
    } else {
        f64::INFINITY
    };

    Ok(SiEstimate {
        cavity_side_cm: cavity_side_m * 100.0,
        drive_frequency_ghz: omega_drive / (2.0 * std::f64::consts::PI * 1e9),
        squeezing_rate_per_s: rate,
        time_to_target_s: time,
        target_photons,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn microwave_cavity_figures() {
        // several-centimeter photons, order-one modulation, one-percent
        // slab: rate of order 1e7 per second and a few microseconds to a
        // macroscopic photon number
        let est = estimate_physical(5.0, 1.0, 0.01, 1000.0).unwrap();
        assert!(
            est.squeezing_rate_per_s > 1e6 && est.squeezing_rate_per_s < 1e8,
            "rate {}",
            est.squeezing_rate_per_s
        );
        assert!(
            est.time_to_target_s > 3e-8 && est.time_to_target_s < 3e-5,
            "time {}",
            est.time_to_target_s
        );
        assert!(est.drive_frequency_ghz > 1.0 && est.drive_frequency_ghz < 100.0);
        assert!(est.cavity_side_cm > 1.0 && est.cavity_side_cm < 100.0);
        // above the hard bound: flagged, not rejected
        assert!(!est.warnings.is_empty());
        let clean = estimate_physical(5.0, 0.5, 0.01, 1000.0).unwrap();
        assert!(clean.warnings.is_empty());
    }

    #[test]
    fn no_drive_means_no_photons() {
        let est = estimate_physical(5.0, 0.5, 0.0, 1000.0).unwrap();
        assert_eq!(est.squeezing_rate_per_s, 0.0);
        assert!(est.time_to_target_s.is_infinite());
    }

    #[test]
    fn doubling_slab_asymptotically_halves_time() {
        // for r t >> 1, t ~ ln(4N)/(2r), so doubling a/L halves t up to
        // the slowly varying logarithm
        let huge = 1e12;
        let t1 = estimate_physical(5.0, 0.5, 0.005, huge)
            .unwrap()
            .time_to_target_s;
        let t2 = estimate_physical(5.0, 0.5, 0.01, huge)
            .unwrap()
            .time_to_target_s;
        assert!((t1 / t2 - 2.0).abs() < 1e-9);
    }

    #[test]
    fn consistent_with_natural_unit_rate() {
        // the same rate must come out of the natural-unit formula on a
        // unit cube scaled by the cavity side
        use dce_core::{
            resonance_frequency, solve_mode, squeezing_rate, CavityGeometry, DriveSpec,
            ModeIndex, PermittivityPair,
        };
        let a_over_l = 0.01;
        let chi = 0.4;
        let est = estimate_physical(5.0, chi, a_over_l, 1000.0).unwrap();
        let geom = CavityGeometry::new(1.0, 1.0, 1.0, a_over_l).unwrap();
        let mode = ModeIndex::tm(REFERENCE_AXIAL_INDEX, 1, 1);
        let eps = PermittivityPair::homogeneous(1.0).unwrap();
        let omega0 = solve_mode(&mode, &geom, &eps).unwrap().omega;
        let drive = DriveSpec {
            xi: 1.0,
            chi,
            omega: resonance_frequency(omega0, 0.0),
            delta: 0.0,
            eps_bulk: 1.0,
        };
        let r_natural = squeezing_rate(&mode, &geom, &drive).unwrap();
        let r_si = r_natural * SPEED_OF_LIGHT / (est.cavity_side_cm / 100.0);
        assert!(
            (r_si / est.squeezing_rate_per_s - 1.0).abs() < 1e-9,
            "natural-unit route {} vs estimator {}",
            r_si,
            est.squeezing_rate_per_s
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(estimate_physical(-1.0, 0.5, 0.01, 10.0).is_err());
        assert!(estimate_physical(5.0, 0.0, 0.01, 10.0).is_err());
        assert!(estimate_physical(5.0, 0.5, 1.5, 10.0).is_err());
        assert!(estimate_physical(5.0, 0.5, 0.01, 0.0).is_err());
    }
}
