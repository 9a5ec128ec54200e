//! Single-mode evolution under the harmonic permittivity drive.
//!
//! The resonant mode obeys `u'' + Omega^2(t) u = 0` with the permittivity
//! ratio driven as `eps_bulk/eps_slab(t) = xi + chi sin(omega t)`. The
//! offset `xi` only shifts the eigenfrequencies, so `Omega0` is defined
//! as the eigenfrequency at ratio `xi` and the oscillatory part alone
//! enters `Omega^2(t)`. Bogoliubov coefficients are projected onto the
//! `Omega0` frame at stroboscopic times (one sample per drive period);
//! on resonance the photon number follows `sinh^2(r t)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::solve_mode;
use crate::error::{Error, Result};
use crate::geometry::{CavityGeometry, ModeIndex, PermittivityPair, Polarization};
use crate::perturbation::delta_omega2_tm;
use crate::tolerances::WRONSKIAN_ABS;

/// Harmonic drive of the permittivity ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSpec {
    /// Ratio offset: the mean of eps_bulk/eps_slab(t).
    pub xi: f64,
    /// Ratio modulation amplitude.
    pub chi: f64,
    /// Drive angular frequency.
    pub omega: f64,
    /// Relative detuning from the parametric resonance 2 Omega0.
    pub delta: f64,
    /// Static bulk permittivity.
    pub eps_bulk: f64,
}

impl DriveSpec {
    pub fn validate(&self) -> Result<()> {
        if self.eps_bulk <= 0.0 || !self.eps_bulk.is_finite() {
            return Err(Error::InvalidDrive(format!(
                "eps_bulk must be positive, got {}",
                self.eps_bulk
            )));
        }
        if self.omega <= 0.0 || !self.omega.is_finite() {
            return Err(Error::InvalidDrive(format!(
                "drive frequency must be positive, got {}",
                self.omega
            )));
        }
        if !(self.chi.is_finite() && self.xi.is_finite()) || self.chi.abs() >= self.xi {
            return Err(Error::InvalidDrive(format!(
                "need |chi| < xi so the ratio stays positive, got chi={}, xi={}",
                self.chi, self.xi
            )));
        }
        Ok(())
    }

    /// Whether the modulation exceeds the physical bound chi/eps_bulk <= 1/2.
    pub fn exceeds_physical_bound(&self) -> bool {
        self.chi.abs() / self.eps_bulk > 0.5
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// Permittivity pair at drive phase time t.
    pub fn permittivity_at(&self, t: f64) -> Result<PermittivityPair> {
        let ratio = drive_ratio(t, self)?;
        PermittivityPair::new(self.eps_bulk / ratio, self.eps_bulk)
    }
}

/// Instantaneous permittivity ratio `xi + chi sin(omega t)`.
pub fn drive_ratio(t: f64, drive: &DriveSpec) -> Result<f64> {
    let value = drive.xi + drive.chi * (drive.omega * t).sin();
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidDrive(format!(
            "ratio {value} not positive at t = {t}: permittivity must stay real and positive"
        )))
    }
}

/// Parametric resonance frequency `2 omega0 (1 + delta)`.
pub fn resonance_frequency(omega0: f64, delta: f64) -> f64 {
    2.0 * omega0 * (1.0 + delta)
}

/// Drive tuned to the squeezing resonance of `mode`: solves the
/// eigenfrequency at the mean ratio `xi` and sets
/// `omega = 2 Omega0 (1 + delta)`.
pub fn resonant_drive(
    mode: &ModeIndex,
    geom: &CavityGeometry,
    xi: f64,
    chi: f64,
    eps_bulk: f64,
    delta: f64,
) -> Result<DriveSpec> {
    let eps = PermittivityPair::new(eps_bulk / xi, eps_bulk)?;
    let omega0 = solve_mode(mode, geom, &eps)?.omega;
    let drive = DriveSpec {
        xi,
        chi,
        omega: resonance_frequency(omega0, delta),
        delta,
        eps_bulk,
    };
    drive.validate()?;
    Ok(drive)
}

/// How `Omega^2(t)` is evaluated during an evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyMethod {
    /// First-order eigenvalue shift around the mean ratio (TM only).
    FirstOrder,
    /// Re-solve the exact dispersion relation at every drive phase.
    Exact,
}

/// Instantaneous squared eigenfrequency under the drive.
///
/// `FirstOrder` adds the first-order TM eigenvalue shift of the
/// oscillating ratio part to `Omega0^2` (the offset `xi` is absorbed
/// into `Omega0`); `Exact` re-solves the transcendental dispersion at
/// the instantaneous ratio.
pub fn instantaneous_omega_sq(
    t: f64,
    mode: &ModeIndex,
    geom: &CavityGeometry,
    drive: &DriveSpec,
    method: FrequencyMethod,
) -> Result<f64> {
    drive.validate()?;
    let eps0 = PermittivityPair::new(drive.eps_bulk / drive.xi, drive.eps_bulk)?;
    let omega0_sq = solve_mode(mode, geom, &eps0)?.omega_sq();
    match method {
        FrequencyMethod::FirstOrder => {
            if mode.pol != Polarization::Tm {
                return Err(Error::InvalidMode {
                    n_x: mode.n_x,
                    n_y: mode.n_y,
                    n_z: mode.n_z,
                    pol: mode.pol.label(),
                    reason: "first-order shift vanishes for TE; use the exact method".into(),
                });
            }
            let ratio = drive_ratio(t, drive)?;
            let shift = delta_omega2_tm(mode, geom, drive.eps_bulk, ratio)?
                - delta_omega2_tm(mode, geom, drive.eps_bulk, drive.xi)?;
            Ok(omega0_sq + shift)
        }
        FrequencyMethod::Exact => {
            let eps = drive.permittivity_at(t)?;
            Ok(solve_mode(mode, geom, &eps)?.omega_sq())
        }
    }
}

/// First-order squeezing rate `r = (k_par^2/omega) (chi/eps_bulk) (a/L)`
/// of a resonantly driven TM mode; on resonance the photon number grows
/// as `sinh^2(r t)`. Halved for n_x = 0, matching the halved eigenvalue
/// shift of that label.
pub fn squeezing_rate(mode: &ModeIndex, geom: &CavityGeometry, drive: &DriveSpec) -> Result<f64> {
    drive.validate()?;
    mode.validate_for_dispersion()?;
    if mode.pol != Polarization::Tm {
        return Err(Error::InvalidMode {
            n_x: mode.n_x,
            n_y: mode.n_y,
            n_z: mode.n_z,
            pol: mode.pol.label(),
            reason: "no first-order squeezing for TE modes".into(),
        });
    }
    let half = if mode.n_x == 0 { 0.5 } else { 1.0 };
    Ok(half * (mode.k_par_sq(geom) / drive.omega) * (drive.chi.abs() / drive.eps_bulk)
        * geom.a_over_l())
}

/// Rotating-wave photon number `sinh^2(rate t)`.
pub fn photon_number_rwa(rate: f64, t: f64) -> f64 {
    let x = (rate * t).sinh();
    x * x
}

/// Complex amplitude of the driven mode and its velocity: the classical
/// solution whose projection onto the `Omega0` frame carries the
/// Bogoliubov coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeAmplitudeState {
    pub u: Complex64,
    pub u_dot: Complex64,
    pub t: f64,
}

impl ModeAmplitudeState {
    /// Positive-frequency vacuum initial data of the `omega0` frame.
    pub fn vacuum(omega0: f64) -> Self {
        let u = Complex64::new(1.0 / (2.0 * omega0).sqrt(), 0.0);
        Self {
            u,
            u_dot: Complex64::new(0.0, -omega0) * u,
            t: 0.0,
        }
    }

    /// Conserved symplectic norm `i (u_dot u* - u_dot* u)`; equals 1 for
    /// vacuum initial data and stays 1 under exact evolution.
    pub fn wronskian(&self) -> f64 {
        -2.0 * (self.u.conj() * self.u_dot).im
    }

    /// Bogoliubov pair (alpha, beta) of the projection onto frequency
    /// `omega0`, normalized so |alpha|^2 - |beta|^2 equals the Wronskian.
    pub fn bogoliubov(&self, omega0: f64) -> (Complex64, Complex64) {
        let root = (0.5 * omega0).sqrt();
        let alpha = root * (self.u + Complex64::i() * self.u_dot / omega0);
        let beta = (root * (self.u - Complex64::i() * self.u_dot / omega0)).conj();
        (alpha, beta)
    }
}

/// Stroboscopic record of one evolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionResult {
    /// Sample instants, one per drive period starting at t = 0.
    pub times: Vec<f64>,
    /// Bogoliubov alpha(t) at the samples.
    pub alpha: Vec<Complex64>,
    /// Bogoliubov beta(t) at the samples.
    pub beta: Vec<Complex64>,
    /// Photon number |beta|^2.
    pub photon_number: Vec<f64>,
    /// Largest deviation of the conserved Wronskian from 1.
    pub wronskian_drift: f64,
    /// Resolution the run was produced with.
    pub steps_per_period: u32,
    /// Eigenfrequency at the mean ratio, the projection frame.
    pub omega0: f64,
}

impl EvolutionResult {
    pub fn final_photon_number(&self) -> f64 {
        *self.photon_number.last().unwrap_or(&0.0)
    }

    /// Largest violation of |alpha|^2 - |beta|^2 = 1 over the samples.
    pub fn bogoliubov_defect(&self) -> f64 {
        self.alpha
            .iter()
            .zip(&self.beta)
            .map(|(a, b)| (a.norm_sqr() - b.norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Least-squares slope of ln N(t) over samples with N >= n_min; on
    /// resonance this approaches 2r once the growth is exponential.
    /// None with fewer than three qualifying samples.
    pub fn log_photon_slope(&self, n_min: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .times
            .iter()
            .zip(&self.photon_number)
            .filter(|(_, n)| **n >= n_min)
            .map(|(t, n)| (*t, n.ln()))
            .collect();
        if pts.len() < 3 {
            return None;
        }
        let n = pts.len() as f64;
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        for (x, y) in &pts {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
    }
}

/// Integrate `u'' + Omega^2(t) u = 0` from the positive-frequency vacuum
/// initial data `u(0) = 1/sqrt(2 Omega0)`, `u'(0) = -i Omega0 u(0)` with
/// fixed-step classic fourth-order steps, period-commensurate so samples
/// land exactly on `omega t = 0 mod 2 pi`.
///
/// Fails with `StepSizeFailure` when the Wronskian drifts beyond budget;
/// the caller doubles `steps_per_period` (see [`evolve_auto`]).
pub fn evolve_bogoliubov(
    mode: &ModeIndex,
    geom: &CavityGeometry,
    drive: &DriveSpec,
    duration: f64,
    steps_per_period: u32,
    method: FrequencyMethod,
) -> Result<EvolutionResult> {
    drive.validate()?;
    geom.validate()?;
    mode.validate_for_dispersion()?;
    if steps_per_period < 200 {
        return Err(Error::InvalidInput(format!(
            "steps_per_period must be at least 200, got {steps_per_period}"
        )));
    }
    let period = drive.period();
    let n_periods = (duration / period + 1e-9).floor() as u64;
    if n_periods < 10 {
        return Err(Error::InvalidInput(format!(
            "duration must cover at least 10 drive periods, got {:.3}",
            duration / period
        )));
    }

    let eps0 = PermittivityPair::new(drive.eps_bulk / drive.xi, drive.eps_bulk)?;
    let omega0 = solve_mode(mode, geom, &eps0)?.omega;
    let omega0_sq = omega0 * omega0;

    // Omega^2 on the half-step phase grid; the drive is periodic, so one
    // period of values serves the whole run and RK4 stages index it
    // exactly (no interpolation).
    let half_steps = 2 * steps_per_period as usize;
    let mut omega_sq_grid = Vec::with_capacity(half_steps);
    match method {
        FrequencyMethod::FirstOrder => {
            if mode.pol != Polarization::Tm {
                return Err(Error::InvalidMode {
                    n_x: mode.n_x,
                    n_y: mode.n_y,
                    n_z: mode.n_z,
                    pol: mode.pol.label(),
                    reason: "first-order evolution needs a TM mode".into(),
                });
            }
            let half = if mode.n_x == 0 { 0.5 } else { 1.0 };
            let amp = half * 2.0 / drive.eps_bulk * mode.k_par_sq(geom) * geom.a_over_l()
                * drive.chi;
            for m in 0..half_steps {
                let phase = 2.0 * PI * m as f64 / half_steps as f64;
                omega_sq_grid.push(omega0_sq + amp * phase.sin());
            }
        }
        FrequencyMethod::Exact => {
            // walk the period once, tracking the root from phase to phase
            let mut prev = omega0_sq;
            for m in 0..half_steps {
                let t = period * m as f64 / half_steps as f64;
                let eps = drive.permittivity_at(t)?;
                let w = crate::dispersion::solve_mode_near(mode, geom, &eps, prev)?;
                omega_sq_grid.push(w);
                prev = w;
            }
        }
    }

    let h = period / steps_per_period as f64;
    let mut state = ModeAmplitudeState::vacuum(omega0);

    let samples = n_periods as usize + 1;
    let mut times = Vec::with_capacity(samples);
    let mut alphas = Vec::with_capacity(samples);
    let mut betas = Vec::with_capacity(samples);
    let mut photons = Vec::with_capacity(samples);
    let mut drift: f64 = 0.0;

    let mut record = |state: &ModeAmplitudeState| {
        let (alpha, beta) = state.bogoliubov(omega0);
        times.push(state.t);
        alphas.push(alpha);
        betas.push(beta);
        photons.push(beta.norm_sqr());
    };
    record(&state);

    for j in 0..n_periods {
        let (mut u, mut v) = (state.u, state.u_dot);
        for n in 0..steps_per_period as usize {
            let w0 = omega_sq_grid[(2 * n) % half_steps];
            let wh = omega_sq_grid[(2 * n + 1) % half_steps];
            let w1 = omega_sq_grid[(2 * n + 2) % half_steps];
            let k1u = v;
            let k1v = -w0 * u;
            let k2u = v + 0.5 * h * k1v;
            let k2v = -wh * (u + 0.5 * h * k1u);
            let k3u = v + 0.5 * h * k2v;
            let k3v = -wh * (u + 0.5 * h * k2u);
            let k4u = v + h * k3v;
            let k4v = -w1 * (u + h * k3u);
            u += h / 6.0 * (k1u + 2.0 * (k2u + k3u) + k4u);
            v += h / 6.0 * (k1v + 2.0 * (k2v + k3v) + k4v);
        }
        state = ModeAmplitudeState {
            u,
            u_dot: v,
            t: (j + 1) as f64 * period,
        };
        drift = drift.max((state.wronskian() - 1.0).abs());
        record(&state);
    }

    if drift > WRONSKIAN_ABS {
        return Err(Error::StepSizeFailure {
            drift,
            steps_per_period,
        });
    }
    Ok(EvolutionResult {
        times,
        alpha: alphas,
        beta: betas,
        photon_number: photons,
        wronskian_drift: drift,
        steps_per_period,
        omega0,
    })
}

/// [`evolve_bogoliubov`] with automatic step doubling on Wronskian-drift
/// failures (up to five doublings).
pub fn evolve_auto(
    mode: &ModeIndex,
    geom: &CavityGeometry,
    drive: &DriveSpec,
    duration: f64,
    steps_per_period: u32,
    method: FrequencyMethod,
) -> Result<EvolutionResult> {
    let mut spp = steps_per_period;
    for _ in 0..5 {
        match evolve_bogoliubov(mode, geom, drive, duration, spp, method) {
            Err(Error::StepSizeFailure { .. }) => spp *= 2,
            other => return other,
        }
    }
    evolve_bogoliubov(mode, geom, drive, duration, spp, method)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cube(a: f64) -> CavityGeometry {
        CavityGeometry::new(1.0, 1.0, 1.0, a).unwrap()
    }

    #[test]
    fn ratio_examples() {
        let drive = DriveSpec {
            xi: 1.0,
            chi: 0.1,
            omega: 2.0,
            delta: 0.0,
            eps_bulk: 1.0,
        };
        assert_eq!(drive_ratio(0.0, &drive).unwrap(), 1.0);
        let t_quarter = 0.5 * PI / drive.omega;
        assert!((drive_ratio(t_quarter, &drive).unwrap() - 1.1).abs() < 1e-12);
        // zero-mean sinusoid: the period average is xi
        let n = 1000;
        let mean: f64 = (0..n)
            .map(|i| drive_ratio(drive.period() * i as f64 / n as f64, &drive).unwrap())
            .sum::<f64>()
            / n as f64;
        assert!((mean - drive.xi).abs() < 1e-12);
    }

    #[test]
    fn drive_validation() {
        let bad = DriveSpec {
            xi: 0.5,
            chi: 0.6,
            omega: 1.0,
            delta: 0.0,
            eps_bulk: 1.0,
        };
        assert!(bad.validate().is_err());
        let flagged = DriveSpec {
            xi: 2.0,
            chi: 0.8,
            omega: 1.0,
            delta: 0.0,
            eps_bulk: 1.0,
        };
        assert!(flagged.validate().is_ok());
        assert!(flagged.exceeds_physical_bound());
    }

    #[test]
    fn resonance_frequency_examples() {
        let om0 = PI * 2.0_f64.sqrt();
        assert!((resonance_frequency(om0, 0.0) - 2.0 * om0).abs() < 1e-15);
        assert!((resonance_frequency(1.0, 0.01) - 2.02).abs() < 1e-15);
        assert_eq!(resonance_frequency(1.0, -1.0), 0.0);
        // degenerate frequency is rejected by drive validation downstream
        let drive = DriveSpec {
            xi: 1.0,
            chi: 0.1,
            omega: resonance_frequency(1.0, -1.0),
            delta: -1.0,
            eps_bulk: 1.0,
        };
        assert!(drive.validate().is_err());
    }

    #[test]
    fn squeezing_rate_scalings() {
        let geom = unit_cube(0.01);
        let mode = ModeIndex::tm(1, 1, 0);
        let drive = resonant_drive(&mode, &geom, 1.0, 0.01, 1.0, 0.0).unwrap();
        let r = squeezing_rate(&mode, &geom, &drive).unwrap();
        let expect = (PI * PI / drive.omega) * 0.01 * 0.01;
        assert!((r - expect).abs() < 1e-12 * expect);
        // doubling the slab thickness doubles the rate
        let geom2 = unit_cube(0.02);
        let r2 = squeezing_rate(&mode, &geom2, &drive).unwrap();
        assert!((r2 - 2.0 * r).abs() < 1e-12);
        // a static drive creates nothing
        let static_drive = DriveSpec { chi: 0.0, ..drive };
        assert_eq!(squeezing_rate(&mode, &geom, &static_drive).unwrap(), 0.0);
        // TE modes have no first-order squeezing
        assert!(squeezing_rate(&ModeIndex::te(1, 1, 0), &geom, &drive).is_err());
        // n_x = 0 modes squeeze at half the amplitude
        let m0 = ModeIndex::tm(0, 1, 1);
        let r0 = squeezing_rate(&m0, &geom, &drive).unwrap();
        let full = (m0.k_par_sq(&geom) / drive.omega) * 0.01 * 0.01;
        assert!((r0 - 0.5 * full).abs() < 1e-12);
    }

    #[test]
    fn vacuum_state_is_normalized() {
        let omega0 = 2.7;
        let state = ModeAmplitudeState::vacuum(omega0);
        assert!((state.wronskian() - 1.0).abs() < 1e-14);
        let (alpha, beta) = state.bogoliubov(omega0);
        assert!((alpha - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(beta, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn rwa_photon_number() {
        assert_eq!(photon_number_rwa(3.0, 0.0), 0.0);
        assert!((photon_number_rwa(1.0, 1.0) - 1.0_f64.sinh().powi(2)).abs() < 1e-12);
        assert!((photon_number_rwa(1.0, 1.0) - 1.38109).abs() < 1e-5);
        // deep in the exponential regime sinh^2 approaches e^{2rt}/4
        let big = photon_number_rwa(2.0, 10.0);
        assert!((big / ((2.0_f64 * 2.0 * 10.0).exp() / 4.0) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn instantaneous_frequency_first_order_vs_exact() {
        let geom = CavityGeometry::new(1.0, 1.0, 1.0, 1e-3).unwrap();
        let mode = ModeIndex::tm(1, 1, 1);
        let drive = resonant_drive(&mode, &geom, 1.0, 0.05, 1.0, 0.0).unwrap();
        // chi = 0 keeps the frequency constant
        let static_drive = DriveSpec { chi: 0.0, ..drive };
        let w0 = instantaneous_omega_sq(0.0, &mode, &geom, &static_drive, FrequencyMethod::Exact)
            .unwrap();
        let w1 = instantaneous_omega_sq(0.3, &mode, &geom, &static_drive, FrequencyMethod::Exact)
            .unwrap();
        assert!((w0 - w1).abs() < 1e-10 * w0);
        // peak of the first-order shift
        let t_peak = 0.25 * drive.period();
        let w_fo =
            instantaneous_omega_sq(t_peak, &mode, &geom, &drive, FrequencyMethod::FirstOrder)
                .unwrap();
        let expect = w0 + 2.0 / 1.0 * mode.k_par_sq(&geom) * geom.a_over_l() * drive.chi;
        assert!((w_fo - expect).abs() < 1e-10 * w0);
        // pointwise agreement with the exact branch is second order in a/L
        let band = 50.0 * geom.a_over_l().powi(2) * w0 * drive.chi.abs().max(1.0);
        for i in 0..8 {
            let t = drive.period() * i as f64 / 8.0;
            let fo = instantaneous_omega_sq(t, &mode, &geom, &drive, FrequencyMethod::FirstOrder)
                .unwrap();
            let ex =
                instantaneous_omega_sq(t, &mode, &geom, &drive, FrequencyMethod::Exact).unwrap();
            assert!((fo - ex).abs() < band, "t={t}: fo={fo} exact={ex}");
        }
        // TE is rejected for the first-order method
        assert!(instantaneous_omega_sq(
            0.0,
            &ModeIndex::te(1, 1, 1),
            &geom,
            &drive,
            FrequencyMethod::FirstOrder
        )
        .is_err());
    }

    #[test]
    fn ratio_signals_nonpositive_permittivity() {
        // an unvalidated drive can push the ratio negative
        let bad = DriveSpec {
            xi: 0.5,
            chi: 0.6,
            omega: 1.0,
            delta: 0.0,
            eps_bulk: 1.0,
        };
        let t = 1.5 * PI / bad.omega; // sin = -1
        assert!(matches!(drive_ratio(t, &bad), Err(Error::InvalidDrive(_))));
    }

    #[test]
    fn evolve_preconditions() {
        let geom = unit_cube(0.05);
        let mode = ModeIndex::tm(1, 1, 0);
        let drive = resonant_drive(&mode, &geom, 1.0, 0.2, 1.0, 0.0).unwrap();
        // too coarse a resolution
        assert!(evolve_bogoliubov(
            &mode,
            &geom,
            &drive,
            20.0 * drive.period(),
            199,
            FrequencyMethod::FirstOrder
        )
        .is_err());
        // too short a run for stroboscopic sampling to mean anything
        assert!(evolve_bogoliubov(
            &mode,
            &geom,
            &drive,
            5.0 * drive.period(),
            256,
            FrequencyMethod::FirstOrder
        )
        .is_err());
        // TE has no first-order channel
        assert!(evolve_bogoliubov(
            &ModeIndex::te(1, 1, 0),
            &geom,
            &drive,
            20.0 * drive.period(),
            256,
            FrequencyMethod::FirstOrder
        )
        .is_err());
    }

    #[test]
    fn static_drive_preserves_vacuum() {
        let geom = unit_cube(0.01);
        let mode = ModeIndex::tm(1, 1, 0);
        let mut drive = resonant_drive(&mode, &geom, 1.0, 0.01, 1.0, 0.0).unwrap();
        drive.chi = 0.0;
        let result = evolve_bogoliubov(
            &mode,
            &geom,
            &drive,
            20.0 * drive.period(),
            256,
            FrequencyMethod::FirstOrder,
        )
        .unwrap();
        assert_eq!(result.photon_number[0], 0.0);
        for &n in &result.photon_number {
            assert!(n < 1e-12, "spurious photons {n}");
        }
        assert!(result.wronskian_drift < WRONSKIAN_ABS);
    }

    #[test]
    fn resonant_growth_tracks_rwa() {
        // moderate drive so growth shows within a short run
        let geom = CavityGeometry::new(1.0, 1.0, 1.0, 0.05).unwrap();
        let mode = ModeIndex::tm(1, 1, 0);
        let drive = resonant_drive(&mode, &geom, 1.0, 0.2, 1.0, 0.0).unwrap();
        let r = squeezing_rate(&mode, &geom, &drive).unwrap();
        let duration = 2.2 / r;
        let result =
            evolve_auto(&mode, &geom, &drive, duration, 512, FrequencyMethod::FirstOrder).unwrap();
        assert!(result.bogoliubov_defect() < WRONSKIAN_ABS);
        let n_end = result.final_photon_number();
        let expect = photon_number_rwa(r, *result.times.last().unwrap());
        assert!(
            (n_end / expect - 1.0).abs() < 0.1,
            "N = {n_end}, sinh^2 = {expect}"
        );
    }

    #[test]
    fn detuned_drive_stays_bounded() {
        let geom = CavityGeometry::new(1.0, 1.0, 1.0, 0.05).unwrap();
        let mode = ModeIndex::tm(1, 1, 0);
        // relative modulation amplitude of Omega^2 is 2 k^2 (a/L) chi / (2 Om0^2)
        let chi = 0.2;
        let rel_mod = mode.k_par_sq(&geom) * geom.a_over_l() * chi / (2.0 * PI * PI);
        let drive = resonant_drive(&mode, &geom, 1.0, chi, 1.0, 10.0 * rel_mod).unwrap();
        let result = evolve_auto(
            &mode,
            &geom,
            &drive,
            100.0 * drive.period(),
            512,
            FrequencyMethod::FirstOrder,
        )
        .unwrap();
        let max_n = result.photon_number.iter().cloned().fold(0.0, f64::max);
        assert!(max_n < 0.05, "detuned run grew to N = {max_n}");
    }

    #[test]
    fn coarse_steps_fail_and_auto_doubling_recovers() {
        // at the minimum resolution the integrator's Wronskian damping
        // accumulates past budget over enough periods; the documented
        // contract is a step-size error, and the auto wrapper doubles
        // until the budget holds
        let geom = CavityGeometry::new(1.0, 1.0, 1.0, 0.05).unwrap();
        let mode = ModeIndex::tm(1, 1, 0);
        let drive = resonant_drive(&mode, &geom, 1.0, 0.2, 1.0, 0.0).unwrap();
        let duration = 150.0 * drive.period();
        match evolve_bogoliubov(&mode, &geom, &drive, duration, 200, FrequencyMethod::FirstOrder)
        {
            Err(Error::StepSizeFailure { drift, steps_per_period }) => {
                assert!(drift > WRONSKIAN_ABS);
                assert_eq!(steps_per_period, 200);
            }
            other => panic!("expected StepSizeFailure, got {other:?}"),
        }
        let result =
            evolve_auto(&mode, &geom, &drive, duration, 200, FrequencyMethod::FirstOrder)
                .unwrap();
        assert!(result.steps_per_period > 200);
        assert!(result.wronskian_drift < WRONSKIAN_ABS);
    }

    #[test]
    fn step_doubling_changes_little() {
        let geom = CavityGeometry::new(1.0, 1.0, 1.0, 0.05).unwrap();
        let mode = ModeIndex::tm(1, 1, 0);
        let drive = resonant_drive(&mode, &geom, 1.0, 0.2, 1.0, 0.0).unwrap();
        let duration = 50.0 * drive.period();
        let coarse =
            evolve_bogoliubov(&mode, &geom, &drive, duration, 512, FrequencyMethod::FirstOrder)
                .unwrap();
        let fine =
            evolve_bogoliubov(&mode, &geom, &drive, duration, 1024, FrequencyMethod::FirstOrder)
                .unwrap();
        let rel = (coarse.final_photon_number() / fine.final_photon_number() - 1.0).abs();
        assert!(rel < 1e-3, "step halving moved final N by {rel:e}");
    }

    #[test]
    fn exact_and_first_order_evolutions_agree() {
        let geom = CavityGeometry::new(1.0, 1.0, 1.0, 0.02).unwrap();
        let mode = ModeIndex::tm(1, 1, 0);
        let drive = resonant_drive(&mode, &geom, 1.0, 0.2, 1.0, 0.0).unwrap();
        let duration = 40.0 * drive.period();
        let fo = evolve_auto(&mode, &geom, &drive, duration, 256, FrequencyMethod::FirstOrder)
            .unwrap();
        let ex =
            evolve_auto(&mode, &geom, &drive, duration, 256, FrequencyMethod::Exact).unwrap();
        let (nf, ne) = (fo.final_photon_number(), ex.final_photon_number());
        assert!(
            (nf / ne - 1.0).abs() < 0.05,
            "first-order N = {nf}, exact N = {ne}"
        );
    }
}
