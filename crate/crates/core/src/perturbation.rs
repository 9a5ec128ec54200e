//! First-order analytic formulas for the thin-slab limit and their
//! error-order validation against the exact solver.
//!
//! For `a << L` the bulk axial wavenumber of a TE mode stays at
//! `n_x pi / L` up to third order in `a/L`; a TM mode shifts at first
//! order, proportionally to `k_par^2 / k_perp^2` and to the permittivity
//! contrast. Only TM eigenvalues respond to the drive at first order.

use serde::{Deserialize, Serialize};

use crate::dispersion::solve_mode;
use crate::error::{Error, Result};
use crate::geometry::{CavityGeometry, ModeIndex, PermittivityPair, Polarization};

/// Claimed residual order of the first-order TE wavenumber formula.
pub const TE_ERROR_ORDER: i32 = 3;
/// Claimed residual order of the first-order TM wavenumber formula.
pub const TM_ERROR_ORDER: i32 = 2;

/// Permittivity-contrast band accepted by validity sweeps. Larger
/// contrast trades away the smallness of a/L.
pub const MODERATE_RATIO: (f64, f64) = (0.5, 2.0);

fn expect_pol(mode: &ModeIndex, pol: Polarization, context: &str) -> Result<()> {
    if mode.pol != pol {
        return Err(Error::InvalidMode {
            n_x: mode.n_x,
            n_y: mode.n_y,
            n_z: mode.n_z,
            pol: mode.pol.label(),
            reason: format!("{context} applies to {} modes only", pol.label()),
        });
    }
    Ok(())
}

fn expect_axial(mode: &ModeIndex, context: &str) -> Result<()> {
    if mode.n_x == 0 {
        return Err(Error::InvalidMode {
            n_x: mode.n_x,
            n_y: mode.n_y,
            n_z: mode.n_z,
            pol: mode.pol.label(),
            reason: format!("{context} needs n_x >= 1"),
        });
    }
    Ok(())
}

/// First-order TE bulk wavenumber: `n_x pi / L`, independent of the
/// permittivities at this order.
pub fn kx_te_first_order(mode: &ModeIndex, geom: &CavityGeometry) -> Result<f64> {
    expect_pol(mode, Polarization::Te, "the TE wavenumber formula")?;
    expect_axial(mode, "the TE wavenumber formula")?;
    Ok(mode.k_perp(geom))
}

/// First-order TM bulk wavenumber:
/// `(n_x pi / L) (1 + (a/L) [eps_bulk/eps_slab - 1] k_par^2/k_perp^2)`.
pub fn kx_tm_first_order(
    mode: &ModeIndex,
    geom: &CavityGeometry,
    eps: &PermittivityPair,
) -> Result<f64> {
    expect_pol(mode, Polarization::Tm, "the TM wavenumber formula")?;
    expect_axial(mode, "the TM wavenumber formula")?;
    eps.validate()?;
    let k_perp = mode.k_perp(geom);
    let correction = geom.a_over_l() * (eps.ratio() - 1.0) * mode.k_par_sq(geom) / (k_perp * k_perp);
    Ok(k_perp * (1.0 + correction))
}

/// First-order TM eigenvalue shift
/// `(2/eps_bulk) k_par^2 (a/L) (ratio - 1)`, halved for n_x = 0.
pub fn delta_omega2_tm(
    mode: &ModeIndex,
    geom: &CavityGeometry,
    eps_bulk: f64,
    ratio: f64,
) -> Result<f64> {
    expect_pol(mode, Polarization::Tm, "the eigenvalue-shift formula")?;
    if eps_bulk <= 0.0 || ratio <= 0.0 || !eps_bulk.is_finite() || !ratio.is_finite() {
        return Err(Error::InvalidInput(format!(
            "need positive eps_bulk and ratio, got {eps_bulk}, {ratio}"
        )));
    }
    let half = if mode.n_x == 0 { 0.5 } else { 1.0 };
    Ok(half * (2.0 / eps_bulk) * mode.k_par_sq(geom) * geom.a_over_l() * (ratio - 1.0))
}

/// Equivalent moving-wall length of a TM mode:
/// `L (1 - (a/L)(ratio - 1) k_par^2/k_perp^2)`.
pub fn effective_length(mode: &ModeIndex, geom: &CavityGeometry, ratio: f64) -> Result<f64> {
    expect_pol(mode, Polarization::Tm, "the effective-length picture")?;
    expect_axial(mode, "the effective-length picture")?;
    if ratio <= 0.0 || !ratio.is_finite() {
        return Err(Error::InvalidInput(format!("need ratio > 0, got {ratio}")));
    }
    let k_perp = mode.k_perp(geom);
    Ok(geom.l * (1.0 - geom.a_over_l() * (ratio - 1.0) * mode.k_par_sq(geom) / (k_perp * k_perp)))
}

/// Log-log fit of first-order residuals against a/L.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorOrderFit {
    /// Fitted exponent of |exact - first order| vs a/L.
    pub slope: f64,
    pub intercept: f64,
    /// Sweep points: (a/L, |exact - first order|).
    pub residuals: Vec<(f64, f64)>,
    /// 3 for TE, 2 for TM.
    pub claimed_order: i32,
}

/// Residual floor below which a fit would measure solver noise instead
/// of the truncation order.
const RESIDUAL_FLOOR_REL: f64 = 1e-11;

/// Sweep the exact solver over a geometry family in a/L and fit the
/// error order of the first-order wavenumber formula.
pub fn error_order_fit(
    mode: &ModeIndex,
    geom: &CavityGeometry,
    a_over_l: &[f64],
    eps: &PermittivityPair,
) -> Result<ErrorOrderFit> {
    mode.validate_for_dispersion()?;
    expect_axial(mode, "the error-order fit")?;
    eps.validate()?;
    if a_over_l.len() < 4 {
        return Err(Error::InvalidInput(format!(
            "need at least 4 sweep points, got {}",
            a_over_l.len()
        )));
    }
    let max = a_over_l.iter().cloned().fold(f64::MIN, f64::max);
    let min = a_over_l.iter().cloned().fold(f64::MAX, f64::min);
    if min <= 0.0 || !min.is_finite() || max / min < 10f64.powf(1.5) {
        return Err(Error::InvalidInput(
            "sweep must span at least 1.5 decades of positive a/L".into(),
        ));
    }
    let ratio = eps.ratio();
    if !(MODERATE_RATIO.0..=MODERATE_RATIO.1).contains(&ratio) {
        return Err(Error::InvalidInput(format!(
            "contrast eps_bulk/eps_slab = {ratio} outside the moderate band [{}, {}]",
            MODERATE_RATIO.0, MODERATE_RATIO.1
        )));
    }

    let mut points: Vec<(f64, f64)> = Vec::with_capacity(a_over_l.len());
    for &aol in a_over_l {
        let geom_a = geom.with_slab(aol * geom.l)?;
        let sol = solve_mode(mode, &geom_a, eps)?;
        if sol.s_bulk <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "bulk wavenumber imaginary at a/L = {aol}; no first-order formula to compare"
            )));
        }
        let exact = sol.s_bulk.sqrt();
        let formula = match mode.pol {
            Polarization::Te => kx_te_first_order(mode, &geom_a)?,
            Polarization::Tm => kx_tm_first_order(mode, &geom_a, eps)?,
        };
        points.push((aol, (exact - formula).abs()));
    }
    points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let floor = RESIDUAL_FLOOR_REL * mode.k_perp(geom);
    let monotone = points.windows(2).all(|w| w[0].1 < w[1].1);
    if !monotone || points.iter().any(|p| p.1 < floor) {
        return Err(Error::ResidualUnderflow);
    }

    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for (a, r) in &points {
        let x = a.ln();
        let y = r.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    Ok(ErrorOrderFit {
        slope,
        intercept,
        residuals: points,
        claimed_order: match mode.pol {
            Polarization::Te => TE_ERROR_ORDER,
            Polarization::Tm => TM_ERROR_ORDER,
        },
    })
}

/// Bundle of the first-order quantities of one mode: bulk wavenumber,
/// eigenvalue shift, equivalent wall position, and the order of the
/// neglected terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbativeShift {
    pub kx_bulk_first_order: f64,
    /// Zero for TE at this order.
    pub delta_omega_sq: f64,
    /// Equals L for TE: no first-order wall motion to mimic.
    pub effective_length: f64,
    /// 3 for TE, 2 for TM.
    pub claimed_error_order: i32,
}

/// Evaluate the full first-order bundle (needs n_x >= 1; the n_x = 0
/// eigenvalue shift is available from [`delta_omega2_tm`] alone).
pub fn perturbative_shift(
    mode: &ModeIndex,
    geom: &CavityGeometry,
    eps: &PermittivityPair,
) -> Result<PerturbativeShift> {
    expect_axial(mode, "the first-order bundle")?;
    eps.validate()?;
    Ok(match mode.pol {
        Polarization::Te => PerturbativeShift {
            kx_bulk_first_order: kx_te_first_order(mode, geom)?,
            delta_omega_sq: 0.0,
            effective_length: geom.l,
            claimed_error_order: TE_ERROR_ORDER,
        },
        Polarization::Tm => PerturbativeShift {
            kx_bulk_first_order: kx_tm_first_order(mode, geom, eps)?,
            delta_omega_sq: delta_omega2_tm(mode, geom, eps.eps_bulk, eps.ratio())?,
            effective_length: effective_length(mode, geom, eps.ratio())?,
            claimed_error_order: TM_ERROR_ORDER,
        },
    })
}

/// Exact eigenvalue shift `Omega^2(ratio) - Omega^2(1)` at fixed
/// eps_bulk, the quantity the first-order formula approximates.
pub fn exact_omega2_shift(
    mode: &ModeIndex,
    geom: &CavityGeometry,
    eps_bulk: f64,
    ratio: f64,
) -> Result<f64> {
    let perturbed = PermittivityPair::new(eps_bulk / ratio, eps_bulk)?;
    let reference = PermittivityPair::homogeneous(eps_bulk)?;
    let w1 = solve_mode(mode, geom, &perturbed)?.omega_sq();
    let w0 = solve_mode(mode, geom, &reference)?.omega_sq();
    Ok(w1 - w0)
}
