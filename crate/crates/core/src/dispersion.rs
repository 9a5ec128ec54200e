//! Exact transcendental dispersion relations of the two-region cavity.
//!
//! An eigenfrequency must satisfy, simultaneously with
//! `eps_slab W - k_par^2 = s_slab` and `eps_bulk W - k_par^2 = s_bulk`
//! (`W = Omega^2`), the interface matching condition
//!
//! * TE: `K(s_slab, a) = K(s_bulk, a - L)`
//! * TM: `s_slab K(s_slab, a)/eps_slab = s_bulk K(s_bulk, a - L)/eps_bulk`
//!
//! where `K` is the pole-bearing axial kernel `tan(sqrt(s) d)/sqrt(s)`.
//! Roots are bracketed pole-aware and refined by bisection; branch labels
//! follow the homogeneous limit by continuation in the slab permittivity.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::axial::{axial_kernel, kernel_poles_in_s};
use crate::error::{Error, Result};
use crate::geometry::{CavityGeometry, ModeIndex, PermittivityPair, Polarization};

/// Relative width at which bisection stops. Tighter than the contract's
/// 1e-12 so first-order residual sweeps stay above solver noise.
pub const ROOT_REL_TOL: f64 = 1e-15;

/// Exact dispersion result for one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSolution {
    /// Signed squared axial wavenumber in the slab (region I); negative
    /// values encode an imaginary wavenumber (evanescent slab field).
    pub s_slab: f64,
    /// Signed squared axial wavenumber in the bulk (region II).
    pub s_bulk: f64,
    /// Eigenfrequency Omega > 0.
    pub omega: f64,
    /// k_par^2 = k_y^2 + k_z^2.
    pub k_par_sq: f64,
    /// Reference axial wavenumber n_x pi / L.
    pub k_perp: f64,
}

impl ModeSolution {
    fn from_omega_sq(
        omega_sq: f64,
        mode: &ModeIndex,
        geom: &CavityGeometry,
        eps: &PermittivityPair,
    ) -> Self {
        let k_par_sq = mode.k_par_sq(geom);
        Self {
            s_slab: eps.eps_slab * omega_sq - k_par_sq,
            s_bulk: eps.eps_bulk * omega_sq - k_par_sq,
            omega: omega_sq.sqrt(),
            k_par_sq,
            k_perp: mode.k_perp(geom),
        }
    }

    pub fn omega_sq(&self) -> f64 {
        self.omega * self.omega
    }

    /// Largest relative violation of the eigenvalue identities
    /// `s + k_par^2 = eps Omega^2` for the two regions.
    pub fn eigenvalue_identity_residual(&self, eps: &PermittivityPair) -> f64 {
        let w = self.omega_sq();
        let r1 = (self.s_slab + self.k_par_sq - eps.eps_slab * w).abs() / (eps.eps_slab * w);
        let r2 = (self.s_bulk + self.k_par_sq - eps.eps_bulk * w).abs() / (eps.eps_bulk * w);
        r1.max(r2)
    }
}

/// Matching residual at a trial squared frequency. Zero exactly at
/// eigenfrequencies; poles of the tan kernels surface as `NearPole`.
pub fn dispersion_residual(
    omega_sq: f64,
    mode: &ModeIndex,
    geom: &CavityGeometry,
    eps: &PermittivityPair,
) -> Result<f64> {
    if omega_sq <= 0.0 || !omega_sq.is_finite() {
        return Err(Error::InvalidInput(format!(
            "dispersion residual needs omega_sq > 0, got {omega_sq}"
        )));
    }
    let k_par_sq = mode.k_par_sq(geom);
    let s_slab = eps.eps_slab * omega_sq - k_par_sq;
    let s_bulk = eps.eps_bulk * omega_sq - k_par_sq;
    let k_slab = axial_kernel(s_slab, geom.a)?;
    let k_bulk = axial_kernel(s_bulk, geom.a - geom.l)?;
    Ok(match mode.pol {
        Polarization::Te => k_slab - k_bulk,
        Polarization::Tm => s_slab * k_slab / eps.eps_slab - s_bulk * k_bulk / eps.eps_bulk,
    })
}

/// Homogeneous-cavity squared eigenfrequency for a branch label n_x.
pub fn homogeneous_omega_sq(mode: &ModeIndex, geom: &CavityGeometry, eps: f64) -> f64 {
    let kx = mode.n_x as f64 * PI / geom.l;
    (kx * kx + mode.k_par_sq(geom)) / eps
}

struct Residual<'a> {
    mode: &'a ModeIndex,
    geom: &'a CavityGeometry,
    eps: &'a PermittivityPair,
}

impl Residual<'_> {
    fn eval(&self, omega_sq: f64) -> Result<f64> {
        dispersion_residual(omega_sq, self.mode, self.geom, self.eps)
    }

    /// Evaluate, nudging off a pole band if the point lands in one.
    fn eval_nudged(&self, omega_sq: f64, span: f64) -> Result<f64> {
        let base = self.eval(omega_sq);
        if !matches!(base, Err(Error::NearPole { .. })) {
            return base;
        }
        let mut shift = 1e-3 * span;
        for _ in 0..6 {
            match self.eval(omega_sq + shift) {
                Err(Error::NearPole { .. }) => shift *= -2.0,
                other => return other,
            }
        }
        base
    }

    /// Kernel-pole locations in omega_sq inside (lo, hi), both regions.
    fn poles_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let k_par_sq = self.mode.k_par_sq(self.geom);
        let mut out = Vec::new();
        for (eps_r, d) in [
            (self.eps.eps_slab, self.geom.a),
            (self.eps.eps_bulk, self.geom.l - self.geom.a),
        ] {
            let s_lo = eps_r * lo - k_par_sq;
            let s_hi = eps_r * hi - k_par_sq;
            // widen the s-window slightly so a pole sitting exactly on a
            // scan boundary is not lost to both neighboring windows
            let margin = 1e-9 * s_hi.abs().max(1.0);
            for s_pole in kernel_poles_in_s(d, s_lo - margin, s_hi + margin) {
                out.push(((s_pole + k_par_sq) / eps_r).clamp(lo, hi));
            }
        }
        out.retain(|w| *w >= lo && *w <= hi);
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-14 * b.abs());
        out
    }
}

/// Scan a window for sign changes, splitting panels at kernel poles.
fn find_sign_changes(
    res: &Residual<'_>,
    lo: f64,
    hi: f64,
    samples_per_panel: usize,
) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    if !lo.is_finite() || !hi.is_finite() || hi <= lo {
        return Ok(out);
    }
    let poles = res.poles_in(lo, hi);
    let mut bounds = Vec::with_capacity(poles.len() + 2);
    bounds.push((lo, false));
    for p in poles {
        bounds.push((p, true));
    }
    bounds.push((hi, false));

    for win in bounds.windows(2) {
        let (b0, pole0) = win[0];
        let (b1, pole1) = win[1];
        let width = b1 - b0;
        if width <= 0.0 {
            continue;
        }
        let gap = 1e-9 * width;
        let plo = if pole0 { b0 + gap } else { b0 };
        let phi = if pole1 { b1 - gap } else { b1 };
        if phi <= plo {
            continue;
        }
        let n = samples_per_panel.max(2);
        let step = (phi - plo) / (n - 1) as f64;
        let mut prev_x = plo;
        let mut prev_f = res.eval_nudged(plo, step)?;
        for i in 1..n {
            let x = if i == n - 1 { phi } else { plo + i as f64 * step };
            let f = res.eval_nudged(x, step)?;
            if prev_f == 0.0 {
                out.push((prev_x, prev_x));
            } else if f != 0.0 && prev_f.signum() != f.signum() {
                out.push((prev_x, x));
            }
            prev_x = x;
            prev_f = f;
        }
        if prev_f == 0.0 {
            out.push((prev_x, prev_x));
        }
    }
    Ok(out)
}

/// Bisection to `ROOT_REL_TOL` relative width inside a sign-change
/// bracket. Returns `None` when the bracket turns out to straddle a tan
/// pole instead of a root: the residual diverges across a pole with a
/// sign flip, so converged "roots" are accepted only if the residual
/// shrank below both endpoint magnitudes.
fn bisect(res: &Residual<'_>, mut lo: f64, mut hi: f64) -> Result<Option<f64>> {
    if lo == hi {
        return Ok(Some(lo));
    }
    let span = hi - lo;
    let (mut flo, fhi) = match (res.eval_nudged(lo, span), res.eval_nudged(hi, span)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(Error::NearPole { .. }), _) | (_, Err(Error::NearPole { .. })) => return Ok(None),
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    if flo == 0.0 {
        return Ok(Some(lo));
    }
    if fhi == 0.0 {
        return Ok(Some(hi));
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RootNotBracketed { lo, hi });
    }
    let endpoint_scale = flo.abs().min(fhi.abs());
    for _ in 0..220 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= ROOT_REL_TOL * hi.abs() || mid <= lo || mid >= hi {
            break;
        }
        let fmid = match res.eval_nudged(mid, hi - lo) {
            Ok(v) => v,
            Err(Error::NearPole { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        if fmid == 0.0 {
            return Ok(Some(mid));
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    match res.eval_nudged(mid, (hi - lo).max(ROOT_REL_TOL * hi.abs())) {
        Ok(fmid) if fmid.abs() <= endpoint_scale => Ok(Some(mid)),
        Ok(_) => Ok(None),
        Err(Error::NearPole { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Locate the root nearest to `guess` with an expanding pole-aware bracket.
fn track_root(res: &Residual<'_>, guess: f64) -> Result<f64> {
    let scale = guess.abs().max(1e-30);
    let floor = 1e-12 * scale;
    let mut half = 1e-5 * scale;
    let mut widest = (guess, guess);
    for _ in 0..28 {
        let lo = (guess - half).max(floor);
        let hi = guess + half;
        widest = (lo, hi);
        let brackets = find_sign_changes(res, lo, hi, 12)?;
        let mut best: Option<f64> = None;
        for (blo, bhi) in brackets {
            if let Some(root) = bisect(res, blo, bhi)? {
                if best.is_none_or(|b| (root - guess).abs() < (b - guess).abs()) {
                    best = Some(root);
                }
            }
        }
        if let Some(root) = best {
            return Ok(root);
        }
        half *= 3.0;
    }
    Err(Error::RootNotBracketed {
        lo: widest.0,
        hi: widest.1,
    })
}

/// Solve the dispersion relation for the branch labeled by `mode.n_x`.
///
/// The label is anchored in the homogeneous limit (`k_x = n_x pi / L`)
/// and carried to the target permittivity pair by walking `eps_slab`
/// geometrically from `eps_bulk` in at most 100 steps, re-locating the
/// root near its previous position at every step.
pub fn solve_mode(
    mode: &ModeIndex,
    geom: &CavityGeometry,
    eps: &PermittivityPair,
) -> Result<ModeSolution> {
    mode.validate_for_dispersion()?;
    geom.validate()?;
    eps.validate()?;

    let hom = PermittivityPair {
        eps_slab: eps.eps_bulk,
        eps_bulk: eps.eps_bulk,
    };
    let res_hom = Residual {
        mode,
        geom,
        eps: &hom,
    };
    let mut w = track_root(&res_hom, homogeneous_omega_sq(mode, geom, eps.eps_bulk))?;

    if !eps.is_homogeneous() {
        let start = eps.eps_bulk;
        let target = eps.eps_slab;
        let n_steps = ((48.0 * (target / start).ln().abs()).ceil() as usize).clamp(4, 100);
        let mut w_prev = w;
        for j in 1..=n_steps {
            let eps_slab_j = if j == n_steps {
                target
            } else {
                start * (target / start).powf(j as f64 / n_steps as f64)
            };
            let pair = PermittivityPair {
                eps_slab: eps_slab_j,
                eps_bulk: eps.eps_bulk,
            };
            let res = Residual {
                mode,
                geom,
                eps: &pair,
            };
            let predict = w + (w - w_prev);
            w_prev = w;
            w = track_root(&res, predict).map_err(|e| match e {
                Error::RootNotBracketed { .. } => Error::ContinuationFailed {
                    eps_slab: eps_slab_j,
                },
                other => other,
            })?;
        }
    }
    Ok(ModeSolution::from_omega_sq(w, mode, geom, eps))
}

/// Root of the dispersion relation nearest to `guess`, for tracking one
/// branch across a small parameter change (periodic drive phase tables).
pub(crate) fn solve_mode_near(
    mode: &ModeIndex,
    geom: &CavityGeometry,
    eps: &PermittivityPair,
    guess: f64,
) -> Result<f64> {
    let res = Residual { mode, geom, eps };
    track_root(&res, guess)
}

/// Independent route to the same root: scan upward from the
/// all-evanescent cutoff `k_par^2 / max(eps)` in steps of
/// `1e-3 (pi/L)^2` and count sign changes until the branch index is
/// reached (TE branches count from 1, TM from 0).
///
/// The scan starts a sliver below the cutoff: no roots exist with both
/// regions evanescent (the TE residual is strictly positive there, the
/// TM residual strictly negative), and in the homogeneous limit the TM
/// n_x = 0 root sits exactly on the cutoff, where it still shows up as
/// an ordinary sign change.
pub fn solve_mode_by_scan(
    mode: &ModeIndex,
    geom: &CavityGeometry,
    eps: &PermittivityPair,
) -> Result<ModeSolution> {
    mode.validate_for_dispersion()?;
    geom.validate()?;
    eps.validate()?;

    let wanted = match mode.pol {
        Polarization::Te => (mode.n_x - 1) as usize,
        Polarization::Tm => mode.n_x as usize,
    };
    let k_par_sq = mode.k_par_sq(geom);
    let start = (k_par_sq / eps.eps_slab.max(eps.eps_bulk)) * (1.0 - 1e-9);
    let step = 1e-3 * (PI / geom.l) * (PI / geom.l);
    // generous upper end: a few branches above the homogeneous estimate
    // in the slower-light region
    let cap = {
        let kx = (mode.n_x + 4) as f64 * PI / geom.l;
        (kx * kx + k_par_sq) / eps.eps_slab.min(eps.eps_bulk)
    };
    let res = Residual { mode, geom, eps };

    let mut found = Vec::new();
    let mut w = start;
    while w < cap {
        let hi = (w + step).min(cap);
        for (blo, bhi) in find_sign_changes(&res, w, hi, 3)? {
            let Some(root) = bisect(&res, blo, bhi)? else {
                continue;
            };
            if found
                .last()
                .is_none_or(|last: &f64| (root - last).abs() > 1e-12 * root)
            {
                found.push(root);
            }
            if found.len() > wanted {
                return Ok(ModeSolution::from_omega_sq(found[wanted], mode, geom, eps));
            }
        }
        w = hi;
    }
    Err(Error::RootNotBracketed { lo: start, hi: cap })
}

/// Mode label together with its exact dispersion solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolvedMode {
    pub mode: ModeIndex,
    pub solution: ModeSolution,
}

/// The `count` lowest eigenmodes with nonvanishing fields (TE with
/// n_x >= 1, TM with n_y, n_z >= 1), sorted by eigenfrequency with a
/// deterministic index tie-break for degenerate levels.
pub fn enumerate_lowest_modes(
    geom: &CavityGeometry,
    eps: &PermittivityPair,
    count: usize,
) -> Result<Vec<SolvedMode>> {
    geom.validate()?;
    eps.validate()?;
    if count == 0 {
        return Ok(Vec::new());
    }

    // Preselect candidates by the homogeneous spectrum at eps_bulk with a
    // generous margin; slab shifts are small against level spacing for
    // moderate contrast.
    let cap = 3 + (2.0 * (count as f64).cbrt()).ceil() as u32
        + (geom.l.max(geom.l_y).max(geom.l_z) / geom.l.min(geom.l_y).min(geom.l_z)).ceil() as u32;
    let mut candidates = Vec::new();
    for n_x in 0..=cap {
        for n_y in 0..=cap {
            for n_z in 0..=cap {
                for pol in [Polarization::Te, Polarization::Tm] {
                    let mode = ModeIndex::new(n_x, n_y, n_z, pol);
                    if mode.validate_for_mode_function().is_ok() {
                        let w = homogeneous_omega_sq(&mode, geom, eps.eps_bulk);
                        candidates.push((w, mode));
                    }
                }
            }
        }
    }
    candidates.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then(mode_order_key(&a.1).cmp(&mode_order_key(&b.1)))
    });
    let take = (2 * count + 10).min(candidates.len());
    if candidates.len() < count {
        return Err(Error::InvalidInput(format!(
            "candidate enumeration cap too small for count = {count}"
        )));
    }

    let mut solved: Vec<SolvedMode> = candidates[..take]
        .iter()
        .map(|(_, mode)| {
            solve_mode(mode, geom, eps).map(|solution| SolvedMode {
                mode: *mode,
                solution,
            })
        })
        .collect::<Result<_>>()?;
    solved.sort_by(|a, b| {
        a.solution
            .omega
            .partial_cmp(&b.solution.omega)
            .unwrap()
            .then(mode_order_key(&a.mode).cmp(&mode_order_key(&b.mode)))
    });
    solved.truncate(count);
    Ok(solved)
}

fn mode_order_key(mode: &ModeIndex) -> (u32, u32, u32, u8) {
    (
        mode.n_x,
        mode.n_y,
        mode.n_z,
        match mode.pol {
            Polarization::Te => 0,
            Polarization::Tm => 1,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cube(a: f64) -> CavityGeometry {
        CavityGeometry::new(1.0, 1.0, 1.0, a).unwrap()
    }

    #[test]
    fn residual_vanishes_on_homogeneous_spectrum() {
        let geom = unit_cube(0.3);
        let eps = PermittivityPair::homogeneous(1.0).unwrap();
        let mode = ModeIndex::te(1, 1, 0);
        let w = PI * PI * (1.0 + 1.0);
        let r = dispersion_residual(w, &mode, &geom, &eps).unwrap();
        assert!(r.abs() < 1e-12, "residual {r}");
    }

    #[test]
    fn residual_homogeneous_reduces_to_sin_kl_roots() {
        // with equal permittivities the matching reduces to k L = n pi
        let geom = unit_cube(0.23);
        let eps = PermittivityPair::homogeneous(2.0).unwrap();
        for pol in [Polarization::Te, Polarization::Tm] {
            for n in 1..=3u32 {
                let mode = ModeIndex::new(n, 1, 1, pol);
                let w = homogeneous_omega_sq(&mode, &geom, 2.0);
                let r = dispersion_residual(w, &mode, &geom, &eps).unwrap();
                assert!(r.abs() < 1e-10, "{pol:?} n={n}: residual {r}");
            }
        }
    }

    #[test]
    fn residual_sign_change_brackets_shifted_tm_root() {
        // dense scan with step 1e-4 pi^2 around the first-order location
        let geom = unit_cube(0.01);
        let eps = PermittivityPair::new(0.5, 1.0).unwrap();
        let mode = ModeIndex::tm(1, 1, 0);
        let step = 1e-4 * PI * PI;
        let lo = 1.95 * PI * PI;
        let hi = 2.10 * PI * PI;
        let mut w = lo;
        let mut changes = 0;
        let mut bracket = (0.0, 0.0);
        let mut prev = dispersion_residual(w, &mode, &geom, &eps).unwrap();
        while w < hi {
            let next = w + step;
            let f = dispersion_residual(next, &mode, &geom, &eps).unwrap();
            if prev.signum() != f.signum() {
                changes += 1;
                bracket = (w, next);
            }
            prev = f;
            w = next;
        }
        assert_eq!(changes, 1);
        // expected near omega_sq = (1.01 pi)^2 + pi^2
        let expect = (1.01 * PI) * (1.01 * PI) + PI * PI;
        assert!(bracket.0 < expect && expect < bracket.1 + 40.0 * step);
    }

    #[test]
    fn solve_homogeneous_te_mode() {
        let geom = unit_cube(0.37);
        for eps_val in [1.0, 2.5] {
            let eps = PermittivityPair::homogeneous(eps_val).unwrap();
            let mode = ModeIndex::te(2, 1, 0);
            let sol = solve_mode(&mode, &geom, &eps).unwrap();
            let kx = 2.0 * PI;
            assert!((sol.s_bulk - kx * kx).abs() < 1e-9 * kx * kx);
            let omega = ((4.0 * PI * PI + PI * PI) / eps_val).sqrt();
            assert!((sol.omega - omega).abs() < 1e-10 * omega);
            assert!(sol.eigenvalue_identity_residual(&eps) < 1e-12);
        }
    }

    #[test]
    fn solve_tm_slab_matches_first_order() {
        let geom = unit_cube(0.01);
        let eps = PermittivityPair::new(0.5, 1.0).unwrap();
        let mode = ModeIndex::tm(1, 1, 0);
        let sol = solve_mode(&mode, &geom, &eps).unwrap();
        let kx = sol.s_bulk.sqrt();
        // first order predicts 1.01 pi; discrepancy is O(a^2/L^2)
        assert!(
            (kx - 1.01 * PI).abs() < 5e-4 * PI,
            "kx = {kx}, expected about {}",
            1.01 * PI
        );
    }

    #[test]
    fn solve_agrees_with_scan_oracle() {
        let geom = unit_cube(0.07);
        let cases = [
            (ModeIndex::te(1, 1, 1), PermittivityPair::new(0.5, 1.0).unwrap()),
            (ModeIndex::te(3, 1, 0), PermittivityPair::new(2.0, 1.0).unwrap()),
            (ModeIndex::tm(0, 1, 1), PermittivityPair::new(0.4, 1.3).unwrap()),
            (ModeIndex::tm(2, 1, 1), PermittivityPair::new(1.8, 0.9).unwrap()),
            (ModeIndex::tm(1, 2, 1), PermittivityPair::new(0.7, 1.0).unwrap()),
        ];
        for (mode, eps) in cases {
            let a = solve_mode(&mode, &geom, &eps).unwrap();
            let b = solve_mode_by_scan(&mode, &geom, &eps).unwrap();
            assert!(
                (a.omega - b.omega).abs() < 1e-10 * a.omega,
                "{mode}: continuation {} vs scan {}",
                a.omega,
                b.omega
            );
        }
    }

    #[test]
    fn high_contrast_mode_pulled_into_slab() {
        let geom = unit_cube(0.01);
        let eps = PermittivityPair::new(100.0, 1.0).unwrap();
        let mode = ModeIndex::tm(1, 1, 0);
        let sol = solve_mode(&mode, &geom, &eps).unwrap();
        let hom = homogeneous_omega_sq(&mode, &geom, 1.0);
        assert!(sol.s_slab > 10.0 * sol.s_bulk.abs());
        // the drop is a first-order effect, about 2 k_par^2 (a/L) here;
        // only the direction and its clear presence are asserted
        let drop = hom - sol.omega_sq();
        assert!(
            drop > 0.5 * mode.k_par_sq(&geom) * geom.a_over_l(),
            "omega_sq {} vs hom {hom}",
            sol.omega_sq()
        );
    }

    #[test]
    fn evanescent_slab_regime() {
        // eps_slab << eps_bulk pushes the mode out of the slab:
        // eps_slab Omega^2 < k_par^2, so s_slab < 0
        let geom = unit_cube(0.05);
        let eps = PermittivityPair::new(0.05, 1.0).unwrap();
        for mode in [ModeIndex::te(1, 1, 1), ModeIndex::tm(1, 1, 1)] {
            let sol = solve_mode(&mode, &geom, &eps).unwrap();
            assert!(sol.s_slab < 0.0, "{mode}: s_slab = {}", sol.s_slab);
            assert!(sol.s_bulk > 0.0);
        }
    }

    #[test]
    fn rejects_invalid_modes() {
        let geom = unit_cube(0.1);
        let eps = PermittivityPair::homogeneous(1.0).unwrap();
        assert!(solve_mode(&ModeIndex::te(0, 1, 1), &geom, &eps).is_err());
        assert!(solve_mode(&ModeIndex::tm(1, 0, 0), &geom, &eps).is_err());
    }

    #[test]
    fn residual_signals_kernel_pole() {
        // place s_slab exactly on the first tan pole
        let geom = unit_cube(0.2);
        let eps = PermittivityPair::new(2.0, 1.0).unwrap();
        let mode = ModeIndex::te(1, 1, 0);
        let s_pole = (PI / 2.0 / geom.a) * (PI / 2.0 / geom.a);
        let w = (s_pole + mode.k_par_sq(&geom)) / eps.eps_slab;
        assert!(matches!(
            dispersion_residual(w, &mode, &geom, &eps),
            Err(Error::NearPole { .. })
        ));
        assert!(dispersion_residual(-1.0, &mode, &geom, &eps).is_err());
    }

    #[test]
    fn residual_below_cutoff_has_no_roots() {
        // with both regions evanescent the TE residual is positive and
        // the TM residual negative, so no eigenvalue hides below
        // k_par^2 / max(eps)
        let geom = unit_cube(0.2);
        let eps = PermittivityPair::new(0.7, 1.4).unwrap();
        let cutoff = ModeIndex::tm(1, 1, 1).k_par_sq(&geom) / 1.4;
        for frac in [0.2, 0.5, 0.9] {
            let w = frac * cutoff;
            let te = dispersion_residual(w, &ModeIndex::te(1, 1, 1), &geom, &eps).unwrap();
            let tm = dispersion_residual(w, &ModeIndex::tm(1, 1, 1), &geom, &eps).unwrap();
            assert!(te > 0.0, "TE residual {te} at w = {w}");
            assert!(tm < 0.0, "TM residual {tm} at w = {w}");
        }
    }

    #[test]
    fn scan_finds_cutoff_root_of_homogeneous_tm() {
        // the homogeneous TM n_x = 0 root sits exactly on the
        // all-evanescent cutoff; both routes must label it as branch 0
        let geom = unit_cube(0.1);
        let eps = PermittivityPair::homogeneous(1.0).unwrap();
        let scanned = solve_mode_by_scan(&ModeIndex::tm(0, 1, 1), &geom, &eps).unwrap();
        let tracked = solve_mode(&ModeIndex::tm(0, 1, 1), &geom, &eps).unwrap();
        assert!((scanned.omega_sq() - 2.0 * PI * PI).abs() < 1e-9 * PI * PI);
        assert!((scanned.omega - tracked.omega).abs() < 1e-10 * tracked.omega);
        // and the next branch is not mistaken for it
        let next = solve_mode_by_scan(&ModeIndex::tm(1, 1, 1), &geom, &eps).unwrap();
        assert!((next.omega_sq() - 3.0 * PI * PI).abs() < 1e-9 * PI * PI);
    }

    #[test]
    fn enumerate_unit_cube_counts_degeneracies() {
        let geom = unit_cube(1e-6);
        let eps = PermittivityPair::homogeneous(1.0).unwrap();
        let modes = enumerate_lowest_modes(&geom, &eps, 20).unwrap();
        assert_eq!(modes.len(), 20);
        // sqrt(2): TE(1,1,0), TE(1,0,1), TM(0,1,1)
        for sm in &modes[..3] {
            assert!((sm.solution.omega - PI * 2.0_f64.sqrt()).abs() < 1e-6);
        }
        // then sqrt(3) twice: TE(1,1,1), TM(1,1,1)
        for sm in &modes[3..5] {
            assert!((sm.solution.omega - PI * 3.0_f64.sqrt()).abs() < 1e-6);
        }
        // 20th closes the sqrt(8) shell
        assert!((modes[19].solution.omega - PI * 8.0_f64.sqrt()).abs() < 1e-6);
    }
}
