//! Normalized dual-potential mode functions, overlaps, and the
//! inter-mode velocity coupling.
//!
//! In each region the ansatz is
//!
//! ```text
//! f = ( Sn(u) cos(k_y y) cos(k_z z) e_x,
//!       Cs(u) sin(k_y y) cos(k_z z) e_y,
//!       Cs(u) cos(k_y y) sin(k_z z) e_z )
//! ```
//!
//! with `u = x` in the slab and `u = x - L` in the bulk. Transversality,
//! the six interface continuity conditions, and the polarization tag
//! collapse onto fixed amplitude directions with one free ratio between
//! the regions:
//!
//! * TE: `e = lambda (-k_par^2 / p, k_y, k_z)`, ratio from continuity of
//!   the transverse components (solvable exactly at TE dispersion roots);
//! * TM: `e = mu (0, k_z, -k_y)`, the axial component vanishing
//!   identically (no perpendicular magnetic field anywhere), ratio from
//!   continuity (solvable exactly at TM dispersion roots).

use serde::{Deserialize, Serialize};

use crate::axial::{int_cs_cs, int_sn_sn, AxialProfile};
use crate::dispersion::ModeSolution;
use crate::dynamics::DriveSpec;
use crate::error::{Error, Result};
use crate::geometry::{CavityGeometry, ModeIndex, PermittivityPair, Polarization};

/// The two dielectric regions along x.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Region I, `0 <= x <= a`.
    Slab,
    /// Region II, `a <= x <= L`.
    Bulk,
}

/// A normalized eigenfunction of the curl-curl operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeFunction {
    pub mode: ModeIndex,
    pub geometry: CavityGeometry,
    pub permittivity: PermittivityPair,
    pub solution: ModeSolution,
    /// Polarization amplitude triple in the slab (region I).
    pub pol_slab: [f64; 3],
    /// Polarization amplitude triple in the bulk (region II).
    pub pol_bulk: [f64; 3],
    /// Overall normalization constant multiplying both regions.
    pub norm: f64,
}

impl ModeFunction {
    fn profile(&self, region: Region) -> AxialProfile {
        match region {
            Region::Slab => AxialProfile::new(self.solution.s_slab),
            Region::Bulk => AxialProfile::new(self.solution.s_bulk),
        }
    }

    fn amplitudes(&self, region: Region) -> [f64; 3] {
        match region {
            Region::Slab => self.pol_slab,
            Region::Bulk => self.pol_bulk,
        }
    }

    fn axial_coordinate(&self, region: Region, x: f64) -> f64 {
        match region {
            Region::Slab => x,
            Region::Bulk => x - self.geometry.l,
        }
    }

    fn region_of(&self, x: f64) -> Region {
        if x <= self.geometry.a {
            Region::Slab
        } else {
            Region::Bulk
        }
    }

    /// Field value using the closed form of the stated region (one-sided
    /// at the interface).
    pub fn evaluate_in(&self, region: Region, x: f64, y: f64, z: f64) -> [f64; 3] {
        let pr = self.profile(region);
        let e = self.amplitudes(region);
        let u = self.axial_coordinate(region, x);
        let ky = self.mode.k_y(&self.geometry);
        let kz = self.mode.k_z(&self.geometry);
        let (sy, cy) = (ky * y).sin_cos();
        let (sz, cz) = (kz * z).sin_cos();
        [
            self.norm * e[0] * pr.sn(u) * cy * cz,
            self.norm * e[1] * pr.cs(u) * sy * cz,
            self.norm * e[2] * pr.cs(u) * cy * sz,
        ]
    }

    pub fn evaluate(&self, x: f64, y: f64, z: f64) -> [f64; 3] {
        self.evaluate_in(self.region_of(x), x, y, z)
    }

    /// Curl of the field in the stated region.
    pub fn curl_in(&self, region: Region, x: f64, y: f64, z: f64) -> [f64; 3] {
        let pr = self.profile(region);
        let e = self.amplitudes(region);
        let u = self.axial_coordinate(region, x);
        let ky = self.mode.k_y(&self.geometry);
        let kz = self.mode.k_z(&self.geometry);
        let (sy, cy) = (ky * y).sin_cos();
        let (sz, cz) = (kz * z).sin_cos();
        [
            self.norm * pr.cs(u) * sy * sz * (kz * e[1] - ky * e[2]),
            -self.norm * pr.sn(u) * cy * sz * (kz * e[0] + pr.q * e[2]),
            self.norm * pr.sn(u) * sy * cz * (ky * e[0] + pr.q * e[1]),
        ]
    }

    /// Algebraic transversality residual `p e_x + k_y e_y + k_z e_z` of
    /// one region, relative to the amplitude scale.
    pub fn transversality_residual(&self, region: Region) -> f64 {
        let pr = self.profile(region);
        let e = self.amplitudes(region);
        let ky = self.mode.k_y(&self.geometry);
        let kz = self.mode.k_z(&self.geometry);
        let num = pr.p * e[0] + ky * e[1] + kz * e[2];
        let scale = (pr.p * e[0]).abs() + (ky * e[1]).abs() + (kz * e[2]).abs();
        if scale == 0.0 {
            0.0
        } else {
            num.abs() / scale
        }
    }

    /// Worst interface mismatch among the six continuity conditions
    /// (amplitude level, the transverse factors stripped): the three
    /// components of the potential, the perpendicular curl component,
    /// and the two components of curl over epsilon.
    pub fn interface_residual(&self) -> f64 {
        let a = self.geometry.a;
        let ky = self.mode.k_y(&self.geometry);
        let kz = self.mode.k_z(&self.geometry);
        let (ps, pb) = (self.profile(Region::Slab), self.profile(Region::Bulk));
        let (es, eb) = (self.pol_slab, self.pol_bulk);
        let us = a;
        let ub = a - self.geometry.l;
        let (sn_s, cs_s) = (ps.sn(us), ps.cs(us));
        let (sn_b, cs_b) = (pb.sn(ub), pb.cs(ub));
        let (eps_s, eps_b) = (self.permittivity.eps_slab, self.permittivity.eps_bulk);
        let mut worst: f64 = 0.0;
        let mut push = |value: f64| worst = worst.max(value.abs() * self.norm);
        push(sn_s * es[0] - sn_b * eb[0]);
        push(cs_s * es[1] - cs_b * eb[1]);
        push(cs_s * es[2] - cs_b * eb[2]);
        push(cs_s * (kz * es[1] - ky * es[2]) - cs_b * (kz * eb[1] - ky * eb[2]));
        push(sn_s * (kz * es[0] + ps.q * es[2]) / eps_s - sn_b * (kz * eb[0] + pb.q * eb[2]) / eps_b);
        push(sn_s * (ky * es[0] + ps.q * es[1]) / eps_s - sn_b * (ky * eb[0] + pb.q * eb[1]) / eps_b);
        worst
    }

    /// Mismatch of the polarization condition at the interface:
    /// TE demands a vanishing perpendicular curl component, TM a
    /// vanishing perpendicular potential component.
    pub fn polarization_residual(&self) -> f64 {
        let a = self.geometry.a;
        let ky = self.mode.k_y(&self.geometry);
        let kz = self.mode.k_z(&self.geometry);
        let ps = self.profile(Region::Slab);
        match self.mode.pol {
            Polarization::Te => {
                (self.norm * ps.cs(a) * (kz * self.pol_slab[1] - ky * self.pol_slab[2])).abs()
            }
            Polarization::Tm => (self.norm * ps.sn(a) * self.pol_slab[0]).abs(),
        }
    }
}

/// Build the normalized mode function on top of an exact dispersion
/// solution.
pub fn build_mode_function(
    sol: &ModeSolution,
    mode: &ModeIndex,
    geom: &CavityGeometry,
    eps: &PermittivityPair,
) -> Result<ModeFunction> {
    mode.validate_for_mode_function()?;
    geom.validate()?;
    eps.validate()?;

    let ky = mode.k_y(geom);
    let kz = mode.k_z(geom);
    let k_par_sq = mode.k_par_sq(geom);
    let ps = AxialProfile::new(sol.s_slab);
    let pb = AxialProfile::new(sol.s_bulk);
    let (sn_s, cs_s) = (ps.sn(geom.a), ps.cs(geom.a));
    let (sn_b, cs_b) = (pb.sn(geom.a - geom.l), pb.cs(geom.a - geom.l));

    let (mut pol_slab, mut pol_bulk) = match mode.pol {
        Polarization::Te => {
            let dir_s = [-k_par_sq / ps.p, ky, kz];
            let dir_b = [-k_par_sq / pb.p, ky, kz];
            // region ratio from whichever interface equation is better
            // conditioned; both agree exactly at a dispersion root
            let ratio = if cs_b.abs() > 1e-3 {
                cs_s / cs_b
            } else {
                (sn_s / ps.p) * (pb.p / sn_b)
            };
            (dir_s, dir_b.map(|c| c * ratio))
        }
        Polarization::Tm => {
            let dir = [0.0, kz, -ky];
            let ratio = if cs_b.abs() > 1e-3 {
                cs_s / cs_b
            } else {
                (ps.q * sn_s / eps.eps_slab) * (eps.eps_bulk / (pb.q * sn_b))
            };
            (dir, dir.map(|c| c * ratio))
        }
    };

    let norm_sq = unnormalized_norm_sq(mode, geom, &ps, &pb, &pol_slab, &pol_bulk);
    if norm_sq <= 0.0 || !norm_sq.is_finite() {
        return Err(Error::DegenerateModeFunction(format!(
            "squared norm {norm_sq} for {mode}"
        )));
    }

    // overall sign: largest-magnitude bulk amplitude positive
    let lead = pol_bulk
        .iter()
        .copied()
        .max_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap())
        .unwrap();
    if lead < 0.0 {
        pol_slab = pol_slab.map(|c| -c);
        pol_bulk = pol_bulk.map(|c| -c);
    }

    Ok(ModeFunction {
        mode: *mode,
        geometry: *geom,
        permittivity: *eps,
        solution: *sol,
        pol_slab,
        pol_bulk,
        norm: 1.0 / norm_sq.sqrt(),
    })
}

/// Transverse-direction squared integrals: `int cos^2` and `int sin^2`
/// over one cavity edge.
fn transverse_weights(n: u32, length: f64) -> (f64, f64) {
    if n == 0 {
        (length, 0.0)
    } else {
        (0.5 * length, 0.5 * length)
    }
}

fn unnormalized_norm_sq(
    mode: &ModeIndex,
    geom: &CavityGeometry,
    ps: &AxialProfile,
    pb: &AxialProfile,
    pol_slab: &[f64; 3],
    pol_bulk: &[f64; 3],
) -> f64 {
    let (cc_y, ss_y) = transverse_weights(mode.n_y, geom.l_y);
    let (cc_z, ss_z) = transverse_weights(mode.n_z, geom.l_z);
    let mut total = 0.0;
    for (pr, e, u_lo, u_hi) in [
        (ps, pol_slab, 0.0, geom.a),
        (pb, pol_bulk, geom.a - geom.l, 0.0),
    ] {
        let sn2 = pr.int_sn_sq(u_lo, u_hi);
        let cs2 = pr.int_cs_sq(u_lo, u_hi);
        total += e[0] * e[0] * sn2 * cc_y * cc_z
            + e[1] * e[1] * cs2 * ss_y * cc_z
            + e[2] * e[2] * cs2 * cc_y * ss_z;
    }
    total
}

/// Scalar product of two mode functions over the cavity, by closed-form
/// per-region integrals. Geometry must match; permittivities may differ
/// (the velocity coupling differentiates across frames).
fn overlap_integral(fa: &ModeFunction, fb: &ModeFunction) -> Result<f64> {
    if fa.geometry != fb.geometry {
        return Err(Error::FrameMismatch);
    }
    // perpendicular trigonometric factors are orthogonal across indices
    if fa.mode.n_y != fb.mode.n_y || fa.mode.n_z != fb.mode.n_z {
        return Ok(0.0);
    }
    let geom = &fa.geometry;
    let (cc_y, ss_y) = transverse_weights(fa.mode.n_y, geom.l_y);
    let (cc_z, ss_z) = transverse_weights(fa.mode.n_z, geom.l_z);
    let mut total = 0.0;
    for region in [Region::Slab, Region::Bulk] {
        let (u_lo, u_hi) = match region {
            Region::Slab => (0.0, geom.a),
            Region::Bulk => (geom.a - geom.l, 0.0),
        };
        let pa = fa.profile(region);
        let pb = fb.profile(region);
        let ea = fa.amplitudes(region);
        let eb = fb.amplitudes(region);
        let sn_sn = int_sn_sn(&pa, &pb, u_lo, u_hi);
        let cs_cs = int_cs_cs(&pa, &pb, u_lo, u_hi);
        total += ea[0] * eb[0] * sn_sn * cc_y * cc_z
            + ea[1] * eb[1] * cs_cs * ss_y * cc_z
            + ea[2] * eb[2] * cs_cs * cc_y * ss_z;
    }
    Ok(fa.norm * fb.norm * total)
}

/// Orthonormality overlap `int f_a . f_b d^3r` of two modes of the same
/// cavity at the same permittivity pair.
pub fn overlap(fa: &ModeFunction, fb: &ModeFunction) -> Result<f64> {
    if fa.permittivity != fb.permittivity {
        return Err(Error::FrameMismatch);
    }
    overlap_integral(fa, fb)
}

/// Same overlap by brute-force tensor quadrature: an `n^3` Gauss-Legendre
/// grid per region, evaluating both vector fields pointwise. Test oracle
/// for the closed forms.
pub fn overlap_quadrature(fa: &ModeFunction, fb: &ModeFunction, n: usize) -> Result<f64> {
    if fa.geometry != fb.geometry {
        return Err(Error::FrameMismatch);
    }
    let geom = &fa.geometry;
    let (ys, wy) = crate::quad::gauss_legendre_on(n, 0.0, geom.l_y);
    let (zs, wz) = crate::quad::gauss_legendre_on(n, 0.0, geom.l_z);
    let mut total = 0.0;
    for (region, x_lo, x_hi) in [
        (Region::Slab, 0.0, geom.a),
        (Region::Bulk, geom.a, geom.l),
    ] {
        let (xs, wx) = crate::quad::gauss_legendre_on(n, x_lo, x_hi);
        // precompute per-axis factors of both fields
        let fax: Vec<[f64; 2]> = xs
            .iter()
            .map(|&x| {
                let pr = fa.profile(region);
                let u = fa.axial_coordinate(region, x);
                [pr.sn(u), pr.cs(u)]
            })
            .collect();
        let fbx: Vec<[f64; 2]> = xs
            .iter()
            .map(|&x| {
                let pr = fb.profile(region);
                let u = fb.axial_coordinate(region, x);
                [pr.sn(u), pr.cs(u)]
            })
            .collect();
        let trig = |k: f64, pts: &[f64]| -> Vec<[f64; 2]> {
            pts.iter().map(|&t| [(k * t).sin(), (k * t).cos()]).collect()
        };
        let fay = trig(fa.mode.k_y(geom), &ys);
        let fby = trig(fb.mode.k_y(geom), &ys);
        let faz = trig(fa.mode.k_z(geom), &zs);
        let fbz = trig(fb.mode.k_z(geom), &zs);
        let ea = fa.amplitudes(region);
        let eb = fb.amplitudes(region);
        for i in 0..n {
            for j in 0..n {
                let wij = wx[i] * wy[j];
                let mut acc = 0.0;
                for k in 0..n {
                    let dot = ea[0] * fax[i][0] * fay[j][1] * faz[k][1]
                        * (eb[0] * fbx[i][0] * fby[j][1] * fbz[k][1])
                        + ea[1] * fax[i][1] * fay[j][0] * faz[k][1]
                            * (eb[1] * fbx[i][1] * fby[j][0] * fbz[k][1])
                        + ea[2] * fax[i][1] * fay[j][1] * faz[k][0]
                            * (eb[2] * fbx[i][1] * fby[j][1] * fbz[k][0]);
                    acc += wz[k] * dot;
                }
                total += wij * acc;
            }
        }
    }
    Ok(fa.norm * fb.norm * total)
}

/// Default central-difference step for the velocity coupling: 1e-6 of
/// the drive period.
pub fn default_coupling_step(drive: &DriveSpec) -> f64 {
    1e-6 * 2.0 * std::f64::consts::PI / drive.omega
}

fn mode_function_at_ratio(
    mode: &ModeIndex,
    geom: &CavityGeometry,
    drive: &DriveSpec,
    t: f64,
) -> Result<ModeFunction> {
    let ratio = crate::dynamics::drive_ratio(t, drive)?;
    let eps = PermittivityPair::new(drive.eps_bulk / ratio, drive.eps_bulk)?;
    let sol = crate::dispersion::solve_mode(mode, geom, &eps)?;
    build_mode_function(&sol, mode, geom, &eps)
}

/// Velocity-coupling matrix element `M_ab(t) = int f_a . df_b/dt d^3r`,
/// with the time derivative taken by central difference over the drive:
/// `f_b` is rebuilt at the ratio values of `t - h` and `t + h`.
///
/// Antisymmetric in its mode arguments; first order it scales like
/// `(a/L) d(eps_bulk/eps_slab)/dt`.
pub fn coupling_matrix_element(
    alpha: &ModeIndex,
    beta: &ModeIndex,
    geom: &CavityGeometry,
    drive: &DriveSpec,
    t: f64,
    h: f64,
) -> Result<f64> {
    drive.validate()?;
    if h <= 0.0 || !h.is_finite() {
        return Err(Error::InvalidInput(format!(
            "central-difference step must be positive, got {h}"
        )));
    }
    if drive.chi == 0.0 {
        // static drive: the mode functions carry no time dependence
        return Ok(0.0);
    }
    let fa = mode_function_at_ratio(alpha, geom, drive, t)?;
    let fb_plus = mode_function_at_ratio(beta, geom, drive, t + h)?;
    let fb_minus = mode_function_at_ratio(beta, geom, drive, t - h)?;
    let plus = overlap_integral(&fa, &fb_plus)?;
    let minus = overlap_integral(&fa, &fb_minus)?;
    Ok((plus - minus) / (2.0 * h))
}

/// Step-refined coupling element: evaluates at `h` and `h/2` and demands
/// agreement within 1%, returning the finer value.
pub fn coupling_matrix_element_checked(
    alpha: &ModeIndex,
    beta: &ModeIndex,
    geom: &CavityGeometry,
    drive: &DriveSpec,
    t: f64,
    h: f64,
) -> Result<f64> {
    let coarse = coupling_matrix_element(alpha, beta, geom, drive, t, h)?;
    let fine = coupling_matrix_element(alpha, beta, geom, drive, t, 0.5 * h)?;
    let scale = fine.abs().max(1e-10);
    if (coarse - fine).abs() > 0.01 * scale {
        return Err(Error::StepRefinement { coarse, fine });
    }
    Ok(fine)
}
