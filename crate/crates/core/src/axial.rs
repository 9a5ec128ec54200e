//! Axial building blocks shared by the dispersion solver and the mode
//! functions.
//!
//! Imaginary axial wavenumbers are encoded as signed squared wavenumbers
//! `s = k^2`: for `s < 0` the trigonometric profile continues to the
//! hyperbolic one (evanescent slab field). Everything here is real-valued
//! and continuous in `s` across zero.

use crate::error::{Error, Result};

/// Half-width of the pole-proximity band for the tan branch, relative to
/// the magnitude of the argument.
const POLE_PROXIMITY_REL: f64 = 1e-9;

/// Below this |s d^2| the kernel and the squared-profile integrals switch
/// to series, avoiding cancellation near the propagating/evanescent
/// transition.
const SERIES_THRESHOLD: f64 = 1e-3;

/// `tan(sqrt(s) d)/sqrt(s)` continued through `s = 0`.
///
/// Returns `tanh(sqrt(-s) d)/sqrt(-s)` for `s < 0` and `d` at `s = 0`;
/// the function is continuous in `s`. Signals pole proximity when
/// `sqrt(s) d` falls within a narrow band of `pi/2 mod pi` so a bracketer
/// can exclude the point instead of stepping over the discontinuity.
pub fn axial_kernel(s: f64, d: f64) -> Result<f64> {
    if !s.is_finite() || !d.is_finite() {
        return Err(Error::InvalidInput(format!(
            "axial_kernel needs finite arguments, got s={s}, d={d}"
        )));
    }
    let z = s * d * d;
    if z.abs() < SERIES_THRESHOLD {
        // tan(x)/x = 1 + x^2/3 + 2x^4/15 + 17x^6/315 + 62x^8/2835 with
        // x^2 = s d^2; the same series in s d^2 covers the tanh branch.
        let p = 1.0 + z * (1.0 / 3.0 + z * (2.0 / 15.0 + z * (17.0 / 315.0 + z * 62.0 / 2835.0)));
        return Ok(d * p);
    }
    if s > 0.0 {
        let theta = s.sqrt() * d;
        let dist = distance_to_tan_pole(theta);
        if dist < POLE_PROXIMITY_REL * theta.abs().max(1.0) {
            return Err(Error::NearPole { theta });
        }
        Ok(theta.tan() / s.sqrt())
    } else {
        let kappa = (-s).sqrt();
        Ok((kappa * d).tanh() / kappa)
    }
}

/// Distance of `theta` to the nearest odd multiple of pi/2.
fn distance_to_tan_pole(theta: f64) -> f64 {
    let t = theta / std::f64::consts::PI - 0.5;
    (t - t.round()).abs() * std::f64::consts::PI
}

/// Pole locations of `axial_kernel(s, d)` in `s`, within `(s_lo, s_hi)`.
///
/// Poles sit at `sqrt(s) |d| = (m + 1/2) pi`; only the trigonometric
/// branch (`s > 0`) has any.
pub fn kernel_poles_in_s(d: f64, s_lo: f64, s_hi: f64) -> Vec<f64> {
    let mut poles = Vec::new();
    if s_hi <= 0.0 || d == 0.0 {
        return poles;
    }
    let d = d.abs();
    let half_pi_over_d = std::f64::consts::FRAC_PI_2 / d;
    // (2m+1)^2 (pi/2d)^2 in range
    let mut m = 0u32;
    loop {
        let root = (2 * m + 1) as f64 * half_pi_over_d;
        let s = root * root;
        if s >= s_hi {
            break;
        }
        if s > s_lo {
            poles.push(s);
        }
        m += 1;
        if m > 100_000 {
            break;
        }
    }
    poles
}

/// Axial profile of one region: `Sn(u)` multiplies the x-component of the
/// mode ansatz, `Cs(u)` the transverse components, with `Sn' = p Cs` and
/// `Cs' = q Sn`, `p q = -s`.
///
/// * `s > 0`: `Sn = sin(p u)`, `Cs = cos(p u)`, `p = sqrt(s)`, `q = -p`;
/// * `s < 0`: `Sn = sinh(p u)`, `Cs = cosh(p u)`, `p = q = sqrt(-s)`;
/// * `s = 0`: `Sn = u`, `Cs = 1`, `p = 1`, `q = 0` (wall-compatible limit
///   solutions of `f'' = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxialProfile {
    pub s: f64,
    pub p: f64,
    pub q: f64,
}

impl AxialProfile {
    pub fn new(s: f64) -> Self {
        if s > 0.0 {
            let p = s.sqrt();
            Self { s, p, q: -p }
        } else if s < 0.0 {
            let p = (-s).sqrt();
            Self { s, p, q: p }
        } else {
            Self { s: 0.0, p: 1.0, q: 0.0 }
        }
    }

    pub fn sn(&self, u: f64) -> f64 {
        if self.s > 0.0 {
            (self.p * u).sin()
        } else if self.s < 0.0 {
            (self.p * u).sinh()
        } else {
            u
        }
    }

    pub fn cs(&self, u: f64) -> f64 {
        if self.s > 0.0 {
            (self.p * u).cos()
        } else if self.s < 0.0 {
            (self.p * u).cosh()
        } else {
            1.0
        }
    }

    /// Antiderivative of `Sn^2` vanishing at `u = 0`.
    fn sn_sq_antiderivative(&self, u: f64) -> f64 {
        if self.s == 0.0 {
            return u * u * u / 3.0;
        }
        let z = self.s * u * u;
        if z.abs() < SERIES_THRESHOLD {
            // int_0^u sin^2(p t) dt = u (z/3 - z^2/15 + 2 z^3/315 - z^4/2835),
            // z = s u^2; the sinh branch is the negated series value.
            let val =
                u * z * (1.0 / 3.0 + z * (-1.0 / 15.0 + z * (2.0 / 315.0 - z / 2835.0)));
            return if self.s < 0.0 { -val } else { val };
        }
        let sncs = self.sn(u) * self.cs(u) / self.p;
        if self.s > 0.0 {
            0.5 * (u - sncs)
        } else {
            0.5 * (sncs - u)
        }
    }

    /// Antiderivative of `Cs^2` vanishing at `u = 0`.
    fn cs_sq_antiderivative(&self, u: f64) -> f64 {
        if self.s == 0.0 {
            return u;
        }
        0.5 * (u + self.sn(u) * self.cs(u) / self.p)
    }

    pub fn int_sn_sq(&self, u_lo: f64, u_hi: f64) -> f64 {
        self.sn_sq_antiderivative(u_hi) - self.sn_sq_antiderivative(u_lo)
    }

    pub fn int_cs_sq(&self, u_lo: f64, u_hi: f64) -> f64 {
        self.cs_sq_antiderivative(u_hi) - self.cs_sq_antiderivative(u_lo)
    }
}

/// Relative s-gap below which cross-profile integrals switch to quadrature
/// (the two-profile closed form divides by `s_b - s_a`).
const CROSS_DEGENERACY_REL: f64 = 1e-2;

fn profiles_nearly_degenerate(a: &AxialProfile, b: &AxialProfile) -> bool {
    (a.s - b.s).abs() < CROSS_DEGENERACY_REL * (1.0 + a.s.abs().max(b.s.abs()))
}

/// `int Sn_a(u) Sn_b(u) du` over `[u_lo, u_hi]`.
///
/// Both profiles solve `F'' = -s F`, so for distinct `s` the integral is
/// the boundary term `(F' G - F G')/(s_b - s_a)`. Near-degenerate pairs
/// fall back to Gauss-Legendre quadrature to dodge the cancellation.
pub fn int_sn_sn(a: &AxialProfile, b: &AxialProfile, u_lo: f64, u_hi: f64) -> f64 {
    if a.s == b.s {
        return a.int_sn_sq(u_lo, u_hi);
    }
    if profiles_nearly_degenerate(a, b) {
        return crate::quad::integrate_gl64(u_lo, u_hi, |u| a.sn(u) * b.sn(u));
    }
    let term = |u: f64| a.p * a.cs(u) * b.sn(u) - b.p * a.sn(u) * b.cs(u);
    (term(u_hi) - term(u_lo)) / (b.s - a.s)
}

/// `int Cs_a(u) Cs_b(u) du` over `[u_lo, u_hi]`.
pub fn int_cs_cs(a: &AxialProfile, b: &AxialProfile, u_lo: f64, u_hi: f64) -> f64 {
    if a.s == b.s {
        return a.int_cs_sq(u_lo, u_hi);
    }
    if profiles_nearly_degenerate(a, b) {
        return crate::quad::integrate_gl64(u_lo, u_hi, |u| a.cs(u) * b.cs(u));
    }
    let term = |u: f64| a.q * a.sn(u) * b.cs(u) - b.q * a.cs(u) * b.sn(u);
    (term(u_hi) - term(u_lo)) / (b.s - a.s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kernel_zero_limit_is_d() {
        assert!((axial_kernel(0.0, 0.3).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn kernel_trig_value() {
        // tan(pi/4)/pi = 1/pi
        let v = axial_kernel(PI * PI, 0.25).unwrap();
        assert!((v - 1.0 / PI).abs() < 1e-14, "got {v}");
    }

    #[test]
    fn kernel_hyperbolic_value() {
        let v = axial_kernel(-1.0, 1.0).unwrap();
        assert!((v - 1.0_f64.tanh()).abs() < 1e-14, "got {v}");
    }

    #[test]
    fn kernel_continuous_across_zero() {
        // step across s = 0 at fixed d; increments must stay at the
        // smooth-derivative scale dK/ds ~ d^3/3
        let d = 0.7;
        let slope_bound = 2.0 * d * d * d / 3.0;
        let mut prev = axial_kernel(-1e-4, d).unwrap();
        let mut s = -1e-4;
        while s < 1e-4 {
            s += 1e-6;
            let v = axial_kernel(s, d).unwrap();
            assert!((v - prev).abs() < slope_bound * 1e-6, "jump at s={s}");
            prev = v;
        }
    }

    #[test]
    fn kernel_series_matches_direct_at_crossover() {
        // values straddling SERIES_THRESHOLD must agree
        let d = 0.9;
        for &z in &[9.9e-4_f64, 1.01e-3] {
            let s = z / (d * d);
            let direct = (s.sqrt() * d).tan() / s.sqrt();
            assert!((axial_kernel(s, d).unwrap() - direct).abs() < 1e-15 * d.abs());
            let s = -z / (d * d);
            let direct = ((-s).sqrt() * d).tanh() / (-s).sqrt();
            assert!((axial_kernel(s, d).unwrap() - direct).abs() < 1e-15 * d.abs());
        }
    }

    #[test]
    fn kernel_signals_pole() {
        // sqrt(s) d = pi/2 exactly
        let d = 0.37;
        let s = (PI / 2.0 / d) * (PI / 2.0 / d);
        assert!(matches!(axial_kernel(s, d), Err(Error::NearPole { .. })));
    }

    #[test]
    fn pole_enumeration() {
        let d = 0.5;
        let poles = kernel_poles_in_s(d, 0.0, 200.0);
        assert_eq!(poles.len(), 2); // (pi/1)^2 ~ 9.87, (3pi/1)^2 ~ 88.8, (5pi)^2 > 200
        assert!((poles[0] - PI * PI).abs() < 1e-9);
        assert!((poles[1] - 9.0 * PI * PI).abs() < 1e-9);
    }

    #[test]
    fn profile_integrals_match_quadrature() {
        for &s in &[7.3, -4.1, 1e-9, -1e-9, 0.0] {
            let pr = AxialProfile::new(s);
            let (lo, hi) = (-0.8, 0.3);
            let qs = crate::quad::integrate_gl64(lo, hi, |u| pr.sn(u) * pr.sn(u));
            let qc = crate::quad::integrate_gl64(lo, hi, |u| pr.cs(u) * pr.cs(u));
            assert!((pr.int_sn_sq(lo, hi) - qs).abs() < 1e-13, "s={s}");
            assert!((pr.int_cs_sq(lo, hi) - qc).abs() < 1e-13, "s={s}");
        }
    }

    #[test]
    fn cross_integrals_match_quadrature() {
        let pairs = [(9.4, 2.1), (9.4, -3.0), (-1.5, -6.0), (25.0, 24.9), (4.0, 0.0)];
        for &(sa, sb) in &pairs {
            let a = AxialProfile::new(sa);
            let b = AxialProfile::new(sb);
            let (lo, hi) = (0.0, 0.9);
            let qs = crate::quad::integrate_gl64(lo, hi, |u| a.sn(u) * b.sn(u));
            let qc = crate::quad::integrate_gl64(lo, hi, |u| a.cs(u) * b.cs(u));
            assert!((int_sn_sn(&a, &b, lo, hi) - qs).abs() < 1e-12, "sa={sa} sb={sb}");
            assert!((int_cs_cs(&a, &b, lo, hi) - qc).abs() < 1e-12, "sa={sa} sb={sb}");
        }
    }
}
