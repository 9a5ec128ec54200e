//! Cavity geometry, permittivities, and mode labels.
//!
//! The cavity is a rectangular box `[0, L] x [0, L_y] x [0, L_z]` with
//! perfectly conducting walls. A dielectric slab of thickness `a` sits
//! against the `x = 0` wall: the slab (region I) occupies `0 <= x <= a`,
//! the bulk (region II) occupies `a <= x <= L`. Natural units throughout
//! (`c = eps0 = mu0 = hbar = 1`).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rectangular cavity dimensions and slab thickness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityGeometry {
    /// Length along x (the slab normal).
    pub l: f64,
    /// Length along y.
    pub l_y: f64,
    /// Length along z.
    pub l_z: f64,
    /// Slab thickness, `0 < a < l`.
    pub a: f64,
}

impl CavityGeometry {
    pub fn new(l: f64, l_y: f64, l_z: f64, a: f64) -> Result<Self> {
        let geom = Self { l, l_y, l_z, a };
        geom.validate()?;
        Ok(geom)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.l.is_finite()
            && self.l_y.is_finite()
            && self.l_z.is_finite()
            && self.a.is_finite()
            && self.l > 0.0
            && self.l_y > 0.0
            && self.l_z > 0.0
            && self.a > 0.0
            && self.a < self.l;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidGeometry(format!(
                "need 0 < a < l and positive transverse lengths, got l={}, l_y={}, l_z={}, a={}",
                self.l, self.l_y, self.l_z, self.a
            )))
        }
    }

    /// Same box with a different slab thickness.
    pub fn with_slab(&self, a: f64) -> Result<Self> {
        Self::new(self.l, self.l_y, self.l_z, a)
    }

    pub fn a_over_l(&self) -> f64 {
        self.a / self.l
    }
}

/// Static relative permittivities of the two regions. Both real and
/// positive: the medium is lossless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermittivityPair {
    /// Relative permittivity of the slab (region I).
    pub eps_slab: f64,
    /// Relative permittivity of the bulk (region II).
    pub eps_bulk: f64,
}

impl PermittivityPair {
    pub fn new(eps_slab: f64, eps_bulk: f64) -> Result<Self> {
        let pair = Self { eps_slab, eps_bulk };
        pair.validate()?;
        Ok(pair)
    }

    pub fn validate(&self) -> Result<()> {
        if self.eps_slab.is_finite()
            && self.eps_bulk.is_finite()
            && self.eps_slab > 0.0
            && self.eps_bulk > 0.0
        {
            Ok(())
        } else {
            Err(Error::InvalidPermittivity(format!(
                "permittivities must be positive and finite, got eps_slab={}, eps_bulk={}",
                self.eps_slab, self.eps_bulk
            )))
        }
    }

    pub fn homogeneous(eps: f64) -> Result<Self> {
        Self::new(eps, eps)
    }

    /// Drive ratio eps_bulk / eps_slab.
    pub fn ratio(&self) -> f64 {
        self.eps_bulk / self.eps_slab
    }

    pub fn is_homogeneous(&self) -> bool {
        self.eps_slab == self.eps_bulk
    }
}

/// Polarization with respect to the slab interface: TE has no
/// perpendicular electric field there, TM no perpendicular magnetic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    #[serde(rename = "TE")]
    Te,
    #[serde(rename = "TM")]
    Tm,
}

impl Polarization {
    pub fn label(&self) -> &'static str {
        match self {
            Polarization::Te => "TE",
            Polarization::Tm => "TM",
        }
    }
}

impl std::fmt::Display for Polarization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Integer label of one eigenmode: axial index, two transverse indices,
/// and the polarization tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeIndex {
    pub n_x: u32,
    pub n_y: u32,
    pub n_z: u32,
    pub pol: Polarization,
}

impl ModeIndex {
    pub fn new(n_x: u32, n_y: u32, n_z: u32, pol: Polarization) -> Self {
        Self { n_x, n_y, n_z, pol }
    }

    pub fn te(n_x: u32, n_y: u32, n_z: u32) -> Self {
        Self::new(n_x, n_y, n_z, Polarization::Te)
    }

    pub fn tm(n_x: u32, n_y: u32, n_z: u32) -> Self {
        Self::new(n_x, n_y, n_z, Polarization::Tm)
    }

    fn invalid(&self, reason: impl Into<String>) -> Error {
        Error::InvalidMode {
            n_x: self.n_x,
            n_y: self.n_y,
            n_z: self.n_z,
            pol: self.pol.label(),
            reason: reason.into(),
        }
    }

    /// Base label validity: at least two indices nonzero, and the pair
    /// (n_y, n_z) not both zero (k_par = 0 leaves the TE/TM split at the
    /// interface degenerate).
    pub fn validate(&self) -> Result<()> {
        let nonzero =
            (self.n_x > 0) as u32 + (self.n_y > 0) as u32 + (self.n_z > 0) as u32;
        if nonzero < 2 {
            return Err(self.invalid("fewer than two nonzero indices; the mode vanishes"));
        }
        if self.n_y == 0 && self.n_z == 0 {
            return Err(self.invalid("n_y = n_z = 0: TE/TM split at the interface degenerate"));
        }
        Ok(())
    }

    /// Validity for the dispersion solver. TE branches start at n_x = 1;
    /// the TM branch count starts at n_x = 0.
    pub fn validate_for_dispersion(&self) -> Result<()> {
        self.validate()?;
        if self.pol == Polarization::Te && self.n_x == 0 {
            return Err(self.invalid("TE has no n_x = 0 branch"));
        }
        Ok(())
    }

    /// Validity for vector mode-function construction. A TM mode needs
    /// both transverse indices nonzero: with k_y = 0 or k_z = 0 the
    /// interface conditions only admit the identically-zero field.
    pub fn validate_for_mode_function(&self) -> Result<()> {
        self.validate_for_dispersion()?;
        if self.pol == Polarization::Tm && (self.n_y == 0 || self.n_z == 0) {
            return Err(self.invalid(
                "TM with a zero transverse index has no nonvanishing mode function",
            ));
        }
        Ok(())
    }

    pub fn k_y(&self, geom: &CavityGeometry) -> f64 {
        self.n_y as f64 * PI / geom.l_y
    }

    pub fn k_z(&self, geom: &CavityGeometry) -> f64 {
        self.n_z as f64 * PI / geom.l_z
    }

    /// k_par^2 = k_y^2 + k_z^2.
    pub fn k_par_sq(&self, geom: &CavityGeometry) -> f64 {
        let ky = self.k_y(geom);
        let kz = self.k_z(geom);
        ky * ky + kz * kz
    }

    /// Reference axial wavenumber n_x pi / L.
    pub fn k_perp(&self, geom: &CavityGeometry) -> f64 {
        self.n_x as f64 * PI / geom.l
    }
}

impl std::fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}({},{},{})", self.pol, self.n_x, self.n_y, self.n_z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_rejects_slab_outside_cavity() {
        assert!(CavityGeometry::new(1.0, 1.0, 1.0, 0.01).is_ok());
        assert!(CavityGeometry::new(1.0, 1.0, 1.0, 1.0).is_err());
        assert!(CavityGeometry::new(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(CavityGeometry::new(1.0, -1.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn mode_validity_rules() {
        assert!(ModeIndex::te(1, 1, 0).validate_for_dispersion().is_ok());
        assert!(ModeIndex::tm(1, 1, 0).validate_for_dispersion().is_ok());
        assert!(ModeIndex::tm(0, 1, 1).validate_for_dispersion().is_ok());
        // fewer than two nonzero indices
        assert!(ModeIndex::te(1, 0, 0).validate().is_err());
        assert!(ModeIndex::tm(0, 1, 0).validate().is_err());
        // k_par = 0
        assert!(ModeIndex::te(2, 0, 0).validate().is_err());
        // TE has no n_x = 0 branch
        assert!(ModeIndex::te(0, 1, 1).validate_for_dispersion().is_err());
        // TM needs both transverse indices for a nonvanishing field
        assert!(ModeIndex::tm(1, 1, 0).validate_for_mode_function().is_err());
        assert!(ModeIndex::tm(1, 1, 1).validate_for_mode_function().is_ok());
    }

    #[test]
    fn wavenumbers() {
        let geom = CavityGeometry::new(1.0, 2.0, 0.5, 0.01).unwrap();
        let m = ModeIndex::tm(3, 2, 1);
        assert!((m.k_y(&geom) - PI).abs() < 1e-15);
        assert!((m.k_z(&geom) - 2.0 * PI).abs() < 1e-15);
        assert!((m.k_par_sq(&geom) - 5.0 * PI * PI).abs() < 1e-12);
        assert!((m.k_perp(&geom) - 3.0 * PI).abs() < 1e-15);
    }
}
