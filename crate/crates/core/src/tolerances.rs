//! Numeric contract tolerances shared by the library and its validation
//! suites. One place, no ad-hoc magic numbers in assertions.

/// Eigenvalue identities `s + k_par^2 = eps Omega^2`, relative. The
/// solution stores s built from the bisected root, so violations measure
/// only arithmetic noise.
pub const EIGENVALUE_IDENTITY_REL: f64 = 1e-12;

/// Homogeneous-limit spectrum against the closed form, relative.
pub const HOMOGENEOUS_SPECTRUM_REL: f64 = 1e-10;

/// Algebraic transversality of polarization triples, relative.
pub const TRANSVERSALITY_REL: f64 = 1e-12;

/// Interface continuity residuals of built mode functions, absolute on
/// unit-normalized fields.
pub const CONTINUITY_ABS: f64 = 1e-10;

/// Unit L2 norm of a mode function, absolute.
pub const MODE_NORM_ABS: f64 = 1e-10;

/// Entrywise deviation of a Gram matrix from identity, absolute.
pub const GRAM_IDENTITY_ABS: f64 = 1e-8;

/// Agreement between closed-form overlaps and the 64^3 grid quadrature.
pub const OVERLAP_QUADRATURE_ABS: f64 = 1e-6;

/// Velocity-coupling antisymmetry |M_ab + M_ba|, absolute.
pub const COUPLING_ANTISYMMETRY_ABS: f64 = 1e-6;

/// Velocity-coupling diagonal |M_aa|, absolute.
pub const COUPLING_DIAGONAL_ABS: f64 = 1e-8;

/// Wronskian conservation and Bogoliubov normalization
/// |alpha|^2 - |beta|^2 = 1, absolute.
pub const WRONSKIAN_ABS: f64 = 1e-9;

/// Relative change of the final photon number under step halving.
pub const STEP_DOUBLING_REL: f64 = 1e-3;

/// Relative band for the photon number against sinh^2(r t) inside the
/// comparison window.
pub const RWA_PHOTON_REL: f64 = 0.05;

/// Photon-number window for the rotating-wave comparison; below the
/// lower edge the counter-rotating micro-oscillation dominates.
pub const RWA_WINDOW: (f64, f64) = (0.1, 10.0);

/// Relative band for the fitted asymptotic growth slope against 2r.
pub const GROWTH_SLOPE_REL: f64 = 0.05;

/// Fitted-exponent bands for the first-order error orders.
pub const TE_ORDER_BAND: (f64, f64) = (3.0, 0.3);
pub const TM_ORDER_BAND: (f64, f64) = (2.0, 0.2);

/// Relative band for the first-order TM eigenvalue-shift formula against
/// the exact solver at a/L = 1e-3.
pub const EIGENVALUE_SHIFT_REL: f64 = 0.10;

/// Velocity-coupling a/L proportionality, relative.
pub const COUPLING_SCALING_REL: f64 = 0.20;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::assertions_on_constants)] // ordering sanity check
    fn tolerance_ordering() {
        assert!(EIGENVALUE_IDENTITY_REL < HOMOGENEOUS_SPECTRUM_REL);
        assert!(CONTINUITY_ABS < GRAM_IDENTITY_ABS);
        assert!(GRAM_IDENTITY_ABS < OVERLAP_QUADRATURE_ABS);
        assert!(COUPLING_DIAGONAL_ABS < COUPLING_ANTISYMMETRY_ABS);
        assert!(WRONSKIAN_ABS < STEP_DOUBLING_REL);
    }
}
