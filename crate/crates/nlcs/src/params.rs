//! Physical lab parameters and the dimensionless set that drives the simulation.

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_8e-34;
/// Speed of light, m/s.
pub const C_LIGHT: f64 = 2.997_924_58e8;

/// Lab quantities in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Cavity length L, m.
    pub cavity_length: f64,
    /// Membrane mass m, kg.
    pub membrane_mass: f64,
    /// Optical wavelength λ, m.
    pub optical_wavelength: f64,
    /// Mechanical angular frequency ω_m, rad/s.
    pub mechanical_freq: f64,
    /// Pump angular frequency ω_p, rad/s.
    pub pump_freq: f64,
    /// Membrane intensity reflectivity r_c, in [0, 1).
    pub reflectivity: f64,
}

/// The derived dimensionless parameters (plus |χ| for reference).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessParams {
    /// Lamb-Dicke parameter η.
    pub eta: f64,
    /// θ = 2Lω_m/c.
    pub theta: f64,
    /// |β| = |χ|/ω_m.
    pub beta_mag: f64,
    /// |χ| in rad/s.
    pub chi_mag: f64,
    /// r_c.
    pub reflectivity: f64,
}

impl PhysicalParams {
    /// Construct with ω_p defaulted to 2πc/λ.
    pub fn new(
        cavity_length: f64,
        membrane_mass: f64,
        optical_wavelength: f64,
        mechanical_freq: f64,
        reflectivity: f64,
    ) -> Result<Self> {
        let p = PhysicalParams {
            cavity_length,
            membrane_mass,
            optical_wavelength,
            mechanical_freq,
            pump_freq: 2.0 * std::f64::consts::PI * C_LIGHT / optical_wavelength,
            reflectivity,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let pos = [
            ("cavity_length", self.cavity_length),
            ("membrane_mass", self.membrane_mass),
            ("optical_wavelength", self.optical_wavelength),
            ("mechanical_freq", self.mechanical_freq),
            ("pump_freq", self.pump_freq),
        ];
        for (name, v) in pos {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be strictly positive, got {v}")));
            }
        }
        if !(0.0..1.0).contains(&self.reflectivity) {
            return Err(Error::Domain(format!(
                "reflectivity must lie in [0,1), got {}",
                self.reflectivity
            )));
        }
        Ok(())
    }
}

impl DimensionlessParams {
    pub fn new(eta: f64, theta: f64, beta_mag: f64, reflectivity: f64) -> Result<Self> {
        if !(eta > 0.0) || !(theta > 0.0) {
            return Err(Error::Domain(format!("eta and theta must be > 0, got {eta}, {theta}")));
        }
        if !(0.0..1.0).contains(&reflectivity) {
            return Err(Error::Domain(format!("reflectivity must lie in [0,1), got {reflectivity}")));
        }
        if beta_mag < 0.0 {
            return Err(Error::Domain(format!("beta magnitude must be >= 0, got {beta_mag}")));
        }
        Ok(DimensionlessParams { eta, theta, beta_mag, chi_mag: f64::NAN, reflectivity })
    }
}

/// η = (ω_p/(Lω_m))·√(ħ/2mω_m); θ = 2Lω_m/c; |χ| = (2πc/(Lλ))·√(ħ/2mω_m); |β| = |χ|/ω_m.
pub fn derive_dimensionless(p: &PhysicalParams) -> Result<DimensionlessParams> {
    p.validate()?;
    let zp = (HBAR / (2.0 * p.membrane_mass * p.mechanical_freq)).sqrt();
    let eta = p.pump_freq / (p.cavity_length * p.mechanical_freq) * zp;
    let theta = 2.0 * p.cavity_length * p.mechanical_freq / C_LIGHT;
    let chi_mag =
        2.0 * std::f64::consts::PI * C_LIGHT / (p.cavity_length * p.optical_wavelength) * zp;
    let beta_mag = chi_mag / p.mechanical_freq;
    Ok(DimensionlessParams { eta, theta, beta_mag, chi_mag, reflectivity: p.reflectivity })
}
