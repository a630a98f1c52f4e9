//! Physical constants and unit conversions (CODATA 2018).

use serde::{Deserialize, Serialize};

/// Elementary charge (C).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Vacuum permittivity (F/m).
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Speed of light (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// e / (4 pi eps0) expressed in V nm. Multiplying a reduced potential
/// (nm^-1 per elementary charge) by this gives volts; for energies of
/// elementary charges it is e^2/(4 pi eps0) in eV nm.
pub const COULOMB_EV_NM: f64 =
    ELEMENTARY_CHARGE / (4.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY) * 1e9;

/// One debye in e nm.
pub const DEBYE_E_NM: f64 = 1e-21 / SPEED_OF_LIGHT / (ELEMENTARY_CHARGE * 1e-9);

/// Units accepted for the squared dipole fluctuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DipoleSquaredUnit {
    /// (e nm)^2
    ENm2,
    /// D^2
    Debye2,
    /// C^2 m^2
    Si,
}

impl DipoleSquaredUnit {
    /// Conversion factor to (e nm)^2.
    pub fn to_enm2(self) -> f64 {
        match self {
            Self::ENm2 => 1.0,
            Self::Debye2 => DEBYE_E_NM * DEBYE_E_NM,
            Self::Si => {
                let enm = ELEMENTARY_CHARGE * 1e-9;
                1.0 / (enm * enm)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coulomb_constant() {
        assert!((COULOMB_EV_NM - 1.439_964_547_8).abs() < 1e-9);
    }

    #[test]
    fn debye_in_e_nm() {
        assert!((DEBYE_E_NM - 0.020_819_434).abs() < 1e-8);
        let si = DipoleSquaredUnit::Si.to_enm2() * (ELEMENTARY_CHARGE * 1e-9).powi(2);
        assert!((si - 1.0).abs() < 1e-12);
    }
}
