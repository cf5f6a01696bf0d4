//! Unit conversions. Energies are in eV, lengths in Å, masses in amu.
//!
//! The three conversion factors are rounded values, not CODATA. The reference
//! energies are only reproduced digit-for-digit with these.

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Real;

/// eV/c² per atomic mass unit.
pub const AMU_TO_EV_PER_C2: f64 = 931.502e6;
/// eV per cm⁻¹.
pub const WAVENUMBER_TO_EV: f64 = 1.23985e-4;
/// ħc in eV·Å.
pub const HBAR_C: f64 = 1973.29;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitError {
    #[error("{quantity} must be positive and finite, got {value}")]
    NonPositive { quantity: &'static str, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitSystem<T> {
    pub amu_to_ev_per_c2: T,
    pub wavenumber_to_ev: T,
    pub hbar_c: T,
}

impl<T: Real> Default for UnitSystem<T> {
    fn default() -> Self {
        Self::standard()
    }
}

impl<T: Real> UnitSystem<T> {
    pub fn standard() -> Self {
        Self {
            amu_to_ev_per_c2: T::lit(AMU_TO_EV_PER_C2),
            wavenumber_to_ev: T::lit(WAVENUMBER_TO_EV),
            hbar_c: T::lit(HBAR_C),
        }
    }

    /// Well depth in eV from a wavenumber in cm⁻¹.
    pub fn dissociation_energy_ev(&self, d0_wavenumber: T) -> Result<T, UnitError> {
        positive("D0", d0_wavenumber)?;
        Ok(d0_wavenumber * self.wavenumber_to_ev)
    }

    /// ħ²/(2μ) in eV·Å² for a reduced mass in amu.
    pub fn hbar2_over_2mu(&self, mu_amu: T) -> Result<T, UnitError> {
        positive("mu", mu_amu)?;
        let two = T::lit(2.0);
        Ok(self.hbar_c * self.hbar_c / (two * mu_amu * self.amu_to_ev_per_c2))
    }
}

/// Well depth in eV from cm⁻¹ using the standard factors.
pub fn dissociation_energy_ev<T: Real>(d0_wavenumber: T) -> Result<T, UnitError> {
    UnitSystem::standard().dissociation_energy_ev(d0_wavenumber)
}

/// ħ²/(2μ) in eV·Å² using the standard factors.
pub fn hbar2_over_2mu<T: Real>(mu_amu: T) -> Result<T, UnitError> {
    UnitSystem::standard().hbar2_over_2mu(mu_amu)
}

fn positive<T: Real>(quantity: &'static str, value: T) -> Result<(), UnitError> {
    if value > T::zero() && value.is_finite() {
        Ok(())
    } else {
        Err(UnitError::NonPositive {
            quantity,
            value: value.to_f64_lossy(),
        })
    }
}
