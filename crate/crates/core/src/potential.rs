//! The generalized q-deformed Morse potential, the reciprocal Morse-like
//! mass function and the effective potential of the reduced radial equation.
//!
//! With `z = exp(-a (r - r_e))` the potential reads
//!
//! ```text
//! V(r) = D_e (q - z)^2 = V1 z^2 - V2 z + V3,   V1 = D_e, V2 = 2 q D_e, V3 = q^2 D_e
//! ```
//!
//! and the mass function is `m(r) = m0 / (1 - delta z)^2`.

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Real;
use crate::units::UnitSystem;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("deformation q = {0} outside the admitted range q > 0 or -1 <= q < 0")]
    DeformationOutOfRange(f64),
    #[error("mass deformation delta = {0} outside [0, 1)")]
    MassDeformationOutOfRange(f64),
    #[error("mass function has a pole at r = {r}: delta * exp(-a (r - r_e)) = {delta_z} >= 1")]
    MassPole { r: f64, delta_z: f64 },
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
}

/// Where the constant term `V3` of the three-term form sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EnergyOrigin {
    /// `V3 = q^2 D_e`, the squared-bracket form taken literally.
    #[default]
    Bracket,
    /// `V3 = 0`: energies measured from the separated-atom limit of the
    /// attractive and repulsive exponentials. The tabulated molecular spectra
    /// use this convention.
    SeparatedAtoms,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialParams<T> {
    de: T,
    a: T,
    re: T,
    q: T,
    origin: EnergyOrigin,
}

impl<T: Real> PotentialParams<T> {
    pub fn new(de: T, a: T, re: T, q: T) -> Result<Self, PotentialError> {
        positive("D_e", de)?;
        positive("a", a)?;
        positive("r_e", re)?;
        let one = T::one();
        let q_ok = q.is_finite() && (q > T::zero() || (q >= -one && q < T::zero()));
        if !q_ok {
            return Err(PotentialError::DeformationOutOfRange(q.to_f64_lossy()));
        }
        Ok(Self {
            de,
            a,
            re,
            q,
            origin: EnergyOrigin::Bracket,
        })
    }

    pub fn with_origin(mut self, origin: EnergyOrigin) -> Self {
        self.origin = origin;
        self
    }

    pub fn de(&self) -> T {
        self.de
    }
    pub fn a(&self) -> T {
        self.a
    }
    pub fn re(&self) -> T {
        self.re
    }
    pub fn q(&self) -> T {
        self.q
    }
    pub fn origin(&self) -> EnergyOrigin {
        self.origin
    }

    /// Dimensionless `a * r_e`.
    pub fn alpha(&self) -> T {
        self.a * self.re
    }

    pub fn v1(&self) -> T {
        self.de
    }

    pub fn v2(&self) -> T {
        T::lit(2.0) * self.q * self.de
    }

    pub fn v3(&self) -> T {
        match self.origin {
            EnergyOrigin::Bracket => self.q * self.q * self.de,
            EnergyOrigin::SeparatedAtoms => T::zero(),
        }
    }

    /// `exp(-a (r - r_e))`.
    #[inline]
    pub fn z(&self, r: T) -> T {
        (-self.a * (r - self.re)).exp()
    }

    /// Squared-bracket form, shifted by the energy origin.
    pub fn morse_potential(&self, r: T) -> T {
        let bracket = self.q - self.z(r);
        let shift = self.q * self.q * self.de - self.v3();
        self.de * bracket * bracket - shift
    }

    /// Three-term exponential form `V1 z^2 - V2 z + V3`.
    pub fn morse_three_term(&self, r: T) -> T {
        let z = self.z(r);
        self.v1() * z * z - self.v2() * z + self.v3()
    }

    /// Large-r limit of the potential.
    pub fn asymptote(&self) -> T {
        self.v3()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassModel<T> {
    m0: T,
    delta: T,
}

/// Mass and its first two radial derivatives, in amu, amu/Å and amu/Å².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassDerivatives<T> {
    pub value: T,
    pub first: T,
    pub second: T,
}

impl<T: Real> MassModel<T> {
    pub fn new(m0: T, delta: T) -> Result<Self, PotentialError> {
        positive("m0", m0)?;
        if !(delta >= T::zero() && delta < T::one()) {
            return Err(PotentialError::MassDeformationOutOfRange(delta.to_f64_lossy()));
        }
        Ok(Self { m0, delta })
    }

    pub fn constant(m0: T) -> Result<Self, PotentialError> {
        Self::new(m0, T::zero())
    }

    pub fn m0(&self) -> T {
        self.m0
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    /// Radius where `delta * z = 1`, if the pole lies at `r > 0`.
    pub fn pole(&self, p: &PotentialParams<T>) -> Option<T> {
        if self.delta <= T::zero() {
            return None;
        }
        let r = p.re() + self.delta.ln() / p.a();
        (r > T::zero()).then_some(r)
    }

    /// `m`, `m'`, `m''` at `r`. Errors when `r` is at or inside the pole.
    pub fn mass(&self, p: &PotentialParams<T>, r: T) -> Result<MassDerivatives<T>, PotentialError> {
        if self.delta == T::zero() {
            return Ok(MassDerivatives {
                value: self.m0,
                first: T::zero(),
                second: T::zero(),
            });
        }
        let z = p.z(r);
        let dz = self.delta * z;
        if dz >= T::one() {
            return Err(PotentialError::MassPole {
                r: r.to_f64_lossy(),
                delta_z: dz.to_f64_lossy(),
            });
        }
        let a = p.a();
        let w = T::one() - dz;
        let two = T::lit(2.0);
        let value = self.m0 / (w * w);
        let first = -two * self.m0 * dz * a / (w * w * w);
        let second = two * self.m0 * dz * a * a / (w * w * w) + T::lit(6.0) * self.m0 * dz * dz * a * a / (w * w * w * w);
        Ok(MassDerivatives { value, first, second })
    }
}

/// Exact effective potential of `-u'' + V_eff u = (2 m / hbar^2) E u`, in Å⁻².
///
/// ```text
/// V_eff = -m''/2m + 3/4 (m'/m)^2 - (m'/m)/r + l(l+1)/r^2 + 2 m V / hbar^2
/// ```
pub fn effective_potential<T: Real>(
    p: &PotentialParams<T>,
    m: &MassModel<T>,
    units: &UnitSystem<T>,
    l: u32,
    r: T,
) -> Result<T, PotentialError> {
    if r.is_nan() || r <= T::zero() {
        return Err(PotentialError::NonPositiveRadius(r.to_f64_lossy()));
    }
    let md = m.mass(p, r)?;
    let ratio = md.first / md.value;
    let ll = T::from_u32_lossless(l) * T::from_u32_lossless(l + 1);
    let h_local = units
        .hbar2_over_2mu(md.value)
        .expect("mass is positive away from the pole");
    Ok(-md.second / (T::lit(2.0) * md.value) + T::lit(0.75) * ratio * ratio - ratio / r + ll / (r * r)
        + p.morse_potential(r) / h_local)
}

fn positive<T: Real>(name: &'static str, value: T) -> Result<(), PotentialError> {
    if value > T::zero() && value.is_finite() {
        Ok(())
    } else {
        Err(PotentialError::NonPositive {
            name,
            value: value.to_f64_lossy(),
        })
    }
}
