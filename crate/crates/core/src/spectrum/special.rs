//! Four special parameterizations of the three-term potential with closed
//! vibrational spectra. With `E0 = hbar^2 / (2 mu r_e^2)` and
//! `kappa(D) = r_e sqrt(2 mu D) / hbar = sqrt(D / E0)`:
//!
//! | case                    | energy                                     |
//! |-------------------------|--------------------------------------------|
//! | generalized vibrational | `-alpha^2 E0 (lambda q - n - 1/2)^2`       |
//! | non-PT                  | `-E0 (D^ kappa1 / 2 - n - 1/2)^2`          |
//! | PT type 1               | `E0 (D^ kappa2 / 2 - n - 1/2)^2`, `kappa2 = kappa1 / i` |
//! | PT type 2               | `E0 (sqrt(D)/omega kappa3 / 2 - n - 1/2)^2` |
//!
//! with `lambda^2 = D / (alpha^2 E0)`.

use num_complex::Complex;
use serde::Serialize;
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialCaseError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("unknown special case {0:?}; expected generalized_vibrational, non_pt, pt_type1 or pt_type2")]
    UnknownCase(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialCaseId {
    GeneralizedVibrational,
    NonPt,
    PtType1,
    PtType2,
}

impl SpecialCaseId {
    pub const ALL: [SpecialCaseId; 4] = [
        SpecialCaseId::GeneralizedVibrational,
        SpecialCaseId::NonPt,
        SpecialCaseId::PtType1,
        SpecialCaseId::PtType2,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SpecialCaseId::GeneralizedVibrational => "generalized_vibrational",
            SpecialCaseId::NonPt => "non_pt",
            SpecialCaseId::PtType1 => "pt_type1",
            SpecialCaseId::PtType2 => "pt_type2",
        }
    }
}

impl std::str::FromStr for SpecialCaseId {
    type Err = SpecialCaseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SpecialCaseId::ALL
            .into_iter()
            .find(|c| c.as_str() == s.replace('-', "_"))
            .ok_or_else(|| SpecialCaseError::UnknownCase(s.to_string()))
    }
}

/// Case parameters. `e0` is `hbar^2 / (2 mu r_e^2)` in eV; `d` is the
/// strength `D` in eV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum SpecialCase<T> {
    GeneralizedVibrational { e0: T, d: T, alpha: T, q: T },
    NonPt { e0: T, d: T, d_hat: T },
    PtType1 { e0: T, d: T, d_hat: T },
    /// `alpha` only enters the wavefunction.
    PtType2 { e0: T, d: T, omega: T, alpha: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpecialSpectrumResult<T> {
    pub case: SpecialCaseId,
    pub n: u32,
    pub energy_re: T,
    pub energy_im: T,
    /// `lambda q - n - 1/2` or its analogue; complex for PT type 1.
    pub exponent_re: T,
    pub exponent_im: T,
    pub real: bool,
    pub bound: bool,
}

impl<T: Real> SpecialSpectrumResult<T> {
    pub fn energy(&self) -> Complex<T> {
        Complex::new(self.energy_re, self.energy_im)
    }
}

fn check<T: Real>(name: &'static str, v: T) -> Result<(), SpecialCaseError> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(SpecialCaseError::NonPositive {
            name,
            value: v.to_f64_lossy(),
        })
    }
}

impl<T: Real> SpecialCase<T> {
    pub fn id(&self) -> SpecialCaseId {
        match self {
            SpecialCase::GeneralizedVibrational { .. } => SpecialCaseId::GeneralizedVibrational,
            SpecialCase::NonPt { .. } => SpecialCaseId::NonPt,
            SpecialCase::PtType1 { .. } => SpecialCaseId::PtType1,
            SpecialCase::PtType2 { .. } => SpecialCaseId::PtType2,
        }
    }

    pub fn validate(&self) -> Result<(), SpecialCaseError> {
        match *self {
            SpecialCase::GeneralizedVibrational { e0, d, alpha, q } => {
                check("E0", e0)?;
                check("D", d)?;
                check("alpha", alpha)?;
                if !q.is_finite() {
                    return Err(SpecialCaseError::NonPositive {
                        name: "q",
                        value: q.to_f64_lossy(),
                    });
                }
                Ok(())
            }
            SpecialCase::NonPt { e0, d, d_hat } | SpecialCase::PtType1 { e0, d, d_hat } => {
                check("E0", e0)?;
                check("D", d)?;
                check("D_hat", d_hat)
            }
            SpecialCase::PtType2 { e0, d, omega, alpha } => {
                check("E0", e0)?;
                check("D", d)?;
                check("omega", omega)?;
                check("alpha", alpha)
            }
        }
    }

    pub fn e0(&self) -> T {
        match *self {
            SpecialCase::GeneralizedVibrational { e0, .. }
            | SpecialCase::NonPt { e0, .. }
            | SpecialCase::PtType1 { e0, .. }
            | SpecialCase::PtType2 { e0, .. } => e0,
        }
    }

    /// `sqrt(D / E0)`, the dimensionless `kappa` shared by the complex cases.
    pub fn kappa(&self) -> T {
        match *self {
            SpecialCase::GeneralizedVibrational { e0, d, .. }
            | SpecialCase::NonPt { e0, d, .. }
            | SpecialCase::PtType1 { e0, d, .. }
            | SpecialCase::PtType2 { e0, d, .. } => (d / e0).sqrt(),
        }
    }

    /// `lambda = sqrt(D / (alpha^2 E0))` for the generalized vibrational case.
    pub fn lambda(&self) -> Option<T> {
        match *self {
            SpecialCase::GeneralizedVibrational { e0, d, alpha, .. } => Some((d / (alpha * alpha * e0)).sqrt()),
            _ => None,
        }
    }

    /// The complex `kappa` entering the energy: real except for PT type 1.
    pub fn kappa_complex(&self) -> Complex<T> {
        match self {
            SpecialCase::PtType1 { .. } => Complex::new(T::zero(), -self.kappa()),
            _ => Complex::new(self.kappa(), T::zero()),
        }
    }

    /// `lambda q - n - 1/2` and its analogues.
    pub fn exponent(&self, n: u32) -> Complex<T> {
        let half = T::lit(0.5);
        let shift = T::from_u32_lossless(n) + half;
        let lead = match *self {
            SpecialCase::GeneralizedVibrational { q, .. } => Complex::new(self.lambda().unwrap() * q, T::zero()),
            SpecialCase::NonPt { d_hat, .. } | SpecialCase::PtType1 { d_hat, .. } => {
                self.kappa_complex() * d_hat * half
            }
            SpecialCase::PtType2 { d, omega, .. } => self.kappa_complex() * (d.sqrt() / omega) * half,
        };
        lead - Complex::new(shift, T::zero())
    }

    /// Upper bound on `n` from the positivity of the exponent; `None` when
    /// the exponent is complex.
    pub fn n_max_bound(&self) -> Option<T> {
        let e = self.exponent(0);
        if e.im != T::zero() {
            return None;
        }
        Some(e.re)
    }

    pub fn spectrum(&self, n: u32) -> Result<SpecialSpectrumResult<T>, SpecialCaseError> {
        self.validate()?;
        let x = self.exponent(n);
        let e0 = self.e0();
        let energy = match *self {
            SpecialCase::GeneralizedVibrational { alpha, .. } => x * x * (-alpha * alpha * e0),
            SpecialCase::NonPt { .. } => x * x * (-e0),
            SpecialCase::PtType1 { .. } | SpecialCase::PtType2 { .. } => x * x * e0,
        };
        let real = energy.im == T::zero();
        Ok(SpecialSpectrumResult {
            case: self.id(),
            n,
            energy_re: energy.re,
            energy_im: energy.im,
            exponent_re: x.re,
            exponent_im: x.im,
            real,
            bound: x.im == T::zero() && x.re >= T::zero(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn final_bound_state_energy_is_zero() {
        // lambda = 4 exactly, q = 1/8 so lambda q = 1/2
        let c = SpecialCase::GeneralizedVibrational {
            e0: 0.25,
            d: 16.0,
            alpha: 2.0,
            q: 0.125,
        };
        assert_eq!(c.lambda(), Some(4.0));
        let r = c.spectrum(0).unwrap();
        assert_eq!(r.energy_re, 0.0);
        assert!(r.bound && r.real);
        assert!(!c.spectrum(1).unwrap().bound);
    }

    #[test]
    fn pt_type1_is_complex() {
        let c = SpecialCase::PtType1 {
            e0: 0.01,
            d: 2.0,
            d_hat: 0.7,
        };
        let r = c.spectrum(2).unwrap();
        assert!(!r.real && r.energy_im != 0.0);
        assert!(c.n_max_bound().is_none());
        // |kappa2| = kappa1
        assert_relative_eq!(c.kappa_complex().norm(), c.kappa(), max_relative = 1e-15);
    }

    #[test]
    fn pt_type2_is_real_and_non_negative() {
        let c = SpecialCase::PtType2 {
            e0: 0.02,
            d: 3.0,
            omega: 1.5,
            alpha: 1.0,
        };
        for n in 0..5 {
            let r = c.spectrum(n).unwrap();
            assert!(r.real && r.energy_re >= 0.0);
            let k3 = (3.0_f64 / 0.02).sqrt();
            let want = 0.02 * (0.5 * 3.0_f64.sqrt() / 1.5 * k3 - n as f64 - 0.5).powi(2);
            assert_relative_eq!(r.energy_re, want, max_relative = 1e-14);
        }
    }

    #[test]
    fn non_pt_spectrum_is_real_and_negative() {
        let c = SpecialCase::NonPt {
            e0: 0.01,
            d: 2.0,
            d_hat: 0.7,
        };
        let r = c.spectrum(1).unwrap();
        assert!(r.real && r.energy_re < 0.0);
    }

    #[test]
    fn ids_parse() {
        for id in SpecialCaseId::ALL {
            assert_eq!(id.as_str().parse::<SpecialCaseId>().unwrap(), id);
        }
        assert_eq!("pt-type2".parse::<SpecialCaseId>().unwrap(), SpecialCaseId::PtType2);
        assert!("pt3".parse::<SpecialCaseId>().is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        let c = SpecialCase::NonPt {
            e0: 0.01,
            d: -2.0,
            d_hat: 0.7,
        };
        assert!(c.spectrum(0).is_err());
    }
}
