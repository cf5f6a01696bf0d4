//! Second-order exponential expansions of the centrifugal term and of `1/r`
//! about the equilibrium separation.
//!
//! With `x = (r - r_e)/r_e`, `alpha = a r_e` and `z = exp(-alpha x)`:
//!
//! ```text
//! l(l+1)/r^2 ~ gamma (a0 + a1 z + a2 z^2),    gamma = l(l+1)/r_e^2
//! 1/r        ~ (b0 + b1 z + b2 z^2) / r_e
//! ```
//!
//! The coefficients match value, slope and curvature at `x = 0`.

use serde::Serialize;
use thiserror::Error;

use crate::potential::PotentialParams;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PekerisError {
    #[error("alpha = a r_e must be positive and finite, got {0}")]
    NonPositiveAlpha(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PekerisCoefficients<T> {
    pub a0: T,
    pub a1: T,
    pub a2: T,
    pub b0: T,
    pub b1: T,
    pub b2: T,
    pub alpha: T,
}

pub fn pekeris_coefficients<T: Real>(alpha: T) -> Result<PekerisCoefficients<T>, PekerisError> {
    if !(alpha > T::zero() && alpha.is_finite()) {
        return Err(PekerisError::NonPositiveAlpha(alpha.to_f64_lossy()));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let half = T::lit(0.5);
    let inv = one / alpha;
    Ok(PekerisCoefficients {
        a0: one - three * inv * (one - inv),
        a1: two * inv * (two - three * inv),
        a2: -inv * (one - three * inv),
        b0: one - inv * (T::lit(1.5) - inv),
        b1: two * inv * (one - inv),
        b2: -inv * (half - inv),
        alpha,
    })
}

impl<T: Real> PekerisCoefficients<T> {
    /// `a0 + a1 z + a2 z^2`.
    pub fn centrifugal_factor(&self, z: T) -> T {
        self.a0 + z * (self.a1 + z * self.a2)
    }

    /// `b0 + b1 z + b2 z^2`.
    pub fn inverse_r_factor(&self, z: T) -> T {
        self.b0 + z * (self.b1 + z * self.b2)
    }

    /// The bracket `1 - 3/(a r_e) + 3/(a r_e)^2` written out as it appears in
    /// the constant-mass rotational shift. Algebraically identical to `a0`.
    pub fn rotational_shift_polynomial(&self) -> T {
        let inv = T::one() / self.alpha;
        T::one() - T::lit(3.0) * inv + T::lit(3.0) * inv * inv
    }
}

/// `l(l+1)/r_e^2` in Å⁻².
pub fn gamma<T: Real>(p: &PotentialParams<T>, l: u32) -> T {
    let ll = T::from_u32_lossless(l) * T::from_u32_lossless(l + 1);
    ll / (p.re() * p.re())
}

/// Composite parameters multiplying `delta` in the reduced equation.
///
/// These mix Å² and dimensionless terms exactly as the closed forms require;
/// numerically they are evaluated in Å-based units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompositeSpq<T> {
    pub s: T,
    pub p: T,
    pub q: T,
}

pub fn composite_spq<T: Real>(p: &PotentialParams<T>, l: u32) -> CompositeSpq<T> {
    let c = pekeris_coefficients(p.alpha()).expect("alpha positive by construction");
    let g = gamma(p, l);
    let a = p.a();
    let two = T::lit(2.0);
    let re2 = p.re() * p.re();
    CompositeSpq {
        s: re2 - two * c.b0 / a + two * g * c.a0 / (a * a),
        p: two * c.b1 / a - two * g * c.a1 / (a * a),
        q: re2 - two * c.b0 / a + g * c.a0 / (a * a),
    }
}

/// Pekeris approximation of `l(l+1)/r^2`, in Å⁻².
pub fn pekeris_centrifugal<T: Real>(p: &PotentialParams<T>, l: u32, r: T) -> T {
    let c = pekeris_coefficients(p.alpha()).expect("alpha positive by construction");
    gamma(p, l) * c.centrifugal_factor(p.z(r))
}

/// Pekeris approximation of `1/r`, in Å⁻¹.
pub fn pekeris_inverse_r<T: Real>(p: &PotentialParams<T>, r: T) -> T {
    let c = pekeris_coefficients(p.alpha()).expect("alpha positive by construction");
    c.inverse_r_factor(p.z(r)) / p.re()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn h2() -> PotentialParams<f64> {
        PotentialParams::new(38266.0 * 1.23985e-4, 1.9426, 0.7416, 1.0).unwrap()
    }

    #[test]
    fn alpha_three_substitution() {
        let c = pekeris_coefficients(3.0_f64).unwrap();
        assert_relative_eq!(c.a0, 1.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(c.a1, 2.0 / 3.0, max_relative = 1e-15);
        assert!(c.a2.abs() < 1e-16);
    }

    #[test]
    fn large_alpha_limit() {
        let c = pekeris_coefficients(1e9_f64).unwrap();
        assert!((c.a0 - 1.0).abs() < 1e-8 && c.a1.abs() < 1e-8 && c.a2.abs() < 1e-8);
        assert!((c.b0 - 1.0).abs() < 1e-8 && c.b1.abs() < 1e-8 && c.b2.abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_alpha() {
        assert!(pekeris_coefficients(0.0_f64).is_err());
        assert!(pekeris_coefficients(-2.0_f64).is_err());
        assert!(pekeris_coefficients(f64::INFINITY).is_err());
    }

    #[test]
    fn exact_at_equilibrium() {
        let p = h2();
        assert_relative_eq!(pekeris_centrifugal(&p, 7, p.re()), 56.0 / (p.re() * p.re()), max_relative = 1e-14);
        assert_relative_eq!(pekeris_inverse_r(&p, p.re()), 1.0 / p.re(), max_relative = 1e-14);
    }

    #[test]
    fn close_to_exact_near_equilibrium() {
        let p = h2();
        for i in -50..=50 {
            let r = p.re() * (1.0 + 0.05 * i as f64 / 50.0 * 0.999);
            let exact = 30.0 / (r * r);
            assert!(((pekeris_centrifugal(&p, 5, r) - exact) / exact).abs() < 1e-3);
        }
    }

    #[test]
    fn spq_identities() {
        let p = h2();
        let s0 = composite_spq(&p, 0);
        assert_eq!(s0.s, s0.q);
        let c = pekeris_coefficients(p.alpha()).unwrap();
        assert_relative_eq!(s0.p, 2.0 * c.b1 / p.a(), max_relative = 1e-15);
        let s7 = composite_spq(&p, 7);
        let g = gamma(&p, 7);
        assert_relative_eq!(s7.s - s7.q, g * c.a0 / (p.a() * p.a()), max_relative = 1e-12);
    }

    #[test]
    fn works_in_single_precision() {
        let c = pekeris_coefficients(2.5_f32).unwrap();
        assert!((c.a0 + c.a1 + c.a2 - 1.0).abs() < 1e-6);
        assert!((c.b1 + 2.0 * c.b2 - 1.0 / 2.5).abs() < 1e-6);
    }
}
