//! Radial wavefunctions.
//!
//! Position-dependent mass, in `z = exp(-a (r - r_e))`:
//!
//! ```text
//! u(z) = N z^eps (1 - delta z)^((1 + xi)/2) P_n^(2 eps, xi)(1 - 2 delta z)
//! ```
//!
//! Constant mass:
//!
//! ```text
//! u(z) = N z^eps exp(-sqrt(beta1) z) L_n^(2 eps)(2 sqrt(beta1) z)
//! ```
//!
//! Amplitudes are evaluated in the log domain. The normalization constant
//! is fixed by adaptive quadrature of `u^2` over the physical range of `r`.

use num_complex::Complex;
use serde::Serialize;
use thiserror::Error;

use crate::quadrature::{integrate, integrate_semi_infinite, QuadError, Tolerance};
use crate::scalar::Real;
use crate::special::{hyp2f1, hyp3f2, jacobi, jacobi_derivative, jacobi_second_derivative, laguerre, laguerre_derivative, laguerre_second_derivative, ln_gamma, ln_pochhammer, SeriesError};
use crate::spectrum::special::SpecialCase;
use crate::spectrum::{energy_constant_mass, energy_pdm, BetaParameters, Diatomic, QuantumState, SpectrumError, DELTA_CROSSOVER};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WavefunctionError {
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("state n = {n}, l = {l} is not normalizable (eps = {eps})")]
    NotNormalizable { n: u32, l: u32, eps: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveVariant {
    Pdm,
    ConstantMass,
}

/// Outcome of the closed-form normalization series, kept as a cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesNormalization<T> {
    /// `N` from the series, when an estimate exists.
    pub norm: Option<T>,
    /// `N_series / N_quadrature`.
    pub ratio: Option<T>,
    pub terms: usize,
    pub converged: bool,
    /// Terms stopped shrinking in magnitude.
    pub divergent: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialWavefunction<T> {
    pub state: QuantumState,
    pub variant: WaveVariant,
    pub eps: T,
    /// `xi` for the position-dependent mass, absent otherwise.
    pub xi: Option<T>,
    /// `sqrt(beta1)` for the constant mass.
    pub sqrt_beta1: T,
    pub beta: BetaParameters<T>,
    a: T,
    re: T,
    delta: T,
    /// `ln N` with `N` fixed by quadrature.
    ln_norm: T,
}

impl<T: Real> RadialWavefunction<T> {
    /// Normalized state of `sys`; the variant follows `delta`.
    pub fn new(sys: &Diatomic<T>, state: QuantumState) -> Result<Self, WavefunctionError> {
        let res = if sys.delta() < T::lit(DELTA_CROSSOVER) {
            energy_constant_mass(sys, state)?
        } else {
            energy_pdm(sys, state)?
        };
        if !res.bound {
            return Err(WavefunctionError::NotNormalizable {
                n: state.n,
                l: state.l,
                eps: res.eps.to_f64_lossy(),
            });
        }
        let beta = sys.beta(state.l);
        let variant = if res.xi.is_some() {
            WaveVariant::Pdm
        } else {
            WaveVariant::ConstantMass
        };
        let p = sys.potential();
        let mut wf = Self {
            state,
            variant,
            eps: res.eps,
            xi: res.xi,
            sqrt_beta1: beta.beta1.sqrt(),
            beta,
            a: p.a(),
            re: p.re(),
            delta: sys.delta(),
            ln_norm: T::zero(),
        };
        wf.ln_norm = wf.quadrature_ln_norm()?;
        Ok(wf)
    }

    /// Lower end of the physical range: `r = 0` or the mass pole.
    pub fn r_lower(&self) -> T {
        match self.variant {
            WaveVariant::ConstantMass => T::zero(),
            WaveVariant::Pdm => (self.re + self.delta.ln() / self.a).max(T::zero()),
        }
    }

    fn ln_z(&self, r: T) -> T {
        -self.a * (r - self.re)
    }

    /// `(ln |u|, sign)` without the normalization constant.
    fn ln_abs_unnormalized(&self, r: T) -> (T, T) {
        let ln_z = self.ln_z(r);
        let z = ln_z.exp();
        let n = self.state.n;
        let two = T::lit(2.0);
        let (envelope, poly) = match self.variant {
            WaveVariant::Pdm => {
                let xi = self.xi.unwrap();
                let dz = self.delta * z;
                let nu = T::lit(0.5) * (T::one() + xi);
                (self.eps * ln_z + nu * (-dz).ln_1p(), jacobi(n, two * self.eps, xi, T::one() - two * dz))
            }
            WaveVariant::ConstantMass => {
                let s = self.sqrt_beta1;
                (self.eps * ln_z - s * z, laguerre(n, two * self.eps, two * s * z))
            }
        };
        (envelope + poly.abs().ln(), poly.signum())
    }

    /// Unnormalized amplitude scaled by `exp(-shift)`.
    fn scaled(&self, r: T, shift: T) -> T {
        let (l, s) = self.ln_abs_unnormalized(r);
        s * (l - shift).exp()
    }

    fn quadrature_ln_norm(&self) -> Result<T, WavefunctionError> {
        let lo = self.r_lower();
        let span = T::lit(40.0) / self.a;
        let shift = (0..=400)
            .map(|i| {
                let r = lo + span * T::from_u32_lossless(i) / T::lit(400.0) + self.re * T::lit(1e-9);
                self.ln_abs_unnormalized(r).0
            })
            .fold(T::neg_infinity(), |m, v| if v.is_finite() { m.max(v) } else { m });
        let integral = integrate_semi_infinite(
            |r| {
                if r <= lo {
                    return T::zero();
                }
                let v = self.scaled(r, shift);
                if v.is_finite() {
                    v * v
                } else {
                    T::zero()
                }
            },
            lo,
            self.re.max(T::one() / self.a),
            Tolerance::default(),
        )?;
        Ok(-shift - T::lit(0.5) * integral.value.ln())
    }

    /// Normalization constant `N` (may underflow for very large `eps`; see [`Self::ln_norm`]).
    pub fn norm(&self) -> T {
        self.ln_norm.exp()
    }

    pub fn ln_norm(&self) -> T {
        self.ln_norm
    }

    /// Normalized `u(r)`.
    pub fn u(&self, r: T) -> T {
        if r <= self.r_lower() && self.variant == WaveVariant::Pdm {
            return T::zero();
        }
        let (l, s) = self.ln_abs_unnormalized(r);
        s * (l + self.ln_norm).exp()
    }

    /// Radial function `psi(r) = sqrt(m(r)/m0) u(r) / r`, written out with the
    /// exponent `(xi - 1)/2` on `1 - delta z`.
    pub fn psi(&self, r: T) -> T {
        match self.variant {
            WaveVariant::ConstantMass => self.u(r) / r,
            WaveVariant::Pdm => {
                if r <= self.r_lower() {
                    return T::zero();
                }
                let two = T::lit(2.0);
                let ln_z = self.ln_z(r);
                let dz = self.delta * ln_z.exp();
                let xi = self.xi.unwrap();
                let poly = jacobi(self.state.n, two * self.eps, xi, T::one() - two * dz);
                let ln = self.ln_norm + self.eps * ln_z + T::lit(0.5) * (xi - T::one()) * (-dz).ln_1p() + poly.abs().ln();
                poly.signum() * ln.exp() / r
            }
        }
    }

    /// `sqrt(m(r)/m0)`.
    pub fn mass_factor(&self, r: T) -> T {
        match self.variant {
            WaveVariant::ConstantMass => T::one(),
            WaveVariant::Pdm => T::one() / (T::one() - self.delta * self.ln_z(r).exp()),
        }
    }

    /// `int u^2 dr` over the physical range.
    pub fn norm_integral(&self) -> Result<T, WavefunctionError> {
        let lo = self.r_lower();
        let tol = Tolerance::default();
        Ok(integrate_semi_infinite(
            |r| {
                if r <= lo {
                    return T::zero();
                }
                let v = self.u(r);
                v * v
            },
            lo,
            self.re.max(T::one() / self.a),
            tol,
        )?
        .value)
    }

    /// `int u_self u_other dr`.
    pub fn overlap(&self, other: &Self) -> Result<T, WavefunctionError> {
        let lo = self.r_lower().max(other.r_lower());
        Ok(integrate_semi_infinite(
            |r| {
                if r <= lo {
                    return T::zero();
                }
                self.u(r) * other.u(r)
            },
            lo,
            self.re.max(T::one() / self.a),
            Tolerance {
                abs: 1e-12,
                ..Tolerance::default()
            },
        )?
        .value)
    }

    /// Number of sign changes of `u` on a fine grid covering the state.
    pub fn node_count(&self) -> usize {
        let lo = self.r_lower();
        let hi = self.re + T::lit(60.0) / self.a;
        let samples = 40_000;
        let values: Vec<T> = (1..samples)
            .map(|i| self.u(lo + (hi - lo) * T::from_u32_lossless(i) / T::from_u32_lossless(samples)))
            .collect();
        let peak = values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let floor = peak * T::lit(1e-10);
        let mut last = T::zero();
        let mut nodes = 0;
        for &v in &values {
            if v.abs() <= floor {
                continue;
            }
            if last != T::zero() && v.signum() != last.signum() {
                nodes += 1;
            }
            last = v;
        }
        nodes
    }

    /// Max over `z` of the relative residual of
    /// `z^2 (1-delta z)^2 u'' + z (1-delta z)^2 u' + (-beta1 z^2 + beta2 z - eps^2) u`,
    /// each point scaled by its largest term. Derivatives are analytic.
    pub fn residual_max_norm(&self, z_lo: T, z_hi: T, points: u32) -> T {
        let mut worst = T::zero();
        for i in 0..=points {
            let z = z_lo + (z_hi - z_lo) * T::from_u32_lossless(i) / T::from_u32_lossless(points);
            worst = worst.max(self.residual_at(z));
        }
        worst
    }

    fn residual_at(&self, z: T) -> T {
        let two = T::lit(2.0);
        let n = self.state.n;
        let eps = self.eps;
        let (w, l1, l1p, p, pz, pzz) = match self.variant {
            WaveVariant::Pdm => {
                let d = self.delta;
                let xi = self.xi.unwrap();
                let nu = T::lit(0.5) * (T::one() + xi);
                let w = T::one() - d * z;
                let x = T::one() - two * d * z;
                let al = two * eps;
                (
                    w,
                    eps / z - nu * d / w,
                    -eps / (z * z) - nu * d * d / (w * w),
                    jacobi(n, al, xi, x),
                    -two * d * jacobi_derivative(n, al, xi, x),
                    T::lit(4.0) * d * d * jacobi_second_derivative(n, al, xi, x),
                )
            }
            WaveVariant::ConstantMass => {
                let s = self.sqrt_beta1;
                let y = two * s * z;
                let al = two * eps;
                (
                    T::one(),
                    eps / z - s,
                    -eps / (z * z),
                    laguerre(n, al, y),
                    two * s * laguerre_derivative(n, al, y),
                    T::lit(4.0) * s * s * laguerre_second_derivative(n, al, y),
                )
            }
        };
        let zw2 = z * z * w * w;
        let terms = [
            zw2 * (l1 * l1 + l1p) * p,
            zw2 * two * l1 * pz,
            zw2 * pzz,
            z * w * w * l1 * p,
            z * w * w * pz,
            -self.beta.beta1 * z * z * p,
            self.beta.beta2 * z * p,
            -eps * eps * p,
        ];
        let sum = terms.iter().fold(T::zero(), |s, &t| s + t);
        let scale = terms.iter().fold(T::zero(), |m, t| m.max(t.abs()));
        if scale == T::zero() {
            T::zero()
        } else {
            sum.abs() / scale
        }
    }

    /// Evaluates the closed-form normalization series
    ///
    /// ```text
    /// N^-2 = Gamma(2 eps + 1) Gamma(xi + 2) / (a delta^eps Gamma(n))
    ///        * sum_p (-1)^p Gamma(n+p) (n + 1 + 2 eps + xi)_p / (p! (p + 2 eps) Gamma(p + 2 eps + xi + 2))
    ///          * 3F2(p + 2 eps, -n, n + 2 eps + xi + 1; p + 2 eps + xi + 2, 1 + 2 eps; 1)
    /// ```
    ///
    /// and compares it with the quadrature constant. Only defined for the
    /// position-dependent mass with `n >= 1`.
    pub fn series_normalization(&self, max_terms: usize) -> Result<Option<SeriesNormalization<T>>, WavefunctionError> {
        if self.variant != WaveVariant::Pdm || self.state.n == 0 {
            return Ok(None);
        }
        let one = T::one();
        let two = T::lit(2.0);
        let eps = self.eps;
        let xi = self.xi.unwrap();
        let nn = T::from_u32_lossless(self.state.n);
        let ln_pre = ln_gamma(two * eps + one) + ln_gamma(xi + two) - self.a.ln() - eps * self.delta.ln() - ln_gamma(nn);
        let big = nn + one + two * eps + xi;
        let mut sum = T::zero();
        let mut prev_sum = T::zero();
        let mut last_mag = T::infinity();
        let mut growing = 0usize;
        let mut converged = false;
        let mut terms = 0usize;
        for p in 0..max_terms {
            let pp = T::from_usize(p).unwrap();
            let f = hyp3f2(
                [pp + two * eps, -nn, nn + two * eps + xi + one],
                [pp + two * eps + xi + two, one + two * eps],
                one,
                self.state.n as usize + 2,
            )?
            .value;
            let ln_mag = ln_gamma(nn + pp) + ln_pochhammer(big, pp)
                - ln_gamma(pp + one)
                - (pp + two * eps).ln()
                - ln_gamma(pp + two * eps + xi + two);
            let sign = if p % 2 == 0 { one } else { -one };
            let term = sign * ln_mag.exp() * f;
            prev_sum = sum;
            sum = sum + term;
            terms = p + 1;
            let mag = term.abs();
            if mag > last_mag {
                growing += 1;
                if growing >= 20 {
                    break;
                }
            } else {
                growing = 0;
            }
            last_mag = mag;
            if p > 2 && mag <= T::lit(1e-14) * sum.abs() {
                converged = true;
                break;
            }
        }
        let divergent = growing > 0;
        // for an alternating tail the mean of the last two partial sums is the better estimate
        let estimate = if converged { sum } else { T::lit(0.5) * (sum + prev_sum) };
        let norm = if divergent || estimate.is_nan() || estimate <= T::zero() {
            None
        } else {
            Some((-T::lit(0.5) * (ln_pre + estimate.ln())).exp())
        };
        Ok(Some(SeriesNormalization {
            norm,
            ratio: norm.map(|v| (v.ln() - self.ln_norm).exp()),
            terms,
            converged,
            divergent,
        }))
    }
}

/// Both sides of
/// `int_0^1 (1-s)^(mu-1) s^(nu-1) 2F1(alpha, beta; gamma; a s) ds
///   = Gamma(mu) Gamma(nu) / Gamma(mu + nu) 3F2(nu, alpha, beta; mu + nu, gamma; a)`.
pub fn beta_hypergeometric_identity<T: Real>(
    mu: T,
    nu: T,
    alpha: T,
    beta: T,
    gamma: T,
    a: T,
) -> Result<(T, T), WavefunctionError> {
    let one = T::one();
    let mut failure = None;
    let lhs = integrate(
        |s: T| {
            if s <= T::zero() || s >= one {
                return T::zero();
            }
            match hyp2f1(alpha, beta, gamma, a * s) {
                Ok(f) => (one - s).powf(mu - one) * s.powf(nu - one) * f.value,
                Err(e) => {
                    failure = Some(e);
                    T::zero()
                }
            }
        },
        T::zero(),
        one,
        Tolerance {
            abs: 1e-15,
            rel: 1e-13,
            max_subdivisions: 4000,
        },
    )?
    .value;
    if let Some(e) = failure {
        return Err(e.into());
    }
    let beta_fn = (ln_gamma(mu) + ln_gamma(nu) - ln_gamma(mu + nu)).exp();
    let rhs = beta_fn * hyp3f2([nu, alpha, beta], [mu + nu, gamma], a, 100_000)?.value;
    Ok((lhs, rhs))
}

/// Unnormalized special-case amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialAmplitude<T> {
    pub value: Complex<T>,
    /// Laguerre superscript `2 (... - n - 1/2)`.
    pub superscript: Complex<T>,
    /// False when `Re(superscript) <= -1`, where the state is not normalizable.
    pub normalizable: bool,
}

/// Closed-form radial functions of the special cases at coordinate `x`,
/// with the normalizing factors set to one.
pub fn special_case_wavefunction<T: Real>(case: &SpecialCase<T>, n: u32, x: T) -> SpecialAmplitude<T> {
    let two = T::lit(2.0);
    let e = case.exponent(n);
    let sup = e * two;
    let c = |v: T| Complex::new(v, T::zero());
    let value = match *case {
        SpecialCase::GeneralizedVibrational { alpha, .. } => {
            let lambda = case.lambda().unwrap();
            let t = (-alpha * x).exp();
            let env = (-alpha * e.re * x - lambda * t).exp();
            c(env) * laguerre(n, sup, c(two * lambda * t))
        }
        _ => {
            let kappa = case.kappa_complex();
            let phase = match *case {
                SpecialCase::NonPt { .. } => c(-x),
                SpecialCase::PtType1 { .. } => Complex::new(T::zero(), -x),
                SpecialCase::PtType2 { alpha, .. } => Complex::new(T::zero(), -alpha * x),
                SpecialCase::GeneralizedVibrational { .. } => unreachable!(),
            };
            let y = kappa * two * phase.exp();
            (kappa * two).powc(-e) * y.powc(e) * (-(kappa * phase.exp())).exp() * laguerre(n, sup, y)
        }
    };
    SpecialAmplitude {
        value,
        superscript: sup,
        normalizable: sup.re > -T::one(),
    }
}
