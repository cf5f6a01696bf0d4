//! Adaptive Gauss–Kronrod (7/15) quadrature on finite and semi-infinite intervals.

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("integration did not reach tolerance after {subdivisions} subdivisions (estimate {value}, error {error})")]
    NotConverged { subdivisions: usize, value: f64, error: f64 },
    #[error("integrand produced a non-finite value at x = {0}")]
    NonFinite(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_subdivisions: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-14,
            rel: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> Result<Panel<T>, QuadError> {
    let half = T::lit(0.5);
    let c = half * (a + b);
    let h = half * (b - a);
    let mut eval = |x: T| -> Result<T, QuadError> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite(x.to_f64_lossy()))
        }
    };
    let fc = eval(c)?;
    let mut kron = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for i in 0..7 {
        let dx = h * T::lit(XGK[i]);
        let s = eval(c - dx)? + eval(c + dx)?;
        kron = kron + T::lit(WGK[i]) * s;
        if i % 2 == 1 {
            gauss = gauss + T::lit(WG[i / 2]) * s;
        }
    }
    Ok(Panel {
        a,
        b,
        value: kron * h,
        error: ((kron - gauss) * h).abs(),
    })
}

/// Integrates `f` over `[a, b]`, bisecting the worst panel until the summed
/// error estimate meets `tol`.
pub fn integrate<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, tol: Tolerance) -> Result<Integral<T>, QuadError> {
    let mut panels = vec![gk15(&mut f, a, b)?];
    let mut evaluations = 15;
    loop {
        let value = panels.iter().fold(T::zero(), |s, p| s + p.value);
        let error = panels.iter().fold(T::zero(), |s, p| s + p.error);
        let target = T::lit(tol.abs).max(T::lit(tol.rel) * value.abs());
        if error <= target {
            return Ok(Integral {
                value,
                error,
                evaluations,
            });
        }
        if panels.len() >= tol.max_subdivisions {
            return Err(QuadError::NotConverged {
                subdivisions: panels.len(),
                value: value.to_f64_lossy(),
                error: error.to_f64_lossy(),
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let p = panels.swap_remove(worst);
        let mid = T::lit(0.5) * (p.a + p.b);
        panels.push(gk15(&mut f, p.a, mid)?);
        panels.push(gk15(&mut f, mid, p.b)?);
        evaluations += 30;
    }
}

/// Integrates `f` over `[a, inf)` through `x = a + scale * t / (1 - t)`.
pub fn integrate_semi_infinite<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    scale: T,
    tol: Tolerance,
) -> Result<Integral<T>, QuadError> {
    let one = T::one();
    integrate(
        |t: T| {
            let w = one - t;
            let x = a + scale * t / w;
            let jac = scale / (w * w);
            let v = f(x);
            if v == T::zero() {
                T::zero()
            } else {
                v * jac
            }
        },
        T::zero(),
        one,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x: f64| x.powi(6) - 2.0 * x, 0.0, 2.0, Tolerance::default()).unwrap();
        assert_relative_eq!(r.value, 128.0 / 7.0 - 4.0, max_relative = 1e-14);
    }

    #[test]
    fn peaked_integrand() {
        let r = integrate(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, Tolerance::default()).unwrap();
        assert_relative_eq!(r.value, 2.0 * 100.0 * (100.0_f64).atan(), max_relative = 1e-11);
    }

    #[test]
    fn gaussian_tail() {
        let r = integrate_semi_infinite(|x: f64| (-x * x).exp(), 0.0, 1.0, Tolerance::default()).unwrap();
        assert_relative_eq!(r.value, std::f64::consts::PI.sqrt() / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn reports_non_finite() {
        // the panel midpoint is a node
        let r = integrate(|x: f64| 1.0 / x, -1.0, 1.0, Tolerance::default());
        assert_eq!(r.unwrap_err(), QuadError::NonFinite(0.0));
    }
}
