//! Special functions: log-gamma, Pochhammer symbols, Jacobi and generalized
//! Laguerre polynomials, and truncated hypergeometric series.
//!
//! Polynomials are evaluated by their three-term recurrences. The
//! hypergeometric series exist to cross-check those and to evaluate
//! normalization sums.

use num_traits::{FromPrimitive, Num};
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("series did not converge within {terms} terms (last term {last_term})")]
    NotConverged { terms: usize, last_term: f64 },
    #[error("series argument {0} outside the disc of convergence")]
    OutsideDisc(f64),
    #[error("lower parameter {0} is a non-positive integer")]
    PoleInDenominator(f64),
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln |Gamma(x)|`. Uses the reflection formula below one half.
pub fn ln_gamma<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        let pi = T::PI();
        return (pi / (pi * x).sin().abs()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::from_usize(i).unwrap());
    }
    let t = x + T::lit(LANCZOS_G) + half;
    half * (T::lit(2.0) * T::PI()).ln() + (x + half) * t.ln() - t + acc.ln()
}

/// `Gamma(x)` for real `x` away from the poles.
pub fn gamma<T: Real>(x: T) -> T {
    if x < T::lit(0.5) {
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma(T::one() - x));
    }
    ln_gamma(x).exp()
}

/// Rising factorial `(x)_p = x (x+1) ... (x+p-1)` by direct product.
pub fn pochhammer<T: Real>(x: T, p: u32) -> T {
    (0..p).fold(T::one(), |acc, k| acc * (x + T::from_u32_lossless(k)))
}

/// `ln (x)_p = ln Gamma(x+p) - ln Gamma(x)` for `x > 0`.
pub fn ln_pochhammer<T: Real>(x: T, p: T) -> T {
    ln_gamma(x + p) - ln_gamma(x)
}

/// Jacobi polynomial `P_n^{(alpha, beta)}(x)` by forward recurrence.
pub fn jacobi<T: Real>(n: u32, alpha: T, beta: T, x: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    if n == 0 {
        return one;
    }
    let ab = alpha + beta;
    let mut prev = one;
    let mut cur = (alpha + one) + (ab + two) * (x - one) / two;
    for k in 1..n {
        let k = T::from_u32_lossless(k);
        let s = two * k + ab;
        let lead = two * (k + one) * (k + ab + one) * s;
        let mid = (s + one) * ((s + two) * s * x + alpha * alpha - beta * beta);
        let back = two * (k + alpha) * (k + beta) * (s + two);
        let next = (mid * cur - back * prev) / lead;
        prev = cur;
        cur = next;
    }
    cur
}

/// `d/dx P_n^{(alpha, beta)}(x)`.
pub fn jacobi_derivative<T: Real>(n: u32, alpha: T, beta: T, x: T) -> T {
    if n == 0 {
        return T::zero();
    }
    let one = T::one();
    T::lit(0.5) * (T::from_u32_lossless(n) + alpha + beta + one) * jacobi(n - 1, alpha + one, beta + one, x)
}

/// `d^2/dx^2 P_n^{(alpha, beta)}(x)`.
pub fn jacobi_second_derivative<T: Real>(n: u32, alpha: T, beta: T, x: T) -> T {
    if n < 2 {
        return T::zero();
    }
    let one = T::one();
    let two = T::lit(2.0);
    let s = T::from_u32_lossless(n) + alpha + beta;
    T::lit(0.25) * (s + one) * (s + two) * jacobi(n - 2, alpha + two, beta + two, x)
}

/// Generalized Laguerre polynomial `L_n^{(alpha)}(x)` by forward recurrence.
///
/// Generic over any number type with field operations so it also serves
/// complex orders and arguments.
pub fn laguerre<T>(n: u32, alpha: T, x: T) -> T
where
    T: Copy + Num + FromPrimitive,
{
    let one = T::one();
    if n == 0 {
        return one;
    }
    let mut prev = one;
    let mut cur = one + alpha - x;
    for k in 1..n {
        let kk = T::from_u32(k).expect("small integer");
        let two_k_1 = T::from_u32(2 * k + 1).expect("small integer");
        let next = ((two_k_1 + alpha - x) * cur - (kk + alpha) * prev) / (kk + one);
        prev = cur;
        cur = next;
    }
    cur
}

/// `d/dx L_n^{(alpha)}(x) = -L_{n-1}^{(alpha+1)}(x)`.
pub fn laguerre_derivative<T>(n: u32, alpha: T, x: T) -> T
where
    T: Copy + Num + FromPrimitive,
{
    if n == 0 {
        return T::zero();
    }
    T::zero() - laguerre(n - 1, alpha + T::one(), x)
}

/// `d^2/dx^2 L_n^{(alpha)}(x) = L_{n-2}^{(alpha+2)}(x)`.
pub fn laguerre_second_derivative<T>(n: u32, alpha: T, x: T) -> T
where
    T: Copy + Num + FromPrimitive,
{
    if n < 2 {
        return T::zero();
    }
    laguerre(n - 2, alpha + T::one() + T::one(), x)
}

/// Result of a summed hypergeometric series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum<T> {
    pub value: T,
    pub terms: usize,
    /// True when a numerator parameter is a non-positive integer and the
    /// series ended on an exactly zero term.
    pub terminated: bool,
}

fn is_nonpositive_integer<T: Real>(v: T) -> bool {
    v <= T::zero() && v == v.round()
}

/// Generalized hypergeometric series `pFq(upper; lower; x)`.
///
/// Summation stops on an exactly zero term (terminating series) or once
/// `|term| <= eps |sum|` for three consecutive terms.
pub fn hypergeometric_series<T: Real>(
    upper: &[T],
    lower: &[T],
    x: T,
    max_terms: usize,
) -> Result<SeriesSum<T>, SeriesError> {
    if let Some(&b) = lower.iter().find(|&&b| is_nonpositive_integer(b)) {
        return Err(SeriesError::PoleInDenominator(b.to_f64_lossy()));
    }
    let terminating = upper.iter().any(|&a| is_nonpositive_integer(a));
    if !terminating && upper.len() > lower.len() + 1 {
        return Err(SeriesError::OutsideDisc(x.to_f64_lossy()));
    }
    if !terminating && upper.len() == lower.len() + 1 && x.abs() > T::one() {
        return Err(SeriesError::OutsideDisc(x.to_f64_lossy()));
    }
    let mut term = T::one();
    let mut sum = T::one();
    let mut small_run = 0;
    for k in 0..max_terms {
        let kk = T::from_usize(k).unwrap();
        let num = upper.iter().fold(T::one(), |acc, &a| acc * (a + kk));
        let den = lower.iter().fold(T::one(), |acc, &b| acc * (b + kk));
        term = term * num / den * x / (kk + T::one());
        if term == T::zero() {
            return Ok(SeriesSum {
                value: sum,
                terms: k + 1,
                terminated: true,
            });
        }
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum.abs() {
            small_run += 1;
            if small_run >= 3 {
                return Ok(SeriesSum {
                    value: sum,
                    terms: k + 2,
                    terminated: false,
                });
            }
        } else {
            small_run = 0;
        }
    }
    Err(SeriesError::NotConverged {
        terms: max_terms,
        last_term: term.to_f64_lossy(),
    })
}

/// Gauss `2F1(a, b; c; x)`.
pub fn hyp2f1<T: Real>(a: T, b: T, c: T, x: T) -> Result<SeriesSum<T>, SeriesError> {
    hypergeometric_series(&[a, b], &[c], x, 100_000)
}

/// `3F2(a1, a2, a3; b1, b2; x)` with explicit truncation control.
pub fn hyp3f2<T: Real>(upper: [T; 3], lower: [T; 2], x: T, max_terms: usize) -> Result<SeriesSum<T>, SeriesError> {
    hypergeometric_series(&upper, &lower, x, max_terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn binomial(top: f64, k: u32) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (top - i as f64) / (i as f64 + 1.0))
    }

    /// Explicit finite-sum representation of the Jacobi polynomial.
    fn jacobi_sum(n: u32, a: f64, b: f64, x: f64) -> f64 {
        (0..=n)
            .map(|s| {
                binomial(n as f64 + a, n - s)
                    * binomial(n as f64 + b, s)
                    * ((x - 1.0) / 2.0).powi(s as i32)
                    * ((x + 1.0) / 2.0).powi((n - s) as i32)
            })
            .sum()
    }

    #[test]
    fn gamma_at_integers_and_half() {
        assert_relative_eq!(gamma(5.0_f64), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(0.5_f64), std::f64::consts::PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(-0.5_f64), -2.0 * std::f64::consts::PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(ln_gamma(171.0_f64), 706.573_062_245_787_4, max_relative = 1e-14);
    }

    #[test]
    fn pochhammer_product_matches_gamma_ratio() {
        for &x in &[0.3, 1.0, 2.75, 11.5, 40.25] {
            for p in 0..=30u32 {
                let direct = pochhammer(x, p);
                let via_gamma = ln_pochhammer(x, p as f64).exp();
                assert_relative_eq!(direct, via_gamma, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn jacobi_low_orders() {
        assert_eq!(jacobi(0, 2.0, 3.0, 0.3), 1.0);
        assert_relative_eq!(jacobi(1, 2.0, 3.0, 0.3), 0.5 * (2.0 - 3.0 + (2.0 + 3.0 + 2.0) * 0.3), max_relative = 1e-15);
        // P_n^{(a,b)}(1) = (a+1)_n / n!
        let v = jacobi(6, 1.5, 0.5, 1.0);
        assert_relative_eq!(v, pochhammer(2.5, 6) / 720.0, max_relative = 1e-13);
    }

    /// Terminating `2F1(-n, b; c; s)` summed exactly, with the sum of term magnitudes.
    fn exact_2f1(n: u32, b: f64, c: f64, s: f64) -> (f64, f64) {
        use num_rational::BigRational;
        use num_traits::{Signed, ToPrimitive};
        let r = |v: f64| BigRational::from_float(v).unwrap();
        let (b, c, s) = (r(b), r(c), r(s));
        let mut term = r(1.0);
        let mut sum = r(1.0);
        let mut abs_sum = r(1.0);
        for k in 0..n {
            let kk = r(k as f64);
            term = term * (r(k as f64) - r(n as f64)) * (&b + &kk) / ((&c + &kk) * (&kk + r(1.0))) * &s;
            abs_sum += term.abs();
            sum += &term;
        }
        (sum.to_f64().unwrap(), abs_sum.to_f64().unwrap())
    }

    #[test]
    fn jacobi_recurrence_matches_sum_and_hypergeometric() {
        for n in [1u32, 4, 9, 15, 20] {
            for &(a, b) in &[(0.5, 0.5), (3.0, 12.0), (25.0, 1.25), (29.5, 29.5)] {
                for &x in &[-0.95, -0.3, 0.0, 0.41, 0.9] {
                    let rec = jacobi(n, a, b, x);
                    let s = (1.0 - x) / 2.0;
                    let pre = pochhammer(a + 1.0, n) / pochhammer(1.0, n);
                    let (exact, conditioning) = exact_2f1(n, 1.0 + a + b + n as f64, a + 1.0, s);
                    let exact = pre * exact;
                    assert!((rec - exact).abs() <= 1e-10 * exact.abs() + 1e-300, "n={n} a={a} b={b} x={x}");
                    // floating-point sums are accurate relative to their largest terms
                    let sum = jacobi_sum(n, a, b, x);
                    let hyp = pre * hyp2f1(-(n as f64), 1.0 + a + b + n as f64, a + 1.0, s).unwrap().value;
                    let scale = 1e-13 * pre * conditioning + 1e-10 * exact.abs();
                    assert!((sum - exact).abs() <= scale, "sum n={n} a={a} b={b} x={x}");
                    assert!((hyp - exact).abs() <= scale, "2F1 n={n} a={a} b={b} x={x}");
                }
            }
        }
    }

    #[test]
    fn jacobi_derivatives_match_differences() {
        let (n, a, b, x) = (7, 3.5, 2.25, 0.37);
        let h = 1e-5;
        let d1 = (jacobi(n, a, b, x + h) - jacobi(n, a, b, x - h)) / (2.0 * h);
        let d2 = (jacobi(n, a, b, x + h) - 2.0 * jacobi(n, a, b, x) + jacobi(n, a, b, x - h)) / (h * h);
        assert_relative_eq!(jacobi_derivative(n, a, b, x), d1, max_relative = 1e-8);
        assert_relative_eq!(jacobi_second_derivative(n, a, b, x), d2, max_relative = 1e-5);
    }

    #[test]
    fn laguerre_matches_explicit_sum() {
        // L_n^a(x) = sum_k (-1)^k C(n+a, n-k) x^k / k!
        for n in [0u32, 1, 3, 10, 30] {
            for &a in &[0.0, 0.7, 12.0, 49.0] {
                for &x in &[0.05, 1.0, 7.5, 40.0, 99.0] {
                    let rec = laguerre(n, a, x);
                    let mut fact = 1.0;
                    let mut sum = 0.0;
                    let mut max_term: f64 = 0.0;
                    for k in 0..=n {
                        if k > 0 {
                            fact *= k as f64;
                        }
                        let t = (-1.0_f64).powi(k as i32) * binomial(n as f64 + a, n - k) * x.powi(k as i32) / fact;
                        max_term = max_term.max(t.abs());
                        sum += t;
                    }
                    // cancellation in the explicit sum limits its own accuracy
                    let tol = 1e-10 * rec.abs().max(1.0) + 1e-14 * max_term;
                    assert!((rec - sum).abs() <= tol, "n={n} a={a} x={x}: {rec} vs {sum}");
                }
            }
        }
    }

    #[test]
    fn laguerre_complex_agrees_with_real_on_real_axis() {
        let r = laguerre(6, 2.5, 1.75);
        let c = laguerre(6, Complex64::new(2.5, 0.0), Complex64::new(1.75, 0.0));
        assert_relative_eq!(c.re, r, max_relative = 1e-14);
        assert_eq!(c.im, 0.0);
    }

    #[test]
    fn hypergeometric_known_values() {
        // 2F1(1,1;2;x) = -ln(1-x)/x
        let x: f64 = 0.5;
        assert_relative_eq!(hyp2f1(1.0, 1.0, 2.0, x).unwrap().value, -(1.0 - x).ln() / x, max_relative = 1e-14);
        // Saalschutz-free check: 3F2 with a unit upper parameter reduces
        let v = hyp3f2([2.0, 3.0, 1.5], [1.5, 4.0], 0.25, 1000).unwrap().value;
        let w = hyp2f1(2.0, 3.0, 4.0, 0.25).unwrap().value;
        assert_relative_eq!(v, w, max_relative = 1e-14);
        assert!(hyp2f1(1.0, 1.0, 2.0, 1.5).is_err());
        assert!(hyp2f1(1.0, 1.0, -2.0, 0.5).is_err());
        let t = hyp2f1(-3.0, 2.0, 1.0, 5.0).unwrap();
        assert!(t.terminated);
        // 1 - 30 + 225 - 500
        let expected = -304.0;
        assert_relative_eq!(t.value, expected, max_relative = 1e-14);
    }
}
