//! Parametric Nikiforov–Uvarov machinery.
//!
//! Any equation of the form
//!
//! ```text
//! [z (1 - c3 z)]^2 u'' + z (1 - c3 z)(c1 - c2 z) u' + (-A z^2 + B z - C) u = 0
//! ```
//!
//! is characterised by the six numbers `(c1, c2, c3, A, B, C)`. From them the
//! derived constants `c4 ... c13`, the polynomials `pi(z)` and `tau(z)`, the
//! constant `k` and the quantization condition follow algebraically.
//!
//! The code is generic over [`NuScalar`] so the same routines run in floating
//! point and in exact rational arithmetic.

use thiserror::Error;

use crate::scalar::NuScalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NuError {
    #[error("c3 must be non-zero")]
    ZeroC3,
    #[error("no real NU solution: {name} = {value} is negative")]
    NoRealSolution { name: &'static str, value: String },
    #[error("square root of {name} = {value} is not representable in this scalar type")]
    InexactRoot { name: &'static str, value: String },
    #[error("NU negativity condition violated: tau' = {0}")]
    TauNotDecreasing(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NuInput<T> {
    pub c1: T,
    pub c2: T,
    pub c3: T,
    pub a: T,
    pub b: T,
    pub c: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NuConstants<T> {
    pub c4: T,
    pub c5: T,
    pub c6: T,
    pub c7: T,
    pub c8: T,
    pub c9: T,
    pub c10: T,
    pub c11: T,
    pub c12: T,
    pub c13: T,
    /// `sqrt(c8)`, taken non-negative.
    pub sqrt_c8: T,
    /// `sqrt(c9)`, taken non-negative.
    pub sqrt_c9: T,
}

impl<T: NuScalar> NuInput<T> {
    /// The Morse-type instantiation: `c1 = 1`, `c2 = c3 = delta`, `A = beta1`,
    /// `B = beta2`, `C = eps^2`.
    pub fn morse(beta1: T, beta2: T, eps: T, delta: T) -> Self {
        Self {
            c1: T::from_i64(1),
            c2: delta.clone(),
            c3: delta,
            a: beta1,
            b: beta2,
            c: eps.mul(&eps),
        }
    }
}

fn sqrt_of<T: NuScalar>(name: &'static str, v: &T) -> Result<T, NuError> {
    if v.is_negative() {
        return Err(NuError::NoRealSolution {
            name,
            value: format!("{v:?}"),
        });
    }
    v.try_sqrt().ok_or_else(|| NuError::InexactRoot {
        name,
        value: format!("{v:?}"),
    })
}

pub fn derive_constants<T: NuScalar>(input: &NuInput<T>) -> Result<NuConstants<T>, NuError> {
    if input.c3.is_zero() {
        return Err(NuError::ZeroC3);
    }
    let one = T::from_i64(1);
    let two = T::from_i64(2);
    let c4 = one.sub(&input.c1).half();
    let c5 = input.c2.sub(&two.mul(&input.c3)).half();
    let c6 = c5.mul(&c5).add(&input.a);
    let c7 = two.mul(&c4).mul(&c5).sub(&input.b);
    let c8 = c4.mul(&c4).add(&input.c);
    let c9 = input.c3.mul(&c7.add(&input.c3.mul(&c8))).add(&c6);
    let sqrt_c8 = sqrt_of("c8", &c8)?;
    let sqrt_c9 = sqrt_of("c9", &c9)?;
    let c10 = input.c1.add(&two.mul(&c4)).add(&two.mul(&sqrt_c8)).sub(&one);
    let c11 = one
        .sub(&input.c1)
        .sub(&two.mul(&c4))
        .add(&two.div(&input.c3).mul(&sqrt_c9));
    let c12 = c4.add(&sqrt_c8);
    let c13 = c4.neg().add(&sqrt_c9.sub(&c5).div(&input.c3));
    Ok(NuConstants {
        c4,
        c5,
        c6,
        c7,
        c8,
        c9,
        c10,
        c11,
        c12,
        c13,
        sqrt_c8,
        sqrt_c9,
    })
}

/// Sign choice when solving the quadratic for `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KBranch {
    /// `k = -(c7 + 2 c3 c8) - 2 sqrt(c8 c9)`: the bound-state branch.
    Physical,
    /// `k = -(c7 + 2 c3 c8) + 2 sqrt(c8 c9)`.
    Conjugate,
}

/// `pi(z) = pi0 + pi1 z`, `tau(z) = tau0 + tau1 z` and the constant `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyPolynomials<T> {
    pub branch: KBranch,
    pub pi0: T,
    pub pi1: T,
    pub k: T,
    pub tau0: T,
    pub tau1: T,
    /// Only the physical branch yields normalizable bound states.
    pub physical: bool,
}

impl<T: NuScalar> KeyPolynomials<T> {
    pub fn pi(&self, z: &T) -> T {
        self.pi0.add(&self.pi1.mul(z))
    }

    pub fn tau(&self, z: &T) -> T {
        self.tau0.add(&self.tau1.mul(z))
    }

    pub fn tau_prime(&self) -> T {
        self.tau1.clone()
    }
}

pub fn key_polynomials<T: NuScalar>(input: &NuInput<T>, branch: KBranch) -> Result<KeyPolynomials<T>, NuError> {
    let k = derive_constants(input)?;
    let two = T::from_i64(2);
    let base_k = k.c7.add(&two.mul(&input.c3).mul(&k.c8)).neg();
    let cross = two.mul(&k.sqrt_c8.mul(&k.sqrt_c9));
    // pi(z) = c4 + c5 z - [slope z + offset]
    let (kval, slope, offset) = match branch {
        KBranch::Physical => (
            base_k.sub(&cross),
            k.sqrt_c9.add(&input.c3.mul(&k.sqrt_c8)),
            k.sqrt_c8.neg(),
        ),
        KBranch::Conjugate => (
            base_k.add(&cross),
            k.sqrt_c9.sub(&input.c3.mul(&k.sqrt_c8)),
            k.sqrt_c8.clone(),
        ),
    };
    let pi0 = k.c4.sub(&offset);
    let pi1 = k.c5.sub(&slope);
    // tau = tau_tilde + 2 pi with tau_tilde = c1 - c2 z
    let tau0 = input.c1.add(&two.mul(&pi0));
    let tau1 = input.c2.neg().add(&two.mul(&pi1));
    if branch == KBranch::Physical && !tau1.is_negative() {
        return Err(NuError::TauNotDecreasing(format!("{tau1:?}")));
    }
    Ok(KeyPolynomials {
        branch,
        pi0,
        pi1,
        k: kval,
        tau0,
        tau1,
        physical: branch == KBranch::Physical,
    })
}

/// Left-hand side of the parametric quantization condition
///
/// ```text
/// (c2 - c3) n + c3 n^2 - (2n+1) c5 + (2n+1)(sqrt c9 + c3 sqrt c8) + c7 + 2 c3 c8 + 2 sqrt(c8 c9)
/// ```
pub fn energy_equation_residual<T: NuScalar>(input: &NuInput<T>, n: u32) -> Result<T, NuError> {
    let k = derive_constants(input)?;
    let nn = T::from_i64(n as i64);
    let two = T::from_i64(2);
    let odd = two.mul(&nn).add(&T::from_i64(1));
    Ok(input
        .c2
        .sub(&input.c3)
        .mul(&nn)
        .add(&input.c3.mul(&nn).mul(&nn))
        .sub(&odd.mul(&k.c5))
        .add(&odd.mul(&k.sqrt_c9.add(&input.c3.mul(&k.sqrt_c8))))
        .add(&k.c7)
        .add(&two.mul(&input.c3).mul(&k.c8))
        .add(&two.mul(&k.sqrt_c8).mul(&k.sqrt_c9)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn c1_one_forces_c4_zero() {
        let input = NuInput {
            c1: 1.0,
            c2: 0.7,
            c3: -0.2,
            a: 3.0,
            b: 1.5,
            c: 4.0,
        };
        assert_eq!(derive_constants(&input).unwrap().c4, 0.0);
    }

    #[test]
    fn negative_c8_rejected() {
        let input = NuInput {
            c1: 1.0,
            c2: 0.5,
            c3: 0.5,
            a: 1.0,
            b: 1.0,
            c: -2.0,
        };
        assert!(matches!(
            derive_constants(&input),
            Err(NuError::NoRealSolution { name: "c8", .. })
        ));
    }

    #[test]
    fn zero_c3_rejected() {
        let input = NuInput::morse(1.0, 1.0, 0.5, 0.0);
        assert_eq!(derive_constants(&input), Err(NuError::ZeroC3));
    }

    #[test]
    fn residual_isolates_c7() {
        // c1 = 1 makes c4 = 0; c2 = 2 c3 makes c5 = 0; A = -c3 c7 keeps c9 = 0 with C = 0.
        let c3 = 0.25;
        let b = -1.7; // c7 = -B
        let input = NuInput {
            c1: 1.0,
            c2: 2.0 * c3,
            c3,
            a: -c3 * -b,
            b,
            c: 0.0,
        };
        let k = derive_constants(&input).unwrap();
        assert_eq!((k.c5, k.c8, k.c9), (0.0, 0.0, 0.0));
        assert_eq!(energy_equation_residual(&input, 0).unwrap(), k.c7);
    }

    #[test]
    fn irrational_root_reported_for_exact_scalars() {
        // c8 = 0 and c9 = 1/4 + beta1 = 5/4, whose root is irrational
        let input = NuInput::morse(rat(1, 1), rat(0, 1), rat(0, 1), rat(1, 1));
        assert!(matches!(
            derive_constants(&input),
            Err(NuError::InexactRoot { name: "c9", .. })
        ));
        let square = NuInput::morse(rat(2, 1), rat(0, 1), rat(0, 1), rat(1, 1));
        assert_eq!(derive_constants(&square).unwrap().sqrt_c9, rat(3, 2));
    }

    #[test]
    fn conjugate_branch_is_flagged() {
        let input = NuInput::morse(40.0, 12.0, 1.5, 0.3);
        let kp = key_polynomials(&input, KBranch::Conjugate).unwrap();
        assert!(!kp.physical);
        let phys = key_polynomials(&input, KBranch::Physical).unwrap();
        assert!(phys.physical);
        assert!(phys.tau_prime() < 0.0);
    }
}
