//! Closed-form bound-state energies.
//!
//! Notation: `h = hbar^2 / (2 m0)` in eV·Å², `gamma = l(l+1)/r_e^2` and
//!
//! ```text
//! beta1 = (V1/h + gamma a2)/a^2 + P delta + Q delta^2
//! beta2 = (V2/h - gamma a1)/a^2 + S delta
//! ```
//!
//! Every energy satisfies `E = V3 + h gamma a0 - h a^2 eps^2`, where `eps`
//! is the decay exponent of the wavefunction in `z = exp(-a (r - r_e))`.

pub mod special;

use serde::Serialize;
use thiserror::Error;

use crate::molecules::{MoleculeError, MoleculeRecord};
use crate::pekeris::{composite_spq, gamma, pekeris_coefficients, CompositeSpq, PekerisCoefficients};
use crate::potential::{EnergyOrigin, MassModel, PotentialError, PotentialParams};
use crate::scalar::Real;
use crate::units::{UnitError, UnitSystem};

/// Below this `delta` the constant-mass closed form is used.
pub const DELTA_CROSSOVER: f64 = 1e-10;
/// `eps` at or below this value counts as unbound.
pub const EPS_TIE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Unit(#[from] UnitError),
    #[error(transparent)]
    Molecule(#[from] MoleculeError),
    #[error("no real NU solution: {what} = {value} is negative")]
    NoRealSolution { what: &'static str, value: f64 },
    #[error("state n = {n} sits at the mass-deformation threshold (vanishing denominator)")]
    Threshold { n: u32 },
    #[error("the position-dependent-mass closed form needs 0 < delta < 1, got {0}")]
    DeltaOutOfRange(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuantumState {
    pub n: u32,
    pub l: u32,
}

impl QuantumState {
    pub fn new(n: u32, l: u32) -> Self {
        Self { n, l }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Pdm,
    ConstantMass,
    SWave,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Pdm => "pdm",
            Variant::ConstantMass => "constant_mass",
            Variant::SWave => "s_wave",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumResult<T> {
    pub state: QuantumState,
    /// Signed energy in eV.
    pub energy: T,
    pub eps: T,
    /// Present for the position-dependent-mass form only.
    pub xi: Option<T>,
    pub variant: Variant,
    pub bound: bool,
}

/// `beta1`, `beta2` for one `l` and `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaParameters<T> {
    pub beta1: T,
    pub beta2: T,
    pub delta: T,
}

impl<T: Real> BetaParameters<T> {
    /// `xi = sqrt(1 + 4 eps^2 + (4/delta)(beta1/delta - beta2))`.
    pub fn xi(&self, eps: T) -> Option<T> {
        let four = T::lit(4.0);
        let d = self.delta;
        let rad = T::one() + four * eps * eps + four / d * (self.beta1 / d - self.beta2);
        (rad >= T::zero()).then(|| rad.sqrt())
    }

    /// Right-hand side of the unsquared quantization condition
    /// `delta xi (n + 1/2 + eps) = beta2 - delta (n^2 + n + 1/2) - (2n + 1) delta eps - 2 delta eps^2`.
    ///
    /// The closed-form `eps` also solves the squared condition, so it belongs
    /// to the `xi > 0` branch only when this is positive.
    pub fn branch_gap(&self, n: u32, eps: T) -> T {
        let nn = T::from_u32_lossless(n);
        let d = self.delta;
        let two = T::lit(2.0);
        self.beta2 - d * (nn * nn + nn + T::lit(0.5)) - (two * nn + T::one()) * d * eps - two * d * eps * eps
    }

    /// Constant-mass limit `beta2 / (2 sqrt beta1) - (n + 1/2)`.
    pub fn eps_constant_mass(&self, n: u32) -> T {
        self.beta2 / (T::lit(2.0) * self.beta1.sqrt()) - (T::from_u32_lossless(n) + T::lit(0.5))
    }
}

/// A molecule in a given potential and mass model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diatomic<T> {
    potential: PotentialParams<T>,
    mass: MassModel<T>,
    units: UnitSystem<T>,
    h0: T,
}

impl<T: Real> Diatomic<T> {
    pub fn new(potential: PotentialParams<T>, mass: MassModel<T>, units: UnitSystem<T>) -> Result<Self, SpectrumError> {
        let h0 = units.hbar2_over_2mu(mass.m0())?;
        Ok(Self {
            potential,
            mass,
            units,
            h0,
        })
    }

    pub fn from_molecule(rec: &MoleculeRecord, q: T, delta: T, origin: EnergyOrigin) -> Result<Self, SpectrumError> {
        let units = UnitSystem::standard();
        let potential = rec.potential(q, origin, &units)?;
        let mass = MassModel::new(rec.mu(), delta)?;
        Self::new(potential, mass, units)
    }

    pub fn with_delta(&self, delta: T) -> Result<Self, SpectrumError> {
        Self::new(self.potential, MassModel::new(self.mass.m0(), delta)?, self.units)
    }

    pub fn potential(&self) -> &PotentialParams<T> {
        &self.potential
    }
    pub fn mass(&self) -> &MassModel<T> {
        &self.mass
    }
    pub fn units(&self) -> &UnitSystem<T> {
        &self.units
    }
    pub fn delta(&self) -> T {
        self.mass.delta()
    }

    /// `hbar^2 / (2 m0)` in eV·Å².
    pub fn h0(&self) -> T {
        self.h0
    }

    /// `hbar^2 / (2 m0 r_e^2)` in eV.
    pub fn e0(&self) -> T {
        self.h0 / (self.potential.re() * self.potential.re())
    }

    pub fn pekeris(&self) -> PekerisCoefficients<T> {
        pekeris_coefficients(self.potential.alpha()).expect("alpha positive by construction")
    }

    pub fn spq(&self, l: u32) -> CompositeSpq<T> {
        composite_spq(&self.potential, l)
    }

    pub fn beta(&self, l: u32) -> BetaParameters<T> {
        let p = &self.potential;
        let c = self.pekeris();
        let g = gamma(p, l);
        let a2 = p.a() * p.a();
        let d = self.delta();
        let spq = self.spq(l);
        BetaParameters {
            beta1: (p.v1() / self.h0 + g * c.a2) / a2 + spq.p * d + spq.q * d * d,
            beta2: (p.v2() / self.h0 - g * c.a1) / a2 + spq.s * d,
            delta: d,
        }
    }

    /// Energy for a given `eps`: `V3 + h gamma a0 - h a^2 eps^2`.
    pub fn energy_from_eps(&self, l: u32, eps: T) -> T {
        let p = &self.potential;
        p.v3() + self.h0 * gamma(p, l) * self.pekeris().a0 - self.h0 * p.a() * p.a() * eps * eps
    }

    /// Dissociation threshold seen by states of angular momentum `l`.
    pub fn threshold(&self, l: u32) -> T {
        self.energy_from_eps(l, T::zero())
    }
}

/// `eps_nl = [n(n+1) delta - 2(n+1/2) sqrt(beta1) + beta2] / (2 [sqrt(beta1) - (n+1/2) delta])`.
pub fn epsilon_pdm<T: Real>(n: u32, beta: &BetaParameters<T>, delta: T) -> Result<T, SpectrumError> {
    if beta.beta1 < T::zero() {
        return Err(SpectrumError::NoRealSolution {
            what: "beta1",
            value: beta.beta1.to_f64_lossy(),
        });
    }
    let nn = T::from_u32_lossless(n);
    let nh = nn + T::lit(0.5);
    let s1 = beta.beta1.sqrt();
    let den = s1 - nh * delta;
    if den == T::zero() || den.abs() <= T::epsilon() * s1 {
        return Err(SpectrumError::Threshold { n });
    }
    let num = nn * (nn + T::one()) * delta - T::lit(2.0) * nh * s1 + beta.beta2;
    Ok(T::lit(0.5) * num / den)
}

/// Position-dependent-mass energy, written out in the potential strengths.
/// Routes `delta` below [`DELTA_CROSSOVER`] to [`energy_constant_mass`].
pub fn energy_pdm<T: Real>(sys: &Diatomic<T>, state: QuantumState) -> Result<SpectrumResult<T>, SpectrumError> {
    let d = sys.delta();
    if d < T::lit(DELTA_CROSSOVER) {
        return energy_constant_mass(sys, state);
    }
    if d >= T::one() {
        return Err(SpectrumError::DeltaOutOfRange(d.to_f64_lossy()));
    }
    let p = sys.potential();
    let c = sys.pekeris();
    let spq = sys.spq(state.l);
    let h = sys.h0();
    let a = p.a();
    let a2 = a * a;
    let ll = T::from_u32_lossless(state.l) * T::from_u32_lossless(state.l + 1);
    let re2 = p.re() * p.re();
    let rad = (p.v1() / h + ll * c.a2 / re2) / a2 + spq.p * d + spq.q * d * d;
    if rad < T::zero() {
        return Err(SpectrumError::NoRealSolution {
            what: "beta1",
            value: rad.to_f64_lossy(),
        });
    }
    let root = rad.sqrt();
    let nn = T::from_u32_lossless(state.n);
    let nh = nn + T::lit(0.5);
    let den = root - nh * d;
    if den == T::zero() || den.abs() <= T::epsilon() * root {
        return Err(SpectrumError::Threshold { n: state.n });
    }
    let b2 = (p.v2() / h - ll * c.a1 / re2) / a2 + spq.s * d;
    let bracket = (nn * (nn + T::one()) * d - T::lit(2.0) * nh * root + b2) / den;
    let energy = p.v3() + h * ll * c.a0 / re2 - h * a2 / T::lit(4.0) * bracket * bracket;
    let eps = T::lit(0.5) * bracket;
    let beta = sys.beta(state.l);
    let xi = beta.xi(eps);
    let bound = eps > T::lit(EPS_TIE)
        && den > T::zero()
        && xi.is_some_and(|x| x > T::zero())
        && beta.branch_gap(state.n, eps) > T::zero();
    Ok(SpectrumResult {
        state,
        energy,
        eps,
        xi,
        variant: Variant::Pdm,
        bound,
    })
}

/// Constant-mass rovibrational energy.
pub fn energy_constant_mass<T: Real>(sys: &Diatomic<T>, state: QuantumState) -> Result<SpectrumResult<T>, SpectrumError> {
    let p = sys.potential();
    let c = sys.pekeris();
    let h = sys.h0();
    let a = p.a();
    let ll = T::from_u32_lossless(state.l) * T::from_u32_lossless(state.l + 1);
    let rot = h / (p.re() * p.re()) * ll;
    let half = T::lit(0.5);
    let under = p.v1() + rot * c.a2;
    if under <= T::zero() {
        return Err(SpectrumError::NoRealSolution {
            what: "V1 + h gamma a2",
            value: under.to_f64_lossy(),
        });
    }
    let top = half * p.v2() - rot * half * c.a1;
    let eps = T::one() / (a * h.sqrt()) * top / under.sqrt() - (T::from_u32_lossless(state.n) + half);
    let energy = p.v3() + rot * c.rotational_shift_polynomial() - h * a * a * eps * eps;
    Ok(SpectrumResult {
        state,
        energy,
        eps,
        xi: None,
        variant: Variant::ConstantMass,
        bound: eps > T::lit(EPS_TIE),
    })
}

/// Vibrational (`l = 0`) ladder `E_n = V3 - (1 + 2n - eta kappa)^2 / (4 kappa^2)`.
pub fn energy_s_wave<T: Real>(sys: &Diatomic<T>, n: u32) -> SpectrumResult<T> {
    let (eta, kappa) = s_wave_constants(sys);
    let p = sys.potential();
    let two = T::lit(2.0);
    let t = T::one() + two * T::from_u32_lossless(n) - eta * kappa;
    let eps = -t / two;
    SpectrumResult {
        state: QuantumState::new(n, 0),
        energy: p.v3() - t * t / (T::lit(4.0) * kappa * kappa),
        eps,
        xi: None,
        variant: Variant::SWave,
        bound: eps > T::lit(EPS_TIE),
    }
}

/// `eta = V2 / sqrt(V1)` and `kappa = r_e sqrt(2 mu) / (alpha hbar) = 1 / (a sqrt h)`.
pub fn s_wave_constants<T: Real>(sys: &Diatomic<T>) -> (T, T) {
    let p = sys.potential();
    (p.v2() / p.v1().sqrt(), T::one() / (p.a() * sys.h0().sqrt()))
}

/// Bound-state bookkeeping for the constant-mass s-wave ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundStateCount<T> {
    /// `(eta kappa - 1) / 2`: `eps_n > 0` exactly when `n` is below it.
    pub ceiling: T,
    /// Largest `n` with `eps_n > 0`.
    pub last_bound: Option<u32>,
    /// Number of states with `eps_n > 0`.
    pub count: u32,
}

impl<T: Real> BoundStateCount<T> {
    /// The quantum number reported as `n_max`: the first index past the last
    /// bound level, which equals the number of bound states.
    pub fn n_max(&self) -> u32 {
        self.count
    }
}

pub fn bound_state_count<T: Real>(sys: &Diatomic<T>) -> BoundStateCount<T> {
    let p = sys.potential();
    if p.v2() <= T::zero() {
        return BoundStateCount {
            ceiling: T::zero(),
            last_bound: None,
            count: 0,
        };
    }
    let (eta, kappa) = s_wave_constants(sys);
    let ceiling = T::lit(0.5) * (eta * kappa - T::one());
    let mut count = 0u32;
    if ceiling > T::zero() {
        count = ceiling.ceil().to_u32().unwrap_or(u32::MAX);
        while count > 0 && !energy_s_wave(sys, count - 1).bound {
            count -= 1;
        }
        while energy_s_wave(sys, count).bound {
            count += 1;
        }
    }
    BoundStateCount {
        ceiling,
        last_bound: count.checked_sub(1),
        count,
    }
}

/// `n_max` for the s-wave ladder; see [`BoundStateCount::n_max`].
pub fn n_max<T: Real>(sys: &Diatomic<T>) -> u32 {
    bound_state_count(sys).n_max()
}

/// Dispatches on `delta`.
pub fn energy<T: Real>(sys: &Diatomic<T>, state: QuantumState) -> Result<SpectrumResult<T>, SpectrumError> {
    energy_pdm(sys, state)
}
