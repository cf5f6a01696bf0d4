//! Bound-state spectra and radial wavefunctions of diatomic molecules in the
//! generalized q-deformed Morse potential, with a position-dependent mass
//! `m0 / (1 - delta exp(-a (r - r_e)))^2` or a constant mass.
//!
//! Energies are in eV and lengths in Å. The analytic modules are generic over
//! [`scalar::Real`]; the aliases below fix the scalar to `f64`.

pub mod cli;
pub mod molecules;
pub mod nu;
pub mod oracle;
pub mod pekeris;
pub mod potential;
pub mod quadrature;
pub mod reference;
pub mod scalar;
pub mod special;
pub mod spectrum;
pub mod units;
pub mod wavefunction;

pub use molecules::{builtin, load_molecules, MoleculeRecord};
pub use potential::EnergyOrigin;
pub use spectrum::{QuantumState, Variant};

pub type PotentialParams = potential::PotentialParams<f64>;
pub type MassModel = potential::MassModel<f64>;
pub type UnitSystem = units::UnitSystem<f64>;
pub type PekerisCoefficients = pekeris::PekerisCoefficients<f64>;
pub type Diatomic = spectrum::Diatomic<f64>;
pub type SpectrumResult = spectrum::SpectrumResult<f64>;
pub type BetaParameters = spectrum::BetaParameters<f64>;
pub type SpecialCase = spectrum::special::SpecialCase<f64>;
pub type RadialWavefunction = wavefunction::RadialWavefunction<f64>;
