//! Spectroscopic constants of the built-in molecules and a loader for
//! user-supplied molecule files.
//!
//! Files hold one molecule per block of `key = value` lines; blocks are
//! separated by blank lines and `#` starts a comment:
//!
//! ```text
//! name   = CO
//! D0_cm1 = 90540
//! a_invA = 2.2994
//! r0_A   = 1.1283
//! mu_amu = 6.8606719
//! source = builtin
//! ```
//!
//! Numbers are kept as exact decimals so a load/serialize round trip never
//! changes a digit.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::potential::{EnergyOrigin, PotentialError, PotentialParams};
use crate::scalar::Real;
use crate::units::{UnitError, UnitSystem};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MoleculeError {
    #[error("unknown molecule {name:?}; available: {available}")]
    Unknown { name: String, available: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: field {field}: {message}")]
    Field {
        line: usize,
        field: String,
        message: String,
    },
    #[error("molecule {molecule:?}: {field} must be strictly positive, got {value}")]
    Validation {
        molecule: String,
        field: &'static str,
        value: String,
    },
    #[error("molecule {molecule:?} starting at line {line}: missing field {field}")]
    Missing {
        molecule: String,
        line: usize,
        field: &'static str,
    },
    #[error("duplicate molecule name {0:?}")]
    Duplicate(String),
    #[error(transparent)]
    Unit(#[from] UnitError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

/// Decimal number `mantissa * 10^-scale`, stored exactly.
#[derive(Debug, Clone, Copy, Eq)]
pub struct ExactDecimal {
    mantissa: i128,
    scale: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a decimal number: {0:?}")]
pub struct DecimalParseError(String);

impl ExactDecimal {
    pub const fn new(mantissa: i128, scale: u32) -> Self {
        Self { mantissa, scale }
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa > 0
    }

    /// Nearest `f64`, correctly rounded.
    pub fn to_f64(&self) -> f64 {
        self.to_string().parse().expect("canonical decimal parses")
    }

    pub fn to_real<T: Real>(&self) -> T {
        T::lit(self.to_f64())
    }

    fn normalized(&self) -> (i128, u32) {
        let (mut m, mut s) = (self.mantissa, self.scale);
        while s > 0 && m % 10 == 0 {
            m /= 10;
            s -= 1;
        }
        (m, s)
    }
}

impl PartialEq for ExactDecimal {
    fn eq(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }
}

impl FromStr for ExactDecimal {
    type Err = DecimalParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DecimalParseError(s.to_string());
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (digits, exp) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], body[i + 1..].parse::<i32>().map_err(|_| err())?),
            None => (body, 0),
        };
        let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(err());
        }
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let mut mantissa: i128 = 0;
        for c in int.chars().chain(frac.chars()) {
            mantissa = mantissa
                .checked_mul(10)
                .and_then(|m| m.checked_add(c.to_digit(10).unwrap() as i128))
                .ok_or_else(err)?;
        }
        let mut scale = frac.len() as i64 - exp as i64;
        while scale < 0 {
            mantissa = mantissa.checked_mul(10).ok_or_else(err)?;
            scale += 1;
        }
        if scale > 38 {
            return Err(err());
        }
        Ok(Self {
            mantissa: if neg { -mantissa } else { mantissa },
            scale: scale as u32,
        })
    }
}

impl fmt::Display for ExactDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (m, s) = self.normalized();
        let sign = if m < 0 { "-" } else { "" };
        let digits = m.unsigned_abs().to_string();
        if s == 0 {
            return write!(f, "{sign}{digits}");
        }
        let s = s as usize;
        let padded = format!("{digits:0>width$}", width = s + 1);
        let (int, frac) = padded.split_at(padded.len() - s);
        write!(f, "{sign}{int}.{frac}")
    }
}

impl Serialize for ExactDecimal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoleculeRecord {
    pub name: String,
    /// Well depth in cm⁻¹.
    pub d0_cm1: ExactDecimal,
    /// Range parameter in Å⁻¹.
    pub a_inv_a: ExactDecimal,
    /// Equilibrium separation in Å.
    pub r0_a: ExactDecimal,
    /// Reduced mass in amu.
    pub mu_amu: ExactDecimal,
    pub source: String,
}

impl MoleculeRecord {
    pub fn validate(&self) -> Result<(), MoleculeError> {
        let fields = [
            ("D0_cm1", &self.d0_cm1),
            ("a_invA", &self.a_inv_a),
            ("r0_A", &self.r0_a),
            ("mu", &self.mu_amu),
        ];
        for (field, v) in fields {
            if !v.is_positive() {
                return Err(MoleculeError::Validation {
                    molecule: self.name.clone(),
                    field,
                    value: v.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Potential parameters with the well depth converted to eV.
    pub fn potential<T: Real>(
        &self,
        q: T,
        origin: EnergyOrigin,
        units: &UnitSystem<T>,
    ) -> Result<PotentialParams<T>, MoleculeError> {
        let de = units.dissociation_energy_ev(self.d0_cm1.to_real())?;
        Ok(PotentialParams::new(de, self.a_inv_a.to_real(), self.r0_a.to_real(), q)?.with_origin(origin))
    }

    pub fn mu<T: Real>(&self) -> T {
        self.mu_amu.to_real()
    }
}

/// `(mantissa, scale)` of an exact decimal.
type Digits = (i128, u32);

const BUILTIN: [(&str, Digits, Digits, Digits, Digits); 4] = [
    ("CO", (90540, 0), (22994, 4), (11283, 4), (68606719, 7)),
    ("LiH", (20287, 0), (11280, 4), (15956, 4), (8801221, 7)),
    ("H2", (38266, 0), (19426, 4), (7416, 4), (50391, 5)),
    ("HCl", (37255, 0), (18677, 4), (12746, 4), (9801045, 7)),
];

/// The four built-in molecules, in table order.
pub fn builtins() -> Vec<MoleculeRecord> {
    BUILTIN
        .iter()
        .map(|&(name, d0, a, r0, mu)| MoleculeRecord {
            name: name.to_string(),
            d0_cm1: ExactDecimal::new(d0.0, d0.1),
            a_inv_a: ExactDecimal::new(a.0, a.1),
            r0_a: ExactDecimal::new(r0.0, r0.1),
            mu_amu: ExactDecimal::new(mu.0, mu.1),
            source: "builtin".to_string(),
        })
        .collect()
}

pub fn builtin_names() -> Vec<&'static str> {
    BUILTIN.iter().map(|b| b.0).collect()
}

/// Case-insensitive lookup among the built-ins.
pub fn builtin(name: &str) -> Result<MoleculeRecord, MoleculeError> {
    find(&builtins(), name)
}

/// Case-insensitive lookup in an arbitrary list.
pub fn find(list: &[MoleculeRecord], name: &str) -> Result<MoleculeRecord, MoleculeError> {
    list.iter()
        .find(|m| m.name.eq_ignore_ascii_case(name.trim()))
        .cloned()
        .ok_or_else(|| MoleculeError::Unknown {
            name: name.to_string(),
            available: list.iter().map(|m| m.name.as_str()).collect::<Vec<_>>().join(", "),
        })
}

#[derive(Default)]
struct Block {
    start: usize,
    name: Option<String>,
    d0: Option<ExactDecimal>,
    a: Option<ExactDecimal>,
    r0: Option<ExactDecimal>,
    mu: Option<ExactDecimal>,
    source: Option<String>,
}

impl Block {
    fn is_empty(&self) -> bool {
        self.name.is_none()
            && self.d0.is_none()
            && self.a.is_none()
            && self.r0.is_none()
            && self.mu.is_none()
            && self.source.is_none()
    }

    fn finish(self) -> Result<MoleculeRecord, MoleculeError> {
        let molecule = self.name.clone().unwrap_or_else(|| "<unnamed>".to_string());
        let missing = |field| MoleculeError::Missing {
            molecule: molecule.clone(),
            line: self.start,
            field,
        };
        let rec = MoleculeRecord {
            name: self.name.clone().ok_or_else(|| missing("name"))?,
            d0_cm1: self.d0.ok_or_else(|| missing("D0_cm1"))?,
            a_inv_a: self.a.ok_or_else(|| missing("a_invA"))?,
            r0_a: self.r0.ok_or_else(|| missing("r0_A"))?,
            mu_amu: self.mu.ok_or_else(|| missing("mu_amu"))?,
            source: self.source.clone().unwrap_or_default(),
        };
        rec.validate()?;
        Ok(rec)
    }
}

/// Parses and validates a molecule document. An empty document yields an
/// empty list.
pub fn load_molecules(text: &str) -> Result<Vec<MoleculeRecord>, MoleculeError> {
    let mut out: Vec<MoleculeRecord> = Vec::new();
    let mut block = Block::default();
    let push = |block: Block, out: &mut Vec<MoleculeRecord>| -> Result<(), MoleculeError> {
        if block.is_empty() {
            return Ok(());
        }
        let rec = block.finish()?;
        if out.iter().any(|m| m.name.eq_ignore_ascii_case(&rec.name)) {
            return Err(MoleculeError::Duplicate(rec.name));
        }
        out.push(rec);
        Ok(())
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            if raw.trim().is_empty() {
                push(std::mem::take(&mut block), &mut out)?;
            }
            continue;
        }
        if block.is_empty() {
            block.start = line;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| MoleculeError::Parse {
            line,
            message: format!("expected `key = value`, got {content:?}"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let number = || {
            value.parse::<ExactDecimal>().map_err(|e| MoleculeError::Field {
                line,
                field: key.to_string(),
                message: e.to_string(),
            })
        };
        let slot_taken = |taken: bool| {
            if taken {
                Err(MoleculeError::Field {
                    line,
                    field: key.to_string(),
                    message: "given twice in one block".to_string(),
                })
            } else {
                Ok(())
            }
        };
        match key {
            "name" => {
                slot_taken(block.name.is_some())?;
                if value.is_empty() {
                    return Err(MoleculeError::Field {
                        line,
                        field: key.to_string(),
                        message: "empty name".to_string(),
                    });
                }
                block.name = Some(value.to_string());
            }
            "D0_cm1" => {
                slot_taken(block.d0.is_some())?;
                block.d0 = Some(number()?);
            }
            "a_invA" => {
                slot_taken(block.a.is_some())?;
                block.a = Some(number()?);
            }
            "r0_A" => {
                slot_taken(block.r0.is_some())?;
                block.r0 = Some(number()?);
            }
            "mu_amu" => {
                slot_taken(block.mu.is_some())?;
                block.mu = Some(number()?);
            }
            "source" => {
                slot_taken(block.source.is_some())?;
                block.source = Some(value.to_string());
            }
            other => {
                return Err(MoleculeError::Field {
                    line,
                    field: other.to_string(),
                    message: "unknown field".to_string(),
                })
            }
        }
    }
    push(block, &mut out)?;
    Ok(out)
}

/// Serializes records in the format read by [`load_molecules`].
pub fn to_document(records: &[MoleculeRecord]) -> String {
    records
        .iter()
        .map(|m| {
            let mut s = format!(
                "name = {}\nD0_cm1 = {}\na_invA = {}\nr0_A = {}\nmu_amu = {}\n",
                m.name, m.d0_cm1, m.a_inv_a, m.r0_a, m.mu_amu
            );
            if !m.source.is_empty() {
                s.push_str(&format!("source = {}\n", m.source));
            }
            s
        })
        .collect::<Vec<_>>()
        .join("\n")
}
