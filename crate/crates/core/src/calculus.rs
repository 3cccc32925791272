//! Bookkeeping of classical invariants independent of any diagram.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("Euler characteristic {chi} is not 1 - 2g for a genus g >= 0")]
    InvalidChi { chi: i64 },
    #[error("homological order must be positive")]
    ZeroOrder,
    #[error("invalid sign `{0}`; expected `+` or `-`")]
    InvalidSign(String),
}

/// Sign of a stabilization or push-off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Sign {
    pub fn opposite(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = CalculusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "+" | "+1" | "pos" | "positive" => Ok(Sign::Positive),
            "-" | "-1" | "neg" | "negative" => Ok(Sign::Negative),
            _ => Err(CalculusError::InvalidSign(s.to_string())),
        }
    }
}

/// `(tb, rot)` of a Legendrian knot, optionally with the Euler characteristic
/// of a Seifert surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassicalPair {
    pub tb: i64,
    pub rot: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<i64>,
    #[serde(default = "yes")]
    pub oriented: bool,
}

fn yes() -> bool {
    true
}

impl ClassicalPair {
    pub fn new(tb: i64, rot: i64) -> Self {
        ClassicalPair { tb, rot, chi: None, oriented: true }
    }

    /// Attaches a Seifert surface Euler characteristic, which for a knot must
    /// be odd and at most 1.
    pub fn with_chi(self, chi: i64) -> Result<Self, CalculusError> {
        if chi > 1 || chi.rem_euclid(2) != 1 {
            return Err(CalculusError::InvalidChi { chi });
        }
        Ok(ClassicalPair { chi: Some(chi), ..self })
    }

    pub fn reverse(self) -> Self {
        ClassicalPair { rot: -self.rot, ..self }
    }

    /// `a` positive and `b` negative stabilizations.
    pub fn stabilize(self, a: u64, b: u64) -> Self {
        let (a, b) = (a as i64, b as i64);
        ClassicalPair { tb: self.tb - a - b, rot: self.rot + a - b, ..self }
    }

    /// Self-linking number of the transverse push-off with the given sign.
    pub fn pushoff_sl(self, sign: Sign) -> i64 {
        match sign {
            Sign::Positive => self.tb - self.rot,
            Sign::Negative => self.tb + self.rot,
        }
    }
}

pub fn stabilize_class(p: ClassicalPair, a: u64, b: u64) -> ClassicalPair {
    p.stabilize(a, b)
}

pub fn pushoff_sl(p: ClassicalPair, sign: Sign) -> i64 {
    p.pushoff_sl(sign)
}

/// Rational classical invariants of a rationally null-homologous knot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalData {
    #[serde(with = "rational::ratio_str")]
    pub tb_q: Rational,
    #[serde(with = "rational::ratio_str")]
    pub rot_q: Rational,
    /// Homological order of the knot.
    pub r: u64,
    pub chi: i64,
}

impl RationalData {
    pub fn new(tb_q: Rational, rot_q: Rational, r: u64, chi: i64) -> Result<Self, CalculusError> {
        if r == 0 {
            return Err(CalculusError::ZeroOrder);
        }
        Ok(RationalData { tb_q, rot_q, r, chi })
    }

    /// Lifts integral data to order 1.
    pub fn from_integral(p: ClassicalPair, chi: i64) -> Self {
        RationalData { tb_q: Rational::from_integer(p.tb.into()), rot_q: Rational::from_integer(p.rot.into()), r: 1, chi }
    }

    pub fn reverse(&self) -> Self {
        RationalData { rot_q: -self.rot_q.clone(), ..self.clone() }
    }

    pub fn stabilize(&self, a: u64, b: u64) -> Self {
        let a = Rational::from_integer(a.into());
        let b = Rational::from_integer(b.into());
        RationalData {
            tb_q: &self.tb_q - &a - &b,
            rot_q: &self.rot_q + &a - &b,
            ..self.clone()
        }
    }

    /// Rational self-linking number of the positive transverse push-off.
    pub fn pushoff_sl(&self) -> Rational {
        &self.tb_q - &self.rot_q
    }
}

pub fn stabilize_rational(d: &RationalData, a: u64, b: u64) -> RationalData {
    d.stabilize(a, b)
}

pub fn pushoff_sl_rational(d: &RationalData) -> Rational {
    d.pushoff_sl()
}
