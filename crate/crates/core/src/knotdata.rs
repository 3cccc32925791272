//! Knot families with the classical data used by the certificates.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KnotDataError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unknown example tag `{0}`")]
    UnknownTag(String),
    #[error("malformed record file: {0}")]
    RecordFile(String),
}

/// The contact manifold a record lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ambient {
    /// The standard tight contact structure on `S^3`.
    TightS3,
    /// The overtwisted structure on `S^3` with the given Hopf invariant.
    OvertwistedS3 { hopf: i64 },
}

impl Ambient {
    pub fn is_tight(self) -> bool {
        matches!(self, Ambient::TightS3)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Family {
    Unknot,
    TorusKnot { p: i64, q: i64 },
    NamedExample { tag: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotRecord {
    pub family: Family,
    /// Maximal `tb` in a tight ambient manifold, or the `tb` of the named
    /// representative otherwise. Absent when no single value applies.
    pub max_tb: Option<i64>,
    pub rot_at_max_tb: BTreeSet<i64>,
    pub chi: i64,
    #[serde(default)]
    pub g_s: Option<u64>,
    #[serde(default)]
    pub plus_one_surgery_overtwisted: Option<bool>,
    #[serde(default)]
    pub order_positive: bool,
    pub ambient: Ambient,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl KnotRecord {
    /// Bennequin bound `max_tb + |rot| <= -chi`, checked for each listed
    /// rotation number. `None` when the record has no `max_tb`.
    pub fn satisfies_bennequin(&self) -> Option<bool> {
        let tb = self.max_tb?;
        Some(self.rot_at_max_tb.iter().all(|r| tb + r.abs() <= -self.chi))
    }

    pub fn genus(&self) -> Option<u64> {
        (self.chi <= 1 && (1 - self.chi) % 2 == 0).then(|| ((1 - self.chi) / 2) as u64)
    }
}

fn coprime(p: i64, q: i64) -> bool {
    p.gcd(&q) == 1
}

/// Negative torus knot `T(p, q)` with `-p > q >= 2`, at maximal `tb`.
pub fn negative_torus_record(p: i64, q: i64) -> Result<KnotRecord, KnotDataError> {
    if !(-p > q && q > 1) {
        return Err(KnotDataError::InvalidParams(format!(
            "negative torus knot needs -p > q > 1, got p = {p}, q = {q}"
        )));
    }
    if !coprime(p, q) {
        return Err(KnotDataError::InvalidParams(format!("{p} and {q} are not coprime")));
    }
    Ok(KnotRecord {
        family: Family::TorusKnot { p, q },
        max_tb: Some(p * q),
        rot_at_max_tb: BTreeSet::from([q + p]),
        chi: q - p + p * q,
        g_s: None,
        plus_one_surgery_overtwisted: Some(true),
        order_positive: false,
        ambient: Ambient::TightS3,
        name: None,
    })
}

/// Positive torus knot `T(p, q)` with `p, q >= 2`, at maximal `tb`.
pub fn positive_torus_record(p: i64, q: i64) -> Result<KnotRecord, KnotDataError> {
    if p < 2 || q < 2 {
        return Err(KnotDataError::InvalidParams(format!(
            "positive torus knot needs p, q >= 2, got p = {p}, q = {q}"
        )));
    }
    if !coprime(p, q) {
        return Err(KnotDataError::InvalidParams(format!("{p} and {q} are not coprime")));
    }
    let max_tb = p * q - p - q;
    Ok(KnotRecord {
        family: Family::TorusKnot { p, q },
        max_tb: Some(max_tb),
        rot_at_max_tb: BTreeSet::from([0]),
        chi: p + q - p * q,
        g_s: Some(((p - 1) * (q - 1) / 2) as u64),
        // (+1)-surgery is tight once tb = 2 g_s - 1 exceeds 1.
        plus_one_surgery_overtwisted: (max_tb > 1).then_some(false),
        order_positive: false,
        ambient: Ambient::TightS3,
        name: None,
    })
}

/// Dispatches on the sign of `p`. Either argument order is accepted for
/// positive knots.
pub fn torus_record(p: i64, q: i64) -> Result<KnotRecord, KnotDataError> {
    if p < 0 {
        negative_torus_record(p, q)
    } else if q < 0 {
        negative_torus_record(q, p)
    } else {
        positive_torus_record(p, q)
    }
}

/// `tb` and `rot` of the non-loose unknots with `tb <= n_max`.
pub fn nonloose_unknot_table(n_max: u64) -> Result<Vec<(i64, i64)>, KnotDataError> {
    if n_max == 0 {
        return Err(KnotDataError::InvalidParams("n_max must be at least 1".into()));
    }
    let mut out = Vec::new();
    for n in 1..=n_max as i64 {
        out.push((n, n - 1));
        if n > 1 {
            out.push((n, -(n - 1)));
        }
    }
    Ok(out)
}

pub fn unknot_record() -> KnotRecord {
    KnotRecord {
        family: Family::Unknot,
        max_tb: Some(-1),
        rot_at_max_tb: BTreeSet::from([0]),
        chi: 1,
        g_s: Some(0),
        plus_one_surgery_overtwisted: Some(false),
        order_positive: false,
        ambient: Ambient::TightS3,
        name: None,
    }
}

/// Named examples: `L2q(q)` for the non-loose `(2, q)`-torus knots in the
/// overtwisted `S^3` with Hopf invariant -1, and `LOSS(n)` for the
/// `(2, 2n - 1)`-torus knots with non-vanishing LOSS invariant in the
/// structure with Hopf invariant `1 - 2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExampleTag {
    L2q(i64),
    LossFamily(i64),
}

impl fmt::Display for ExampleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExampleTag::L2q(q) => write!(f, "L2q({q})"),
            ExampleTag::LossFamily(n) => write!(f, "LOSS({n})"),
        }
    }
}

impl FromStr for ExampleTag {
    type Err = KnotDataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || KnotDataError::UnknownTag(s.to_string());
        let s = s.trim();
        let (name, arg) = if let Some(rest) = s.strip_suffix(')') {
            rest.split_once('(').ok_or_else(unknown)?
        } else {
            s.split_once(':').ok_or_else(unknown)?
        };
        let arg: i64 = arg.trim().parse().map_err(|_| unknown())?;
        match name.trim() {
            "L2q" | "l2q" => Ok(ExampleTag::L2q(arg)),
            "LOSS" | "LOSSfamily" | "loss" => Ok(ExampleTag::LossFamily(arg)),
            _ => Err(unknown()),
        }
    }
}

pub fn named_example(tag: ExampleTag) -> Result<KnotRecord, KnotDataError> {
    match tag {
        ExampleTag::L2q(q) => {
            if q < 3 || q % 2 == 0 {
                return Err(KnotDataError::InvalidParams(format!("L2q needs odd q >= 3, got {q}")));
            }
            Ok(KnotRecord {
                family: Family::NamedExample { tag: tag.to_string() },
                max_tb: Some(q),
                rot_at_max_tb: BTreeSet::from([0]),
                chi: 2 - q,
                g_s: None,
                plus_one_surgery_overtwisted: None,
                order_positive: false,
                ambient: Ambient::OvertwistedS3 { hopf: -1 },
                name: None,
            })
        }
        ExampleTag::LossFamily(n) => {
            if n < 2 {
                return Err(KnotDataError::InvalidParams(format!("LOSS family needs n >= 2, got {n}")));
            }
            Ok(KnotRecord {
                family: Family::NamedExample { tag: tag.to_string() },
                // tb of these knots is unbounded below; no single value.
                max_tb: None,
                rot_at_max_tb: BTreeSet::new(),
                chi: 3 - 2 * n,
                g_s: None,
                plus_one_surgery_overtwisted: None,
                order_positive: true,
                ambient: Ambient::OvertwistedS3 { hopf: 1 - 2 * n },
                name: None,
            })
        }
    }
}

pub fn named_example_str(tag: &str) -> Result<KnotRecord, KnotDataError> {
    named_example(tag.parse()?)
}

/// User-supplied records, looked up by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RecordBook {
    records: Vec<KnotRecord>,
}

impl RecordBook {
    pub fn from_json(text: &str) -> Result<Self, KnotDataError> {
        let records: Vec<KnotRecord> =
            serde_json::from_str(text).map_err(|e| KnotDataError::RecordFile(e.to_string()))?;
        for r in &records {
            if r.name.is_none() {
                return Err(KnotDataError::RecordFile("every record needs a `name`".into()));
            }
            if r.chi > 1 {
                return Err(KnotDataError::RecordFile(format!("record chi {} exceeds 1", r.chi)));
            }
        }
        Ok(RecordBook { records })
    }

    pub fn get(&self, name: &str) -> Option<&KnotRecord> {
        self.records.iter().find(|r| r.name.as_deref() == Some(name))
    }

    pub fn records(&self) -> &[KnotRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_torus_examples() {
        let r = negative_torus_record(-5, 3).unwrap();
        assert_eq!(r.max_tb, Some(-15));
        assert!(r.rot_at_max_tb.contains(&-2));
        assert_eq!(r.chi, -7);
        assert_eq!(r.genus(), Some(4));
        assert_eq!(r.plus_one_surgery_overtwisted, Some(true));

        let r = negative_torus_record(-3, 2).unwrap();
        assert_eq!((r.max_tb, r.chi), (Some(-6), -1));
        assert!(r.rot_at_max_tb.contains(&-1));

        assert!(matches!(negative_torus_record(-4, 2), Err(KnotDataError::InvalidParams(_))));
        assert!(matches!(negative_torus_record(-3, 1), Err(KnotDataError::InvalidParams(_))));
        assert!(matches!(negative_torus_record(-3, 4), Err(KnotDataError::InvalidParams(_))));
    }

    #[test]
    fn positive_torus_examples() {
        let r = positive_torus_record(2, 3).unwrap();
        assert_eq!((r.max_tb, r.g_s, r.chi), (Some(1), Some(1), -1));
        let r = positive_torus_record(3, 5).unwrap();
        assert_eq!((r.max_tb, r.g_s, r.chi), (Some(7), Some(4), -7));
        assert_eq!(r.plus_one_surgery_overtwisted, Some(false));
        assert!(positive_torus_record(1, 5).is_err());
        assert!(positive_torus_record(4, 6).is_err());
    }

    #[test]
    fn torus_dispatch() {
        assert_eq!(torus_record(3, -5).unwrap(), negative_torus_record(-5, 3).unwrap());
        assert_eq!(torus_record(2, 3).unwrap(), positive_torus_record(2, 3).unwrap());
    }

    #[test]
    fn unknot_table() {
        assert_eq!(nonloose_unknot_table(1).unwrap(), vec![(1, 0)]);
        assert_eq!(nonloose_unknot_table(2).unwrap(), vec![(1, 0), (2, 1), (2, -1)]);
        assert!(nonloose_unknot_table(0).is_err());
    }

    #[test]
    fn named_examples() {
        let r = named_example("L2q(3)".parse().unwrap()).unwrap();
        assert_eq!((r.max_tb, r.chi), (Some(3), -1));
        assert_eq!(r.rot_at_max_tb, BTreeSet::from([0]));
        assert_eq!(r.ambient, Ambient::OvertwistedS3 { hopf: -1 });

        let r = named_example_str("LOSS(2)").unwrap();
        assert_eq!(r.family, Family::NamedExample { tag: "LOSS(2)".into() });
        assert!(r.order_positive);
        assert_eq!(r.chi, -1);
        assert_eq!(r.ambient, Ambient::OvertwistedS3 { hopf: -3 });

        assert_eq!(named_example_str("Foo(1)"), Err(KnotDataError::UnknownTag("Foo(1)".into())));
        assert_eq!(named_example_str("L2q"), Err(KnotDataError::UnknownTag("L2q".into())));
        assert!(named_example_str("L2q:4").is_err());
    }

    #[test]
    fn record_book() {
        let text = r#"[{"name":"fig8","family":{"type":"named_example","tag":"fig8"},
            "max_tb":-3,"rot_at_max_tb":[0],"chi":-1,"ambient":{"kind":"tight_s3"}}]"#;
        let book = RecordBook::from_json(text).unwrap();
        assert_eq!(book.get("fig8").unwrap().max_tb, Some(-3));
        assert_eq!(book.get("fig8").unwrap().satisfies_bennequin(), Some(true));
        assert!(RecordBook::from_json("[{}]").is_err());
    }
}
