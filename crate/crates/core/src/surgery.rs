//! Contact (±1)-surgery diagrams and the rational invariants of a passive
//! knot drawn in them.
//!
//! For a diagram with surgered components `L_1..L_n` and a passive component
//! `K`, the linking matrix `M` has the topological surgery coefficients
//! `tb_i ± 1` on the diagonal and pairwise linking numbers off it. Bordering
//! `M` by the linking vector of `K` (corner 0) gives the extended matrix `M0`,
//! and
//!
//! ```text
//! tb_Q(K)  = tb(K) + det M0 / det M
//! rot_Q(K) = rot(K) - <rot, M^-1 lk>
//! ```
//!
//! The homological order of `K` is the order of `lk` in `Z^n / M Z^n`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::RationalData;
use crate::linalg::{homological_order, IntMatrix, LinalgError, Order};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("duplicate component id `{0}`")]
    DuplicateId(String),
    #[error("unknown component id `{0}`")]
    UnknownId(String),
    #[error("expected exactly one passive component, found {0}")]
    PassiveCount(usize),
    #[error("distinguished component `{0}` is not the passive one")]
    DistinguishedNotPassive(String),
    #[error("linking number of `{0}` with itself is not allowed")]
    SelfLinking(String),
    #[error("conflicting linking numbers for `{0}` and `{1}`")]
    ConflictingLinking(String, String),
    #[error("unsupported contact coefficient `{0}`; only +1, -1 and passive are allowed")]
    UnsupportedCoefficient(String),
    #[error("linking matrix is singular")]
    SingularMatrix,
    #[error("passive component has infinite order in homology")]
    InfiniteOrder,
    #[error("tb = -1: (+1)-surgery has meridional slope")]
    MeridionalSlope,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Plus,
    Minus,
    Passive,
}

impl Coefficient {
    pub fn as_str(self) -> &'static str {
        match self {
            Coefficient::Plus => "+1",
            Coefficient::Minus => "-1",
            Coefficient::Passive => "passive",
        }
    }

    fn shift(self) -> i64 {
        match self {
            Coefficient::Plus => 1,
            Coefficient::Minus => -1,
            Coefficient::Passive => 0,
        }
    }
}

impl std::str::FromStr for Coefficient {
    type Err = SurgeryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "+1" | "1" => Ok(Coefficient::Plus),
            "-1" => Ok(Coefficient::Minus),
            "passive" => Ok(Coefficient::Passive),
            _ => Err(SurgeryError::UnsupportedCoefficient(s.to_string())),
        }
    }
}

impl Serialize for Coefficient {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Coefficient {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryComponent {
    pub id: String,
    pub tb: i64,
    pub rot: i64,
    pub coeff: Coefficient,
}

impl SurgeryComponent {
    pub fn new(id: impl Into<String>, tb: i64, rot: i64, coeff: Coefficient) -> Self {
        SurgeryComponent { id: id.into(), tb, rot, coeff }
    }
}

/// Orientation of the distinguished component relative to the diagram data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    AsGiven,
    Reversed,
}

/// On-disk form: `{"components": [...], "lk": [["a", "b", n], ...], "distinguished": "k"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurgeryFile {
    pub components: Vec<SurgeryComponent>,
    #[serde(default)]
    pub lk: Vec<(String, String, i64)>,
    pub distinguished: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryDiagram {
    components: Vec<SurgeryComponent>,
    /// Symmetric; the diagonal is unused and kept at zero.
    lk: IntMatrix,
    distinguished: usize,
}

impl SurgeryDiagram {
    pub fn new(
        components: Vec<SurgeryComponent>,
        links: &[(String, String, i64)],
        distinguished: &str,
    ) -> Result<Self, SurgeryError> {
        let mut index = HashMap::new();
        for (i, c) in components.iter().enumerate() {
            if index.insert(c.id.clone(), i).is_some() {
                return Err(SurgeryError::DuplicateId(c.id.clone()));
            }
        }
        let passive: Vec<usize> = components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.coeff == Coefficient::Passive)
            .map(|(i, _)| i)
            .collect();
        if passive.len() != 1 {
            return Err(SurgeryError::PassiveCount(passive.len()));
        }
        let d = *index
            .get(distinguished)
            .ok_or_else(|| SurgeryError::UnknownId(distinguished.to_string()))?;
        if d != passive[0] {
            return Err(SurgeryError::DistinguishedNotPassive(distinguished.to_string()));
        }

        let n = components.len();
        let mut lk = IntMatrix::zeros(n, n);
        let mut seen: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (a, b, v) in links {
            let i = *index.get(a).ok_or_else(|| SurgeryError::UnknownId(a.clone()))?;
            let j = *index.get(b).ok_or_else(|| SurgeryError::UnknownId(b.clone()))?;
            if i == j {
                return Err(SurgeryError::SelfLinking(a.clone()));
            }
            let key = (i.min(j), i.max(j));
            if let Some(&old) = seen.get(&key) {
                if old != *v {
                    return Err(SurgeryError::ConflictingLinking(a.clone(), b.clone()));
                }
            }
            seen.insert(key, *v);
            lk[(i, j)] = *v;
            lk[(j, i)] = *v;
        }
        Ok(SurgeryDiagram { components, lk, distinguished: d })
    }

    pub fn from_file(file: SurgeryFile) -> Result<Self, SurgeryError> {
        SurgeryDiagram::new(file.components, &file.lk, &file.distinguished)
    }

    pub fn from_json(text: &str) -> Result<Self, SurgeryDiagramParseError> {
        let file: SurgeryFile = serde_json::from_str(text)?;
        Ok(SurgeryDiagram::from_file(file)?)
    }

    pub fn to_file(&self) -> SurgeryFile {
        let mut lk = Vec::new();
        for i in 0..self.components.len() {
            for j in i + 1..self.components.len() {
                if self.lk[(i, j)] != 0 {
                    lk.push((self.components[i].id.clone(), self.components[j].id.clone(), self.lk[(i, j)]));
                }
            }
        }
        SurgeryFile {
            components: self.components.clone(),
            lk,
            distinguished: self.components[self.distinguished].id.clone(),
        }
    }

    pub fn components(&self) -> &[SurgeryComponent] {
        &self.components
    }

    pub fn distinguished(&self) -> &SurgeryComponent {
        &self.components[self.distinguished]
    }

    pub fn linking(&self, a: &str, b: &str) -> Option<i64> {
        let i = self.components.iter().position(|c| c.id == a)?;
        let j = self.components.iter().position(|c| c.id == b)?;
        Some(if i == j { 0 } else { self.lk[(i, j)] })
    }

    fn surgered(&self) -> Vec<usize> {
        (0..self.components.len()).filter(|&i| i != self.distinguished).collect()
    }

    /// Linking numbers of the distinguished component with each surgered one.
    pub fn passive_linking(&self) -> Vec<i64> {
        self.surgered().into_iter().map(|i| self.lk[(self.distinguished, i)]).collect()
    }

    pub fn surgered_rotations(&self) -> Vec<i64> {
        self.surgered().into_iter().map(|i| self.components[i].rot).collect()
    }

    /// Topological surgery coefficients on the diagonal, linking numbers off it.
    pub fn linking_matrix(&self) -> IntMatrix {
        let idx = self.surgered();
        let mut m = IntMatrix::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m[(a, b)] = if i == j {
                    self.components[i].tb + self.components[i].coeff.shift()
                } else {
                    self.lk[(i, j)]
                };
            }
        }
        m
    }

    /// The linking matrix bordered by a first row and column holding the
    /// passive component's linking numbers, with 0 in the corner.
    pub fn extended_matrix(&self) -> IntMatrix {
        let m = self.linking_matrix();
        let lk = self.passive_linking();
        let n = m.rows();
        let mut m0 = IntMatrix::zeros(n + 1, n + 1);
        for i in 0..n {
            m0[(0, i + 1)] = lk[i];
            m0[(i + 1, 0)] = lk[i];
            for j in 0..n {
                m0[(i + 1, j + 1)] = m[(i, j)];
            }
        }
        m0
    }

    pub fn homological_order(&self) -> Result<Order, SurgeryError> {
        Ok(homological_order(&self.linking_matrix(), &self.passive_linking())?)
    }

    /// Rational `tb`/`rot` and homological order of the distinguished
    /// component; `chi` is attached by the caller.
    pub fn rational_invariants(&self, orientation: Orientation, chi: i64) -> Result<RationalData, SurgeryError> {
        let m = self.linking_matrix();
        let det_m = m.det()?;
        if det_m == 0 {
            return Err(SurgeryError::SingularMatrix);
        }
        let det_m0 = self.extended_matrix().det()?;
        let lk = self.passive_linking();
        let r = match homological_order(&m, &lk)? {
            Order::Finite(r) => r,
            Order::Infinite => return Err(SurgeryError::InfiniteOrder),
        };
        let inv = m.invert()?;
        let solved = inv.mul_int_vec(&lk);
        let pairing = self
            .surgered_rotations()
            .iter()
            .zip(&solved)
            .fold(Rational::zero(), |acc, (&rot, x)| acc + int(rot) * x);

        let k = self.distinguished();
        let tb_q = int(k.tb) + Rational::new(det_m0.into(), det_m.into());
        let mut rot_q = int(k.rot) - pairing;
        if orientation == Orientation::Reversed {
            rot_q = -rot_q;
        }
        Ok(RationalData { tb_q, rot_q, r, chi })
    }
}

#[derive(Debug, Error)]
pub enum SurgeryDiagramParseError {
    #[error("malformed surgery diagram: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Diagram(#[from] SurgeryError),
}

/// The two-component diagram for the surgery dual of `L`: `(+1)`-surgery on
/// `L` and a Legendrian push-off of `L`, stabilized `a` times positively and
/// `b` times negatively, as the passive knot.
pub fn dual_diagram(tb: i64, rot: i64, a: u64, b: u64) -> SurgeryDiagram {
    let (a, b) = (a as i64, b as i64);
    SurgeryDiagram::new(
        vec![
            SurgeryComponent::new("L", tb, rot, Coefficient::Plus),
            SurgeryComponent::new("dual", tb - a - b, rot + a - b, Coefficient::Passive),
        ],
        &[("L".into(), "dual".into(), tb)],
        "dual",
    )
    .expect("fixed two-component diagram is well formed")
}

/// Rational invariants of an `(a, b)`-stabilized surgery dual of `L`.
pub fn dual_invariants(tb: i64, rot: i64, a: u64, b: u64, chi: i64) -> Result<RationalData, SurgeryError> {
    if tb == -1 {
        return Err(SurgeryError::MeridionalSlope);
    }
    dual_diagram(tb, rot, a, b).rational_invariants(Orientation::AsGiven, chi)
}
