//! Decision procedures producing certificates for looseness, depth, tension
//! and order.
//!
//! The only looseness oracle is a violated Bennequin-type inequality. Every
//! other hypothesis that cannot be decided here (tightness of a complement,
//! overtwistedness of a surgery, non-vanishing of a Floer class) enters as an
//! explicit evidence flag and is echoed in the certificate's `assumptions`.

mod bounds;
mod rules;

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

pub use bounds::{Bounds, Interval, Lower, Upper};
pub use rules::*;

use crate::surgery::SurgeryError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("Euler characteristic required")]
    MissingChi,
    #[error("record ambient {0} is not the standard tight structure")]
    AmbientMismatch(String),
    #[error("tb = {tb} exceeds the maximal tb {max_tb} of the record")]
    ExceedsMaxTb { tb: i64, max_tb: i64 },
    #[error("record has no maximal tb")]
    MissingMaxTb,
    #[error("order bounds need a loosening stabilization")]
    NotLoosened,
    #[error("contradictory evidence: {0}")]
    ContradictoryEvidence(String),
    #[error("incompatible relation: {0}")]
    IncompatibleRelation(String),
    #[error("inconsistent bounds: {}", .0.join("; "))]
    Inconsistent(Vec<String>),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
}

/// Which kind of knot a certificate talks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Subject {
    #[default]
    Legendrian,
    Transverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Both,
    Positive,
    Negative,
}

impl std::str::FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "both" => Ok(Side::Both),
            "positive" | "positive_only" | "+" => Ok(Side::Positive),
            "negative" | "negative_only" | "-" => Ok(Side::Negative),
            _ => Err(format!("unknown side `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    LooseCertified,
    NoObstruction,
    DepthOne,
    DepthAtLeastTwo,
    DepthExactlyTwo,
    DepthAtMost { k: u64 },
    /// `a` positive and `b` negative stabilizations loosen the knot.
    TensionUpperBound { a: u64, b: u64 },
    /// Exact signed tension on one side.
    SignedTensionBound { side: Side, value: u64 },
    TensionExactlyOne,
    /// `t = 1` together with `d >= 2`.
    TensionBelowDepth,
    OrderBounds { o: u64, o_rev: u64 },
    OrderZero,
    Inconclusive { failed: Vec<String> },
}

impl Verdict {
    pub fn inconclusive(failed: impl Into<String>) -> Verdict {
        Verdict::Inconclusive { failed: vec![failed.into()] }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::LooseCertified => "loose_certified",
            Verdict::NoObstruction => "no_obstruction",
            Verdict::DepthOne => "depth_one",
            Verdict::DepthAtLeastTwo => "depth_at_least_two",
            Verdict::DepthExactlyTwo => "depth_exactly_two",
            Verdict::DepthAtMost { .. } => "depth_at_most",
            Verdict::TensionUpperBound { .. } => "tension_upper_bound",
            Verdict::SignedTensionBound { .. } => "signed_tension_bound",
            Verdict::TensionExactlyOne => "tension_exactly_one",
            Verdict::TensionBelowDepth => "tension_below_depth",
            Verdict::OrderBounds { .. } => "order_bounds",
            Verdict::OrderZero => "order_zero",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// Named inference rules. The tag is stable; the statement is the fact the
/// rule applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Bennequin,
    RationalBennequin,
    SelfLinking,
    StabilizationSearch,
    UnknotNonpositiveTb,
    UnknotClassification,
    UnknotDepthTension,
    UnknotOrder,
    OvertwistedComplement,
    DualDepthOne,
    MaxTbNonStabilization,
    DualTensionOne,
    DepthTwo,
    PositiveSurgeryTight,
    MeridionalSurgeryDepthOne,
    StabilizationOrder,
    OrderBelowTension,
    TensionBelowDepth,
    TbLowerBoundOrder,
    PositiveOrderNegativeTension,
    SignedTension,
    PushoffLoose,
    TransverseTension,
    TransverseUnknot,
    NegativeHopfBinding,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::Bennequin => "bennequin",
            Rule::RationalBennequin => "rational_bennequin",
            Rule::SelfLinking => "self_linking",
            Rule::StabilizationSearch => "stabilization_search",
            Rule::UnknotNonpositiveTb => "unknot_nonpositive_tb",
            Rule::UnknotClassification => "unknot_classification",
            Rule::UnknotDepthTension => "unknot_depth_tension",
            Rule::UnknotOrder => "unknot_order",
            Rule::OvertwistedComplement => "overtwisted_complement",
            Rule::DualDepthOne => "dual_depth_one",
            Rule::MaxTbNonStabilization => "max_tb_non_stabilization",
            Rule::DualTensionOne => "dual_tension_one",
            Rule::DepthTwo => "depth_two",
            Rule::PositiveSurgeryTight => "positive_surgery_tight",
            Rule::MeridionalSurgeryDepthOne => "meridional_surgery_depth_one",
            Rule::StabilizationOrder => "stabilization_order",
            Rule::OrderBelowTension => "order_below_tension",
            Rule::TensionBelowDepth => "tension_below_depth",
            Rule::TbLowerBoundOrder => "tb_lower_bound_order",
            Rule::PositiveOrderNegativeTension => "positive_order_negative_tension",
            Rule::SignedTension => "signed_tension",
            Rule::PushoffLoose => "pushoff_loose",
            Rule::TransverseTension => "transverse_tension",
            Rule::TransverseUnknot => "transverse_unknot",
            Rule::NegativeHopfBinding => "negative_hopf_binding",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Rule::Bennequin => "non-loose null-homologous Legendrian knots satisfy -|tb| + |rot| <= -chi",
            Rule::RationalBennequin => {
                "non-loose rationally null-homologous Legendrian knots of order r satisfy -|tb_Q| + |rot_Q| <= -chi/r"
            }
            Rule::SelfLinking => "non-loose rationally null-homologous transverse knots of order r satisfy sl_Q <= -chi/r",
            Rule::StabilizationSearch => "a stabilization violating the Bennequin bound is loose, bounding tension above",
            Rule::UnknotNonpositiveTb => "a Legendrian unknot with tb <= 0 in an overtwisted manifold is loose",
            Rule::UnknotClassification => "non-loose Legendrian unknots have (tb, rot) = (n, ±(n-1)) with n > 0",
            Rule::UnknotDepthTension => "non-loose Legendrian unknots have depth 1 and tension 1",
            Rule::UnknotOrder => "every Legendrian unknot in an overtwisted manifold has order 0",
            Rule::OvertwistedComplement => "a knot with overtwisted complement is loose",
            Rule::DualDepthOne => "the (+1)-surgery dual has depth 1 exactly when the surgered knot is a stabilization",
            Rule::MaxTbNonStabilization => "a knot realizing the maximal tb of its type is not a stabilization",
            Rule::DualTensionOne => {
                "tb < -1, rot < 0 and tb + rot + 2 < chi give tension 1 for the dual of an overtwisted (+1)-surgery"
            }
            Rule::DepthTwo => {
                "the dual of a non-stabilized knot has depth 2 given a punctured torus or Klein bottle with the twisting conditions"
            }
            Rule::PositiveSurgeryTight => "tb = 2 g_s - 1 > 1 makes (+1)-surgery tight",
            Rule::MeridionalSurgeryDepthOne => {
                "after (+1)-surgery on a meridian and its push-off, the image knot has depth 1 when the other side is tight"
            }
            Rule::StabilizationOrder => "if L_{+a,-b} is loose then o(L) <= a and o(-L) <= b",
            Rule::OrderBelowTension => "order is at most tension for null-homologous knots",
            Rule::TensionBelowDepth => "order <= tension <= depth",
            Rule::TbLowerBoundOrder => {
                "a lower bound on tb of non-loose representatives forces order 0 and finite signed tensions"
            }
            Rule::PositiveOrderNegativeTension => "positive order forces infinite negative tension",
            Rule::SignedTension => {
                "the dual of a positively stabilized push-off has negative tension 1, and positive tension > 1 when the contact invariant survives"
            }
            Rule::PushoffLoose => "the transverse push-off is loose exactly when the negative tension is finite",
            Rule::TransverseTension => "transverse tension is at most the number of positive stabilizations in a loosening",
            Rule::TransverseUnknot => "a transverse unknot in an overtwisted manifold is loose",
            Rule::NegativeHopfBinding => "the binding of a negatively Hopf-stabilized open book has depth and tension 1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reason {
    pub rule: Rule,
    pub inputs: Value,
}

impl Reason {
    pub fn new(rule: Rule, inputs: Value) -> Self {
        Reason { rule, inputs }
    }
}

impl Serialize for Reason {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Reason", 3)?;
        st.serialize_field("rule", self.rule.tag())?;
        st.serialize_field("citation", self.rule.statement())?;
        st.serialize_field("inputs", &self.inputs)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub subject: Subject,
    pub verdict: Verdict,
    pub reasons: Vec<Reason>,
    /// Evidence flags supplied by the caller, verbatim.
    pub assumptions: BTreeMap<String, bool>,
    pub bounds: Bounds,
    /// Bounds that hold under the additional hypothesis that the knot is
    /// non-loose.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub if_non_loose: Option<Bounds>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Certificate {
    pub fn new(verdict: Verdict, reason: Reason, bounds: Bounds) -> Self {
        Certificate {
            subject: Subject::Legendrian,
            verdict,
            reasons: vec![reason],
            assumptions: BTreeMap::new(),
            bounds,
            if_non_loose: None,
            witness: None,
        }
    }

    pub fn assume(mut self, flag: &str, value: bool) -> Self {
        self.assumptions.insert(flag.to_string(), value);
        self
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn with_subject(mut self, subject: Subject) -> Self {
        self.subject = subject;
        self
    }

    pub fn is_loose(&self) -> bool {
        self.verdict == Verdict::LooseCertified
    }

    /// Conjunction of two certificates about the same knot.
    pub fn merge(self, other: Certificate, verdict: Verdict) -> Result<Certificate, CertifyError> {
        if self.subject != other.subject {
            return Err(CertifyError::IncompatibleRelation("certificates about different kinds of knots".into()));
        }
        let mut assumptions = self.assumptions;
        for (k, v) in other.assumptions {
            if let Some(old) = assumptions.insert(k.clone(), v) {
                if old != v {
                    return Err(CertifyError::ContradictoryEvidence(format!("flag `{k}` given both ways")));
                }
            }
        }
        let mut reasons = self.reasons;
        reasons.extend(other.reasons);
        let witness = match (self.witness, other.witness) {
            (Some(a), Some(b)) => Some(Value::Array(vec![a, b])),
            (a, b) => a.or(b),
        };
        let if_non_loose = match (self.if_non_loose, other.if_non_loose) {
            (Some(a), Some(b)) => Some(a.intersect(&b)),
            (a, b) => a.or(b),
        };
        let merged = Certificate {
            subject: self.subject,
            verdict,
            reasons,
            assumptions,
            bounds: self.bounds.intersect(&other.bounds),
            if_non_loose,
            witness,
        };
        let bad = merged.violations();
        if !bad.is_empty() {
            return Err(CertifyError::Inconsistent(bad));
        }
        Ok(merged)
    }

    /// Consistency problems: bound chain violations and verdicts that
    /// contradict the bounds.
    pub fn violations(&self) -> Vec<String> {
        let mut out = self.bounds.violations();
        if let Some(b) = &self.if_non_loose {
            out.extend(b.violations().into_iter().map(|v| format!("if non-loose: {v}")));
        }
        let d = self.bounds.depth;
        match &self.verdict {
            Verdict::LooseCertified if !self.bounds.is_loose() => {
                out.push("loose verdict without vanishing bounds".into())
            }
            Verdict::DepthOne if d.exact() != Some(1) => out.push(format!("depth-one verdict with d = {d}")),
            Verdict::DepthAtLeastTwo if d.lower().is_none_or(|l| l < 2) => {
                out.push(format!("depth >= 2 verdict with d = {d}"))
            }
            _ => {}
        }
        if self.reasons.is_empty() {
            out.push("certificate without reasons".into());
        }
        out
    }
}

/// Checks every certificate of a bundle; returns `(index, problem)` pairs.
pub fn check_bundle(certs: &[Certificate]) -> Vec<(usize, String)> {
    certs
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.violations().into_iter().map(move |v| (i, v)))
        .collect()
}
