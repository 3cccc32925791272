use num_traits::Signed;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{Bounds, Certificate, CertifyError, Interval, Reason, Rule, Side, Subject, Verdict};
use crate::calculus::{ClassicalPair, RationalData};
use crate::knotdata::{negative_torus_record, KnotRecord};
use crate::rational::{self, Rational};
use crate::surgery::dual_invariants;

pub const DEFAULT_MAX_N: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Holds,
    Violated,
}

impl Check {
    fn from_violation(violated: bool) -> Check {
        if violated {
            Check::Violated
        } else {
            Check::Holds
        }
    }

    pub fn is_violated(self) -> bool {
        self == Check::Violated
    }
}

/// `-|tb| + |rot| <= -chi`.
pub fn bennequin_null(p: &ClassicalPair) -> Result<Check, CertifyError> {
    let chi = p.chi.ok_or(CertifyError::MissingChi)?;
    Ok(Check::from_violation(-p.tb.abs() + p.rot.abs() > -chi))
}

/// `-|tb_Q| + |rot_Q| <= -chi / r`, compared exactly.
pub fn bennequin_rational(d: &RationalData) -> Check {
    let lhs = -d.tb_q.abs() + d.rot_q.abs();
    let rhs = rational::ratio(-d.chi, d.r as i64);
    Check::from_violation(lhs > rhs)
}

/// `sl_Q <= -chi / r` for a transverse knot.
pub fn transverse_bennequin(sl_q: &Rational, chi: i64, r: u64) -> Check {
    Check::from_violation(*sl_q > rational::ratio(-chi, r as i64))
}

pub fn certify_bennequin(p: &ClassicalPair) -> Result<Certificate, CertifyError> {
    let check = bennequin_null(p)?;
    let reason = Reason::new(Rule::Bennequin, json!({ "tb": p.tb, "rot": p.rot, "chi": p.chi, "check": check }));
    Ok(match check {
        Check::Violated => Certificate::new(Verdict::LooseCertified, reason, Bounds::loose()),
        Check::Holds => Certificate::new(Verdict::NoObstruction, reason, Bounds::default()),
    })
}

pub fn certify_bennequin_rational(d: &RationalData) -> Certificate {
    let check = bennequin_rational(d);
    let reason = Reason::new(Rule::RationalBennequin, json!({ "data": d, "check": check }));
    match check {
        Check::Violated => Certificate::new(Verdict::LooseCertified, reason, Bounds::loose()),
        Check::Holds => Certificate::new(Verdict::NoObstruction, reason, Bounds::default()),
    }
}

pub fn certify_transverse_bennequin(sl_q: &Rational, chi: i64, r: u64) -> Certificate {
    let check = transverse_bennequin(sl_q, chi, r);
    let reason = Reason::new(
        Rule::SelfLinking,
        json!({ "sl_q": rational::format(sl_q), "chi": chi, "r": r, "check": check }),
    );
    let cert = match check {
        Check::Violated => Certificate::new(Verdict::LooseCertified, reason, Bounds::loose()),
        Check::Holds => Certificate::new(Verdict::NoObstruction, reason, Bounds::default()),
    };
    cert.with_subject(Subject::Transverse)
}

/// Classification of a Legendrian unknot in an overtwisted `S^3`.
pub fn unknot_verdict(p: &ClassicalPair) -> Certificate {
    let inputs = json!({ "tb": p.tb, "rot": p.rot });
    if p.tb <= 0 {
        return Certificate::new(Verdict::LooseCertified, Reason::new(Rule::UnknotNonpositiveTb, inputs), Bounds::loose());
    }
    if p.rot.abs() != p.tb - 1 {
        return Certificate::new(
            Verdict::LooseCertified,
            Reason::new(Rule::UnknotClassification, inputs),
            Bounds::loose(),
        );
    }
    let zero = Interval::exactly(0);
    let order = Bounds { order: zero, order_pos: zero, order_neg: zero, ..Bounds::default() };
    let mut cert = Certificate::new(Verdict::NoObstruction, Reason::new(Rule::UnknotClassification, inputs.clone()), order);
    cert.reasons.push(Reason::new(Rule::UnknotDepthTension, inputs.clone()));
    cert.reasons.push(Reason::new(Rule::UnknotOrder, inputs));
    let one = Interval::exactly(1);
    cert.if_non_loose = Some(Bounds { depth: one, tension: one, ..order });
    cert
}

/// Input to [`tension_upper_bound`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TensionQuery {
    Classical(ClassicalPair),
    Rational(RationalData),
}

impl TensionQuery {
    fn data(&self) -> Result<RationalData, CertifyError> {
        match self {
            TensionQuery::Classical(p) => Ok(RationalData::from_integral(*p, p.chi.ok_or(CertifyError::MissingChi)?)),
            TensionQuery::Rational(d) => Ok(d.clone()),
        }
    }

    fn rule(&self) -> Rule {
        match self {
            TensionQuery::Classical(_) => Rule::Bennequin,
            TensionQuery::Rational(_) => Rule::RationalBennequin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensionWitness {
    pub bound: u64,
    pub a: u64,
    pub b: u64,
}

/// Splits of `n` into `(a, b)` allowed by `side`, in search order.
///
/// Among splits of the same total, larger `a` comes first so that the
/// positive-stabilization witness is reported when both signs work.
fn splits(n: u64, side: Side) -> Vec<(u64, u64)> {
    match side {
        Side::Positive => vec![(n, 0)],
        Side::Negative => vec![(0, n)],
        Side::Both => (0..=n).rev().map(|a| (a, n - a)).collect(),
    }
}

/// Fewest stabilizations, up to `max_n`, after which the Bennequin-type bound
/// fails. The result bounds the tension from above.
pub fn tension_upper_bound(
    query: &TensionQuery,
    max_n: u64,
    side: Side,
) -> Result<Option<TensionWitness>, CertifyError> {
    let data = query.data()?;
    for n in 0..=max_n {
        for (a, b) in splits(n, side) {
            if bennequin_rational(&data.stabilize(a, b)).is_violated() {
                return Ok(Some(TensionWitness { bound: n, a, b }));
            }
        }
    }
    Ok(None)
}

pub fn tension_certificate(query: &TensionQuery, max_n: u64, side: Side) -> Result<Certificate, CertifyError> {
    let data = query.data()?;
    let witness = tension_upper_bound(query, max_n, side)?;
    let inputs = json!({ "data": data, "max_n": max_n, "side": side });
    let Some(w) = witness else {
        let reason = Reason::new(Rule::StabilizationSearch, inputs);
        return Ok(Certificate::new(
            Verdict::inconclusive(format!("no violation within max_n = {max_n}")),
            reason,
            Bounds::default(),
        ));
    };
    let mut cert = if w.bound == 0 {
        Certificate::new(Verdict::LooseCertified, Reason::new(query.rule(), inputs), Bounds::loose())
    } else {
        let mut bounds = Bounds { tension: Interval::at_most(w.bound), ..Bounds::default() };
        if w.b == 0 {
            bounds.t_plus = Interval::at_most(w.a);
        }
        if w.a == 0 {
            bounds.t_minus = Interval::at_most(w.b);
        }
        if matches!(query, TensionQuery::Classical(_)) {
            bounds.order_pos = Interval::at_most(w.a);
            bounds.order_neg = Interval::at_most(w.b);
            bounds.order = Interval::at_most(w.bound);
        }
        let mut cert =
            Certificate::new(Verdict::TensionUpperBound { a: w.a, b: w.b }, Reason::new(Rule::StabilizationSearch, inputs), bounds);
        cert.reasons.push(Reason::new(query.rule(), json!({ "stabilized": data.stabilize(w.a, w.b) })));
        if matches!(query, TensionQuery::Classical(_)) {
            cert.reasons.push(Reason::new(Rule::StabilizationOrder, json!({ "a": w.a, "b": w.b })));
        }
        cert
    };
    cert.witness = Some(json!(w));
    Ok(cert)
}

/// Depth of the (+1)-surgery dual of `L` from whether `L` is a stabilization.
pub fn depth_one_dual(is_stabilization: bool, complement_tight: bool) -> Certificate {
    let inputs = json!({ "is_stabilization": is_stabilization, "complement_tight": complement_tight });
    let cert = if !complement_tight {
        Certificate::new(Verdict::LooseCertified, Reason::new(Rule::OvertwistedComplement, inputs), Bounds::loose())
    } else if is_stabilization {
        let one = Interval::exactly(1);
        let bounds = Bounds { depth: one, tension: one, t_plus: Interval::at_least(1), t_minus: Interval::at_least(1), ..Bounds::default() };
        Certificate::new(Verdict::DepthOne, Reason::new(Rule::DualDepthOne, inputs), bounds)
    } else {
        let bounds = Bounds { depth: Interval::at_least(2), ..Bounds::non_loose() };
        Certificate::new(Verdict::DepthAtLeastTwo, Reason::new(Rule::DualDepthOne, inputs), bounds)
    };
    cert.assume("is_stabilization", is_stabilization).assume("complement_tight", complement_tight)
}

/// True when `tb` is the maximal value for the record, so the knot is not a
/// stabilization. False means unknown.
pub fn not_a_stabilization_by_max_tb(tb: i64, record: &KnotRecord) -> Result<bool, CertifyError> {
    if !record.ambient.is_tight() {
        return Err(CertifyError::AmbientMismatch(format!("{:?}", record.ambient)));
    }
    let max_tb = record.max_tb.ok_or(CertifyError::MissingMaxTb)?;
    if tb > max_tb {
        return Err(CertifyError::ExceedsMaxTb { tb, max_tb });
    }
    Ok(tb == max_tb)
}

/// Tension one for the (+1)-surgery dual of a knot in the tight `S^3`.
///
/// The conclusion is backed by recomputing the positively stabilized dual
/// through the surgery pipeline and checking that it violates the rational
/// bound.
pub fn tension_one_dual(tb: i64, rot: i64, chi: i64, surgery_overtwisted: bool) -> Certificate {
    let inputs = json!({ "tb": tb, "rot": rot, "chi": chi, "surgery_overtwisted": surgery_overtwisted });
    let mut failed = Vec::new();
    if tb >= -1 {
        failed.push("tb < -1".to_string());
    }
    if rot >= 0 {
        failed.push("rot < 0".to_string());
    }
    if tb + rot + 2 >= chi {
        failed.push("tb + rot + 2 < chi".to_string());
    }
    if !surgery_overtwisted {
        failed.push("surgery_overtwisted".to_string());
    }
    let stabilized = if failed.is_empty() { dual_invariants(tb, rot, 1, 0, chi).ok() } else { None };
    if failed.is_empty() {
        match &stabilized {
            Some(d) if bennequin_rational(d).is_violated() => {}
            _ => failed.push("stabilized dual violates the rational bound".to_string()),
        }
    }
    let cert = if failed.is_empty() {
        let one = Interval::exactly(1);
        let bounds = Bounds { tension: one, t_plus: one, depth: Interval::at_least(1), t_minus: Interval::at_least(1), ..Bounds::default() };
        let mut cert = Certificate::new(Verdict::TensionExactlyOne, Reason::new(Rule::DualTensionOne, inputs), bounds);
        let d = stabilized.expect("checked above");
        cert.reasons.push(Reason::new(Rule::RationalBennequin, json!({ "stabilized_dual": d, "check": Check::Violated })));
        cert.witness = Some(json!({ "stabilized_dual": d }));
        cert
    } else {
        Certificate::new(Verdict::Inconclusive { failed }, Reason::new(Rule::DualTensionOne, inputs), Bounds::default())
    };
    cert.assume("surgery_overtwisted", surgery_overtwisted)
}

/// Duals of max-tb negative torus knots with tension one and depth at least
/// two, for all admissible `(p, q)` with `|p| <= p_max`, ordered by `|p|`
/// then `q`.
pub fn tension_less_than_depth_search(p_max: u64) -> Vec<Certificate> {
    let mut out = Vec::new();
    for abs_p in 3..=p_max as i64 {
        for q in 2..abs_p {
            let Ok(record) = negative_torus_record(-abs_p, q) else { continue };
            if let Ok(cert) = tension_below_depth(&record) {
                out.push(cert);
            }
        }
    }
    out
}

/// Combines the tension-one and non-stabilization certificates for the dual
/// of the max-tb representative of `record`.
pub fn tension_below_depth(record: &KnotRecord) -> Result<Certificate, CertifyError> {
    let tb = record.max_tb.ok_or(CertifyError::MissingMaxTb)?;
    let rot = *record.rot_at_max_tb.iter().min().ok_or(CertifyError::MissingMaxTb)?;
    let overtwisted = record.plus_one_surgery_overtwisted.unwrap_or(false);
    let tension = tension_one_dual(tb, rot, record.chi, overtwisted);
    if let Verdict::Inconclusive { failed } = &tension.verdict {
        return Err(CertifyError::ContradictoryEvidence(failed.join(", ")));
    }
    let not_stab = not_a_stabilization_by_max_tb(tb, record)?;
    if !not_stab {
        return Err(CertifyError::ContradictoryEvidence("not at max tb".into()));
    }
    let mut depth = depth_one_dual(false, true);
    depth.reasons.insert(0, Reason::new(Rule::MaxTbNonStabilization, json!({ "tb": tb, "max_tb": tb })));
    let mut cert = tension.merge(depth, Verdict::TensionBelowDepth)?;
    cert.witness = Some(json!({
        "knot": record.family,
        "tb": tb,
        "rot": rot,
        "chi": record.chi,
        "stabilized_dual": cert.witness.as_ref().and_then(|w| w.get("stabilized_dual")).cloned(),
    }));
    Ok(cert)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    PuncturedTorus,
    PuncturedKleinBottle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFlags {
    pub essential: bool,
    pub non_separating: bool,
    pub orientation_preserving: bool,
}

/// A surface bounded by `L` together with a curve on it, as described by the
/// caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Depth2Witness {
    pub surface_kind: SurfaceKind,
    pub tw_boundary: i64,
    pub tw_curve: i64,
    pub curve_flags: CurveFlags,
}

pub fn depth2_check(w: &Depth2Witness, is_stabilization: bool, complement_tight: bool) -> Certificate {
    let inputs = json!({ "witness": w, "is_stabilization": is_stabilization, "complement_tight": complement_tight });
    let mut failed = Vec::new();
    if !complement_tight {
        failed.push("complement_tight".to_string());
    }
    if is_stabilization {
        failed.push("not a stabilization".to_string());
    }
    if w.tw_boundary != 0 {
        failed.push("tw_boundary = 0".to_string());
    }
    if w.tw_curve != 1 {
        failed.push("tw_curve = +1".to_string());
    }
    let f = w.curve_flags;
    for (ok, name) in [(f.essential, "essential"), (f.non_separating, "non_separating"), (f.orientation_preserving, "orientation_preserving")] {
        if !ok {
            failed.push(format!("curve {name}"));
        }
    }
    let cert = if failed.is_empty() {
        let bounds = Bounds { depth: Interval::exactly(2), tension: Interval::between(1, 2), ..Bounds::non_loose() };
        let mut cert = Certificate::new(Verdict::DepthExactlyTwo, Reason::new(Rule::DepthTwo, inputs), bounds);
        cert.witness = Some(json!(w));
        cert
    } else {
        Certificate::new(Verdict::Inconclusive { failed }, Reason::new(Rule::DepthTwo, inputs), Bounds::default())
    };
    cert.assume("is_stabilization", is_stabilization).assume("complement_tight", complement_tight)
}

/// Depth of the image of `K` after (+1)-surgery on a meridian and its
/// push-off, when `K` has `tb = 2 g_s - 1 > 1`.
pub fn possurg_depth_one(tb: i64, g_s: u64) -> Certificate {
    let inputs = json!({ "tb": tb, "g_s": g_s });
    let mut failed = Vec::new();
    if tb != 2 * g_s as i64 - 1 {
        failed.push("tb = 2 g_s - 1".to_string());
    }
    if tb <= 1 {
        failed.push("tb > 1".to_string());
    }
    if !failed.is_empty() {
        return Certificate::new(Verdict::Inconclusive { failed }, Reason::new(Rule::PositiveSurgeryTight, inputs), Bounds::default());
    }
    let one = Interval::exactly(1);
    let bounds = Bounds { depth: one, tension: one, ..Bounds::non_loose() };
    let mut cert = Certificate::new(Verdict::DepthOne, Reason::new(Rule::PositiveSurgeryTight, inputs.clone()), bounds);
    cert.reasons.push(Reason::new(Rule::MeridionalSurgeryDepthOne, inputs));
    cert
}

/// Order bounds from a loosening `L_{+a,-b}` of a null-homologous knot.
pub fn order_bounds(a: u64, b: u64, loosened: bool) -> Result<Certificate, CertifyError> {
    if !loosened {
        return Err(CertifyError::NotLoosened);
    }
    let inputs = json!({ "a": a, "b": b });
    let bounds = if a + b == 0 {
        Bounds::loose()
    } else {
        let mut bounds = Bounds {
            order_pos: Interval::at_most(a),
            order_neg: Interval::at_most(b),
            order: Interval::at_most(a + b),
            tension: Interval::at_most(a + b),
            ..Bounds::default()
        };
        if b == 0 {
            bounds.t_plus = Interval::at_most(a);
        }
        if a == 0 {
            bounds.t_minus = Interval::at_most(b);
        }
        bounds
    };
    let mut cert = Certificate::new(Verdict::OrderBounds { o: a, o_rev: b }, Reason::new(Rule::StabilizationOrder, inputs.clone()), bounds);
    cert.reasons.push(Reason::new(Rule::OrderBelowTension, inputs));
    Ok(cert.assume("loosened", loosened))
}

/// Order zero for null-homologous knot types whose non-loose representatives
/// have `tb` bounded below.
pub fn order_zero_by_tb_bound(has_tb_lower_bound: bool, order_positive: bool) -> Result<Certificate, CertifyError> {
    if has_tb_lower_bound && order_positive {
        return Err(CertifyError::ContradictoryEvidence(
            "positive order forces tb of non-loose representatives to be unbounded below".into(),
        ));
    }
    let inputs = json!({ "has_tb_lower_bound": has_tb_lower_bound, "order_positive": order_positive });
    let cert = if has_tb_lower_bound {
        let zero = Interval::exactly(0);
        let bounds = Bounds {
            order: zero,
            order_pos: zero,
            order_neg: zero,
            t_plus: Interval::FINITE,
            t_minus: Interval::FINITE,
            tension: Interval::FINITE,
            depth: Interval::FINITE,
        };
        Certificate::new(Verdict::OrderZero, Reason::new(Rule::TbLowerBoundOrder, inputs), bounds)
    } else if order_positive {
        let bounds = Bounds { order_pos: Interval::at_least(1), order: Interval::at_least(1), t_minus: Interval::INFINITE, ..Bounds::non_loose() };
        Certificate::new(
            Verdict::inconclusive("order is positive, no upper bound"),
            Reason::new(Rule::PositiveOrderNegativeTension, inputs),
            bounds,
        )
    } else {
        Certificate::new(Verdict::inconclusive("has_tb_lower_bound"), Reason::new(Rule::TbLowerBoundOrder, inputs), Bounds::default())
    };
    Ok(cert.assume("has_tb_lower_bound", has_tb_lower_bound).assume("order_positive", order_positive))
}

/// Signed tension of the dual of a positively stabilized transverse push-off.
pub fn tension_refinement(
    is_positive_stab_of_pushoff: bool,
    contact_invariant_nonzero: bool,
    complement_tight: bool,
) -> Certificate {
    let inputs = json!({
        "is_positive_stab_of_pushoff": is_positive_stab_of_pushoff,
        "contact_invariant_nonzero": contact_invariant_nonzero,
        "complement_tight": complement_tight,
    });
    let cert = if is_positive_stab_of_pushoff && complement_tight {
        let one = Interval::exactly(1);
        let mut bounds = Bounds { t_minus: one, tension: one, ..Bounds::non_loose() };
        if contact_invariant_nonzero {
            bounds.t_plus = Interval::at_least(2);
        }
        Certificate::new(
            Verdict::SignedTensionBound { side: Side::Negative, value: 1 },
            Reason::new(Rule::SignedTension, inputs),
            bounds,
        )
    } else {
        let mut failed = Vec::new();
        if !is_positive_stab_of_pushoff {
            failed.push("is_positive_stab_of_pushoff".to_string());
        }
        if !complement_tight {
            failed.push("complement_tight".to_string());
        }
        Certificate::new(Verdict::Inconclusive { failed }, Reason::new(Rule::SignedTension, inputs), Bounds::default())
    };
    cert.assume("is_positive_stab_of_pushoff", is_positive_stab_of_pushoff)
        .assume("contact_invariant_nonzero", contact_invariant_nonzero)
        .assume("complement_tight", complement_tight)
}

/// How the transverse knot relates to the Legendrian knot of the input
/// certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// The transverse knot is the positive push-off of the Legendrian one.
    Pushoff,
    /// The Legendrian knot is some approximation of the transverse one.
    Approximation,
}

/// Facts about the transverse knot that are supplied as evidence.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransverseEvidence {
    pub unknot: bool,
    pub negative_hopf_binding: bool,
}

/// Transfers a Legendrian certificate to the related transverse knot.
///
/// `p_stabs_used` is the number of positive stabilizations in a loosening
/// of the Legendrian knot known to the caller, if any.
pub fn transverse_transfer(
    cert: &Certificate,
    relation: Relation,
    p_stabs_used: Option<u64>,
    evidence: TransverseEvidence,
) -> Result<Certificate, CertifyError> {
    if cert.subject != Subject::Legendrian {
        return Err(CertifyError::IncompatibleRelation("input certificate is not about a Legendrian knot".into()));
    }
    let inputs = json!({
        "relation": relation,
        "p_stabs_used": p_stabs_used,
        "legendrian_verdict": cert.verdict,
        "legendrian_bounds": cert.bounds,
    });
    let finish = |c: Certificate| {
        c.with_subject(Subject::Transverse)
            .assume("unknot", evidence.unknot)
            .assume("negative_hopf_binding", evidence.negative_hopf_binding)
    };
    if evidence.unknot && evidence.negative_hopf_binding {
        return Err(CertifyError::ContradictoryEvidence("a binding with depth one is not loose".into()));
    }
    if evidence.unknot {
        return Ok(finish(Certificate::new(Verdict::LooseCertified, Reason::new(Rule::TransverseUnknot, inputs), Bounds::loose())));
    }
    if evidence.negative_hopf_binding {
        let one = Interval::exactly(1);
        let bounds = Bounds { depth: one, tension: one, ..Bounds::default() };
        return Ok(finish(Certificate::new(Verdict::DepthOne, Reason::new(Rule::NegativeHopfBinding, inputs), bounds)));
    }

    let mut reasons = Vec::new();
    let mut tension = Interval::UNKNOWN;
    let witness_a = match cert.verdict {
        Verdict::TensionUpperBound { a, .. } => Some(a),
        Verdict::LooseCertified => Some(0),
        _ => None,
    };
    let positive = match (witness_a, p_stabs_used) {
        (Some(a), Some(p)) => Some(a.min(p)),
        (a, p) => a.or(p),
    };
    if let Some(p) = positive {
        tension = tension.intersect(&Interval::at_most(p));
        reasons.push(Reason::new(Rule::TransverseTension, json!({ "positive_stabilizations": p })));
    }
    match relation {
        Relation::Approximation => {
            if let Some(t) = cert.bounds.tension.upper() {
                tension = tension.intersect(&Interval::at_most(t));
                reasons.push(Reason::new(Rule::TransverseTension, json!({ "legendrian_tension_at_most": t })));
            }
        }
        Relation::Pushoff => {
            let t_minus = cert.bounds.t_minus;
            if t_minus.is_finite() {
                tension = Interval::exactly(0);
                reasons.push(Reason::new(Rule::PushoffLoose, json!({ "t_minus": t_minus })));
            } else if t_minus.is_infinite() {
                tension = tension.intersect(&Interval::at_least(1));
                reasons.push(Reason::new(Rule::PushoffLoose, json!({ "t_minus": t_minus })));
            }
        }
    }
    if reasons.is_empty() {
        let c = Certificate::new(
            Verdict::inconclusive("no transferable bound"),
            Reason::new(Rule::TransverseTension, inputs),
            Bounds::default(),
        );
        return Ok(finish(c));
    }
    let (verdict, bounds) = match tension.upper() {
        Some(0) => (Verdict::LooseCertified, Bounds::loose()),
        Some(p) => (Verdict::TensionUpperBound { a: p, b: 0 }, Bounds { tension, ..Bounds::default() }),
        None => (Verdict::NoObstruction, Bounds { tension, depth: tension, ..Bounds::default() }),
    };
    let mut c = Certificate::new(verdict, Reason::new(reasons[0].rule, inputs), bounds);
    c.reasons.extend(reasons);
    Ok(finish(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotdata::{named_example_str, positive_torus_record, unknot_record};
    use crate::rational::ratio;

    fn pair(tb: i64, rot: i64, chi: i64) -> ClassicalPair {
        ClassicalPair::new(tb, rot).with_chi(chi).unwrap()
    }

    fn rat(tb: Rational, rot: Rational, r: u64, chi: i64) -> RationalData {
        RationalData::new(tb, rot, r, chi).unwrap()
    }

    #[test]
    fn bennequin_examples() {
        assert_eq!(bennequin_null(&pair(0, 3, -1)).unwrap(), Check::Violated);
        assert_eq!(bennequin_null(&pair(-1, 0, 1)).unwrap(), Check::Holds);
        assert_eq!(bennequin_null(&pair(-15, -2, -7)).unwrap(), Check::Holds);
        assert_eq!(bennequin_null(&ClassicalPair::new(0, 3)), Err(CertifyError::MissingChi));
    }

    #[test]
    fn rational_bennequin_examples() {
        assert!(bennequin_rational(&rat(ratio(1, 14), ratio(8, 7), 14, -7)).is_violated());
        assert!(!bennequin_rational(&rat(ratio(15, 14), ratio(1, 7), 14, -7)).is_violated());
        assert!(bennequin_rational(&rat(ratio(0, 1), ratio(0, 1), 1, 1)).is_violated());
        assert!(!bennequin_rational(&rat(ratio(-1, 1), ratio(0, 1), 1, 1)).is_violated());
    }

    #[test]
    fn transverse_examples() {
        assert!(transverse_bennequin(&ratio(1, 1), 1, 1).is_violated());
        assert!(!transverse_bennequin(&ratio(-13, 1), -7, 1).is_violated());
        assert!(!transverse_bennequin(&ratio(-15, 14), -7, 14).is_violated());
    }

    #[test]
    fn unknot_examples() {
        assert!(unknot_verdict(&ClassicalPair::new(0, 1)).is_loose());
        assert!(unknot_verdict(&ClassicalPair::new(2, 0)).is_loose());
        let c = unknot_verdict(&ClassicalPair::new(2, 1));
        assert_eq!(c.verdict, Verdict::NoObstruction);
        let b = c.if_non_loose.unwrap();
        assert_eq!((b.depth.exact(), b.tension.exact(), b.order.exact()), (Some(1), Some(1), Some(0)));
        assert!(c.violations().is_empty());
    }

    #[test]
    fn tension_examples() {
        let w = tension_upper_bound(&TensionQuery::Classical(pair(3, 0, -1)), 10, Side::Both).unwrap().unwrap();
        assert_eq!(w, TensionWitness { bound: 3, a: 3, b: 0 });
        let w = tension_upper_bound(&TensionQuery::Classical(pair(5, 0, -3)), 64, Side::Both).unwrap().unwrap();
        assert_eq!(w.bound, 5);
        let dual = rat(ratio(15, 14), ratio(1, 7), 14, -7);
        let w = tension_upper_bound(&TensionQuery::Rational(dual), 64, Side::Positive).unwrap().unwrap();
        assert_eq!(w, TensionWitness { bound: 1, a: 1, b: 0 });
        assert_eq!(
            tension_upper_bound(&TensionQuery::Classical(ClassicalPair::new(3, 0)), 4, Side::Both),
            Err(CertifyError::MissingChi)
        );
    }

    #[test]
    fn no_violation_is_inconclusive() {
        let c = tension_certificate(&TensionQuery::Classical(pair(3, 0, -1)), 2, Side::Both).unwrap();
        assert!(matches!(c.verdict, Verdict::Inconclusive { .. }));
        assert!(c.bounds.tension.is_unknown());
    }

    #[test]
    fn dual_depth() {
        assert_eq!(depth_one_dual(true, true).verdict, Verdict::DepthOne);
        assert_eq!(depth_one_dual(false, true).verdict, Verdict::DepthAtLeastTwo);
        assert!(depth_one_dual(true, false).is_loose());
        assert!(depth_one_dual(false, false).is_loose());
        assert_eq!(depth_one_dual(false, true).assumptions.len(), 2);
    }

    #[test]
    fn max_tb_non_stabilization() {
        let rec = negative_torus_record(-5, 3).unwrap();
        assert_eq!(not_a_stabilization_by_max_tb(-15, &rec), Ok(true));
        assert_eq!(not_a_stabilization_by_max_tb(-16, &rec), Ok(false));
        assert!(not_a_stabilization_by_max_tb(-14, &rec).is_err());
        let ot = named_example_str("L2q(3)").unwrap();
        assert!(matches!(not_a_stabilization_by_max_tb(3, &ot), Err(CertifyError::AmbientMismatch(_))));
    }

    #[test]
    fn tension_one_examples() {
        assert_eq!(tension_one_dual(-15, -2, -7, true).verdict, Verdict::TensionExactlyOne);
        assert!(matches!(tension_one_dual(-15, -2, -7, false).verdict, Verdict::Inconclusive { .. }));
        match tension_one_dual(-2, 1, -1, true).verdict {
            Verdict::Inconclusive { failed } => assert!(failed.contains(&"rot < 0".to_string())),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn search_examples() {
        let found = |p_max| {
            tension_less_than_depth_search(p_max)
                .iter()
                .map(|c| {
                    let w = c.witness.as_ref().unwrap();
                    (w["knot"]["p"].as_i64().unwrap(), w["knot"]["q"].as_i64().unwrap())
                })
                .collect::<Vec<_>>()
        };
        assert!(found(5).contains(&(-5, 2)));
        assert!(found(5).contains(&(-5, 3)));
        assert!(found(3).contains(&(-3, 2)));
        assert!(found(1).is_empty());
        for c in tension_less_than_depth_search(9) {
            assert_eq!(c.bounds.tension.exact(), Some(1));
            assert_eq!(c.bounds.depth.lower(), Some(2));
            assert!(c.violations().is_empty());
        }
    }

    #[test]
    fn depth_two() {
        let w = Depth2Witness {
            surface_kind: SurfaceKind::PuncturedTorus,
            tw_boundary: 0,
            tw_curve: 1,
            curve_flags: CurveFlags { essential: true, non_separating: true, orientation_preserving: true },
        };
        assert_eq!(depth2_check(&w, false, true).verdict, Verdict::DepthExactlyTwo);
        assert!(matches!(depth2_check(&w, true, true).verdict, Verdict::Inconclusive { .. }));
        let flat = Depth2Witness { tw_curve: 0, ..w };
        assert!(matches!(depth2_check(&flat, false, true).verdict, Verdict::Inconclusive { .. }));
    }

    #[test]
    fn possurg() {
        assert!(matches!(possurg_depth_one(1, 1).verdict, Verdict::Inconclusive { .. }));
        assert_eq!(possurg_depth_one(7, 4).verdict, Verdict::DepthOne);
        assert!(matches!(possurg_depth_one(5, 2).verdict, Verdict::Inconclusive { .. }));
        let t35 = positive_torus_record(3, 5).unwrap();
        assert_eq!(possurg_depth_one(t35.max_tb.unwrap(), t35.g_s.unwrap()).verdict, Verdict::DepthOne);
    }

    #[test]
    fn orders() {
        let c = order_bounds(1, 0, true).unwrap();
        assert_eq!(c.bounds.order_neg.exact(), Some(0));
        assert_eq!(c.bounds.order_pos.upper(), Some(1));
        let c = order_bounds(0, 0, true).unwrap();
        assert_eq!(c.bounds.order.exact(), Some(0));
        let c = order_bounds(2, 3, true).unwrap();
        assert_eq!(c.bounds.order.upper(), Some(5));
        assert_eq!(order_bounds(1, 1, false), Err(CertifyError::NotLoosened));
    }

    #[test]
    fn order_zero() {
        assert_eq!(order_zero_by_tb_bound(true, false).unwrap().verdict, Verdict::OrderZero);
        assert!(matches!(order_zero_by_tb_bound(false, false).unwrap().verdict, Verdict::Inconclusive { .. }));
        let loss = named_example_str("LOSS(2)").unwrap();
        assert!(matches!(order_zero_by_tb_bound(true, loss.order_positive), Err(CertifyError::ContradictoryEvidence(_))));
        assert!(!unknot_record().order_positive);
    }

    #[test]
    fn refinement() {
        let c = tension_refinement(true, true, true);
        assert_eq!(c.bounds.t_minus.exact(), Some(1));
        assert_eq!(c.bounds.t_plus.lower(), Some(2));
        let c = tension_refinement(true, false, true);
        assert_eq!(c.bounds.t_minus.exact(), Some(1));
        assert!(c.bounds.t_plus.lower() == Some(1));
        assert!(matches!(tension_refinement(false, true, true).verdict, Verdict::Inconclusive { .. }));
        assert_eq!(c.assumptions.len(), 3);
    }

    #[test]
    fn transverse() {
        let leg = Certificate::new(
            Verdict::TensionUpperBound { a: 3, b: 2 },
            Reason::new(Rule::StabilizationSearch, json!({})),
            Bounds { tension: Interval::at_most(5), ..Bounds::default() },
        );
        let t = transverse_transfer(&leg, Relation::Approximation, None, TransverseEvidence::default()).unwrap();
        assert_eq!(t.bounds.tension.upper(), Some(3));
        assert_eq!(t.subject, Subject::Transverse);

        let refined = tension_refinement(true, false, true);
        let t = transverse_transfer(&refined, Relation::Pushoff, None, TransverseEvidence::default()).unwrap();
        assert!(t.is_loose());

        let ev = TransverseEvidence { negative_hopf_binding: true, ..Default::default() };
        let t = transverse_transfer(&leg, Relation::Pushoff, None, ev).unwrap();
        assert_eq!((t.bounds.depth.exact(), t.bounds.tension.exact()), (Some(1), Some(1)));

        let ev = TransverseEvidence { unknot: true, ..Default::default() };
        assert!(transverse_transfer(&leg, Relation::Pushoff, None, ev).unwrap().is_loose());

        let tr = certify_transverse_bennequin(&ratio(1, 1), 1, 1);
        assert!(matches!(
            transverse_transfer(&tr, Relation::Pushoff, None, TransverseEvidence::default()),
            Err(CertifyError::IncompatibleRelation(_))
        ));
    }

    #[test]
    fn merge_rejects_conflicts() {
        let a = depth_one_dual(true, true);
        let b = depth_one_dual(false, true);
        assert!(a.merge(b, Verdict::DepthOne).is_err());
    }

    #[test]
    fn serialized_certificate_shape() {
        let c = &tension_less_than_depth_search(5)[0];
        let v = serde_json::to_value(c).unwrap();
        assert_eq!(v["bounds"]["t"], json!(1));
        assert_eq!(v["bounds"]["d"], json!(">=2"));
        assert_eq!(v["verdict"]["kind"], json!("tension_below_depth"));
        assert!(v["reasons"].as_array().unwrap().iter().all(|r| r["citation"].is_string()));
    }
}
