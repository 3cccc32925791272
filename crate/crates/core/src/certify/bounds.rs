//! Interval bookkeeping for depth, tension and order.

use std::fmt;

use serde::{Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lower {
    AtLeast(u64),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Upper {
    AtMost(u64),
    /// Known finite, value unknown.
    Finite,
    Unknown,
}

impl Upper {
    fn min(self, other: Upper) -> Upper {
        match (self, other) {
            (Upper::AtMost(a), Upper::AtMost(b)) => Upper::AtMost(a.min(b)),
            (Upper::AtMost(a), _) | (_, Upper::AtMost(a)) => Upper::AtMost(a),
            (Upper::Finite, _) | (_, Upper::Finite) => Upper::Finite,
            _ => Upper::Unknown,
        }
    }
}

impl Lower {
    fn max(self, other: Lower) -> Lower {
        match (self, other) {
            (Lower::AtLeast(a), Lower::AtLeast(b)) => Lower::AtLeast(a.max(b)),
            _ => Lower::Infinite,
        }
    }

    /// True when no value `>= self` can be `<= hi`.
    fn exceeds(self, hi: Upper) -> bool {
        match (self, hi) {
            (Lower::AtLeast(l), Upper::AtMost(h)) => l > h,
            (Lower::Infinite, Upper::AtMost(_) | Upper::Finite) => true,
            _ => false,
        }
    }
}

/// A set of possible values in `{0, 1, 2, ..., ∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Lower,
    pub hi: Upper,
}

impl Default for Interval {
    fn default() -> Self {
        Interval::UNKNOWN
    }
}

impl Interval {
    pub const UNKNOWN: Interval = Interval { lo: Lower::AtLeast(0), hi: Upper::Unknown };
    pub const INFINITE: Interval = Interval { lo: Lower::Infinite, hi: Upper::Unknown };
    pub const FINITE: Interval = Interval { lo: Lower::AtLeast(0), hi: Upper::Finite };

    pub fn exactly(n: u64) -> Self {
        Interval { lo: Lower::AtLeast(n), hi: Upper::AtMost(n) }
    }

    pub fn at_least(n: u64) -> Self {
        Interval { lo: Lower::AtLeast(n), hi: Upper::Unknown }
    }

    pub fn at_most(n: u64) -> Self {
        Interval { lo: Lower::AtLeast(0), hi: Upper::AtMost(n) }
    }

    pub fn between(lo: u64, hi: u64) -> Self {
        Interval { lo: Lower::AtLeast(lo), hi: Upper::AtMost(hi) }
    }

    pub fn is_unknown(&self) -> bool {
        *self == Interval::UNKNOWN
    }

    pub fn is_empty(&self) -> bool {
        self.lo.exceeds(self.hi)
    }

    pub fn exact(&self) -> Option<u64> {
        match (self.lo, self.hi) {
            (Lower::AtLeast(l), Upper::AtMost(h)) if l == h => Some(l),
            _ => None,
        }
    }

    pub fn upper(&self) -> Option<u64> {
        match self.hi {
            Upper::AtMost(h) => Some(h),
            _ => None,
        }
    }

    pub fn lower(&self) -> Option<u64> {
        match self.lo {
            Lower::AtLeast(l) => Some(l),
            Lower::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.hi != Upper::Unknown
    }

    pub fn is_infinite(&self) -> bool {
        self.lo == Lower::Infinite
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.min(other.hi) }
    }

    /// Whether some value of `self` can be `<=` some value of `other`.
    pub fn can_be_below(&self, other: &Interval) -> bool {
        !self.lo.exceeds(other.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.exact() {
            return write!(f, "{n}");
        }
        match (self.lo, self.hi) {
            (Lower::Infinite, _) => f.write_str("inf"),
            (Lower::AtLeast(0), Upper::Unknown) => f.write_str("?"),
            (Lower::AtLeast(0), Upper::AtMost(h)) => write!(f, "<={h}"),
            (Lower::AtLeast(0), Upper::Finite) => f.write_str("<inf"),
            (Lower::AtLeast(l), Upper::Unknown) => write!(f, ">={l}"),
            (Lower::AtLeast(l), Upper::AtMost(h)) => write!(f, "[{l},{h}]"),
            (Lower::AtLeast(l), Upper::Finite) => write!(f, ">={l},<inf"),
        }
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.exact() {
            Some(n) => s.serialize_u64(n),
            None => s.collect_str(self),
        }
    }
}

/// What a certificate establishes about one knot. Fields left at
/// [`Interval::UNKNOWN`] carry no information.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Bounds {
    #[serde(rename = "d", skip_serializing_if = "Interval::is_unknown")]
    pub depth: Interval,
    #[serde(rename = "t", skip_serializing_if = "Interval::is_unknown")]
    pub tension: Interval,
    /// Unoriented order, the sum of the orders of both orientations.
    #[serde(rename = "o_bar", skip_serializing_if = "Interval::is_unknown")]
    pub order: Interval,
    #[serde(skip_serializing_if = "Interval::is_unknown")]
    pub t_plus: Interval,
    #[serde(skip_serializing_if = "Interval::is_unknown")]
    pub t_minus: Interval,
    /// Order of the given orientation.
    #[serde(rename = "o", skip_serializing_if = "Interval::is_unknown")]
    pub order_pos: Interval,
    /// Order of the reversed orientation.
    #[serde(rename = "o_rev", skip_serializing_if = "Interval::is_unknown")]
    pub order_neg: Interval,
}

impl Bounds {
    /// All invariants vanish: the knot is loose.
    pub fn loose() -> Self {
        let z = Interval::exactly(0);
        Bounds { depth: z, tension: z, order: z, t_plus: z, t_minus: z, order_pos: z, order_neg: z }
    }

    /// Depth and tension are at least one.
    pub fn non_loose() -> Self {
        Bounds {
            depth: Interval::at_least(1),
            tension: Interval::at_least(1),
            t_plus: Interval::at_least(1),
            t_minus: Interval::at_least(1),
            ..Bounds::default()
        }
    }

    pub fn intersect(&self, other: &Bounds) -> Bounds {
        Bounds {
            depth: self.depth.intersect(&other.depth),
            tension: self.tension.intersect(&other.tension),
            order: self.order.intersect(&other.order),
            t_plus: self.t_plus.intersect(&other.t_plus),
            t_minus: self.t_minus.intersect(&other.t_minus),
            order_pos: self.order_pos.intersect(&other.order_pos),
            order_neg: self.order_neg.intersect(&other.order_neg),
        }
    }

    pub fn is_loose(&self) -> bool {
        self.tension.upper() == Some(0) || self.depth.upper() == Some(0)
    }

    /// Violations of `o_bar <= t <= d`, `t <= t_±`, and `t = 0 <=> d = 0`,
    /// plus any empty interval.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let named = [
            ("d", &self.depth),
            ("t", &self.tension),
            ("o_bar", &self.order),
            ("t_plus", &self.t_plus),
            ("t_minus", &self.t_minus),
            ("o", &self.order_pos),
            ("o_rev", &self.order_neg),
        ];
        for (name, iv) in named {
            if iv.is_empty() {
                out.push(format!("{name} has no admissible value ({iv:?})"));
            }
        }
        let chain = [
            ("o_bar", &self.order, "t", &self.tension),
            ("t", &self.tension, "d", &self.depth),
            ("o_bar", &self.order, "d", &self.depth),
            ("t", &self.tension, "t_plus", &self.t_plus),
            ("t", &self.tension, "t_minus", &self.t_minus),
        ];
        for (a, x, b, y) in chain {
            if !x.can_be_below(y) {
                out.push(format!("{a} = {x} cannot be <= {b} = {y}"));
            }
        }
        let zero = Interval::exactly(0);
        let nonzero = Interval::at_least(1);
        let only_zero = |iv: &Interval| iv.intersect(&nonzero).is_empty();
        let never_zero = |iv: &Interval| iv.intersect(&zero).is_empty();
        if (only_zero(&self.tension) && never_zero(&self.depth))
            || (never_zero(&self.tension) && only_zero(&self.depth))
        {
            out.push(format!("looseness mismatch: t = {}, d = {}", self.tension, self.depth));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        assert_eq!(Interval::exactly(1).to_string(), "1");
        assert_eq!(Interval::at_least(2).to_string(), ">=2");
        assert_eq!(Interval::at_most(3).to_string(), "<=3");
        assert_eq!(Interval::between(1, 3).to_string(), "[1,3]");
        assert_eq!(Interval::INFINITE.to_string(), "inf");
        assert_eq!(Interval::FINITE.to_string(), "<inf");
        assert_eq!(Interval::UNKNOWN.to_string(), "?");
    }

    #[test]
    fn intersections() {
        let a = Interval::at_least(1).intersect(&Interval::at_most(3));
        assert_eq!(a, Interval::between(1, 3));
        assert!(Interval::exactly(0).intersect(&Interval::at_least(1)).is_empty());
        assert!(Interval::INFINITE.intersect(&Interval::FINITE).is_empty());
        assert!(!Interval::INFINITE.intersect(&Interval::at_least(4)).is_empty());
    }

    #[test]
    fn chain_violations() {
        assert!(Bounds::loose().violations().is_empty());
        assert!(Bounds::non_loose().violations().is_empty());
        let bad = Bounds { tension: Interval::exactly(1), depth: Interval::exactly(0), ..Bounds::default() };
        assert!(!bad.violations().is_empty());
        let bad = Bounds { order: Interval::at_least(3), tension: Interval::at_most(2), ..Bounds::default() };
        assert_eq!(bad.violations().len(), 1);
        let ok = Bounds { tension: Interval::exactly(1), depth: Interval::at_least(2), ..Bounds::default() };
        assert!(ok.violations().is_empty());
        let bad = Bounds { tension: Interval::exactly(0), depth: Interval::at_least(1), ..Bounds::default() };
        assert!(!bad.violations().is_empty());
    }

    #[test]
    fn serializes_compactly() {
        let b = Bounds { tension: Interval::exactly(1), depth: Interval::at_least(2), ..Bounds::default() };
        assert_eq!(serde_json::to_string(&b).unwrap(), r#"{"d":">=2","t":1}"#);
    }
}
