//! Finite unions of half-open rational subintervals of [0,1). Every
//! "measurable set" the constructions need is generated by finitely many
//! rational boundary points, so this representation is lossless and the
//! Lebesgue measure is an exact rational.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Q;

/// Disjoint, sorted, non-touching half-open intervals [a,b), 0 <= a < b <= 1.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    parts: Vec<(Q, Q)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { parts: Vec::new() }
    }

    pub fn full() -> Self {
        IntervalSet::interval(Q::zero(), Q::one())
    }

    /// Single interval [a,b); empty when a >= b.
    pub fn interval(a: Q, b: Q) -> Self {
        if a >= b {
            return IntervalSet::empty();
        }
        IntervalSet { parts: vec![(a, b)] }
    }

    /// Normalizes arbitrary rational intervals: drops empties, sorts, merges
    /// overlaps and touching endpoints.
    pub fn from_intervals(intervals: Vec<(Q, Q)>) -> Self {
        let mut parts: Vec<(Q, Q)> = intervals.into_iter().filter(|(a, b)| a < b).collect();
        parts.sort();
        let mut merged: Vec<(Q, Q)> = Vec::with_capacity(parts.len());
        for (a, b) in parts {
            match merged.last_mut() {
                Some((_, last_b)) if a <= *last_b => {
                    if b > *last_b {
                        *last_b = b;
                    }
                }
                _ => merged.push((a, b)),
            }
        }
        IntervalSet { parts: merged }
    }

    /// Validating constructor for external input: endpoints must lie in [0,1].
    pub fn checked(intervals: Vec<(Q, Q)>) -> Result<Self> {
        for (a, b) in &intervals {
            if a.is_negative() || *b > 1 {
                return Err(Error::InvalidColoring(format!(
                    "interval [{a},{b}) escapes [0,1]"
                )));
            }
        }
        Ok(IntervalSet::from_intervals(intervals))
    }

    pub fn parts(&self) -> &[(Q, Q)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn measure(&self) -> Q {
        self.parts.iter().map(|(a, b)| b - a).sum()
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut all = self.parts.clone();
        all.extend(other.parts.iter().cloned());
        IntervalSet::from_intervals(all)
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let (a1, b1) = &self.parts[i];
            let (a2, b2) = &other.parts[j];
            let lo = if a1 >= a2 { a1.clone() } else { a2.clone() };
            let hi = if b1 <= b2 { b1.clone() } else { b2.clone() };
            if lo < hi {
                out.push((lo, hi));
            }
            if b1 <= b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { parts: out }
    }

    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let mut j = 0;
        for (a, b) in &self.parts {
            let mut lo = a.clone();
            while j < other.parts.len() && other.parts[j].1 <= lo {
                j += 1;
            }
            let mut k = j;
            while k < other.parts.len() && other.parts[k].0 < *b {
                let (ca, cb) = &other.parts[k];
                if *ca > lo {
                    out.push((lo.clone(), ca.clone()));
                }
                if *cb >= *b {
                    lo = b.clone();
                    break;
                }
                lo = cb.clone();
                k += 1;
            }
            if lo < *b {
                out.push((lo, b.clone()));
            }
        }
        IntervalSet { parts: out }
    }

    /// [0,1) minus self.
    pub fn complement(&self) -> IntervalSet {
        IntervalSet::full().difference(self)
    }

    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint_from(&self, other: &IntervalSet) -> bool {
        self.intersection(other).is_empty()
    }

    /// The sub-set of self between measure offsets `from` and `to`
    /// (walking self left to right). Requires 0 <= from <= to <= measure.
    pub fn portion(&self, from: &Q, to: &Q) -> IntervalSet {
        assert!(!from.is_negative() && from <= to);
        let mut out = Vec::new();
        let mut walked = Q::zero();
        for (a, b) in &self.parts {
            let len = b - a;
            let lo = {
                let rel = from - &walked;
                if rel <= Q::zero() {
                    a.clone()
                } else if rel >= len {
                    walked += &len;
                    continue;
                } else {
                    a + &rel
                }
            };
            let rel_to = to - &walked;
            let hi = if rel_to >= len { b.clone() } else { a + &rel_to };
            if lo < hi {
                out.push((lo, hi));
            }
            walked += &len;
            if walked >= *to {
                break;
            }
        }
        IntervalSet { parts: out }
    }

    /// First `m` of measure, left to right.
    pub fn take_prefix(&self, m: &Q) -> IntervalSet {
        self.portion(&Q::zero(), m)
    }

    /// Measure-preserving embedding of `inner` (a subset of [0,1), read as
    /// fractions of self's total measure) into self: the image of [a,b) is
    /// the portion of self between offsets a*measure and b*measure.
    pub fn embed_scaled(&self, inner: &IntervalSet) -> IntervalSet {
        let total = self.measure();
        let mut out = IntervalSet::empty();
        for (a, b) in &inner.parts {
            out = out.union(&self.portion(&(a * &total), &(b * &total)));
        }
        out
    }
}

impl std::fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, (a, b)) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "[{a},{b})")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[String; 2]> = self
            .parts
            .iter()
            .map(|(a, b)| [a.to_string(), b.to_string()])
            .collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[String; 2]>::deserialize(d)?;
        let mut parts = Vec::with_capacity(pairs.len());
        for [a, b] in pairs {
            let a: Q = a.parse().map_err(serde::de::Error::custom)?;
            let b: Q = b.parse().map_err(serde::de::Error::custom)?;
            parts.push((a, b));
        }
        IntervalSet::checked(parts).map_err(serde::de::Error::custom)
    }
}
