//! Vectors of the lexicographic real power over an index set, and over its
//! one-added-element extensions.
//!
//! A [`RealVector`] has a finite support of `ℚ(√2)` coordinates, at most one
//! coordinate at an added index `i_S`, and optionally a constant rational tail
//! on a trailing `ω` atom. Tails keep supports well ordered while still
//! describing vectors of the Hahn product outside the Hahn sum.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::coordinate::{Coordinate, Rational};
use crate::error::{invalid, Error, Result};
use crate::index::{ExtendedIndex, Index, IndexSet, Segment};

/// Every label `≥ from` of the trailing `ω` atom carries `value`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tail {
    pub value: Rational,
    pub from: Index,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    InGamma,
    InHahnProductOnly,
    OutsideHahnProduct,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RealVector {
    space: Arc<IndexSet>,
    finite: Vec<(Index, Coordinate)>,
    added: Option<(Segment, Coordinate)>,
    tail: Option<Tail>,
}

fn same_space(a: &Arc<IndexSet>, b: &Arc<IndexSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl RealVector {
    pub fn zero(space: Arc<IndexSet>) -> Self {
        RealVector { space, finite: Vec::new(), added: None, tail: None }
    }

    /// Validated constructor. Zero coordinates are dropped and trailing
    /// entries equal to the tail value are folded into the tail.
    pub fn new(
        space: Arc<IndexSet>,
        finite: Vec<(Index, Coordinate)>,
        added: Option<(Segment, Coordinate)>,
        tail: Option<Tail>,
    ) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, c) in finite {
            space.validate_index(&i)?;
            if entries.insert(i, c).is_some() {
                return Err(invalid(format!("index {i} appears twice")));
            }
        }
        if let Some((s, _)) = &added {
            space.validate_segment(s)?;
        }
        if let Some(t) = &tail {
            space.validate_index(&t.from)?;
            let Some(ta) = space.tail_atom() else {
                return Err(invalid("a tail needs a trailing omega atom"));
            };
            if t.from.atom != ta {
                return Err(invalid(format!("tail must start in atom {ta}, not {}", t.from.atom)));
            }
            if let Some((i, _)) = entries.iter().find(|(i, _)| i.atom == ta && i.inner >= t.from.inner) {
                return Err(invalid(format!("finite entry {i} lies inside the tail starting at {}", t.from)));
            }
        }
        Ok(Self::build(space, entries, added, tail))
    }

    pub fn unit(space: Arc<IndexSet>, i: Index) -> Result<Self> {
        Self::new(space, vec![(i, Coordinate::one())], None, None)
    }

    pub fn from_rationals(space: Arc<IndexSet>, entries: Vec<(Index, Rational)>) -> Result<Self> {
        Self::new(space, entries.into_iter().map(|(i, q)| (i, Coordinate::from(q))).collect(), None, None)
    }

    /// `c·e_S`, the vector with a single coordinate at the added index `i_S`.
    pub fn added_unit(space: Arc<IndexSet>, s: Segment, c: Coordinate) -> Result<Self> {
        Self::new(space, Vec::new(), Some((s, c)), None)
    }

    fn build(
        space: Arc<IndexSet>,
        entries: BTreeMap<Index, Coordinate>,
        added: Option<(Segment, Coordinate)>,
        mut tail: Option<Tail>,
    ) -> Self {
        let mut finite: Vec<(Index, Coordinate)> = entries.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        finite.sort_by(|(i, _), (j, _)| space.compare(i, j));
        let added = added.filter(|(_, c)| !c.is_zero());
        tail = tail.filter(|t| !t.value.is_zero());
        if let Some(t) = tail.as_mut() {
            while let Some((i, c)) = finite.last() {
                let absorbs = i.atom == t.from.atom
                    && i.inner + 1 == t.from.inner
                    && c.as_rational() == Some(&t.value);
                if !absorbs {
                    break;
                }
                t.from = *i;
                finite.pop();
            }
        }
        RealVector { space, finite, added, tail }
    }

    pub fn space(&self) -> &Arc<IndexSet> {
        &self.space
    }

    pub fn finite(&self) -> &[(Index, Coordinate)] {
        &self.finite
    }

    pub fn added(&self) -> Option<&(Segment, Coordinate)> {
        self.added.as_ref()
    }

    pub fn tail(&self) -> Option<&Tail> {
        self.tail.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.finite.is_empty() && self.added.is_none() && self.tail.is_none()
    }

    pub fn coefficient(&self, pos: &ExtendedIndex) -> Coordinate {
        match pos {
            ExtendedIndex::Base(i) => {
                if let Some((_, c)) = self.finite.iter().find(|(j, _)| j == i) {
                    return c.clone();
                }
                match &self.tail {
                    Some(t) if t.from.atom == i.atom && i.inner >= t.from.inner => Coordinate::from(t.value.clone()),
                    _ => Coordinate::zero(),
                }
            }
            ExtendedIndex::Added(s) => match &self.added {
                Some((t, c)) if t == s => c.clone(),
                _ => Coordinate::zero(),
            },
        }
    }

    fn positions(&self, out: &mut Vec<ExtendedIndex>) {
        out.extend(self.finite.iter().map(|(i, _)| ExtendedIndex::Base(*i)));
        out.extend(self.added.iter().map(|(s, _)| ExtendedIndex::Added(*s)));
        out.extend(self.tail.iter().map(|t| ExtendedIndex::Base(t.from)));
    }

    /// First extended index where `self` and `other` differ, with the
    /// coefficient of `self − other` there. Works across different added
    /// indices, where the difference itself would leave `R_sme`.
    pub fn leading_difference(&self, other: &RealVector) -> Option<(ExtendedIndex, Coordinate)> {
        debug_assert!(same_space(&self.space, &other.space));
        let mut cands = Vec::new();
        self.positions(&mut cands);
        other.positions(&mut cands);
        if self.tail.is_some() || other.tail.is_some() {
            let ta = self.space.tail_atom();
            let extra: Vec<_> = cands
                .iter()
                .filter_map(|p| match p {
                    ExtendedIndex::Base(i) if Some(i.atom) == ta => Some(ExtendedIndex::Base(Index::new(i.atom, i.inner + 1))),
                    _ => None,
                })
                .collect();
            cands.extend(extra);
        }
        cands.sort_by_key(|p| self.space.extended_key(p));
        cands.dedup();
        cands.into_iter().find_map(|p| {
            let d = &self.coefficient(&p) - &other.coefficient(&p);
            (!d.is_zero()).then_some((p, d))
        })
    }

    /// Lexicographic order. Panics on vectors over different index sets;
    /// [`cmp_lex`] is the checked form.
    pub fn lex_cmp(&self, other: &RealVector) -> Ordering {
        assert!(same_space(&self.space, &other.space), "vectors over different index sets");
        match self.leading_difference(other) {
            None => Ordering::Equal,
            Some((_, c)) => c.signum(),
        }
    }

    /// Least element of the support; `None` stands for `∞`.
    pub fn natural_valuation(&self) -> Option<ExtendedIndex> {
        self.leading_difference(&RealVector::zero(self.space.clone())).map(|(p, _)| p)
    }

    /// Leading coefficient, zero for the zero vector.
    pub fn leading_coefficient(&self) -> Coordinate {
        match self.natural_valuation() {
            Some(p) => self.coefficient(&p),
            None => Coordinate::zero(),
        }
    }

    pub fn signum(&self) -> Ordering {
        self.leading_coefficient().signum()
    }

    /// Finite entries with the tail spelled out on labels below `upto`.
    fn materialize(&self, upto: u64) -> (BTreeMap<Index, Coordinate>, Option<Tail>) {
        let mut entries: BTreeMap<Index, Coordinate> = self.finite.iter().cloned().collect();
        let tail = self.tail.as_ref().map(|t| {
            for k in t.from.inner..upto {
                entries.insert(Index::new(t.from.atom, k), Coordinate::from(t.value.clone()));
            }
            Tail { value: t.value.clone(), from: Index::new(t.from.atom, t.from.inner.max(upto)) }
        });
        (entries, tail)
    }

    fn tail_horizon(&self) -> u64 {
        let Some(ta) = self.space.tail_atom() else { return 0 };
        let finite_max = self.finite.iter().filter(|(i, _)| i.atom == ta).map(|(i, _)| i.inner + 1).max().unwrap_or(0);
        finite_max.max(self.tail.as_ref().map_or(0, |t| t.from.inner))
    }

    pub fn add(&self, other: &RealVector) -> Result<RealVector> {
        if !same_space(&self.space, &other.space) {
            return Err(invalid("vectors over different index sets"));
        }
        let added = match (&self.added, &other.added) {
            (Some((s, a)), Some((t, b))) => {
                if s != t {
                    return Err(Error::OutsideRsme(s.to_string(), t.to_string()));
                }
                Some((*s, a + b))
            }
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        };
        let horizon = self.tail_horizon().max(other.tail_horizon());
        let (mut entries, tx) = self.materialize(horizon);
        let (other_entries, ty) = other.materialize(horizon);
        for (i, c) in other_entries {
            let sum = match entries.remove(&i) {
                Some(prev) => &prev + &c,
                None => c,
            };
            entries.insert(i, sum);
        }
        let tail = match (tx, ty) {
            (Some(a), Some(b)) => Some(Tail { value: a.value + b.value, from: a.from }),
            (a, b) => a.or(b),
        };
        Ok(Self::build(self.space.clone(), entries, added, tail))
    }

    pub fn sub(&self, other: &RealVector) -> Result<RealVector> {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> RealVector {
        self.scale(&Rational::from_integer((-1).into()))
    }

    pub fn scale(&self, q: &Rational) -> RealVector {
        let entries = self.finite.iter().map(|(i, c)| (*i, c * q)).collect();
        let added = self.added.as_ref().map(|(s, c)| (*s, c * q));
        let tail = self.tail.as_ref().map(|t| Tail { value: &t.value * q, from: t.from });
        Self::build(self.space.clone(), entries, added, tail)
    }

    /// The part of `self` strictly before `pos` in the extended order.
    pub fn restrict_below(&self, pos: &ExtendedIndex) -> RealVector {
        let key = self.space.extended_key(pos);
        let entries = self
            .finite
            .iter()
            .filter(|(i, _)| self.space.extended_key(&ExtendedIndex::Base(*i)) < key)
            .cloned()
            .collect();
        let added = self
            .added
            .clone()
            .filter(|(s, _)| self.space.extended_key(&ExtendedIndex::Added(*s)) < key);
        let mut out = Self::build(self.space.clone(), entries, added, None);
        if let Some(t) = &self.tail {
            let ta = t.from.atom;
            if key.0 > ta {
                out.tail = Some(t.clone());
            } else if key.0 == ta {
                // tail labels L with 2L < key.1
                let last = if key.1 == i128::MIN { 0 } else { (key.1 - 1).div_euclid(2).max(0) as u64 };
                let mut entries: BTreeMap<Index, Coordinate> = out.finite.drain(..).collect();
                for k in t.from.inner..=last {
                    entries.insert(Index::new(ta, k), Coordinate::from(t.value.clone()));
                }
                out = Self::build(self.space.clone(), entries, out.added.take(), None);
            }
        }
        out
    }

    /// Keeps coordinates on `S`; the added coordinate at `i_T` survives iff `T ⊊ S`.
    pub fn truncate(&self, s: &Segment) -> RealVector {
        self.restrict_below(&ExtendedIndex::Added(*s))
    }

    pub fn without_added(&self) -> RealVector {
        RealVector { added: None, ..self.clone() }
    }

    pub fn is_rational(&self) -> bool {
        self.finite.iter().all(|(_, c)| c.is_rational()) && self.added.as_ref().is_none_or(|(_, c)| c.is_rational())
    }

    pub fn classify_membership(&self) -> Result<Membership> {
        if let Some((s, _)) = &self.added {
            return Err(invalid(format!("membership is defined for base vectors only; found added index at {s}")));
        }
        Ok(if !self.is_rational() {
            Membership::OutsideHahnProduct
        } else if self.tail.is_some() {
            Membership::InHahnProductOnly
        } else {
            Membership::InGamma
        })
    }

    pub fn is_in_gamma(&self) -> bool {
        self.classify_membership() == Ok(Membership::InGamma)
    }

    pub fn least_irrational_index(&self) -> Option<Index> {
        self.finite.iter().find(|(_, c)| !c.is_rational()).map(|(i, _)| *i)
    }
}

/// Checked lexicographic comparison.
pub fn cmp_lex(x: &RealVector, y: &RealVector) -> Result<Ordering> {
    if !same_space(&x.space, &y.space) {
        return Err(invalid("vectors over different index sets"));
    }
    Ok(x.lex_cmp(y))
}

impl fmt::Display for RealVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.finite.iter().map(|(i, c)| format!("{c}@{i}")).collect();
        if let Some((s, c)) = &self.added {
            parts.push(format!("{c}@i_[{s}]"));
        }
        if let Some(t) = &self.tail {
            parts.push(format!("{}@{}..", t.value, t.from));
        }
        write!(f, "[{}]", parts.join(", "))
    }
}

impl fmt::Debug for RealVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
