//! Finitely described ordered index sets.
//!
//! An [`IndexSet`] is a concatenation of atoms, each a finite chain, a copy of
//! `ω`, or a copy of `ω*`. Its initial segments ([`Segment`]) encode the
//! convex subgroups of the Hahn sum over it: the segment `S` stands for the
//! subgroup `H_S` of vectors vanishing on `S`. Larger segments mean smaller
//! subgroups.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// Finite chain `1 < 2 < ... < n`, `n ≥ 1`.
    Fin(u64),
    /// `1 < 2 < 3 < ...`
    Omega,
    /// `... < 3 < 2 < 1`, labels compare in reverse.
    OmegaOpp,
}

/// Position in an [`IndexSet`]: 1-based atom number and label inside the atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Index {
    pub atom: usize,
    pub inner: u64,
}

impl Index {
    pub const fn new(atom: usize, inner: u64) -> Self {
        Index { atom, inner }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.atom, self.inner)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Within {
    Empty,
    /// Fin/Omega: labels `≤ k`. OmegaOpp: labels `≥ k`, the `ω*`-initial part.
    UpTo(u64),
}

/// Sentinel atom number of the full segment.
const FULL: usize = usize::MAX;

/// Initial segment in canonical form: every atom before `atom` is included,
/// `within` says how much of `atom` is, and nothing after it. A wholly
/// included atom is always pushed to the next atom's `Empty`, so each
/// downward-closed set has exactly one encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    atom: usize,
    within: Within,
}

impl Segment {
    pub const EMPTY_BEFORE_FIRST: Segment = Segment { atom: 1, within: Within::Empty };

    pub const fn full() -> Segment {
        Segment { atom: FULL, within: Within::Empty }
    }

    pub fn is_full(&self) -> bool {
        self.atom == FULL
    }

    /// True for the empty segment of a nonempty index set.
    pub fn is_empty(&self) -> bool {
        self.atom == 1 && self.within == Within::Empty
    }

    pub fn atom(&self) -> Option<usize> {
        (!self.is_full()).then_some(self.atom)
    }

    pub fn within(&self) -> Within {
        self.within
    }

}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.atom, self.within) {
            (FULL, _) => write!(f, "full"),
            (1, Within::Empty) => write!(f, "empty"),
            (a, Within::Empty) => write!(f, "all({})", a - 1),
            (a, Within::UpTo(k)) => write!(f, "upto({a},{k})"),
        }
    }
}

/// Element of the one-added-element hull: an index of `I` or the formal
/// element `i_S` sitting right after `S` and before its complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedIndex {
    Base(Index),
    Added(Segment),
}

impl fmt::Display for ExtendedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedIndex::Base(i) => write!(f, "{i}"),
            ExtendedIndex::Added(s) => write!(f, "i_[{s}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CardinalValue {
    Zero,
    One,
    Aleph0,
}

impl fmt::Display for CardinalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CardinalValue::Zero => write!(f, "0"),
            CardinalValue::One => write!(f, "1"),
            CardinalValue::Aleph0 => write!(f, "ℵ₀"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IndexSet {
    atoms: Vec<Atom>,
}

impl IndexSet {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.contains(&Atom::Fin(0)) {
            return Err(invalid("Fin(n) requires n >= 1"));
        }
        Ok(IndexSet { atoms })
    }

    /// `I = Fin(1)`, the index set of `ℚ`.
    pub fn rank_one() -> Self {
        IndexSet { atoms: vec![Atom::Fin(1)] }
    }

    pub fn omega() -> Self {
        IndexSet { atoms: vec![Atom::Omega] }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Kind of the 1-based atom `pos`.
    pub fn atom(&self, pos: usize) -> Option<Atom> {
        pos.checked_sub(1).and_then(|p| self.atoms.get(p)).copied()
    }

    /// Atom number of the trailing `ω` atom, the only place constant tails live.
    pub fn tail_atom(&self) -> Option<usize> {
        match self.atoms.last() {
            Some(Atom::Omega) => Some(self.atoms.len()),
            _ => None,
        }
    }

    pub fn validate_index(&self, i: &Index) -> Result<()> {
        let atom = self
            .atom(i.atom)
            .ok_or_else(|| invalid(format!("index {i}: no atom {} in an index set of {} atoms", i.atom, self.atoms.len())))?;
        if i.inner == 0 {
            return Err(invalid(format!("index {i}: labels start at 1")));
        }
        if let Atom::Fin(n) = atom {
            if i.inner > n {
                return Err(invalid(format!("index {i}: Fin({n}) has no label {}", i.inner)));
            }
        }
        Ok(())
    }

    pub fn validate_segment(&self, s: &Segment) -> Result<()> {
        let canonical = self.segment(s.atom, s.within)?;
        if canonical != *s {
            return Err(invalid(format!("segment {s} is not in canonical form (expected {canonical})")));
        }
        Ok(())
    }

    fn label_key(&self, atom: usize, label: u64) -> i128 {
        match self.atom(atom) {
            Some(Atom::OmegaOpp) => -2 * label as i128,
            _ => 2 * label as i128,
        }
    }

    fn base_key(&self, i: &Index) -> (usize, i128) {
        (i.atom, self.label_key(i.atom, i.inner))
    }

    fn added_key(&self, s: &Segment) -> (usize, i128) {
        match s.within {
            Within::Empty => (s.atom, i128::MIN),
            Within::UpTo(k) => (s.atom, self.label_key(s.atom, k) + 1),
        }
    }

    pub(crate) fn extended_key(&self, u: &ExtendedIndex) -> (usize, i128) {
        match u {
            ExtendedIndex::Base(i) => self.base_key(i),
            ExtendedIndex::Added(s) => self.added_key(s),
        }
    }

    /// Order of two indices already known to be valid.
    pub fn compare(&self, i: &Index, j: &Index) -> Ordering {
        self.base_key(i).cmp(&self.base_key(j))
    }

    pub fn compare_extended(&self, u: &ExtendedIndex, v: &ExtendedIndex) -> Ordering {
        self.extended_key(u).cmp(&self.extended_key(v))
    }

    /// Inclusion order of segments (a total order).
    pub fn compare_segments(&self, s: &Segment, t: &Segment) -> Ordering {
        self.added_key(s).cmp(&self.added_key(t))
    }

    pub fn cmp_index(&self, i: &Index, j: &Index) -> Result<Ordering> {
        self.validate_index(i)?;
        self.validate_index(j)?;
        Ok(self.compare(i, j))
    }

    pub fn validate_extended(&self, u: &ExtendedIndex) -> Result<()> {
        match u {
            ExtendedIndex::Base(i) => self.validate_index(i),
            ExtendedIndex::Added(s) => self.validate_segment(s),
        }
    }

    pub fn cmp_extended(&self, u: &ExtendedIndex, v: &ExtendedIndex) -> Result<Ordering> {
        self.validate_extended(u)?;
        self.validate_extended(v)?;
        Ok(self.compare_extended(u, v))
    }

    /// Canonical segment from an atom number and the part of it included.
    pub fn segment(&self, atom: usize, within: Within) -> Result<Segment> {
        if atom == 0 {
            return Err(invalid("atom numbers start at 1"));
        }
        if atom == FULL {
            return match within {
                Within::Empty => Ok(Segment::full()),
                Within::UpTo(_) => Err(invalid("the full segment has no partial atom")),
            };
        }
        let next = |a: usize| {
            if a + 1 > self.atoms.len() {
                Segment::full()
            } else {
                Segment { atom: a + 1, within: Within::Empty }
            }
        };
        let Some(kind) = self.atom(atom) else {
            return match (atom == self.atoms.len() + 1, within) {
                (true, Within::Empty) => Ok(Segment::full()),
                _ => Err(invalid(format!("segment refers to atom {atom} of an index set of {} atoms", self.atoms.len()))),
            };
        };
        Ok(match (kind, within) {
            (_, Within::Empty) => Segment { atom, within },
            (Atom::Fin(n), Within::UpTo(k)) => match k {
                0 => Segment { atom, within: Within::Empty },
                k if k > n => return Err(invalid(format!("Fin({n}) has no label {k}"))),
                k if k == n => next(atom),
                _ => Segment { atom, within },
            },
            (Atom::Omega, Within::UpTo(0)) => Segment { atom, within: Within::Empty },
            (Atom::Omega, Within::UpTo(_)) => Segment { atom, within },
            (Atom::OmegaOpp, Within::UpTo(0)) => return Err(invalid("labels start at 1")),
            (Atom::OmegaOpp, Within::UpTo(1)) => next(atom),
            (Atom::OmegaOpp, Within::UpTo(_)) => Segment { atom, within },
        })
    }

    /// Segment consisting of atoms `1..=atom`.
    pub fn through_atom(&self, atom: usize) -> Result<Segment> {
        self.segment(atom + 1, Within::Empty)
    }

    pub fn empty_segment(&self) -> Segment {
        self.segment(1, Within::Empty).expect("atom 1 is always addressable")
    }

    /// `I_{≤ i}`
    pub fn segment_up_to(&self, i: &Index) -> Segment {
        self.segment(i.atom, Within::UpTo(i.inner)).expect("valid index")
    }

    /// `I_{< i}`
    pub fn segment_below(&self, i: &Index) -> Segment {
        let within = match self.atom(i.atom) {
            Some(Atom::OmegaOpp) => Within::UpTo(i.inner + 1),
            _ => Within::UpTo(i.inner - 1),
        };
        self.segment(i.atom, within).expect("valid index")
    }

    pub fn contains(&self, s: &Segment, i: &Index) -> bool {
        if i.atom < s.atom {
            return true;
        }
        if i.atom > s.atom {
            return false;
        }
        match (s.within, self.atom(i.atom)) {
            (Within::Empty, _) => false,
            (Within::UpTo(k), Some(Atom::OmegaOpp)) => i.inner >= k,
            (Within::UpTo(k), _) => i.inner <= k,
        }
    }

    /// Whether `s` denotes the empty set (for the empty index set, the full segment does).
    pub fn is_empty_segment(&self, s: &Segment) -> bool {
        s.is_empty() || (s.is_full() && self.is_empty())
    }

    /// `S ⊊ T`
    pub fn strictly_within(&self, s: &Segment, t: &Segment) -> bool {
        self.compare_segments(s, t) == Ordering::Less
    }

    fn max_of_atom(&self, atom: usize) -> Option<Index> {
        match self.atom(atom)? {
            Atom::Fin(n) => Some(Index::new(atom, n)),
            Atom::Omega => None,
            Atom::OmegaOpp => Some(Index::new(atom, 1)),
        }
    }

    fn min_of_atom(&self, atom: usize) -> Option<Index> {
        match self.atom(atom)? {
            Atom::Fin(_) | Atom::Omega => Some(Index::new(atom, 1)),
            Atom::OmegaOpp => None,
        }
    }

    pub fn seg_has_max(&self, s: &Segment) -> Option<Index> {
        if s.is_full() {
            return self.max_of_atom(self.atoms.len());
        }
        match s.within {
            Within::UpTo(k) => Some(Index::new(s.atom, k)),
            Within::Empty => self.max_of_atom(s.atom - 1),
        }
    }

    pub fn comp_has_min(&self, s: &Segment) -> Option<Index> {
        if s.is_full() {
            return None;
        }
        match (s.within, self.atom(s.atom)?) {
            (Within::Empty, _) => self.min_of_atom(s.atom),
            (Within::UpTo(k), Atom::OmegaOpp) => Some(Index::new(s.atom, k - 1)),
            (Within::UpTo(k), _) => Some(Index::new(s.atom, k + 1)),
        }
    }

    /// Cofinality of `S` and coinitiality of its complement, with the
    /// convention that an empty complement counts as 1.
    pub fn boundary_cardinals(&self, s: &Segment) -> (CardinalValue, CardinalValue) {
        let kappa = if self.is_empty_segment(s) {
            CardinalValue::Zero
        } else if self.seg_has_max(s).is_some() {
            CardinalValue::One
        } else {
            CardinalValue::Aleph0
        };
        let lambda = if s.is_full() || self.comp_has_min(s).is_some() {
            CardinalValue::One
        } else {
            CardinalValue::Aleph0
        };
        (kappa, lambda)
    }

    /// Some index in `T ∖ S`, for `S ⊊ T`.
    pub fn member_between(&self, s: &Segment, t: &Segment) -> Option<Index> {
        if !self.strictly_within(s, t) {
            return None;
        }
        if let Some(m) = self.comp_has_min(s) {
            return self.contains(t, &m).then_some(m);
        }
        // S ends just before an ω* atom (or inside one, which has a min)
        let atom = s.atom;
        if t.atom == atom {
            match t.within {
                Within::UpTo(k) => Some(Index::new(atom, k)),
                Within::Empty => None,
            }
        } else {
            Some(Index::new(atom, 1))
        }
    }

    fn labels(&self, atom: usize, max_label: u64) -> std::ops::RangeInclusive<u64> {
        match self.atom(atom) {
            Some(Atom::Fin(n)) => 1..=n.min(max_label),
            _ => 1..=max_label,
        }
    }

    /// All indices with label at most `max_label`, in increasing order.
    pub fn indices_up_to(&self, max_label: u64) -> Vec<Index> {
        let mut out: Vec<Index> = (1..=self.atoms.len())
            .flat_map(|a| self.labels(a, max_label).map(move |k| Index::new(a, k)))
            .collect();
        out.sort_by(|i, j| self.compare(i, j));
        out
    }

    /// All segments whose boundary label is at most `max_label`, in increasing order.
    pub fn segments_up_to(&self, max_label: u64) -> Vec<Segment> {
        let mut out = vec![self.empty_segment()];
        for a in 1..=self.atoms.len() {
            for k in self.labels(a, max_label) {
                if let Ok(s) = self.segment(a, Within::UpTo(k)) {
                    out.push(s);
                }
            }
            out.push(self.through_atom(a).expect("valid atom"));
        }
        out.sort_by(|s, t| self.compare_segments(s, t));
        out.dedup();
        out
    }
}
