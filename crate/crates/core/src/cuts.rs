//! Cuts of `Γ = ℚ^(I)` in canonical form and their classification.
//!
//! Ball cuts `(a + H_S)^±` are stored by a center truncated to `S`; non-ball
//! cuts by a realization vector truncated to the least segment where it
//! leaves `Γ`. Either way two descriptors denote the same cut iff they are
//! equal.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::index::{CardinalValue, IndexSet, Segment};
use crate::small_ext::realize;
use crate::vector::{Membership, RealVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Side::Plus => '+',
            Side::Minus => '-',
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum CutDescriptor {
    Ball { center: RealVector, segment: Segment, side: Side },
    NonBall { realization: RealVector, segment: Segment },
}

/// Which side of a membership query an element of `Γ` falls on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Position {
    Left,
    Right,
}

impl CutDescriptor {
    /// `(truncate(center, S) + H_S)^side`.
    pub fn ball(center: RealVector, segment: Segment, side: Side) -> Result<Self> {
        center.space().validate_segment(&segment)?;
        if !center.is_in_gamma() {
            return Err(invalid(format!("ball center {center} is not an element of the group")));
        }
        let center = center.truncate(&segment);
        Ok(CutDescriptor::Ball { center, segment, side })
    }

    /// The cut of `Γ` induced by a vector outside it.
    pub fn nonball(x: &RealVector) -> Result<Self> {
        let segment = match x.classify_membership()? {
            Membership::InGamma => return Err(Error::NotARealization(format!("{x} lies in the group"))),
            Membership::OutsideHahnProduct => {
                let i = x.least_irrational_index().expect("irrational coordinate");
                x.space().segment_up_to(&i)
            }
            Membership::InHahnProductOnly => Segment::full(),
        };
        Ok(CutDescriptor::NonBall { realization: x.truncate(&segment), segment })
    }

    pub fn space(&self) -> &IndexSet {
        match self {
            CutDescriptor::Ball { center, .. } => center.space(),
            CutDescriptor::NonBall { realization, .. } => realization.space(),
        }
    }

    pub fn is_ball(&self) -> bool {
        matches!(self, CutDescriptor::Ball { .. })
    }

    /// `S` with `H(D) = H_S`.
    pub fn invariance_segment(&self) -> Segment {
        match self {
            CutDescriptor::Ball { segment, .. } | CutDescriptor::NonBall { segment, .. } => *segment,
        }
    }

    /// Segment of `H′`, the smallest convex subgroup strictly containing `H(D)`
    /// when `S` has a maximum, and `H(D)` itself otherwise.
    pub fn h_prime_segment(&self) -> Segment {
        let s = self.invariance_segment();
        let space = self.space();
        match space.seg_has_max(&s) {
            Some(m) => space.segment_below(&m),
            None => s,
        }
    }

    pub fn has_gap(&self) -> bool {
        self.space().seg_has_max(&self.invariance_segment()).is_some()
    }

    /// Whether the cut has an empty side.
    pub fn is_improper(&self) -> bool {
        self.space().is_empty_segment(&self.invariance_segment())
    }

    pub fn cut_type(&self) -> CutType {
        let gap = self.has_gap();
        match self {
            CutDescriptor::Ball { side: Side::Plus, .. } if gap => CutType::BallGapPlus,
            CutDescriptor::Ball { side: Side::Plus, .. } => CutType::BallNoGapPlus,
            CutDescriptor::Ball { side: Side::Minus, .. } if gap => CutType::BallGapMinus,
            CutDescriptor::Ball { side: Side::Minus, .. } => CutType::BallNoGapMinus,
            CutDescriptor::NonBall { .. } if gap => CutType::NonBallGap,
            CutDescriptor::NonBall { .. } => CutType::NonBallNoGap,
        }
    }

    /// Sign triple of a proper ball cut: side, `max(S)` exists, `min(S^c)` exists.
    pub fn subtype(&self) -> Option<Subtype> {
        match self {
            CutDescriptor::Ball { segment, side, .. } if !self.is_improper() => {
                let space = self.space();
                Some(Subtype {
                    side: *side,
                    has_max: space.seg_has_max(segment).is_some(),
                    has_min: space.comp_has_min(segment).is_some(),
                })
            }
            _ => None,
        }
    }

    /// Cofinality and coinitiality, symbolically and evaluated.
    pub fn kappa_lambda(&self) -> (CardinalReport, CardinalReport) {
        let space = self.space();
        let s = self.invariance_segment();
        let (ks, ls) = space.boundary_cardinals(&s);
        let eval = |sym: Symbolic| CardinalReport {
            symbolic: sym,
            value: match sym {
                Symbolic::Aleph0 => CardinalValue::Aleph0,
                Symbolic::KappaS | Symbolic::CofinS => ks,
                Symbolic::LambdaS => ls,
            },
        };
        let (k, l) = match self {
            CutDescriptor::NonBall { .. } if self.has_gap() => (Symbolic::Aleph0, Symbolic::Aleph0),
            CutDescriptor::NonBall { .. } => (Symbolic::CofinS, Symbolic::CofinS),
            // the table applies verbatim to improper cuts too, where it yields
            // κ = ℵ₀ or λ(S) on the full side and κ(S) = 0 on the empty one
            CutDescriptor::Ball { segment, side, .. } => {
                let has_max = space.seg_has_max(segment).is_some();
                let has_min = space.comp_has_min(segment).is_some();
                use Symbolic::*;
                match (side, has_max, has_min) {
                    (Side::Plus, true, true) => (Aleph0, Aleph0),
                    (Side::Plus, true, false) => (LambdaS, Aleph0),
                    (Side::Plus, false, true) => (Aleph0, KappaS),
                    (Side::Plus, false, false) => (LambdaS, KappaS),
                    (Side::Minus, true, true) => (Aleph0, Aleph0),
                    (Side::Minus, true, false) => (Aleph0, LambdaS),
                    (Side::Minus, false, true) => (KappaS, Aleph0),
                    (Side::Minus, false, false) => (KappaS, LambdaS),
                }
            }
        };
        (eval(k), eval(l))
    }

    pub fn classify(&self) -> ClassificationReport {
        self.classify_with(&CovarianceTable::default())
    }

    /// Classification with covariance columns read from `table`.
    pub fn classify_with(&self, table: &CovarianceTable) -> ClassificationReport {
        let type6 = self.cut_type();
        let row = table.row(type6);
        let h = self.invariance_segment();
        let hp = self.h_prime_segment();
        let pick = |g: Group| match g {
            Group::H => h,
            Group::HPrime => hp,
        };
        let (kappa, lambda) = self.kappa_lambda();
        ClassificationReport {
            type6,
            subtype: self.subtype(),
            invariance: h,
            h_prime: hp,
            vf: pick(row.vf),
            vf_stable: row.vf_stable,
            vi: pick(row.vi),
            vi_stable: row.vi_stable,
            kappa,
            lambda,
            rank_increases: crate::small_ext::rank_increases(self),
        }
    }

    /// `D + a`.
    pub fn shift(&self, a: &RealVector) -> Result<CutDescriptor> {
        if !a.is_in_gamma() {
            return Err(invalid(format!("shift {a} is not an element of the group")));
        }
        match self {
            CutDescriptor::Ball { center, segment, side } => CutDescriptor::ball(center.add(a)?, *segment, *side),
            CutDescriptor::NonBall { realization, .. } => CutDescriptor::nonball(&realization.add(a)?),
        }
    }

    /// `−D = (−E, −D)`.
    pub fn negate(&self) -> CutDescriptor {
        match self {
            CutDescriptor::Ball { center, segment, side } => {
                CutDescriptor::Ball { center: center.negate(), segment: *segment, side: side.flip() }
            }
            CutDescriptor::NonBall { realization, segment } => {
                CutDescriptor::NonBall { realization: realization.negate(), segment: *segment }
            }
        }
    }

    /// `ε·D + a` for `ε = ±1`.
    pub fn act(&self, epsilon: i8, a: &RealVector) -> Result<CutDescriptor> {
        match epsilon {
            1 => self.shift(a),
            -1 => self.negate().shift(a),
            _ => Err(invalid("epsilon must be 1 or -1")),
        }
    }

    /// Left iff `a` lies in the lower part of the cut.
    pub fn side_of(&self, a: &RealVector) -> Result<Position> {
        if !a.is_in_gamma() {
            return Err(invalid(format!("{a} is not an element of the group")));
        }
        let r = realize(self);
        Ok(match crate::vector::cmp_lex(a, &r)? {
            Ordering::Less => Position::Left,
            _ => Position::Right,
        })
    }
}

impl fmt::Display for CutDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutDescriptor::Ball { center, segment, side } => write!(f, "({center} + H[{segment}]){}", side.symbol()),
            CutDescriptor::NonBall { realization, .. } => write!(f, "cut of {realization}"),
        }
    }
}

impl fmt::Debug for CutDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A pair `(ε, a)` with `D2 = ε·D + a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitWitness {
    pub epsilon: i8,
    pub a: RealVector,
}

/// Finds `(ε, a)` relating two cuts under the action of `Γ ⋊ {±1}`.
pub fn orbit_equivalent(d: &CutDescriptor, d2: &CutDescriptor) -> Option<OrbitWitness> {
    if d.invariance_segment() != d2.invariance_segment() {
        return None;
    }
    let candidates: Vec<(i8, RealVector)> = match (d, d2) {
        (CutDescriptor::Ball { center, side, .. }, CutDescriptor::Ball { center: c2, side: s2, .. }) => {
            let eps: i8 = if side == s2 { 1 } else { -1 };
            let moved = if eps == 1 { center.clone() } else { center.negate() };
            vec![(eps, c2.sub(&moved).ok()?)]
        }
        (CutDescriptor::NonBall { realization: x, .. }, CutDescriptor::NonBall { realization: x2, .. }) => [1i8, -1]
            .into_iter()
            .filter_map(|eps| {
                let moved = if eps == 1 { x.clone() } else { x.negate() };
                let diff = x2.sub(&moved).ok()?;
                diff.is_in_gamma().then_some((eps, diff))
            })
            .collect(),
        _ => return None,
    };
    candidates
        .into_iter()
        .find(|(eps, a)| d.act(*eps, a).as_ref() == Ok(d2))
        .map(|(epsilon, a)| OrbitWitness { epsilon, a })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CutType {
    BallGapPlus,
    BallNoGapPlus,
    BallGapMinus,
    BallNoGapMinus,
    NonBallGap,
    NonBallNoGap,
}

impl CutType {
    pub const ALL: [CutType; 6] = [
        CutType::BallGapPlus,
        CutType::BallNoGapPlus,
        CutType::BallGapMinus,
        CutType::BallNoGapMinus,
        CutType::NonBallGap,
        CutType::NonBallNoGap,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CutType::BallGapPlus => "(b+G)+",
            CutType::BallNoGapPlus => "(b+NG)+",
            CutType::BallGapMinus => "(b+G)-",
            CutType::BallNoGapMinus => "(b+NG)-",
            CutType::NonBallGap => "nb+G",
            CutType::NonBallNoGap => "nb+NG",
        }
    }

    pub fn from_label(s: &str) -> Option<CutType> {
        CutType::ALL.into_iter().find(|t| t.label() == s)
    }

    pub fn is_ball(self) -> bool {
        !matches!(self, CutType::NonBallGap | CutType::NonBallNoGap)
    }

    pub fn negated(self) -> CutType {
        match self {
            CutType::BallGapPlus => CutType::BallGapMinus,
            CutType::BallGapMinus => CutType::BallGapPlus,
            CutType::BallNoGapPlus => CutType::BallNoGapMinus,
            CutType::BallNoGapMinus => CutType::BallNoGapPlus,
            t => t,
        }
    }
}

impl fmt::Display for CutType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Subtype {
    pub side: Side,
    pub has_max: bool,
    pub has_min: bool,
}

impl Subtype {
    pub fn parse(s: &str) -> Option<Subtype> {
        let inner = s.strip_prefix('(')?.strip_suffix(')')?;
        let signs: Vec<&str> = inner.split(',').collect();
        let sign = |t: &str| match t {
            "+" => Some(true),
            "-" => Some(false),
            _ => None,
        };
        match signs.as_slice() {
            [a, b, c] => Some(Subtype {
                side: if sign(a)? { Side::Plus } else { Side::Minus },
                has_max: sign(b)?,
                has_min: sign(c)?,
            }),
            _ => None,
        }
    }
}

impl fmt::Display for Subtype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |b: bool| if b { '+' } else { '-' };
        write!(f, "({},{},{})", self.side.symbol(), s(self.has_max), s(self.has_min))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbolic {
    Aleph0,
    KappaS,
    LambdaS,
    CofinS,
}

impl Symbolic {
    pub fn label(self) -> &'static str {
        match self {
            Symbolic::Aleph0 => "aleph0",
            Symbolic::KappaS => "kappa(S)",
            Symbolic::LambdaS => "lambda(S)",
            Symbolic::CofinS => "cofin(S)",
        }
    }

    pub fn from_label(s: &str) -> Option<Symbolic> {
        [Symbolic::Aleph0, Symbolic::KappaS, Symbolic::LambdaS, Symbolic::CofinS].into_iter().find(|x| x.label() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CardinalReport {
    pub symbolic: Symbolic,
    pub value: CardinalValue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    H,
    HPrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CovarianceRow {
    pub vf: Group,
    pub vf_stable: bool,
    pub vi: Group,
    pub vi_stable: bool,
}

/// Final and initial covariance groups per cut type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovarianceTable {
    rows: [(CutType, CovarianceRow); 6],
}

impl Default for CovarianceTable {
    fn default() -> Self {
        use Group::*;
        let r = |vf, vf_stable, vi, vi_stable| CovarianceRow { vf, vf_stable, vi, vi_stable };
        CovarianceTable {
            rows: [
                (CutType::BallGapPlus, r(H, true, HPrime, true)),
                (CutType::BallNoGapPlus, r(H, true, H, false)),
                (CutType::BallGapMinus, r(HPrime, true, H, true)),
                (CutType::BallNoGapMinus, r(H, false, H, true)),
                (CutType::NonBallGap, r(HPrime, true, HPrime, true)),
                (CutType::NonBallNoGap, r(H, false, H, false)),
            ],
        }
    }
}

impl CovarianceTable {
    pub fn row(&self, t: CutType) -> CovarianceRow {
        self.rows.iter().find(|(u, _)| *u == t).map(|(_, r)| *r).expect("every type has a row")
    }

    pub fn set_row(&mut self, t: CutType, row: CovarianceRow) {
        for (u, r) in self.rows.iter_mut() {
            if *u == t {
                *r = row;
            }
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = (CutType, CovarianceRow)> + '_ {
        self.rows.iter().copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub type6: CutType,
    pub subtype: Option<Subtype>,
    pub invariance: Segment,
    pub h_prime: Segment,
    pub vf: Segment,
    pub vf_stable: bool,
    pub vi: Segment,
    pub vi_stable: bool,
    pub kappa: CardinalReport,
    pub lambda: CardinalReport,
    pub rank_increases: bool,
}
