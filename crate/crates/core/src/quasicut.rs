//! Points of `Γ_sme`: elements of `Γ` and cuts, in one total order.

use std::cmp::Ordering;

use num_traits::One;

use crate::coordinate::{simplest_between, Rational};
use crate::cuts::{CutDescriptor, Side};
use crate::error::{invalid, Error, Result};
use crate::index::ExtendedIndex;
use crate::small_ext::realize;
use crate::vector::RealVector;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QuasiCutPoint {
    Interior(RealVector),
    CutPoint(CutDescriptor),
}

impl QuasiCutPoint {
    pub fn interior(a: RealVector) -> Result<Self> {
        if !a.is_in_gamma() {
            return Err(invalid(format!("{a} is not an element of the group")));
        }
        Ok(QuasiCutPoint::Interior(a))
    }

    pub fn realize(&self) -> RealVector {
        match self {
            QuasiCutPoint::Interior(a) => a.clone(),
            QuasiCutPoint::CutPoint(d) => realize(d),
        }
    }

    /// The point whose realization is `x`, up to `∼_sme`.
    pub fn from_rsme(x: &RealVector) -> Result<Self> {
        if let Some((s, c)) = x.added() {
            let base = x.without_added().truncate(s);
            if base.is_in_gamma() {
                let side = if c.is_positive() { Side::Plus } else { Side::Minus };
                return Ok(QuasiCutPoint::CutPoint(CutDescriptor::ball(base, *s, side)?));
            }
            return Ok(QuasiCutPoint::CutPoint(CutDescriptor::nonball(&base)?));
        }
        if x.is_in_gamma() {
            Ok(QuasiCutPoint::Interior(x.clone()))
        } else {
            Ok(QuasiCutPoint::CutPoint(CutDescriptor::nonball(x)?))
        }
    }
}

pub fn qcut_compare(p: &QuasiCutPoint, q: &QuasiCutPoint) -> Result<Ordering> {
    crate::vector::cmp_lex(&p.realize(), &q.realize())
}

/// Whether two elements of `R_sme` induce the same quasi-cut of `Γ`.
pub fn sme_equivalent(x: &RealVector, y: &RealVector) -> Result<bool> {
    Ok(QuasiCutPoint::from_rsme(x)? == QuasiCutPoint::from_rsme(y)?)
}

/// An element of `Γ` in `[p, q]`, strictly inside when one exists.
pub fn between(p: &QuasiCutPoint, q: &QuasiCutPoint) -> Result<RealVector> {
    let (rp, rq) = (p.realize(), q.realize());
    if crate::vector::cmp_lex(&rp, &rq)? != Ordering::Less {
        return Err(Error::Precondition(format!("between needs p < q, got {rp} and {rq}")));
    }
    if let QuasiCutPoint::Interior(a) = p {
        return Ok(a.clone());
    }
    if let Some(w) = strictly_between(&rp, &rq) {
        return Ok(w);
    }
    match q {
        QuasiCutPoint::Interior(b) => Ok(b.clone()),
        _ => Err(Error::Precondition(format!("no group element between {rp} and {rq}"))),
    }
}

/// Some `w ∈ Γ` with `x < w < y`, given `x < y`.
pub fn strictly_between(x: &RealVector, y: &RealVector) -> Option<RealVector> {
    let (pos, _) = y.leading_difference(x)?;
    let prefix = x.restrict_below(&pos);
    if !prefix.is_in_gamma() {
        return None;
    }
    let (cx, cy) = (x.coefficient(&pos), y.coefficient(&pos));
    let w = match pos {
        ExtendedIndex::Base(i) => {
            let t = simplest_between(&cx, false, &cy, false)?;
            let e = RealVector::unit(x.space().clone(), i).ok()?.scale(&t);
            prefix.add(&e).ok()?
        }
        ExtendedIndex::Added(s) => match (cx.signum(), cy.signum()) {
            (Ordering::Less, Ordering::Greater) => prefix,
            (Ordering::Less, Ordering::Equal) => {
                let rest = y.sub(&prefix).ok()?;
                prefix.add(&below(&rest, &s)?).ok()?
            }
            (Ordering::Equal, Ordering::Greater) => return strictly_between(&y.negate(), &x.negate()).map(|w| w.negate()),
            _ => return None,
        },
    };
    let ok = x.lex_cmp(&w) == Ordering::Less && w.lex_cmp(y) == Ordering::Less;
    ok.then_some(w)
}

/// An element of `Γ` supported past `i_S` and strictly below `y`, where `y`
/// is nonzero and supported past `i_S`.
fn below(y: &RealVector, s: &crate::index::Segment) -> Option<RealVector> {
    let space = y.space().clone();
    let pos = y.natural_valuation()?;
    let c = y.coefficient(&pos);
    if c.is_positive() {
        return Some(RealVector::zero(space));
    }
    match pos {
        ExtendedIndex::Base(j) => {
            let t = Rational::from_integer(c.floor()) - Rational::one();
            Some(RealVector::unit(space, j).ok()?.scale(&t))
        }
        ExtendedIndex::Added(t) => {
            let j = space.member_between(s, &t)?;
            Some(RealVector::unit(space, j).ok()?.negate())
        }
    }
}
