//! The small extension `Γ(D) = ℤ·x_D ⊕ Γ` generated by a cut.
//!
//! Elements are ordered through a realization of `x_D` in `R_sme`: a ball cut
//! `(b + H_S)^±` is realized by `b ± e_S`, a non-ball cut by its own vector.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::coordinate::{Coordinate, Rational};
use crate::cuts::{CutDescriptor, Position, Side};
use crate::error::{invalid, Result};
use crate::index::ExtendedIndex;
use crate::vector::RealVector;

pub fn realize(d: &CutDescriptor) -> RealVector {
    match d {
        CutDescriptor::Ball { center, segment, side } => {
            let c = match side {
                Side::Plus => Coordinate::one(),
                Side::Minus => -Coordinate::one(),
            };
            let e = RealVector::added_unit(center.space().clone(), *segment, c).expect("canonical segment");
            center.add(&e).expect("center has no added coordinate")
        }
        CutDescriptor::NonBall { realization, .. } => realization.clone(),
    }
}

/// Whether `Γ(D)` has one more archimedean class than `Γ`.
pub fn rank_increases(d: &CutDescriptor) -> bool {
    d.is_ball()
}

/// `m·x_D + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaDElement {
    pub cut: CutDescriptor,
    pub m: BigInt,
    pub b: RealVector,
}

impl GammaDElement {
    pub fn new(cut: CutDescriptor, m: BigInt, b: RealVector) -> Result<Self> {
        if !b.is_in_gamma() {
            return Err(invalid(format!("{b} is not an element of the group")));
        }
        Ok(GammaDElement { cut, m, b })
    }

    pub fn realization(&self) -> RealVector {
        let x = realize(&self.cut).scale(&BigRational::from_integer(self.m.clone()));
        x.add(&self.b).expect("group elements have no added coordinate")
    }

    fn check_same_cut(&self, other: &GammaDElement) -> Result<()> {
        if self.cut != other.cut {
            return Err(invalid(format!("elements of different extensions: {} and {}", self.cut, other.cut)));
        }
        Ok(())
    }

    pub fn add(&self, other: &GammaDElement) -> Result<GammaDElement> {
        self.check_same_cut(other)?;
        Ok(GammaDElement { cut: self.cut.clone(), m: &self.m + &other.m, b: self.b.add(&other.b)? })
    }

    pub fn negate(&self) -> GammaDElement {
        GammaDElement { cut: self.cut.clone(), m: -&self.m, b: self.b.negate() }
    }

    /// The same element written over `ε·D + a`: `x_D = ε·(x_{εD+a} − a)`.
    pub fn transport(&self, epsilon: i8, a: &RealVector) -> Result<GammaDElement> {
        let target = self.cut.act(epsilon, a)?;
        let em = BigInt::from(epsilon) * &self.m;
        let b = self.b.sub(&a.scale(&BigRational::from_integer(em.clone())))?;
        Ok(GammaDElement { cut: target, m: em, b })
    }
}

pub fn gd_compare(u: &GammaDElement, v: &GammaDElement) -> Result<Ordering> {
    u.check_same_cut(v)?;
    let dm = BigRational::from_integer(&u.m - &v.m);
    let diff = realize(&u.cut).scale(&dm).add(&u.b.sub(&v.b)?)?;
    Ok(diff.signum())
}

/// Order of `Γ(D)` from membership queries alone: `k·x_D < c` iff `c/k` lies
/// above the cut (for `k > 0`) or below it (for `k < 0`).
pub fn gd_compare_by_membership(u: &GammaDElement, v: &GammaDElement) -> Result<Ordering> {
    u.check_same_cut(v)?;
    let k = &u.m - &v.m;
    let c = v.b.sub(&u.b)?;
    if k.is_zero() {
        return crate::vector::cmp_lex(&u.b, &v.b);
    }
    let q: Rational = BigRational::from_integer(k.clone()).recip();
    let side = u.cut.side_of(&c.scale(&q))?;
    let below = if k.is_positive() { side == Position::Right } else { side == Position::Left };
    Ok(if below { Ordering::Less } else { Ordering::Greater })
}

pub fn gd_valuation(u: &GammaDElement) -> Option<ExtendedIndex> {
    u.realization().natural_valuation()
}
