//! Exact scalars for vector coordinates: the field `ℚ(√2)`.
//!
//! A [`Coordinate`] is `a + b·√2` with `a`, `b` arbitrary-precision rationals.
//! Since `√2` is irrational the representation is unique, so equality is
//! structural and irrationality is just `b ≠ 0`. Signs are decided with
//! integer arithmetic only.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coordinate {
    rational: Rational,
    surd: Rational,
}

impl Coordinate {
    pub fn new(rational: Rational, surd: Rational) -> Self {
        Coordinate { rational, surd }
    }

    pub fn zero() -> Self {
        Coordinate::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        Coordinate::from(Rational::one())
    }

    /// `√2`
    pub fn sqrt2() -> Self {
        Coordinate::new(Rational::zero(), Rational::one())
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn surd_part(&self) -> &Rational {
        &self.surd
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn signum(&self) -> Ordering {
        let a = self.rational.cmp(&Rational::zero());
        let b = self.surd.cmp(&Rational::zero());
        match (a, b) {
            (_, Ordering::Equal) => a,
            (Ordering::Equal, _) => b,
            _ if a == b => a,
            _ => {
                // opposite signs: compare a² with 2b²
                let lhs = &self.rational * &self.rational;
                let rhs = &self.surd * &self.surd * int(2);
                if lhs > rhs {
                    a
                } else {
                    b
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn scale(&self, q: &Rational) -> Coordinate {
        Coordinate::new(&self.rational * q, &self.surd * q)
    }

    /// Largest integer not exceeding `self`.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.rational.floor().to_integer();
        }
        // floor(sqrt(N)/q) = floor(isqrt(N)/q) for integers N ≥ 0, q > 0
        let b = self.surd.abs();
        let n = b.numer() * b.numer() * BigInt::from(2);
        let d = b.denom();
        let root_floor = Rational::new(n.sqrt(), d.clone()).floor().to_integer();
        let surd_floor = if self.surd.is_positive() {
            root_floor
        } else {
            // -x with x irrational: floor(-x) = -floor(x) - 1
            -root_floor - BigInt::one()
        };
        let mut guess = self.rational.floor().to_integer() + surd_floor;
        // guess is floor(self) or floor(self) - 1
        while Coordinate::from(Rational::from_integer(&guess + 1)) <= *self {
            guess += 1;
        }
        while Coordinate::from(Rational::from_integer(guess.clone())) > *self {
            guess -= 1;
        }
        guess
    }
}

impl From<Rational> for Coordinate {
    fn from(q: Rational) -> Self {
        Coordinate::new(q, Rational::zero())
    }
}

impl From<i64> for Coordinate {
    fn from(n: i64) -> Self {
        Coordinate::from(int(n))
    }
}

impl Add for &Coordinate {
    type Output = Coordinate;
    fn add(self, rhs: &Coordinate) -> Coordinate {
        Coordinate::new(&self.rational + &rhs.rational, &self.surd + &rhs.surd)
    }
}

impl Add for Coordinate {
    type Output = Coordinate;
    fn add(self, rhs: Coordinate) -> Coordinate {
        &self + &rhs
    }
}

impl Sub for &Coordinate {
    type Output = Coordinate;
    fn sub(self, rhs: &Coordinate) -> Coordinate {
        Coordinate::new(&self.rational - &rhs.rational, &self.surd - &rhs.surd)
    }
}

impl Sub for Coordinate {
    type Output = Coordinate;
    fn sub(self, rhs: Coordinate) -> Coordinate {
        &self - &rhs
    }
}

impl Neg for &Coordinate {
    type Output = Coordinate;
    fn neg(self) -> Coordinate {
        Coordinate::new(-&self.rational, -&self.surd)
    }
}

impl Neg for Coordinate {
    type Output = Coordinate;
    fn neg(self) -> Coordinate {
        -&self
    }
}

impl Mul<&Rational> for &Coordinate {
    type Output = Coordinate;
    fn mul(self, rhs: &Rational) -> Coordinate {
        self.scale(rhs)
    }
}

impl PartialOrd for Coordinate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coordinate {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            write!(f, "{}", self.rational)
        } else if self.rational.is_zero() {
            write!(f, "{}*r2", self.surd)
        } else if self.surd.is_negative() {
            write!(f, "{}-{}*r2", self.rational, -&self.surd)
        } else {
            write!(f, "{}+{}*r2", self.rational, self.surd)
        }
    }
}

impl fmt::Debug for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn error(&self, message: &str) -> Error {
        let found = match self.peek() {
            Some(c) => format!("found '{}'", c as char),
            None => "found end of input".to_string(),
        };
        Error::Parse { position: self.pos, message: format!("{message}, {found}") }
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digit run parses"))
    }

    // RAT := ['-'] DIGITS ['/' DIGITS]
    fn rational(&mut self) -> Result<Rational> {
        let negative = self.peek() == Some(b'-');
        if negative {
            self.pos += 1;
        }
        let numer = self.digits()?;
        let denom = if self.peek() == Some(b'/') {
            self.pos += 1;
            let at = self.pos;
            let d = self.digits()?;
            if d.is_zero() {
                return Err(Error::Parse { position: at, message: "zero denominator".into() });
            }
            d
        } else {
            BigInt::one()
        };
        let q = Rational::new(numer, denom);
        Ok(if negative { -q } else { q })
    }

    fn keyword(&mut self, word: &[u8]) -> Result<()> {
        for &c in word {
            if self.peek() != Some(c) {
                return Err(self.error(&format!("expected '{}'", std::str::from_utf8(word).unwrap())));
            }
            self.pos += 1;
        }
        Ok(())
    }

    fn end(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("unexpected trailing input")),
        }
    }
}

/// Parses `RAT := ['-'] DIGITS ['/' DIGITS]`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let mut cur = Cursor { bytes: text.as_bytes(), pos: 0 };
    let q = cur.rational()?;
    cur.end()?;
    Ok(q)
}

/// Parses `COORD := RAT | RAT ('+'|'-') RAT '*' 'r2' | RAT '*' 'r2'`.
pub fn parse_coordinate(text: &str) -> Result<Coordinate> {
    let mut cur = Cursor { bytes: text.as_bytes(), pos: 0 };
    let first = cur.rational()?;
    match cur.peek() {
        None => Ok(Coordinate::from(first)),
        Some(b'*') => {
            cur.keyword(b"*r2")?;
            cur.end()?;
            Ok(Coordinate::new(Rational::zero(), first))
        }
        Some(sign @ (b'+' | b'-')) => {
            cur.pos += 1;
            let second = cur.rational()?;
            cur.keyword(b"*r2")?;
            cur.end()?;
            let surd = if sign == b'-' { -second } else { second };
            Ok(Coordinate::new(first, surd))
        }
        Some(_) => Err(cur.error("expected '+', '-', '*r2' or end of input")),
    }
}

fn frac(p: &BigInt, q: &BigInt) -> Coordinate {
    Coordinate::from(Rational::new(p.clone(), q.clone()))
}

/// Largest `k ≥ 1` with `pred(k)`, given `pred(1)` holds and `pred` is monotone.
fn gallop(pred: impl Fn(&BigInt) -> bool) -> BigInt {
    let mut lo = BigInt::one();
    let mut hi = BigInt::from(2);
    while pred(&hi) {
        lo = hi.clone();
        hi *= 2;
    }
    // pred(lo) && !pred(hi)
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2;
        if pred(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// The rational of least denominator (then least magnitude) in the interval
/// between `lo` and `hi`, each end open or closed as flagged. Found by
/// Stern–Brocot descent. `None` if the interval is empty.
pub fn simplest_between(
    lo: &Coordinate,
    lo_closed: bool,
    hi: &Coordinate,
    hi_closed: bool,
) -> Option<Rational> {
    let above = |c: &Coordinate| match c.cmp(lo) {
        Ordering::Greater => true,
        Ordering::Equal => lo_closed,
        Ordering::Less => false,
    };
    let below = |c: &Coordinate| match c.cmp(hi) {
        Ordering::Less => true,
        Ordering::Equal => hi_closed,
        Ordering::Greater => false,
    };
    match lo.cmp(hi) {
        Ordering::Greater => return None,
        Ordering::Equal if !(lo_closed && hi_closed) => return None,
        _ => {}
    }
    let zero = Coordinate::zero();
    if above(&zero) && below(&zero) {
        return Some(Rational::zero());
    }
    if !below(&zero) {
        // interval lies to the left of zero
        return simplest_between(&-hi, hi_closed, &-lo, lo_closed).map(|q| -q);
    }
    let (mut lp, mut lq) = (BigInt::zero(), BigInt::one());
    let (mut rp, mut rq) = (BigInt::one(), BigInt::zero());
    loop {
        let (mp, mq) = (&lp + &rp, &lq + &rq);
        let m = frac(&mp, &mq);
        if !above(&m) {
            let k = gallop(|k| !above(&frac(&(&lp + k * &rp), &(&lq + k * &rq))));
            lp += &k * &rp;
            lq += &k * &rq;
        } else if !below(&m) {
            let k = gallop(|k| !below(&frac(&(&rp + k * &lp), &(&rq + k * &lq))));
            rp += &k * &lp;
            rq += &k * &lq;
        } else {
            return Some(Rational::new(mp, mq));
        }
    }
}

/// Strictly increasing rationals converging to the irrational `xi` from
/// below: the successive left endpoints of the Stern–Brocot descent.
pub fn lower_approximants(xi: &Coordinate, count: usize) -> Result<Vec<Rational>> {
    if xi.is_rational() {
        return Err(Error::Precondition(format!("{xi} is rational")));
    }
    let base = xi.floor();
    let (mut lp, mut lq) = (base.clone(), BigInt::one());
    let (mut rp, mut rq) = (base + 1, BigInt::one());
    let mut out = Vec::with_capacity(count);
    if count > 0 {
        out.push(Rational::new(lp.clone(), lq.clone()));
    }
    while out.len() < count {
        let (mp, mq) = (&lp + &rp, &lq + &rq);
        if frac(&mp, &mq) < *xi {
            out.push(Rational::new(mp.clone(), mq.clone()));
            lp = mp;
            lq = mq;
        } else {
            rp = mp;
            rq = mq;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Coordinate {
        parse_coordinate(s).unwrap()
    }

    #[test]
    fn sqrt2_below_three_halves() {
        // 2·2² = 8 < 9 = 3²
        assert!(Coordinate::sqrt2() < Coordinate::from(rat(3, 2)));
        assert!(Coordinate::sqrt2() > Coordinate::from(rat(7, 5)));
    }

    #[test]
    fn sign_with_mixed_parts() {
        assert!(c("-1+1*r2").is_positive());
        assert!(c("1-1*r2").is_negative());
        assert!(c("3/2-1*r2").is_positive());
        assert!(c("-3/2+1*r2").is_negative());
        assert_eq!(c("0").signum(), Ordering::Equal);
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "-3/4", "5", "1*r2", "-1/2*r2", "1+1*r2", "2/3-5/7*r2"] {
            assert_eq!(c(s).to_string(), s);
        }
        assert_eq!(c("2/4").to_string(), "1/2");
        assert_eq!(c("1+-2*r2").to_string(), "1-2*r2");
    }

    #[test]
    fn parse_errors_report_position() {
        match parse_coordinate("1//2") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_coordinate("").is_err());
        assert!(parse_coordinate("1/0").is_err());
        assert!(parse_coordinate("1*r3").is_err());
        assert!(parse_coordinate("1+2").is_err());
        assert!(parse_rational("1*r2").is_err());
    }

    #[test]
    fn floor_of_surds() {
        assert_eq!(Coordinate::sqrt2().floor(), BigInt::from(1));
        assert_eq!((-Coordinate::sqrt2()).floor(), BigInt::from(-2));
        assert_eq!(c("10-7*r2").floor(), BigInt::from(0)); // 10 - 9.899
        assert_eq!(c("-7/2").floor(), BigInt::from(-4));
        assert_eq!(c("100*r2").floor(), BigInt::from(141));
    }

    #[test]
    fn stern_brocot_picks_simplest() {
        let s2 = Coordinate::sqrt2();
        assert_eq!(simplest_between(&s2, false, &Coordinate::from(2), false), Some(rat(3, 2)));
        assert_eq!(simplest_between(&s2, false, &Coordinate::from(2), true), Some(int(2)));
        assert_eq!(simplest_between(&Coordinate::from(-1), false, &Coordinate::zero(), true), Some(int(0)));
        assert_eq!(simplest_between(&Coordinate::from(-1), false, &Coordinate::zero(), false), Some(rat(-1, 2)));
        assert_eq!(simplest_between(&Coordinate::from(0), false, &Coordinate::from(1), false), Some(rat(1, 2)));
        assert_eq!(simplest_between(&c("1000+1*r2"), false, &c("1002"), false), Some(rat(2003, 2)));
        assert_eq!(simplest_between(&Coordinate::from(1), false, &Coordinate::from(1), true), None);
        assert_eq!(simplest_between(&Coordinate::from(1), true, &Coordinate::from(1), true), Some(int(1)));
    }

    #[test]
    fn lower_approximants_increase_to_sqrt2() {
        let seq = lower_approximants(&Coordinate::sqrt2(), 50).unwrap();
        assert_eq!(&seq[..3], &[int(1), rat(4, 3), rat(7, 5)]);
        assert!(seq.windows(2).all(|w| w[0] < w[1]));
        let last = Coordinate::from(seq[49].clone());
        assert!(last < Coordinate::sqrt2());
        assert!(Coordinate::sqrt2() - last < Coordinate::from(rat(1, 1_000_000_000)));
    }
}
