//! Brute-force verification on seeded samples.
//!
//! Everything here works from definitions: a cut is only queried through
//! comparisons against its realization, never through the classification
//! tables it is meant to check.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coordinate::{lower_approximants, rat, simplest_between, Coordinate, Rational};
use crate::cuts::{CovarianceTable, CutDescriptor, CutType};
use crate::error::{invalid, Error, Result};
use crate::index::{ExtendedIndex, Index, IndexSet, Segment};
use crate::small_ext::realize;
use crate::vector::RealVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub max_denominator: u64,
    pub max_support: usize,
    pub max_label: u64,
    pub count: usize,
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { max_denominator: 8, max_support: 4, max_label: 6, count: 200, seed: 0 }
    }
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_denominator == 0 || self.max_support == 0 || self.max_label == 0 || self.count == 0 {
            return Err(invalid("sample bounds must be at least 1"));
        }
        Ok(())
    }
}

fn random_rational(rng: &mut ChaCha8Rng, max_den: u64) -> Rational {
    let m = max_den as i64;
    rat(rng.gen_range(-m..=m), rng.gen_range(1..=m))
}

/// Finite-support rational vectors: `0`, every `e_i` with label at most
/// `max_label`, then distinct random vectors until `count` is reached.
pub fn sample_elements(space: &Arc<IndexSet>, cfg: &SampleConfig) -> Result<Vec<RealVector>> {
    cfg.validate()?;
    let universe = space.indices_up_to(cfg.max_label);
    let mut out = vec![RealVector::zero(space.clone())];
    for i in &universe {
        out.push(RealVector::unit(space.clone(), *i)?);
    }
    let mut seen: HashSet<RealVector> = out.iter().cloned().collect();
    if universe.is_empty() {
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut attempts = 0;
    while out.len() < cfg.count && attempts < cfg.count * 20 {
        attempts += 1;
        let k = rng.gen_range(0..=cfg.max_support.min(universe.len()));
        let entries = universe
            .choose_multiple(&mut rng, k)
            .map(|i| (*i, random_rational(&mut rng, cfg.max_denominator)))
            .collect();
        let v = RealVector::from_rationals(space.clone(), entries)?;
        if seen.insert(v.clone()) {
            out.push(v);
        }
    }
    Ok(out)
}

/// `|x|` for every nonzero sample, deduplicated.
pub fn positive_elements(samples: &[RealVector]) -> Vec<RealVector> {
    let mut seen = HashSet::new();
    samples
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| if x.signum() == Ordering::Less { x.negate() } else { x.clone() })
        .filter(|x| seen.insert(x.clone()))
        .collect()
}

/// `d = x_{<i} + q·e_i` with `q` the simplest rational in `(x_i − h_i, x_i)`,
/// where `i = val(h)`. Then `d < x < d + h` whenever `d` exists.
fn separator_candidate(x: &RealVector, h: &RealVector) -> Option<RealVector> {
    let Some(ExtendedIndex::Base(i)) = h.natural_valuation() else { return None };
    let pos = ExtendedIndex::Base(i);
    let prefix = x.restrict_below(&pos);
    if !prefix.is_in_gamma() {
        return None;
    }
    let xi = x.coefficient(&pos);
    let q = simplest_between(&(&xi - &h.coefficient(&pos)), false, &xi, false)?;
    prefix.add(&RealVector::unit(x.space().clone(), i).ok()?.scale(&q)).ok()
}

/// An element `d` with `d` on the left of `D` and `d + h` on the right.
pub fn witness_separator(d: &CutDescriptor, h: &RealVector) -> Result<RealVector> {
    if !h.is_in_gamma() || h.signum() != Ordering::Greater {
        return Err(Error::Precondition(format!("separator needs a positive group element, got {h}")));
    }
    let s = d.invariance_segment();
    match h.natural_valuation() {
        Some(ExtendedIndex::Base(i)) if d.space().contains(&s, &i) => {}
        _ => return Err(Error::Precondition(format!("{h} lies in the invariance group of {d}"))),
    }
    separator_candidate(&realize(d), h)
        .ok_or_else(|| Error::Precondition(format!("no separator for {h} against {d}")))
}

/// Support positions of `x` in increasing order, tail labels included, up to `n`.
fn support_positions(x: &RealVector, n: usize) -> Vec<Index> {
    let mut out: Vec<Index> = x.finite().iter().map(|(i, _)| *i).take(n).collect();
    if let Some(t) = x.tail() {
        let mut k = t.from.inner;
        while out.len() < n {
            out.push(Index::new(t.from.atom, k));
            k += 1;
        }
    }
    out
}

/// `z(j) = x_{<s_j} + (x_{s_j} − 1/2)·e_{s_j}` over the first `n` support
/// positions `s_j` of an nb+NG realization: increasing and cofinal in `D^L`.
pub fn cofinal_sequence(d: &CutDescriptor, n: usize) -> Result<Vec<RealVector>> {
    if d.cut_type() != CutType::NonBallNoGap {
        return Err(Error::Precondition(format!("{d} is of type {}, not nb+NG", d.cut_type())));
    }
    let x = realize(d);
    let half = rat(1, 2);
    support_positions(&x, n)
        .into_iter()
        .map(|s| {
            let pos = ExtendedIndex::Base(s);
            let q = x.coefficient(&pos) - Coordinate::from(half.clone());
            let q = q.as_rational().cloned().ok_or_else(|| invalid("nb+NG realizations are rational"))?;
            x.restrict_below(&pos).add(&RealVector::unit(x.space().clone(), s)?.scale(&q))
        })
        .collect()
}

/// Rational vectors increasing to the realization of an nb+G cut: its
/// rational prefix plus lower approximants of the irrational coordinate.
pub fn approximating_sequence(d: &CutDescriptor, n: usize) -> Result<Vec<RealVector>> {
    if d.cut_type() != CutType::NonBallGap {
        return Err(Error::Precondition(format!("{d} is of type {}, not nb+G", d.cut_type())));
    }
    let x = realize(d);
    let i = d.space().seg_has_max(&d.invariance_segment()).expect("nb+G has a gap");
    let pos = ExtendedIndex::Base(i);
    let prefix = x.restrict_below(&pos);
    lower_approximants(&x.coefficient(&pos), n)?
        .into_iter()
        .map(|r| prefix.add(&RealVector::unit(x.space().clone(), i)?.scale(&r)))
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub violations: Vec<String>,
    pub checked: usize,
    pub seed: u64,
}

impl OracleReport {
    fn new(seed: u64) -> Self {
        OracleReport { violations: Vec::new(), checked: 0, seed }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: OracleReport) {
        self.violations.extend(other.violations);
        self.checked += other.checked;
    }
}

fn left(a: &RealVector, x: &RealVector) -> bool {
    a.lex_cmp(x) == Ordering::Less
}

/// Sampled elements plus points hugging the cut: its center (or rational
/// prefixes of its realization) nudged by every unit vector.
fn probes(d: &CutDescriptor, samples: &[RealVector], cfg: &SampleConfig) -> Vec<RealVector> {
    let space = d.space();
    let x = realize(d).without_added();
    let mut out: Vec<RealVector> = samples.to_vec();
    let mut anchors = vec![];
    for i in space.indices_up_to(cfg.max_label) {
        let p = x.restrict_below(&ExtendedIndex::Base(i));
        if p.is_in_gamma() {
            anchors.push(p);
        }
    }
    if x.is_in_gamma() {
        anchors.push(x.clone());
    }
    let units: Vec<RealVector> = space
        .indices_up_to(cfg.max_label)
        .into_iter()
        .filter_map(|i| RealVector::unit(x.space().clone(), i).ok())
        .collect();
    for a in anchors {
        for e in &units {
            out.push(a.add(e).expect("group elements"));
            out.push(a.sub(e).expect("group elements"));
        }
        out.push(a);
    }
    let mut seen = HashSet::new();
    out.retain(|v| seen.insert(v.clone()));
    out
}

/// Tests the claim `H(D) = H_S`: translation by any sampled `h` with
/// `val(h) ∉ S` must fix every probe's side, and any `h` with `val(h) ∈ S`
/// must move some exact witness across the cut.
pub fn check_invariance_claim(d: &CutDescriptor, claimed: &Segment, cfg: &SampleConfig) -> Result<OracleReport> {
    let space = d.space();
    space.validate_segment(claimed)?;
    let arc = realize(d).space().clone();
    let samples = sample_elements(&arc, cfg)?;
    let hs = positive_elements(&samples);
    let probes = probes(d, &samples, cfg);
    let x = realize(d);
    let mut report = OracleReport::new(cfg.seed);
    for h in &hs {
        let Some(ExtendedIndex::Base(i)) = h.natural_valuation() else { continue };
        let candidate = separator_candidate(&x, h);
        if space.contains(claimed, &i) {
            report.checked += 1;
            match &candidate {
                Some(w) if left(w, &x) && !left(&w.add(h)?, &x) => {}
                _ => report.violations.push(format!("{d}: no separator for h = {h}, claimed outside the invariance group")),
            }
        } else {
            for a in probes.iter().chain(candidate.iter()) {
                report.checked += 1;
                if left(a, &x) != left(&a.add(h)?, &x) {
                    report.violations.push(format!("{d}: h = {h} moves {a} across the cut, claimed inside the invariance group"));
                    break;
                }
            }
        }
    }
    Ok(report)
}

pub fn check_invariance(d: &CutDescriptor, cfg: &SampleConfig) -> Result<OracleReport> {
    check_invariance_claim(d, &d.invariance_segment(), cfg)
}

/// Segment of the convex subgroup generated by `Γ ∩ [0, y)` for `y > 0`.
fn generated_segment(space: &IndexSet, y: &RealVector) -> Segment {
    match y.natural_valuation().expect("nonzero") {
        ExtendedIndex::Base(j) => space.segment_below(&j),
        ExtendedIndex::Added(t) => t,
    }
}

/// Tests covariance columns from their definition: `V_f(D,d)` is generated
/// by `Γ ∩ [0, x − d)` for `d` on the left, `V_i` likewise from the right,
/// and the claimed groups must bound every sample and be attained exactly
/// when claimed stable.
pub fn check_covariance(d: &CutDescriptor, table: &CovarianceTable, cfg: &SampleConfig) -> Result<OracleReport> {
    let space = d.space();
    let report_row = d.classify_with(table);
    let x = realize(d);
    let arc = x.space().clone();
    let samples = sample_elements(&arc, cfg)?;
    let mut probes = probes(d, &samples, cfg);
    for h in positive_elements(&samples) {
        if let Some(w) = separator_candidate(&x, &h) {
            probes.push(w.add(&h)?);
            probes.push(w);
        }
    }
    let s = d.invariance_segment();
    if let (CutDescriptor::Ball { center, .. }, Some(m)) = (d, space.seg_has_max(&s)) {
        let e = RealVector::unit(arc.clone(), m)?;
        probes.push(center.add(&e)?);
        probes.push(center.sub(&e)?);
    }
    if let (CutDescriptor::Ball { center, .. }, Some(m)) = (d, space.comp_has_min(&s)) {
        let e = RealVector::unit(arc.clone(), m)?;
        probes.push(center.add(&e)?);
        probes.push(center.sub(&e)?);
    }

    let mut report = OracleReport::new(cfg.seed);
    let (mut fin, mut ini) = (Vec::new(), Vec::new());
    for a in &probes {
        report.checked += 1;
        if left(a, &x) {
            fin.push(generated_segment(space, &x.sub(a)?));
        } else {
            ini.push(generated_segment(space, &a.sub(&x)?));
        }
    }
    let h = d.invariance_segment();
    let hp = d.h_prime_segment();
    for (name, claim, stable, segs) in [
        ("V_f", report_row.vf, report_row.vf_stable, &fin),
        ("V_i", report_row.vi, report_row.vi_stable, &ini),
    ] {
        if claim != h && claim != hp {
            report.violations.push(format!("{d}: {name} = {claim} is neither H nor H'"));
        }
        if let Some(bad) = segs.iter().find(|t| space.compare_segments(t, &claim) == Ordering::Greater) {
            report.violations.push(format!("{d}: sampled {name}(d) with segment {bad} is smaller than the claimed {claim}"));
        }
        let attained = segs.contains(&claim);
        // an empty side has covariance group Γ, unstable by convention
        if stable && !attained {
            report.violations.push(format!("{d}: {name} = {claim} claimed stable but never attained"));
        }
        if !stable && attained {
            report.violations.push(format!("{d}: {name} = {claim} claimed unstable but attained"));
        }
    }
    Ok(report)
}

/// Checks a nb+NG cofinal sequence: increasing, left of the cut, and above
/// every sampled left element supported on its first `n` positions.
pub fn check_cofinal_sequence(d: &CutDescriptor, n: usize, cfg: &SampleConfig) -> Result<OracleReport> {
    let zs = cofinal_sequence(d, n)?;
    let x = realize(d);
    let mut report = OracleReport::new(cfg.seed);
    check_increasing_left(d, &zs, &x, &mut report);
    let last = *support_positions(&x, n).last().expect("n >= 1");
    let space = d.space();
    for a in sample_elements(x.space(), cfg)? {
        let inside = a.finite().iter().all(|(i, _)| space.compare(i, &last) != Ordering::Greater);
        if !inside || !left(&a, &x) {
            continue;
        }
        report.checked += 1;
        if !zs.iter().any(|z| a.lex_cmp(z) == Ordering::Less) {
            report.violations.push(format!("{d}: left element {a} is above the whole cofinal sequence"));
        }
    }
    Ok(report)
}

/// Checks a nb+G approximating sequence: increasing, left of the cut, and
/// with gaps to the irrational coordinate shrinking below `1/n`.
pub fn check_approximating_sequence(d: &CutDescriptor, n: usize) -> Result<OracleReport> {
    let zs = approximating_sequence(d, n)?;
    let x = realize(d);
    let mut report = OracleReport::new(0);
    check_increasing_left(d, &zs, &x, &mut report);
    let gaps: Vec<Coordinate> = zs.iter().map(|z| x.leading_difference(z).map(|(_, c)| c).unwrap_or_else(Coordinate::zero)).collect();
    report.checked += gaps.len();
    if gaps.windows(2).any(|w| w[1] >= w[0]) {
        report.violations.push(format!("{d}: approximation gaps do not shrink"));
    }
    let bound = Coordinate::from(Rational::new(BigInt::from(1), BigInt::from(n.max(1))));
    if gaps.last().is_none_or(|g| *g >= bound || g.is_zero()) {
        report.violations.push(format!("{d}: final gap is not below 1/{n}"));
    }
    Ok(report)
}

fn check_increasing_left(d: &CutDescriptor, zs: &[RealVector], x: &RealVector, report: &mut OracleReport) {
    for z in zs {
        report.checked += 1;
        if !left(z, x) {
            report.violations.push(format!("{d}: sequence element {z} is not left of the cut"));
        }
    }
    for w in zs.windows(2) {
        report.checked += 1;
        if w[0].lex_cmp(&w[1]) != Ordering::Less {
            report.violations.push(format!("{d}: sequence not increasing at {} then {}", w[0], w[1]));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordinate::{int, parse_coordinate};
    use crate::cuts::{CovarianceRow, Group, Side};
    use crate::index::{Atom, Within};
    use crate::vector::Tail;

    fn q() -> Arc<IndexSet> {
        Arc::new(IndexSet::rank_one())
    }

    fn w() -> Arc<IndexSet> {
        Arc::new(IndexSet::omega())
    }

    fn c(sp: &Arc<IndexSet>, text: &str) -> RealVector {
        RealVector::new(sp.clone(), vec![(Index::new(1, 1), parse_coordinate(text).unwrap())], None, None).unwrap()
    }

    fn ones_cut() -> CutDescriptor {
        let tail = Tail { value: int(1), from: Index::new(1, 1) };
        CutDescriptor::nonball(&RealVector::new(w(), vec![], None, Some(tail)).unwrap()).unwrap()
    }

    fn zero_plus(sp: &Arc<IndexSet>) -> CutDescriptor {
        CutDescriptor::ball(RealVector::zero(sp.clone()), Segment::full(), Side::Plus).unwrap()
    }

    #[test]
    fn sampling_is_deterministic_and_seeded() {
        let cfg = SampleConfig { count: 1, ..SampleConfig::default() };
        assert!(sample_elements(&q(), &cfg).unwrap().iter().any(|v| v.is_zero()));
        let cfg = SampleConfig { seed: 42, ..SampleConfig::default() };
        assert_eq!(sample_elements(&w(), &cfg).unwrap(), sample_elements(&w(), &cfg).unwrap());
    }

    #[test]
    fn small_bounds_are_enumerated_exhaustively() {
        let f2 = Arc::new(IndexSet::new(vec![Atom::Fin(2)]).unwrap());
        let cfg = SampleConfig { max_denominator: 2, max_support: 2, max_label: 2, count: 81, seed: 3 };
        let samples = sample_elements(&f2, &cfg).unwrap();
        let values = ["0", "1", "-1", "2", "-2", "1/2", "-1/2"];
        let mut expected = 0;
        for a in values {
            for b in values {
                let v = RealVector::new(
                    f2.clone(),
                    vec![(Index::new(1, 1), parse_coordinate(a).unwrap()), (Index::new(1, 2), parse_coordinate(b).unwrap())],
                    None,
                    None,
                )
                .unwrap();
                expected += 1;
                assert!(samples.contains(&v), "missing {v}");
            }
        }
        assert_eq!(expected, 49);
    }

    #[test]
    fn separator_examples() {
        let sp = q();
        let one = c(&sp, "1");
        // (-1, 0) contains -1/2 as its simplest element
        assert_eq!(witness_separator(&zero_plus(&sp), &one).unwrap(), c(&sp, "-1/2"));
        let sqrt2 = CutDescriptor::nonball(&c(&sp, "1*r2")).unwrap();
        assert_eq!(witness_separator(&sqrt2, &one).unwrap(), c(&sp, "1"));
        let e3 = RealVector::unit(w(), Index::new(1, 3)).unwrap();
        let d = witness_separator(&ones_cut(), &e3).unwrap();
        let expect = RealVector::from_rationals(
            w(),
            vec![(Index::new(1, 1), int(1)), (Index::new(1, 2), int(1)), (Index::new(1, 3), rat(1, 2))],
        )
        .unwrap();
        assert_eq!(d, expect);
        assert!(witness_separator(&zero_plus(&sp), &one.negate()).is_err());
    }

    #[test]
    fn cofinal_sequence_example() {
        let zs = cofinal_sequence(&ones_cut(), 3).unwrap();
        let r = |entries: &[(u64, Rational)]| {
            RealVector::from_rationals(w(), entries.iter().map(|(k, q)| (Index::new(1, *k), q.clone())).collect()).unwrap()
        };
        assert_eq!(
            zs,
            vec![
                r(&[(1, rat(1, 2))]),
                r(&[(1, int(1)), (2, rat(1, 2))]),
                r(&[(1, int(1)), (2, int(1)), (3, rat(1, 2))]),
            ]
        );
        assert_eq!(cofinal_sequence(&ones_cut(), 1).unwrap().len(), 1);
        assert!(cofinal_sequence(&zero_plus(&q()), 3).is_err());
    }

    #[test]
    fn invariance_holds_on_examples() {
        let cfg = SampleConfig { count: 60, ..SampleConfig::default() };
        assert!(check_invariance(&zero_plus(&q()), &cfg).unwrap().is_clean());
        let f2 = Arc::new(IndexSet::new(vec![Atom::Fin(2)]).unwrap());
        let first = f2.segment(1, Within::UpTo(1)).unwrap();
        let d = CutDescriptor::ball(RealVector::zero(f2.clone()), first, Side::Plus).unwrap();
        let report = check_invariance(&d, &cfg).unwrap();
        assert!(report.is_clean(), "{:?}", report.violations);
        assert!(check_invariance(&ones_cut(), &cfg).unwrap().is_clean());
    }

    #[test]
    fn wrong_invariance_claim_is_caught() {
        let cfg = SampleConfig { count: 60, ..SampleConfig::default() };
        let f2 = Arc::new(IndexSet::new(vec![Atom::Fin(2)]).unwrap());
        let d = zero_plus(&f2);
        let too_small = f2.segment(1, Within::UpTo(1)).unwrap();
        assert!(!check_invariance_claim(&d, &too_small, &cfg).unwrap().is_clean());
    }

    #[test]
    fn covariance_holds_and_corruption_is_caught() {
        let cfg = SampleConfig { count: 60, ..SampleConfig::default() };
        let d = zero_plus(&q());
        let table = CovarianceTable::default();
        let report = check_covariance(&d, &table, &cfg).unwrap();
        assert!(report.is_clean(), "{:?}", report.violations);
        let mut bad = table.clone();
        bad.set_row(CutType::BallGapPlus, CovarianceRow { vf: Group::HPrime, vf_stable: true, vi: Group::H, vi_stable: true });
        assert!(!check_covariance(&d, &bad, &cfg).unwrap().is_clean());
    }
}
