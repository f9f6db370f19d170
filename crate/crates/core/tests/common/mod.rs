#![allow(dead_code)]

use std::path::Path;
use std::sync::Arc;

use cutkit::coordinate::{int, rat, Coordinate, Rational};
use cutkit::cuts::{CutDescriptor, Side};
use cutkit::index::{Atom, Index, IndexSet};
use cutkit::quasicut::QuasiCutPoint;
use cutkit::serial::JobFile;
use cutkit::vector::{RealVector, Tail};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every index-set shape the library supports, small instances of each.
pub fn spaces() -> Vec<Arc<IndexSet>> {
    use Atom::*;
    [
        vec![],
        vec![Fin(1)],
        vec![Fin(3)],
        vec![Omega],
        vec![OmegaOpp],
        vec![Omega, Omega],
        vec![Fin(1), OmegaOpp],
        vec![Omega, OmegaOpp],
        vec![Fin(2), OmegaOpp, Omega],
    ]
    .into_iter()
    .map(|atoms| Arc::new(IndexSet::new(atoms).unwrap()))
    .collect()
}

pub fn nonempty_spaces() -> Vec<Arc<IndexSet>> {
    spaces().into_iter().filter(|s| !s.is_empty()).collect()
}

pub const LABELS: u64 = 4;

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let q = small_rational(rng);
        if q != int(0) {
            return q;
        }
    }
}

/// A random element of `Γ`.
pub fn gamma(rng: &mut ChaCha8Rng, space: &Arc<IndexSet>) -> RealVector {
    let universe = space.indices_up_to(LABELS);
    let k = rng.gen_range(0..=3.min(universe.len()));
    let entries = universe.choose_multiple(rng, k).map(|i| (*i, small_rational(rng))).collect();
    RealVector::from_rationals(space.clone(), entries).unwrap()
}

/// A random vector outside `Γ`: an irrational coordinate, or a rational tail.
pub fn outside(rng: &mut ChaCha8Rng, space: &Arc<IndexSet>) -> RealVector {
    let universe = space.indices_up_to(LABELS);
    let base = gamma(rng, space);
    if let (Some(ta), true) = (space.tail_atom(), rng.gen_bool(0.5)) {
        let from = Index::new(ta, rng.gen_range(1..=LABELS + 1));
        let entries = base
            .finite()
            .iter()
            .filter(|(i, _)| !(i.atom == ta && i.inner >= from.inner))
            .cloned()
            .collect();
        let tail = Tail { value: nonzero_rational(rng), from };
        return RealVector::new(space.clone(), entries, None, Some(tail)).unwrap();
    }
    let i = *universe.choose(rng).unwrap();
    let xi = Coordinate::new(small_rational(rng), nonzero_rational(rng));
    let mut entries: Vec<(Index, Coordinate)> = base.finite().iter().filter(|(j, _)| *j != i).cloned().collect();
    entries.push((i, xi));
    RealVector::new(space.clone(), entries, None, None).unwrap()
}

pub fn ball(rng: &mut ChaCha8Rng, space: &Arc<IndexSet>) -> CutDescriptor {
    let segments = space.segments_up_to(LABELS);
    let s = *segments.choose(rng).unwrap();
    let side = if rng.gen_bool(0.5) { Side::Plus } else { Side::Minus };
    CutDescriptor::ball(gamma(rng, space), s, side).unwrap()
}

pub fn nonball(rng: &mut ChaCha8Rng, space: &Arc<IndexSet>) -> CutDescriptor {
    CutDescriptor::nonball(&outside(rng, space)).unwrap()
}

pub fn cut(rng: &mut ChaCha8Rng, space: &Arc<IndexSet>) -> CutDescriptor {
    if space.is_empty() || rng.gen_bool(0.5) {
        ball(rng, space)
    } else {
        nonball(rng, space)
    }
}

pub fn point(rng: &mut ChaCha8Rng, space: &Arc<IndexSet>) -> QuasiCutPoint {
    if rng.gen_bool(0.3) {
        QuasiCutPoint::Interior(gamma(rng, space))
    } else {
        QuasiCutPoint::CutPoint(cut(rng, space))
    }
}

/// Base vectors of any kind: in `Γ`, in the Hahn product only, or irrational.
pub fn base_vector(rng: &mut ChaCha8Rng, space: &Arc<IndexSet>) -> RealVector {
    if space.is_empty() || rng.gen_bool(0.5) {
        gamma(rng, space)
    } else {
        outside(rng, space)
    }
}

pub fn fixture(name: &str) -> JobFile {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    JobFile::parse(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

pub fn single_cut(name: &str) -> CutDescriptor {
    match &fixture(name).items[..] {
        [QuasiCutPoint::CutPoint(d)] => d.clone(),
        other => panic!("{name}: expected one cut, found {other:?}"),
    }
}

pub fn fixture_names() -> Vec<String> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    names
}
