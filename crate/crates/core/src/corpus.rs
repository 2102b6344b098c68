//! The standard corpus of small groupoids used by the suite and the
//! acceptance tests, plus seeded relabelling and corruption helpers.

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::{
    discrete_units, disjoint_union, graded_pair, graded_rotation, group, group_bundle, pair, transformation, FiniteGroup,
};
use crate::groupoid::{FiniteGroupoid, RawGroupoid};

pub const MAX_UNITS: usize = 4;
pub const MAX_ARROWS: usize = 12;

/// Coefficient systems every corpus groupoid is paired with.
pub const COEFFICIENTS: [&str; 5] = ["trivial", "F2", "F3", "F4", "Z/4"];

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub groupoid: FiniteGroupoid,
}

fn entry(name: impl Into<String>, groupoid: FiniteGroupoid) -> CorpusEntry {
    CorpusEntry { name: name.into(), groupoid }
}

/// `ℤ/n` acting on `orbit` points by rotation, with `fixed` further points
/// left alone.
fn rotation_with_fixed(n: usize, orbit: usize, fixed: usize) -> FiniteGroupoid {
    let h = FiniteGroup::cyclic(n);
    let action: Vec<Vec<usize>> =
        (0..n).map(|a| (0..orbit + fixed).map(|x| if x < orbit { (x + a) % orbit } else { x }).collect()).collect();
    transformation(&h, orbit + fixed, &action).expect("rotation is an action")
}

fn groups() -> Vec<(String, FiniteGroup)> {
    let c = FiniteGroup::cyclic;
    let mut out: Vec<(String, FiniteGroup)> = (1..=MAX_ARROWS).map(|n| (format!("Z{n}"), c(n))).collect();
    out.push(("V4".into(), FiniteGroup::klein_four()));
    out.push(("S3".into(), FiniteGroup::symmetric3()));
    out.push(("D4".into(), FiniteGroup::dihedral4()));
    out.push(("Z2xZ4".into(), c(2).product(&c(4))));
    out.push(("Z2^3".into(), c(2).product(&c(2)).product(&c(2))));
    out.push(("Z3xZ3".into(), c(3).product(&c(3))));
    out.push(("Z2xZ6".into(), c(2).product(&c(6))));
    out.push(("A4".into(), FiniteGroup::permutations(4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])));
    out.push(("D6".into(), FiniteGroup::permutations(6, &[vec![1, 2, 3, 4, 5, 0], vec![0, 5, 4, 3, 2, 1]])));
    out
}

/// Every standard construction with at most [`MAX_UNITS`] units and
/// [`MAX_ARROWS`] arrows, isomorphic duplicates removed (the first name
/// wins).
pub fn standard_groupoids() -> Vec<CorpusEntry> {
    let c = FiniteGroup::cyclic;
    let mut all = Vec::new();
    for (name, h) in groups() {
        all.push(entry(format!("group({name})"), group(&h)));
    }
    for n in 1..=3 {
        all.push(entry(format!("pair({n})"), pair(n)));
    }
    for n in 1..=MAX_UNITS {
        all.push(entry(format!("units({n})"), discrete_units(n)));
    }
    for (n, orbit, fixed) in [(2, 2, 0), (2, 2, 1), (2, 2, 2), (3, 3, 0), (3, 3, 1), (4, 2, 0), (4, 2, 1), (6, 2, 0)] {
        all.push(entry(format!("rotation(Z{n} on {orbit}+{fixed})"), rotation_with_fixed(n, orbit, fixed)));
    }
    let swaps = [vec![0, 1, 2, 3], vec![1, 0, 3, 2]];
    all.push(entry("transformation(Z2 on 2+2)", transformation(&c(2), 4, &swaps).expect("action")));
    let s3 = FiniteGroup::symmetric3();
    let sign: Vec<Vec<usize>> = (0..s3.len()).map(|a| if s3.permutation_sign(a) == Some(true) { vec![0, 1] } else { vec![1, 0] }).collect();
    all.push(entry("transformation(S3 by sign on 2)", transformation(&s3, 2, &sign).expect("action")));
    let bundles: [(&str, Vec<FiniteGroup>); 9] = [
        ("Z2,Z1", vec![c(2), c(1)]),
        ("Z2,Z2", vec![c(2), c(2)]),
        ("Z3,Z1", vec![c(3), c(1)]),
        ("Z2,Z3", vec![c(2), c(3)]),
        ("Z2,Z1,Z1", vec![c(2), c(1), c(1)]),
        ("Z4,Z2", vec![c(4), c(2)]),
        ("Z2,Z2,Z2,Z2", vec![c(2), c(2), c(2), c(2)]),
        ("S3,Z2,Z2,Z1", vec![s3.clone(), c(2), c(2), c(1)]),
        ("V4,Z3,Z1", vec![FiniteGroup::klein_four(), c(3), c(1)]),
    ];
    for (name, fibres) in bundles {
        all.push(entry(format!("bundle({name})"), group_bundle(&fibres)));
    }
    let unions: [(&str, Vec<FiniteGroupoid>); 6] = [
        ("pair(2)+Z2", vec![pair(2), group(&c(2))]),
        ("pair(2)+Z3", vec![pair(2), group(&c(3))]),
        ("pair(2)+S3", vec![pair(2), group(&s3)]),
        ("pair(2)+pair(2)", vec![pair(2), pair(2)]),
        ("pair(3)+Z1", vec![pair(3), group(&c(1))]),
        ("pair(3)+Z2", vec![pair(3), group(&c(2))]),
    ];
    for (name, parts) in unions {
        all.push(entry(format!("union({name})"), disjoint_union(&parts)));
    }
    let mut kept: Vec<CorpusEntry> = Vec::new();
    for e in all {
        let g = &e.groupoid;
        if g.units().len() > MAX_UNITS || g.len() > MAX_ARROWS {
            continue;
        }
        let duplicate =
            kept.iter().any(|k| k.groupoid.len() == g.len() && k.groupoid.units().len() == g.units().len() && k.groupoid.is_isomorphic(g));
        if !duplicate {
            kept.push(e);
        }
    }
    kept
}

/// Graded instances: difference gradings on pair groupoids and rotation
/// groupoids graded by the group coordinate.
pub fn graded_groupoids() -> Vec<CorpusEntry> {
    vec![
        entry("graded_pair(2, Z2)", graded_pair(2, 2)),
        entry("graded_pair(3, Z3)", graded_pair(3, 3)),
        entry("graded_pair(3, Z2)", graded_pair(3, 2)),
        entry("graded_rotation(Z2)", graded_rotation(2)),
        entry("graded_rotation(Z3)", graded_rotation(3)),
    ]
}

/// The same groupoid with its arrows declared in a seeded random order.
pub fn relabel(g: &FiniteGroupoid, seed: u64) -> FiniteGroupoid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..g.len()).collect();
    perm.shuffle(&mut rng);
    g.reordered(&perm)
}

/// The corpus with arrow order shuffled per entry from `seed`; `None`
/// keeps the construction order.
pub fn corpus(seed: Option<u64>) -> Vec<CorpusEntry> {
    let mut out = standard_groupoids();
    if let Some(seed) = seed {
        for (i, e) in out.iter_mut().enumerate() {
            e.groupoid = relabel(&e.groupoid, seed.wrapping_add(i as u64));
        }
    }
    out
}

/// Changes the result of one composition entry to a different arrow.
pub fn corrupt_composition(raw: &RawGroupoid, seed: u64) -> Option<RawGroupoid> {
    if raw.compose.is_empty() || raw.arrows.len() < 2 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = raw.clone();
    let i = rng.random_range(0..out.compose.len());
    let current = out.compose[i].2.clone();
    let others: Vec<&String> = raw.arrows.iter().filter(|a| **a != current).collect();
    out.compose[i].2 = others[rng.random_range(0..others.len())].clone();
    Some(out)
}
