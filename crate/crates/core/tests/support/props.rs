//! Property checks shared by the proptest suite and the acceptance run.

use hsd::point::{Block, Point};
use hsd::quasigroup::{check_schroder_identity, from_quasigroup, to_quasigroup};
use hsd::{develop, difference_census, orbit_of, verify_design, Catalog, Design, StarterSet};
use hsd::development::orbit_with;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

/// Catalog HSDs small enough to verify thousands of times.
pub fn small_designs() -> Vec<(String, Design)> {
    Catalog::embedded()
        .entries()
        .iter()
        .filter(|e| e.is_hsd())
        .filter_map(|e| Some((e.id.clone(), e.design()?.ok()?)))
        .filter(|(_, d)| d.block_count() <= 400)
        .collect()
}

pub fn step_one_starters() -> Vec<(String, StarterSet)> {
    Catalog::embedded()
        .entries()
        .iter()
        .filter_map(|e| Some((e.id.clone(), e.starters()?.clone())))
        .filter(|(_, s)| s.step == 1)
        .collect()
}

/// Holds iff the blocks are exactly those read back off a conflict-free,
/// Latin-outside-holes table satisfying the Schröder identity.
pub fn quasigroup_ok(d: &Design) -> bool {
    let Ok(q) = to_quasigroup(d) else { return false };
    if !q.latin_outside_holes() || !check_schroder_identity(&q).is_empty() {
        return false;
    }
    match from_quasigroup(&q) {
        Ok(e) => e.canonical_blocks() == d.canonical_blocks(),
        Err(_) => false,
    }
}

#[derive(Debug, Clone)]
pub enum Mutation {
    None,
    /// Replace coordinate `pos` of block `block` by point number `point`.
    Replace { block: usize, pos: usize, point: usize },
    Swap { block: usize, a: usize, b: usize },
    Duplicate { block: usize },
    Delete { block: usize },
}

pub fn mutation() -> impl Strategy<Value = Mutation> {
    prop_oneof![
        1 => Just(Mutation::None),
        3 => (any::<usize>(), 0..4usize, any::<usize>()).prop_map(|(block, pos, point)| Mutation::Replace { block, pos, point }),
        1 => (any::<usize>(), 0..4usize, 0..4usize).prop_map(|(block, a, b)| Mutation::Swap { block, a, b }),
        1 => any::<usize>().prop_map(|block| Mutation::Duplicate { block }),
        1 => any::<usize>().prop_map(|block| Mutation::Delete { block }),
    ]
}

pub fn mutate(d: &Design, m: &Mutation) -> Design {
    let mut d = d.clone();
    let nb = d.blocks.len();
    match *m {
        Mutation::None => {}
        Mutation::Replace { block, pos, point } => d.blocks[block % nb].0[pos] = d.points[point % d.points.len()],
        Mutation::Swap { block, a, b } => d.blocks[block % nb].0.swap(a, b),
        Mutation::Duplicate { block } => {
            let b = d.blocks[block % nb];
            d.blocks.push(b);
        }
        Mutation::Delete { block } => {
            d.blocks.remove(block % nb);
        }
    }
    d
}

pub fn check_verify_vs_quasigroup(d: &Design, m: &Mutation) -> Result<(), TestCaseError> {
    let e = mutate(d, m);
    let v = verify_design(&e).passed();
    prop_assert_eq!(v, quasigroup_ok(&e), "mutation {:?}", m);
    if matches!(m, Mutation::None) {
        prop_assert!(v);
    }
    Ok(())
}

/// A block of four distinct points of `Z_g` plus up to two infinite points,
/// with a step dividing `g`.
pub fn block_and_group() -> impl Strategy<Value = (Block, u32, u32)> {
    (4u32..64, 1u32..4)
        .prop_flat_map(|(g, infinite)| {
            let steps: Vec<u32> = (1..=g).filter(|k| g % k == 0).collect();
            let pts = prop::collection::btree_set(0..g + infinite.min(2), 4);
            (Just(g), prop::sample::select(steps), pts, Just([0usize, 1, 2, 3]).prop_shuffle())
        })
        .prop_map(|(g, step, pts, perm)| {
            let pts: Vec<Point> = pts.into_iter().map(|x| if x < g { Point::Finite(x) } else { Point::Infinite(x - g + 1) }).collect();
            (Block(perm.map(|i| pts[i])), g, step)
        })
}

pub fn check_canonical_and_orbit(b: Block, g: u32, step: u32) -> Result<(), TestCaseError> {
    let c = b.canonical();
    prop_assert_eq!(c.canonical(), c);
    prop_assert!(b.equivalents().iter().all(|e| e.canonical() == c));
    let o = orbit_with(b, step, g);
    prop_assert_eq!((g / step) as usize % o.length, 0, "orbit of {} under +{} mod {}", b, step, g);
    prop_assert!(o.blocks.iter().all(Block::is_canonical));
    Ok(())
}

pub fn mutate_starters(s: &StarterSet, which: usize, pos: usize, point: u32) -> StarterSet {
    let mut s = s.clone();
    let g = s.modulus();
    let i = which % (s.starters.len() + 1);
    if i < s.starters.len() {
        let total = g + s.infinite;
        let x = point % total;
        s.starters[i].0[pos] = if x < g { Point::Finite(x) } else { Point::Infinite(x - g + 1) };
    }
    s
}

pub fn check_census_vs_develop(s: &StarterSet) -> Result<(), TestCaseError> {
    let census = difference_census(s).expect("step 1").passed();
    let developed = develop(s).map(|d| verify_design(&d).passed()).unwrap_or(false);
    prop_assert_eq!(census, developed);
    // short orbits divide the group order
    for b in &s.starters {
        prop_assert_eq!(s.modulus() as usize % orbit_of(*b, s).length, 0);
    }
    Ok(())
}
