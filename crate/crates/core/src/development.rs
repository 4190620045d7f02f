//! Cyclic development of starter blocks over Z_g with fixed infinite points.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::design::Design;
use crate::point::{Block, Color, Point};
use crate::types::TypeSpec;

/// Starter blocks for an HSD of type `h^n u^1` over `Z_{hn} ∪ {x_1..x_u}`.
///
/// Hole `i < n` is `{i, i+n, …, i+(h−1)n}`; the infinite points form one
/// more hole. Blocks are developed by repeatedly adding `step`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarterSet {
    pub h: u32,
    pub n: u32,
    pub step: u32,
    pub infinite: u32,
    pub starters: Vec<Block>,
    /// Indices of starters the source marks as short orbits. Only used as a
    /// cross-check; short orbits are detected, not trusted.
    pub marked: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StarterError {
    #[error("step {step} does not divide modulus {modulus}")]
    Step { step: u32, modulus: u32 },
    #[error("starter {index} ({block}): {reason}")]
    Starter { index: usize, block: Block, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DevelopError {
    #[error(transparent)]
    Invalid(#[from] StarterError),
    #[error("block {block} arises from starters {first} and {second}")]
    Duplicate { first: usize, second: usize, block: Block },
}

impl StarterSet {
    pub fn new(h: u32, n: u32, step: u32, infinite: u32, starters: Vec<Block>) -> Self {
        StarterSet { h, n, step, infinite, starters, marked: Vec::new() }
    }

    pub fn modulus(&self) -> u32 {
        self.h * self.n
    }

    pub fn type_spec(&self) -> TypeSpec {
        TypeSpec::uniform_plus_one(self.h as u64, self.n as u64, self.infinite as u64)
    }

    /// Index of the hole containing `p`; the infinite hole is `n`.
    pub fn hole_of(&self, p: Point) -> u32 {
        match p {
            Point::Finite(v) => v % self.n,
            Point::Infinite(_) => self.n,
        }
    }

    pub fn holes(&self) -> Vec<Vec<Point>> {
        let g = self.modulus();
        let mut holes: Vec<Vec<Point>> =
            (0..self.n).map(|i| (i..g).step_by(self.n as usize).map(Point::Finite).collect()).collect();
        if self.infinite > 0 {
            holes.push((1..=self.infinite).map(Point::Infinite).collect());
        }
        holes
    }

    pub fn validate(&self) -> Result<(), StarterError> {
        let g = self.modulus();
        if self.step == 0 || g == 0 || g % self.step != 0 {
            return Err(StarterError::Step { step: self.step, modulus: g });
        }
        for (index, &block) in self.starters.iter().enumerate() {
            let bad = |reason: String| StarterError::Starter { index, block, reason };
            for p in block.0 {
                match p {
                    Point::Finite(v) if v >= g => return Err(bad(format!("{p} is not below {g}"))),
                    Point::Infinite(l) if l == 0 || l > self.infinite => {
                        return Err(bad(format!("{p} is not among x1..x{}", self.infinite)))
                    }
                    _ => {}
                }
            }
            for i in 0..4 {
                for j in i + 1..4 {
                    if self.hole_of(block.0[i]) == self.hole_of(block.0[j]) {
                        return Err(bad(format!("{} and {} share a hole", block.0[i], block.0[j])));
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for StarterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (+{} mod {}), {} starters",
            self.type_spec(),
            self.step,
            self.modulus(),
            self.starters.len()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub representative: Block,
    pub length: usize,
    /// Canonical blocks in generation order.
    pub blocks: Vec<Block>,
}

impl Orbit {
    pub fn is_short(&self, full: usize) -> bool {
        self.length < full
    }
}

pub fn shift_block(b: Block, j: u32, g: u32) -> Block {
    b.shifted(j % g, g)
}

/// `b, b+k, b+2k, …` until a canonical form repeats.
pub fn orbit_of(b: Block, s: &StarterSet) -> Orbit {
    orbit_with(b, s.step, s.modulus())
}

pub fn orbit_with(b: Block, step: u32, g: u32) -> Orbit {
    let first = b.canonical();
    let mut blocks = vec![first];
    let mut shift = step;
    while shift < g {
        let c = shift_block(b, shift, g).canonical();
        if c == first {
            break;
        }
        blocks.push(c);
        shift += step;
    }
    Orbit { representative: b, length: blocks.len(), blocks }
}

/// One orbit per starter, in starter order.
pub fn orbits(s: &StarterSet) -> Vec<Orbit> {
    s.starters.par_iter().map(|&b| orbit_of(b, s)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DevelopOptions {
    /// Merge blocks produced by more than one starter instead of failing.
    pub allow_duplicates: bool,
}

pub fn develop(s: &StarterSet) -> Result<Design, DevelopError> {
    develop_with(s, DevelopOptions::default())
}

/// Union of all orbits as a design of type `h^n u^1`, canonical and sorted.
pub fn develop_with(s: &StarterSet, opts: DevelopOptions) -> Result<Design, DevelopError> {
    s.validate()?;
    let mut seen: HashMap<Block, usize> = HashMap::new();
    let mut blocks = Vec::new();
    for (i, orbit) in orbits(s).into_iter().enumerate() {
        for b in orbit.blocks {
            match seen.get(&b) {
                Some(&first) if !opts.allow_duplicates => {
                    return Err(DevelopError::Duplicate { first, second: i, block: b });
                }
                Some(_) => {}
                None => {
                    seen.insert(b, i);
                    blocks.push(b);
                }
            }
        }
    }
    blocks.sort();
    let holes = s.holes();
    let mut points: Vec<Point> = holes.iter().flatten().copied().collect();
    points.sort();
    Ok(Design::new(points, holes, blocks, s.type_spec()))
}

/// Orbit lengths and short-orbit bookkeeping for a starter set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCensus {
    pub full_length: usize,
    pub lengths: Vec<usize>,
    pub short: Vec<usize>,
}

impl OrbitCensus {
    pub fn total_blocks(&self) -> usize {
        self.lengths.iter().sum()
    }

    /// `(length, how many orbits)` ascending by length.
    pub fn histogram(&self) -> Vec<(usize, usize)> {
        let mut m = std::collections::BTreeMap::new();
        for &l in &self.lengths {
            *m.entry(l).or_insert(0) += 1;
        }
        m.into_iter().collect()
    }
}

impl fmt::Display for OrbitCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.histogram().iter().map(|(l, c)| format!("{c}x{l}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn orbit_census(s: &StarterSet) -> OrbitCensus {
    let full_length = (s.modulus() / s.step.max(1)) as usize;
    let lengths: Vec<usize> = orbits(s).iter().map(|o| o.length).collect();
    let short = lengths.iter().enumerate().filter(|(_, &l)| l < full_length).map(|(i, _)| i).collect();
    OrbitCensus { full_length, lengths, short }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CensusViolation {
    /// Difference class `{d, −d}` is covered `count` times over `size` pairs
    /// (needs `count == size`, or zero for hole differences).
    Difference { color: Color, d: u32, count: u32, size: u32 },
    /// Infinite point `x_label` meets `count` finite points in `color`, not `g`.
    Infinite { color: Color, label: u32, count: u32 },
    /// A starter contains two infinite points or repeats a point.
    Degenerate { starter: usize },
}

impl fmt::Display for CensusViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CensusViolation::Difference { color, d, count, size } => {
                write!(f, "color {color} difference ±{d}: {count} pair instances for {size} pairs")
            }
            CensusViolation::Infinite { color, label, count } => {
                write!(f, "color {color} point x{label}: {count} partners")
            }
            CensusViolation::Degenerate { starter } => write!(f, "starter {starter} is degenerate"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub violations: Vec<CensusViolation>,
}

impl CensusReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("difference census needs step 1, got {0}; develop and verify instead")]
    Step(u32),
}

/// Difference accounting for a step-1 starter set.
///
/// Every pair orbit under `+1` is a difference class `{d, −d}` (size `g`,
/// or `g/2` for `d = g/2`). A starter whose block orbit has length `L`
/// contributes `L` instances for each of its pairs, spread evenly over the
/// class, so a class is covered exactly once iff its instance count equals
/// its size. Non-hole classes must be covered once per color, hole classes
/// (`d ≡ 0 mod n`) never, and each infinite point must meet all `g` finite
/// points once per color.
pub fn difference_census(s: &StarterSet) -> Result<CensusReport, CensusError> {
    if s.step != 1 {
        return Err(CensusError::Step(s.step));
    }
    let g = s.modulus();
    let half = g / 2;
    let mut diff = vec![[0u32; 3]; half as usize + 1];
    let mut inf = vec![[0u32; 3]; s.infinite as usize + 1];
    let mut violations = Vec::new();
    for (i, &b) in s.starters.iter().enumerate() {
        let len = orbit_with(b, 1, g).length as u32;
        for (p, q, color) in Block::PAIR_POSITIONS {
            match (b.0[p], b.0[q]) {
                (Point::Finite(x), Point::Finite(y)) => {
                    let d = (x + g - y) % g;
                    diff[d.min(g - d) as usize][color.index()] += len;
                }
                (Point::Finite(_), Point::Infinite(l)) | (Point::Infinite(l), Point::Finite(_)) => {
                    if let Some(c) = inf.get_mut(l as usize) {
                        c[color.index()] += len;
                    }
                }
                (Point::Infinite(_), Point::Infinite(_)) => {
                    violations.push(CensusViolation::Degenerate { starter: i });
                }
            }
        }
    }
    for color in Color::ALL {
        for d in 0..=half {
            let size = if d == 0 { 0 } else if 2 * d == g { half } else { g };
            let count = diff[d as usize][color.index()];
            let want = if d % s.n == 0 { 0 } else { size };
            if count != want {
                violations.push(CensusViolation::Difference { color, d, count, size: want });
            }
        }
        for label in 1..=s.infinite {
            let count = inf[label as usize][color.index()];
            if count != g {
                violations.push(CensusViolation::Infinite { color, label, count });
            }
        }
    }
    Ok(CensusReport { violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::verify_design;

    fn f(v: u32) -> Point {
        Point::Finite(v)
    }
    fn x(l: u32) -> Point {
        Point::Infinite(l)
    }

    fn blk(t: [&str; 4]) -> Block {
        Block(t.map(|s| s.parse().unwrap()))
    }

    pub(crate) fn example_2_1() -> StarterSet {
        let starters = [
            ["0", "1", "5", "x1"],
            ["0", "2", "12", "1"],
            ["0", "3", "18", "9"],
            ["0", "4", "2", "8"],
            ["0", "5", "10", "18"],
        ];
        StarterSet::new(3, 7, 1, 1, starters.iter().map(|&t| blk(t)).collect())
    }

    #[test]
    fn shifts() {
        let b = Block::new(f(0), f(12), f(3), f(15));
        assert_eq!(shift_block(b, 12, 24), Block::new(f(12), f(0), f(15), f(3)));
        let b = Block::new(f(0), f(1), f(5), x(1));
        assert_eq!(shift_block(b, 0, 21), b);
        let b = Block::new(f(0), f(3), f(21), x(1));
        assert_eq!(shift_block(b, 4, 24), Block::new(f(4), f(7), f(1), x(1)));
    }

    #[test]
    fn orbit_lengths() {
        let s = StarterSet::new(3, 8, 2, 2, vec![]);
        assert_eq!(orbit_of(Block::new(f(0), f(12), f(3), f(15)), &s).length, 6);
        let s = StarterSet::new(3, 7, 1, 1, vec![]);
        assert_eq!(orbit_of(Block::new(f(0), f(1), f(5), x(1)), &s).length, 21);
        let s = StarterSet::new(3, 8, 4, 1, vec![]);
        assert_eq!(orbit_of(Block::new(f(0), f(12), f(17), f(5)), &s).length, 3);
    }

    #[test]
    fn example_2_1_develops_and_passes_census() {
        let s = example_2_1();
        let d = develop(&s).unwrap();
        assert_eq!(d.block_count(), 105);
        assert!(verify_design(&d).passed());
        assert!(difference_census(&s).unwrap().passed());
    }

    #[test]
    fn swapping_c_and_d_breaks_colors_two_and_three_only() {
        let mut s = example_2_1();
        let [a, b, c, d] = s.starters[2].0;
        s.starters[2] = Block::new(a, b, d, c);
        let r = difference_census(&s).unwrap();
        assert!(!r.passed());
        assert!(r.violations.iter().all(|v| matches!(
            v,
            CensusViolation::Difference { color: Color::Two | Color::Three, .. }
        )));
        assert!(!verify_design(&develop(&s).unwrap()).passed());
    }

    #[test]
    fn duplicate_starters_are_rejected_unless_allowed() {
        let mut s = example_2_1();
        s.starters.push(s.starters[0].shifted(5, 21));
        assert!(matches!(develop(&s), Err(DevelopError::Duplicate { first: 0, second: 5, .. })));
        let d = develop_with(&s, DevelopOptions { allow_duplicates: true }).unwrap();
        assert_eq!(d.block_count(), 105);
    }

    #[test]
    fn invalid_starters_are_rejected() {
        let mut s = example_2_1();
        s.starters[0] = Block::new(f(0), f(7), f(5), x(1));
        assert!(matches!(develop(&s), Err(DevelopError::Invalid(StarterError::Starter { index: 0, .. }))));
        s.step = 2;
        assert!(matches!(develop(&s), Err(DevelopError::Invalid(StarterError::Step { .. }))));
        assert_eq!(difference_census(&s), Err(CensusError::Step(2)));
    }
}
