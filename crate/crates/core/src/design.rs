//! Designs and the ground-truth verifier.

use std::collections::HashMap;
use std::fmt;

use crate::point::{Block, Color, ColoredPair, Point};
use crate::types::{expected_block_count, TypeSpec};

/// A partition of the point set into holes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoleStructure {
    pub holes: Vec<Vec<Point>>,
}

impl HoleStructure {
    pub fn new(holes: Vec<Vec<Point>>) -> Self {
        HoleStructure { holes }
    }

    pub fn sizes(&self) -> impl Iterator<Item = u64> + '_ {
        self.holes.iter().map(|h| h.len() as u64)
    }

    pub fn type_spec(&self) -> TypeSpec {
        TypeSpec::from_sizes(self.sizes())
    }

    /// Map each point to the index of the hole containing it (first hole wins).
    pub fn hole_map(&self) -> HashMap<Point, usize> {
        let mut m = HashMap::new();
        for (i, h) in self.holes.iter().enumerate() {
            for &p in h {
                m.entry(p).or_insert(i);
            }
        }
        m
    }
}

/// A holey Schröder design candidate: points, holes and colored blocks.
///
/// Nothing is checked on construction; run [`verify_design`] to certify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    pub points: Vec<Point>,
    pub holes: HoleStructure,
    pub blocks: Vec<Block>,
    pub declared_type: TypeSpec,
}

impl Design {
    pub fn new(points: Vec<Point>, holes: Vec<Vec<Point>>, blocks: Vec<Block>, declared_type: TypeSpec) -> Self {
        Design { points, holes: HoleStructure::new(holes), blocks, declared_type }
    }

    /// Build a design whose point set is the union of the holes; the type is
    /// taken from the hole sizes.
    pub fn from_holes(holes: Vec<Vec<Point>>, blocks: Vec<Block>) -> Self {
        let mut points: Vec<Point> = holes.iter().flatten().copied().collect();
        points.sort();
        let hs = HoleStructure::new(holes);
        let declared_type = hs.type_spec();
        Design { points, holes: hs, blocks, declared_type }
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Same design with every block in canonical form and blocks sorted.
    pub fn canonicalized(&self) -> Design {
        let mut d = self.clone();
        d.canonicalize();
        d
    }

    pub fn canonicalize(&mut self) {
        for b in &mut self.blocks {
            *b = b.canonical();
        }
        self.blocks.sort();
        self.points.sort();
        for h in &mut self.holes.holes {
            h.sort();
        }
    }

    /// Canonical block list, sorted.
    pub fn canonical_blocks(&self) -> Vec<Block> {
        let mut v: Vec<Block> = self.blocks.iter().map(Block::canonical).collect();
        v.sort();
        v
    }

    /// Rename points through `f`; holes and blocks follow.
    pub fn relabeled<F: Fn(Point) -> Point>(&self, f: F) -> Design {
        Design {
            points: self.points.iter().map(|&p| f(p)).collect(),
            holes: HoleStructure::new(self.holes.holes.iter().map(|h| h.iter().map(|&p| f(p)).collect()).collect()),
            blocks: self.blocks.iter().map(|b| b.map(&f)).collect(),
            declared_type: self.declared_type.clone(),
        }
    }

    /// The single-hole design on `size` points: no cross pairs, no blocks.
    pub fn trivial(size: u32) -> Design {
        let hole: Vec<Point> = (0..size).map(Point::Finite).collect();
        Design::from_holes(vec![hole], Vec::new())
    }
}

/// One reason a design fails verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicatePointInSet(Point),
    PointInNoHole(Point),
    PointInSeveralHoles(Point),
    UnknownHolePoint { hole: usize, point: Point },
    EmptyHole(usize),
    TypeMismatch { declared: TypeSpec, actual: TypeSpec },
    UnknownBlockPoint { block: usize, point: Point },
    RepeatedPoint { block: usize, point: Point },
    HoleCollision { block: usize, hole: usize, first: Point, second: Point },
    MissingPair(ColoredPair),
    DuplicatedPair { pair: ColoredPair, count: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            DuplicatePointInSet(p) => write!(f, "point {p} listed twice in the point set"),
            PointInNoHole(p) => write!(f, "point {p} lies in no hole"),
            PointInSeveralHoles(p) => write!(f, "point {p} lies in more than one hole"),
            UnknownHolePoint { hole, point } => write!(f, "hole {hole} contains unknown point {point}"),
            EmptyHole(h) => write!(f, "hole {h} is empty"),
            TypeMismatch { declared, actual } => write!(f, "declared type {declared} but holes give {actual}"),
            UnknownBlockPoint { block, point } => write!(f, "block {block} uses unknown point {point}"),
            RepeatedPoint { block, point } => write!(f, "block {block} repeats point {point}"),
            HoleCollision { block, hole, first, second } => {
                write!(f, "block {block} meets hole {hole} in {first} and {second}")
            }
            MissingPair(p) => write!(f, "missing {p}"),
            DuplicatedPair { pair, count } => write!(f, "{pair} covered {count} times"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub points: usize,
    pub blocks: usize,
    pub expected_blocks: Option<u64>,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn missing_pairs(&self) -> usize {
        self.violations.iter().filter(|v| matches!(v, Violation::MissingPair(_))).count()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "PASS: {} points, {} blocks", self.points, self.blocks)
        } else {
            writeln!(f, "FAIL: {} points, {} blocks, {} violations", self.points, self.blocks, self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  {v}")?;
            }
            Ok(())
        }
    }
}

/// Check every HSD axiom and report all violations found.
///
/// PASS requires that the holes partition the point set with the declared
/// type, that every block has four distinct points from four distinct
/// holes, and that each color covers every cross-hole pair exactly once.
pub fn verify_design(d: &Design) -> VerificationReport {
    let mut violations = Vec::new();

    let mut index: HashMap<Point, usize> = HashMap::with_capacity(d.points.len());
    let mut points: Vec<Point> = Vec::with_capacity(d.points.len());
    for &p in &d.points {
        if index.insert(p, points.len()).is_some() {
            violations.push(Violation::DuplicatePointInSet(p));
        } else {
            points.push(p);
        }
    }
    let n = points.len();

    let mut hole_of: Vec<Option<usize>> = vec![None; n];
    for (h, hole) in d.holes.holes.iter().enumerate() {
        if hole.is_empty() {
            violations.push(Violation::EmptyHole(h));
        }
        for &p in hole {
            match index.get(&p) {
                None => violations.push(Violation::UnknownHolePoint { hole: h, point: p }),
                Some(&i) => match hole_of[i] {
                    None => hole_of[i] = Some(h),
                    Some(_) => violations.push(Violation::PointInSeveralHoles(p)),
                },
            }
        }
    }
    for (i, h) in hole_of.iter().enumerate() {
        if h.is_none() {
            violations.push(Violation::PointInNoHole(points[i]));
        }
    }
    let actual = d.holes.type_spec();
    if !actual.same_multiset(&d.declared_type) {
        violations.push(Violation::TypeMismatch { declared: d.declared_type.clone(), actual });
    }

    // Per-color coverage counts over the upper triangle.
    let tri = |i: usize, j: usize| -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        a * n + b
    };
    let mut counts: Vec<Vec<u16>> = vec![vec![0u16; n * n]; 3];
    for (bi, block) in d.blocks.iter().enumerate() {
        let mut idx = [usize::MAX; 4];
        let mut ok = true;
        for (k, &p) in block.0.iter().enumerate() {
            match index.get(&p) {
                Some(&i) => idx[k] = i,
                None => {
                    violations.push(Violation::UnknownBlockPoint { block: bi, point: p });
                    ok = false;
                }
            }
        }
        if !ok {
            continue;
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if idx[i] == idx[j] {
                    violations.push(Violation::RepeatedPoint { block: bi, point: block.0[i] });
                    ok = false;
                } else if let (Some(hi), Some(hj)) = (hole_of[idx[i]], hole_of[idx[j]]) {
                    if hi == hj {
                        violations.push(Violation::HoleCollision {
                            block: bi,
                            hole: hi,
                            first: block.0[i],
                            second: block.0[j],
                        });
                        ok = false;
                    }
                }
            }
        }
        if !ok {
            continue;
        }
        for &(i, j, color) in &Block::PAIR_POSITIONS {
            let c = &mut counts[color.index()][tri(idx[i], idx[j])];
            *c = c.saturating_add(1);
        }
    }

    for i in 0..n {
        for j in i + 1..n {
            let (Some(hi), Some(hj)) = (hole_of[i], hole_of[j]) else { continue };
            if hi == hj {
                continue;
            }
            for color in Color::ALL {
                let c = counts[color.index()][i * n + j];
                if c == 1 {
                    continue;
                }
                let pair = ColoredPair::new(color, points[i], points[j]);
                if c == 0 {
                    violations.push(Violation::MissingPair(pair));
                } else {
                    violations.push(Violation::DuplicatedPair { pair, count: c as u32 });
                }
            }
        }
    }

    VerificationReport {
        points: n,
        blocks: d.blocks.len(),
        expected_blocks: expected_block_count(&d.declared_type).ok(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(v: u32) -> Point {
        Point::Finite(v)
    }

    /// HSD(1^4): the three blocks of an idempotent Schröder quasigroup of order 4.
    fn hsd_1_4() -> Design {
        let holes = (0..4).map(|i| vec![f(i)]).collect();
        let blocks = vec![
            Block::new(f(0), f(1), f(2), f(3)),
            Block::new(f(0), f(2), f(3), f(1)),
            Block::new(f(0), f(3), f(1), f(2)),
        ];
        Design::from_holes(holes, blocks)
    }

    #[test]
    fn order_four_schroder_design_passes() {
        let r = verify_design(&hsd_1_4());
        assert!(r.passed(), "{r}");
        assert_eq!(r.blocks, 3);
        assert_eq!(r.expected_blocks, Some(3));
    }

    #[test]
    fn deleting_a_block_leaves_six_missing_pairs() {
        let mut d = hsd_1_4();
        d.blocks.pop();
        let r = verify_design(&d);
        assert!(!r.passed());
        assert_eq!(r.missing_pairs(), 6);
        assert_eq!(r.violations.len(), 6);
    }

    #[test]
    fn reports_hole_collisions_and_repeats() {
        let mut d = hsd_1_4();
        d.holes = HoleStructure::new(vec![vec![f(0), f(1)], vec![f(2)], vec![f(3)]]);
        d.declared_type = d.holes.type_spec();
        d.blocks.push(Block::new(f(0), f(0), f(2), f(3)));
        let r = verify_design(&d);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::HoleCollision { block: 0, .. })));
        assert!(r.violations.iter().any(|v| matches!(v, Violation::RepeatedPoint { block: 3, .. })));
    }

    #[test]
    fn reports_partition_and_type_problems() {
        let mut d = hsd_1_4();
        d.holes.holes[3].push(f(0));
        d.holes.holes.push(vec![f(9)]);
        let r = verify_design(&d);
        assert!(r.violations.contains(&Violation::PointInSeveralHoles(f(0))));
        assert!(r.violations.contains(&Violation::UnknownHolePoint { hole: 4, point: f(9) }));
        assert!(r.violations.iter().any(|v| matches!(v, Violation::TypeMismatch { .. })));
    }

    #[test]
    fn duplicated_block_is_reported_per_pair() {
        let mut d = hsd_1_4();
        d.blocks.push(d.blocks[0]);
        let r = verify_design(&d);
        let dups = r.violations.iter().filter(|v| matches!(v, Violation::DuplicatedPair { count: 2, .. })).count();
        assert_eq!(dups, 6);
    }
}
