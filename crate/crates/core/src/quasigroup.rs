//! The quasigroup side of an HSD: `a·b = c, b·a = d, c·d = a, d·c = b`
//! for every block `[a, b, c, d]`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::latin::LatinSquare;
use crate::design::Design;
use crate::point::{Block, Point};
use crate::types::TypeSpec;

/// Partial multiplication table over the points of a design.
///
/// Cells `(x, y)` with `x`, `y` in one hole are undefined, except the
/// diagonal of a size-1 hole, which is set idempotently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasigroupTable {
    points: Vec<Point>,
    hole_of: Vec<usize>,
    holes: Vec<Vec<usize>>,
    cells: Vec<Option<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuasigroupError {
    #[error("blocks {first} and {second} both define {x}·{y}")]
    Conflict { first: usize, second: usize, x: Point, y: Point },
    #[error("block {block} uses a point outside the hole partition")]
    UnknownPoint { block: usize },
    #[error("({x}·{y})·({y}·{x}) ≠ {x}")]
    Identity { x: Point, y: Point },
    #[error("{x}·{y} is undefined although {x} and {y} lie in distinct holes")]
    Undefined { x: Point, y: Point },
    #[error("{x}·{y} = {z} shares a hole with an operand")]
    HoleValue { x: Point, y: Point, z: Point },
}

impl QuasigroupTable {
    /// An empty table over the given holes.
    pub fn empty(holes: &[Vec<Point>]) -> Self {
        let mut points: Vec<Point> = holes.iter().flatten().copied().collect();
        points.sort();
        let index: HashMap<Point, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut hole_of = vec![0; points.len()];
        let holes: Vec<Vec<usize>> = holes
            .iter()
            .enumerate()
            .map(|(h, hole)| {
                let mut idx: Vec<usize> = hole.iter().map(|p| index[p]).collect();
                idx.sort();
                for &i in &idx {
                    hole_of[i] = h;
                }
                idx
            })
            .collect();
        let n = points.len();
        QuasigroupTable { points, hole_of, holes, cells: vec![None; n * n] }
    }

    /// A complete table on `0..order` (every point its own hole) from `f`.
    pub fn from_fn<F: Fn(u32, u32) -> u32>(order: u32, f: F) -> Self {
        let holes: Vec<Vec<Point>> = (0..order).map(|i| vec![Point::Finite(i)]).collect();
        let mut q = QuasigroupTable::empty(&holes);
        for x in 0..order as usize {
            for y in 0..order as usize {
                q.cells[x * order as usize + y] = Some(f(x as u32, y as u32));
            }
        }
        q
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn holes(&self) -> Vec<Vec<Point>> {
        self.holes.iter().map(|h| h.iter().map(|&i| self.points[i]).collect()).collect()
    }

    /// Whether `(x, y)` (by index) should carry a value.
    pub fn is_defined_cell(&self, x: usize, y: usize) -> bool {
        self.hole_of[x] != self.hole_of[y] || (x == y && self.holes[self.hole_of[x]].len() == 1)
    }

    /// Product by index.
    pub fn get_index(&self, x: usize, y: usize) -> Option<usize> {
        self.cells[x * self.order() + y].map(|v| v as usize)
    }

    pub fn set_index(&mut self, x: usize, y: usize, z: usize) {
        let n = self.order();
        self.cells[x * n + y] = Some(z as u32);
    }

    pub fn get(&self, x: Point, y: Point) -> Option<Point> {
        let xi = self.points.binary_search(&x).ok()?;
        let yi = self.points.binary_search(&y).ok()?;
        self.get_index(xi, yi).map(|z| self.points[z])
    }

    /// Rows and columns are Latin outside holes: in each row the defined
    /// values are distinct and are exactly the defined column indices, and
    /// dually for columns.
    pub fn latin_outside_holes(&self) -> bool {
        let n = self.order();
        for line in 0..n {
            for transpose in [false, true] {
                let mut want = vec![false; n];
                let mut got = vec![false; n];
                for other in 0..n {
                    let (x, y) = if transpose { (other, line) } else { (line, other) };
                    let defined = self.is_defined_cell(x, y);
                    match (defined, self.get_index(x, y)) {
                        (true, Some(z)) => {
                            want[other] = true;
                            if std::mem::replace(&mut got[z], true) {
                                return false;
                            }
                        }
                        (false, None) => {}
                        _ => return false,
                    }
                }
                if want != got {
                    return false;
                }
            }
        }
        true
    }

    /// The table as a Latin square when every cell is defined.
    pub fn to_latin_square(&self) -> Option<LatinSquare> {
        let cells: Option<Vec<u32>> = self.cells.iter().copied().collect();
        LatinSquare::new(self.order(), cells?).ok()
    }
}

impl fmt::Display for QuasigroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
        let w = names.iter().map(|s| s.len()).max().unwrap_or(1).max(1);
        write!(f, "{:>w$} |", "*")?;
        for s in &names {
            write!(f, " {s:>w$}")?;
        }
        writeln!(f)?;
        writeln!(f, "{}", "-".repeat((w + 1) * (names.len() + 1) + 1))?;
        for x in 0..self.order() {
            write!(f, "{:>w$} |", names[x])?;
            for y in 0..self.order() {
                match self.get_index(x, y) {
                    Some(z) => write!(f, " {:>w$}", names[z])?,
                    None => write!(f, " {:>w$}", ".")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Fill the table from the blocks of `d`.
pub fn to_quasigroup(d: &Design) -> Result<QuasigroupTable, QuasigroupError> {
    let mut q = QuasigroupTable::empty(&d.holes.holes);
    let n = q.order();
    let mut owner: Vec<Option<usize>> = vec![None; n * n];
    for (bi, block) in d.blocks.iter().enumerate() {
        let mut idx = [0usize; 4];
        for (k, p) in block.0.iter().enumerate() {
            idx[k] = q.points.binary_search(p).map_err(|_| QuasigroupError::UnknownPoint { block: bi })?;
        }
        let [a, b, c, dd] = idx;
        for (x, y, z) in [(a, b, c), (b, a, dd), (c, dd, a), (dd, c, b)] {
            let cell = x * n + y;
            match owner[cell] {
                Some(first) if q.cells[cell] != Some(z as u32) => {
                    return Err(QuasigroupError::Conflict {
                        first,
                        second: bi,
                        x: q.points[x],
                        y: q.points[y],
                    })
                }
                Some(_) => {}
                None => {
                    owner[cell] = Some(bi);
                    q.cells[cell] = Some(z as u32);
                }
            }
        }
    }
    for h in &q.holes {
        if let [x] = h[..] {
            q.cells[x * n + x] = Some(x as u32);
        }
    }
    Ok(q)
}

/// Read the blocks `[x, y, x·y, y·x]` back off a table.
pub fn from_quasigroup(q: &QuasigroupTable) -> Result<Design, QuasigroupError> {
    let n = q.order();
    let mut blocks: Vec<Block> = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if q.hole_of[x] == q.hole_of[y] {
                continue;
            }
            let (px, py) = (q.points[x], q.points[y]);
            let (Some(c), Some(d)) = (q.get_index(x, y), q.get_index(y, x)) else {
                return Err(QuasigroupError::Undefined { x: px, y: py });
            };
            for (a, b, z) in [(x, y, c), (y, x, d)] {
                if q.hole_of[z] == q.hole_of[a] || q.hole_of[z] == q.hole_of[b] {
                    return Err(QuasigroupError::HoleValue { x: q.points[a], y: q.points[b], z: q.points[z] });
                }
            }
            if q.get_index(c, d) != Some(x) || q.get_index(d, c) != Some(y) {
                return Err(QuasigroupError::Identity { x: px, y: py });
            }
            blocks.push(Block::new(px, py, q.points[c], q.points[d]).canonical());
        }
    }
    blocks.sort();
    blocks.dedup();
    let holes = q.holes();
    let declared_type = TypeSpec::from_sizes(holes.iter().map(|h| h.len() as u64));
    Ok(Design::new(q.points.clone(), holes, blocks, declared_type))
}

/// Every cell `(x, y)` that should be defined where `(x·y)·(y·x) ≠ x`
/// (undefined intermediate products count as violations).
pub fn check_schroder_identity(q: &QuasigroupTable) -> Vec<(Point, Point)> {
    let n = q.order();
    let mut bad = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if !q.is_defined_cell(x, y) {
                continue;
            }
            let ok = match (q.get_index(x, y), q.get_index(y, x)) {
                (Some(a), Some(b)) => q.get_index(a, b) == Some(x),
                _ => false,
            };
            if !ok {
                bad.push((q.points[x], q.points[y]));
            }
        }
    }
    bad
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeisnerReport {
    pub order_mismatch: bool,
    /// Cells `(x, y)` where the implication fails.
    pub violations: Vec<(usize, usize)>,
}

impl WeisnerReport {
    pub fn passed(&self) -> bool {
        !self.order_mismatch && self.violations.is_empty()
    }
}

/// `L1(x,y) = z ∧ L2(x,y) = w ⇒ L1(z,w) = x ∧ L2(z,w) = y` for all cells.
pub fn check_weisner_pair(l1: &LatinSquare, l2: &LatinSquare) -> WeisnerReport {
    if l1.order() != l2.order() {
        return WeisnerReport { order_mismatch: true, violations: Vec::new() };
    }
    let m = l1.order();
    let mut violations = Vec::new();
    for x in 0..m {
        for y in 0..m {
            let (z, w) = (l1.get(x, y) as usize, l2.get(x, y) as usize);
            if l1.get(z, w) as usize != x || l2.get(z, w) as usize != y {
                violations.push((x, y));
            }
        }
    }
    WeisnerReport { order_mismatch: false, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::verify_design;

    fn f(v: u32) -> Point {
        Point::Finite(v)
    }

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
    fn order_four_round_trip() {
        let d = hsd_1_4();
        assert!(verify_design(&d).passed());
        let q = to_quasigroup(&d).unwrap();
        assert!(q.latin_outside_holes());
        assert!(check_schroder_identity(&q).is_empty());
        for x in 0..4 {
            assert_eq!(q.get_index(x, x), Some(x));
        }
        let back = from_quasigroup(&q).unwrap();
        assert_eq!(back.canonical_blocks(), d.canonical_blocks());
        assert_eq!(back.block_count(), 3);

        let l = q.to_latin_square().unwrap();
        assert!(check_weisner_pair(&l, &l.transpose()).passed());
    }

    #[test]
    fn conflicting_blocks_are_named() {
        let mut d = hsd_1_4();
        d.blocks.push(Block::new(f(0), f(1), f(3), f(2)));
        match to_quasigroup(&d) {
            Err(QuasigroupError::Conflict { first: 0, second: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cyclic_group_is_not_schroder() {
        let q = QuasigroupTable::from_fn(4, |x, y| (x + y) % 4);
        assert!(!check_schroder_identity(&q).is_empty());
        assert!(from_quasigroup(&q).is_err());
        let one = QuasigroupTable::from_fn(1, |_, _| 0);
        assert!(check_schroder_identity(&one).is_empty());
    }

    #[test]
    fn weisner_fails_on_non_orthogonal_pair() {
        let a = LatinSquare::from_fn(4, |r, c| ((r + c) % 4) as u32).unwrap();
        let b = LatinSquare::from_fn(4, |r, c| ((r + 3 * c) % 4) as u32).unwrap();
        assert!(!check_weisner_pair(&a, &b).passed());
        let one = LatinSquare::from_fn(1, |_, _| 0).unwrap();
        assert!(check_weisner_pair(&one, &one).passed());
    }

    #[test]
    fn single_identity_violation_is_reported() {
        let d = hsd_1_4();
        let mut q = to_quasigroup(&d).unwrap();
        let (a, b) = (q.get_index(0, 1).unwrap(), q.get_index(1, 0).unwrap());
        let wrong = q.get_index(a, b).map(|v| if v == 0 { 3 } else { 0 }).unwrap();
        q.set_index(a, b, wrong);
        assert!(!check_schroder_identity(&q).is_empty());
        assert!(from_quasigroup(&q).is_err());
    }
}
