//! Points, blocks and the colored pairs a block carries.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A point of a design.
///
/// Finite points are residues of the cyclic group a design is developed
/// over (or plain indices for constructed designs); infinite points are
/// fixed by every shift. The derived order puts all finite points before
/// all infinite points, which is the order used for canonical blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Finite(u32),
    Infinite(u32),
}

impl Point {
    pub fn is_finite(self) -> bool {
        matches!(self, Point::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Point::Infinite(_))
    }

    /// Add `shift` modulo `modulus` to a finite point; infinite points are fixed.
    pub fn shifted(self, shift: u32, modulus: u32) -> Point {
        match self {
            Point::Finite(v) => Point::Finite(((v as u64 + shift as u64) % modulus as u64) as u32),
            inf => inf,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(v) => write!(f, "{v}"),
            Point::Infinite(l) => write!(f, "x{l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid point token `{0}`")]
pub struct PointParseError(pub String);

impl FromStr for Point {
    type Err = PointParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || PointParseError(s.to_string());
        if let Some(rest) = s.strip_prefix('x') {
            let label: u32 = rest.parse().map_err(|_| err())?;
            if label == 0 {
                return Err(err());
            }
            Ok(Point::Infinite(label))
        } else {
            s.parse().map(Point::Finite).map_err(|_| err())
        }
    }
}

/// One of the three edge colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    One = 1,
    Two = 2,
    Three = 3,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::One, Color::Two, Color::Three];

    /// Zero-based index, handy for per-color arrays.
    pub fn index(self) -> usize {
        self as usize - 1
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", *self as u8)
    }
}

/// An unordered pair of points together with its color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredPair {
    pub color: Color,
    /// Smaller point of the pair.
    pub low: Point,
    /// Larger point of the pair.
    pub high: Point,
}

impl ColoredPair {
    pub fn new(color: Color, p: Point, q: Point) -> Self {
        let (low, high) = if p <= q { (p, q) } else { (q, p) };
        ColoredPair { color, low, high }
    }
}

impl fmt::Display for ColoredPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "color {} {{{}, {}}}", self.color, self.low, self.high)
    }
}

/// An edge-colored block `[a, b, c, d]`.
///
/// `{a,b},{c,d}` carry color 1, `{a,c},{b,d}` color 2 and `{a,d},{b,c}`
/// color 3. The orderings `[b,a,d,c]`, `[c,d,a,b]` and `[d,c,b,a]` carry
/// the same colored pairs and are treated as the same block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block(pub [Point; 4]);

impl Block {
    pub fn new(a: Point, b: Point, c: Point, d: Point) -> Self {
        Block([a, b, c, d])
    }

    pub fn points(&self) -> &[Point; 4] {
        &self.0
    }

    /// The four orderings equivalent to this block.
    pub fn equivalents(&self) -> [Block; 4] {
        let [a, b, c, d] = self.0;
        [
            Block([a, b, c, d]),
            Block([b, a, d, c]),
            Block([c, d, a, b]),
            Block([d, c, b, a]),
        ]
    }

    /// Lexicographically least equivalent ordering.
    pub fn canonical(&self) -> Block {
        let eq = self.equivalents();
        *eq.iter().min().expect("four orderings")
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    pub fn shifted(&self, shift: u32, modulus: u32) -> Block {
        Block(self.0.map(|p| p.shifted(shift, modulus)))
    }

    /// Apply a point map to every coordinate.
    pub fn map<F: FnMut(Point) -> Point>(&self, f: F) -> Block {
        Block(self.0.map(f))
    }

    pub fn has_distinct_points(&self) -> bool {
        let p = &self.0;
        (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]))
    }

    /// The six colored pairs of the block, two per color.
    pub fn pairs(&self) -> [ColoredPair; 6] {
        let [a, b, c, d] = self.0;
        [
            ColoredPair::new(Color::One, a, b),
            ColoredPair::new(Color::One, c, d),
            ColoredPair::new(Color::Two, a, c),
            ColoredPair::new(Color::Two, b, d),
            ColoredPair::new(Color::Three, a, d),
            ColoredPair::new(Color::Three, b, c),
        ]
    }

    /// Positions `(i, j, color)` of the six pairs inside the block.
    pub const PAIR_POSITIONS: [(usize, usize, Color); 6] = [
        (0, 1, Color::One),
        (2, 3, Color::One),
        (0, 2, Color::Two),
        (1, 3, Color::Two),
        (0, 3, Color::Three),
        (1, 2, Color::Three),
    ];
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "[{a}, {b}, {c}, {d}]")
    }
}

/// Same as [`Block::pairs`]; kept as a free function for callers that only
/// hold a block by value.
pub fn block_pairs(b: Block) -> [ColoredPair; 6] {
    b.pairs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(v: u32) -> Point {
        Point::Finite(v)
    }
    fn x(l: u32) -> Point {
        Point::Infinite(l)
    }

    #[test]
    fn pairs_follow_position_rule() {
        let b = Block::new(f(0), f(1), f(5), x(1));
        let p = b.pairs();
        assert_eq!(p[0], ColoredPair::new(Color::One, f(0), f(1)));
        assert_eq!(p[1], ColoredPair::new(Color::One, f(5), x(1)));
        assert_eq!(p[2], ColoredPair::new(Color::Two, f(0), f(5)));
        assert_eq!(p[3], ColoredPair::new(Color::Two, f(1), x(1)));
        assert_eq!(p[4], ColoredPair::new(Color::Three, f(0), x(1)));
        assert_eq!(p[5], ColoredPair::new(Color::Three, f(1), f(5)));
    }

    #[test]
    fn equivalent_orderings_share_pairs() {
        let b = Block::new(f(3), f(9), f(1), f(4));
        let mut base = b.pairs().to_vec();
        base.sort();
        for e in b.equivalents() {
            let mut other = e.pairs().to_vec();
            other.sort();
            assert_eq!(base, other);
        }
    }

    #[test]
    fn canonical_form_of_short_orbit_example() {
        let b = Block::new(f(12), f(0), f(15), f(3));
        assert_eq!(b.canonical(), Block::new(f(0), f(12), f(3), f(15)));
        let c = Block::new(f(0), f(12), f(3), f(15)).pairs();
        assert_eq!(c[0], ColoredPair::new(Color::One, f(0), f(12)));
        assert_eq!(c[1], ColoredPair::new(Color::One, f(3), f(15)));
    }

    #[test]
    fn finite_points_sort_before_infinite() {
        assert!(f(1000) < x(1));
        assert!(x(1) < x(2));
    }

    #[test]
    fn point_tokens_round_trip() {
        for tok in ["0", "17", "x1", "x12"] {
            let p: Point = tok.parse().unwrap();
            assert_eq!(p.to_string(), tok);
        }
        assert!("x0".parse::<Point>().is_err());
        assert!("y3".parse::<Point>().is_err());
        assert!("-1".parse::<Point>().is_err());
    }
}
