//! Exponential type notation such as `3^8 2^1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// The multiset of hole sizes of a design, kept in the order it was written.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeSpec {
    parts: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeParseError {
    #[error("empty type")]
    Empty,
    #[error("malformed term `{term}` at offset {offset}")]
    Malformed { term: String, offset: usize },
    #[error("zero size or count in term `{term}` at offset {offset}")]
    Zero { term: String, offset: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockCountError {
    #[error("type {0} has an odd number of cross-hole pairs; no design of this type exists")]
    NonIntegral(TypeSpec),
}

impl TypeSpec {
    /// Build from `(size, count)` parts, silently dropping zero sizes or counts.
    pub fn new<I: IntoIterator<Item = (u64, u64)>>(parts: I) -> Self {
        TypeSpec {
            parts: parts.into_iter().filter(|&(s, c)| s > 0 && c > 0).collect(),
        }
    }

    /// `h^n u^1`, omitting the last part when `u == 0`.
    pub fn uniform_plus_one(h: u64, n: u64, u: u64) -> Self {
        TypeSpec::new([(h, n), (u, 1)])
    }

    /// Type of a design whose holes have the given sizes.
    pub fn from_sizes<I: IntoIterator<Item = u64>>(sizes: I) -> Self {
        let mut parts: Vec<(u64, u64)> = Vec::new();
        for s in sizes {
            match parts.last_mut() {
                Some((size, count)) if *size == s => *count += 1,
                _ => parts.push((s, 1)),
            }
        }
        TypeSpec::new(parts).canonical()
    }

    pub fn parts(&self) -> &[(u64, u64)] {
        &self.parts
    }

    pub fn total_points(&self) -> u64 {
        self.parts.iter().map(|&(s, c)| s * c).sum()
    }

    pub fn hole_count(&self) -> u64 {
        self.parts.iter().map(|&(_, c)| c).sum()
    }

    /// Size → count, with equal sizes merged.
    pub fn multiset(&self) -> BTreeMap<u64, u64> {
        let mut m = BTreeMap::new();
        for &(s, c) in &self.parts {
            *m.entry(s).or_insert(0) += c;
        }
        m
    }

    /// Hole sizes in non-increasing order, one entry per hole.
    pub fn sizes(&self) -> Vec<u64> {
        let mut v = Vec::new();
        for (s, c) in self.multiset().into_iter().rev() {
            v.extend(std::iter::repeat(s).take(c as usize));
        }
        v
    }

    /// Equal sizes merged; ordered by count (descending) then size
    /// (descending), so `3^4 4^1` and `4^1 3^4` both render as `3^4 4^1`.
    pub fn canonical(&self) -> TypeSpec {
        let mut parts: Vec<(u64, u64)> = self.multiset().into_iter().collect();
        parts.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
        TypeSpec { parts }
    }

    pub fn same_multiset(&self, other: &TypeSpec) -> bool {
        self.multiset() == other.multiset()
    }

    /// Number of unordered pairs of points lying in distinct holes.
    pub fn cross_pairs(&self) -> u64 {
        let p = self.total_points();
        let inside: u64 = self.parts.iter().map(|&(s, c)| c * s * s.saturating_sub(1) / 2).sum();
        p * p.saturating_sub(1) / 2 - inside
    }

    /// Multiply every hole size by `m`.
    pub fn scaled(&self, m: u64) -> TypeSpec {
        TypeSpec::new(self.parts.iter().map(|&(s, c)| (s * m, c)))
    }

    /// If the type is `h^n` or `h^n u^1` (with `u != h`), return `(h, n, u)`.
    pub fn as_uniform_plus_one(&self) -> Option<(u64, u64, u64)> {
        let m = self.multiset();
        match m.len() {
            1 => {
                let (&h, &n) = m.iter().next()?;
                Some((h, n, 0))
            }
            2 => {
                let mut it = m.iter();
                let (&s1, &c1) = it.next()?;
                let (&s2, &c2) = it.next()?;
                if c2 == 1 && c1 > 1 {
                    Some((s1, c1, s2))
                } else if c1 == 1 && c2 > 1 {
                    Some((s2, c2, s1))
                } else {
                    None
                }
            }
            _ => None,
        }
    }
}

/// Number of blocks any HSD of this type must have.
///
/// Each cross-hole pair lies in exactly three blocks (one per color) and
/// each block carries six pairs, so the count is `cross_pairs / 2`.
pub fn expected_block_count(t: &TypeSpec) -> Result<u64, BlockCountError> {
    let cross = t.cross_pairs();
    if cross % 2 != 0 {
        return Err(BlockCountError::NonIntegral(t.clone()));
    }
    Ok(cross / 2)
}

pub fn parse_type(text: &str) -> Result<TypeSpec, TypeParseError> {
    text.parse()
}

impl FromStr for TypeSpec {
    type Err = TypeParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut parts = Vec::new();
        let mut offset = 0usize;
        for term in text.split_whitespace() {
            let start = text[offset..].find(term).map(|i| i + offset).unwrap_or(offset);
            offset = start + term.len();
            let malformed = || TypeParseError::Malformed { term: term.to_string(), offset: start };
            let (s, c) = term.split_once('^').ok_or_else(malformed)?;
            let valid = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
            if !valid(s) || !valid(c) {
                return Err(malformed());
            }
            let size: u64 = s.parse().map_err(|_| malformed())?;
            let count: u64 = c.parse().map_err(|_| malformed())?;
            if size == 0 || count == 0 {
                return Err(TypeParseError::Zero { term: term.to_string(), offset: start });
            }
            parts.push((size, count));
        }
        if parts.is_empty() {
            return Err(TypeParseError::Empty);
        }
        Ok(TypeSpec { parts })
    }
}

impl fmt::Display for TypeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "(empty)");
        }
        for (i, (s, c)) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}^{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_worked_types() {
        let t = parse_type("3^8 2^1").unwrap();
        assert_eq!(t.parts(), &[(3, 8), (2, 1)]);
        assert_eq!(t.total_points(), 26);

        let t = parse_type("1^1").unwrap();
        assert_eq!(t.parts(), &[(1, 1)]);
        assert_eq!(t.total_points(), 1);

        let t = parse_type("9^4 13^1").unwrap();
        assert_eq!(t.parts(), &[(9, 4), (13, 1)]);
        assert_eq!(t.total_points(), 49);
    }

    #[test]
    fn rejects_bad_text_with_offsets() {
        assert_eq!(parse_type(""), Err(TypeParseError::Empty));
        assert_eq!(
            parse_type("3^8 2x1"),
            Err(TypeParseError::Malformed { term: "2x1".into(), offset: 4 })
        );
        assert_eq!(
            parse_type("3^8  0^1"),
            Err(TypeParseError::Zero { term: "0^1".into(), offset: 5 })
        );
        assert!(parse_type("3^").is_err());
        assert!(parse_type("^2").is_err());
        assert!(parse_type("3^-1").is_err());
    }

    #[test]
    fn renders_losslessly() {
        for s in ["3^8 2^1", "9^4 13^1", "15^4 3^1 8^1", "1^1"] {
            assert_eq!(parse_type(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn block_counts_of_worked_types() {
        assert_eq!(expected_block_count(&parse_type("3^7 1^1").unwrap()), Ok(105));
        assert_eq!(expected_block_count(&parse_type("3^8 2^1").unwrap()), Ok(150));
        assert_eq!(expected_block_count(&parse_type("3^8 1^1").unwrap()), Ok(138));
        assert_eq!(expected_block_count(&parse_type("1^4").unwrap()), Ok(3));
        assert!(expected_block_count(&parse_type("3^9 1^1").unwrap()).is_err());
    }

    #[test]
    fn canonical_merges_and_orders() {
        let t = parse_type("4^1 3^2 3^2").unwrap().canonical();
        assert_eq!(t.to_string(), "3^4 4^1");
        assert_eq!(TypeSpec::from_sizes([3, 3, 3, 3, 3]).to_string(), "3^5");
        assert_eq!(TypeSpec::uniform_plus_one(3, 4, 0).to_string(), "3^4");
        assert_eq!(
            parse_type("3^8 5^1").unwrap().as_uniform_plus_one(),
            Some((3, 8, 5))
        );
        assert_eq!(parse_type("3^5").unwrap().as_uniform_plus_one(), Some((3, 5, 0)));
    }
}
