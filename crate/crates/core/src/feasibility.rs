//! Necessary conditions for HSD(3^n u^1) and for general types.

use std::fmt;

use crate::types::{expected_block_count, TypeSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub n: u64,
    pub u: u64,
    /// n(n + 2u − 1) ≡ 0 (mod 4)
    pub congruence_ok: bool,
    /// n ≥ 1 + 2u/3, i.e. 3n ≥ 3 + 2u
    pub bound_ok: bool,
    /// n ≥ 4
    pub min_n_ok: bool,
    pub feasible: bool,
    /// Block count of HSD(3^n u^1); `None` when not an integer.
    pub expected_blocks: Option<u64>,
}

impl FeasibilityReport {
    /// Names of the failed predicates, in a fixed order.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !self.congruence_ok {
            v.push("congruence");
        }
        if !self.bound_ok {
            v.push("bound");
        }
        if !self.min_n_ok {
            v.push("n >= 4");
        }
        v
    }
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.feasible {
            write!(f, "feasible, expected {} blocks", self.expected_blocks.unwrap_or(0))
        } else {
            write!(f, "infeasible: {}", self.failures().join(", "))
        }
    }
}

pub fn is_feasible(n: u64, u: u64) -> FeasibilityReport {
    let congruence_ok = (n * (n + 2 * u).saturating_sub(1)) % 4 == 0 || n == 0;
    let bound_ok = 3 * n >= 3 + 2 * u;
    let min_n_ok = n >= 4;
    let expected_blocks = expected_block_count(&TypeSpec::uniform_plus_one(3, n, u)).ok();
    FeasibilityReport {
        n,
        u,
        congruence_ok,
        bound_ok,
        min_n_ok,
        feasible: congruence_ok && bound_ok && min_n_ok,
        expected_blocks,
    }
}

/// Why a type cannot carry an HSD, from counting alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeObstruction {
    /// Odd number of cross-hole pairs.
    NonIntegral,
    /// Two or three holes: a block needs four distinct holes.
    TooFewHoles(u64),
    /// The largest hole is too big for the points outside it.
    BigHole { big: u64, rest: u64 },
}

impl fmt::Display for TypeObstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeObstruction::NonIntegral => write!(f, "cross-hole pair count is odd"),
            TypeObstruction::TooFewHoles(k) => write!(f, "{k} holes; blocks need four"),
            TypeObstruction::BigHole { big, rest } => {
                write!(f, "hole of size {big} too large for {rest} remaining points")
            }
        }
    }
}

/// Counting obstructions valid for any type.
///
/// A single hole is the trivial empty design. Otherwise we need four holes,
/// an integral block count, and the big-hole bound: each block through the
/// largest hole `H` covers three colored pairs at `H` and three among the
/// remaining `r` points, so the `|H|·r` such blocks need
/// `2·|H|·r ≤ r(r − 1) − Σ s(s − 1)` over the other holes.
pub fn type_obstruction(t: &TypeSpec) -> Option<TypeObstruction> {
    let holes = t.hole_count();
    if holes <= 1 {
        return None;
    }
    if holes < 4 {
        return Some(TypeObstruction::TooFewHoles(holes));
    }
    if expected_block_count(t).is_err() {
        return Some(TypeObstruction::NonIntegral);
    }
    let sizes = t.sizes();
    let big = sizes[0];
    let rest: u64 = sizes[1..].iter().sum();
    let inside: u64 = sizes[1..].iter().map(|s| s * (s - 1)).sum();
    if 2 * big * rest > rest * rest.saturating_sub(1) - inside {
        return Some(TypeObstruction::BigHole { big, rest });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_pairs() {
        let r = is_feasible(7, 1);
        assert!(r.feasible);
        assert_eq!(r.expected_blocks, Some(105));

        let r = is_feasible(9, 1);
        assert!(!r.feasible && !r.congruence_ok && r.bound_ok);
        assert_eq!(r.to_string(), "infeasible: congruence");

        let r = is_feasible(4, 5);
        assert!(!r.feasible && !r.bound_ok);

        assert_eq!(is_feasible(8, 2).to_string(), "feasible, expected 150 blocks");
    }

    #[test]
    fn n_six_row_is_infeasible() {
        for u in 0..40 {
            assert!(!is_feasible(6, u).feasible);
        }
    }

    #[test]
    fn block_count_integral_iff_congruence() {
        for n in 1..60 {
            for u in 0..60 {
                let r = is_feasible(n, u);
                assert_eq!(r.expected_blocks.is_some(), r.congruence_ok, "n={n} u={u}");
            }
        }
    }

    #[test]
    fn bound_matches_big_hole_obstruction_for_uniform_types() {
        for n in 4..30 {
            for u in 0..60 {
                let t = TypeSpec::uniform_plus_one(3, n, u);
                let r = is_feasible(n, u);
                if r.congruence_ok && u > 3 {
                    let big = matches!(type_obstruction(&t), Some(TypeObstruction::BigHole { .. }));
                    assert_eq!(big, !r.bound_ok, "n={n} u={u}");
                }
            }
        }
    }

    #[test]
    fn small_general_types() {
        assert_eq!(type_obstruction(&"1^1".parse().unwrap()), None);
        assert_eq!(type_obstruction(&"1^3".parse().unwrap()), Some(TypeObstruction::TooFewHoles(3)));
        assert_eq!(type_obstruction(&"1^4".parse().unwrap()), None);
        assert_eq!(type_obstruction(&"1^5".parse().unwrap()), None);
        assert_eq!(type_obstruction(&"1^6".parse().unwrap()), Some(TypeObstruction::NonIntegral));
    }
}
