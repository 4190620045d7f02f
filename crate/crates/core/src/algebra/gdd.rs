//! Group divisible designs.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::types::TypeSpec;

/// Points are `0..v`; groups partition them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gdd {
    pub groups: Vec<Vec<u32>>,
    pub blocks: Vec<Vec<u32>>,
    pub lambda: u32,
}

impl Gdd {
    pub fn point_count(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn block_sizes(&self) -> BTreeSet<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Group type, e.g. `3^8 6^1`.
    pub fn group_type(&self) -> TypeSpec {
        TypeSpec::from_sizes(self.groups.iter().map(|g| g.len() as u64))
    }

    /// Point → group index.
    pub fn group_map(&self) -> HashMap<u32, usize> {
        self.groups.iter().enumerate().flat_map(|(i, g)| g.iter().map(move |&p| (p, i))).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GddViolation {
    PointInNoGroup(u32),
    PointInSeveralGroups(u32),
    UnknownPoint { block: usize, point: u32 },
    SameGroup { block: usize, p: u32, q: u32 },
    Cover { p: u32, q: u32, count: u32 },
}

impl fmt::Display for GddViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GddViolation::PointInNoGroup(p) => write!(f, "point {p} lies in no group"),
            GddViolation::PointInSeveralGroups(p) => write!(f, "point {p} lies in several groups"),
            GddViolation::UnknownPoint { block, point } => write!(f, "block {block} uses unknown point {point}"),
            GddViolation::SameGroup { block, p, q } => write!(f, "block {block} contains {p} and {q} from one group"),
            GddViolation::Cover { p, q, count } => write!(f, "pair {{{p}, {q}}} covered {count} times"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GddReport {
    pub violations: Vec<GddViolation>,
}

impl GddReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn uncovered(&self) -> usize {
        self.violations.iter().filter(|v| matches!(v, GddViolation::Cover { count: 0, .. })).count()
    }
}

pub fn verify_gdd(g: &Gdd) -> GddReport {
    let mut violations = Vec::new();
    let v = g.groups.iter().flatten().map(|&p| p as usize + 1).max().unwrap_or(0).max(g.point_count());
    let mut group_of: Vec<Option<usize>> = vec![None; v];
    for (i, grp) in g.groups.iter().enumerate() {
        for &p in grp {
            match group_of[p as usize] {
                None => group_of[p as usize] = Some(i),
                Some(_) => violations.push(GddViolation::PointInSeveralGroups(p)),
            }
        }
    }
    for (p, grp) in group_of.iter().enumerate() {
        if grp.is_none() {
            violations.push(GddViolation::PointInNoGroup(p as u32));
        }
    }
    let mut count = vec![0u32; v * v];
    for (bi, b) in g.blocks.iter().enumerate() {
        if let Some(&p) = b.iter().find(|&&p| (p as usize) >= v || group_of[p as usize].is_none()) {
            violations.push(GddViolation::UnknownPoint { block: bi, point: p });
            continue;
        }
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                let (p, q) = (b[i].min(b[j]), b[i].max(b[j]));
                if group_of[p as usize] == group_of[q as usize] {
                    violations.push(GddViolation::SameGroup { block: bi, p, q });
                } else {
                    count[p as usize * v + q as usize] += 1;
                }
            }
        }
    }
    for p in 0..v {
        for q in p + 1..v {
            let (Some(gp), Some(gq)) = (group_of[p], group_of[q]) else { continue };
            let c = count[p * v + q];
            if gp != gq && c != g.lambda {
                violations.push(GddViolation::Cover { p: p as u32, q: q as u32, count: c });
            }
        }
    }
    GddReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// TD(3,2): groups {0,1},{2,3},{4,5}.
    fn td32() -> Gdd {
        Gdd {
            groups: vec![vec![0, 1], vec![2, 3], vec![4, 5]],
            blocks: vec![vec![0, 2, 4], vec![0, 3, 5], vec![1, 2, 5], vec![1, 3, 4]],
            lambda: 1,
        }
    }

    #[test]
    fn small_td_passes_and_breaks() {
        let mut g = td32();
        assert!(verify_gdd(&g).passed());
        assert_eq!(g.group_type().to_string(), "2^3");
        g.blocks.pop();
        let r = verify_gdd(&g);
        assert_eq!(r.uncovered(), 3);
        g.blocks.push(vec![1, 0, 4]);
        assert!(verify_gdd(&g).violations.iter().any(|v| matches!(v, GddViolation::SameGroup { .. })));
    }
}
