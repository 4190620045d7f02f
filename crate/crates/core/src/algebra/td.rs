//! Transversal designs.

use super::field::{mols_pair, prime_power};
use super::gdd::Gdd;
use super::latin::MolsSet;

/// TD(k, m): point `(group i, element x)` is `i·m + x`; each block holds one
/// point per group, listed in group order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalDesign {
    pub k: usize,
    pub m: usize,
    pub blocks: Vec<Vec<u32>>,
}

impl TransversalDesign {
    pub fn point(&self, group: usize, x: usize) -> u32 {
        (group * self.m + x) as u32
    }

    pub fn groups(&self) -> Vec<Vec<u32>> {
        (0..self.k).map(|i| (0..self.m).map(|x| self.point(i, x)).collect()).collect()
    }

    pub fn to_gdd(&self) -> Gdd {
        Gdd { groups: self.groups(), blocks: self.blocks.clone(), lambda: 1 }
    }
}

/// Blocks `{(0,x), (1,y), (2,L_1(x,y)), …}`.
pub fn td_from_mols(ms: &MolsSet) -> TransversalDesign {
    let m = ms.order();
    let k = ms.len() + 2;
    let mut blocks = Vec::with_capacity(m * m);
    for x in 0..m {
        for y in 0..m {
            let mut b = vec![x as u32, (m + y) as u32];
            for (i, sq) in ms.squares().iter().enumerate() {
                b.push(((i + 2) * m) as u32 + sq.get(x, y));
            }
            blocks.push(b);
        }
    }
    TransversalDesign { k, m, blocks }
}

/// Known existence of TD(k, m). `false` means "not known here", never
/// "does not exist".
pub fn td_exists(k: u32, m: u32) -> bool {
    if m == 0 {
        return false;
    }
    if k <= 2 || m == 1 {
        return true;
    }
    if prime_power(m).is_some() && k <= m + 1 {
        return true;
    }
    if k <= 6 && m >= 5 && ![6, 10, 14, 18, 22].contains(&m) {
        return true;
    }
    k <= 4 && mols_pair(m).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{gf, mols_prime_power};
    use crate::algebra::gdd::verify_gdd;

    #[test]
    fn tds_from_field_mols_verify() {
        let td = td_from_mols(&mols_prime_power(&gf(5).unwrap(), 4).unwrap());
        assert_eq!((td.k, td.m, td.blocks.len()), (6, 5, 25));
        assert!(verify_gdd(&td.to_gdd()).passed());

        let td = td_from_mols(&mols_prime_power(&gf(3).unwrap(), 1).unwrap());
        assert_eq!((td.k, td.blocks.len()), (3, 9));
        assert!(verify_gdd(&td.to_gdd()).passed());

        let td = td_from_mols(&mols_prime_power(&gf(8).unwrap(), 4).unwrap());
        assert_eq!((td.k, td.blocks.len()), (6, 64));
        assert!(verify_gdd(&td.to_gdd()).passed());
    }

    #[test]
    fn existence_gates() {
        assert!(!td_exists(6, 6));
        assert!(td_exists(6, 7));
        assert!(td_exists(6, 5));
        assert!(!td_exists(6, 4));
        assert!(!td_exists(6, 10));
        assert!(td_exists(6, 12));
        assert!(td_exists(10, 9));
        assert!(!td_exists(11, 9));
    }
}
