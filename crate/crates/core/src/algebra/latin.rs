//! Latin squares and sets of mutually orthogonal Latin squares.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatinSquare {
    order: usize,
    cells: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatinError {
    #[error("expected {expected} cells, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("row {0} is not a permutation")]
    Row(usize),
    #[error("column {0} is not a permutation")]
    Column(usize),
    #[error("squares {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("squares have different orders")]
    OrderMismatch,
    #[error("MOLS sets have {0} and {1} squares")]
    CountMismatch(usize, usize),
}

impl LatinSquare {
    pub fn new(order: usize, cells: Vec<u32>) -> Result<Self, LatinError> {
        if cells.len() != order * order {
            return Err(LatinError::Shape { expected: order * order, got: cells.len() });
        }
        let sq = LatinSquare { order, cells };
        sq.check()?;
        Ok(sq)
    }

    pub fn from_fn<F: Fn(usize, usize) -> u32>(order: usize, f: F) -> Result<Self, LatinError> {
        let cells = (0..order * order).map(|i| f(i / order, i % order)).collect();
        LatinSquare::new(order, cells)
    }

    fn check(&self) -> Result<(), LatinError> {
        let m = self.order;
        for r in 0..m {
            let mut seen = vec![false; m];
            for c in 0..m {
                let v = self.cells[r * m + c] as usize;
                if v >= m || std::mem::replace(&mut seen[v], true) {
                    return Err(LatinError::Row(r));
                }
            }
        }
        for c in 0..m {
            let mut seen = vec![false; m];
            for r in 0..m {
                let v = self.cells[r * m + c] as usize;
                if std::mem::replace(&mut seen[v], true) {
                    return Err(LatinError::Column(c));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.cells[r * self.order + c]
    }

    pub fn transpose(&self) -> LatinSquare {
        let m = self.order;
        let cells = (0..m * m).map(|i| self.cells[(i % m) * m + i / m]).collect();
        LatinSquare { order: m, cells }
    }

    pub fn is_orthogonal_to(&self, other: &LatinSquare) -> bool {
        if self.order != other.order {
            return false;
        }
        let m = self.order;
        let mut seen = vec![false; m * m];
        for i in 0..m * m {
            let k = self.cells[i] as usize * m + other.cells[i] as usize;
            if std::mem::replace(&mut seen[k], true) {
                return false;
            }
        }
        true
    }
}

/// Row-major integer grid.
impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.order.saturating_sub(1).to_string().len();
        for r in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|c| format!("{:>w$}", self.get(r, c))).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Mutually orthogonal Latin squares of one order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MolsSet {
    order: usize,
    squares: Vec<LatinSquare>,
}

impl MolsSet {
    /// Checks every pair for orthogonality.
    pub fn new(order: usize, squares: Vec<LatinSquare>) -> Result<Self, LatinError> {
        if squares.iter().any(|s| s.order != order) {
            return Err(LatinError::OrderMismatch);
        }
        for i in 0..squares.len() {
            for j in i + 1..squares.len() {
                if !squares[i].is_orthogonal_to(&squares[j]) {
                    return Err(LatinError::NotOrthogonal(i, j));
                }
            }
        }
        Ok(MolsSet { order, squares })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn squares(&self) -> &[LatinSquare] {
        &self.squares
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    /// `count` copies of the order-1 square; the identity for products.
    pub fn trivial(count: usize) -> MolsSet {
        let one = LatinSquare { order: 1, cells: vec![0] };
        MolsSet { order: 1, squares: vec![one; count] }
    }

    pub fn truncated(&self, count: usize) -> MolsSet {
        MolsSet { order: self.order, squares: self.squares[..count.min(self.squares.len())].to_vec() }
    }
}

/// Direct product: `(A⊗B)((r1,r2),(c1,c2)) = (A(r1,c1), B(r2,c2))`, with the
/// pair `(i, j)` encoded as `i·m_B + j`.
pub fn mols_kronecker(a: &MolsSet, b: &MolsSet) -> Result<MolsSet, LatinError> {
    if a.len() != b.len() {
        return Err(LatinError::CountMismatch(a.len(), b.len()));
    }
    let (ma, mb) = (a.order, b.order);
    let m = ma * mb;
    let squares = a
        .squares
        .iter()
        .zip(&b.squares)
        .map(|(sa, sb)| {
            LatinSquare::from_fn(m, |r, c| {
                sa.get(r / mb, c / mb) * mb as u32 + sb.get(r % mb, c % mb)
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    MolsSet::new(m, squares)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_latin() {
        assert_eq!(LatinSquare::new(2, vec![0, 1, 0, 1]), Err(LatinError::Column(0)));
        assert_eq!(LatinSquare::new(2, vec![0, 0, 1, 1]), Err(LatinError::Row(0)));
        assert!(LatinSquare::new(2, vec![0, 1, 1]).is_err());
    }

    #[test]
    fn cyclic_square_is_not_self_orthogonal_to_its_transpose() {
        let l = LatinSquare::from_fn(3, |r, c| ((r + c) % 3) as u32).unwrap();
        assert!(!l.is_orthogonal_to(&l.transpose()));
        let l2 = LatinSquare::from_fn(3, |r, c| ((2 * r + c) % 3) as u32).unwrap();
        assert!(l.is_orthogonal_to(&l2));
    }

    #[test]
    fn trivial_product_is_identity() {
        let a = LatinSquare::from_fn(3, |r, c| ((r + c) % 3) as u32).unwrap();
        let b = LatinSquare::from_fn(3, |r, c| ((2 * r + c) % 3) as u32).unwrap();
        let pair = MolsSet::new(3, vec![a, b]).unwrap();
        let prod = mols_kronecker(&pair, &MolsSet::trivial(2)).unwrap();
        assert_eq!(prod, pair);
    }
}
