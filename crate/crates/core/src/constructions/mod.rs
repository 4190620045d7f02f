//! Recursive constructions: weighting a GDD, multiplying by a MOLS pair and
//! filling holes. Every output is verified before it is returned.
//!
//! Outputs are relabeled onto `Finite(0..v)`.

mod fill;

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::field::mols_pair;
use crate::algebra::gdd::{verify_gdd, Gdd};
use crate::catalog::Catalog;
use crate::design::{verify_design, Design};
use crate::point::{Block, Point};
use crate::types::TypeSpec;

pub use fill::{fill_hole, fill_holes_a, fill_holes_b};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("no HSD of type {0} is available")]
    MissingIngredient(TypeSpec),
    #[error("multiplier {0} is not supported (m must avoid 2 and 6)")]
    UnsupportedMultiplier(u32),
    #[error("no pair of orthogonal Latin squares of order {0} is available")]
    NoMols(u32),
    #[error("hole structure mismatch: {0}")]
    HoleMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("output failed verification: {0}")]
    NotCertified(String),
}

/// Where constructions get their ingredient HSDs from.
pub trait IngredientSupplier: Sync {
    /// Some HSD of type `t` (as a multiset, zero sizes already dropped).
    fn hsd(&self, t: &TypeSpec) -> Result<Design, ConstructionError>;
}

/// Ingredients straight from the embedded catalog.
pub struct CatalogSupplier;

impl IngredientSupplier for CatalogSupplier {
    fn hsd(&self, t: &TypeSpec) -> Result<Design, ConstructionError> {
        Catalog::embedded()
            .find_hsd(t)
            .and_then(|e| e.design())
            .and_then(Result::ok)
            .ok_or_else(|| ConstructionError::MissingIngredient(t.canonical()))
    }
}

/// A fixed set of designs keyed by type.
#[derive(Debug, Clone, Default)]
pub struct MapSupplier(pub Vec<Design>);

impl IngredientSupplier for MapSupplier {
    fn hsd(&self, t: &TypeSpec) -> Result<Design, ConstructionError> {
        self.0
            .iter()
            .find(|d| d.declared_type.same_multiset(t))
            .cloned()
            .ok_or_else(|| ConstructionError::MissingIngredient(t.canonical()))
    }
}

/// Resolve through `a`, falling back to `b`.
pub struct Chain<'a>(pub &'a dyn IngredientSupplier, pub &'a dyn IngredientSupplier);

impl IngredientSupplier for Chain<'_> {
    fn hsd(&self, t: &TypeSpec) -> Result<Design, ConstructionError> {
        self.0.hsd(t).or_else(|_| self.1.hsd(t))
    }
}

/// Fetch an ingredient, answering one-hole types with the empty design.
pub(crate) fn ingredient(supply: &dyn IngredientSupplier, t: &TypeSpec) -> Result<Design, ConstructionError> {
    if t.hole_count() <= 1 {
        return Ok(Design::from_holes(vec![(0..t.total_points() as u32).map(Point::Finite).collect()], Vec::new()));
    }
    let d = supply.hsd(t)?;
    if !d.holes.type_spec().same_multiset(t) {
        return Err(ConstructionError::HoleMismatch(format!("supplier returned {} for {t}", d.holes.type_spec())));
    }
    Ok(d)
}

pub(crate) fn certify(d: Design) -> Result<Design, ConstructionError> {
    let rep = verify_design(&d);
    if rep.passed() {
        Ok(d)
    } else {
        Err(ConstructionError::NotCertified(rep.to_string()))
    }
}

/// Inflate a λ = 1 GDD: point `x` becomes `w[x]` points and each block is
/// replaced by a copy of an HSD whose holes are the fibres of its points.
pub fn weight_inflate(g: &Gdd, w: &[u32], supply: &dyn IngredientSupplier) -> Result<Design, ConstructionError> {
    if g.lambda != 1 {
        return Err(ConstructionError::InvalidInput(format!("GDD has λ = {}", g.lambda)));
    }
    let rep = verify_gdd(g);
    if !rep.passed() {
        return Err(ConstructionError::InvalidInput(format!("GDD fails verification ({} violations)", rep.violations.len())));
    }
    if w.len() != g.point_count() {
        return Err(ConstructionError::InvalidInput(format!("{} weights for {} points", w.len(), g.point_count())));
    }
    let mut base = vec![0u32; w.len()];
    let mut next = 0;
    for (x, &wx) in w.iter().enumerate() {
        base[x] = next;
        next += wx;
    }

    let mut cache: HashMap<TypeSpec, Design> = HashMap::new();
    for b in &g.blocks {
        let t = TypeSpec::from_sizes(b.iter().map(|&x| w[x as usize] as u64));
        if !cache.contains_key(&t) {
            let d = ingredient(supply, &t)?;
            cache.insert(t, d);
        }
    }

    let pieces: Vec<Vec<Block>> = g
        .blocks
        .par_iter()
        .map(|b| {
            let t = TypeSpec::from_sizes(b.iter().map(|&x| w[x as usize] as u64));
            let ing = &cache[&t];
            // pair ingredient holes with block points by size
            let mut pts: Vec<u32> = b.iter().copied().filter(|&x| w[x as usize] > 0).collect();
            pts.sort_by_key(|&x| (w[x as usize], x));
            let mut holes: Vec<&Vec<Point>> = ing.holes.holes.iter().collect();
            holes.sort_by_key(|h| h.len());
            let mut map: HashMap<Point, Point> = HashMap::new();
            for (h, &x) in holes.iter().zip(&pts) {
                let mut h = (*h).clone();
                h.sort();
                for (i, p) in h.into_iter().enumerate() {
                    map.insert(p, Point::Finite(base[x as usize] + i as u32));
                }
            }
            ing.blocks.iter().map(|blk| blk.map(|p| map[&p])).collect()
        })
        .collect();

    let holes: Vec<Vec<Point>> = g
        .groups
        .iter()
        .map(|grp| grp.iter().flat_map(|&x| (base[x as usize]..base[x as usize] + w[x as usize]).map(Point::Finite)).collect())
        .filter(|h: &Vec<Point>| !h.is_empty())
        .collect();
    certify(Design::from_holes(holes, pieces.concat()))
}

/// Point `p` of `d` as an index into its sorted point list.
pub(crate) fn point_index(d: &Design) -> HashMap<Point, u32> {
    let mut pts = d.points.clone();
    pts.sort();
    pts.into_iter().enumerate().map(|(i, p)| (p, i as u32)).collect()
}

/// Scale every hole by `m`: point `p` becomes `(p, 0..m)` and block
/// `[a, b, c, d]` becomes the `m²` blocks `[(a,i), (b,j), (c,A(i,j)),
/// (d,B(i,j))]` for an orthogonal pair `A`, `B`.
pub fn multiply(d: &Design, m: u32) -> Result<Design, ConstructionError> {
    if m == 0 || m == 2 || m == 6 {
        return Err(ConstructionError::UnsupportedMultiplier(m));
    }
    let pair = mols_pair(m).map_err(|_| ConstructionError::NoMols(m))?;
    let (a, b) = (&pair.squares()[0], &pair.squares()[1]);
    let idx = point_index(d);
    let at = |p: Point, i: u32| Point::Finite(idx[&p] * m + i);
    let blocks: Vec<Block> = d
        .blocks
        .par_iter()
        .flat_map_iter(|blk| {
            let [p, q, r, s] = blk.0;
            (0..m).flat_map(move |i| {
                (0..m).map(move |j| {
                    let (x, y) = (i as usize, j as usize);
                    Block([at(p, i), at(q, j), at(r, a.get(x, y)), at(s, b.get(x, y))])
                })
            })
        })
        .collect();
    let holes = d.holes.holes.iter().map(|h| h.iter().flat_map(|&p| (0..m).map(move |i| at(p, i))).collect()).collect();
    certify(Design::from_holes(holes, blocks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::td::td_from_mols;
    use crate::algebra::{gf, mols_prime_power};
    use crate::catalog::catalog_get;

    fn ex21() -> Design {
        catalog_get("Ex2.1").unwrap().design().unwrap().unwrap()
    }

    #[test]
    fn multiply_example_by_three() {
        let d = multiply(&ex21(), 3).unwrap();
        assert_eq!(d.block_count(), 945);
        assert_eq!(d.declared_type, "9^7 3^1".parse().unwrap());
    }

    #[test]
    fn multiply_by_one_is_a_relabeling() {
        let d = ex21();
        let e = multiply(&d, 1).unwrap();
        let idx = point_index(&d);
        assert_eq!(e.canonical_blocks(), d.relabeled(|p| Point::Finite(idx[&p])).canonical_blocks());
    }

    #[test]
    fn multiply_rejects_two_and_six() {
        assert_eq!(multiply(&ex21(), 2), Err(ConstructionError::UnsupportedMultiplier(2)));
        assert_eq!(multiply(&ex21(), 6), Err(ConstructionError::UnsupportedMultiplier(6)));
        assert_eq!(multiply(&ex21(), 10), Err(ConstructionError::NoMols(10)));
    }

    #[test]
    fn weight_one_on_a_gdd() {
        let g = Catalog::embedded().get("gdd/3^8 6^1").unwrap().gdd().unwrap().clone();
        let d = weight_inflate(&g, &vec![1; g.point_count()], &CatalogSupplier).unwrap();
        assert_eq!(d.declared_type, "3^8 6^1".parse().unwrap());
        assert_eq!(d.block_count(), 3 * g.blocks.len());
    }

    #[test]
    fn zero_weights_give_the_empty_design() {
        let g = td_from_mols(&mols_prime_power(&gf(5).unwrap(), 4).unwrap()).to_gdd();
        let d = weight_inflate(&g, &vec![0; 30], &CatalogSupplier).unwrap();
        assert_eq!((d.point_count(), d.block_count()), (0, 0));
    }

    #[test]
    fn td_six_five_weighting() {
        // groups 0..3 weight 3; one point of group 4 weight 3; group 5 sums to 8
        let g = td_from_mols(&mols_prime_power(&gf(5).unwrap(), 4).unwrap()).to_gdd();
        let mut w = vec![0u32; 30];
        w[..20].fill(3);
        w[20] = 3;
        w[25] = 4;
        w[26] = 4;
        let d = weight_inflate(&g, &w, &CatalogSupplier).unwrap();
        assert!(d.declared_type.same_multiset(&"15^4 3^1 8^1".parse().unwrap()));
    }

    #[test]
    fn missing_ingredient_names_the_type() {
        let g = td_from_mols(&mols_prime_power(&gf(5).unwrap(), 4).unwrap()).to_gdd();
        let mut w = vec![1u32; 30];
        w[29] = 7;
        let e = weight_inflate(&g, &w, &CatalogSupplier).unwrap_err();
        assert!(matches!(e, ConstructionError::MissingIngredient(_)), "{e}");
    }
}
