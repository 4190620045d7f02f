use crate::design::Design;
use crate::point::{Block, Point};
use crate::types::TypeSpec;

use super::{certify, ingredient, point_index, ConstructionError, IngredientSupplier};

/// One hole of the outer design to overlay with `inner`. The inner hole
/// `open` (if any) goes to the fresh points; the others are laid over
/// consecutive chunks of the outer hole.
struct Overlay<'a> {
    hole: usize,
    inner: &'a Design,
    open: Option<usize>,
}

fn overlay(outer: &Design, fills: &[Overlay], fresh: u32, absorb: Option<usize>) -> Result<Design, ConstructionError> {
    let idx = point_index(outer);
    let total = idx.len() as u32;
    let new_points: Vec<Point> = (total..total + fresh).map(Point::Finite).collect();
    let at = |p: Point| Point::Finite(idx[&p]);

    let mut blocks: Vec<Block> = outer.blocks.iter().map(|b| b.map(at)).collect();
    let mut holes: Vec<Vec<Point>> = Vec::new();
    for (i, h) in outer.holes.holes.iter().enumerate() {
        let mut h: Vec<Point> = h.iter().map(|&p| at(p)).collect();
        h.sort();
        if let Some(f) = fills.iter().find(|f| f.hole == i) {
            let inner_idx = point_index(f.inner);
            let mut map = vec![Point::Finite(0); inner_idx.len()];
            let mut rest = h.as_slice();
            for (j, ih) in f.inner.holes.holes.iter().enumerate() {
                let mut ih = ih.clone();
                ih.sort();
                let target: &[Point] = if Some(j) == f.open {
                    if ih.len() != new_points.len() {
                        return Err(ConstructionError::HoleMismatch(format!(
                            "inner hole of size {} cannot take {} fresh points",
                            ih.len(),
                            fresh
                        )));
                    }
                    &new_points
                } else {
                    if ih.len() > rest.len() {
                        return Err(ConstructionError::HoleMismatch(format!("outer hole {i} is too small for its filling")));
                    }
                    let (chunk, tail) = rest.split_at(ih.len());
                    rest = tail;
                    holes.push(chunk.to_vec());
                    chunk
                };
                for (p, &q) in ih.iter().zip(target) {
                    map[inner_idx[p] as usize] = q;
                }
            }
            if !rest.is_empty() {
                return Err(ConstructionError::HoleMismatch(format!("{} points of outer hole {i} left uncovered", rest.len())));
            }
            blocks.extend(f.inner.blocks.iter().map(|b| b.map(|p| map[inner_idx[&p] as usize])));
        } else if Some(i) == absorb {
            h.extend(&new_points);
            holes.push(h);
        } else {
            holes.push(h);
        }
    }
    if absorb.is_none() && fresh > 0 {
        holes.push(new_points);
    }
    certify(Design::from_holes(holes, blocks))
}

/// Index of the last hole of `d` with `size` points not in `taken`.
fn last_hole(d: &Design, size: u64, taken: &[usize]) -> Option<usize> {
    (0..d.holes.holes.len()).rev().find(|i| !taken.contains(i) && d.holes.holes[*i].len() as u64 == size)
}

/// The hole of `inner` that receives the fresh points: the last one of size
/// `v`, or none when `v = 0`.
fn open_hole(inner: &Design, v: u64) -> Result<Option<usize>, ConstructionError> {
    if v == 0 {
        return Ok(None);
    }
    last_hole(inner, v, &[]).map(Some).ok_or_else(|| ConstructionError::HoleMismatch(format!("inner design has no hole of size {v}")))
}

fn check_rest(outer: &Design, taken: &[usize], size: u64, what: &str) -> Result<Vec<usize>, ConstructionError> {
    let rest: Vec<usize> = (0..outer.holes.holes.len()).filter(|i| !taken.contains(i)).collect();
    if let Some(&i) = rest.iter().find(|&&i| outer.holes.holes[i].len() as u64 != size) {
        return Err(ConstructionError::HoleMismatch(format!(
            "outer type {} has a hole of size {} where {what} needs {size}",
            outer.declared_type,
            outer.holes.holes[i].len()
        )));
    }
    Ok(rest)
}

/// From an HSD of type `(hs)^m w^1` and an HSD(h^s v^1): add `v` points,
/// overlay each `hs`-hole, and obtain an HSD(h^{sm} (w+v)^1).
pub fn fill_holes_a(
    outer: &Design,
    supply: &dyn IngredientSupplier,
    h: u64,
    s: u64,
    v: u64,
    w: u64,
) -> Result<Design, ConstructionError> {
    let keep: Vec<usize> = if w > 0 {
        vec![last_hole(outer, w, &[]).ok_or_else(|| ConstructionError::HoleMismatch(format!("outer has no hole of size {w}")))?]
    } else {
        Vec::new()
    };
    let filled = check_rest(outer, &keep, h * s, "filling (a)")?;
    let inner = ingredient(supply, &TypeSpec::uniform_plus_one(h, s, v))?;
    let open = open_hole(&inner, v)?;
    let fills: Vec<Overlay> = filled.iter().map(|&hole| Overlay { hole, inner: &inner, open }).collect();
    overlay(outer, &fills, v as u32, keep.first().copied())
}

/// From HSDs of types `(hs)^m (ht)^1 w^1`, `h^s v^1` and `h^t v^1`: add `v`
/// points, overlay every hole but the `w`-hole, and obtain an
/// HSD(h^{sm+t} (w+v)^1).
#[allow(clippy::too_many_arguments)]
pub fn fill_holes_b(
    outer: &Design,
    supply: &dyn IngredientSupplier,
    h: u64,
    s: u64,
    t: u64,
    v: u64,
    w: u64,
) -> Result<Design, ConstructionError> {
    let mut taken = Vec::new();
    if w > 0 {
        taken.push(last_hole(outer, w, &[]).ok_or_else(|| ConstructionError::HoleMismatch(format!("outer has no hole of size {w}")))?);
    }
    let t_hole =
        last_hole(outer, h * t, &taken).ok_or_else(|| ConstructionError::HoleMismatch(format!("outer has no hole of size {}", h * t)))?;
    taken.push(t_hole);
    let filled = check_rest(outer, &taken, h * s, "filling (b)")?;
    let inner_s = ingredient(supply, &TypeSpec::uniform_plus_one(h, s, v))?;
    let inner_t = ingredient(supply, &TypeSpec::uniform_plus_one(h, t, v))?;
    let (open_s, open_t) = (open_hole(&inner_s, v)?, open_hole(&inner_t, v)?);
    let mut fills: Vec<Overlay> = filled.iter().map(|&hole| Overlay { hole, inner: &inner_s, open: open_s }).collect();
    fills.push(Overlay { hole: t_hole, inner: &inner_t, open: open_t });
    overlay(outer, &fills, v as u32, (w > 0).then(|| taken[0]))
}

/// Replace one hole of `outer` (the last of its size) by the holes of an
/// HSD on the same number of points.
pub fn fill_hole(outer: &Design, size: u64, inner: &Design) -> Result<Design, ConstructionError> {
    let hole = last_hole(outer, size, &[]).ok_or_else(|| ConstructionError::HoleMismatch(format!("outer has no hole of size {size}")))?;
    if inner.point_count() as u64 != size {
        return Err(ConstructionError::HoleMismatch(format!("inner design has {} points, hole has {size}", inner.point_count())));
    }
    overlay(outer, &[Overlay { hole, inner, open: None }], 0, None)
}

#[cfg(test)]
mod tests {
    use super::super::{multiply, weight_inflate, CatalogSupplier};
    use super::*;
    use crate::algebra::td::td_from_mols;
    use crate::algebra::{gf, mols_prime_power};
    use crate::catalog::catalog_get;

    fn entry(id: &str) -> Design {
        catalog_get(id).unwrap().design().unwrap().unwrap()
    }

    #[test]
    fn c1_filled_with_three_to_the_four() {
        let d = fill_holes_a(&entry("C1/9^4 1^1"), &CatalogSupplier, 3, 3, 3, 1).unwrap();
        assert!(d.declared_type.same_multiset(&"3^12 4^1".parse().unwrap()));
        // outer count plus four inner copies
        assert_eq!(d.block_count(), 261 + 4 * 27);
    }

    #[test]
    fn c2_filled() {
        let d = fill_holes_a(&entry("C2/9^5 10^1"), &CatalogSupplier, 3, 3, 3, 10).unwrap();
        assert!(d.declared_type.same_multiset(&"3^15 13^1".parse().unwrap()));
    }

    #[test]
    fn refinement_without_new_points() {
        let outer = multiply(&entry("derived/3^4"), 4).unwrap();
        let d = fill_holes_a(&outer, &CatalogSupplier, 3, 4, 0, 0).unwrap();
        assert!(d.declared_type.same_multiset(&"3^16".parse().unwrap()));
    }

    #[test]
    fn td_weighting_then_filling_b() {
        let g = td_from_mols(&mols_prime_power(&gf(5).unwrap(), 4).unwrap()).to_gdd();
        let mut w = vec![0u32; 30];
        w[..21].fill(3);
        w[25] = 4;
        w[26] = 4;
        let outer = weight_inflate(&g, &w, &CatalogSupplier).unwrap();
        let d = fill_holes_b(&outer, &CatalogSupplier, 3, 5, 1, 0, 8).unwrap();
        assert!(d.declared_type.same_multiset(&"3^21 8^1".parse().unwrap()));
    }

    #[test]
    fn filling_the_long_hole() {
        let outer = fill_holes_a(&entry("C2/9^5 10^1"), &CatalogSupplier, 3, 3, 3, 10).unwrap();
        let d = fill_hole(&outer, 13, &entry("derived/3^4 1^1")).unwrap();
        assert!(d.declared_type.same_multiset(&"3^19 1^1".parse().unwrap()));
    }

    #[test]
    fn size_mismatch_is_reported() {
        let e = fill_holes_a(&entry("C1/9^4 1^1"), &CatalogSupplier, 3, 4, 0, 1).unwrap_err();
        assert!(matches!(e, ConstructionError::HoleMismatch(_)), "{e}");
    }
}
