//! Exhaustive search for small designs of an arbitrary type.
//!
//! Items are `(color, cross-hole pair)`; options are all colored blocks on
//! four points from four distinct holes (six colorings per 4-set).
//!
//! Symmetry breaking: the design must contain one block with color-1 pair
//! `{0, q}`, where `q` is the first point of the second hole. Write it
//! `[0, q, c, d]`. Permuting points inside holes and permuting equal-size
//! holes away from those of `0` and `q` maps any solution to one where `c`
//! is the least point of the first free hole of its size and `d` the least
//! point of the first remaining free hole of its size. Only those blocks
//! are tried at the root, so exhausting them is a nonexistence proof.

use crate::design::Design;
use crate::point::{Block, Point};
use crate::types::TypeSpec;

use super::{shuffle_options, solve_split, CoverProblem, SearchBudget, SearchReport};

/// Hole layout: holes in written order, consecutive finite points.
fn layout(t: &TypeSpec) -> Vec<Vec<u32>> {
    let mut holes = Vec::new();
    let mut next = 0u32;
    for &(size, count) in t.parts() {
        for _ in 0..count {
            holes.push((next..next + size as u32).collect());
            next += size as u32;
        }
    }
    holes
}

pub fn search_direct(t: &TypeSpec, budget: &SearchBudget) -> SearchReport<Design> {
    let holes = layout(t);
    let p = t.total_points() as usize;
    let mut hole_of = vec![0usize; p];
    for (h, pts) in holes.iter().enumerate() {
        for &x in pts {
            hole_of[x as usize] = h;
        }
    }
    let wrap = |blocks: Vec<Block>| {
        let hs = holes.iter().map(|h| h.iter().map(|&x| Point::Finite(x)).collect()).collect();
        let mut d = Design::from_holes(hs, blocks);
        d.declared_type = t.clone();
        d.canonicalize();
        d
    };
    if holes.len() < 4 {
        // no block fits; the design exists iff there are no cross pairs
        let result = if holes.len() <= 1 { super::SearchResult::Found(wrap(Vec::new())) } else { super::SearchResult::Exhausted };
        return SearchReport { result, nodes: 0, elapsed: Default::default(), log: vec!["# fewer than four holes".into()] };
    }

    let pair_index = |a: usize, b: usize| -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        a * p + b
    };
    let mut pair_item = vec![usize::MAX; p * p];
    let mut n_pairs = 0;
    for a in 0..p {
        for b in a + 1..p {
            if hole_of[a] != hole_of[b] {
                pair_item[a * p + b] = n_pairs;
                n_pairs += 1;
            }
        }
    }
    let item = |color: usize, a: usize, b: usize| color * n_pairs + pair_item[pair_index(a, b)];

    let mut blocks: Vec<Block> = Vec::new();
    let mut options: Vec<Vec<usize>> = Vec::new();
    for i in 0..p {
        for j in i + 1..p {
            if hole_of[j] == hole_of[i] {
                continue;
            }
            for k in j + 1..p {
                if hole_of[k] == hole_of[i] || hole_of[k] == hole_of[j] {
                    continue;
                }
                for l in k + 1..p {
                    if [i, j, k].iter().any(|&x| hole_of[x] == hole_of[l]) {
                        continue;
                    }
                    for [b, c, d] in [[j, k, l], [j, l, k], [k, j, l], [k, l, j], [l, j, k], [l, k, j]] {
                        let blk = [i, b, c, d];
                        let opt: Vec<usize> = Block::PAIR_POSITIONS
                            .iter()
                            .map(|&(x, y, col)| item(col.index(), blk[x], blk[y]))
                            .collect();
                        blocks.push(Block(blk.map(|v| Point::Finite(v as u32))).canonical());
                        options.push(opt);
                    }
                }
            }
        }
    }

    // root: color-1 pair {0, q}
    let q = holes[1][0] as usize;
    let root_item = item(0, 0, q);
    let free: Vec<usize> = (0..holes.len()).filter(|&h| h != hole_of[0] && h != hole_of[q]).collect();
    let first_free_of_size = |size: usize, skip: Option<usize>| {
        free.iter().copied().find(|&h| holes[h].len() == size && Some(h) != skip)
    };
    let allowed = |blk: &Block| -> bool {
        let [a, b, c, d] = blk.0.map(|x| match x {
            Point::Finite(v) => v as usize,
            Point::Infinite(_) => usize::MAX,
        });
        if a != 0 || b != q {
            return false;
        }
        let (hc, hd) = (hole_of[c], hole_of[d]);
        c == holes[hc][0] as usize
            && d == holes[hd][0] as usize
            && first_free_of_size(holes[hc].len(), None) == Some(hc)
            && first_free_of_size(holes[hd].len(), Some(hc)) == Some(hd)
    };

    let perm = shuffle_options(&mut options, budget.seed);
    let blocks: Vec<Block> = perm.iter().map(|&i| blocks[i]).collect();
    let root_options: Vec<usize> =
        (0..options.len()).filter(|&o| options[o].contains(&root_item) && allowed(&blocks[o])).collect();

    let describe_blocks = blocks.clone();
    let problem = CoverProblem {
        items: 3 * n_pairs,
        options,
        root_item,
        root_options,
        describe: Box::new(move |o| describe_blocks[o].to_string()),
    };
    let mut rep = solve_split(&problem, budget);
    rep.log.insert(0, format!("# direct search for HSD({t}): {} points, {} holes", p, holes.len()));
    let result = std::mem::replace(&mut rep.result, super::SearchResult::Timeout);
    SearchReport {
        result: result.map(|sel| wrap(sel.into_iter().map(|o| blocks[o]).collect())),
        nodes: rep.nodes,
        elapsed: rep.elapsed,
        log: rep.log,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::verify_design;
    use crate::search::SearchResult;

    #[test]
    fn finds_order_four() {
        let r = search_direct(&"1^4".parse().unwrap(), &SearchBudget::default());
        let d = r.result.found().expect("HSD(1^4)");
        assert_eq!(d.block_count(), 3);
        assert!(verify_design(d).passed());
    }

    #[test]
    fn order_five_is_impossible() {
        let r = search_direct(&"1^5".parse().unwrap(), &SearchBudget::default());
        assert_eq!(r.result, SearchResult::Exhausted);
    }

    #[test]
    fn trivial_types() {
        let r = search_direct(&"5^1".parse().unwrap(), &SearchBudget::default());
        assert_eq!(r.result.found().unwrap().block_count(), 0);
        let r = search_direct(&"1^3".parse().unwrap(), &SearchBudget::default());
        assert_eq!(r.result, SearchResult::Exhausted);
    }

    #[test]
    fn seeds_do_not_change_nonexistence() {
        for seed in 0..4 {
            let r = search_direct(&"1^5".parse().unwrap(), &SearchBudget::default().with_seed(seed));
            assert_eq!(r.result, SearchResult::Exhausted);
        }
    }
}
