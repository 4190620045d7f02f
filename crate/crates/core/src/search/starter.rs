//! Searches for starter blocks over Z_g with step `k`.
//!
//! A pair orbit under `+k` is covered entirely or not at all by a block
//! orbit, so the problem is an exact cover whose items are (color,
//! pair-orbit) and whose options are block orbits that cover no pair twice.

use std::collections::{HashMap, HashSet};

use crate::development::{orbit_with, StarterSet};
use crate::point::{Block, Point};
use crate::types::TypeSpec;

use super::{fail_first_item, options_covering, solve_restarts, solve_split, CoverProblem, SearchBudget, SearchReport, SearchResult};

struct Cyclic {
    k: u32,
    g: u32,
    u: u32,
    /// hole (or group) of each finite point; infinite points share `inf_hole`
    hole_of: Vec<u32>,
    inf_hole: u32,
    /// finite pair (x < y) → pair-orbit id
    finite_id: Vec<usize>,
    /// (label − 1) · k + residue → pair-orbit id
    inf_id: Vec<usize>,
    pair_orbits: usize,
}

impl Cyclic {
    /// The partition `hole_of` must be invariant under `+k`.
    fn new(hole_of: Vec<u32>, u: u32, inf_hole: u32, k: u32) -> Option<Self> {
        let g = hole_of.len() as u32;
        if k == 0 || g == 0 || g % k != 0 {
            return None;
        }
        // the partition, not the labels, must be invariant; the infinite
        // group stays fixed
        let shift = |x: u32| hole_of[((x + k) % g) as usize];
        for x in 0..g {
            if (hole_of[x as usize] == inf_hole) != (shift(x) == inf_hole) {
                return None;
            }
            for y in x + 1..g {
                if (hole_of[x as usize] == hole_of[y as usize]) != (shift(x) == shift(y)) {
                    return None;
                }
            }
        }
        let gs = g as usize;
        let mut finite_id = vec![usize::MAX; gs * gs];
        let mut next = 0;
        for x in 0..g {
            for y in x + 1..g {
                if hole_of[x as usize] == hole_of[y as usize] || finite_id[(x * g + y) as usize] != usize::MAX {
                    continue;
                }
                let mut s = 0;
                while s < g {
                    let (a, b) = ((x + s) % g, (y + s) % g);
                    let (a, b) = (a.min(b), a.max(b));
                    finite_id[(a * g + b) as usize] = next;
                    s += k;
                }
                next += 1;
            }
        }
        // infinite pairs: x_l with residue class f mod k, unless f shares
        // the infinite group
        let mut inf_id = vec![usize::MAX; (u * k) as usize];
        for l in 0..u {
            for r in 0..k {
                if hole_of[r as usize] != inf_hole {
                    inf_id[(l * k + r) as usize] = next;
                    next += 1;
                }
            }
        }
        Some(Cyclic { k, g, u, hole_of, inf_hole, finite_id, inf_id, pair_orbits: next })
    }

    fn uniform(h: u32, n: u32, u: u32, k: u32) -> Option<Self> {
        Cyclic::new((0..h * n).map(|v| v % n).collect(), u, n, k)
    }

    fn hole(&self, p: Point) -> u32 {
        match p {
            Point::Finite(v) => self.hole_of[v as usize],
            Point::Infinite(_) => self.inf_hole,
        }
    }

    fn pair_orbit(&self, p: Point, q: Point) -> usize {
        match (p, q) {
            (Point::Finite(x), Point::Finite(y)) => {
                let (a, b) = (x.min(y), x.max(y));
                self.finite_id[(a * self.g + b) as usize]
            }
            (Point::Finite(f), Point::Infinite(l)) | (Point::Infinite(l), Point::Finite(f)) => {
                self.inf_id[((l - 1) * self.k + f % self.k) as usize]
            }
            _ => unreachable!("two infinite points never share a block"),
        }
    }

    fn items(&self) -> usize {
        3 * self.pair_orbits
    }

    fn points(&self) -> Vec<Point> {
        (0..self.g).map(Point::Finite).chain((1..=self.u).map(Point::Infinite)).collect()
    }

    fn orbit(&self, b: Block) -> Vec<Block> {
        orbit_with(b, self.k, self.g).blocks
    }

    /// Items of a block orbit, or `None` if it covers some pair twice.
    fn orbit_items(&self, orbit: &[Block]) -> Option<Vec<usize>> {
        let mut pairs = HashSet::new();
        let mut items = Vec::new();
        for b in orbit {
            for (i, j, color) in Block::PAIR_POSITIONS {
                let (p, q) = (b.0[i].min(b.0[j]), b.0[i].max(b.0[j]));
                let key = (color.index(), p, q);
                if !pairs.insert(key) {
                    return None;
                }
                let it = self.pair_orbit(p, q) + key.0 * self.pair_orbits;
                if !items.contains(&it) {
                    items.push(it);
                }
            }
        }
        items.sort();
        Some(items)
    }

    /// One option per valid block orbit, keyed by its least block.
    fn options(&self) -> (Vec<Block>, Vec<Vec<usize>>) {
        let pts = self.points();
        let mut seen: HashMap<Block, ()> = HashMap::new();
        let mut reps = Vec::new();
        let mut opts = Vec::new();
        let mut consider = |b: Block| {
            let orbit = self.orbit(b);
            let key = *orbit.iter().min().expect("non-empty orbit");
            if seen.contains_key(&key) {
                return;
            }
            seen.insert(key, ());
            if let Some(items) = self.orbit_items(&orbit) {
                reps.push(key);
                opts.push(items);
            }
        };
        // every orbit has a member with a finite point in [0, k); the
        // block symmetries move that point to the front
        for a in 0..self.k {
            let pa = Point::Finite(a);
            for &pb in &pts {
                if self.hole(pb) == self.hole(pa) {
                    continue;
                }
                for &pc in &pts {
                    if [pa, pb].iter().any(|&x| self.hole(x) == self.hole(pc)) {
                        continue;
                    }
                    for &pd in &pts {
                        if [pa, pb, pc].iter().any(|&x| self.hole(x) == self.hole(pd)) {
                            continue;
                        }
                        consider(Block::new(pa, pb, pc, pd));
                    }
                }
            }
        }
        (reps, opts)
    }

    fn solve(&self, budget: &SearchBudget, label: String) -> SearchReport<Vec<Block>> {
        let (reps, options) = self.options();
        let items = self.items();
        let mut rep = match budget.seed {
            Some(seed) => solve_restarts(items, &options, seed, budget),
            None => {
                let root_item = fail_first_item(items, &options);
                let root_options = options_covering(&options, root_item);
                let describe_reps = reps.clone();
                let problem = CoverProblem {
                    items,
                    options,
                    root_item,
                    root_options,
                    describe: Box::new(move |o| describe_reps[o].to_string()),
                };
                solve_split(&problem, budget)
            }
        };
        rep.log.insert(0, label);
        let result = std::mem::replace(&mut rep.result, SearchResult::Timeout);
        let mut result = result.map(|sel| {
            let mut v: Vec<Block> = sel.into_iter().map(|o| reps[o]).collect();
            v.sort();
            v
        });
        if items == 0 {
            result = SearchResult::Found(Vec::new());
        }
        SearchReport { result, nodes: rep.nodes, elapsed: rep.elapsed, log: rep.log }
    }
}

/// Starter blocks for HSD(h^n u^1) developed with `+step (mod hn)`.
pub fn search_starters(t: &TypeSpec, step: u32, budget: &SearchBudget) -> SearchReport<StarterSet> {
    let (h, n, u) = match t.parts() {
        [(h, n)] => (*h as u32, *n as u32, 0),
        [(h, n), (u, 1)] => (*h as u32, *n as u32, *u as u32),
        _ => {
            return SearchReport {
                result: SearchResult::Exhausted,
                nodes: 0,
                elapsed: Default::default(),
                log: vec![format!("# type {t} is not of the form h^n u^1")],
            }
        }
    };
    let Some(c) = Cyclic::uniform(h, n, u, step) else {
        return SearchReport {
            result: SearchResult::Exhausted,
            nodes: 0,
            elapsed: Default::default(),
            log: vec![format!("# step {step} does not divide {}", h * n)],
        };
    };
    let rep = c.solve(budget, format!("# starter search for HSD({t}) (+{step} mod {})", c.g));
    let full = (c.g / step) as usize;
    SearchReport {
        result: rep.result.map(|starters| {
            let mut s = StarterSet::new(h, n, step, u, starters);
            s.marked = s
                .starters
                .iter()
                .enumerate()
                .filter(|(_, &b)| orbit_with(b, step, c.g).length < full)
                .map(|(i, _)| i)
                .collect();
            s
        }),
        nodes: rep.nodes,
        elapsed: rep.elapsed,
        log: rep.log,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::verify_design;
    use crate::development::develop;

    #[test]
    fn finds_example_types() {
        for (t, step) in [("3^7 1^1", 1), ("3^8 2^1", 2)] {
            let r = search_starters(&t.parse().unwrap(), step, &SearchBudget::seconds(60));
            let s = r.result.found().unwrap_or_else(|| panic!("{t}: {}", r));
            let d = develop(s).unwrap();
            assert!(verify_design(&d).passed(), "{t}");
        }
    }

    #[test]
    fn three_cubed_plus_one_has_no_starters() {
        let r = search_starters(&"3^3 1^1".parse().unwrap(), 1, &SearchBudget::seconds(60));
        assert_eq!(r.result, SearchResult::Exhausted);
    }
}
