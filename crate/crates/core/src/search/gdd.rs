//! Searches for 4-GDDs invariant under a cyclic permutation group.
//!
//! The group is generated by one permutation `σ` of `0..v` that permutes the
//! groups among themselves. Pair orbits under `⟨σ⟩` are the items and block
//! orbits that repeat no pair are the options, exactly as for starters.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::algebra::gdd::Gdd;

use super::{fail_first_item, options_covering, solve_restarts, solve_split, CoverProblem, SearchBudget, SearchReport, SearchResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GddModel {
    pub groups: Vec<Vec<u32>>,
    /// `generator[x]` is the image of point `x`.
    pub generator: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("generator is not a permutation of 0..{0}")]
    NotPermutation(usize),
    #[error("groups do not partition the points")]
    NotPartition,
    #[error("generator does not permute the groups")]
    NotInvariant,
}

impl GddModel {
    pub fn new(groups: Vec<Vec<u32>>, generator: Vec<u32>) -> Result<Self, ModelError> {
        let v = generator.len();
        let mut seen = vec![false; v];
        for &y in &generator {
            if y as usize >= v || std::mem::replace(&mut seen[y as usize], true) {
                return Err(ModelError::NotPermutation(v));
            }
        }
        let mut group_of = vec![usize::MAX; v];
        for (i, g) in groups.iter().enumerate() {
            for &x in g {
                if x as usize >= v || group_of[x as usize] != usize::MAX {
                    return Err(ModelError::NotPartition);
                }
                group_of[x as usize] = i;
            }
        }
        if group_of.contains(&usize::MAX) {
            return Err(ModelError::NotPartition);
        }
        for g in &groups {
            let image = group_of[generator[g[0] as usize] as usize];
            if g.iter().any(|&x| group_of[generator[x as usize] as usize] != image) {
                return Err(ModelError::NotInvariant);
            }
        }
        Ok(GddModel { groups, generator })
    }

    /// `Z_{hn}` with groups `{i, i+n, …}` and step `+step`, plus `u` fixed
    /// points forming one more group.
    pub fn uniform(h: u32, n: u32, u: u32, step: u32) -> Result<Self, ModelError> {
        let g = h * n;
        let mut groups: Vec<Vec<u32>> = (0..n).map(|i| (i..g).step_by(n as usize).collect()).collect();
        if u > 0 {
            groups.push((g..g + u).collect());
        }
        let gen = (0..g).map(|x| (x + step) % g).chain(g..g + u).collect();
        GddModel::new(groups, gen)
    }

    /// `Z_g` whose subgroup of order `s` plus `u − s` fixed points is the
    /// long group; the other points form triples `{x, x + g/3, x + 2g/3}`.
    pub fn subgroup(g: u32, s: u32, u: u32, step: u32) -> Result<Self, ModelError> {
        // g/3 must lie in the subgroup so the triples avoid it
        if g % 3 != 0 || s % 3 != 0 || g % s != 0 || u < s {
            return Err(ModelError::NotPartition);
        }
        let (third, index) = (g / 3, g / s);
        let mut long: Vec<u32> = (0..g).filter(|x| x % index == 0).collect();
        long.extend(g..g + u - s);
        let mut groups = vec![long];
        for x in 0..third {
            if x % index != 0 {
                groups.push(vec![x, x + third, x + 2 * third]);
            }
        }
        let gen = (0..g).map(|x| (x + step) % g).chain(g..g + u - s).collect();
        GddModel::new(groups, gen)
    }

    /// `Z_m × [0, c)` coded as `ci + j`, with `Z_m` acting on `i` (`step`
    /// times per application): `t` triples `{(i, 3a), (i, 3a+1), (i, 3a+2)}`
    /// per `i`, and one long group of the other columns plus `fixed` points.
    pub fn columns(m: u32, t: u32, long_cols: u32, fixed: u32, step: u32) -> Result<Self, ModelError> {
        let c = 3 * t + long_cols;
        let v = m * c;
        let mut groups = Vec::new();
        for i in 0..m {
            for a in 0..t {
                groups.push((0..3).map(|j| c * i + 3 * a + j).collect());
            }
        }
        let mut long: Vec<u32> = (0..v).filter(|x| x % c >= 3 * t).collect();
        long.extend(v..v + fixed);
        groups.push(long);
        let gen = (0..v).map(|x| (x + c * step) % v).chain(v..v + fixed).collect();
        GddModel::new(groups, gen)
    }

    /// `Z_{3n}` (+1) with groups `{i, i+n, i+2n}`, and a long group of
    /// `cycles` triples each rotated by the generator.
    pub fn rotating_long(n: u32, cycles: u32) -> Result<Self, ModelError> {
        let g = 3 * n;
        let mut groups: Vec<Vec<u32>> = (0..n).map(|i| vec![i, i + n, i + 2 * n]).collect();
        groups.push((g..g + 3 * cycles).collect());
        let mut gen: Vec<u32> = (0..g).map(|x| (x + 1) % g).collect();
        for c in 0..cycles {
            let base = g + 3 * c;
            gen.extend([base + 1, base + 2, base]);
        }
        GddModel::new(groups, gen)
    }

    pub fn point_count(&self) -> usize {
        self.generator.len()
    }

    fn order(&self) -> usize {
        let v = self.point_count();
        let mut seen = vec![false; v];
        let mut order = 1;
        for x in 0..v {
            let mut len = 0;
            let mut y = x;
            while !seen[y] {
                seen[y] = true;
                y = self.generator[y] as usize;
                len += 1;
            }
            if len > 0 {
                order = lcm(order, len);
            }
        }
        order
    }
}

fn lcm(a: usize, b: usize) -> usize {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

impl fmt::Display for GddModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut sizes: Vec<usize> = self.groups.iter().map(Vec::len).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<String> = sizes.chunk_by(|a, b| a == b).map(|s| format!("{}^{}", s[0], s.len())).collect();
        write!(f, "{} under a cyclic group of order {}", parts.join(" "), self.order())
    }
}

/// A 4-GDD on `model` whose block set is invariant under the generator.
pub fn search_gdd(model: &GddModel, budget: &SearchBudget) -> SearchReport<Gdd> {
    let v = model.point_count();
    let sigma = |x: usize| model.generator[x] as usize;
    let mut group_of = vec![0usize; v];
    for (i, g) in model.groups.iter().enumerate() {
        for &x in g {
            group_of[x as usize] = i;
        }
    }

    let mut pair_id = vec![usize::MAX; v * v];
    let mut items = 0;
    for x in 0..v {
        for y in x + 1..v {
            if group_of[x] == group_of[y] || pair_id[x * v + y] != usize::MAX {
                continue;
            }
            let (mut a, mut b) = (x, y);
            while pair_id[a.min(b) * v + a.max(b)] == usize::MAX {
                pair_id[a.min(b) * v + a.max(b)] = items;
                (a, b) = (sigma(a), sigma(b));
            }
            items += 1;
        }
    }

    let orbit = |b: [usize; 4]| -> Vec<[usize; 4]> {
        let mut out = vec![b];
        let mut c = b;
        loop {
            c = c.map(sigma);
            c.sort_unstable();
            if c == b {
                return out;
            }
            out.push(c);
        }
    };
    // every block orbit has a member through the least point of some
    // point orbit
    let mut rep = vec![false; v];
    let mut seen = vec![false; v];
    for x in 0..v {
        if !seen[x] {
            rep[x] = true;
            let mut y = x;
            while !seen[y] {
                seen[y] = true;
                y = sigma(y);
            }
        }
    }
    let mut keys: HashSet<[usize; 4]> = HashSet::new();
    let mut reps = Vec::new();
    let mut options = Vec::new();
    let mut blocks_of: HashMap<usize, Vec<[usize; 4]>> = HashMap::new();
    for a in (0..v).filter(|&a| rep[a]) {
        let others: Vec<usize> = (0..v).filter(|&x| group_of[x] != group_of[a]).collect();
        for (i, &b) in others.iter().enumerate() {
            for (j, &c) in others.iter().enumerate().skip(i + 1) {
                if group_of[c] == group_of[b] {
                    continue;
                }
                for &d in &others[j + 1..] {
                    if group_of[d] == group_of[b] || group_of[d] == group_of[c] {
                        continue;
                    }
                    let mut blk = [a, b, c, d];
                    blk.sort_unstable();
                    let orb = orbit(blk);
                    let key = *orb.iter().min().expect("non-empty orbit");
                    if !keys.insert(key) {
                        continue;
                    }
                    let mut pairs = HashSet::new();
                    let mut its = Vec::new();
                    let ok = orb.iter().all(|o| {
                        (0..4).all(|p| {
                            (p + 1..4).all(|q| {
                                let it = pair_id[o[p] * v + o[q]];
                                if !its.contains(&it) {
                                    its.push(it);
                                }
                                pairs.insert((o[p], o[q]))
                            })
                        })
                    });
                    if ok {
                        its.sort_unstable();
                        blocks_of.insert(reps.len(), orb);
                        reps.push(key);
                        options.push(its);
                    }
                }
            }
        }
    }

    let label = format!("# 4-GDD search for {model}");
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
                describe: Box::new(move |o| format!("{:?}", describe_reps[o])),
            };
            solve_split(&problem, budget)
        }
    };
    rep.log.insert(0, label);
    let result = std::mem::replace(&mut rep.result, SearchResult::Timeout).map(|sel| {
        let mut blocks: Vec<Vec<u32>> =
            sel.iter().flat_map(|o| blocks_of[o].iter().map(|b| b.iter().map(|&x| x as u32).collect())).collect();
        blocks.sort();
        Gdd { groups: model.groups.clone(), blocks, lambda: 1 }
    });
    SearchReport { result, nodes: rep.nodes, elapsed: rep.elapsed, log: rep.log }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gdd::verify_gdd;

    #[test]
    fn cyclic_three_to_the_five() {
        let m = GddModel::uniform(3, 5, 0, 1).unwrap();
        let r = search_gdd(&m, &SearchBudget::seconds(60));
        let g = r.result.found().expect("cyclic 3^5");
        assert!(verify_gdd(g).passed());
        assert_eq!(g.blocks.len(), 15);
    }

    #[test]
    fn no_cyclic_three_to_the_four() {
        // Z_12 with groups {i, i+4, i+8}: the class of difference 6 would
        // be needed twice
        let m = GddModel::uniform(3, 4, 0, 1).unwrap();
        assert_eq!(search_gdd(&m, &SearchBudget::seconds(60)).result, SearchResult::Exhausted);
    }

    #[test]
    fn models_validate() {
        assert!(GddModel::columns(7, 1, 1, 2, 1).is_ok());
        assert!(GddModel::subgroup(30, 6, 6, 10).is_ok());
        assert!(GddModel::rotating_long(11, 3).is_ok());
        // every shift permutes cosets; a shift of 1 breaks {0,1},{2,3},{4,5}
        assert!(GddModel::uniform(3, 4, 0, 5).is_ok());
        let shift: Vec<u32> = (0..6).map(|x| (x + 1) % 6).collect();
        assert_eq!(GddModel::new(vec![vec![0, 1], vec![2, 3], vec![4, 5]], shift), Err(ModelError::NotInvariant));
        assert_eq!(GddModel::new(vec![vec![0], vec![1]], vec![0, 0]), Err(ModelError::NotPermutation(2)));
    }
}
