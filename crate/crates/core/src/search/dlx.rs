//! Exact cover by dancing links with fail-first item choice.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

/// Why a search stopped before exhausting its space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Abort {
    Nodes,
    Time,
    Cancelled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// Option indices of one exact cover.
    Found(Vec<usize>),
    /// The whole space was searched without a cover.
    Exhausted,
    Aborted(Abort),
}

/// Limits shared by cooperating searches.
#[derive(Debug)]
pub struct Limits<'a> {
    pub max_nodes: u64,
    pub deadline: Option<Instant>,
    pub cancel: Option<&'a AtomicBool>,
    /// Global node counter, if several searches share one budget.
    pub counter: Option<&'a AtomicU64>,
}

impl Default for Limits<'_> {
    fn default() -> Self {
        Limits { max_nodes: u64::MAX, deadline: None, cancel: None, counter: None }
    }
}

/// An exact-cover matrix: every item must be covered by exactly one chosen
/// option.
pub struct Dlx {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    item: Vec<usize>,
    option: Vec<usize>,
    size: Vec<usize>,
    items: usize,
    /// First node of each option.
    option_start: Vec<usize>,
    pub nodes: u64,
}

impl Dlx {
    /// `options[i]` lists the items (`0..items`) option `i` covers.
    pub fn new(items: usize, options: &[Vec<usize>]) -> Self {
        let header = items + 1;
        let total = header + options.iter().map(Vec::len).sum::<usize>();
        let mut d = Dlx {
            left: Vec::with_capacity(total),
            right: Vec::with_capacity(total),
            up: Vec::with_capacity(total),
            down: Vec::with_capacity(total),
            item: Vec::with_capacity(total),
            option: Vec::with_capacity(total),
            size: vec![0; header],
            items,
            option_start: Vec::with_capacity(options.len()),
            nodes: 0,
        };
        // node 0 is the root; nodes 1..=items are item headers
        for i in 0..header {
            d.left.push(if i == 0 { items } else { i - 1 });
            d.right.push(if i == items { 0 } else { i + 1 });
            d.up.push(i);
            d.down.push(i);
            d.item.push(i);
            d.option.push(usize::MAX);
        }
        for (o, opt) in options.iter().enumerate() {
            let first = d.item.len();
            d.option_start.push(first);
            for (k, &it) in opt.iter().enumerate() {
                let col = it + 1;
                let node = d.item.len();
                let last = d.up[col];
                d.up.push(last);
                d.down.push(col);
                d.down[last] = node;
                d.up[col] = node;
                d.item.push(col);
                d.option.push(o);
                d.size[col] += 1;
                d.left.push(if k == 0 { node + opt.len() - 1 } else { node - 1 });
                d.right.push(if k + 1 == opt.len() { first } else { node + 1 });
            }
        }
        d
    }

    pub fn item_count(&self) -> usize {
        self.items
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.item[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.item[j]] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    /// Cover the other items of the option containing `node`.
    fn select(&mut self, node: usize) {
        let mut j = self.right[node];
        while j != node {
            self.cover(self.item[j]);
            j = self.right[j];
        }
    }

    fn unselect(&mut self, node: usize) {
        let mut j = self.left[node];
        while j != node {
            self.uncover(self.item[j]);
            j = self.left[j];
        }
    }

    /// Commit to option `o` before searching (used to split root branches).
    /// Returns false if one of its items is already covered.
    pub fn force(&mut self, o: usize) -> bool {
        let start = self.option_start[o];
        let mut j = start;
        loop {
            let c = self.item[j];
            // item still active iff reachable from its neighbours
            if self.right[self.left[c]] != c {
                return false;
            }
            j = self.right[j];
            if j == start {
                break;
            }
        }
        let mut j = start;
        loop {
            self.cover(self.item[j]);
            j = self.right[j];
            if j == start {
                break;
            }
        }
        true
    }

    /// Options (in matrix order) that cover item `it`.
    pub fn options_of(&self, it: usize) -> Vec<usize> {
        let c = it + 1;
        let mut out = Vec::new();
        let mut i = self.down[c];
        while i != c {
            out.push(self.option[i]);
            i = self.down[i];
        }
        out
    }

    fn check_limits(&self, limits: &Limits, count: u64) -> Option<Abort> {
        if count > limits.max_nodes {
            return Some(Abort::Nodes);
        }
        if self.nodes % 1024 == 0 {
            if let Some(c) = limits.cancel {
                if c.load(Ordering::Relaxed) {
                    return Some(Abort::Cancelled);
                }
            }
            if let Some(d) = limits.deadline {
                if Instant::now() >= d {
                    return Some(Abort::Time);
                }
            }
        }
        None
    }

    pub fn solve(&mut self, limits: &Limits) -> Outcome {
        let mut chosen = Vec::new();
        match self.search(&mut chosen, limits) {
            Ok(true) => Outcome::Found(chosen),
            Ok(false) => Outcome::Exhausted,
            Err(a) => Outcome::Aborted(a),
        }
    }

    fn search(&mut self, chosen: &mut Vec<usize>, limits: &Limits) -> Result<bool, Abort> {
        if self.right[0] == 0 {
            return Ok(true);
        }
        self.nodes += 1;
        let count = match limits.counter {
            Some(c) => c.fetch_add(1, Ordering::Relaxed) + 1,
            None => self.nodes,
        };
        if let Some(a) = self.check_limits(limits, count) {
            return Err(a);
        }
        let mut best = self.right[0];
        let mut c = best;
        while c != 0 {
            if self.size[c] < self.size[best] {
                best = c;
                if self.size[c] == 0 {
                    break;
                }
            }
            c = self.right[c];
        }
        if self.size[best] == 0 {
            return Ok(false);
        }
        self.cover(best);
        let mut r = self.down[best];
        while r != best {
            chosen.push(self.option[r]);
            self.select(r);
            let res = self.search(chosen, limits);
            self.unselect(r);
            match res {
                Ok(true) => {
                    self.uncover(best);
                    return Ok(true);
                }
                Ok(false) => {
                    chosen.pop();
                }
                Err(a) => {
                    self.uncover(best);
                    return Err(a);
                }
            }
            r = self.down[r];
        }
        self.uncover(best);
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knuth_example() {
        // items a..g = 0..6
        let options = vec![
            vec![2, 4],
            vec![0, 3, 6],
            vec![1, 2, 5],
            vec![0, 3, 5],
            vec![1, 6],
            vec![3, 4, 6],
        ];
        let mut d = Dlx::new(7, &options);
        match d.solve(&Limits::default()) {
            Outcome::Found(mut s) => {
                s.sort();
                assert_eq!(s, vec![0, 3, 4]);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn no_cover_and_node_limit() {
        let options = vec![vec![0, 1], vec![1, 2]];
        assert_eq!(Dlx::new(3, &options).solve(&Limits::default()), Outcome::Exhausted);
        let lim = Limits { max_nodes: 0, ..Limits::default() };
        assert_eq!(Dlx::new(3, &options).solve(&lim), Outcome::Aborted(Abort::Nodes));
    }

    #[test]
    fn forcing_an_option() {
        let options = vec![vec![0], vec![1], vec![0, 1]];
        let mut d = Dlx::new(2, &options);
        assert!(d.force(2));
        assert_eq!(d.solve(&Limits::default()), Outcome::Found(vec![]));
        let mut d = Dlx::new(2, &options);
        assert!(d.force(0));
        assert!(!d.force(2));
    }
}
