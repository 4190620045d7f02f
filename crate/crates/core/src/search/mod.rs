//! Backtracking searches for designs and starter sets.
//!
//! Both searches are exact-cover problems solved by [`dlx`]. Work is split
//! over the options of one root item; each branch runs sequentially and the
//! lowest-index successful branch wins, so results do not depend on the
//! thread count.

pub mod direct;
pub mod gdd;
pub mod dlx;
pub mod starter;

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use dlx::{Abort, Dlx, Limits, Outcome};

pub use direct::search_direct;
pub use gdd::{search_gdd, GddModel, ModelError};
pub use starter::search_starters;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBudget {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    /// Shuffles option order; `None` keeps the natural order.
    pub seed: Option<u64>,
    /// Worker threads; 0 means the rayon default.
    pub threads: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { time_limit: None, node_limit: None, seed: None, threads: 0 }
    }
}

impl SearchBudget {
    pub fn seconds(s: u64) -> Self {
        SearchBudget { time_limit: Some(Duration::from_secs(s)), ..Default::default() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// `Exhausted` is the NONE verdict: the whole (symmetry-reduced) space was
/// searched. `Timeout` covers every early stop and proves nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult<T> {
    Found(T),
    Exhausted,
    Timeout,
}

impl<T> SearchResult<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            SearchResult::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SearchResult::Found(_) => "FOUND",
            SearchResult::Exhausted => "NONE",
            SearchResult::Timeout => "TIMEOUT",
        }
    }

    pub fn map<U, F: FnOnce(T) -> U>(self, f: F) -> SearchResult<U> {
        match self {
            SearchResult::Found(t) => SearchResult::Found(f(t)),
            SearchResult::Exhausted => SearchResult::Exhausted,
            SearchResult::Timeout => SearchResult::Timeout,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchReport<T> {
    pub result: SearchResult<T>,
    pub nodes: u64,
    pub elapsed: Duration,
    /// One line per root branch plus a header; enough to replay a NONE.
    pub log: Vec<String>,
}

impl<T> fmt::Display for SearchReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} after {} nodes in {:.2?}", self.result.label(), self.nodes, self.elapsed)
    }
}

/// An exact-cover instance plus the options allowed at the root.
pub(crate) struct CoverProblem {
    pub items: usize,
    pub options: Vec<Vec<usize>>,
    pub root_item: usize,
    /// Root branches, as option indices covering `root_item`.
    pub root_options: Vec<usize>,
    pub describe: Box<dyn Fn(usize) -> String + Sync>,
}

/// Fail-first root item: the one with fewest options.
pub(crate) fn fail_first_item(items: usize, options: &[Vec<usize>]) -> usize {
    let mut count = vec![0usize; items];
    for o in options {
        for &i in o {
            count[i] += 1;
        }
    }
    (0..items).min_by_key(|&i| count[i]).unwrap_or(0)
}

/// Options covering item `it`, in order.
pub(crate) fn options_covering(options: &[Vec<usize>], it: usize) -> Vec<usize> {
    options.iter().enumerate().filter(|(_, o)| o.contains(&it)).map(|(i, _)| i).collect()
}

pub(crate) fn shuffle_options(options: &mut Vec<Vec<usize>>, seed: Option<u64>) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..options.len()).collect();
    if let Some(s) = seed {
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(s));
        let old = std::mem::take(options);
        *options = perm.iter().map(|&i| old[i].clone()).collect();
    }
    perm
}

/// Run the root branches in parallel and return the lowest-index cover.
pub(crate) fn solve_split(p: &CoverProblem, budget: &SearchBudget) -> SearchReport<Vec<usize>> {
    let start = Instant::now();
    let deadline = budget.time_limit.map(|t| start + t);
    let counter = AtomicU64::new(0);
    let best = AtomicUsize::new(usize::MAX);
    let cancels: Vec<AtomicBool> = p.root_options.iter().map(|_| AtomicBool::new(false)).collect();
    let run = || {
        p.root_options
            .par_iter()
            .enumerate()
            .map(|(bi, &opt)| {
                if best.load(Ordering::Relaxed) < bi {
                    return (Outcome::Aborted(Abort::Cancelled), 0);
                }
                let mut d = Dlx::new(p.items, &p.options);
                if !d.force(opt) {
                    return (Outcome::Exhausted, 0);
                }
                let limits = Limits {
                    max_nodes: budget.node_limit.unwrap_or(u64::MAX),
                    deadline,
                    cancel: Some(&cancels[bi]),
                    counter: Some(&counter),
                };
                let out = match d.solve(&limits) {
                    Outcome::Found(mut s) => {
                        s.push(opt);
                        best.fetch_min(bi, Ordering::SeqCst);
                        for c in &cancels[bi + 1..] {
                            c.store(true, Ordering::Relaxed);
                        }
                        Outcome::Found(s)
                    }
                    o => o,
                };
                (out, d.nodes)
            })
            .collect::<Vec<_>>()
    };
    let outcomes = if budget.threads > 0 {
        match rayon::ThreadPoolBuilder::new().num_threads(budget.threads).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        }
    } else {
        run()
    };

    let mut log = vec![format!(
        "# exact cover: {} items, {} options; root item {} with {} branches",
        p.items,
        p.options.len(),
        p.root_item,
        p.root_options.len()
    )];
    let mut result = SearchResult::Exhausted;
    let mut any_abort = false;
    for (bi, (out, nodes)) in outcomes.into_iter().enumerate() {
        let what = (p.describe)(p.root_options[bi]);
        match out {
            Outcome::Found(s) => {
                log.push(format!("branch {bi} {what}: found after {nodes} nodes"));
                if result.found().is_none() {
                    result = SearchResult::Found(s);
                }
            }
            Outcome::Exhausted => log.push(format!("branch {bi} {what}: exhausted after {nodes} nodes")),
            Outcome::Aborted(Abort::Cancelled) => log.push(format!("branch {bi} {what}: skipped")),
            Outcome::Aborted(a) => {
                any_abort = true;
                log.push(format!("branch {bi} {what}: stopped ({a:?}) after {nodes} nodes"));
            }
        }
    }
    if any_abort && matches!(result, SearchResult::Exhausted) {
        result = SearchResult::Timeout;
    }
    SearchReport { result, nodes: counter.load(Ordering::Relaxed), elapsed: start.elapsed(), log }
}

/// Attempts per restart round; fixed so results do not depend on threads.
const ROUND_WIDTH: usize = 8;

/// Randomized restarts: round `r` runs [`ROUND_WIDTH`] independent searches
/// with shuffled item and option orders and a node cap growing by half each
/// round. The lowest-index success of the first successful round wins; any
/// attempt that exhausts its space proves there is no cover.
pub(crate) fn solve_restarts(items: usize, options: &[Vec<usize>], seed: u64, budget: &SearchBudget) -> SearchReport<Vec<usize>> {
    let start = Instant::now();
    let deadline = budget.time_limit.map(|t| start + t);
    let counter = AtomicU64::new(0);
    let mut log = vec![format!("# exact cover with restarts: {items} items, {} options, seed {seed}", options.len())];
    let mut cap: u64 = 2_000;
    for round in 0.. {
        let attempt = |i: usize| -> (Outcome, u64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((round * ROUND_WIDTH + i) as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut item_perm: Vec<usize> = (0..items).collect();
            item_perm.shuffle(&mut rng);
            let mut order: Vec<usize> = (0..options.len()).collect();
            order.shuffle(&mut rng);
            let opts: Vec<Vec<usize>> = order.iter().map(|&o| options[o].iter().map(|&it| item_perm[it]).collect()).collect();
            let mut d = Dlx::new(items, &opts);
            // per-attempt caps; a shared counter would depend on scheduling
            let limits = Limits { max_nodes: cap, deadline, cancel: None, counter: None };
            let out = match d.solve(&limits) {
                Outcome::Found(sel) => Outcome::Found(sel.into_iter().map(|o| order[o]).collect()),
                o => o,
            };
            counter.fetch_add(d.nodes, Ordering::Relaxed);
            (out, d.nodes)
        };
        let run = || (0..ROUND_WIDTH).into_par_iter().map(attempt).collect::<Vec<_>>();
        let outcomes = if budget.threads > 0 {
            match rayon::ThreadPoolBuilder::new().num_threads(budget.threads).build() {
                Ok(pool) => pool.install(run),
                Err(_) => run(),
            }
        } else {
            run()
        };
        let mut timed_out = false;
        for (i, (out, nodes)) in outcomes.into_iter().enumerate() {
            match out {
                Outcome::Found(sel) => {
                    log.push(format!("round {round} attempt {i}: found after {nodes} nodes (cap {cap})"));
                    return SearchReport { result: SearchResult::Found(sel), nodes: counter.load(Ordering::Relaxed), elapsed: start.elapsed(), log };
                }
                Outcome::Exhausted => {
                    log.push(format!("round {round} attempt {i}: exhausted after {nodes} nodes"));
                    return SearchReport { result: SearchResult::Exhausted, nodes: counter.load(Ordering::Relaxed), elapsed: start.elapsed(), log };
                }
                Outcome::Aborted(Abort::Time) | Outcome::Aborted(Abort::Cancelled) => timed_out = true,
                Outcome::Aborted(Abort::Nodes) => {}
            }
        }
        let total = counter.load(Ordering::Relaxed);
        if timed_out || budget.node_limit.is_some_and(|l| total >= l) {
            log.push(format!("round {round}: budget exhausted after {total} nodes"));
            break;
        }
        cap += cap / 2;
    }
    SearchReport { result: SearchResult::Timeout, nodes: counter.load(Ordering::Relaxed), elapsed: start.elapsed(), log }
}
