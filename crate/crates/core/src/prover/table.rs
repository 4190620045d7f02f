use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{prove, Mode, ProveOptions, Verdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub n: u64,
    pub u: u64,
    pub verdict: Verdict,
}

impl Cell {
    pub fn certified(&self) -> bool {
        self.verdict.design().is_some()
    }

    fn rule(&self) -> String {
        match &self.verdict {
            Verdict::Exists { recipe, .. } => recipe.rule.to_string(),
            Verdict::Infeasible(_) => "R-FEAS".into(),
            Verdict::Unknown { .. } => String::new(),
        }
    }

    fn detail(&self) -> String {
        match &self.verdict {
            Verdict::Exists { recipe, .. } => recipe.summary(),
            Verdict::Infeasible(r) => r.failures().join("+"),
            Verdict::Unknown { reason, .. } => reason.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExistenceTable {
    pub nmax: u64,
    pub umax: u64,
    pub cells: Vec<Cell>,
    pub elapsed: Duration,
}

/// Every cell `4 ≤ n ≤ nmax`, `0 ≤ u ≤ umax`, proved independently.
pub fn existence_table(nmax: u64, umax: u64, opts: &ProveOptions) -> ExistenceTable {
    let start = Instant::now();
    let grid: Vec<(u64, u64)> = (4..=nmax).flat_map(|n| (0..=umax).map(move |u| (n, u))).collect();
    // cells run in parallel; searches inside a cell stay single-threaded
    let inner = ProveOptions { threads: 1, ..opts.clone() };
    let cells = grid.into_par_iter().map(|(n, u)| Cell { n, u, verdict: prove(n, u, &inner) }).collect();
    ExistenceTable { nmax, umax, cells, elapsed: start.elapsed() }
}

impl ExistenceTable {
    pub fn cell(&self, n: u64, u: u64) -> Option<&Cell> {
        self.cells.iter().find(|c| c.n == n && c.u == u)
    }

    pub fn count(&self, label: &str) -> usize {
        self.cells.iter().filter(|c| c.verdict.label() == label).count()
    }

    /// `n,u,verdict,rule,detail,points,blocks,certified`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,u,verdict,rule,detail,points,blocks,certified\n");
        for c in &self.cells {
            let blocks = match &c.verdict {
                Verdict::Infeasible(_) => String::new(),
                _ => super::is_feasible(c.n, c.u).expected_blocks.map(|b| b.to_string()).unwrap_or_default(),
            };
            out.push_str(&format!(
                "{},{},{},{},\"{}\",{},{},{}\n",
                c.n,
                c.u,
                c.verdict.label(),
                c.rule(),
                c.detail().replace('"', "\"\""),
                3 * c.n + c.u,
                blocks,
                c.certified()
            ));
        }
        out
    }
}

/// Grid with rows `n` and columns `u`: `E` exists (`E*` certified), `.`
/// infeasible, `?` unknown here.
impl fmt::Display for ExistenceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:>4} |", "n\\u")?;
        for u in 0..=self.umax {
            write!(f, "{u:>3}")?;
        }
        writeln!(f)?;
        writeln!(f, "{}", "-".repeat(6 + 3 * (self.umax as usize + 1)))?;
        for n in 4..=self.nmax {
            write!(f, "{n:>4} |")?;
            for u in 0..=self.umax {
                let mark = match self.cell(n, u) {
                    Some(c) if c.certified() => "E*",
                    Some(Cell { verdict: Verdict::Exists { .. }, .. }) => "E",
                    Some(Cell { verdict: Verdict::Infeasible(_), .. }) => ".",
                    _ => "?",
                };
                write!(f, "{mark:>3}")?;
            }
            writeln!(f)?;
        }
        let mode = if self.cells.iter().any(Cell::certified) { Mode::Materialize } else { Mode::Plan };
        write!(
            f,
            "{} EXISTS, {} INFEASIBLE, {} UNKNOWN_HERE ({:?}, {:.1?})",
            self.count("EXISTS"),
            self.count("INFEASIBLE"),
            self.count("UNKNOWN_HERE"),
            mode,
            self.elapsed
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_table_plan() {
        let t = existence_table(6, 4, &ProveOptions::default());
        assert_eq!(t.cells.len(), 15);
        // n = 6 is all infeasible
        assert!((0..=4).all(|u| t.cell(6, u).unwrap().verdict.label() == "INFEASIBLE"));
        assert_eq!(t.cell(4, 4).unwrap().verdict.label(), "EXISTS");
        assert!(t.to_csv().lines().nth(1).unwrap().starts_with("4,0,"));
    }
}
