use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::algebra::gdd::verify_gdd;
use crate::design::verify_design;
use crate::development::{orbit_census, OrbitCensus};
use crate::types::expected_block_count;

use super::{Catalog, CatalogEntry, Content, Status};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryReport {
    pub id: String,
    pub status: Status,
    pub blocks: usize,
    pub expected_blocks: Option<u64>,
    pub census: Option<OrbitCensus>,
    pub failures: Vec<String>,
    /// Observations that are not failures, e.g. short orbits the source
    /// leaves unmarked.
    pub remarks: Vec<String>,
    pub elapsed: Duration,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for EntryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict}  {:<18} {:<8} {:>5} blocks", self.id, self.status, self.blocks)?;
        if let Some(c) = &self.census {
            write!(f, "  orbits {c}")?;
        }
        for x in &self.failures {
            write!(f, "\n      {x}")?;
        }
        for x in &self.remarks {
            write!(f, "\n      note: {x}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogReport {
    pub entries: Vec<EntryReport>,
    pub elapsed: Duration,
}

impl CatalogReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(EntryReport::passed)
    }

    pub fn failed(&self) -> usize {
        self.entries.iter().filter(|e| !e.passed()).count()
    }

    pub fn entry(&self, id: &str) -> Option<&EntryReport> {
        self.entries.iter().find(|e| e.id == id)
    }
}

impl fmt::Display for CatalogReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        let count = |s| self.entries.iter().filter(|e| e.status == s).count();
        write!(
            f,
            "{} entries ({} verbatim, {} repaired, {} derived): {} passed, {} failed in {:.1?}",
            self.entries.len(),
            count(Status::Verbatim),
            count(Status::Repaired),
            count(Status::Derived),
            self.entries.len() - self.failed(),
            self.failed(),
            self.elapsed
        )
    }
}

/// Checksum, develop, verify and count one entry.
pub fn verify_entry(e: &CatalogEntry) -> EntryReport {
    let start = Instant::now();
    let mut r = EntryReport {
        id: e.id.clone(),
        status: e.status,
        blocks: 0,
        expected_blocks: None,
        census: None,
        failures: Vec::new(),
        remarks: Vec::new(),
        elapsed: Duration::ZERO,
    };
    let sum = format!("{:x}", Sha256::digest(e.text.as_bytes()));
    if sum != e.sha256 {
        r.failures.push(format!("checksum mismatch: manifest {}, file {sum}", e.sha256));
    }
    if e.status == Status::Repaired && e.note.is_empty() {
        r.failures.push("repaired entry without an errata note".into());
    }

    let t = e.type_spec();
    match &e.content {
        Content::Gdd(g) => {
            r.blocks = g.blocks.len();
            r.expected_blocks = Some(t.cross_pairs() / 6);
            let rep = verify_gdd(g);
            r.failures.extend(rep.violations.iter().take(5).map(|v| v.to_string()));
            if g.block_sizes().iter().any(|&k| k != 4) {
                r.failures.push(format!("block sizes {:?}, expected 4", g.block_sizes()));
            }
        }
        Content::Starters(_) | Content::Design(_) => {
            r.expected_blocks = expected_block_count(&t).ok();
            if let Content::Starters(s) = &e.content {
                let c = orbit_census(s);
                let unmarked = c.short.iter().filter(|i| !s.marked.contains(i)).count();
                if let Some(i) = s.marked.iter().find(|i| !c.short.contains(i)) {
                    r.failures.push(format!("starter {i} is marked short but has a full orbit"));
                }
                if unmarked > 0 && e.status != Status::Derived {
                    r.remarks.push(format!("{unmarked} short orbits are not marked in the source"));
                }
                r.census = Some(c);
            }
            match e.design().expect("HSD entry") {
                Err(err) => r.failures.push(format!("develop: {err}")),
                Ok(d) => {
                    r.blocks = d.block_count();
                    let rep = verify_design(&d);
                    if !rep.passed() {
                        r.failures.push(rep.to_string());
                    }
                }
            }
        }
    }
    if r.expected_blocks.is_some_and(|x| x != r.blocks as u64) {
        r.failures.push(format!("{} blocks, expected {}", r.blocks, r.expected_blocks.unwrap()));
    }
    r.elapsed = start.elapsed();
    r
}

impl Catalog {
    pub fn verify_all(&self) -> CatalogReport {
        let start = Instant::now();
        let entries = self.entries.par_iter().map(verify_entry).collect();
        CatalogReport { entries, elapsed: start.elapsed() }
    }
}

pub fn catalog_verify_all() -> CatalogReport {
    Catalog::embedded().verify_all()
}
