//! The embedded catalog: every starter table of the source plus derived base
//! designs and 4-GDDs, described by `data/MANIFEST`.
//!
//! Manifest rows are tab separated: id, kind (`starter`, `design`, `gdd`),
//! file, status, sha256 of the file, source, note.

mod verify;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::algebra::gdd::Gdd;
use crate::design::Design;
use crate::development::{develop, DevelopError, StarterSet};
use crate::format::{parse_design, parse_gdd, parse_starters, FormatError};
use crate::types::TypeSpec;

pub use verify::{catalog_verify_all, verify_entry, CatalogReport, EntryReport};

mod embedded {
    include!(concat!(env!("OUT_DIR"), "/catalog_data.rs"));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Verbatim,
    /// Minimal editorial fix of a defective source line; the note quotes it.
    Repaired,
    /// Produced here by a named oracle (search), not printed in the source.
    Derived,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Verbatim => "verbatim",
            Status::Repaired => "repaired",
            Status::Derived => "derived",
        })
    }
}

impl FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "verbatim" => Ok(Status::Verbatim),
            "repaired" => Ok(Status::Repaired),
            "derived" => Ok(Status::Derived),
            _ => Err(format!("unknown status `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Content {
    Starters(StarterSet),
    Design(Design),
    Gdd(Gdd),
}

impl Content {
    pub fn kind(&self) -> &'static str {
        match self {
            Content::Starters(_) => "starter",
            Content::Design(_) => "design",
            Content::Gdd(_) => "gdd",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: String,
    pub file: String,
    pub status: Status,
    pub sha256: String,
    /// Table or example name for printed data, the generating oracle for
    /// derived data.
    pub source: String,
    pub note: String,
    /// File text as embedded.
    pub text: &'static str,
    pub content: Content,
}

impl CatalogEntry {
    /// HSD type, or the group type of a GDD.
    pub fn type_spec(&self) -> TypeSpec {
        match &self.content {
            Content::Starters(s) => s.type_spec(),
            Content::Design(d) => d.declared_type.clone(),
            Content::Gdd(g) => g.group_type(),
        }
    }

    pub fn is_hsd(&self) -> bool {
        !matches!(self.content, Content::Gdd(_))
    }

    pub fn starters(&self) -> Option<&StarterSet> {
        match &self.content {
            Content::Starters(s) => Some(s),
            _ => None,
        }
    }

    pub fn gdd(&self) -> Option<&Gdd> {
        match &self.content {
            Content::Gdd(g) => Some(g),
            _ => None,
        }
    }

    /// The design itself, developing starters if needed. `None` for GDDs.
    pub fn design(&self) -> Option<Result<Design, DevelopError>> {
        match &self.content {
            Content::Starters(s) => Some(develop(s)),
            Content::Design(d) => Some(Ok(d.clone())),
            Content::Gdd(_) => None,
        }
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}\t{}", self.id, self.content.kind(), self.status, self.type_spec())?;
        if let Content::Starters(s) = &self.content {
            write!(f, "\t+{} mod {}, {} starters", s.step, s.modulus(), s.starters.len())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
    #[error("{file}: {source}")]
    File { file: String, source: FormatError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// Parse a manifest, resolving file names through `files`.
    pub fn load(manifest: &str, files: &[(&str, &'static str)]) -> Result<Catalog, CatalogError> {
        let mut entries: Vec<CatalogEntry> = Vec::new();
        for (i, line) in manifest.lines().enumerate() {
            let line_no = i + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| CatalogError::Manifest { line: line_no, message };
            let cols: Vec<&str> = line.split('\t').collect();
            let [id, kind, file, status, sha, source, note] = cols[..] else {
                return Err(bad(format!("expected 7 columns, found {}", cols.len())));
            };
            if entries.iter().any(|e| e.id == id) {
                return Err(bad(format!("duplicate id `{id}`")));
            }
            let status: Status = status.parse().map_err(bad)?;
            let text = files
                .iter()
                .find(|(f, _)| *f == file)
                .map(|(_, t)| *t)
                .ok_or_else(|| bad(format!("file `{file}` is not embedded")))?;
            let wrap = |source| CatalogError::File { file: file.to_string(), source };
            let content = match kind {
                "starter" => Content::Starters(parse_starters(text).map_err(wrap)?),
                "design" => Content::Design(parse_design(text).map_err(wrap)?),
                "gdd" => Content::Gdd(parse_gdd(text).map_err(wrap)?),
                _ => return Err(bad(format!("unknown kind `{kind}`"))),
            };
            entries.push(CatalogEntry {
                id: id.to_string(),
                file: file.to_string(),
                status,
                sha256: sha.to_string(),
                source: source.to_string(),
                note: note.to_string(),
                text,
                content,
            });
        }
        Ok(Catalog { entries })
    }

    /// The catalog compiled into this crate.
    pub fn embedded() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| {
            Catalog::load(embedded::MANIFEST, embedded::FILES).unwrap_or_else(|e| panic!("embedded catalog: {e}"))
        })
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Result<&CatalogEntry, CatalogError> {
        self.entries.iter().find(|e| e.id == id).ok_or_else(|| CatalogError::UnknownId(id.to_string()))
    }

    pub fn list(&self, filter: &CatalogFilter) -> Vec<&CatalogEntry> {
        self.entries.iter().filter(|e| filter.matches(e)).collect()
    }

    /// First HSD entry of type `t` (as a multiset), printed data before
    /// derived data.
    pub fn find_hsd(&self, t: &TypeSpec) -> Option<&CatalogEntry> {
        let mut hits: Vec<&CatalogEntry> =
            self.entries.iter().filter(|e| e.is_hsd() && e.type_spec().same_multiset(t)).collect();
        hits.sort_by_key(|e| e.status == Status::Derived);
        hits.first().copied()
    }

    pub fn find_gdd(&self, t: &TypeSpec) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| !e.is_hsd() && e.type_spec().same_multiset(t))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CatalogFilter {
    pub status: Option<Status>,
    /// `starter`, `design` or `gdd`.
    pub kind: Option<String>,
    /// Matches ids starting with this, e.g. `A6` or `gdd/`.
    pub prefix: Option<String>,
    pub type_spec: Option<TypeSpec>,
}

impl CatalogFilter {
    pub fn matches(&self, e: &CatalogEntry) -> bool {
        self.status.is_none_or(|s| s == e.status)
            && self.kind.as_deref().is_none_or(|k| k == e.content.kind())
            && self.prefix.as_deref().is_none_or(|p| e.id.starts_with(p))
            && self.type_spec.as_ref().is_none_or(|t| t.same_multiset(&e.type_spec()))
    }
}

pub fn catalog_get(id: &str) -> Result<&'static CatalogEntry, CatalogError> {
    Catalog::embedded().get(id)
}

pub fn catalog_list(filter: &CatalogFilter) -> Vec<&'static CatalogEntry> {
    Catalog::embedded().list(filter)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_catalog_loads() {
        let c = Catalog::embedded();
        assert!(c.entries().len() > 100);
        let e = c.get("Ex2.1").unwrap();
        let s = e.starters().unwrap();
        assert_eq!((s.starters.len(), s.step, s.modulus()), (5, 1, 21));
        assert!(matches!(c.get("nope"), Err(CatalogError::UnknownId(_))));
    }

    #[test]
    fn lookup_by_type() {
        let c = Catalog::embedded();
        assert_eq!(c.find_hsd(&"3^7 1^1".parse().unwrap()).unwrap().id, "Ex2.1");
        assert_eq!(c.find_hsd(&"1^1 3^8".parse().unwrap()).unwrap().id, "A1/3^8 1^1");
        assert_eq!(c.find_hsd(&"3^4".parse().unwrap()).unwrap().status, Status::Derived);
        assert!(c.find_gdd(&"3^8 6^1".parse().unwrap()).is_some());
        assert!(c.find_gdd(&"3^11 9^1".parse().unwrap()).is_none());
    }

    #[test]
    fn filters() {
        let f = CatalogFilter { prefix: Some("D/".into()), ..Default::default() };
        assert_eq!(catalog_list(&f).len(), 6);
        let f = CatalogFilter { status: Some(Status::Repaired), ..Default::default() };
        let ids: Vec<_> = catalog_list(&f).iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["A5/3^7 7^1", "A6/3^9 8^1"]);
    }

    #[test]
    fn bad_manifest_rows() {
        let files = [("a.gdd", "gdd v1\n")];
        let err = Catalog::load("x\tgdd\ta.gdd\tverbatim\t0\n", &files).unwrap_err();
        assert!(matches!(err, CatalogError::Manifest { line: 1, .. }));
        let err = Catalog::load("x\tgdd\tb.gdd\tverbatim\t0\ts\t\n", &files).unwrap_err();
        assert!(err.to_string().contains("not embedded"));
    }
}
