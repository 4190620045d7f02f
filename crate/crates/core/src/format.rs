//! Line-oriented text formats for designs, starter sets and GDDs.
//!
//! Each file starts with a header line (`hsd-design v1`, `hsd-starter v1`,
//! `gdd v1`) followed by `key: value` lines. `#` starts a comment; blank
//! lines are ignored.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::gdd::Gdd;
use crate::design::Design;
use crate::development::StarterSet;
use crate::point::{Block, Point};
use crate::types::TypeSpec;

pub const DESIGN_HEADER: &str = "hsd-design v1";
pub const STARTER_HEADER: &str = "hsd-starter v1";
pub const GDD_HEADER: &str = "gdd v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, message: message.into() })
}

/// `(line number, key, value)` for every content line after the header.
fn lines<'a>(text: &'a str, header: &str) -> Result<Vec<(usize, &'a str, &'a str)>, FormatError> {
    let mut out = Vec::new();
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if !seen_header {
            if line != header {
                return err(line_no, format!("expected header `{header}`, found `{line}`"));
            }
            seen_header = true;
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return err(line_no, format!("expected `key: value`, found `{line}`"));
        };
        out.push((line_no, key.trim(), value.trim()));
    }
    if !seen_header {
        return err(1, format!("missing header `{header}`"));
    }
    Ok(out)
}

fn points(line: usize, value: &str) -> Result<Vec<Point>, FormatError> {
    value
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Point>().or_else(|e| err(line, e.to_string())))
        .collect()
}

fn block(line: usize, value: &str) -> Result<Block, FormatError> {
    let p = points(line, value)?;
    match p[..] {
        [a, b, c, d] => Ok(Block::new(a, b, c, d)),
        _ => err(line, format!("a block needs 4 points, found {}", p.len())),
    }
}

fn number<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T, FormatError> {
    value.parse().or_else(|_| err(line, format!("`{key}` needs an integer, found `{value}`")))
}

fn type_spec(line: usize, value: &str) -> Result<TypeSpec, FormatError> {
    value.parse().or_else(|e| err(line, format!("bad type: {e}")))
}

fn once<T>(slot: &mut Option<T>, line: usize, key: &str, v: T) -> Result<(), FormatError> {
    if slot.is_some() {
        return err(line, format!("duplicate `{key}`"));
    }
    *slot = Some(v);
    Ok(())
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn parse_design(text: &str) -> Result<Design, FormatError> {
    let mut ty = None;
    let mut count: Option<usize> = None;
    let mut holes = Vec::new();
    let mut blocks = Vec::new();
    for (line, key, value) in lines(text, DESIGN_HEADER)? {
        match key {
            "type" => once(&mut ty, line, key, type_spec(line, value)?)?,
            "points" => once(&mut count, line, key, number(line, key, value)?)?,
            "hole" => holes.push(points(line, value)?),
            "block" => blocks.push(block(line, value)?),
            _ => return err(line, format!("unknown key `{key}`")),
        }
    }
    let Some(declared_type) = ty else { return err(0, "missing `type`") };
    let Some(count) = count else { return err(0, "missing `points`") };
    let all: BTreeSet<Point> = holes.iter().flatten().copied().collect();
    if all.len() != count {
        return err(0, format!("`points: {count}` but the holes contain {} distinct points", all.len()));
    }
    Ok(Design::new(all.into_iter().collect(), holes, blocks, declared_type))
}

pub fn write_design(d: &Design) -> String {
    let mut s = String::new();
    writeln!(s, "{DESIGN_HEADER}").unwrap();
    writeln!(s, "type: {}", d.declared_type).unwrap();
    writeln!(s, "points: {}", d.points.len()).unwrap();
    for h in &d.holes.holes {
        writeln!(s, "hole: {}", join(h)).unwrap();
    }
    for b in &d.blocks {
        writeln!(s, "block: {}", join(b.0)).unwrap();
    }
    s
}

pub fn parse_starters(text: &str) -> Result<StarterSet, FormatError> {
    let mut ty: Option<(usize, TypeSpec)> = None;
    let mut modulus: Option<u32> = None;
    let mut step: Option<u32> = None;
    let mut infinite: Option<u32> = None;
    let mut marked: Option<Vec<usize>> = None;
    let mut starters = Vec::new();
    for (line, key, value) in lines(text, STARTER_HEADER)? {
        match key {
            "type" => once(&mut ty, line, key, (line, type_spec(line, value)?))?,
            "modulus" => once(&mut modulus, line, key, number(line, key, value)?)?,
            "step" => once(&mut step, line, key, number(line, key, value)?)?,
            "infinite" => once(&mut infinite, line, key, number(line, key, value)?)?,
            "marked" => {
                let v = value.split_whitespace().map(|t| number(line, key, t)).collect::<Result<_, _>>()?;
                once(&mut marked, line, key, v)?
            }
            "starter" => starters.push(block(line, value)?),
            _ => return err(line, format!("unknown key `{key}`")),
        }
    }
    let Some((tline, ty)) = ty else { return err(0, "missing `type`") };
    let (h, n, u) = match ty.parts() {
        [(h, n)] => (*h, *n, 0),
        [(h, n), (u, 1)] => (*h, *n, *u),
        _ => return err(tline, format!("starter type must be `h^n` or `h^n u^1`, found `{ty}`")),
    };
    let s = StarterSet {
        h: h as u32,
        n: n as u32,
        step: step.unwrap_or(1),
        infinite: infinite.unwrap_or(u as u32),
        starters,
        marked: marked.unwrap_or_default(),
    };
    if s.infinite as u64 != u {
        return err(0, format!("`infinite: {}` disagrees with type {ty}", s.infinite));
    }
    if let Some(g) = modulus {
        if g != s.modulus() {
            return err(0, format!("`modulus: {g}` disagrees with type {ty} (expected {})", s.modulus()));
        }
    }
    if let Some(&i) = s.marked.iter().find(|&&i| i >= s.starters.len()) {
        return err(0, format!("marked index {i} out of range"));
    }
    Ok(s)
}

pub fn write_starters(s: &StarterSet) -> String {
    let mut out = String::new();
    writeln!(out, "{STARTER_HEADER}").unwrap();
    writeln!(out, "type: {}", s.type_spec()).unwrap();
    writeln!(out, "modulus: {}", s.modulus()).unwrap();
    writeln!(out, "step: {}", s.step).unwrap();
    writeln!(out, "infinite: {}", s.infinite).unwrap();
    if !s.marked.is_empty() {
        writeln!(out, "marked: {}", join(&s.marked)).unwrap();
    }
    for b in &s.starters {
        writeln!(out, "starter: {}", join(b.0)).unwrap();
    }
    out
}

pub fn parse_gdd(text: &str) -> Result<Gdd, FormatError> {
    let mut lambda = None;
    let mut groups = Vec::new();
    let mut blocks = Vec::new();
    let ints = |line: usize, value: &str| -> Result<Vec<u32>, FormatError> {
        value.split_whitespace().map(|t| number(line, "point", t)).collect()
    };
    for (line, key, value) in lines(text, GDD_HEADER)? {
        match key {
            "lambda" => once(&mut lambda, line, key, number(line, key, value)?)?,
            "group" => groups.push(ints(line, value)?),
            "block" => {
                let b = ints(line, value)?;
                if b.len() < 2 {
                    return err(line, "a block needs at least 2 points");
                }
                blocks.push(b)
            }
            _ => return err(line, format!("unknown key `{key}`")),
        }
    }
    if groups.iter().any(Vec::is_empty) {
        return err(0, "empty group");
    }
    Ok(Gdd { groups, blocks, lambda: lambda.unwrap_or(1) })
}

pub fn write_gdd(g: &Gdd) -> String {
    let mut s = String::new();
    writeln!(s, "{GDD_HEADER}").unwrap();
    writeln!(s, "lambda: {}", g.lambda).unwrap();
    for grp in &g.groups {
        writeln!(s, "group: {}", join(grp)).unwrap();
    }
    for b in &g.blocks {
        writeln!(s, "block: {}", join(b)).unwrap();
    }
    s
}
