use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::field::mols;
use crate::algebra::gdd::Gdd;
use crate::algebra::td::td_from_mols;
use crate::catalog::Catalog;
use crate::constructions::{
    fill_hole, fill_holes_a, fill_holes_b, multiply, weight_inflate, ConstructionError, MapSupplier,
};
use crate::design::Design;
use crate::types::TypeSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Feas,
    Cat,
    Search,
    Gdd1,
    Tdw,
    Mul,
    FillA,
    FillB,
    NineFam,
    Fsols,
}

impl Rule {
    pub const ALL: [Rule; 10] =
        [Rule::Feas, Rule::Cat, Rule::Search, Rule::Gdd1, Rule::Tdw, Rule::Mul, Rule::FillA, Rule::FillB, Rule::NineFam, Rule::Fsols];

    pub fn id(self) -> &'static str {
        match self {
            Rule::Feas => "R-FEAS",
            Rule::Cat => "R-CAT",
            Rule::Search => "R-SEARCH",
            Rule::Gdd1 => "R-GDD1",
            Rule::Tdw => "R-TDW",
            Rule::Mul => "R-MUL",
            Rule::FillA => "R-FILL-A",
            Rule::FillB => "R-FILL-B",
            Rule::NineFam => "R-9FAM",
            Rule::Fsols => "R-FSOLS",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// What a recipe node does when executed. Ingredient designs come from the
/// node's children, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Catalog { id: String },
    /// A search witness, kept so the plan need not search twice.
    Found { how: String, design: Arc<Design> },
    /// Weight one on every point of a catalog 4-GDD; child: HSD(1^4).
    GddWeightOne { id: String },
    /// TD(6, m): weight 3 on four groups and on `k` points of the fifth,
    /// weights 4, 2 on the sixth summing to `u`; children: block types.
    TdWeighting { m: u64, k: u64, u: u64 },
    /// Children: the design to multiply.
    Multiply { m: u64 },
    /// Children: outer, then HSD(h^s v^1).
    FillA { h: u64, s: u64, v: u64, w: u64 },
    /// Children: outer, then HSD(h^s v^1) and HSD(h^t v^1) where non-trivial.
    FillB { h: u64, s: u64, t: u64, v: u64, w: u64 },
    /// Children: outer, then the HSD laid over its hole of `size` points.
    FillLong { size: u64 },
    /// TD(10, 9): weight 1 on nine groups, 4 and 2 on the last summing to
    /// `u`; children: HSD(1^9 2^1) and/or HSD(1^9 4^1).
    NineWeighting { u: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recipe {
    pub rule: Rule,
    pub target: TypeSpec,
    pub action: Action,
    pub children: Vec<Recipe>,
}

impl Recipe {
    pub fn params(&self) -> String {
        match &self.action {
            Action::Catalog { id } => format!("catalog {id}"),
            Action::Found { how, .. } => how.clone(),
            Action::GddWeightOne { id } => format!("weight 1 on catalog {id}"),
            Action::TdWeighting { m, k, u } => format!("TD(6,{m}) weights k={k} u={u}"),
            Action::Multiply { m } => format!("m={m}"),
            Action::FillA { h, s, v, w } => format!("h={h} s={s} v={v} w={w}"),
            Action::FillB { h, s, t, v, w } => format!("h={h} s={s} t={t} v={v} w={w}"),
            Action::FillLong { size } => format!("fill the hole of size {size}"),
            Action::NineWeighting { u } => format!("TD(10,9) weights u={u}"),
        }
    }

    /// Nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Recipe::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(Recipe::depth).max().unwrap_or(0)
    }

    /// One line: `R-FILL-A(h=3 s=3 v=3 w=1)[R-CAT(catalog C1/9^4 1^1), …]`.
    pub fn summary(&self) -> String {
        let mut s = format!("{}({})", self.rule, self.params());
        if !self.children.is_empty() {
            let kids: Vec<String> = self.children.iter().map(Recipe::summary).collect();
            s.push_str(&format!("[{}]", kids.join(", ")));
        }
        s
    }

    fn write_tree(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        writeln!(f, "{:indent$}{} {}: {}", "", self.rule, self.target, self.params(), indent = indent)?;
        for c in &self.children {
            c.write_tree(f, indent + 2)?;
        }
        Ok(())
    }

    /// Execute the recipe bottom-up. Every construction certifies its own
    /// output, so the result has passed verification.
    pub fn materialize(&self) -> Result<Design, ConstructionError> {
        let mut cache = HashMap::new();
        self.run(&mut cache)
    }

    fn run(&self, cache: &mut HashMap<TypeSpec, Design>) -> Result<Design, ConstructionError> {
        let key = self.target.canonical();
        if let Some(d) = cache.get(&key) {
            return Ok(d.clone());
        }
        let mut kids = Vec::with_capacity(self.children.len());
        for c in &self.children {
            kids.push(c.run(cache)?);
        }
        let supply = |from: usize| MapSupplier(kids[from..].to_vec());
        let d = match &self.action {
            Action::Catalog { id } => Catalog::embedded()
                .get(id)
                .ok()
                .and_then(|e| e.design())
                .and_then(Result::ok)
                .ok_or_else(|| ConstructionError::MissingIngredient(self.target.clone()))?,
            Action::Found { design, .. } => (**design).clone(),
            Action::GddWeightOne { id } => {
                let g = Catalog::embedded()
                    .get(id)
                    .ok()
                    .and_then(|e| e.gdd().cloned())
                    .ok_or_else(|| ConstructionError::InvalidInput(format!("no GDD {id}")))?;
                weight_inflate(&g, &vec![1; g.point_count()], &supply(0))?
            }
            Action::TdWeighting { m, k, u } => {
                let (g, w) = td_weighting(*m, *k, *u)?;
                weight_inflate(&g, &w, &supply(0))?
            }
            Action::NineWeighting { u } => {
                let (g, w) = nine_weighting(*u)?;
                weight_inflate(&g, &w, &supply(0))?
            }
            Action::Multiply { m } => multiply(&kids[0], *m as u32)?,
            Action::FillA { h, s, v, w } => fill_holes_a(&kids[0], &supply(1), *h, *s, *v, *w)?,
            Action::FillB { h, s, t, v, w } => fill_holes_b(&kids[0], &supply(1), *h, *s, *t, *v, *w)?,
            Action::FillLong { size } => fill_hole(&kids[0], *size, &kids[1])?,
        };
        if !d.declared_type.same_multiset(&self.target) {
            return Err(ConstructionError::HoleMismatch(format!("recipe for {} produced {}", self.target, d.declared_type)));
        }
        cache.insert(key, d.clone());
        Ok(d)
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_tree(f, 0)
    }
}

/// The weighted TD(6, m) behind an HSD((3m)^4 (3k)^1 u^1).
pub(crate) fn td_weighting(m: u64, k: u64, u: u64) -> Result<(Gdd, Vec<u32>), ConstructionError> {
    if k > m || u % 2 == 1 || u > 4 * m {
        return Err(ConstructionError::InvalidInput(format!("no TD(6,{m}) weighting for k={k}, u={u}")));
    }
    let ms = mols(m as u32, 4).map_err(|e| ConstructionError::InvalidInput(format!("TD(6,{m}): {e}")))?;
    let g = td_from_mols(&ms).to_gdd();
    let m = m as usize;
    let mut w = vec![0u32; 6 * m];
    w[..4 * m].fill(3);
    w[4 * m..4 * m + k as usize].fill(3);
    let (fours, twos) = ((u / 4) as usize, ((u % 4) / 2) as usize);
    w[5 * m..5 * m + fours].fill(4);
    w[5 * m + fours..5 * m + fours + twos].fill(2);
    Ok((g, w))
}

/// The weighted TD(10, 9) behind an HSD(9^9 u^1), `u` even in `18..=36`.
pub(crate) fn nine_weighting(u: u64) -> Result<(Gdd, Vec<u32>), ConstructionError> {
    if u % 2 == 1 || !(18..=36).contains(&u) {
        return Err(ConstructionError::InvalidInput(format!("no TD(10,9) weighting for u={u}")));
    }
    let ms = mols(9, 8).map_err(|e| ConstructionError::InvalidInput(format!("TD(10,9): {e}")))?;
    let g = td_from_mols(&ms).to_gdd();
    let fours = ((u - 18) / 2) as usize;
    let mut w = vec![1u32; 90];
    w[81..81 + fours].fill(4);
    w[81 + fours..].fill(2);
    Ok((g, w))
}

/// Distinct ingredient types a weighting needs, in first-use order.
pub(crate) fn block_types(g: &Gdd, w: &[u32]) -> Vec<TypeSpec> {
    let mut out: Vec<TypeSpec> = Vec::new();
    for b in &g.blocks {
        let t = TypeSpec::from_sizes(b.iter().map(|&x| w[x as usize] as u64));
        if t.hole_count() > 1 && !out.contains(&t) {
            out.push(t);
        }
    }
    out
}
