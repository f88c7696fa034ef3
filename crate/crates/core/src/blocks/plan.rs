//! Choosing which blocks to splice together to hit a target edge count and
//! first Betti number.
//!
//! Blocks with one loop contribute their edge count and no genus; a block
//! with two loops contributes its edge count and one unit of genus. Hitting
//! `(d, g)` is then a coin problem on the one-loop edge counts once the
//! `g - 1` two-loop insertions are subtracted.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{insert, make_h, BlockError, BuildingBlock, OpenBlock};
use crate::graph::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("genus must be at least 1")]
    GenusZero,
    #[error("catalog has no block with first Betti number {0}")]
    MissingBlock(usize),
    #[error("unknown block `{0}`")]
    UnknownBlock(String),
    #[error(transparent)]
    Block(#[from] BlockError),
}

/// What the planner needs to know about a block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub edges: usize,
    pub betti: usize,
    pub boundary: [VertexId; 2],
}

impl CatalogEntry {
    pub fn from_block(name: impl Into<String>, blk: &BuildingBlock) -> Self {
        let (v, w) = blk.boundary();
        CatalogEntry {
            name: name.into(),
            edges: blk.edge_count(),
            betti: blk.betti(),
            boundary: [v.clone(), w.clone()],
        }
    }
}

/// G1, G2, G3 from the built-in corpus.
pub fn standard_catalog() -> Vec<CatalogEntry> {
    crate::corpus::standard_blocks()
        .iter()
        .map(|(name, blk)| CatalogEntry::from_block(name.clone(), blk))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanStep {
    pub tag: String,
    pub site: [VertexId; 2],
    pub block: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionPlan {
    pub degree: usize,
    pub genus: usize,
    pub base: String,
    pub steps: Vec<PlanStep>,
    /// Frobenius number of the one-loop edge counts plus one, plus a full
    /// two-loop block per unit of genus: `43g + 170` for the standard blocks.
    pub stated_bound: i64,
    /// The same count with `g - 1` two-loop blocks, which is what the
    /// construction actually needs: `43(g - 1) + 170`.
    pub construction_bound: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PlanOutcome {
    Plan(ConstructionPlan),
    Unreachable {
        degree: usize,
        genus: usize,
        reason: String,
    },
}

impl PlanOutcome {
    pub fn plan(&self) -> Option<&ConstructionPlan> {
        match self {
            PlanOutcome::Plan(p) => Some(p),
            PlanOutcome::Unreachable { .. } => None,
        }
    }
}

/// Largest integer not a non-negative combination of `denoms`; `None` when
/// their gcd is not 1 (infinitely many gaps), `-1` when nothing is missing.
pub fn frobenius_number(denoms: &[usize]) -> Option<i64> {
    let g = denoms.iter().fold(0usize, |acc, &d| acc.gcd(&d));
    if g != 1 {
        return None;
    }
    let min = *denoms.iter().filter(|&&d| d > 0).min()?;
    let mut reachable = vec![true];
    let mut last_gap: i64 = -1;
    let mut run = 0;
    let mut n = 0usize;
    while run < min {
        n += 1;
        let ok = denoms.iter().any(|&d| d > 0 && d <= n && reachable[n - d]);
        reachable.push(ok);
        if ok {
            run += 1;
        } else {
            run = 0;
            last_gap = n as i64;
        }
    }
    Some(last_gap)
}

/// Fewest pieces summing to `target`, as counts per denomination. Ties go
/// to the earlier denomination.
fn fewest_pieces(denoms: &[usize], target: usize) -> Option<Vec<usize>> {
    let mut best: Vec<Option<(usize, usize)>> = vec![None; target + 1];
    best[0] = Some((0, usize::MAX));
    for s in 1..=target {
        for (k, &d) in denoms.iter().enumerate() {
            if d == 0 || d > s {
                continue;
            }
            if let Some((c, _)) = best[s - d] {
                if best[s].map_or(true, |(bc, _)| c + 1 < bc) {
                    best[s] = Some((c + 1, k));
                }
            }
        }
    }
    best[target]?;
    let mut counts = vec![0; denoms.len()];
    let mut s = target;
    while s > 0 {
        let (_, k) = best[s].expect("reconstructible");
        counts[k] += 1;
        s -= denoms[k];
    }
    Some(counts)
}

pub fn plan(d: usize, g: usize) -> Result<PlanOutcome, PlanError> {
    plan_with(d, g, &standard_catalog())
}

pub fn plan_with(d: usize, g: usize, catalog: &[CatalogEntry]) -> Result<PlanOutcome, PlanError> {
    if g == 0 {
        return Err(PlanError::GenusZero);
    }
    let cyclic: Vec<&CatalogEntry> = catalog.iter().filter(|e| e.betti == 1).collect();
    if cyclic.is_empty() {
        return Err(PlanError::MissingBlock(1));
    }
    let handle = catalog.iter().find(|e| e.betti == 2);
    let handle_edges = handle.map_or(0, |h| h.edges);
    if g > 1 && handle.is_none() {
        return Err(PlanError::MissingBlock(2));
    }

    let edge_counts: Vec<usize> = cyclic.iter().map(|e| e.edges).collect();
    let slack = frobenius_number(&edge_counts).map_or(i64::MAX / 4, |f| f + 1);
    let stated_bound = (handle_edges * g) as i64 + slack;
    let construction_bound = (handle_edges * (g - 1)) as i64 + slack;

    let unreachable = |reason: String| {
        Ok(PlanOutcome::Unreachable {
            degree: d,
            genus: g,
            reason,
        })
    };
    let Some(rest) = d.checked_sub(handle_edges * (g - 1)).filter(|&r| r > 0) else {
        return unreachable(format!(
            "{d} edges leave no room for a base block after {} two-loop insertion(s)",
            g - 1
        ));
    };
    let Some(counts) = fewest_pieces(&edge_counts, rest) else {
        return unreachable(format!("{rest} is not a sum of {edge_counts:?}"));
    };

    let mut pieces: Vec<&CatalogEntry> = Vec::new();
    for (k, &c) in counts.iter().enumerate() {
        pieces.extend(std::iter::repeat(cyclic[k]).take(c));
    }
    if let Some(h) = handle {
        pieces.extend(std::iter::repeat(h).take(g - 1));
    }
    let base = pieces.remove(0);
    let anchor = base.boundary[0].clone();
    let mut current = base.boundary[1].clone();
    let mut steps = Vec::with_capacity(pieces.len());
    for (k, entry) in pieces.into_iter().enumerate() {
        let tag = format!("s{}", k + 1);
        steps.push(PlanStep {
            tag: tag.clone(),
            site: [anchor.clone(), current.clone()],
            block: entry.name.clone(),
        });
        current = VertexId::new(format!("{tag}/{}", entry.boundary[1]));
    }
    Ok(PlanOutcome::Plan(ConstructionPlan {
        degree: d,
        genus: g,
        base: base.name.clone(),
        steps,
        stated_bound,
        construction_bound,
    }))
}

/// Execute a plan against named blocks. Every insertion re-checks the
/// local block conditions.
pub fn replay(
    plan: &ConstructionPlan,
    library: &BTreeMap<String, BuildingBlock>,
) -> Result<BuildingBlock, PlanError> {
    let get = |name: &String| {
        library
            .get(name)
            .ok_or_else(|| PlanError::UnknownBlock(name.clone()))
    };
    let mut opened: BTreeMap<&String, OpenBlock> = BTreeMap::new();
    let mut current = get(&plan.base)?.clone();
    for step in &plan.steps {
        if !opened.contains_key(&step.block) {
            opened.insert(&step.block, make_h(get(&step.block)?)?);
        }
        let h = &opened[&step.block];
        current = insert(&current, (&step.site[0], &step.site[1]), h, &step.tag)?;
    }
    Ok(current)
}
