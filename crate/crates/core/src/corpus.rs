//! The appendix blocks G1, G2, G3 at p = 23 and the three-vertex decorated
//! star whose all-equation system is degenerate, shipped as checksummed
//! JSON fixtures.
//!
//! G1 and G2 are drawn as trees in the source with the bold `1 - 2` edge
//! glued; the fixtures store the glued graphs. G3 is the hexagonal core
//! with branches A, B, C spliced in; branch B's second node labelled 23 is
//! a different vertex from branch A's, so it is stored as `n23b`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_integer::Integer;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::blocks::{validate_block, BuildingBlock};
use crate::format::{parse_block, parse_decorated, FormatError};
use crate::report::{digest_inputs, Check, Report, Witness};
use crate::torus_system::{
    finiteness, validate_decorations, BranchKind, DecoratedBipartiteGraph, DEFAULT_BRANCH_CAP,
};
use crate::TorusKernel;

pub const CORPUS_PRIME: u64 = 23;

struct Fixture {
    name: &'static str,
    file: &'static str,
    text: &'static str,
    sha256: &'static str,
    provenance: &'static str,
}

const FIXTURES: [Fixture; 4] = [
    Fixture {
        name: "G1",
        file: "g1.json",
        text: include_str!("../fixtures/g1.json"),
        sha256: "51ac28ca8c7a787c45384ac3f38248ba9f150a43ee3776fd42851fed9ad21112",
        provenance: "appendix, first figure: 11-cycle of powers of 2, glued along [1-2]",
    },
    Fixture {
        name: "G2",
        file: "g2.json",
        text: include_str!("../fixtures/g2.json"),
        sha256: "d98f86fee4b7642e70a1b2e2d2f4e951de4c722e886af6811313d56550be026e",
        provenance: "appendix, second figure: 15-cycle with pendants 11, 21, 14, glued along [1-2]",
    },
    Fixture {
        name: "G3",
        file: "g3.json",
        text: include_str!("../fixtures/g3.json"),
        sha256: "206837c75f848d0679e962b1305db20bab60639591bd15653a21fdf74409181a",
        provenance: "appendix, third figure: two-centre core with branches A, B, C spliced in",
    },
    Fixture {
        name: "special_star",
        file: "special_star.json",
        text: include_str!("../fixtures/special_star.json"),
        sha256: "dcd9f1acb2aef39320bca8e7fe192992acc378908e01d1b0796bf932af239e37",
        provenance: "decorated example: two reds (k_f = 2, k_inf = 1) on one green (k_l = 10), mu = 5",
    },
];

/// Expected `(edges, first Betti number)` per appendix block.
const BLOCK_SHAPES: [(&str, usize, usize); 3] = [("G1", 11, 1), ("G2", 18, 1), ("G3", 43, 2)];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("fixture `{name}` checksum {found} does not match frozen {expected}")]
    Checksum {
        name: String,
        expected: String,
        found: String,
    },
    #[error("fixture `{name}`: {source}")]
    Format { name: String, source: FormatError },
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusItem {
    Block(BuildingBlock),
    Decorated(DecoratedBipartiteGraph),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub file: String,
    pub provenance: String,
    pub item: CorpusItem,
    /// Fixture text as shipped.
    pub source: String,
}

impl CorpusEntry {
    pub fn block(&self) -> Option<&BuildingBlock> {
        match &self.item {
            CorpusItem::Block(b) => Some(b),
            CorpusItem::Decorated(_) => None,
        }
    }

    pub fn decorated(&self) -> Option<&DecoratedBipartiteGraph> {
        match &self.item {
            CorpusItem::Decorated(d) => Some(d),
            CorpusItem::Block(_) => None,
        }
    }
}

fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Parse one fixture after checking its SHA-256.
pub fn load_fixture(
    name: &str,
    text: &str,
    expected_sha256: &str,
    decorated: bool,
) -> Result<CorpusItem, CorpusError> {
    let found = sha256_hex(text);
    if found != expected_sha256 {
        return Err(CorpusError::Checksum {
            name: name.to_owned(),
            expected: expected_sha256.to_owned(),
            found,
        });
    }
    let wrap = |source| CorpusError::Format {
        name: name.to_owned(),
        source,
    };
    if decorated {
        parse_decorated(text).map(CorpusItem::Decorated).map_err(wrap)
    } else {
        parse_block(text).map(CorpusItem::Block).map_err(wrap)
    }
}

pub fn load_corpus() -> Result<Vec<CorpusEntry>, CorpusError> {
    FIXTURES
        .iter()
        .map(|f| {
            let item = load_fixture(f.name, f.text, f.sha256, f.name == "special_star")?;
            Ok(CorpusEntry {
                name: f.name.to_owned(),
                file: f.file.to_owned(),
                provenance: f.provenance.to_owned(),
                item,
                source: f.text.to_owned(),
            })
        })
        .collect()
}

/// G1, G2, G3 by name. The fixtures are compiled in and checksummed, so a
/// failure here is a build defect.
pub fn standard_blocks() -> &'static [(String, BuildingBlock)] {
    static BLOCKS: OnceLock<Vec<(String, BuildingBlock)>> = OnceLock::new();
    BLOCKS.get_or_init(|| {
        load_corpus()
            .expect("built-in fixtures load")
            .into_iter()
            .filter_map(|e| {
                let name = e.name.clone();
                e.block().cloned().map(|b| (name, b))
            })
            .collect()
    })
}

pub fn block_library() -> BTreeMap<String, BuildingBlock> {
    standard_blocks().iter().cloned().collect()
}

fn shape_checks(name: &str, blk: &BuildingBlock) -> Vec<Check> {
    let Some(&(_, edges, betti)) = BLOCK_SHAPES.iter().find(|s| s.0 == name) else {
        return Vec::new();
    };
    vec![
        Check::from_bool(
            "edge_count",
            blk.edge_count() == edges,
            format!("{} edges (expected {edges})", blk.edge_count()),
        ),
        Check::from_bool(
            "betti",
            blk.betti() == betti,
            format!("first Betti number {} (expected {betti})", blk.betti()),
        ),
    ]
}

fn g1_powers_check(blk: &BuildingBlock) -> Check {
    // walk the cycle from the boundary start towards the boundary end
    let g = blk.graph();
    let f = blk.labeling().field();
    let (start, next) = blk.boundary();
    let mut prev = g.index_of(start).expect("boundary exists");
    let mut cur = g.index_of(next).expect("boundary exists");
    let mut walk = vec![blk.labeling().get(prev)];
    while cur != g.index_of(start).expect("boundary exists") && walk.len() <= g.vertex_count() {
        walk.push(blk.labeling().get(cur));
        let step = g.neighbor_indices(cur).find(|&w| w != prev);
        prev = cur;
        match step {
            Some(w) => cur = w,
            None => break,
        }
    }
    let expected: Vec<u64> = (0..g.vertex_count() as u64).map(|i| f.pow(2, i)).collect();
    let detail = format!("cyclic values {walk:?}");
    Check::from_bool("powers_of_two", walk == expected, detail)
}

fn g2_branch_check(blk: &BuildingBlock) -> Check {
    let g = blk.graph();
    let lam = blk.labeling();
    let mut found: Vec<(u64, u64)> = (0..g.vertex_count())
        .filter(|&i| g.degree(i) == 3)
        .filter_map(|i| {
            g.neighbor_indices(i)
                .find(|&w| g.degree(w) == 1)
                .map(|w| (lam.get(i), lam.get(w)))
        })
        .collect();
    found.sort_unstable();
    let expected = vec![(6, 14), (8, 11), (9, 21)];
    Check::from_bool(
        "branch_vertices",
        found == expected,
        format!("degree-3 vertices with pendant values {found:?}"),
    )
}

fn block_checks(name: &str, blk: &BuildingBlock) -> Vec<Check> {
    let mut checks: Vec<Check> = validate_block(blk)
        .into_iter()
        .map(|mut c| {
            // the corpus promises the adjacency condition outright
            if c.name == "no_adjacent_trivalent" {
                c.advisory = false;
            }
            c
        })
        .collect();
    checks.extend(shape_checks(name, blk));
    match name {
        "G1" => checks.push(g1_powers_check(blk)),
        "G2" => checks.push(g2_branch_check(blk)),
        _ => {}
    }
    checks.into_iter().map(|c| c.scoped(name)).collect()
}

fn decorated_checks(name: &str, d: &DecoratedBipartiteGraph) -> Vec<Check> {
    let mut checks = Vec::new();
    let violations = validate_decorations(d);
    checks.push(if violations.is_empty() {
        Check::pass("weights", "deg_mu = 2 k_f + k_inf at reds and k_l at greens")
    } else {
        let witnesses = violations
            .iter()
            .map(|v| Witness::Vertex {
                vertex: v.vertex.clone(),
                detail: v.to_string(),
            })
            .collect();
        Check::fail("weights", "weight constraints violated", witnesses)
    });
    match finiteness(d, DEFAULT_BRANCH_CAP) {
        Ok(outcomes) => {
            let all_eq = outcomes
                .iter()
                .find(|o| o.branch.values().all(|&k| k == BranchKind::Equation));
            match all_eq {
                Some(o) => {
                    let detail = format!("all-equation system: rank {} of {}, {}", o.rank, o.unknowns, o.kernel);
                    let infinite = matches!(o.kernel, TorusKernel::Infinite { .. });
                    checks.push(if infinite && o.rank < o.unknowns {
                        Check::pass("all_equation_infinite", detail)
                    } else {
                        Check::fail(
                            "all_equation_infinite",
                            detail.clone(),
                            vec![Witness::Value { detail }],
                        )
                    });
                }
                None => checks.push(Check::from_bool("all_equation_infinite", false, "no all-equation pattern")),
            }
        }
        Err(e) => checks.push(Check::from_bool("all_equation_infinite", false, e.to_string())),
    }
    checks.into_iter().map(|c| c.scoped(name)).collect()
}

/// Every corpus check on the given entries. Exposed separately from
/// [`verify_corpus`] so mutated entries can be fed through it.
pub fn verify_entries(entries: &[CorpusEntry]) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut boundary_values = Vec::new();
    for e in entries {
        match &e.item {
            CorpusItem::Block(b) => {
                checks.extend(block_checks(&e.name, b));
                boundary_values.push((e.name.clone(), b.a(), b.b()));
            }
            CorpusItem::Decorated(d) => checks.extend(decorated_checks(&e.name, d)),
        }
    }
    let shared = boundary_values.iter().all(|&(_, a, b)| (a, b) == (1, 2));
    let witnesses = boundary_values
        .iter()
        .filter(|&&(_, a, b)| (a, b) != (1, 2))
        .map(|(n, a, b)| Witness::Value {
            detail: format!("{n} has (a, b) = ({a}, {b})"),
        })
        .collect();
    checks.push(if shared {
        Check::pass("shared_boundary_values", "every block has (a, b) = (1, 2)")
    } else {
        Check::fail("shared_boundary_values", "blocks disagree on (a, b)", witnesses)
    });
    let edge = |n: &str| {
        entries
            .iter()
            .find(|e| e.name == n)
            .and_then(CorpusEntry::block)
            .map(BuildingBlock::edge_count)
    };
    if let (Some(e1), Some(e2)) = (edge("G1"), edge("G2")) {
        checks.push(Check::from_bool(
            "coprime_edge_counts",
            e1.gcd(&e2) == 1,
            format!("gcd({e1}, {e2}) = {}", e1.gcd(&e2)),
        ));
    }
    checks
}

pub fn verify_corpus() -> Report {
    match load_corpus() {
        Ok(entries) => {
            let mut report = Report::new(
                "appendix verify",
                digest_inputs(entries.iter().map(|e| e.source.as_bytes())),
            );
            report.extend(verify_entries(&entries));
            report
        }
        Err(e) => {
            let mut report = Report::new("appendix verify", digest_inputs([b""]));
            report.push(Check::from_bool("load", false, e.to_string()));
            report
        }
    }
}
