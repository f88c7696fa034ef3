use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use elliptic_blocks::algebra::nullspace_mod_p;
use elliptic_blocks::blocks::{
    block_is_valid, insert, BlockError, make_h, plan, rational_checks, replay, search,
    validate_block, validate_labeled, PlanOutcome, SearchConstraints,
};
use elliptic_blocks::corpus::{block_library, load_corpus, verify_corpus};
use elliptic_blocks::format::{
    self, parse_branches, parse_decorated, parse_open_block, serialize_block, serialize_graph,
    serialize_open_block, GraphFile,
};
use elliptic_blocks::laplacian::eigen_matrix;
use elliptic_blocks::report::{digest_inputs, Check, Report, Witness};
use elliptic_blocks::torus_system::{
    finiteness, finiteness_for, reduce_to_gprime, validate_decorations, BranchOutcome,
    DEFAULT_BRANCH_CAP,
};
use elliptic_blocks::{TorusKernel, VertexId};

use crate::error::InputError;

/// Exact checks and surgery for graphs carrying 5/3 eigenvectors over F_p.
///
/// Exit status: 0 success, 1 a check failed (the report names a witness),
/// 2 unreadable or invalid input.
#[derive(Debug, Parser)]
#[command(name = "elliptic-blocks", version)]
pub struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Built-in appendix blocks and the decorated example.
    #[command(subcommand)]
    Appendix(AppendixCommand),
    /// Validate a labeled graph or block file.
    Check {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        prime: u64,
    },
    /// Basis of the F_p solutions of the 5/3 system.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        prime: u64,
    },
    /// Does the 5/3 system have only the zero solution over Q?
    RationalCheck {
        #[arg(long)]
        graph: PathBuf,
    },
    /// FINITE/INFINITE solution counts of a decorated graph's torus system.
    Finiteness {
        #[arg(long)]
        decorated: PathBuf,
        /// JSON object mapping each green vertex to "equation" or 1..25.
        #[arg(long)]
        branches: Option<PathBuf>,
        /// Refuse to enumerate more branch patterns than this.
        #[arg(long, default_value_t = DEFAULT_BRANCH_CAP)]
        cap: usize,
    },
    /// Suppress the red vertices of a decorated graph.
    Reduce {
        #[arg(long)]
        decorated: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Cut a block open along its boundary edge.
    MakeH {
        #[arg(long)]
        block: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Splice an open block into a host edge.
    Insert {
        #[arg(long)]
        host: PathBuf,
        /// Host edge as `u,v`.
        #[arg(long)]
        site: String,
        #[arg(long)]
        h: PathBuf,
        /// Prefix for the inserted vertex ids.
        #[arg(long, default_value = "h")]
        tag: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Plan a block composition with a given edge count and genus.
    Plan {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        genus: usize,
        /// Also execute the plan and validate the result.
        #[arg(long)]
        replay: bool,
    },
    /// Look for new blocks.
    Search {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        max_vertices: usize,
        #[arg(long, env = "ELLIPTIC_BLOCKS_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        cycles_only: bool,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long)]
        max_results: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum AppendixCommand {
    /// Re-verify every built-in fixture.
    Verify,
    /// Write the fixtures out.
    Export {
        /// Only this fixture (G1, G2, G3, special_star).
        #[arg(long)]
        name: Option<String>,
        /// Directory to write into; without it the fixture goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Write the resulting file here and print a report instead.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub enum Output {
    Report(Report),
    File(String),
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError::new("io", format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), InputError> {
    fs::write(path, text).map_err(|e| InputError::new("io", format!("{}: {e}", path.display())))
}

fn emit(command: &str, digest: String, text: String, out: &OutArg) -> Result<Output, InputError> {
    match &out.out {
        None => Ok(Output::File(text)),
        Some(path) => {
            write(path, &text)?;
            let mut report = Report::new(command, digest);
            report.push(Check::pass("written", path.display().to_string()));
            Ok(Output::Report(report))
        }
    }
}

pub fn run(cli: Cli) -> Result<Output, InputError> {
    match cli.command {
        Command::Appendix(AppendixCommand::Verify) => Ok(Output::Report(verify_corpus())),
        Command::Appendix(AppendixCommand::Export { name, out }) => export(name, out),
        Command::Check { graph, prime } => check(&graph, prime),
        Command::Solve { graph, prime } => solve(&graph, prime),
        Command::RationalCheck { graph } => rational(&graph),
        Command::Finiteness {
            decorated,
            branches,
            cap,
        } => finite(&decorated, branches.as_deref(), cap),
        Command::Reduce { decorated, out } => {
            let text = read(&decorated)?;
            let d = parse_decorated(&text)?;
            let g = reduce_to_gprime(&d)?;
            emit("reduce", digest_inputs([&text]), serialize_graph(&g), &out)
        }
        Command::MakeH { block, out } => {
            let text = read(&block)?;
            let blk = format::parse_block(&text)?;
            let h = make_h(&blk)?;
            emit("make-h", digest_inputs([&text]), serialize_open_block(&h), &out)
        }
        Command::Insert {
            host,
            site,
            h,
            tag,
            out,
        } => {
            let host_text = read(&host)?;
            let h_text = read(&h)?;
            let host = format::parse_block(&host_text)?;
            let h = parse_open_block(&h_text)?;
            let (u, v) = parse_site(&site)?;
            let digest = digest_inputs([host_text.as_str(), h_text.as_str(), site.as_str(), tag.as_str()]);
            match insert(&host, (&u, &v), &h, &tag) {
                Ok(result) => emit("insert", digest, serialize_block(&result), &out),
                Err(BlockError::PostVerification { check, detail }) => {
                    let mut report = Report::new("insert", digest);
                    let witness = Witness::Value {
                        detail: detail.clone(),
                    };
                    report.push(Check::fail(format!("post_insertion.{check}"), detail, vec![witness]));
                    Ok(Output::Report(report))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Plan {
            degree,
            genus,
            replay,
        } => plan_cmd(degree, genus, replay),
        Command::Search {
            prime,
            max_vertices,
            seed,
            cycles_only,
            samples,
            max_results,
        } => {
            let constraints = SearchConstraints {
                cycles_only,
                samples,
                max_results,
                ..SearchConstraints::default()
            };
            search_cmd(prime, max_vertices, seed, &constraints)
        }
    }
}

fn parse_site(site: &str) -> Result<(VertexId, VertexId), InputError> {
    match site.split_once(',') {
        Some((u, v)) if !u.trim().is_empty() && !v.trim().is_empty() => {
            Ok((VertexId::new(u.trim()), VertexId::new(v.trim())))
        }
        _ => Err(InputError::new("bad-site", format!("expected `u,v`, got `{site}`"))),
    }
}

fn export(name: Option<String>, out: Option<PathBuf>) -> Result<Output, InputError> {
    let entries = load_corpus()?;
    let selected: Vec<_> = entries
        .iter()
        .filter(|e| name.as_ref().map_or(true, |n| &e.name == n))
        .collect();
    if selected.is_empty() {
        return Err(InputError::new(
            "unknown-fixture",
            format!("no fixture named `{}`", name.unwrap_or_default()),
        ));
    }
    match out {
        None if selected.len() == 1 => Ok(Output::File(selected[0].source.clone())),
        None => Err(InputError::new(
            "missing-out",
            "exporting several fixtures needs --out DIR (or pick one with --name)",
        )),
        Some(dir) => {
            fs::create_dir_all(&dir)
                .map_err(|e| InputError::new("io", format!("{}: {e}", dir.display())))?;
            let mut report = Report::new(
                "appendix export",
                digest_inputs(selected.iter().map(|e| e.source.as_bytes())),
            );
            for e in selected {
                let path = dir.join(&e.file);
                write(&path, &e.source)?;
                report.push(Check::pass(format!("{}.written", e.name), e.file.clone()));
            }
            Ok(Output::Report(report))
        }
    }
}

fn with_prime(text: &str, prime: u64) -> Result<GraphFile, InputError> {
    let mut file = GraphFile::parse(text)?;
    match file.prime {
        Some(p) if p != prime => Err(InputError::new(
            "prime-mismatch",
            format!("file declares prime {p} but --prime is {prime}"),
        )),
        _ => {
            file.prime = Some(prime);
            Ok(file)
        }
    }
}

fn check(path: &Path, prime: u64) -> Result<Output, InputError> {
    let text = read(path)?;
    let file = with_prime(&text, prime)?;
    let mut report = Report::new("check", digest_inputs([text.as_str(), &prime.to_string()]));
    if file.boundary_edge.is_some() {
        let blk = format::block_from_file(&file)?;
        report.extend(validate_block(&blk));
    } else {
        let g = file.graph()?;
        let lam = file.modular_labeling()?;
        report.extend(validate_labeled(&g, &lam));
    }
    Ok(Output::Report(report))
}

fn solve(path: &Path, prime: u64) -> Result<Output, InputError> {
    let text = read(path)?;
    let g = format::parse_graph(&text)?;
    let basis = nullspace_mod_p(&eigen_matrix(&g), prime)
        .map_err(|e| InputError::new("invalid-prime", e))?;
    let mut report = Report::new("solve", digest_inputs([text.as_str(), &prime.to_string()]));
    report.push(Check::pass(
        "nullspace",
        format!("{}-dimensional solution space mod {prime}", basis.len()),
    ));
    Ok(Output::Report(report.with_data(json!({
        "prime": prime,
        "vertices": g.ids(),
        "dimension": basis.len(),
        "basis": basis,
    }))))
}

fn rational(path: &Path) -> Result<Output, InputError> {
    let text = read(path)?;
    let g = format::parse_graph(&text)?;
    if !g.is_unit_weight() {
        return Err(InputError::new("non-unit-weights", "rational-check needs mu = 1 on every edge"));
    }
    let mut report = Report::new("rational-check", digest_inputs([&text]));
    report.extend(rational_checks(&g));
    Ok(Output::Report(report))
}

fn outcome_summary(outcomes: &[BranchOutcome]) -> String {
    let finite = outcomes.iter().filter(|o| o.kernel.is_finite()).count();
    format!(
        "{} branch pattern(s): {finite} FINITE, {} INFINITE",
        outcomes.len(),
        outcomes.len() - finite
    )
}

fn finite(path: &Path, branches: Option<&Path>, cap: usize) -> Result<Output, InputError> {
    let text = read(path)?;
    let d = parse_decorated(&text)?;
    let branch_text = branches.map(read).transpose()?;
    let mut inputs = vec![text.clone()];
    inputs.extend(branch_text.clone());
    let mut report = Report::new("finiteness", digest_inputs(&inputs));

    let violations = validate_decorations(&d);
    if !violations.is_empty() {
        let witnesses = violations
            .iter()
            .map(|v| Witness::Vertex {
                vertex: v.vertex.clone(),
                detail: v.to_string(),
            })
            .collect();
        report.push(Check::fail("weights", "weight constraints violated", witnesses));
        return Ok(Output::Report(report));
    }
    report.push(Check::pass("weights", "deg_mu = 2 k_f + k_inf at reds and k_l at greens"));

    let outcomes = match branch_text {
        Some(bt) => vec![finiteness_for(&d, &parse_branches(&bt, &d)?)?],
        None => finiteness(&d, cap)?,
    };
    report.push(Check::pass("finiteness", outcome_summary(&outcomes)));
    let data = json!({
        "outcomes": outcomes,
        "all_finite": outcomes.iter().all(|o| matches!(o.kernel, TorusKernel::Finite { .. })),
    });
    Ok(Output::Report(report.with_data(data)))
}

fn plan_cmd(degree: usize, genus: usize, do_replay: bool) -> Result<Output, InputError> {
    let outcome = plan(degree, genus)?;
    let mut report = Report::new(
        "plan",
        digest_inputs([degree.to_string(), genus.to_string()]),
    );
    match &outcome {
        PlanOutcome::Unreachable { reason, .. } => {
            report.push(Check::fail(
                "reachable",
                format!("UNREACHABLE: no composition has {degree} edges and genus {genus}"),
                vec![Witness::Value {
                    detail: reason.clone(),
                }],
            ));
        }
        PlanOutcome::Plan(p) => {
            report.push(Check::pass(
                "reachable",
                format!("base {} plus {} insertion(s)", p.base, p.steps.len()),
            ));
            if do_replay {
                let built = replay(p, &block_library())?;
                report.push(Check::from_bool(
                    "replay.edges",
                    built.edge_count() == degree,
                    format!("{} edges", built.edge_count()),
                ));
                report.push(Check::from_bool(
                    "replay.betti",
                    built.betti() == genus,
                    format!("first Betti number {}", built.betti()),
                ));
                report.extend(validate_block(&built).into_iter().map(|c| c.scoped("replay")));
            }
        }
    }
    let data = serde_json::to_value(&outcome).expect("plans serialize");
    Ok(Output::Report(report.with_data(data)))
}

fn search_cmd(
    prime: u64,
    max_vertices: usize,
    seed: u64,
    constraints: &SearchConstraints,
) -> Result<Output, InputError> {
    let found = search(prime, max_vertices, constraints, seed)?;
    let mut report = Report::new(
        "search",
        digest_inputs([
            prime.to_string(),
            max_vertices.to_string(),
            seed.to_string(),
            format!("{constraints:?}"),
        ]),
    );
    debug_assert!(found.iter().all(block_is_valid));
    report.push(Check::pass(
        "search",
        format!("{} block(s) with at most {max_vertices} vertices mod {prime}", found.len()),
    ));
    let blocks: Vec<Value> = found
        .iter()
        .map(|b| serde_json::from_str(&serialize_block(b)).expect("block json"))
        .collect();
    Ok(Output::Report(report.with_data(json!({ "blocks": blocks }))))
}
