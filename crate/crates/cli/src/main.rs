use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use sgflow::certificate::{sha256_hex, Certificate, Claim, FlowWitness};
use sgflow::corpus::{generate, CorpusSpec};
use sgflow::flowfile::parse_flow_file;
use sgflow::harness::{run_suite, Suite, SuiteConfig};
use sgflow::solve::{circular_flow_number_with, find_nz_k_flow_with, find_nz_zk_flow_with};
use sgflow::structure::{find_long_barbell_with, has_star_cut, is_flow_admissible, AdmissibilityReason};
use sgflow::transform::{
    decompose_into_2_flows_with, eulerian_decompose_with, modflow_to_intflow_with, normalize_circular_flow_with,
    ConversionOptions,
};
use sgflow::{is_balanced, Error, FlowAssignment, FlowKind, Limits, SignedGraph};

/// Exact flow computations on signed graphs.
#[derive(Parser)]
#[command(name = "sgflow", version)]
struct Cli {
    /// Overrides the search node, circuit and ditrail caps.
    #[arg(long, global = true, env = "SG_RESOURCE_CAP")]
    resource_cap: Option<u64>,

    /// Seed for randomized generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Directory for JSON artifacts; `index.json` lists its contents.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Balance, admissibility, bridges, barbells and star-cuts.
    Analyze { graph: PathBuf },
    /// Find a nowhere-zero flow or certify that none exists.
    Flow {
        graph: PathBuf,
        #[command(flatten)]
        kind: FlowArgs,
    },
    /// Turn a Z_k-flow into a congruent integer k-flow.
    Convert {
        graph: PathBuf,
        flow: PathBuf,
        #[arg(long)]
        k: u32,
        /// Allow even k; the run may end without a flow.
        #[arg(long)]
        experimental_even_k: bool,
    },
    /// Split a k-flow into 2-flows, or an eulerian graph into circuits.
    Decompose {
        graph: PathBuf,
        #[arg(required_unless_present = "eulerian")]
        flow: Option<PathBuf>,
        #[arg(long, required_unless_present = "eulerian")]
        k: Option<u32>,
        #[arg(long, conflicts_with_all = ["flow", "k"])]
        eulerian: bool,
    },
    /// Move a circular (p/q + 1)-flow onto the 1/q grid.
    Normalize {
        graph: PathBuf,
        flow: PathBuf,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
    },
    /// Write corpus graphs.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Run a theorem suite over the enumerated corpus.
    Verify {
        /// six-flow, mod-int-equiv, conversion, two-flow-sum, eulerian-decomp,
        /// phi-equality, cubic-z4 or even-k-experimental
        suite: String,
        #[arg(long, default_value_t = 5)]
        max_v: usize,
        #[arg(long, default_value_t = 8)]
        max_e: usize,
        /// Comma-separated k values (suite default if omitted).
        #[arg(long, value_delimiter = ',')]
        k: Vec<u32>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Re-verify a certificate.
    Check { certificate: PathBuf },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FlowArgs {
    /// Integer k-flow.
    #[arg(long)]
    k: Option<u32>,
    /// Z_k-flow.
    #[arg(long)]
    modulo: Option<u32>,
    /// Circular flow number.
    #[arg(long)]
    circular: bool,
}

#[derive(Subcommand)]
enum Family {
    Petersen,
    GFamily {
        #[arg(long)]
        t: usize,
    },
    W5,
    Enumerate {
        #[arg(long)]
        max_v: usize,
        #[arg(long)]
        max_e: usize,
    },
    /// Uses the global `--seed`.
    Random {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        e: usize,
        #[arg(long, default_value_t = 0.5)]
        neg_prob: f64,
    },
}

/// 0 success, 2 precondition, 3 resource cap, 4 invariant violation, 5 IO
/// or parse error.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::InvalidParameter(_))
        | Some(Error::Precondition(_))
        | Some(Error::NotCubic)
        | Some(Error::NotFlowAdmissible)
        | Some(Error::LongBarbell) => 2,
        Some(Error::ResourceCap { .. }) => 3,
        Some(Error::InvariantViolation(_)) => 4,
        Some(Error::Parse { .. })
        | Some(Error::UnknownVertex(_))
        | Some(Error::UnknownEdge(_))
        | Some(Error::InvalidWitness(_))
        | None => 5,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn limits(cli: &Cli) -> Limits {
    let mut l = Limits::default();
    if let Some(cap) = cli.resource_cap {
        l.search_nodes = cap;
        l.circuits = cap;
        l.ditrail_states = cap;
    }
    l
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path) -> anyhow::Result<SignedGraph> {
    Ok(SignedGraph::parse(&read(path)?)?)
}

fn read_flow(g: &SignedGraph, path: &Path) -> anyhow::Result<FlowAssignment> {
    Ok(parse_flow_file(g, &read(path)?)?)
}

/// Writes `name` into the output directory and rebuilds `index.json`.
fn write_artifact(dir: &Path, name: &str, contents: &str) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    let mut entries = Vec::new();
    collect(dir, dir, &mut entries)?;
    entries.sort_by(|a: &Value, b: &Value| a["path"].as_str().cmp(&b["path"].as_str()));
    let index = json!({ "artifacts": entries });
    fs::write(dir.join("index.json"), serde_json::to_string_pretty(&index)? + "\n")?;
    Ok(())
}

fn collect(root: &Path, dir: &Path, out: &mut Vec<Value>) -> anyhow::Result<()> {
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            collect(root, &path, out)?;
            continue;
        }
        let rel = path.strip_prefix(root)?.to_string_lossy().replace('\\', "/");
        if rel == "index.json" {
            continue;
        }
        let text = fs::read_to_string(&path)?;
        out.push(json!({ "path": rel, "sha256": sha256_hex(&text) }));
    }
    Ok(())
}

fn emit(cli: &Cli, name: &str, value: &str) -> anyhow::Result<()> {
    println!("{value}");
    if let Some(dir) = &cli.out {
        write_artifact(dir, name, &format!("{value}\n"))?;
    }
    Ok(())
}

fn emit_certificate(cli: &Cli, g: &SignedGraph, claim: Claim) -> anyhow::Result<u8> {
    let kind = claim.kind();
    let cert = Certificate::issue(g, claim, &limits(cli))?;
    if !cert.verdict.holds {
        bail!(Error::InvariantViolation(format!("issued certificate does not hold: {}", cert.verdict.detail)));
    }
    emit(cli, &format!("{kind}.json"), &cert.to_json())?;
    Ok(0)
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    let limits = limits(cli);
    match &cli.command {
        Command::Analyze { graph } => {
            let g = read_graph(graph)?;
            let admissibility = is_flow_admissible(&g);
            let reason = match admissibility.failure() {
                None => "admissible".to_string(),
                Some(AdmissibilityReason::EquivalentToOneNegativeEdge { .. }) => {
                    "exactly one negative edge after switching".to_string()
                }
                Some(AdmissibilityReason::BadCutEdge { .. }) => "a bridge leaves a balanced side".to_string(),
                Some(AdmissibilityReason::Ok) => unreachable!(),
            };
            let report = json!({
                "vertices": g.num_vertices(),
                "edges": g.num_edges(),
                "negative_edges": g.num_negative(),
                "negative_parity": if g.num_negative() % 2 == 0 { "even" } else { "odd" },
                "balance": is_balanced(&g),
                "admissible": admissibility.admissible,
                "admissibility_reason": reason,
                "admissibility": admissibility,
                "bridges": g.find_bridges(),
                "long_barbell": find_long_barbell_with(&g, &limits)?,
                "star_cut": has_star_cut(&g),
                "eulerian": g.is_eulerian(),
                "components": g.connected_components().len(),
            });
            emit(cli, "analysis.json", &serde_json::to_string_pretty(&report)?)?;
            Ok(0)
        }
        Command::Flow { graph, kind } => {
            let g = read_graph(graph)?;
            let claim = if kind.circular {
                let (value, flow) = circular_flow_number_with(&g, &limits)?;
                Claim::CircularFlowNumber {
                    value: sgflow::flow::format_rational(&value),
                    witness: FlowWitness::from_flow(&g, &flow)?,
                }
            } else {
                let (flow_kind, found) = match (kind.k, kind.modulo) {
                    (Some(k), _) => (FlowKind::Integer { k }, find_nz_k_flow_with(&g, k, &limits)?),
                    (_, Some(k)) => (FlowKind::Modulo { k }, find_nz_zk_flow_with(&g, k, &limits)?),
                    _ => unreachable!("clap enforces one flow kind"),
                };
                match found {
                    Some(f) => Claim::Flow { flow_kind, witness: FlowWitness::from_flow(&g, &f)? },
                    None => Claim::Nonexistence { flow_kind },
                }
            };
            emit_certificate(cli, &g, claim)
        }
        Command::Convert { graph, flow, k, experimental_even_k } => {
            let g = read_graph(graph)?;
            let z = read_flow(&g, flow)?;
            let options = ConversionOptions { experimental_even_k: *experimental_even_k, ..Default::default() };
            let report = modflow_to_intflow_with(&g, &z, *k, options, &limits)?;
            match report.flow {
                Some(f) => emit_certificate(
                    cli,
                    &g,
                    Claim::Conversion {
                        k: *k,
                        input: FlowWitness::from_flow(&g, &z)?,
                        output: FlowWitness::from_flow(&g, &f)?,
                        switch_journal: report.switch_log,
                        minus_journal: report.minus_log,
                    },
                ),
                None => {
                    let out = json!({
                        "kind": "conversion-stuck",
                        "k": k,
                        "reason": report.stuck,
                        "stats": report.stats,
                    });
                    emit(cli, "conversion-stuck.json", &serde_json::to_string_pretty(&out)?)?;
                    Ok(0)
                }
            }
        }
        Command::Decompose { graph, flow, k, eulerian } => {
            let g = read_graph(graph)?;
            if *eulerian {
                let d = eulerian_decompose_with(&g, &limits)?;
                return emit_certificate(cli, &g, Claim::EulerianDecomposition { members: d.members });
            }
            let (flow, k) = (flow.as_ref().expect("clap"), k.expect("clap"));
            let f = read_flow(&g, flow)?.folded_positive();
            let parts = decompose_into_2_flows_with(&g, &f, k, &limits)?;
            let parts = parts.iter().map(|p| FlowWitness::from_flow(&g, p)).collect::<Result<_, _>>()?;
            emit_certificate(cli, &g, Claim::TwoFlowDecomposition { k, input: FlowWitness::from_flow(&g, &f)?, parts })
        }
        Command::Normalize { graph, flow, p, q } => {
            let g = read_graph(graph)?;
            let f = read_flow(&g, flow)?.folded_positive();
            let state = normalize_circular_flow_with(&g, &f, *p, *q, &limits)?;
            emit_certificate(
                cli,
                &g,
                Claim::Normalization {
                    p: *p,
                    q: *q,
                    input: FlowWitness::from_flow(&g, &f)?,
                    output: FlowWitness::from_flow(&g, &state.flow())?,
                    off_grid: state.off_grid,
                },
            )
        }
        Command::Generate { family } => {
            let spec = match family {
                Family::Petersen => CorpusSpec::Petersen,
                Family::GFamily { t } => CorpusSpec::GFamily { t: *t },
                Family::W5 => CorpusSpec::W5AllSignatures,
                Family::Enumerate { max_v, max_e } => CorpusSpec::Enumerate { max_v: *max_v, max_e: *max_e },
                Family::Random { v, e, neg_prob } => {
                    CorpusSpec::Random { seed: cli.seed, v: *v, e: *e, neg_prob: *neg_prob }
                }
            };
            let items = generate(&spec)?;
            match &cli.out {
                Some(dir) => {
                    let mut files = Vec::new();
                    for item in &items {
                        let name = format!("graphs/{}.graph", item.id);
                        write_artifact(dir, &name, &item.graph.to_text())?;
                        files.push(name);
                    }
                    let manifest = json!({ "spec": spec, "count": items.len(), "files": files });
                    write_artifact(dir, "manifest.json", &(serde_json::to_string_pretty(&manifest)? + "\n"))?;
                    println!("{} graphs written to {}", items.len(), dir.display());
                }
                None => {
                    for item in &items {
                        println!("# {}\n{}", item.id, item.graph.to_text());
                    }
                }
            }
            Ok(0)
        }
        Command::Verify { suite, max_v, max_e, k, threads } => {
            let suite: Suite = suite.parse()?;
            let config = SuiteConfig { max_v: *max_v, max_e: *max_e, ks: k.clone(), limits, ..Default::default() };
            let summary = match threads {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(*n)
                    .build()?
                    .install(|| run_suite(suite, &config))?,
                None => run_suite(suite, &config)?,
            };
            let text = serde_json::to_string_pretty(&summary)?;
            if let Some(dir) = &cli.out {
                for f in &summary.failures {
                    write_artifact(dir, &format!("failures/{suite}-{:06}.graph", f.index), &f.graph)?;
                }
            }
            emit(cli, &format!("{suite}-summary.json"), &text)?;
            eprintln!(
                "{suite}: {} checked, {} passed, {} failed, {} capped",
                summary.checked,
                summary.passed,
                summary.failures.len(),
                summary.capped
            );
            Ok(if !summary.failures.is_empty() || summary.parity_failures > 0 {
                4
            } else if summary.capped > 0 {
                3
            } else {
                0
            })
        }
        Command::Check { certificate } => {
            let cert = Certificate::from_json(&read(certificate)?)?;
            cert.verify(&limits)?;
            println!("ok: {} ({})", cert.claim.kind(), cert.verdict.detail);
            Ok(0)
        }
    }
}
