// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/input error,
//! 3 internal invariant violation.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sqgm::bench::{generate_queko, load_suite, run_suite, SuiteConfig};
use sqgm::layout::{derive_seed, sabre_layout, DEFAULT_LAYOUT_ITERATIONS};
use sqgm::optimize::{pipeline, PipelineResult};
use sqgm::qasm::{emit_qasm, parse_qasm};
use sqgm::route::HeuristicConfig;
use sqgm::verify::{check_connectivity, check_structural, check_unitary, recover_swaps, DEFAULT_TRIAL_STATES};
use sqgm::{ArchGraph, Error, HeuristicMode, Mapping, Result, Strategy};

#[derive(Parser)]
#[command(name = "sqgm", version, about = "Route quantum circuits onto device coupling graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Route one circuit.
    Route(RouteArgs),
    /// Run strategies over a directory of circuits and write a report.
    Bench(BenchArgs),
    /// Check a routed circuit against its source.
    Verify(VerifyArgs),
    /// Generate a circuit with a planted zero-SWAP mapping.
    Gen(GenArgs),
}

#[derive(Args, Clone)]
struct HeuristicArgs {
    #[arg(long, default_value = "decay")]
    heuristic: HeuristicMode,
    /// Lookahead weight.
    #[arg(long, default_value_t = 0.5)]
    w: f64,
    /// Decay increment per SWAP.
    #[arg(long, default_value_t = 0.001)]
    delta: f64,
    #[arg(long = "ext-size", default_value_t = 20)]
    ext_size: usize,
    #[arg(long = "layout-iters", default_value_t = DEFAULT_LAYOUT_ITERATIONS)]
    layout_iters: usize,
}

impl HeuristicArgs {
    fn config(&self, seed: u64) -> Result<HeuristicConfig<f64>> {
        let cfg = HeuristicConfig {
            mode: self.heuristic,
            w: self.w,
            delta: self.delta,
            extended_set_size: self.ext_size,
            seed,
            ..HeuristicConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct RouteArgs {
    #[arg(long)]
    circuit: PathBuf,
    /// Builtin device name or JSON graph file.
    #[arg(long)]
    arch: String,
    #[arg(long, default_value = "sqgm")]
    strategy: Strategy,
    /// Router used inside the layout search; defaults to `--strategy`.
    #[arg(long = "layout-strategy")]
    layout_strategy: Option<Strategy>,
    /// Apply commutative cancellation after routing.
    #[arg(long)]
    cc: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent layout+routing attempts; the shallowest result is kept.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Use this initial mapping instead of searching for one.
    #[arg(long = "initial-mapping")]
    initial_mapping: Option<PathBuf>,
    #[command(flatten)]
    heuristic: HeuristicArgs,
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
    /// Where to write the initial mapping used.
    #[arg(long = "mapping-out")]
    mapping_out: Option<PathBuf>,
    /// Where to write the final mapping.
    #[arg(long = "final-mapping-out")]
    final_mapping_out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    suite: PathBuf,
    #[arg(long)]
    arch: String,
    #[arg(long, default_value = "sabre,sqgm", value_delimiter = ',')]
    strategies: Vec<Strategy>,
    #[arg(long = "layout-strategy", default_value = "sabre")]
    layout_strategy: Strategy,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    cc: bool,
    /// Record wall-clock times (makes the CSV non-reproducible).
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    heuristic: HeuristicArgs,
    #[arg(long)]
    csv: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    source: PathBuf,
    #[arg(long)]
    routed: PathBuf,
    #[arg(long)]
    arch: String,
    /// Initial mapping (JSON array, logical -> physical).
    #[arg(long)]
    mapping: PathBuf,
    /// Final mapping; needed for the statevector check when the routed
    /// circuit cannot be replayed gate by gate (e.g. after cancellation).
    #[arg(long = "final-mapping")]
    final_mapping: Option<PathBuf>,
    /// Also compare statevectors (at most 10 qubits).
    #[arg(long)]
    unitary: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    arch: String,
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
    #[arg(long = "mapping-out")]
    mapping_out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn route(args: RouteArgs) -> Result<u8> {
    let graph = ArchGraph::load(&args.arch)?;
    let circuit = parse_qasm(&read(&args.circuit)?)?.strip_barriers();
    if args.repeats == 0 {
        return Err(Error::Config("--repeats must be at least 1".into()));
    }
    let given = match &args.initial_mapping {
        Some(p) => Some(Mapping::from_json(&read(p)?, graph.num_vertices())?),
        None => None,
    };
    let layout_strategy = args.layout_strategy.unwrap_or(args.strategy);

    let mut best: Option<PipelineResult> = None;
    for r in 0..args.repeats {
        let seed = derive_seed(args.seed, r as u64);
        let cfg = args.heuristic.config(seed)?;
        let initial = match &given {
            Some(m) => m.clone(),
            None => {
                let router = layout_strategy.router(cfg.clone());
                sabre_layout(&circuit, &graph, router.as_ref(), args.heuristic.layout_iters, seed)?
            }
        };
        let result = pipeline(&circuit, &graph, &initial, args.strategy, args.cc, cfg)?;
        if best.as_ref().is_none_or(|b| result.depth_after < b.depth_after) {
            best = Some(result);
        }
    }
    let best = best.expect("at least one repeat");
    write(&args.output, &emit_qasm(&best.output, graph.num_vertices()))?;
    if let Some(p) = &args.mapping_out {
        write(p, &best.routed.initial.to_json())?;
    }
    if let Some(p) = &args.final_mapping_out {
        write(p, &best.routed.final_mapping.to_json())?;
    }
    println!(
        "strategy={} swaps={} depth_in={} depth_out={} cx_out={}",
        args.strategy,
        best.routed.swaps,
        circuit.depth(),
        best.depth_after,
        best.cx_after
    );
    Ok(0)
}

fn bench(args: BenchArgs) -> Result<u8> {
    let graph = ArchGraph::load(&args.arch)?;
    let circuits = load_suite(&args.suite)?;
    if circuits.is_empty() {
        return Err(Error::Config(format!("no .qasm files in {}", args.suite.display())));
    }
    let config = SuiteConfig {
        heuristic: args.heuristic.config(args.seed)?,
        layout_iterations: args.heuristic.layout_iters,
        layout_strategy: args.layout_strategy,
        cc: args.cc,
        timing: args.timing,
    };
    let report = run_suite(&circuits, &graph, &args.strategies, args.repeats, args.seed, &config)?;
    write(&args.csv, &report.to_csv())?;
    if let Some(p) = &args.json {
        write(p, &report.to_json())?;
    }
    for (name, s) in &report.summary {
        match s.geomean_best_ratio {
            Some(g) => println!(
                "{name}: geomean best-of-{} depth ratio {g:.4} ({} failures)",
                args.repeats, s.failures
            ),
            None => println!("{name}: no successful runs ({} failures)", s.failures),
        }
    }
    Ok(0)
}

fn verify(args: VerifyArgs) -> Result<u8> {
    let graph = ArchGraph::load(&args.arch)?;
    let source = parse_qasm(&read(&args.source)?)?;
    let routed = parse_qasm(&read(&args.routed)?)?;
    if routed.num_qubits() > graph.num_vertices() {
        return Err(Error::Config(format!(
            "routed circuit uses {} qubits, device has {}",
            routed.num_qubits(),
            graph.num_vertices()
        )));
    }
    let routed = routed.with_width(graph.num_vertices())?;
    let initial = Mapping::from_json(&read(&args.mapping)?, graph.num_vertices())?;
    if initial.num_logical() != source.num_qubits() {
        return Err(Error::InvalidMapping(format!(
            "mapping places {} qubits, source has {}",
            initial.num_logical(),
            source.num_qubits()
        )));
    }

    let bad_edge = check_connectivity(&routed, &graph);
    println!("connectivity: {}", if bad_edge.is_none() { "ok" } else { "FAILED" });
    if let Some(g) = &bad_edge {
        println!("  witness: {g}");
    }

    let mut structural = check_structural(&source, &recover_swaps(&routed), &initial);
    if !structural.ok {
        let plain = check_structural(&source, &routed, &initial);
        if plain.ok {
            structural = plain;
        }
    }
    println!("structural: {}", if structural.ok { "ok" } else { "FAILED" });
    if let Some(g) = &structural.witness {
        println!("  witness: {g}");
    }

    let given_final = match &args.final_mapping {
        Some(p) => Some(Mapping::from_json(&read(p)?, graph.num_vertices())?),
        None => None,
    };
    if let (Some(f), true) = (&given_final, structural.ok) {
        if *f != structural.final_mapping {
            println!(
                "final mapping: differs from replay {}",
                structural.final_mapping.to_json()
            );
        }
    }
    let mut unitary_ok = None;
    if args.unitary {
        let final_mapping = if structural.ok {
            Some(structural.final_mapping.clone())
        } else {
            given_final
        };
        match final_mapping {
            Some(f) => {
                let u = check_unitary(&source, &routed, &initial, &f, None, DEFAULT_TRIAL_STATES)?;
                println!(
                    "unitary: {} (max deviation {:.3e})",
                    if u.ok { "ok" } else { "FAILED" },
                    u.max_deviation
                );
                unitary_ok = Some(u.ok);
            }
            None => println!("unitary: skipped (no final mapping; pass --final-mapping)"),
        }
    }

    let equivalent = structural.ok && unitary_ok != Some(false) || unitary_ok == Some(true);
    Ok(if bad_edge.is_none() && equivalent { 0 } else { 1 })
}

fn gen(args: GenArgs) -> Result<u8> {
    let graph = ArchGraph::load(&args.arch)?;
    let (circuit, planted) = generate_queko(&graph, args.depth, args.density, args.seed)?;
    write(&args.output, &emit_qasm(&circuit, circuit.num_qubits()))?;
    if let Some(p) = &args.mapping_out {
        write(p, &planted.to_json())?;
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Route(a) => route(a),
        Command::Bench(a) => bench(a),
        Command::Verify(a) => verify(a),
        Command::Gen(a) => gen(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Invariant(_) => 3,
                _ => 2,
            })
        }
    }
}
