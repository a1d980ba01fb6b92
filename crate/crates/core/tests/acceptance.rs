// SPDX-License-Identifier: Apache-2.0

//! Acceptance checks. Runs as a plain binary so that every check prints one
//! PASS/FAIL line whether or not output capture is on.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::Rational64;

use common::{mixed_circuit, small_graph};
use sqgm::bench::{chained_circuit, generate_queko, random_circuit, run_suite, SuiteConfig};
use sqgm::optimize::{cancel_commutative_traced, finish, pipeline, MAX_SWEEPS};
use sqgm::route::{
    h_sqgm, score_swap, HeuristicConfig, HeuristicMode, ProgressTracker, Router, SabreRouter, SqgmRouter,
};
use sqgm::samples::{ourense, running_example, running_mapping};
use sqgm::verify::{check_connectivity, check_structural, check_unitary, DEFAULT_TRIAL_STATES};
use sqgm::{random_mapping, ArchGraph, Circuit, Strategy};

type Q = Rational64;
type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, || {
        format!("took {:?}, limit {limit:?}", start.elapsed())
    })
}

fn exact(edge: (usize, usize)) -> HeuristicConfig<Q> {
    HeuristicConfig::default().prefer(&[edge])
}

fn running_example_golden() -> Outcome {
    let start = Instant::now();
    let (c, g, tau) = (running_example(4), ourense(), running_mapping());
    let mut seen = Vec::new();
    for (edge, want) in [((0, 1), 15), ((0, 3), 15)] {
        let d = SabreRouter::new(exact(edge))
            .route(&c, &g, &tau)
            .map_err(|e| e.to_string())?
            .depth();
        ensure(d == want, || format!("baseline tie {edge:?}: depth {d}, want {want}"))?;
        seen.push(d);
    }
    for edge in [(0, 1), (0, 3)] {
        let d = SqgmRouter::new(exact(edge))
            .route(&c, &g, &tau)
            .map_err(|e| e.to_string())?
            .depth();
        ensure(d == 11, || format!("sqgm tie {edge:?}: depth {d}, want 11"))?;
        seen.push(d);
    }
    let cc = pipeline(&c, &g, &tau, Strategy::Sqgm, true, exact((0, 3))).map_err(|e| e.to_string())?;
    ensure(cc.depth_after == 9, || {
        format!("sqgm+cc depth {}, want 9", cc.depth_after)
    })?;
    seen.push(cc.depth_after);
    within(start, Duration::from_secs(1))?;
    Ok(format!("depths {seen:?}"))
}

fn parametric_depth() -> Outcome {
    let start = Instant::now();
    let (g, tau) = (ourense(), running_mapping());
    for k in 1..=25 {
        let c = running_example(k);
        ensure(c.depth() == k + 3, || format!("k={k}: input depth {}", c.depth()))?;
        for edge in [(0, 1), (0, 3)] {
            let base = SabreRouter::new(exact(edge))
                .route(&c, &g, &tau)
                .map_err(|e| e.to_string())?;
            ensure(base.depth() == 2 * k + 7 && base.swaps == 1, || {
                format!(
                    "k={k} tie {edge:?}: baseline depth {} swaps {}",
                    base.depth(),
                    base.swaps
                )
            })?;
            let ours = SqgmRouter::new(exact(edge))
                .route(&c, &g, &tau)
                .map_err(|e| e.to_string())?;
            ensure(ours.depth() == k + 7 && ours.swaps == 1, || {
                format!("k={k} tie {edge:?}: sqgm depth {} swaps {}", ours.depth(), ours.swaps)
            })?;
        }
    }
    within(start, Duration::from_secs(5))?;
    Ok("k = 1..25, both ties".into())
}

fn progress_table_replay() -> Outcome {
    // Columns: after CX(q0,q1), W, CX(q1,q3), CX(q1,q2), U4; rows v0..v3.
    let table: [[u64; 4]; 5] = [[1, 1, 0, 0], [1, 2, 0, 0], [2, 2, 0, 2], [3, 2, 3, 2], [7, 2, 3, 2]];
    let routed = SabreRouter::new(exact((0, 1)))
        .route(&running_example(4), &ourense(), &running_mapping())
        .map_err(|e| e.to_string())?;
    let names: Vec<String> = routed.circuit.gates().iter().map(|g| g.to_string()).collect();
    let marks = ["cx 1,0", "W 1", "cx 0,3", "cx 0,2", "U4 0"];
    let mut pg = ProgressTracker::new(5);
    let mut column = 0;
    let mut checked = 0;
    for (g, name) in routed.circuit.gates().iter().zip(&names) {
        pg.track(g);
        if column < marks.len() && name == marks[column] {
            for (v, &want) in table[column].iter().enumerate() {
                ensure(pg.get(v) == want, || {
                    format!("after `{name}`: PG(v{v}) = {}, want {want}", pg.get(v))
                })?;
                checked += 1;
            }
            column += 1;
        }
    }
    ensure(checked == 20, || {
        format!("only {checked} of 20 entries reached; order {names:?}")
    })?;
    Ok("20/20 entries".into())
}

fn heuristic_values() -> Outcome {
    let (g, tau) = (ourense(), running_mapping());
    let front = [(0, 3)];
    let decay = vec![1.0f64; 5];
    let cfg = HeuristicConfig::<f64>::default().with_mode(HeuristicMode::Lookahead);
    let pg = ProgressTracker::from_values(vec![3, 1, 3, 2, 0]);
    let mut out = Vec::new();
    for edge in [(0, 1), (0, 3)] {
        let h = score_swap(&front, &[], &decay, &tau, edge, &cfg, &g);
        ensure((h - 1.0).abs() < 1e-12, || format!("lookahead {edge:?} = {h}"))?;
        let s = h_sqgm(h, &pg, edge, g.num_vertices());
        ensure((s - 1.6).abs() < 1e-12, || format!("h_sqgm {edge:?} = {s}"))?;
        out.push((h, s));
    }
    Ok(format!("{out:?}"))
}

fn planted_mappings() -> Outcome {
    let graphs = ["ourense", "tokyo20", "grid-4x4"];
    let mut count = 0;
    for i in 0..50u64 {
        let g = ArchGraph::builtin(graphs[i as usize % 3]).unwrap();
        let depth = 5 + (i as usize * 7) % 21;
        let density = [0.3, 0.5, 0.8, 1.0][i as usize % 4];
        let (c, planted) = generate_queko(&g, depth, density, 100 + i).map_err(|e| e.to_string())?;
        ensure(c.depth() == depth, || {
            format!("generated depth {} != {depth}", c.depth())
        })?;
        for s in [Strategy::Sabre, Strategy::Sqgm] {
            let r = s
                .router(HeuristicConfig::<f64>::default())
                .route(&c, &g, &planted)
                .map_err(|e| e.to_string())?;
            ensure(r.swaps == 0 && r.depth() == depth, || {
                format!(
                    "circuit {i} on {}: {s} gave {} swaps, depth {}",
                    graphs[i as usize % 3],
                    r.swaps,
                    r.depth()
                )
            })?;
        }
        count += 1;
    }
    Ok(format!("{count} circuits, 0 swaps, ratio 1.0"))
}

fn equivalence_suite() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for i in 0..200u64 {
        let n = 2 + (i as usize % 5);
        let c = mixed_circuit(n, 10 + (i as usize * 13) % 51, i);
        let g = small_graph(n, i);
        let initial = random_mapping(n, &g, i).unwrap();
        for s in [Strategy::Sabre, Strategy::Sqgm] {
            let routed = s
                .router(HeuristicConfig::<f64>::default().with_seed(i))
                .route(&c, &g, &initial)
                .map_err(|e| e.to_string())?;
            let structural = check_structural(&c, &routed.circuit, &initial);
            ensure(structural.ok, || {
                format!("circuit {i} {s}: structural witness {:?}", structural.witness)
            })?;
            ensure(structural.final_mapping == routed.final_mapping, || {
                format!("circuit {i} {s}: final mapping differs")
            })?;
            for cc in [false, true] {
                let out = finish(routed.clone(), cc).output;
                ensure(check_connectivity(&out, &g).is_none(), || {
                    format!("circuit {i} {s} cc={cc}: off-edge gate")
                })?;
                let u = check_unitary(&c, &out, &initial, &routed.final_mapping, None, DEFAULT_TRIAL_STATES)
                    .map_err(|e| e.to_string())?;
                ensure(u.ok, || {
                    format!("circuit {i} {s} cc={cc}: deviation {:e}", u.max_deviation)
                })?;
                worst = worst.max(u.max_deviation);
                runs += 1;
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{runs} runs, max deviation {worst:.2e}"))
}

fn directional_improvement() -> Outcome {
    let g = ArchGraph::builtin("grid-5x5").unwrap();
    let circuits: Vec<(String, Circuit)> = (0..20)
        .map(|i| (format!("chain{i}"), chained_circuit(25, 100, 0.3, 8..=16, 1000 + i)))
        .collect();
    let report = run_suite(
        &circuits,
        &g,
        &[Strategy::Sabre, Strategy::Sqgm],
        5,
        42,
        &SuiteConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    let base = report.geomean_ratio(0, 5).ok_or("no baseline results")?;
    let ours = report.geomean_ratio(1, 5).ok_or("no sqgm results")?;
    let rel = ours / base;
    ensure(rel <= 0.95, || format!("sqgm/baseline = {rel:.4}"))?;
    Ok(format!(
        "geomean ratio baseline {base:.4}, sqgm {ours:.4}, relative {rel:.4}"
    ))
}

fn repeat_scaling() -> Outcome {
    let g = ArchGraph::builtin("grid-3x3").unwrap();
    let circuits: Vec<(String, Circuit)> = (0..6)
        .map(|i| (format!("r{i}"), random_circuit(9, 60, &["h", "t", "x"], 500 + i)))
        .collect();
    let report = run_suite(
        &circuits,
        &g,
        &[Strategy::Sabre, Strategy::Sqgm],
        50,
        7,
        &SuiteConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    let mut shown = Vec::new();
    for (s, name) in ["sabre", "sqgm"].iter().enumerate() {
        let series: Vec<f64> = [5, 10, 20, 50]
            .iter()
            .map(|&k| report.delta_k(s, k).ok_or(format!("{name}: no Δ^{k}")))
            .collect::<Result<_, _>>()?;
        ensure(series[0] == 1.0, || format!("{name}: Δ^5 = {}", series[0]))?;
        ensure(series.windows(2).all(|w| w[1] <= w[0]), || {
            format!("{name}: Δ series {series:?}")
        })?;
        shown.push(format!("{name} {series:.3?}"));
    }
    Ok(shown.join("; "))
}

fn cli_determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_sqgm");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    std::fs::create_dir(p("suite")).map_err(|e| e.to_string())?;
    let run = |args: &[&str]| -> Result<(), String> {
        let out = Command::new(exe).args(args).output().map_err(|e| e.to_string())?;
        ensure(out.status.success(), || {
            format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr))
        })
    };
    let read = |name: &str| std::fs::read(p(name)).map_err(|e| e.to_string());

    let mut compared = 0;
    let src = p("gen.qasm.0");
    for round in 0..2 {
        let tag = |name: &str| format!("{name}.{round}");
        run(&[
            "gen",
            "--arch",
            "tokyo20",
            "--depth",
            "12",
            "--density",
            "0.6",
            "--seed",
            "4",
            "-o",
            &p(&tag("gen.qasm")),
            "--mapping-out",
            &p(&tag("gen.json")),
        ])?;
        for (strategy, cc) in [("sabre", false), ("sqgm", false), ("sqgm", true)] {
            let mut args = vec![
                "route",
                "--circuit",
                &src,
                "--arch",
                "grid-4x5",
                "--strategy",
                strategy,
                "--seed",
                "9",
                "--repeats",
                "3",
            ];
            if cc {
                args.push("--cc");
            }
            let out = p(&tag(&format!("route-{strategy}-{cc}.qasm")));
            let map = p(&tag(&format!("route-{strategy}-{cc}.json")));
            args.extend(["-o", &out, "--mapping-out", &map]);
            run(&args)?;
        }
        if round == 0 {
            for i in 0..3 {
                let c = random_circuit(12, 80, &["h", "t"], i);
                std::fs::write(p(&format!("suite/c{i}.qasm")), sqgm::emit_qasm(&c, 12)).map_err(|e| e.to_string())?;
            }
        }
        run(&[
            "bench",
            "--suite",
            &p("suite"),
            "--arch",
            "grid-4x5",
            "--repeats",
            "3",
            "--seed",
            "1",
            "--csv",
            &p(&tag("bench.csv")),
            "--json",
            &p(&tag("bench.json")),
        ])?;
    }
    for name in [
        "gen.qasm",
        "gen.json",
        "route-sabre-false.qasm",
        "route-sabre-false.json",
        "route-sqgm-false.qasm",
        "route-sqgm-false.json",
        "route-sqgm-true.qasm",
        "route-sqgm-true.json",
        "bench.csv",
        "bench.json",
    ] {
        let (a, b) = (read(&format!("{name}.0"))?, read(&format!("{name}.1"))?);
        ensure(!a.is_empty() && a == b, || format!("{name} differs between runs"))?;
        compared += 1;
    }
    Ok(format!("{compared} output files byte-identical"))
}

fn cc_soundness() -> Outcome {
    let mut corpus: Vec<Circuit> = Vec::new();
    for i in 0..100u64 {
        let n = 2 + (i as usize % 5);
        let c = mixed_circuit(n, 20 + (i as usize * 7) % 41, 9000 + i);
        let g = small_graph(n, i);
        let init = random_mapping(n, &g, i).unwrap();
        for s in [Strategy::Sabre, Strategy::Sqgm] {
            let r = s
                .router(HeuristicConfig::<f64>::default().with_seed(i))
                .route(&c, &g, &init)
                .map_err(|e| e.to_string())?;
            corpus.push(r.circuit.decompose_swaps());
        }
        corpus.push(c);
    }
    let g = ArchGraph::builtin("grid-5x5").unwrap();
    for i in 0..5 {
        let c = chained_circuit(25, 80, 0.3, 8..=16, i);
        let init = random_mapping(25, &g, i).unwrap();
        corpus.push(
            SqgmRouter::<f64>::default()
                .route(&c, &g, &init)
                .map_err(|e| e.to_string())?
                .circuit
                .decompose_swaps(),
        );
    }
    let mut removed = 0;
    let mut max_sweeps = 0;
    for (i, c) in corpus.iter().enumerate() {
        let (out, sweeps, settled) = cancel_commutative_traced(c);
        ensure(settled && sweeps < MAX_SWEEPS, || {
            format!("corpus {i}: no fixpoint after {sweeps} sweeps")
        })?;
        ensure(out.depth() <= c.depth(), || {
            format!("corpus {i}: depth {} -> {}", c.depth(), out.depth())
        })?;
        ensure(cancel_commutative_traced(&out).0 == out, || {
            format!("corpus {i}: second pass changed the circuit")
        })?;
        removed += c.len() - out.len();
        max_sweeps = max_sweeps.max(sweeps);
    }
    let fig = pipeline(
        &running_example(4),
        &ourense(),
        &running_mapping(),
        Strategy::Sqgm,
        true,
        exact((0, 3)),
    )
    .map_err(|e| e.to_string())?;
    ensure(fig.depth_before == 11 && fig.depth_after == 9, || {
        format!("running example {} -> {}", fig.depth_before, fig.depth_after)
    })?;
    Ok(format!(
        "{} circuits, {removed} gates removed, at most {max_sweeps} changing sweeps; 11 -> 9",
        corpus.len()
    ))
}

fn main() {
    let checks: [Check; 10] = [
        ("running example golden depths", running_example_golden),
        ("parametric chain depths", parametric_depth),
        ("progress table replay", progress_table_replay),
        ("heuristic values", heuristic_values),
        ("planted-mapping soundness", planted_mappings),
        ("equivalence suite", equivalence_suite),
        ("directional depth improvement", directional_improvement),
        ("repeat scaling", repeat_scaling),
        ("CLI determinism", cli_determinism),
        ("cancellation soundness", cc_soundness),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{secs:.2}s]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [{secs:.2}s]: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
