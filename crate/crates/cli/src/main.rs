//! `dihom`: analyze mutex programs through their precubical semantics, decide
//! path (di)homotopy, canonicalize 2-cells, and spot-check metric realizations.
//!
//! Exit codes: 0 success/true/pass, 1 false/fail, 2 parse error,
//! 3 non-conservative program, 4 unknown, 5 hypothesis violated, 6 I/O error.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dihom_core::gms::{self, CubeMetric};
use dihom_core::lang::{self, LangError};
use dihom_core::npc;
use dihom_core::paths::{self, Homotopic, PathT};
use dihom_core::pcs::PrecubicalSet;
use dihom_core::twocells::{self, FormalTwoCell, TwoCellError};

const EXIT_FALSE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_NONCONSERVATIVE: u8 = 3;
const EXIT_UNKNOWN: u8 = 4;
const EXIT_HYPOTHESIS: u8 = 5;
const EXIT_IO: u8 = 6;

#[derive(Parser)]
#[command(name = "dihom", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct InputArgs {
    /// Inline program text.
    #[arg(short = 'e', long = "expr", conflicts_with_all = ["file", "complex"])]
    expr: Option<String>,
    /// Read the program from a file.
    #[arg(short = 'f', long = "file", conflicts_with = "complex")]
    file: Option<String>,
    /// Read a precubical complex from a JSON file instead of a program.
    #[arg(long = "complex")]
    complex: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the semantics of a program and verify non-positive curvature.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        /// Collect a witness for every failing vertex link, not just the first.
        #[arg(long)]
        full_witnesses: bool,
        /// Also check the cube property at all eight corner templates (the
        /// form that matches the link condition exactly).
        #[arg(long)]
        all_corners: bool,
    },
    /// Decide dihomotopy or bounded homotopy of two paths.
    Equiv {
        #[command(flatten)]
        input: InputArgs,
        /// First path, e.g. "0 -1-> 2 <-3- 1".
        #[arg(long)]
        path1: String,
        /// Second path.
        #[arg(long)]
        path2: String,
        /// di = dihomotopy, ho = bounded homotopy.
        #[arg(long, value_parser = ["di", "ho"], default_value = "di")]
        mode: String,
        /// Extra length allowance for the homotopy search.
        #[arg(long, default_value_t = 6)]
        budget: usize,
    },
    /// Enumerate dihomotopy classes of dipaths.
    Classes {
        #[command(flatten)]
        input: InputArgs,
        /// Source vertex (defaults to the begin vertex of the program).
        #[arg(long)]
        from: Option<usize>,
        /// Target vertex (defaults to the end vertex of the program).
        #[arg(long)]
        to: Option<usize>,
        /// Length bound on the enumerated dipaths.
        #[arg(long)]
        bound: usize,
    },
    /// Rewrite a 2-cell (JSON file) to canonical form.
    Canonicalize {
        /// JSON file with {"complex": …} or {"program": …} and {"cell": …}.
        cell: String,
        /// Also extract and print the tile-move sequence (dipath endpoints).
        #[arg(long)]
        extract: bool,
    },
    /// Realize a complex on a grid and run metric checks.
    Realize {
        #[command(flatten)]
        input: InputArgs,
        /// Grid resolution per cube edge.
        #[arg(long, default_value_t = 8)]
        k: usize,
        /// Per-cube metric.
        #[arg(long, default_value = "linf")]
        metric: String,
        /// Use directed per-axis distances.
        #[arg(long)]
        directed: bool,
        /// Run the comparison-triangle check on three vertex ids "x,y,z".
        #[arg(long)]
        cat0: Option<String>,
        /// Sample budget for the triangle check.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Tolerance for the triangle check.
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
        /// Run the local-distance check at a sampled vertex id.
        #[arg(long)]
        local_check: Option<usize>,
        /// Symmetrize the realized space before the checks.
        #[arg(long)]
        symmetrize: bool,
        /// Write the distance matrix as CSV to this file.
        #[arg(long)]
        csv: Option<String>,
    },
    /// Export the complex as DOT or JSON.
    Export {
        #[command(flatten)]
        input: InputArgs,
        /// Emit DOT of the 1-skeleton.
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        /// Emit the JSON wire form.
        #[arg(long)]
        json: bool,
        /// Output file (stdout when absent).
        #[arg(short = 'o', long)]
        out: Option<String>,
    },
}

struct LoadedInput {
    complex: PrecubicalSet,
    beg: Option<usize>,
    end: Option<usize>,
    cs_counts: Option<Vec<usize>>,
}

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn lang_exit(e: &LangError) -> u8 {
    match e {
        LangError::NonConservative(_) => EXIT_NONCONSERVATIVE,
        LangError::BegForbidden(_) | LangError::InconsistentPotential { .. } => EXIT_NONCONSERVATIVE,
        _ => EXIT_PARSE,
    }
}

fn dim_bound() -> usize {
    std::env::var("DIHOM_MAX_DIM")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(dihom_core::pcs::DEFAULT_DIM_BOUND)
}

fn load_input(input: &InputArgs) -> Result<LoadedInput, (u8, String)> {
    if let Some(path) = &input.complex {
        let text = std::fs::read_to_string(path).map_err(|e| (EXIT_IO, format!("{path}: {e}")))?;
        let complex = PrecubicalSet::from_json_str(&text)
            .map_err(|e| (EXIT_PARSE, format!("{path}: {e}")))?;
        return Ok(LoadedInput { complex, beg: None, end: None, cs_counts: None });
    }
    let text = if let Some(expr) = &input.expr {
        expr.clone()
    } else if let Some(path) = &input.file {
        std::fs::read_to_string(path).map_err(|e| (EXIT_IO, format!("{path}: {e}")))?
    } else {
        return Err((EXIT_PARSE, "no input: use -e, -f or --complex".into()));
    };
    let program = lang::parse(&text).map_err(|e| (lang_exit(&e), e.to_string()))?;
    let cs = lang::cs_semantics(&program);
    let cs_counts = cs.pcs.cell_counts().to_vec();
    let sem = lang::semantics(&program).map_err(|e| (lang_exit(&e), e.to_string()))?;
    if sem.pcs.dim() > dim_bound() {
        return Err((
            EXIT_PARSE,
            format!("semantics has dimension {} above the bound {}", sem.pcs.dim(), dim_bound()),
        ));
    }
    Ok(LoadedInput {
        complex: sem.pcs,
        beg: Some(sem.beg),
        end: Some(sem.end),
        cs_counts: Some(cs_counts),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err((code, msg)) => fail(code, &msg),
    }
}

fn run(cli: Cli) -> Result<ExitCode, (u8, String)> {
    match cli.command {
        Command::Analyze { input, full_witnesses, all_corners } => {
            let loaded = load_input(&input)?;
            let c = &loaded.complex;
            for warning in lint_warnings(&input) {
                eprintln!("warning: {warning}");
            }
            let pot_range = potentials_range(&input);
            let verdict = if full_witnesses {
                npc::npc_verdict_full(c)
            } else {
                npc::npc_verdict(c)
            }
            .map_err(|e| (EXIT_PARSE, e.to_string()))?;
            let corners = if all_corners {
                Some(npc::check_cube_property_all_corners(c).map_err(|e| (EXIT_PARSE, e.to_string()))?)
            } else {
                None
            };
            if cli.format == Format::Json {
                let mut out = serde_json::json!({
                    "cells": c.cell_counts(),
                    "verdict": verdict.to_json(),
                });
                if let Some(cs) = &loaded.cs_counts {
                    out["unpruned_cells"] = serde_json::json!(cs);
                }
                if let Some((lo, hi)) = pot_range {
                    out["potential_range"] = serde_json::json!([lo, hi]);
                }
                if let Some((ok, witness)) = &corners {
                    out["cube_property_all_corners"] = serde_json::json!({
                        "holds": ok,
                        "witness": witness,
                    });
                }
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                if let Some(cs) = &loaded.cs_counts {
                    println!("unpruned cells: {cs:?}");
                }
                println!("cells: {:?}", c.cell_counts());
                if let Some((lo, hi)) = pot_range {
                    println!("potential range: [{lo}, {hi}]");
                }
                if loaded.cs_counts.is_some() {
                    println!("conservative: yes");
                }
                println!("verdict: {}", serde_json::to_string(&verdict.to_json()).unwrap());
                if let Some((ok, witness)) = &corners {
                    match witness {
                        Some(w) => println!("cube property (all corners): {ok} ({w})"),
                        None => println!("cube property (all corners): {ok}"),
                    }
                }
            }
            Ok(if verdict.npc() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FALSE) })
        }
        Command::Equiv { input, path1, path2, mode, budget } => {
            let loaded = load_input(&input)?;
            let c = &loaded.complex;
            let p1 = PathT::parse(&path1).map_err(|e| (EXIT_PARSE, e.to_string()))?;
            let p2 = PathT::parse(&path2).map_err(|e| (EXIT_PARSE, e.to_string()))?;
            p1.validate(c).map_err(|e| (EXIT_PARSE, format!("path1: {e}")))?;
            p2.validate(c).map_err(|e| (EXIT_PARSE, format!("path2: {e}")))?;
            if mode == "di" {
                let eq = paths::are_dihomotopic(c, &p1, &p2)
                    .map_err(|e| (EXIT_PARSE, e.to_string()))?;
                if cli.format == Format::Json {
                    println!("{}", serde_json::json!({"equivalent": eq}));
                } else {
                    println!("{}", if eq { "true" } else { "false" });
                }
                Ok(if eq { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FALSE) })
            } else {
                match paths::are_homotopic(c, &p1, &p2, budget)
                    .map_err(|e| (EXIT_PARSE, e.to_string()))?
                {
                    Homotopic::Yes(witness) => {
                        if cli.format == Format::Json {
                            println!(
                                "{}",
                                serde_json::json!({"equivalent": true, "witness": witness})
                            );
                        } else {
                            let moves: Vec<String> = witness
                                .iter()
                                .map(|m| format!("({:?},{})", m.rule, m.position))
                                .collect();
                            println!("true [{}]", moves.join(" "));
                        }
                        Ok(ExitCode::SUCCESS)
                    }
                    Homotopic::No => {
                        if cli.format == Format::Json {
                            println!("{}", serde_json::json!({"equivalent": false}));
                        } else {
                            println!("false");
                        }
                        Ok(ExitCode::from(EXIT_FALSE))
                    }
                    Homotopic::Unknown => {
                        if cli.format == Format::Json {
                            println!("{}", serde_json::json!({"equivalent": null}));
                        } else {
                            println!("unknown");
                        }
                        Ok(ExitCode::from(EXIT_UNKNOWN))
                    }
                }
            }
        }
        Command::Classes { input, from, to, bound } => {
            let loaded = load_input(&input)?;
            let c = &loaded.complex;
            let from = from.or(loaded.beg).ok_or((EXIT_PARSE, "--from required for complexes".into()))?;
            let to = to.or(loaded.end).ok_or((EXIT_PARSE, "--to required for complexes".into()))?;
            let classes = paths::dihomotopy_classes(c, from, to, bound);
            if cli.format == Format::Json {
                let arr: Vec<serde_json::Value> = classes
                    .iter()
                    .map(|cls| {
                        serde_json::json!({
                            "size": cls.len(),
                            "representative": cls[0].display(c),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({"classes": arr})).unwrap()
                );
            } else {
                println!("{} classes", classes.len());
                for (i, cls) in classes.iter().enumerate() {
                    println!("class {i}: {} dipaths, representative {}", cls.len(), cls[0].display(c));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Canonicalize { cell, extract } => {
            let text = std::fs::read_to_string(&cell).map_err(|e| (EXIT_IO, format!("{cell}: {e}")))?;
            let v: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| (EXIT_PARSE, e.to_string()))?;
            let complex = if let Some(cv) = v.get("complex") {
                PrecubicalSet::from_json(cv.clone()).map_err(|e| (EXIT_PARSE, e.to_string()))?
            } else if let Some(pv) = v.get("program").and_then(|p| p.as_str()) {
                let program = lang::parse(pv).map_err(|e| (lang_exit(&e), e.to_string()))?;
                lang::semantics(&program).map_err(|e| (lang_exit(&e), e.to_string()))?.pcs
            } else {
                return Err((EXIT_PARSE, "cell file needs a `complex` or `program` field".into()));
            };
            let cell_v = v.get("cell").ok_or((EXIT_PARSE, "cell file needs a `cell` field".into()))?;
            let cell: FormalTwoCell = serde_json::from_value(cell_v.clone())
                .map_err(|e| (EXIT_PARSE, e.to_string()))?;
            let tiles = paths::TileIndex::new(&complex);
            let problems = twocells::validate_cell(&complex, &tiles, &cell);
            if !problems.is_empty() {
                return Err((EXIT_PARSE, format!("invalid cell: {}", problems.join("; "))));
            }
            let cf = twocells::rewrite_to_canonical(&complex, &tiles, &cell)
                .and_then(|cf| twocells::normalize_canonical(&complex, &tiles, cf))
                .map_err(|e| (two_cell_exit(&e), e.to_string()))?;
            println!("{}", cf.to_sexp());
            if extract {
                let moves = twocells::extract_dihomotopy(&complex, &cell)
                    .map_err(|e| (two_cell_exit(&e), e.to_string()))?;
                for m in moves {
                    println!(
                        "tile @{}: ({}, {}) => ({}, {})",
                        m.position,
                        step_str(m.from.0),
                        step_str(m.from.1),
                        step_str(m.to.0),
                        step_str(m.to.1)
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Realize { input, k, metric, directed, cat0, samples, tol, local_check, symmetrize, csv } => {
            let loaded = load_input(&input)?;
            let metric: CubeMetric = metric.parse().map_err(|e: String| (EXIT_PARSE, e))?;
            let mut rg = gms::realize_grid(&loaded.complex, k, metric, directed)
                .map_err(|e| (EXIT_PARSE, e.to_string()))?;
            if symmetrize {
                rg.space = gms::symmetrize_left(&rg.space);
            }
            println!(
                "realized {} points at k={k} ({:?}{}), source hash {}",
                rg.space.len(),
                metric,
                if directed { ", directed" } else { "" },
                rg.source_hash
            );
            if let Some(path) = csv {
                std::fs::write(&path, rg.space.to_csv()).map_err(|e| (EXIT_IO, format!("{path}: {e}")))?;
                println!("wrote {path}");
            }
            if let Some(v) = local_check {
                let node = rg
                    .vertex_node(v)
                    .ok_or((EXIT_PARSE, format!("vertex {v} has no sampled point")))?;
                let rep = gms::check_local_distance(&rg, node)
                    .map_err(|e| (EXIT_PARSE, e.to_string()))?;
                println!(
                    "local distance at vertex {v}: escape {:.4}, {} violations",
                    rep.escape,
                    rep.violations.len()
                );
                if !rep.holds() {
                    return Ok(ExitCode::from(EXIT_FALSE));
                }
            }
            if let Some(spec) = cat0 {
                let ids: Vec<usize> = spec
                    .split(',')
                    .map(|s| s.trim().parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| (EXIT_PARSE, format!("--cat0: {e}")))?;
                if ids.len() != 3 {
                    return Err((EXIT_PARSE, "--cat0 needs three vertex ids".into()));
                }
                let space = if rg.space.is_symmetric() {
                    rg.clone()
                } else {
                    let mut sym = rg.clone();
                    sym.space = gms::symmetrize_left(&rg.space);
                    sym
                };
                let nodes: Vec<usize> = ids
                    .iter()
                    .map(|v| {
                        space.vertex_node(*v).ok_or((EXIT_PARSE, format!("vertex {v} not sampled")))
                    })
                    .collect::<Result<_, _>>()?;
                let out =
                    gms::cat0_triangle_check(&space, nodes[0], nodes[1], nodes[2], samples, tol)
                        .map_err(|e| (EXIT_PARSE, e.to_string()))?;
                match out {
                    gms::Cat0Outcome::Pass => {
                        println!("cat0: Pass");
                        return Ok(ExitCode::SUCCESS);
                    }
                    gms::Cat0Outcome::Fail { p, q, gap } => {
                        println!("cat0: Fail (points {p},{q}, gap {gap:.4})");
                        return Ok(ExitCode::from(EXIT_FALSE));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Export { input, dot, json, out } => {
            let loaded = load_input(&input)?;
            let rendered = if dot {
                loaded.complex.to_dot("dihom")
            } else if json {
                serde_json::to_string_pretty(&loaded.complex.to_json()).unwrap() + "\n"
            } else {
                return Err((EXIT_PARSE, "choose --dot or --json".into()));
            };
            match out {
                Some(path) => {
                    std::fs::write(&path, rendered).map_err(|e| (EXIT_IO, format!("{path}: {e}")))?
                }
                None => print!("{rendered}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn step_str(s: paths::Step) -> String {
    if s.reversed {
        format!("~{}", s.edge)
    } else {
        format!("{}", s.edge)
    }
}

fn two_cell_exit(e: &TwoCellError) -> u8 {
    match e {
        TwoCellError::HypothesisViolated(_) => EXIT_HYPOTHESIS,
        TwoCellError::NonDirectedEndpoint => EXIT_PARSE,
        _ => EXIT_PARSE,
    }
}

fn lint_warnings(input: &InputArgs) -> Vec<String> {
    let Some(text) = input
        .expr
        .clone()
        .or_else(|| input.file.as_ref().and_then(|p| std::fs::read_to_string(p).ok()))
    else {
        return Vec::new();
    };
    lang::parse(&text).map(|p| lang::lint(&p)).unwrap_or_default()
}

/// Min and max potential coordinate over all vertices, for program inputs.
fn potentials_range(input: &InputArgs) -> Option<(i64, i64)> {
    let text = input.expr.clone().or_else(|| {
        input.file.as_ref().and_then(|p| std::fs::read_to_string(p).ok())
    })?;
    let program = lang::parse(&text).ok()?;
    let cs = lang::cs_semantics(&program);
    let pot = lang::potential(&cs).ok()?;
    let mut lo = 0i64;
    let mut hi = 0i64;
    for rv in &pot {
        for v in rv.values() {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
    }
    Some((lo, hi))
}
