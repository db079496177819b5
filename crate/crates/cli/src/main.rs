//! Command-line front end: instance generation, algorithm runs with
//! machine-readable reports, and verification against the exact oracles.
//!
//! Exit codes: 0 verified/ok, 1 verification failure, 2 usage error,
//! 3 budget/threshold refusal (including lightness preconditions).

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::One;

use pareto_tsp::bicriteria::{self, MonoSolver};
use pareto_tsp::decompose;
use pareto_tsp::error::Error;
use pareto_tsp::gen;
use pareto_tsp::graph::{weight_of, EdgeSet, Instance, Orientation};
use pareto_tsp::io;
use pareto_tsp::maxtsp::{self, Budgets};
use pareto_tsp::minatsp::{self, MinAtspParams};
use pareto_tsp::oracle;
use pareto_tsp::pareto::{verify_approx_pareto, CcMode, ParetoSet, Sense};
use pareto_tsp::rat::{format_rat, parse_rat, rat, rat_int, Rat};
use pareto_tsp::{Result, WeightVector};

mod report;
use report::{OracleSection, Report, RunParams, Solution};

#[derive(Parser)]
#[command(name = "pareto-tsp", version, about = "Multi-criteria TSP approximation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance or fixture file.
    Gen(GenArgs),
    /// Run an algorithm on an instance and write a report.
    Run(RunArgs),
    /// Verify a report against its instance and the exact oracles.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Random,
    Metric,
    Gamma,
    Tournament,
    Pentagon,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    Directed,
    Undirected,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Directed => Orientation::Directed,
            OrientationArg::Undirected => Orientation::Undirected,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Gamma for the gamma kind, as "p/q".
    #[arg(long)]
    gamma: Option<String>,
    /// Epsilon for the tournament kind, as "p/q".
    #[arg(long)]
    eps: Option<String>,
    #[arg(long, default_value_t = 100)]
    max_weight: u64,
    #[arg(long, value_enum, default_value = "directed")]
    orientation: OrientationArg,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Algo {
    MaxAtsp,
    MaxStsp,
    TwoAlg,
    MinAtsp,
    DecomposeRand,
    DecomposeDet,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::MaxAtsp => "max-atsp",
            Algo::MaxStsp => "max-stsp",
            Algo::TwoAlg => "two-alg",
            Algo::MinAtsp => "min-atsp",
            Algo::DecomposeRand => "decompose-rand",
            Algo::DecomposeDet => "decompose-det",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CcModeArg {
    Exact,
    Scalarize,
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Args)]
struct RunArgs {
    #[arg(value_enum)]
    algorithm: Algo,
    instance: String,
    /// Epsilon as "p/q" (defaults: 3/10 for max-*, 1/2 for min-atsp,
    /// 1/5 for decompositions).
    #[arg(long)]
    eps: Option<String>,
    /// Gamma as "p/q"; defaults to the instance's declared gamma, or 1/1.
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    max_k_card: usize,
    #[arg(long, default_value_t = 12)]
    max_beta_grid: usize,
    #[arg(long, value_enum, default_value = "exact")]
    cc_mode: CcModeArg,
    /// Compare the output against the exact oracle in the report.
    #[arg(long, value_enum, default_value = "off")]
    oracle: OnOff,
    #[arg(long)]
    out: Option<String>,
    /// Worker threads; capped by the PARETO_TSP_THREADS environment
    /// variable when set.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Include wall-clock time in the report (breaks byte-determinism).
    #[arg(long, default_value_t = false)]
    timing: bool,
}

#[derive(Args)]
struct VerifyArgs {
    report: String,
    instance: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Run(args) => cmd_run(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Budget(_) | Error::Lightness { .. } => 3u8,
                _ => 2u8,
            };
            ExitCode::from(code)
        }
    }
}

fn write_out(path: &Option<String>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode> {
    let orientation: Orientation = args.orientation.into();
    let content = match args.kind {
        GenKind::Random => {
            io::instance_to_json(&gen::random_instance(orientation, args.n, args.k, args.seed, args.max_weight)?)
        }
        GenKind::Metric => {
            io::instance_to_json(&gen::metric_instance(orientation, args.n, args.k, args.seed)?)
        }
        GenKind::Gamma => {
            let g = parse_rat(args.gamma.as_deref().ok_or_else(|| {
                Error::Domain("the gamma kind requires --gamma p/q".into())
            })?)?;
            io::instance_to_json(&gen::gamma_instance(
                orientation,
                args.n,
                args.k,
                args.seed,
                &g,
                args.max_weight,
            )?)
        }
        GenKind::Tournament => {
            let eps = parse_rat(args.eps.as_deref().ok_or_else(|| {
                Error::Domain("the tournament kind requires --eps p/q".into())
            })?)?;
            // Orientation is implied by the objective count: powers of two
            // are directed brackets, powers of three undirected ones.
            let orientation = if args.k >= 4 && args.k.is_power_of_two() {
                Orientation::Directed
            } else {
                Orientation::Undirected
            };
            io::cover_to_json(&decompose::tournament_fixture(args.k, orientation, &eps)?)
        }
        GenKind::Pentagon => io::instance_to_json(&bicriteria::pentagon_fixture()),
    };
    write_out(&args.out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn thread_cap(requested: usize) -> usize {
    let cap = std::env::var("PARETO_TSP_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(usize::MAX);
    requested.clamp(1, cap.max(1))
}

fn default_eps(algo: Algo) -> Rat {
    match algo {
        Algo::MaxAtsp | Algo::MaxStsp => rat(3, 10),
        Algo::MinAtsp => rat(1, 2),
        _ => rat(1, 5),
    }
}

fn target_alpha(
    algo: Algo,
    eps: &Rat,
    gamma: &Rat,
    n: usize,
) -> (Rat, Sense) {
    match algo {
        Algo::MaxAtsp => (rat(1, 2) - eps, Sense::Max),
        Algo::MaxStsp => (rat(2, 3) - eps, Sense::Max),
        Algo::TwoAlg => (rat(1, 3), Sense::Max),
        Algo::MinAtsp => (minatsp::guaranteed_alpha(n, gamma, eps), Sense::Min),
        Algo::DecomposeRand | Algo::DecomposeDet => (rat(0, 1), Sense::Max),
    }
}

fn oracle_section(
    inst: &Instance,
    candidate: &ParetoSet,
    alpha: &Rat,
    sense: Sense,
) -> Result<OracleSection> {
    let reference = oracle::exact_tour_pareto(inst, sense)?;
    let res = verify_approx_pareto(candidate, &reference, alpha, sense)?;
    Ok(OracleSection {
        alpha: format_rat(alpha),
        ok: res.is_ok(),
        counterexample: res.err().map(|c| c.weight.0),
        achieved_ratio: achieved_ratio(candidate, &reference, sense).map(|r| format_rat(&r)),
    })
}

/// Best alpha at which the candidate covers the whole reference set.
fn achieved_ratio(cand: &ParetoSet, reference: &ParetoSet, sense: Sense) -> Option<Rat> {
    let cover_ratio = |c: &WeightVector, r: &WeightVector| -> Option<Rat> {
        // Worst per-coordinate factor of c against r.
        let mut worst: Option<Rat> = None;
        for (x, y) in c.0.iter().zip(&r.0) {
            let f = match (x, y, sense) {
                (0, 0, _) => continue,
                (_, 0, Sense::Max) => continue, // covering 0 is free
                (_, 0, Sense::Min) => return None,
                _ => rat_int(*x) / rat_int(*y),
            };
            worst = Some(match (worst, sense) {
                (None, _) => f,
                (Some(w), Sense::Max) => w.min(f),
                (Some(w), Sense::Min) => w.max(f),
            });
        }
        Some(worst.unwrap_or_else(Rat::one))
    };
    let mut overall: Option<Rat> = None;
    for (_, r) in &reference.items {
        let best = cand
            .items
            .iter()
            .filter_map(|(_, c)| cover_ratio(c, r))
            .reduce(|a, b| match sense {
                Sense::Max => a.max(b),
                Sense::Min => a.min(b),
            })?;
        overall = Some(match (overall, sense) {
            (None, _) => best,
            (Some(o), Sense::Max) => o.min(best),
            (Some(o), Sense::Min) => o.max(best),
        });
    }
    overall
}

fn cmd_run(args: RunArgs) -> Result<ExitCode> {
    let raw = std::fs::read_to_string(&args.instance)?;
    let eps = match &args.eps {
        Some(s) => parse_rat(s)?,
        None => default_eps(args.algorithm),
    };
    let start = std::time::Instant::now();
    let threads = thread_cap(args.threads);
    let cc_mode = match args.cc_mode {
        CcModeArg::Exact => CcMode::Exact,
        CcModeArg::Scalarize => CcMode::Scalarize,
    };

    if matches!(args.algorithm, Algo::DecomposeRand | Algo::DecomposeDet) {
        return run_decompose(&args, &raw, &eps, start);
    }

    let inst = io::instance_from_json(&raw)?;
    let digest = format!("fnv1a:{:016x}", fnv1a(io::instance_to_json(&inst).as_bytes()));
    let gamma = match &args.gamma {
        Some(s) => parse_rat(s)?,
        None => inst.gamma().cloned().unwrap_or_else(|| rat(1, 1)),
    };
    let budgets = Budgets {
        max_k_cardinality: args.max_k_card,
        max_beta_per_coord: args.max_beta_grid,
        cc_mode,
        threads,
        ..Budgets::default()
    };

    let (set, truncation, certificates): (ParetoSet, Option<maxtsp::Truncation>, Vec<Option<serde_json::Value>>) =
        match args.algorithm {
            Algo::MaxAtsp => {
                let out = maxtsp::max_atsp(&inst, &eps, &rat(1, 2), &budgets, args.seed)?;
                (out.set, Some(out.truncation), Vec::new())
            }
            Algo::MaxStsp => {
                let out = maxtsp::max_stsp(&inst, &eps, &rat(1, 2), &budgets, args.seed)?;
                (out.set, Some(out.truncation), Vec::new())
            }
            Algo::TwoAlg => {
                let r = bicriteria::two_alg(&inst, 0, 1, MonoSolver::Exact)?;
                let w = weight_of(&inst, &r.tour)?;
                let cert = serde_json::json!({
                    "first_chain_holds": r.first_chain_holds,
                    "second_chain_holds": r.second_chain_holds,
                });
                let mut set = ParetoSet::new(Sense::Max);
                set.items.push((r.tour.clone(), w));
                (set, None, vec![Some(cert)])
            }
            Algo::MinAtsp => {
                let params = MinAtspParams {
                    eps: eps.clone(),
                    gamma: gamma.clone(),
                    cc_mode,
                    ..MinAtspParams::new(eps.clone(), gamma.clone())
                };
                let out = minatsp::min_atsp(&inst, &params)?;
                let certs = out
                    .certificates
                    .iter()
                    .map(|c| {
                        Some(serde_json::json!({
                            "depths": c.depths,
                            "accumulated": c.accumulated.iter().map(format_rat).collect::<Vec<_>>(),
                            "tour_weight": c.tour_weight.0.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                            "weight_at_most_accumulated": c.holds,
                        }))
                    })
                    .collect();
                let trunc = maxtsp::Truncation {
                    cc_heuristic: !out.guaranteed,
                    ..Default::default()
                };
                (out.pareto, Some(trunc), certs)
            }
            Algo::DecomposeRand | Algo::DecomposeDet => unreachable!(),
        };

    // Attach certificates before sorting (aligned by construction).
    let mut solutions: Vec<Solution> = set
        .items
        .iter()
        .enumerate()
        .map(|(i, (edges, w))| Solution {
            edges: edges.iter().copied().collect(),
            weight: w.0.clone(),
            certificate: certificates.get(i).cloned().flatten(),
        })
        .collect();
    solutions.sort_by(|a, b| (&a.weight, &a.edges).cmp(&(&b.weight, &b.edges)));

    let oracle_part = match args.oracle {
        OnOff::Off => None,
        OnOff::On => {
            let (alpha, sense) = target_alpha(args.algorithm, &eps, &gamma, inst.n());
            Some(oracle_section(&inst, &set, &alpha, sense)?)
        }
    };
    let any_trunc = truncation.is_some_and(|t| !t.formal_guarantee());
    let report = Report {
        algorithm: args.algorithm.name().to_string(),
        instance_digest: digest,
        params: RunParams {
            eps: Some(format_rat(&eps)),
            gamma: Some(format_rat(&gamma)),
            seed: args.seed,
            max_k_cardinality: args.max_k_card,
            max_beta_per_coord: args.max_beta_grid,
            cc_mode: match cc_mode {
                CcMode::Exact => "exact".into(),
                CcMode::Scalarize => "scalarize".into(),
            },
            threads,
        },
        truncation: if any_trunc { truncation } else { None },
        solutions,
        oracle: oracle_part,
        wall_time_ms: args.timing.then(|| start.elapsed().as_millis()),
    };
    let json = report.to_json();
    write_out(&args.out, &json)?;
    let ok = report.oracle.as_ref().is_none_or(|o| o.ok);
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_decompose(args: &RunArgs, raw: &str, eps: &Rat, start: std::time::Instant) -> Result<ExitCode> {
    let cover = io::cover_from_json(raw)?;
    let digest = format!("fnv1a:{:016x}", fnv1a(io::cover_to_json(&cover).as_bytes()));
    let d = match args.algorithm {
        Algo::DecomposeRand => decompose::decompose_randomized(&cover, eps, args.seed, 64)?,
        Algo::DecomposeDet => decompose::decompose_deterministic(&cover, eps)?,
        _ => unreachable!(),
    };
    let total = cover.total_weight();
    let ratio = decompose::target_ratio(cover.orientation(), eps);
    let met = decompose::meets_ratio(&d.weight, &total, &ratio);
    let cert = serde_json::json!({
        "target_ratio": format_rat(&ratio),
        "cover_weight": total.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "bound_met": met,
        "removed_edge_ids": d.removed_ids.iter().copied().collect::<Vec<_>>(),
    });
    let edges: Vec<(usize, usize)> = d.kept.iter().map(|e| (e.tail, e.head)).collect();
    let report = Report {
        algorithm: args.algorithm.name().to_string(),
        instance_digest: digest,
        params: RunParams {
            eps: Some(format_rat(eps)),
            gamma: None,
            seed: args.seed,
            max_k_cardinality: args.max_k_card,
            max_beta_per_coord: args.max_beta_grid,
            cc_mode: "exact".into(),
            threads: 1,
        },
        truncation: None,
        solutions: vec![Solution { edges, weight: d.weight.clone(), certificate: Some(cert) }],
        oracle: None,
        wall_time_ms: args.timing.then(|| start.elapsed().as_millis()),
    };
    write_out(&args.out, &report.to_json())?;
    Ok(if met { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let report: Report = serde_json::from_str(&std::fs::read_to_string(&args.report)?)?;
    let raw = std::fs::read_to_string(&args.instance)?;
    let eps = report.params.eps.as_deref().map(parse_rat).transpose()?.unwrap_or_else(|| rat(0, 1));

    if report.algorithm.starts_with("decompose") {
        let cover = io::cover_from_json(&raw)?;
        let total = cover.total_weight();
        let ratio = decompose::target_ratio(cover.orientation(), &eps);
        for sol in &report.solutions {
            // Recompute the kept weight from the cover's own edges.
            let mut recomputed = vec![0u128; cover.k()];
            for &(u, v) in &sol.edges {
                let e = cover
                    .all_edges()
                    .find(|e| (e.tail, e.head) == (u, v) || (cover.orientation() == Orientation::Undirected && (e.head, e.tail) == (u, v)))
                    .ok_or(Error::InvalidEdge(u, v))?;
                for (a, b) in recomputed.iter_mut().zip(&e.weight) {
                    *a += b;
                }
            }
            if recomputed != sol.weight {
                println!("verify: FAIL (reported weight {:?} differs from recomputed {:?})", sol.weight, recomputed);
                return Ok(ExitCode::from(1));
            }
            if !decompose::meets_ratio(&recomputed, &total, &ratio) {
                println!("verify: FAIL (decomposition below target ratio {})", format_rat(&ratio));
                return Ok(ExitCode::from(1));
            }
        }
        println!("verify: ok (decomposition bound at ratio {})", format_rat(&ratio));
        return Ok(ExitCode::SUCCESS);
    }

    let inst = io::instance_from_json(&raw)?;
    let digest = format!("fnv1a:{:016x}", fnv1a(io::instance_to_json(&inst).as_bytes()));
    if digest != report.instance_digest {
        println!("verify: FAIL (instance digest mismatch)");
        return Ok(ExitCode::from(1));
    }
    let algo = match report.algorithm.as_str() {
        "max-atsp" => Algo::MaxAtsp,
        "max-stsp" => Algo::MaxStsp,
        "two-alg" => Algo::TwoAlg,
        "min-atsp" => Algo::MinAtsp,
        other => return Err(Error::Parse(format!("unknown algorithm {other:?}"))),
    };
    let gamma = report.params.gamma.as_deref().map(parse_rat).transpose()?.unwrap_or_else(|| rat(1, 1));
    let (alpha, sense) = target_alpha(algo, &eps, &gamma, inst.n());

    // Rebuild the candidate set, recomputing weights from the edges; any
    // tampered weight surfaces here.
    let mut cand = ParetoSet::new(sense);
    for (i, sol) in report.solutions.iter().enumerate() {
        let set = EdgeSet::from_edges(inst.orientation(), sol.edges.iter().copied());
        let w = weight_of(&inst, &set)?;
        if w.0 != sol.weight {
            println!(
                "verify: FAIL (solution {i} reports weight {:?}, edges weigh {:?})",
                sol.weight, w.0
            );
            return Ok(ExitCode::from(1));
        }
        cand.items.push((set, w));
    }
    let reference = oracle::exact_tour_pareto(&inst, sense)?;
    match verify_approx_pareto(&cand, &reference, &alpha, sense)? {
        Ok(()) => {
            println!("verify: ok at alpha {}", format_rat(&alpha));
            Ok(ExitCode::SUCCESS)
        }
        Err(cex) => {
            println!(
                "verify: FAIL (reference solution {:?} not covered at alpha {})",
                cex.weight.0,
                format_rat(&alpha)
            );
            Ok(ExitCode::from(1))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable() {
        assert_eq!(fnv1a(b"abc"), fnv1a(b"abc"));
        assert_ne!(fnv1a(b"abc"), fnv1a(b"abd"));
    }

    #[test]
    fn thread_cap_respects_env() {
        // No env set in tests by default: cap is the request itself.
        assert_eq!(thread_cap(0), 1);
        assert!(thread_cap(4) >= 1);
    }
}
