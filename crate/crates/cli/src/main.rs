use std::f64::consts::FRAC_1_SQRT_2;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use entbounds_core::cloning::{clone_bound_combined, crossover, crossover_gap};
use entbounds_core::deleting::{delete_bound, local_delete_swap, schmidt_rank_nogo_check};
use entbounds_core::nogo::{measure_forget_channel, no_local_cloning_certificate};
use entbounds_core::variational::{optimize_clone, optimize_delete, SearchReport};
use entbounds_core::{Ket, SchmidtPair};

/// Inputs typed with ten digits land just above `1/√2`; they are snapped to it.
const INPUT_SLACK: f64 = 1e-9;
const SWEEP_START: f64 = 0.01;
const WITNESS_TOL: f64 = 1e-12;
const MEASURE_FORGET_KETS: usize = 200;
const MEASURE_FORGET_SEED: u64 = 0x5eed_f0e7;

#[derive(Parser)]
#[command(name = "entbounds", version, about = "Bounds on the entanglement of cloning and deleting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Both cloning bounds and their minimum at one Schmidt coefficient.
    CloneBound {
        #[arg(long, value_parser = positive_schmidt)]
        a: f64,
    },
    /// Deleting bound from the swap deleter at one Schmidt coefficient.
    DeleteBound {
        #[arg(long, value_parser = schmidt)]
        a: f64,
    },
    /// Writes both bounds on a uniform grid of Schmidt coefficients as CSV.
    Sweep {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        points: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Schmidt coefficient where the two cloning bounds cross.
    Crossover,
    /// No-go witnesses.
    Nogo {
        which: Witness,
        #[arg(long, value_parser = schmidt)]
        a: Option<f64>,
    },
    /// Searches local unitaries for objectives below the analytic bounds.
    Variational {
        kind: Kind,
        #[arg(long, value_parser = schmidt)]
        a: f64,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        restarts: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Witness {
    Schmidt,
    MeasureForget,
    Distill,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Clone,
    Delete,
}

fn schmidt(s: &str) -> std::result::Result<f64, String> {
    let a: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(0.0..=FRAC_1_SQRT_2 + INPUT_SLACK).contains(&a) {
        return Err(format!("a must lie in [0, 1/√2], got {a}"));
    }
    Ok(a.min(FRAC_1_SQRT_2))
}

fn positive_schmidt(s: &str) -> std::result::Result<f64, String> {
    let a = schmidt(s)?;
    if a <= 0.0 {
        return Err("a must be positive".into());
    }
    Ok(a)
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.9}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|c| c == b'0' || c == b'.') => rest.to_string(),
        _ => s,
    }
}

fn pair(a: f64) -> Result<SchmidtPair> {
    SchmidtPair::new(a).context("invalid Schmidt coefficient")
}

struct SweepRow {
    a: f64,
    e_r: f64,
    s_clone: f64,
    c_bound: f64,
    d_bound: f64,
}

fn sweep_rows(points: usize) -> Result<Vec<SweepRow>> {
    (0..points)
        .into_par_iter()
        .map(|i| {
            let a = SWEEP_START + (FRAC_1_SQRT_2 - SWEEP_START) * i as f64 / (points - 1) as f64;
            let p = pair(a.min(FRAC_1_SQRT_2))?;
            let rec = clone_bound_combined(p);
            Ok(SweepRow {
                a,
                e_r: rec.e_r,
                s_clone: rec.s_clone,
                c_bound: rec.combined,
                d_bound: delete_bound(p),
            })
        })
        .collect()
}

fn random_qubit(rng: &mut impl Rng) -> Result<Ket> {
    let amps = (0..2)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    Ok(Ket::normalized(amps, &[2], &["S"])?)
}

fn print_search(kind: &str, a: f64, r: &SearchReport) -> bool {
    let ok = r.within_reference();
    println!(
        "kind={kind} a={} best_objective={} reference_bound={} restarts={} best_restart={} seed={} evaluations={} verdict={}",
        fmt(a),
        fmt(r.best_objective),
        fmt(r.reference_bound),
        r.restarts_used,
        r.best_restart,
        r.seed,
        r.evaluations,
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::CloneBound { a } => {
            let rec = clone_bound_combined(pair(a)?);
            println!(
                "a={} E_R={} S_clone={} combined={}",
                fmt(a),
                fmt(rec.e_r),
                fmt(rec.s_clone),
                fmt(rec.combined)
            );
            Ok(true)
        }
        Command::DeleteBound { a } => {
            let p = pair(a)?;
            let swap = local_delete_swap(p)?;
            println!(
                "a={} E={} D_bound={} keep_term={} separable_term={}",
                fmt(a),
                fmt(p.entanglement()),
                fmt(delete_bound(p)),
                fmt(swap.term_keep),
                fmt(swap.term_separable)
            );
            Ok(true)
        }
        Command::Sweep { points, out } => {
            let rows = sweep_rows(points as usize)?;
            let mut csv = String::from("a,E_R,S_clone,C_bound,D_bound\n");
            for r in &rows {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt(r.a),
                    fmt(r.e_r),
                    fmt(r.s_clone),
                    fmt(r.c_bound),
                    fmt(r.d_bound)
                ));
            }
            std::fs::write(&out, csv).with_context(|| format!("writing {}", out.display()))?;
            let dominated = rows.iter().all(|r| r.d_bound >= r.c_bound);
            println!("rows={} out={} dominance={}", rows.len(), out.display(), dominated);
            Ok(dominated)
        }
        Command::Crossover => {
            let root = crossover()?;
            println!("crossover={root:.6} residual={:.3e}", crossover_gap(root)?);
            Ok(true)
        }
        Command::Nogo { which, a } => match which {
            Witness::Schmidt => {
                let a = a.unwrap_or(FRAC_1_SQRT_2);
                let c = schmidt_rank_nogo_check(pair(a)?)?;
                println!(
                    "witness=schmidt a={} rank_input={} rank_target={} verdict={}",
                    fmt(a),
                    c.rank_input,
                    c.rank_target,
                    if c.deletable { "deletable" } else { "FAIL-to-delete" }
                );
                Ok(true)
            }
            Witness::MeasureForget => {
                let kets = match a {
                    Some(a) => vec![Ket::qubit(a, (1.0 - a * a).sqrt(), "S")?],
                    None => {
                        let mut rng = ChaCha8Rng::seed_from_u64(MEASURE_FORGET_SEED);
                        (0..MEASURE_FORGET_KETS)
                            .map(|_| random_qubit(&mut rng))
                            .collect::<Result<_>>()?
                    }
                };
                let mut worst: f64 = 0.0;
                for k in &kets {
                    worst = worst.max(measure_forget_channel(k)?.residual());
                }
                let ok = worst < WITNESS_TOL;
                println!(
                    "witness=measure-forget kets={} residual={:.3e} verdict={}",
                    kets.len(),
                    worst,
                    if ok { "PASS" } else { "FAIL" }
                );
                Ok(ok)
            }
            Witness::Distill => {
                let a = a.unwrap_or(FRAC_1_SQRT_2);
                let c = no_local_cloning_certificate(pair(a)?)?;
                println!(
                    "witness=distill a={} ed_input={} ed_required={} contradiction={} verdict=PASS",
                    fmt(a),
                    fmt(c.ed_input),
                    fmt(c.ed_required),
                    c.contradiction
                );
                Ok(true)
            }
        },
        Command::Variational {
            kind,
            a,
            restarts,
            seed,
        } => {
            let p = pair(a)?;
            Ok(match kind {
                Kind::Clone => print_search("clone", a, &optimize_clone(p, restarts as usize, seed)?),
                Kind::Delete => print_search("delete", a, &optimize_delete(p, restarts as usize, seed)?),
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
