//! Strategy comparison on seeded random matrices.
//!
//! Trial `t` of a batch with seed `s` uses the matrix that
//! `gen-random --seed s+t` writes, so every row can be reproduced alone.

use std::fmt::Write as _;
use std::ops::ControlFlow;
use std::time::Duration;

use pdbarv::{decompose_streaming, Error, SignedCone, Stats, Strategy, StrategyConfig};
use rayon::prelude::*;

use crate::{random, BenchArgs, CliResult, Failure, EXIT_PARSE};

pub const HEADER: &str = "dim,seed,strategy,cones,lll_calls,elapsed_ms";

struct Row {
    dim: usize,
    seed: u64,
    strategy: Strategy,
    outcome: Result<Stats, Stats>,
}

fn run_one(dim: usize, seed: u64, bound: i64, strategy: Strategy, args: &BenchArgs) -> CliResult<Row> {
    let m = random::matrix(dim, bound, seed);
    let mut cfg = StrategyConfig::new(strategy, args.norm());
    cfg.time_budget = args.budget_seconds.map(Duration::from_secs_f64);
    let outcome = match decompose_streaming(&m, &cfg, &mut |_: SignedCone| ControlFlow::Continue(())) {
        Ok(stats) => Ok(stats),
        Err(Error::BudgetExceeded { stats, .. }) => Err(*stats),
        Err(e) => return Err(e.into()),
    };
    Ok(Row { dim, seed, strategy, outcome })
}

pub fn run(args: &BenchArgs) -> CliResult<String> {
    if args.dims.contains(&0) {
        return Err(Failure { code: EXIT_PARSE, msg: "--dims entries must be positive".into() });
    }
    if args.budget_seconds.is_some_and(|b| !(b.is_finite() && b > 0.0)) {
        return Err(Failure { code: EXIT_PARSE, msg: "--budget-seconds must be positive".into() });
    }
    let mut dims = args.dims.clone();
    dims.sort_unstable();
    dims.dedup();
    let mut jobs = Vec::new();
    for &dim in &dims {
        let bound = args.entry_bound.unwrap_or_else(|| random::default_entry_bound(dim));
        for t in 0..args.trials {
            for s in Strategy::ALL {
                jobs.push((dim, args.seed.wrapping_add(t as u64), bound, s));
            }
        }
    }
    let mut rows = jobs
        .into_par_iter()
        .map(|(dim, seed, bound, s)| run_one(dim, seed, bound, s, args))
        .collect::<CliResult<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.dim, r.seed, r.strategy));

    let mut out = format!("{HEADER}\n");
    for dim in dims {
        let mut ratios = Vec::new();
        let mut total_ms = 0u128;
        for trial in rows.iter().filter(|r| r.dim == dim).collect::<Vec<_>>().chunks(Strategy::ALL.len()) {
            let mut counts = [None; 3];
            for (k, r) in trial.iter().enumerate() {
                let (cones, stats) = match &r.outcome {
                    Ok(st) => {
                        counts[k] = Some(st.cones_emitted);
                        (st.cones_emitted.to_string(), st)
                    }
                    Err(st) => ("budget_exceeded".to_string(), st),
                };
                total_ms += stats.elapsed.as_millis();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.dim,
                    r.seed,
                    r.strategy.name(),
                    cones,
                    stats.lll_calls,
                    stats.elapsed.as_millis()
                );
            }
            if let [Some(p), Some(d), Some(pd)] = counts {
                ratios.push(p.min(d) as f64 / pd as f64);
            }
        }
        let mean = if ratios.is_empty() {
            "NA".to_string()
        } else {
            format!("{:.6}", ratios.iter().sum::<f64>() / ratios.len() as f64)
        };
        let _ = writeln!(out, "{dim},all,mean_ratio,{mean},{},{total_ms}", ratios.len());
    }
    Ok(out)
}
