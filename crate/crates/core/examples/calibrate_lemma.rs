//! Generates the lemma-scan threshold fixture used by the acceptance suite.
//!
//! For every non-principal character mod `D ≤ d-max` and every `x` in the
//! sweep `1000·2^k < x-max` plus `x-max`, runs the dyadic lemma scan on a grid
//! `spacing-divisor / 8` times finer than the default, and records the largest
//! value per character together with `value + margin` as its threshold.
//!
//! ```text
//! cargo run --release --example calibrate_lemma -- --out crates/core/tests/fixtures/lemma_thresholds.json
//! ```

use clap::Parser;
use large_sieve::characters::character_group;
use large_sieve::euler_sums::{dyadic_grid, lemma_sup_scan_with, ScanOptions, SumSpec, YGrid};
use large_sieve::number_core::sieve_primes;
use serde::Serialize;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
struct Args {
    #[arg(long, default_value_t = 101)]
    d_max: u64,
    #[arg(long, default_value_t = 100_000)]
    x_max: u64,
    #[arg(long, default_value_t = 32.0)]
    spacing_divisor: f64,
    #[arg(long, default_value_t = 1e-3)]
    margin: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct Entry {
    d: u64,
    character: usize,
    oracle_max: f64,
    x_at_max: u64,
    threshold: f64,
}

#[derive(Serialize)]
struct Fixture {
    b_exponent: f64,
    d_max: u64,
    x_values: Vec<u64>,
    spacing_divisor: f64,
    margin: f64,
    entries: Vec<Entry>,
}

fn x_sweep(x_max: u64) -> Vec<u64> {
    let mut xs: Vec<u64> = (0..).map(|k| 1000u64 << k).take_while(|&x| x < x_max).collect();
    xs.push(x_max);
    xs
}

fn main() -> large_sieve::Result<()> {
    let args = Args::parse();
    let start = Instant::now();
    let xs = x_sweep(args.x_max);
    let table = sieve_primes(args.x_max)?;
    let opts = ScanOptions { spacing_divisor: args.spacing_divisor, ..ScanOptions::default() };
    let mut entries = Vec::new();
    for d in 3..=args.d_max {
        for chi in character_group(d)?.iter().filter(|c| !c.is_principal()) {
            let mut best = (f64::NEG_INFINITY, 0);
            for &x in &xs {
                let spec = SumSpec::new(d, x, 1.0)?;
                let grid = dyadic_grid(d, x);
                let r = lemma_sup_scan_with(chi, &spec, &grid, &YGrid::Points(grid.clone()), &table, spec.t_half_width(), &opts)?;
                if r.max_value > best.0 {
                    best = (r.max_value, x);
                }
            }
            entries.push(Entry { d, character: chi.index(), oracle_max: best.0, x_at_max: best.1, threshold: best.0 + args.margin });
        }
        eprintln!("D = {d} done after {:.1} s", start.elapsed().as_secs_f64());
    }
    let fixture = Fixture {
        b_exponent: 1.0,
        d_max: args.d_max,
        x_values: xs,
        spacing_divisor: args.spacing_divisor,
        margin: args.margin,
        entries,
    };
    let text = serde_json::to_string_pretty(&fixture).map_err(|e| large_sieve::Error::Config(e.to_string()))?;
    std::fs::write(&args.out, text + "\n")?;
    Ok(())
}
