use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use cftp_coloring::verify::{
    coalescence_stats, count_colorings, for_each_coloring, marginal_suite, uniformity_test, write_drift_csv,
};
use cftp_coloring::{
    generators, load_graph_file, perfect_sample, perfect_sample_with, validate_instance, Graph, MasterSeed,
    SampleOptions, SampleOutcome, StepRecord, VERSION,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::args::{BenchArgs, EnumerateArgs, Instance, OracleArgs, OutputFormat, SampleArgs, VerifyArgs};

fn load(instance: &Instance) -> Result<Graph> {
    load_graph_file(&instance.graph, instance.format).with_context(|| format!("reading {}", instance.graph.display()))
}

fn resolve_seed(seed: Option<MasterSeed>) -> MasterSeed {
    seed.unwrap_or_else(|| {
        let s = MasterSeed(rand::random());
        eprintln!("seed: {s}");
        s
    })
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?)
}

fn emit<T: Serialize>(out: &mut impl Write, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct SampleLine<'a> {
    n: usize,
    k: u32,
    seed: MasterSeed,
    #[serde(skip_serializing_if = "Option::is_none")]
    master_seed: Option<MasterSeed>,
    #[serde(skip_serializing_if = "Option::is_none")]
    index: Option<u64>,
    blocks_used: u64,
    coloring: &'a [u32],
    graph_hash: &'a str,
    version: &'a str,
}

pub fn sample(a: SampleArgs) -> Result<bool> {
    let g = load(&a.instance)?;
    let k = a.instance.k;
    validate_instance(&g, k)?;
    let master = resolve_seed(a.seed);
    let seeds: Vec<MasterSeed> = if a.n == 1 {
        vec![master]
    } else {
        (0..a.n).map(|i| master.child(i)).collect()
    };
    let options = SampleOptions {
        spill_dir: a.spill.clone(),
        extra_blocks: 0,
    };

    let outcomes: Vec<SampleOutcome> = if a.trace {
        let stderr = io::stderr();
        let mut err = BufWriter::new(stderr.lock());
        let mut failure = None;
        let mut outs = Vec::with_capacity(seeds.len());
        for (i, &seed) in seeds.iter().enumerate() {
            let mut observer = |r: &StepRecord<'_>| {
                let line = json!({
                    "sample": i,
                    "block": r.block,
                    "step": r.step,
                    "phase": r.phase,
                    "tuple": r.tuple,
                    "singletons_before": r.singletons_before,
                    "singletons_after": r.state.singletons(),
                });
                if let Err(e) = emit(&mut err, &line) {
                    failure.get_or_insert(e);
                }
            };
            outs.push(perfect_sample_with(&g, k, seed, &options, &mut observer)?);
        }
        err.flush()?;
        if let Some(e) = failure {
            return Err(e);
        }
        outs
    } else {
        pool(a.jobs)?.install(|| {
            seeds
                .par_iter()
                .map(|&seed| perfect_sample_with(&g, k, seed, &options, &mut ()))
                .collect::<cftp_coloring::Result<_>>()
        })?
    };

    let hash = g.fingerprint();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    if a.output == OutputFormat::Csv {
        let header: Vec<String> = (1..=g.n()).map(|v| format!("c{v}")).collect();
        writeln!(
            out,
            "index,seed,blocks_used{}{}",
            if g.n() > 0 { "," } else { "" },
            header.join(",")
        )?;
    }
    for (i, (seed, o)) in seeds.iter().zip(&outcomes).enumerate() {
        match a.output {
            OutputFormat::Json => emit(
                &mut out,
                &SampleLine {
                    n: g.n(),
                    k,
                    seed: *seed,
                    master_seed: (a.n != 1).then_some(master),
                    index: (a.n != 1).then_some(i as u64),
                    blocks_used: o.blocks_used,
                    coloring: o.coloring.as_slice(),
                    graph_hash: &hash,
                    version: VERSION,
                },
            )?,
            OutputFormat::Csv => {
                let colors: Vec<String> = o.coloring.as_slice().iter().map(|c| c.to_string()).collect();
                writeln!(
                    out,
                    "{i},{seed},{}{}{}",
                    o.blocks_used,
                    if colors.is_empty() { "" } else { "," },
                    colors.join(",")
                )?;
            }
        }
    }
    out.flush()?;
    let total_blocks: u64 = outcomes.iter().map(|o| o.blocks_used).sum();
    eprintln!(
        "{} sample(s) of n={} k={} Δ={} (master seed {master}); mean blocks {:.3}",
        outcomes.len(),
        g.n(),
        k,
        g.max_degree(),
        total_blocks as f64 / outcomes.len().max(1) as f64
    );
    Ok(true)
}

pub fn verify(a: VerifyArgs) -> Result<bool> {
    let g = load(&a.instance)?;
    let k = a.instance.k;
    validate_instance(&g, k)?;
    let seed = resolve_seed(a.seed);
    let hash = g.fingerprint();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let common = json!({"seed": seed, "k": k, "n": g.n(), "graph_hash": hash, "version": VERSION});
    let with_common = |mut v: serde_json::Value| {
        if let (Some(obj), Some(c)) = (v.as_object_mut(), common.as_object()) {
            for (key, val) in c {
                obj.insert(key.clone(), val.clone());
            }
        }
        v
    };
    let mut all_pass = true;
    let pool = pool(a.jobs)?;

    if a.samples > 0 {
        let r = pool.install(|| uniformity_test(&g, k, a.samples, seed.child(0)))?;
        all_pass &= r.pass;
        eprintln!(
            "uniformity: χ²={:.2} (df={}, threshold {:.2}), TV≈{:.4}",
            r.chi_square, r.df, r.threshold, r.tv_estimate
        );
        emit(
            &mut out,
            &with_common(json!({
                "name": "uniformity",
                "statistic": r.chi_square,
                "threshold": r.threshold,
                "pass": r.pass,
                "df": r.df,
                "samples": r.samples,
                "tv_estimate": r.tv_estimate,
            })),
        )?;
    }

    if a.trials > 0 {
        let r = pool.install(|| coalescence_stats(&g, k, a.trials, seed.child(1)))?;
        let phi_pass = r.phi_rate >= 0.45;
        let blocks_pass = r.mean_blocks <= 2.2;
        let judged: Vec<_> = r.drift.iter().filter(|b| b.count >= a.min_bin).collect();
        let violations = judged.iter().filter(|b| !b.consistent()).count();
        all_pass &= phi_pass && blocks_pass && violations == 0;
        eprintln!(
            "coalescence: Φ-rate {:.3}, mean blocks {:.3}, drift violations {violations}/{}",
            r.phi_rate,
            r.mean_blocks,
            judged.len()
        );
        emit(
            &mut out,
            &with_common(
                json!({"name": "phi_rate", "statistic": r.phi_rate, "threshold": 0.45, "pass": phi_pass, "trials": r.trials}),
            ),
        )?;
        emit(
            &mut out,
            &with_common(
                json!({"name": "mean_blocks", "statistic": r.mean_blocks, "threshold": 2.2, "pass": blocks_pass, "max_blocks": r.max_blocks}),
            ),
        )?;
        emit(
            &mut out,
            &with_common(
                json!({"name": "drift", "statistic": violations, "threshold": 0, "pass": violations == 0, "bins_judged": judged.len(), "min_bin": a.min_bin}),
            ),
        )?;
        if let Some(path) = &a.drift_csv {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_drift_csv(BufWriter::new(file), &r.drift)?;
        }
    }
    out.flush()?;
    Ok(all_pass)
}

pub fn oracle_check(a: OracleArgs) -> Result<bool> {
    let g = load(&a.instance)?;
    let k = a.instance.k;
    validate_instance(&g, k)?;
    let seed = resolve_seed(a.seed);
    let r = marginal_suite(&g, k, a.updates, seed)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    emit(
        &mut out,
        &json!({
            "name": "exact_marginal",
            "statistic": r.mismatches,
            "threshold": 0,
            "pass": r.pass(),
            "updates": r.updates,
            "triples": r.triples,
            "first_mismatch": r.first_mismatch,
            "seed": seed, "k": k, "n": g.n(), "graph_hash": g.fingerprint(), "version": VERSION,
        }),
    )?;
    eprintln!(
        "exact marginal: {} triples over {} updates, {} mismatches",
        r.triples, r.updates, r.mismatches
    );
    Ok(r.pass())
}

pub fn enumerate(a: EnumerateArgs) -> Result<bool> {
    let g = load(&a.instance)?;
    let k = a.instance.k;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let count = if a.list {
        let mut count = 0u64;
        let mut failure = None;
        for_each_coloring(&g, k, |c| {
            count += 1;
            if let Err(e) = emit(&mut out, &c) {
                failure.get_or_insert(e);
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        count
    } else {
        count_colorings(&g, k)?
    };
    writeln!(out, "{count}")?;
    out.flush()?;
    Ok(true)
}

#[derive(Serialize)]
struct BenchRow {
    n: usize,
    delta: u32,
    k: u32,
    seeds: u64,
    median_seconds: f64,
    mean_blocks: f64,
    graph_hash: String,
    version: &'static str,
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

fn bench_cell(g: &Graph, k: u32, seeds: &[MasterSeed], jobs: &rayon::ThreadPool) -> Result<(f64, f64)> {
    let runs: Vec<(f64, u64)> = jobs.install(|| {
        seeds
            .par_iter()
            .map(|&s| {
                let start = Instant::now();
                let o = perfect_sample(g, k, s)?;
                Ok((start.elapsed().as_secs_f64(), o.blocks_used))
            })
            .collect::<cftp_coloring::Result<_>>()
    })?;
    let mut times: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let blocks = runs.iter().map(|r| r.1).sum::<u64>() as f64 / runs.len() as f64;
    Ok((median(&mut times), blocks))
}

pub fn bench(a: BenchArgs) -> Result<bool> {
    if a.seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    let master = a.seed.unwrap_or(MasterSeed(0));
    let seeds: Vec<MasterSeed> = (0..a.seeds).map(|i| master.child(i)).collect();
    let jobs = pool(a.jobs)?;

    let mut cells: Vec<(Graph, u32)> = Vec::new();
    if let Some(path) = &a.graph {
        let g = load_graph_file(path, a.format).with_context(|| format!("reading {}", path.display()))?;
        let k = a.k.expect("clap enforces --k with --graph");
        validate_instance(&g, k)?;
        cells.push((g, k));
    } else {
        for &delta in &a.degrees {
            for &n in &a.sizes {
                let g = generators::random_bounded_degree(n, delta, master.0 ^ (n as u64) << 8 ^ u64::from(delta));
                let mut ks = vec![3 * delta + 1, 4 * delta];
                if let Some(k) = a.k {
                    ks = vec![k];
                }
                ks.dedup();
                for k in ks {
                    cells.push((g.clone(), k));
                }
            }
        }
    }

    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    if a.output == OutputFormat::Csv {
        writeln!(out, "n,delta,k,seeds,median_seconds,mean_blocks")?;
    }
    for (g, k) in &cells {
        let (median_seconds, mean_blocks) = bench_cell(g, *k, &seeds, &jobs)?;
        let row = BenchRow {
            n: g.n(),
            delta: g.max_degree(),
            k: *k,
            seeds: a.seeds,
            median_seconds,
            mean_blocks,
            graph_hash: g.fingerprint(),
            version: VERSION,
        };
        match a.output {
            OutputFormat::Json => emit(&mut out, &row)?,
            OutputFormat::Csv => writeln!(
                out,
                "{},{},{},{},{:.6},{:.3}",
                row.n, row.delta, row.k, row.seeds, row.median_seconds, row.mean_blocks
            )?,
        }
        out.flush()?;
        eprintln!(
            "n={:<5} Δ={:<2} k={:<3} median {:.4}s  blocks {:.2}",
            row.n, row.delta, row.k, median_seconds, mean_blocks
        );
    }
    Ok(true)
}
