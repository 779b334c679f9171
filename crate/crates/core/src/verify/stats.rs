//! Statistical checks of the sampler: goodness of fit against the enumerated
//! support, single-block coalescence rates, and the singleton drift.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{validate_instance, Coloring, Graph};
use crate::phase::{generate_block, generate_block_observed, Phase, StepRecord};
use crate::random::MasterSeed;
use crate::sampler::perfect_sample;
use crate::verify::enumerate::enumerate_colorings;

/// Upper 0.001 quantile of the standard normal.
const Z_999: f64 = 3.090_232_306_167_813;

pub const DEFAULT_ALPHA_Z: f64 = Z_999;

/// Pearson's statistic for `counts` against the uniform distribution on its cells.
pub fn pearson_chi_square(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if counts.is_empty() || total == 0 {
        return 0.0;
    }
    let expected = total as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum()
}

/// Wilson–Hilferty approximation to the α=0.001 upper quantile of χ²(df).
pub fn chi_square_critical(df: u64) -> f64 {
    chi_square_quantile_wh(df, Z_999)
}

/// Wilson–Hilferty with an arbitrary normal quantile `z`.
pub fn chi_square_quantile_wh(df: u64, z: f64) -> f64 {
    if df == 0 {
        return 0.0;
    }
    let d = df as f64;
    let a = 2.0 / (9.0 * d);
    d * (1.0 - a + z * a.sqrt()).powi(3)
}

/// Empirical total-variation distance from the uniform distribution on the cells.
pub fn total_variation(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if counts.is_empty() || total == 0 {
        return 0.0;
    }
    let u = 1.0 / counts.len() as f64;
    0.5 * counts.iter().map(|&c| (c as f64 / total as f64 - u).abs()).sum::<f64>()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformityReport {
    pub samples: u64,
    pub support: usize,
    pub df: u64,
    pub chi_square: f64,
    pub threshold: f64,
    pub tv_estimate: f64,
    pub pass: bool,
}

impl UniformityReport {
    pub fn from_counts(counts: &[u64]) -> Self {
        let df = counts.len().saturating_sub(1) as u64;
        let chi_square = pearson_chi_square(counts);
        let threshold = chi_square_critical(df);
        UniformityReport {
            samples: counts.iter().sum(),
            support: counts.len(),
            df,
            chi_square,
            threshold,
            tv_estimate: total_variation(counts),
            pass: chi_square < threshold,
        }
    }
}

/// Tallies `samples` perfect samples against the enumerated support. Sample
/// `i` uses seed `seed.child(i)`; trials run on the current rayon pool and
/// the tally does not depend on the pool size.
pub fn sample_counts(g: &Graph, k: u32, samples: u64, seed: MasterSeed) -> Result<Vec<u64>> {
    validate_instance(g, k)?;
    let support = enumerate_colorings(g, k)?;
    let index: HashMap<&Coloring, usize> = support.iter().enumerate().map(|(i, c)| (c, i)).collect();
    const CHUNK: u64 = 4096;
    let chunks: Vec<u64> = (0..samples.div_ceil(CHUNK)).collect();
    let partial: Vec<Vec<u64>> = chunks
        .par_iter()
        .map(|&chunk| -> Result<Vec<u64>> {
            let mut counts = vec![0u64; support.len()];
            for i in chunk * CHUNK..((chunk + 1) * CHUNK).min(samples) {
                let out = perfect_sample(g, k, seed.child(i))?;
                let cell = index.get(&out.coloring).ok_or_else(|| {
                    Error::OraclePrecondition(format!("sample {} is not a proper coloring", out.coloring))
                })?;
                counts[*cell] += 1;
            }
            Ok(counts)
        })
        .collect::<Result<_>>()?;
    let mut counts = vec![0u64; support.len()];
    for p in partial {
        for (c, x) in counts.iter_mut().zip(p) {
            *c += x;
        }
    }
    Ok(counts)
}

pub fn uniformity_test(g: &Graph, k: u32, samples: u64, seed: MasterSeed) -> Result<UniformityReport> {
    Ok(UniformityReport::from_counts(&sample_counts(g, k, samples, seed)?))
}

/// Increments of the singleton count `X_t` during coalescence, grouped by `X_t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftBin {
    pub singletons: usize,
    pub count: u64,
    pub mean: f64,
    pub stderr: f64,
    /// `((n − X)/n)·(1 − 2Δ/(k − Δ))`.
    pub bound: f64,
}

impl DriftBin {
    /// The bin is consistent with the drift lower bound at three standard errors.
    pub fn consistent(&self) -> bool {
        self.mean >= self.bound - 3.0 * self.stderr
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoalescenceReport {
    pub trials: u64,
    pub phi_rate: f64,
    pub mean_blocks: f64,
    pub max_blocks: u64,
    pub drift: Vec<DriftBin>,
}

#[derive(Clone, Copy, Default)]
struct Moments {
    count: u64,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(&mut self, other: &Moments) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }
}

struct Trial {
    phi: bool,
    blocks: u64,
    drift: BTreeMap<usize, Moments>,
}

/// Trial `t` generates one block under `seed.child(2t)` and runs the full
/// sampler under `seed.child(2t+1)`.
pub fn coalescence_stats(g: &Graph, k: u32, trials: u64, seed: MasterSeed) -> Result<CoalescenceReport> {
    validate_instance(g, k)?;
    let results: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<Trial> {
            let mut drift: BTreeMap<usize, Moments> = BTreeMap::new();
            let mut record = |r: &StepRecord<'_>| {
                if r.phase == Phase::Coalescence {
                    let inc = r.state.singletons() as f64 - r.singletons_before as f64;
                    drift.entry(r.singletons_before).or_default().push(inc);
                }
            };
            let block = generate_block_observed(g, k, seed.child(2 * t), 0, &mut record)?;
            let blocks = perfect_sample(g, k, seed.child(2 * t + 1))?.blocks_used;
            Ok(Trial {
                phi: block.phi,
                blocks,
                drift,
            })
        })
        .collect::<Result<_>>()?;

    let mut drift: BTreeMap<usize, Moments> = BTreeMap::new();
    let (mut phi, mut blocks, mut max_blocks) = (0u64, 0u64, 0u64);
    for trial in &results {
        phi += u64::from(trial.phi);
        blocks += trial.blocks;
        max_blocks = max_blocks.max(trial.blocks);
        for (x, m) in &trial.drift {
            drift.entry(*x).or_default().merge(m);
        }
    }
    let n = g.n() as f64;
    let delta = f64::from(g.max_degree());
    let factor = 1.0 - 2.0 * delta / (f64::from(k) - delta);
    let drift = drift
        .into_iter()
        .map(|(x, m)| {
            let c = m.count as f64;
            let mean = m.sum / c;
            let var = if m.count > 1 {
                ((m.sum_sq - c * mean * mean) / (c - 1.0)).max(0.0)
            } else {
                0.0
            };
            DriftBin {
                singletons: x,
                count: m.count,
                mean,
                stderr: (var / c).sqrt(),
                bound: (n - x as f64) / n * factor,
            }
        })
        .collect();
    let denom = trials.max(1) as f64;
    Ok(CoalescenceReport {
        trials,
        phi_rate: phi as f64 / denom,
        mean_blocks: blocks as f64 / denom,
        max_blocks,
        drift,
    })
}

/// Single-block Φ rate alone, without the sampler runs or drift bookkeeping.
pub fn phi_rate(g: &Graph, k: u32, trials: u64, seed: MasterSeed) -> Result<f64> {
    let hits: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|t| generate_block(g, k, seed.child(2 * t), 0).map(|b| b.phi))
        .collect::<Result<_>>()?;
    Ok(hits.iter().filter(|&&h| h).count() as f64 / trials.max(1) as f64)
}

pub fn write_drift_csv<W: Write>(mut out: W, bins: &[DriftBin]) -> Result<()> {
    writeln!(out, "singletons,count,mean,stderr,bound")?;
    for b in bins {
        writeln!(out, "{},{},{},{},{}", b.singletons, b.count, b.mean, b.stderr, b.bound)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    #[test]
    fn uniform_tallies_are_perfect() {
        let r = UniformityReport::from_counts(&[100; 12]);
        assert_eq!(r.chi_square, 0.0);
        assert_eq!(r.tv_estimate, 0.0);
        assert_eq!(r.df, 11);
        assert!(r.pass);
    }

    #[test]
    fn wilson_hilferty_is_close_to_the_exact_quantile() {
        for df in [1u64, 11, 209, 7769] {
            let exact = ChiSquared::new(df as f64).unwrap().inverse_cdf(0.999);
            let wh = chi_square_critical(df);
            let rel = (wh - exact).abs() / exact;
            assert!(rel < if df == 1 { 0.05 } else { 0.01 }, "df={df}: {wh} vs {exact}");
        }
        assert!((chi_square_critical(11) - 31.3).abs() < 0.3);
        assert!((chi_square_critical(209) - 279.0).abs() < 1.5);
    }

    #[test]
    fn lopsided_tallies() {
        let counts = [30, 10];
        assert!((pearson_chi_square(&counts) - 10.0).abs() < 1e-12);
        assert!((total_variation(&counts) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn single_vertex_sampler_is_uniform() {
        let g = Graph::edgeless(1);
        let counts = sample_counts(&g, 4, 40_000, MasterSeed(3)).unwrap();
        for c in counts {
            // 4σ around 10⁴ with σ = sqrt(4·10⁴·¼·¾).
            assert!((c as f64 - 10_000.0).abs() < 4.0 * 86.6, "{c}");
        }
    }

    #[test]
    fn edgeless_graphs_coalesce() {
        let g = Graph::edgeless(30);
        let r = coalescence_stats(&g, 4, 20, MasterSeed(1)).unwrap();
        assert!(r.phi_rate > 0.9, "{}", r.phi_rate);
        assert!(r.drift.iter().all(|b| b.mean >= 0.0));
    }

    #[test]
    fn report_is_independent_of_thread_count() {
        let g = generators::path(3);
        let pool = |t| rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap();
        let a = pool(1).install(|| coalescence_stats(&g, 7, 8, MasterSeed(5)).unwrap());
        let b = pool(3).install(|| coalescence_stats(&g, 7, 8, MasterSeed(5)).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn drift_csv_has_a_header() {
        let mut buf = Vec::new();
        write_drift_csv(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "singletons,count,mean,stderr,bound\n");
    }
}
