//! Exact law of the updated vertex's new color.
//!
//! For a fixed bounding state, vertex and compatible proper coloring, the
//! randomness of one update is finite apart from τ, and every decode branch
//! depends on τ only through comparisons with two rational thresholds. The
//! oracle enumerates all discrete choices, splits `[0, 1]` at the thresholds,
//! runs the real decoder once per piece with τ pinned inside that piece, and
//! weights the outcome by the exact probability of the piece.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_proper, validate_instance, Color, Coloring, Graph};
use crate::phase::{collapse_phase, generate_block_observed, Phase, StepRecord};
use crate::random::{substream, LazyReal, MasterSeed, Rational};
use crate::update::{contract_gen, BoundingState, PaletteSnapshot, UpdateKind, UpdateTuple};
use crate::verify::enumerate::enumerate_colorings;

/// Above this Δ the σ-enumeration is replaced by enumerating which color of
/// `A` comes first among those free of χ(N(v)).
const FULL_PERMUTATION_LIMIT: usize = 5;

/// A finitely supported distribution over colors with exact masses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDistribution {
    pub mass: BTreeMap<Color, BigRational>,
}

impl ExactDistribution {
    pub fn uniform<I: IntoIterator<Item = Color>>(support: I) -> Self {
        let support: Vec<Color> = support.into_iter().collect();
        let p = BigRational::new(BigInt::one(), BigInt::from(support.len()));
        ExactDistribution {
            mass: support.into_iter().map(|c| (c, p.clone())).collect(),
        }
    }

    pub fn total(&self) -> BigRational {
        self.mass.values().fold(BigRational::zero(), |acc, m| acc + m)
    }

    fn add(&mut self, c: Color, p: &BigRational) {
        if p.is_zero() {
            return;
        }
        let entry = self.mass.entry(c).or_insert_with(BigRational::zero);
        *entry += p;
    }
}

impl fmt::Display for ExactDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (c, m)) in self.mass.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}: {m}")?;
        }
        write!(f, "}}")
    }
}

/// Which update to integrate.
#[derive(Clone, Copy, Debug)]
pub enum MarginalUpdate<'a> {
    /// Compress with the given Δ-set.
    Compress(&'a [Color]),
    Contract,
}

impl MarginalUpdate<'_> {
    pub fn kind(&self) -> UpdateKind {
        match self {
            MarginalUpdate::Compress(_) => UpdateKind::Compress,
            MarginalUpdate::Contract => UpdateKind::Contract,
        }
    }
}

fn big(q: Rational) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

fn frac(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Splits `[0, 1]` at the given thresholds: `(midpoint, length)` per nonempty piece.
fn tau_pieces(thresholds: &[Rational]) -> Vec<(Rational, BigRational)> {
    let mut cuts: Vec<Rational> = vec![Rational::from_integer(0), Rational::from_integer(1)];
    cuts.extend(thresholds.iter().copied());
    cuts.sort();
    cuts.dedup();
    cuts.windows(2)
        .map(|w| ((w[0] + w[1]) / Rational::from_integer(2), big(w[1] - w[0])))
        .collect()
}

fn permutations(items: &[Color]) -> Vec<Vec<Color>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// The law of `χ′(v)` under generation followed by decoding.
pub fn exact_update_marginal(
    state: &BoundingState,
    g: &Graph,
    v: usize,
    chi: &Coloring,
    update: MarginalUpdate<'_>,
) -> Result<ExactDistribution> {
    let k = state.k();
    let delta = g.max_degree();
    if v >= g.n() || chi.len() != g.n() {
        return Err(Error::OraclePrecondition("vertex or coloring size out of range".into()));
    }
    if !is_proper(g, chi) || !state.is_compatible(chi) {
        return Err(Error::OraclePrecondition(format!(
            "{chi} is not a proper coloring compatible with the lists"
        )));
    }
    let used: BTreeSet<Color> = g.neighbors(v).iter().map(|&w| chi[w as usize]).collect();
    let busy = used.len() as u64;
    let mut dist = ExactDistribution { mass: BTreeMap::new() };

    match update {
        MarginalUpdate::Compress(a) => {
            let a_set: BTreeSet<Color> = a.iter().copied().collect();
            if a.len() != delta as usize || a_set.len() != a.len() || a.iter().any(|&c| c == 0 || c > k) {
                return Err(Error::OraclePrecondition(format!("{a:?} is not a Δ-subset of [k]")));
            }
            let others: Vec<Color> = (1..=k).filter(|c| !a_set.contains(c)).collect();
            let c1_weight = frac(1, others.len() as u64);

            let sigmas: Vec<(Vec<Color>, BigRational)> = if a.len() <= FULL_PERMUTATION_LIMIT {
                let all = permutations(a);
                let w = frac(1, all.len() as u64);
                all.into_iter().map(|s| (s, w.clone())).collect()
            } else {
                // Only the first color of σ outside χ(N(v)) can be chosen, and it is
                // uniform over A ∖ χ(N(v)); one representative σ per choice suffices.
                let free: Vec<Color> = a.iter().copied().filter(|c| !used.contains(c)).collect();
                if free.is_empty() {
                    vec![(a.to_vec(), BigRational::one())]
                } else {
                    let w = frac(1, free.len() as u64);
                    free.iter()
                        .map(|&first| {
                            let mut s = vec![first];
                            s.extend(a.iter().copied().filter(|&c| c != first));
                            (s, w.clone())
                        })
                        .collect()
                }
            };

            let p_chi = Rational::new(u64::from(delta) - busy, u64::from(k) - busy);
            let pieces = tau_pieces(&[p_chi]);
            for &c1 in &others {
                for (sigma, sigma_weight) in &sigmas {
                    for (mid, len) in &pieces {
                        let mut m = sigma.clone();
                        m.push(c1);
                        let tuple = UpdateTuple::Compress {
                            v: v as u32,
                            tau: LazyReal::at_point(*mid),
                            m: m.into_boxed_slice(),
                        };
                        let mut out = chi.clone();
                        tuple.apply(g, k, &mut out)?;
                        dist.add(out[v], &(c1_weight.clone() * sigma_weight * len));
                    }
                }
            }
        }
        MarginalUpdate::Contract => {
            let mut s_set = BTreeSet::new();
            let mut q_set = BTreeSet::new();
            for &w in g.neighbors(v) {
                let list = state.list(w as usize);
                if list.len() == 1 {
                    q_set.insert(list[0]);
                }
                s_set.extend(list);
            }
            let (s, q) = (s_set.len() as u64, q_set.len() as u64);
            if s + u64::from(delta) >= u64::from(k) {
                return Err(Error::OraclePrecondition(format!("|S_L(v)|={s} is not < k−Δ")));
            }
            let c1_options: Vec<Color> = (1..=k).filter(|c| !s_set.contains(c)).collect();
            let c1_weight = frac(1, c1_options.len() as u64);
            let c2_options: Vec<Option<Color>> = {
                let spread: Vec<Color> = s_set.difference(&q_set).copied().collect();
                if spread.is_empty() {
                    vec![None]
                } else {
                    spread.into_iter().map(Some).collect()
                }
            };
            let c2_weight = frac(1, c2_options.len() as u64);

            let room_l = u64::from(k - delta);
            let p_l = Rational::new(room_l - (s - q), room_l);
            let room = u64::from(k) - busy;
            let p_chi = Rational::new(room - (s - q), room);
            let pieces = tau_pieces(&[p_l, p_chi]);
            let snapshot = PaletteSnapshot {
                s: s as u32,
                q: q as u32,
            };

            for &c1 in &c1_options {
                for &c2 in &c2_options {
                    for (mid, len) in &pieces {
                        // Generation keeps c₂ exactly when τ > p_L.
                        let m: SmallVec<[Color; 2]> = match c2 {
                            Some(c2) if *mid > p_l => smallvec::smallvec![c1, c2],
                            None if *mid > p_l => {
                                return Err(Error::OraclePrecondition("empty S∖Q with p_L < 1".into()))
                            }
                            _ => smallvec::smallvec![c1],
                        };
                        let tuple = UpdateTuple::Contract {
                            v: v as u32,
                            tau: LazyReal::at_point(*mid),
                            m,
                            snapshot,
                        };
                        let mut out = chi.clone();
                        tuple.apply(g, k, &mut out)?;
                        dist.add(out[v], &(c1_weight.clone() * &c2_weight * len));
                    }
                }
            }
        }
    }
    Ok(dist)
}

/// The Glauber law at `v`: uniform over `[k] ∖ χ(N(v))`.
pub fn glauber_marginal(g: &Graph, k: u32, v: usize, chi: &Coloring) -> ExactDistribution {
    let used: BTreeSet<Color> = g.neighbors(v).iter().map(|&w| chi[w as usize]).collect();
    ExactDistribution::uniform((1..=k).filter(|c| !used.contains(c)))
}

/// One update of a scripted trace: the bounding state it was generated
/// from, the vertex, and the update kind (with its Δ-set for compress).
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub state: BoundingState,
    pub v: usize,
    pub spruce_set: Option<Vec<Color>>,
}

/// The fixed trace used by the marginal suite: the collapse phase of block 0
/// under `seed`, followed by contracts at `v = t mod n` until `len` updates
/// have been generated.
pub fn scripted_trace(g: &Graph, k: u32, len: usize, seed: MasterSeed) -> Result<Vec<TraceStep>> {
    validate_instance(g, k)?;
    let mut steps = Vec::with_capacity(len);
    let mut prev = BoundingState::new(g.n(), k);
    let mut record = |r: &StepRecord<'_>| {
        if r.phase == Phase::Collapse && steps.len() < len {
            let spruce_set = match r.tuple {
                UpdateTuple::Compress { m, .. } => {
                    let mut a = m[..m.len() - 1].to_vec();
                    a.sort_unstable();
                    Some(a)
                }
                UpdateTuple::Contract { .. } => None,
            };
            steps.push(TraceStep {
                state: prev.clone(),
                v: r.tuple.vertex(),
                spruce_set,
            });
        }
        prev = r.state.clone();
    };
    generate_block_observed(g, k, seed, 0, &mut record)?;

    let (_, mut state) = collapse_phase(g, k, seed, 0)?;
    let mut t = steps.len();
    while steps.len() < len && g.n() > 0 {
        let v = t % g.n();
        steps.push(TraceStep {
            state: state.clone(),
            v,
            spruce_set: None,
        });
        contract_gen(&mut state, g, v, &mut substream(seed, 0, t as u64))?;
        t += 1;
    }
    Ok(steps)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginalSuiteReport {
    pub updates: usize,
    pub triples: u64,
    pub mismatches: u64,
    pub first_mismatch: Option<String>,
}

impl MarginalSuiteReport {
    pub fn pass(&self) -> bool {
        self.mismatches == 0 && self.triples > 0
    }
}

/// Checks, for every step of the scripted trace and every proper coloring
/// compatible with that step's lists, that the exact law of the new color
/// equals the Glauber law.
pub fn marginal_suite(g: &Graph, k: u32, len: usize, seed: MasterSeed) -> Result<MarginalSuiteReport> {
    let trace = scripted_trace(g, k, len, seed)?;
    let all = enumerate_colorings(g, k)?;
    let mut report = MarginalSuiteReport {
        updates: trace.len(),
        triples: 0,
        mismatches: 0,
        first_mismatch: None,
    };
    for (t, step) in trace.iter().enumerate() {
        let update = match &step.spruce_set {
            Some(a) => MarginalUpdate::Compress(a),
            None => MarginalUpdate::Contract,
        };
        for chi in all.iter().filter(|c| step.state.is_compatible(c)) {
            let got = exact_update_marginal(&step.state, g, step.v, chi, update)?;
            let want = glauber_marginal(g, k, step.v, chi);
            report.triples += 1;
            if got != want {
                report.mismatches += 1;
                report.first_mismatch.get_or_insert_with(|| {
                    format!(
                        "step {t} ({:?} at v={}), χ={chi}: got {got}, want {want}",
                        update.kind(),
                        step.v + 1
                    )
                });
            }
        }
    }
    Ok(report)
}
