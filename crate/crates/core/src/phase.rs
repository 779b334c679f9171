//! One block of updates: the collapse phase followed by the coalescence phase.
//!
//! Starting from all-`[k]` lists, the collapse phase visits the vertices in
//! order. For vertex `vᵢ` it compresses every later neighbor onto a common
//! Δ-set `A` that meets every earlier neighbor's list ("spruce-up"), which
//! bounds `|S_L(vᵢ)|` by 2Δ, and then contracts `vᵢ`. After `|E| + n` updates
//! every list has at most two colors. The coalescence phase then contracts
//! `T′` uniformly random vertices. If all lists end up singletons (Φ), the
//! block maps every proper coloring to one and the same coloring.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{validate_instance, Color, Coloring, Graph};
use crate::random::{substream, uniform_index, BitStream, MasterSeed};
use crate::update::{compress_gen, contract_gen, BoundingState, UpdateTuple};

/// `T′ = ⌈2·(k−Δ)/(k−3Δ)·n·ln n⌉`, bumped by one when the real value sits
/// within floating-point noise of an integer so it is never under-provisioned.
pub fn coalescence_horizon(n: usize, k: u32, delta: u32) -> u64 {
    assert!(u64::from(k) > 3 * u64::from(delta), "coalescence horizon needs k > 3Δ");
    if n <= 1 {
        return 0;
    }
    let ratio = f64::from(k - delta) / (f64::from(k) - 3.0 * f64::from(delta));
    let nf = n as f64;
    let x = 2.0 * ratio * nf * nf.ln();
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * x.max(1.0) {
        nearest as u64 + 1
    } else {
        x.ceil() as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhasePlan {
    /// `|E| + n`.
    pub collapse_steps: u64,
    /// `T′`.
    pub coalescence_steps: u64,
}

impl PhasePlan {
    pub fn new(g: &Graph, k: u32) -> Result<Self> {
        validate_instance(g, k)?;
        Ok(PhasePlan {
            collapse_steps: (g.num_edges() + g.n()) as u64,
            coalescence_steps: coalescence_horizon(g.n(), k, g.max_degree()),
        })
    }

    /// `T = T′ + |E| + n`.
    pub fn total_steps(&self) -> u64 {
        self.collapse_steps + self.coalescence_steps
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Collapse,
    Coalescence,
}

/// What an observer sees after each generated update.
pub struct StepRecord<'a> {
    pub block: u64,
    pub step: u64,
    pub phase: Phase,
    pub tuple: &'a UpdateTuple,
    /// Singleton-list count before the update.
    pub singletons_before: usize,
    /// State after the update.
    pub state: &'a BoundingState,
}

pub trait StepObserver {
    fn observe(&mut self, record: &StepRecord<'_>);
}

impl StepObserver for () {
    fn observe(&mut self, _: &StepRecord<'_>) {}
}

impl<F: FnMut(&StepRecord<'_>)> StepObserver for F {
    fn observe(&mut self, record: &StepRecord<'_>) {
        self(record)
    }
}

/// Sequential tuple emission with step numbering and observation.
struct Emitter<'o, O: StepObserver + ?Sized> {
    master: MasterSeed,
    block: u64,
    next_step: u64,
    phase: Phase,
    tuples: Vec<UpdateTuple>,
    observer: &'o mut O,
}

impl<O: StepObserver + ?Sized> Emitter<'_, O> {
    fn stream(&self) -> BitStream {
        substream(self.master, self.block, self.next_step)
    }

    fn push(&mut self, tuple: UpdateTuple, singletons_before: usize, state: &BoundingState) {
        self.observer.observe(&StepRecord {
            block: self.block,
            step: self.next_step,
            phase: self.phase,
            tuple: &tuple,
            singletons_before,
            state,
        });
        self.tuples.push(tuple);
        self.next_step += 1;
    }
}

/// A Δ-subset of `[k]` meeting `L(w)` for every earlier neighbor `w` of `v`:
/// the minimum of each earlier neighbor's list, then the smallest unused
/// colors as padding. Returned sorted.
pub fn choose_spruce_set(state: &BoundingState, g: &Graph, v: usize) -> Vec<Color> {
    let delta = g.max_degree() as usize;
    let mut a: Vec<Color> = Vec::with_capacity(delta);
    for &w in g.earlier_neighbors(v) {
        debug_assert!(state.list_len(w as usize) <= 2, "earlier neighbors must be collapsed");
        let min = state.min_color(w as usize);
        if !a.contains(&min) {
            a.push(min);
        }
    }
    let mut pad = 1;
    while a.len() < delta {
        if !a.contains(&pad) {
            a.push(pad);
        }
        pad += 1;
    }
    a.sort_unstable();
    a
}

fn spruce_up_into<O: StepObserver + ?Sized>(
    state: &mut BoundingState,
    g: &Graph,
    v: usize,
    out: &mut Emitter<'_, O>,
) -> Result<()> {
    let a = choose_spruce_set(state, g, v);
    for &w in g.later_neighbors(v) {
        let before = state.singletons();
        let tuple = compress_gen(state, g, w as usize, &a, &mut out.stream())?;
        out.push(tuple, before, state);
    }
    Ok(())
}

/// Compresses every later neighbor of `v` onto one spruce set. Streams are
/// numbered from `first_step`.
pub fn spruce_up(
    state: &mut BoundingState,
    g: &Graph,
    v: usize,
    master: MasterSeed,
    block: u64,
    first_step: u64,
) -> Result<Vec<UpdateTuple>> {
    let mut emitter = Emitter {
        master,
        block,
        next_step: first_step,
        phase: Phase::Collapse,
        tuples: Vec::new(),
        observer: &mut (),
    };
    spruce_up_into(state, g, v, &mut emitter)?;
    Ok(emitter.tuples)
}

fn collapse_into<O: StepObserver + ?Sized>(
    state: &mut BoundingState,
    g: &Graph,
    out: &mut Emitter<'_, O>,
) -> Result<()> {
    out.phase = Phase::Collapse;
    for v in 0..g.n() {
        spruce_up_into(state, g, v, out)?;
        let before = state.singletons();
        let tuple = contract_gen(state, g, v, &mut out.stream())?;
        out.push(tuple, before, state);
    }
    Ok(())
}

fn coalesce_into<O: StepObserver + ?Sized>(
    state: &mut BoundingState,
    g: &Graph,
    steps: u64,
    out: &mut Emitter<'_, O>,
) -> Result<()> {
    out.phase = Phase::Coalescence;
    let mut schedule = BitStream::schedule(out.master, out.block);
    for _ in 0..steps {
        let v = uniform_index(&mut schedule, g.n() as u64) as usize;
        let before = state.singletons();
        let tuple = contract_gen(state, g, v, &mut out.stream())?;
        out.push(tuple, before, state);
    }
    Ok(())
}

/// Runs the collapse phase from fresh lists. Returns its `|E| + n` tuples
/// and the resulting state, in which every list has at most two colors.
pub fn collapse_phase(g: &Graph, k: u32, master: MasterSeed, block: u64) -> Result<(Vec<UpdateTuple>, BoundingState)> {
    validate_instance(g, k)?;
    let mut state = BoundingState::new(g.n(), k);
    let mut emitter = Emitter {
        master,
        block,
        next_step: 0,
        phase: Phase::Collapse,
        tuples: Vec::with_capacity(g.n() + g.num_edges()),
        observer: &mut (),
    };
    collapse_into(&mut state, g, &mut emitter)?;
    Ok((emitter.tuples, state))
}

/// Runs `t_prime` contract updates at uniformly random vertices; step
/// numbering starts at `first_step` (which is `|E| + n` inside a block).
pub fn coalescence_phase(
    state: &mut BoundingState,
    g: &Graph,
    t_prime: u64,
    master: MasterSeed,
    block: u64,
    first_step: u64,
) -> Result<Vec<UpdateTuple>> {
    if state.max_list_len() > 2 && t_prime > 0 {
        return Err(Error::InvalidArgument(
            "coalescence needs every list of size ≤ 2".into(),
        ));
    }
    let mut emitter = Emitter {
        master,
        block,
        next_step: first_step,
        phase: Phase::Coalescence,
        tuples: Vec::with_capacity(t_prime as usize),
        observer: &mut (),
    };
    coalesce_into(state, g, t_prime, &mut emitter)?;
    Ok(emitter.tuples)
}

/// Φ: every list is a singleton.
pub fn phi(state: &BoundingState) -> bool {
    state.singletons() == state.n()
}

/// The tuples of one window of `T` updates, in chronological order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub index: u64,
    pub k: u32,
    pub tuples: Vec<UpdateTuple>,
    pub phi: bool,
    /// The single coloring in the image of the block, present iff `phi`.
    pub unique_coloring: Option<Coloring>,
}

pub fn generate_block(g: &Graph, k: u32, master: MasterSeed, index: u64) -> Result<Block> {
    generate_block_observed(g, k, master, index, &mut ())
}

pub fn generate_block_observed<O: StepObserver + ?Sized>(
    g: &Graph,
    k: u32,
    master: MasterSeed,
    index: u64,
    observer: &mut O,
) -> Result<Block> {
    let plan = PhasePlan::new(g, k)?;
    let mut state = BoundingState::new(g.n(), k);
    let mut emitter = Emitter {
        master,
        block: index,
        next_step: 0,
        phase: Phase::Collapse,
        tuples: Vec::with_capacity(plan.total_steps() as usize),
        observer,
    };
    collapse_into(&mut state, g, &mut emitter)?;
    debug_assert_eq!(emitter.next_step, plan.collapse_steps);
    debug_assert!(state.max_list_len() <= 2 || g.n() == 0);
    coalesce_into(&mut state, g, plan.coalescence_steps, &mut emitter)?;

    let phi = phi(&state);
    let unique_coloring =
        phi.then(|| Coloring::new((0..g.n()).map(|v| state.singleton(v).expect("Φ holds")).collect()));
    Ok(Block {
        index,
        k,
        tuples: emitter.tuples,
        phi,
        unique_coloring,
    })
}
