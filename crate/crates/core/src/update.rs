//! The bounding chain state and its two update primitives.
//!
//! Each primitive has a *generation* half, which draws the update's
//! randomness, shrinks the list of the updated vertex in place and returns a
//! self-contained [`UpdateTuple`], and a *decode* half, which applies that
//! tuple to a concrete coloring. For every coloring `χ` compatible with the
//! lists before the update, the decoded coloring is compatible with the lists
//! after it, and the new color of the updated vertex is uniform over the
//! colors unused by its neighbors (one Glauber step).
//!
//! Decoding never looks at the lists: a compress tuple carries `M = (σ, c₁)`,
//! a contract tuple carries `M = (c₁[, c₂])` plus the palette sizes `(s, q)`
//! observed at generation time.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::{Color, Coloring, Graph};
use crate::random::{random_permutation, uniform_from_set, uniform_index, BitStream, Cmp, LazyReal, Rational};

type SmallColors = SmallVec<[Color; 4]>;
type Scratch = SmallVec<[Color; 32]>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum ColorList {
    /// All of `[k]`.
    Full,
    /// Sorted, nonempty.
    Few(SmallColors),
}

/// Per-vertex color lists `L(v) ⊆ [k]`, plus a histogram of list sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundingState {
    k: u32,
    lists: Vec<ColorList>,
    size_counts: Vec<usize>,
}

impl BoundingState {
    /// Every list is `[k]`.
    pub fn new(n: usize, k: u32) -> Self {
        assert!(k >= 1, "need at least one color");
        let mut size_counts = vec![0; k as usize + 1];
        size_counts[k as usize] = n;
        BoundingState {
            k,
            lists: vec![ColorList::Full; n],
            size_counts,
        }
    }

    /// Builds a state from explicit lists (sorted or not); each must be a
    /// nonempty subset of `[k]`.
    pub fn with_lists(k: u32, lists: Vec<Vec<Color>>) -> Result<Self> {
        let mut state = BoundingState::new(lists.len(), k);
        for (v, mut list) in lists.into_iter().enumerate() {
            list.sort_unstable();
            list.dedup();
            if list.is_empty() || list[0] == 0 || *list.last().unwrap() > k {
                return Err(Error::InvalidArgument(format!(
                    "list of vertex {} must be a nonempty subset of 1..={k}",
                    v + 1
                )));
            }
            if list.len() < k as usize {
                state.set_list(v, SmallColors::from_vec(list));
            }
        }
        Ok(state)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn list_len(&self, v: usize) -> usize {
        match &self.lists[v] {
            ColorList::Full => self.k as usize,
            ColorList::Few(c) => c.len(),
        }
    }

    pub fn list(&self, v: usize) -> Vec<Color> {
        match &self.lists[v] {
            ColorList::Full => (1..=self.k).collect(),
            ColorList::Few(c) => c.to_vec(),
        }
    }

    pub fn min_color(&self, v: usize) -> Color {
        match &self.lists[v] {
            ColorList::Full => 1,
            ColorList::Few(c) => c[0],
        }
    }

    pub fn contains(&self, v: usize, c: Color) -> bool {
        match &self.lists[v] {
            ColorList::Full => (1..=self.k).contains(&c),
            ColorList::Few(list) => list.binary_search(&c).is_ok(),
        }
    }

    /// The color of a singleton list.
    pub fn singleton(&self, v: usize) -> Option<Color> {
        match &self.lists[v] {
            ColorList::Few(c) if c.len() == 1 => Some(c[0]),
            ColorList::Full if self.k == 1 => Some(1),
            _ => None,
        }
    }

    /// Number of vertices whose list is a singleton.
    pub fn singletons(&self) -> usize {
        self.size_counts[1]
    }

    pub fn max_list_len(&self) -> usize {
        self.size_counts.iter().rposition(|&c| c > 0).unwrap_or(0)
    }

    /// `(size, number of vertices)` for every size that occurs.
    pub fn size_histogram(&self) -> Vec<(usize, usize)> {
        self.size_counts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .map(|(s, &c)| (s, c))
            .collect()
    }

    /// χ ∼ L: every vertex's color lies in its list.
    pub fn is_compatible(&self, chi: &Coloring) -> bool {
        chi.len() == self.n() && (0..self.n()).all(|v| self.contains(v, chi[v]))
    }

    fn set_list(&mut self, v: usize, list: SmallColors) {
        debug_assert!(!list.is_empty() && list.windows(2).all(|w| w[0] < w[1]));
        let old = self.list_len(v);
        self.size_counts[old] -= 1;
        self.size_counts[list.len()] += 1;
        self.lists[v] = ColorList::Few(list);
    }

    /// Writes `S_L(v)` and `Q_L(v)` (both sorted) into the buffers. Returns
    /// `false` when some neighbor still has the full list, in which case
    /// `S_L(v) = [k]` and `s_buf` is left empty.
    fn palette_sets(&self, g: &Graph, v: usize, s_buf: &mut Scratch, q_buf: &mut Scratch) -> bool {
        s_buf.clear();
        q_buf.clear();
        let mut bounded = true;
        for &w in g.neighbors(v) {
            match &self.lists[w as usize] {
                ColorList::Full => bounded = false,
                ColorList::Few(list) => {
                    if list.len() == 1 {
                        q_buf.push(list[0]);
                    }
                    if bounded {
                        s_buf.extend_from_slice(list);
                    }
                }
            }
        }
        q_buf.sort_unstable();
        q_buf.dedup();
        if bounded {
            s_buf.sort_unstable();
            s_buf.dedup();
        } else {
            s_buf.clear();
        }
        bounded
    }
}

/// Sizes of `S_L(v) = ⋃_{w∈N(v)} L(w)` and `Q_L(v) = ⋃_{w∈N(v), |L(w)|=1} L(w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PaletteSnapshot {
    pub s: u32,
    pub q: u32,
}

pub fn palette(state: &BoundingState, g: &Graph, v: usize) -> PaletteSnapshot {
    let (mut s_buf, mut q_buf) = (Scratch::new(), Scratch::new());
    let bounded = state.palette_sets(g, v, &mut s_buf, &mut q_buf);
    PaletteSnapshot {
        s: if bounded { s_buf.len() as u32 } else { state.k },
        q: q_buf.len() as u32,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UpdateKind {
    Compress,
    Contract,
}

/// A persisted update. Vertices serialize 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum UpdateTuple {
    /// `m = (σ₁, …, σ_Δ, c₁)`.
    Compress {
        #[serde(with = "one_based")]
        v: u32,
        tau: LazyReal,
        m: Box<[Color]>,
    },
    /// `m = (c₁)` or `(c₁, c₂)`; `snapshot` is the palette before the update.
    Contract {
        #[serde(with = "one_based")]
        v: u32,
        tau: LazyReal,
        m: SmallVec<[Color; 2]>,
        snapshot: PaletteSnapshot,
    },
}

mod one_based {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u32, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(u64::from(*v) + 1)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u32, D::Error> {
        let label = u32::deserialize(d)?;
        label
            .checked_sub(1)
            .ok_or_else(|| serde::de::Error::custom("vertex labels are 1-based"))
    }
}

impl UpdateTuple {
    pub fn kind(&self) -> UpdateKind {
        match self {
            UpdateTuple::Compress { .. } => UpdateKind::Compress,
            UpdateTuple::Contract { .. } => UpdateKind::Contract,
        }
    }

    /// The updated vertex (0-based).
    pub fn vertex(&self) -> usize {
        match self {
            UpdateTuple::Compress { v, .. } | UpdateTuple::Contract { v, .. } => *v as usize,
        }
    }

    pub fn tau(&self) -> &LazyReal {
        match self {
            UpdateTuple::Compress { tau, .. } | UpdateTuple::Contract { tau, .. } => tau,
        }
    }

    /// The candidate sequence M.
    pub fn colors(&self) -> &[Color] {
        match self {
            UpdateTuple::Compress { m, .. } => m,
            UpdateTuple::Contract { m, .. } => m,
        }
    }

    pub fn snapshot(&self) -> Option<PaletteSnapshot> {
        match self {
            UpdateTuple::Compress { .. } => None,
            UpdateTuple::Contract { snapshot, .. } => Some(*snapshot),
        }
    }

    /// Recolors `chi` at the tuple's vertex in place. `chi` must be proper
    /// and compatible with the lists the tuple was generated from.
    pub fn apply(&self, g: &Graph, k: u32, chi: &mut Coloring) -> Result<()> {
        let v = self.vertex();
        if v >= g.n() || chi.len() != g.n() {
            return Err(Error::MalformedTuple(format!(
                "vertex {} outside a coloring of {} vertices",
                v + 1,
                chi.len()
            )));
        }
        let used = neighbor_colors(g, v, chi);
        let color = match self {
            UpdateTuple::Compress { tau, m, .. } => decode_compress(g, k, &used, tau, m)?,
            UpdateTuple::Contract { tau, m, snapshot, .. } => decode_contract(g, k, &used, tau, m, *snapshot)?,
        };
        chi.set(v, color);
        Ok(())
    }
}

/// χ(N(v)), sorted and deduplicated.
fn neighbor_colors(g: &Graph, v: usize, chi: &Coloring) -> Scratch {
    let mut used: Scratch = g.neighbors(v).iter().map(|&w| chi[w as usize]).collect();
    used.sort_unstable();
    used.dedup();
    used
}

fn decode_compress(g: &Graph, k: u32, used: &[Color], tau: &LazyReal, m: &[Color]) -> Result<Color> {
    let delta = g.max_degree();
    if m.len() != delta as usize + 1 {
        return Err(Error::MalformedTuple(format!(
            "compress tuple has |M|={}, expected Δ+1={}",
            m.len(),
            delta + 1
        )));
    }
    let busy = used.len() as u32;
    if busy > delta || k <= busy {
        return Err(Error::MalformedTuple(format!(
            "|χ(N(v))|={busy} incompatible with Δ={delta}, k={k}"
        )));
    }
    let (sigma, c1) = m.split_at(delta as usize);
    let c1 = c1[0];
    if used.binary_search(&c1).is_err() {
        // p_χ = 1 − (k−Δ)/(k−|χ(N(v))|) = (Δ−|χ(N(v))|)/(k−|χ(N(v))|); take c₁ when τ ≥ p_χ.
        let p_chi = Rational::new(u64::from(delta - busy), u64::from(k - busy));
        if tau.compare(p_chi)? == Cmp::Gt {
            return Ok(c1);
        }
    }
    sigma
        .iter()
        .copied()
        .find(|c| used.binary_search(c).is_err())
        .ok_or_else(|| Error::MalformedTuple("σ has no color free of χ(N(v))".into()))
}

fn decode_contract(
    g: &Graph,
    k: u32,
    used: &[Color],
    tau: &LazyReal,
    m: &[Color],
    snapshot: PaletteSnapshot,
) -> Result<Color> {
    let delta = g.max_degree();
    let busy = used.len() as u32;
    let PaletteSnapshot { s, q } = snapshot;
    if q > s || s + delta >= k || busy > delta {
        return Err(Error::MalformedTuple(format!(
            "contract snapshot (s={s}, q={q}) incompatible with k={k}, Δ={delta}, |χ(N(v))|={busy}"
        )));
    }
    match *m {
        [c1] => Ok(c1),
        [c1, c2] => {
            if used.binary_search(&c2).is_ok() {
                return Ok(c1);
            }
            let spread = u64::from(s - q);
            let room = u64::from(k - busy);
            let p_chi = Rational::new(room - spread, room);
            debug_assert!({
                let room_l = u64::from(k - delta);
                Rational::new(room_l - spread, room_l) <= p_chi
            });
            Ok(match tau.compare(p_chi)? {
                Cmp::Le => c1,
                Cmp::Gt => c2,
            })
        }
        _ => Err(Error::MalformedTuple(format!("contract tuple has |M|={}", m.len()))),
    }
}

/// Draws a compress update at `v` with the Δ-set `a` (sorted): τ, then σ, then c₁.
pub fn compress_gen(
    state: &mut BoundingState,
    g: &Graph,
    v: usize,
    a: &[Color],
    stream: &mut BitStream,
) -> Result<UpdateTuple> {
    let k = state.k;
    if a.len() != g.max_degree() as usize
        || a.windows(2).any(|w| w[0] >= w[1])
        || a.first().is_some_and(|&c| c == 0)
        || a.last().is_some_and(|&c| c > k)
    {
        return Err(Error::InvalidArgument(format!(
            "compress needs a sorted Δ-subset of [k] (Δ={}, k={k}), got {a:?}",
            g.max_degree()
        )));
    }
    let tau = LazyReal::draw(stream);
    let mut m = random_permutation(stream, a);
    let c1 = uniform_from_set(stream, k, a)?;
    m.push(c1);

    let mut list: SmallColors = a.iter().copied().collect();
    let at = list.partition_point(|&c| c < c1);
    list.insert(at, c1);
    state.set_list(v, list);

    Ok(UpdateTuple::Compress {
        v: v as u32,
        tau,
        m: m.into_boxed_slice(),
    })
}

/// Draws a contract update at `v`: τ, then c₁ ∈ [k]∖S_L(v), then c₂ ∈ S_L(v)∖Q_L(v).
/// The list of `v` becomes `{c₁}` when τ ≤ p_L and `{c₁, c₂}` otherwise.
pub fn contract_gen(state: &mut BoundingState, g: &Graph, v: usize, stream: &mut BitStream) -> Result<UpdateTuple> {
    let k = state.k;
    let delta = g.max_degree();
    let (mut s_set, mut q_set) = (Scratch::new(), Scratch::new());
    let bounded = state.palette_sets(g, v, &mut s_set, &mut q_set);
    let s = if bounded { s_set.len() as u32 } else { k };
    if u64::from(s) + u64::from(delta) >= u64::from(k) {
        return Err(Error::ContractPrecondition { s, k, delta });
    }
    let q = q_set.len() as u32;

    let mut tau = LazyReal::draw(stream);
    let c1 = uniform_from_set(stream, k, &s_set)?;
    let spread: Scratch = s_set
        .iter()
        .copied()
        .filter(|c| q_set.binary_search(c).is_err())
        .collect();
    let c2 = if spread.is_empty() {
        None
    } else {
        Some(spread[uniform_index(stream, spread.len() as u64) as usize])
    };

    // p_L = 1 − (s − q)/(k − Δ)
    let room = u64::from(k - delta);
    let p_l = Rational::new(room - u64::from(s - q), room);
    let m: SmallVec<[Color; 2]> = match (tau.compare_mut(p_l)?, c2) {
        (Cmp::Le, _) | (Cmp::Gt, None) => {
            debug_assert!(c2.is_some() || p_l == Rational::from_integer(1));
            state.set_list(v, SmallColors::from_elem(c1, 1));
            smallvec::smallvec![c1]
        }
        (Cmp::Gt, Some(c2)) => {
            let list: SmallColors = if c1 < c2 {
                smallvec::smallvec![c1, c2]
            } else {
                smallvec::smallvec![c2, c1]
            };
            state.set_list(v, list);
            smallvec::smallvec![c1, c2]
        }
    };
    Ok(UpdateTuple::Contract {
        v: v as u32,
        tau,
        m,
        snapshot: PaletteSnapshot { s, q },
    })
}

pub fn compress_decode(t: &UpdateTuple, g: &Graph, k: u32, chi: &Coloring) -> Result<Coloring> {
    if t.kind() != UpdateKind::Compress {
        return Err(Error::MalformedTuple("expected a compress tuple".into()));
    }
    let mut out = chi.clone();
    t.apply(g, k, &mut out)?;
    Ok(out)
}

pub fn contract_decode(t: &UpdateTuple, g: &Graph, k: u32, chi: &Coloring) -> Result<Coloring> {
    if t.kind() != UpdateKind::Contract {
        return Err(Error::MalformedTuple("expected a contract tuple".into()));
    }
    let mut out = chi.clone();
    t.apply(g, k, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{substream, MasterSeed};

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|w| (0, w))).unwrap()
    }

    fn k2() -> Graph {
        Graph::from_edges(2, [(0, 1)]).unwrap()
    }

    fn stream(i: u64) -> BitStream {
        substream(MasterSeed(2024), 0, i)
    }

    #[test]
    fn palette_examples() {
        let isolated = Graph::edgeless(1);
        assert_eq!(
            palette(&BoundingState::new(1, 5), &isolated, 0),
            PaletteSnapshot { s: 0, q: 0 }
        );

        let g = star(3);
        let state = BoundingState::with_lists(10, vec![vec![9], vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(palette(&state, &g, 0), PaletteSnapshot { s: 3, q: 3 });

        let state = BoundingState::with_lists(10, vec![vec![9], vec![1, 2], vec![2, 3], vec![4]]).unwrap();
        assert_eq!(palette(&state, &g, 0), PaletteSnapshot { s: 4, q: 1 });

        let fresh = BoundingState::new(4, 10);
        assert_eq!(palette(&fresh, &g, 0), PaletteSnapshot { s: 10, q: 0 });
    }

    #[test]
    fn histogram_tracks_mutations() {
        let g = star(2);
        let mut state = BoundingState::new(3, 7);
        assert_eq!(state.size_histogram(), vec![(7, 3)]);
        compress_gen(&mut state, &g, 1, &[1, 2], &mut stream(0)).unwrap();
        assert_eq!(state.size_histogram(), vec![(3, 1), (7, 2)]);
        assert_eq!(state.max_list_len(), 7);
        assert_eq!(state.singletons(), 0);
    }

    #[test]
    fn compress_gen_shapes_the_list() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        for i in 0..200 {
            let mut state = BoundingState::new(3, 7);
            let t = compress_gen(&mut state, &g, 1, &[1, 2], &mut stream(i)).unwrap();
            let list = state.list(1);
            assert_eq!(list.len(), 3);
            let extra: Vec<_> = list.iter().filter(|c| **c > 2).collect();
            assert_eq!(extra.len(), 1);
            let m = t.colors();
            assert_eq!(m.len(), 3);
            assert_eq!(m[2], *extra[0]);
            let mut sigma = m[..2].to_vec();
            sigma.sort_unstable();
            assert_eq!(sigma, vec![1, 2]);
            assert_eq!(state.list_len(0), 7);
        }
    }

    #[test]
    fn compress_gen_with_no_neighbors_anywhere() {
        let g = Graph::edgeless(2);
        let mut state = BoundingState::new(2, 4);
        let t = compress_gen(&mut state, &g, 0, &[], &mut stream(1)).unwrap();
        assert_eq!(t.colors().len(), 1);
        assert_eq!(state.list(0), vec![t.colors()[0]]);
        assert_eq!(state.singletons(), 1);
    }

    #[test]
    fn compress_gen_rejects_bad_sets() {
        let g = k2();
        let mut state = BoundingState::new(2, 4);
        assert!(compress_gen(&mut state, &g, 0, &[1, 2], &mut stream(0)).is_err());
        assert!(compress_gen(&mut state, &g, 0, &[5], &mut stream(0)).is_err());
    }

    #[test]
    fn compress_c1_is_uniform_outside_a() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let mut counts = [0u64; 8];
        let draws = 50_000u64;
        for i in 0..draws {
            let mut state = BoundingState::new(3, 7);
            let t = compress_gen(&mut state, &g, 1, &[1, 2], &mut stream(i)).unwrap();
            counts[t.colors()[2] as usize] += 1;
        }
        let (p, sd) = (0.2, (draws as f64 * 0.2 * 0.8).sqrt());
        for c in 3..=7 {
            assert!((counts[c] as f64 - draws as f64 * p).abs() < 4.0 * sd, "{counts:?}");
        }
    }

    #[test]
    fn contract_with_all_neighbors_fixed_is_a_singleton() {
        let g = star(3);
        for i in 0..100 {
            let mut state = BoundingState::with_lists(10, vec![vec![9, 10], vec![1], vec![2], vec![3]]).unwrap();
            let t = contract_gen(&mut state, &g, 0, &mut stream(i)).unwrap();
            assert_eq!(t.snapshot(), Some(PaletteSnapshot { s: 3, q: 3 }));
            assert_eq!(t.colors().len(), 1);
            assert!(t.colors()[0] > 3);
            assert_eq!(state.list_len(0), 1);
        }
    }

    #[test]
    fn contract_singleton_rate_matches_p_l() {
        // s = 6, q = 0, k = 10, Δ = 3: p_L = 1 − 6/7 = 1/7.
        let g = star(3);
        let trials = 10_000u64;
        let mut singles = 0u64;
        for i in 0..trials {
            let mut state = BoundingState::with_lists(10, vec![vec![10], vec![1, 2], vec![3, 4], vec![5, 6]]).unwrap();
            let t = contract_gen(&mut state, &g, 0, &mut stream(i)).unwrap();
            let m = t.colors();
            assert!(m[0] >= 7, "c₁ must avoid S_L(v)");
            if m.len() == 1 {
                singles += 1;
            } else {
                assert!((1..=6).contains(&m[1]), "c₂ must come from S∖Q");
            }
        }
        let p = 1.0 / 7.0;
        let sd = (trials as f64 * p * (1.0 - p)).sqrt();
        assert!((singles as f64 - trials as f64 * p).abs() < 4.0 * sd, "{singles}");
    }

    #[test]
    fn contract_precondition_is_checked() {
        let g = star(3);
        let mut state = BoundingState::new(4, 10);
        let err = contract_gen(&mut state, &g, 0, &mut stream(0)).unwrap_err();
        assert!(matches!(err, Error::ContractPrecondition { s: 10, k: 10, delta: 3 }));
    }

    #[test]
    fn compress_decode_takes_c1_when_threshold_is_zero() {
        // k=7, Δ=2, |χ(N(v))|=2: p_χ = 0, so a valid c₁ is always taken.
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let chi = Coloring::new(vec![1, 6, 2]);
        for i in 0..50 {
            let mut state = BoundingState::new(3, 7);
            let t = compress_gen(&mut state, &g, 1, &[3, 4], &mut stream(i)).unwrap();
            let c1 = t.colors()[2];
            let out = compress_decode(&t, &g, 7, &chi).unwrap();
            if c1 != 1 && c1 != 2 {
                assert_eq!(out[1], c1);
            } else {
                assert!(out[1] == 3 || out[1] == 4);
                assert_eq!(out[1], t.colors()[0]);
            }
            assert_eq!((out[0], out[2]), (1, 2));
        }
    }

    #[test]
    fn compress_decode_falls_back_to_first_free_sigma_color() {
        let g = k2();
        let t = UpdateTuple::Compress {
            v: 1,
            tau: LazyReal::at_point(Rational::new(1, 2)),
            m: vec![2, 1].into_boxed_slice(),
        };
        // c₁ = 1 is taken by the neighbor, σ = (2) is free.
        let out = compress_decode(&t, &g, 4, &Coloring::new(vec![1, 3])).unwrap();
        assert_eq!(out, Coloring::new(vec![1, 2]));
    }

    #[test]
    fn contract_decode_branches() {
        let g = k2();
        let snapshot = PaletteSnapshot { s: 2, q: 0 };
        let low = LazyReal::at_point(Rational::new(1, 100));
        let high = LazyReal::at_point(Rational::new(99, 100));
        let single = UpdateTuple::Contract {
            v: 1,
            tau: high.clone(),
            m: smallvec::smallvec![4],
            snapshot,
        };
        let chi = Coloring::new(vec![1, 2]);
        assert_eq!(contract_decode(&single, &g, 4, &chi).unwrap()[1], 4);

        let pair = |tau: &LazyReal, c2| UpdateTuple::Contract {
            v: 1,
            tau: tau.clone(),
            m: smallvec::smallvec![4, c2],
            snapshot,
        };
        // k=4, |χ(N(v))|=1: p_χ = 1 − 2/3 = 1/3.
        assert_eq!(contract_decode(&pair(&low, 2), &g, 4, &chi).unwrap()[1], 4);
        assert_eq!(contract_decode(&pair(&high, 2), &g, 4, &chi).unwrap()[1], 2);
        // c₂ is the neighbor's color: c₁ regardless of τ.
        assert_eq!(contract_decode(&pair(&high, 1), &g, 4, &chi).unwrap()[1], 4);
    }

    #[test]
    fn decoders_reject_the_other_kind_and_bad_shapes() {
        let g = k2();
        let chi = Coloring::new(vec![1, 2]);
        let t = UpdateTuple::Contract {
            v: 0,
            tau: LazyReal::at_point(Rational::new(1, 2)),
            m: smallvec::smallvec![3],
            snapshot: PaletteSnapshot { s: 1, q: 1 },
        };
        assert!(compress_decode(&t, &g, 4, &chi).is_err());
        let bad = UpdateTuple::Compress {
            v: 0,
            tau: LazyReal::at_point(Rational::new(1, 2)),
            m: vec![1, 2, 3].into_boxed_slice(),
        };
        assert!(matches!(
            compress_decode(&bad, &g, 4, &chi),
            Err(Error::MalformedTuple(_))
        ));
    }

    #[test]
    fn tuples_serialize_with_one_based_vertices() {
        let g = k2();
        let mut state = BoundingState::new(2, 4);
        let t = compress_gen(&mut state, &g, 1, &[2], &mut stream(5)).unwrap();
        let json = serde_json::to_value(&t).unwrap();
        assert_eq!(json["kind"], "compress");
        assert_eq!(json["v"], 2);
        let back: UpdateTuple = serde_json::from_value(json).unwrap();
        assert_eq!(back, t);
    }
}
