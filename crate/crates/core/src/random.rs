//! Reproducible exact randomness.
//!
//! Every random choice is read from a counter-addressed ChaCha8 stream, so a
//! bit is a pure function of `(seed, block, step, position)` and any block can
//! be regenerated in isolation.
//!
//! Stream derivation recipe (replayable by other implementations):
//!
//! * ChaCha8 key (32 bytes) = `seed` (u64 LE) ‖ `block` (u64 LE) ‖ `b"cftp-coloring/v1"`.
//! * The *step stream* of `(block, step)` is ChaCha stream id `2·step`; its
//!   first u64 is the head word of that step's threshold variable τ, all
//!   other choices of the step follow.
//! * The *tail stream* of τ is stream id `2·step + 1`; it supplies τ's bits
//!   beyond the first 64.
//! * The per-block *schedule stream* (vertex choices of the coalescence
//!   phase) is stream id `2^64 − 2`.
//! * Child seed `j` of a seed is the first u64 of stream `j` under the key
//!   with `block = 2^64 − 1`.
//!
//! u64 words are taken from `next_u64` and bits are consumed most significant
//! first. Steps must stay below `2^62`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::Color;

/// Exact rational thresholds in `[0, 1]`. All thresholds used by the updates
/// have denominators at most `k`.
pub type Rational = Ratio<u64>;

const DOMAIN: &[u8; 16] = b"cftp-coloring/v1";
const CHILD_BLOCK: u64 = u64::MAX;
const SCHEDULE_STREAM: u64 = u64::MAX - 1;

/// Comparisons give up after this many bits of τ (never reached in practice:
/// each additional word halves-to-the-64th the chance of a tie).
pub const MAX_TAU_BITS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MasterSeed(pub u64);

impl MasterSeed {
    /// An independent seed for the `index`-th sub-run (e.g. the j-th of many samples).
    pub fn child(self, index: u64) -> MasterSeed {
        let mut rng = ChaCha8Rng::from_seed(chacha_key(self.0, CHILD_BLOCK));
        rng.set_stream(index);
        MasterSeed(rng.next_u64())
    }
}

impl fmt::Display for MasterSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for MasterSeed {
    type Err = String;

    /// Accepts decimal or `0x`-prefixed hexadecimal.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            Some(hex) => u64::from_str_radix(hex, 16),
            None => s.parse::<u64>(),
        };
        parsed.map(MasterSeed).map_err(|e| format!("invalid seed `{s}`: {e}"))
    }
}

fn chacha_key(seed: u64, block: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&block.to_le_bytes());
    key[16..].copy_from_slice(DOMAIN);
    key
}

fn chacha_stream(seed: u64, block: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(chacha_key(seed, block));
    rng.set_stream(stream);
    rng
}

/// Where a stream comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamPath {
    pub seed: u64,
    pub block: u64,
    pub step: u64,
}

/// Which of the per-block streams a [`BitStream`] reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StreamId {
    Step(StreamPath),
    Schedule { seed: u64, block: u64 },
}

impl StreamId {
    /// The ChaCha `(key block, stream id)` pair; distinct ids map to distinct pairs.
    pub fn chacha_coordinates(&self) -> (u64, u64, u64) {
        match *self {
            StreamId::Step(p) => (p.seed, p.block, 2 * p.step),
            StreamId::Schedule { seed, block } => (seed, block, SCHEDULE_STREAM),
        }
    }
}

/// A sequential reader of unbiased bits.
pub struct BitStream {
    id: StreamId,
    rng: ChaCha8Rng,
    word: u64,
    bits_left: u32,
    consumed: u64,
}

impl BitStream {
    fn open(id: StreamId) -> Self {
        let (seed, block, stream) = id.chacha_coordinates();
        BitStream {
            id,
            rng: chacha_stream(seed, block, stream),
            word: 0,
            bits_left: 0,
            consumed: 0,
        }
    }

    /// Per-block stream for the coalescence vertex schedule.
    pub fn schedule(master: MasterSeed, block: u64) -> Self {
        Self::open(StreamId::Schedule { seed: master.0, block })
    }

    pub fn id(&self) -> StreamId {
        self.id
    }

    pub fn bits_consumed(&self) -> u64 {
        self.consumed
    }

    pub fn next_bit(&mut self) -> bool {
        self.next_bits(1) == 1
    }

    /// The next `count ≤ 64` bits as an integer, first bit most significant.
    pub fn next_bits(&mut self, count: u32) -> u64 {
        debug_assert!(count <= 64);
        if count == 0 {
            return 0;
        }
        self.consumed += u64::from(count);
        if count <= self.bits_left {
            let out = self.word >> (64 - count);
            self.word = if count == 64 { 0 } else { self.word << count };
            self.bits_left -= count;
            return out;
        }
        // Take what's left of the buffered word, then top up from a fresh one.
        let have = self.bits_left;
        let high = if have == 0 { 0 } else { self.word >> (64 - have) };
        let need = count - have;
        let fresh = self.rng.next_u64();
        let low = fresh >> (64 - need);
        self.word = if need == 64 { 0 } else { fresh << need };
        self.bits_left = 64 - need;
        if need == 64 {
            low
        } else {
            (high << need) | low
        }
    }
}

/// The bit stream for update `step` of block `block`.
pub fn substream(master: MasterSeed, block: u64, step: u64) -> BitStream {
    debug_assert!(step < 1 << 62);
    BitStream::open(StreamId::Step(StreamPath {
        seed: master.0,
        block,
        step,
    }))
}

/// Uniform on `0..m` by rejection on `⌈log₂ m⌉`-bit draws.
pub fn uniform_index(s: &mut BitStream, m: u64) -> u64 {
    assert!(m >= 1, "uniform_index needs a nonempty range");
    if m == 1 {
        return 0;
    }
    let bits = 64 - (m - 1).leading_zeros();
    loop {
        let x = s.next_bits(bits);
        if x < m {
            return x;
        }
    }
}

/// Uniform over `[k] ∖ excluded`; `excluded` must be sorted, distinct, within `1..=k`.
pub fn uniform_from_set(s: &mut BitStream, k: u32, excluded: &[Color]) -> Result<Color> {
    debug_assert!(excluded.windows(2).all(|w| w[0] < w[1]));
    let available = (k as usize).saturating_sub(excluded.len());
    if available == 0 {
        return Err(Error::EmptyComplement {
            k,
            excluded: excluded.len(),
        });
    }
    let rank = uniform_index(s, available as u64) as Color;
    Ok(nth_outside(rank, excluded))
}

/// The `rank`-th (0-based) positive integer not in the sorted set `excluded`.
pub(crate) fn nth_outside(rank: Color, excluded: &[Color]) -> Color {
    let mut c = rank + 1;
    for &e in excluded {
        if e <= c {
            c += 1;
        } else {
            break;
        }
    }
    c
}

/// Fisher–Yates shuffle driven by [`uniform_index`].
pub fn shuffle(s: &mut BitStream, items: &mut [Color]) {
    for i in (1..items.len()).rev() {
        let j = uniform_index(s, i as u64 + 1) as usize;
        items.swap(i, j);
    }
}

pub fn random_permutation(s: &mut BitStream, items: &[Color]) -> Vec<Color> {
    let mut out = items.to_vec();
    shuffle(s, &mut out);
    out
}

/// Outcome of comparing τ with a threshold q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cmp {
    /// τ ≤ q
    Le,
    /// τ > q
    Gt,
}

/// Digit generator for the binary expansion `0.d₁d₂…` of `rem/den < 1`
/// (the terminating expansion for dyadic values).
struct Expansion {
    rem: u128,
    den: u128,
}

impl Expansion {
    fn new(q: Rational) -> Self {
        Expansion {
            rem: u128::from(*q.numer()),
            den: u128::from(*q.denom()),
        }
    }

    /// The next `bits` digits, top-aligned in a u64.
    fn next_word(&mut self, bits: u32) -> u64 {
        let mut w = 0u64;
        for _ in 0..bits {
            self.rem <<= 1;
            w <<= 1;
            if self.rem >= self.den {
                self.rem -= self.den;
                w |= 1;
            }
        }
        if bits == 64 {
            w
        } else {
            w << (64 - bits)
        }
    }
}

/// Incremental comparison of τ, fed as top-aligned words, against a rational.
pub(crate) struct Resolver {
    expansion: Expansion,
}

impl Resolver {
    /// `None` when the threshold is 0 or 1 and no bits are needed.
    pub(crate) fn trivial(q: Rational) -> Option<Cmp> {
        if q >= Rational::from_integer(1) {
            Some(Cmp::Le)
        } else if *q.numer() == 0 {
            // τ = 0 has probability zero.
            Some(Cmp::Gt)
        } else {
            None
        }
    }

    pub(crate) fn new(q: Rational) -> Self {
        Resolver {
            expansion: Expansion::new(q),
        }
    }

    /// Compares the top `bits` of `word` with the next `bits` digits of q.
    pub(crate) fn feed(&mut self, word: u64, bits: u32) -> Option<Cmp> {
        let mask = if bits == 64 { u64::MAX } else { !(u64::MAX >> bits) };
        let tau = word & mask;
        let q = self.expansion.next_word(bits);
        match tau.cmp(&q) {
            std::cmp::Ordering::Less => Some(Cmp::Le),
            std::cmp::Ordering::Greater => Some(Cmp::Gt),
            std::cmp::Ordering::Equal => None,
        }
    }
}

/// A uniform real τ ∈ [0, 1] revealed 64 bits at a time.
///
/// The first word is read eagerly at creation; further words come from the
/// tail stream of the owning step, so comparisons made at different times
/// against different thresholds always see one and the same τ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LazyReal {
    source: Option<StreamPath>,
    prefix: SmallVec<[u64; 1]>,
}

impl LazyReal {
    /// Reads τ's head word from a fresh step stream.
    pub fn draw(stream: &mut BitStream) -> LazyReal {
        let path = match stream.id() {
            StreamId::Step(path) => path,
            StreamId::Schedule { .. } => panic!("τ must be drawn from a step stream"),
        };
        assert_eq!(stream.bits_consumed(), 0, "τ must be the first draw of its step");
        let head = stream.next_bits(64);
        LazyReal {
            source: Some(path),
            prefix: SmallVec::from_elem(head, 1),
        }
    }

    /// A real with a fixed, finite binary expansion and no backing stream.
    pub fn detached(words: Vec<u64>) -> LazyReal {
        LazyReal {
            source: None,
            prefix: SmallVec::from_vec(words),
        }
    }

    /// A detached real equal to the first 256 bits of `point ∈ [0, 1)`.
    pub fn at_point(point: Rational) -> LazyReal {
        assert!(point < Rational::from_integer(1));
        let mut exp = Expansion::new(point);
        LazyReal::detached((0..4).map(|_| exp.next_word(64)).collect())
    }

    pub fn source(&self) -> Option<StreamPath> {
        self.source
    }

    pub fn prefix_words(&self) -> &[u64] {
        &self.prefix
    }

    fn tail_word(path: StreamPath, index: usize) -> u64 {
        // Tail word i (i ≥ 1 overall) is word i-1 of the tail stream; two u32 per u64.
        let mut rng = chacha_stream(path.seed, path.block, 2 * path.step + 1);
        rng.set_word_pos(2 * (index as u128 - 1));
        rng.next_u64()
    }

    /// Decides τ ≤ q without retaining any extension of the prefix.
    pub fn compare(&self, q: Rational) -> Result<Cmp> {
        if let Some(c) = Resolver::trivial(q) {
            return Ok(c);
        }
        let mut resolver = Resolver::new(q);
        for &w in &self.prefix {
            if let Some(c) = resolver.feed(w, 64) {
                return Ok(c);
            }
        }
        let path = self.source.ok_or(Error::EntropyExhausted(self.prefix.len() * 64))?;
        let mut rng = chacha_stream(path.seed, path.block, 2 * path.step + 1);
        rng.set_word_pos(2 * (self.prefix.len() as u128 - 1));
        for _ in self.prefix.len()..MAX_TAU_BITS / 64 {
            if let Some(c) = resolver.feed(rng.next_u64(), 64) {
                return Ok(c);
            }
        }
        Err(Error::EntropyExhausted(MAX_TAU_BITS))
    }

    /// Like [`compare`](Self::compare), but keeps every word it had to reveal.
    pub fn compare_mut(&mut self, q: Rational) -> Result<Cmp> {
        if let Some(c) = Resolver::trivial(q) {
            return Ok(c);
        }
        let mut resolver = Resolver::new(q);
        let mut index = 0;
        loop {
            if index == self.prefix.len() {
                if index * 64 >= MAX_TAU_BITS {
                    return Err(Error::EntropyExhausted(MAX_TAU_BITS));
                }
                let path = self.source.ok_or(Error::EntropyExhausted(index * 64))?;
                self.prefix.push(Self::tail_word(path, index));
            }
            if let Some(c) = resolver.feed(self.prefix[index], 64) {
                return Ok(c);
            }
            index += 1;
        }
    }
}

/// Free-function form of [`LazyReal::compare_mut`].
pub fn lazy_compare(tau: &mut LazyReal, q: Rational) -> Result<Cmp> {
    tau.compare_mut(q)
}
