//! Coupling from the past over blocks of `T` updates.
//!
//! Block `i` covers the time window `[−(i+1)T, −iT−1]`. Blocks are generated
//! for `i = 0, 1, 2, …` until one satisfies Φ; its unique coloring is then
//! pushed forward through blocks `i−1, …, 0`, each applied earliest update
//! first.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{validate_instance, Coloring, Graph};
use crate::phase::{generate_block_observed, Block, StepObserver};
use crate::random::MasterSeed;

/// Applies a block's tuples to `chi` in chronological order.
pub fn apply_block_in_place(block: &Block, g: &Graph, chi: &mut Coloring) -> Result<()> {
    for tuple in &block.tuples {
        tuple.apply(g, block.k, chi)?;
    }
    Ok(())
}

pub fn apply_block(block: &Block, chi: &Coloring, g: &Graph) -> Result<Coloring> {
    let mut out = chi.clone();
    apply_block_in_place(block, g, &mut out)?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub coloring: Coloring,
    pub blocks_used: u64,
}

#[derive(Clone, Debug, Default)]
pub struct SampleOptions {
    /// Serialize blocks that did not coalesce to this directory instead of
    /// holding them in memory.
    pub spill_dir: Option<PathBuf>,
    /// Keep generating this many blocks past the first Φ-true one. The output
    /// must not change; useful only for testing.
    pub extra_blocks: u64,
}

/// Where non-coalesced blocks wait for the roll-forward pass.
enum BlockStore {
    Memory(Vec<Block>),
    Spill {
        dir: PathBuf,
        tag: u64,
        files: Vec<PathBuf>,
    },
}

impl BlockStore {
    fn new(options: &SampleOptions, seed: MasterSeed) -> Result<Self> {
        Ok(match &options.spill_dir {
            None => BlockStore::Memory(Vec::new()),
            Some(dir) => {
                fs::create_dir_all(dir)?;
                BlockStore::Spill {
                    dir: dir.clone(),
                    tag: seed.0,
                    files: Vec::new(),
                }
            }
        })
    }

    fn push(&mut self, block: Block) -> Result<()> {
        match self {
            BlockStore::Memory(blocks) => blocks.push(block),
            BlockStore::Spill { dir, tag, files } => {
                let path = dir.join(format!("block-{tag:016x}-{:06}.json", block.index));
                let mut out = BufWriter::new(File::create(&path)?);
                serde_json::to_writer(&mut out, &block)?;
                files.push(path);
            }
        }
        Ok(())
    }

    /// Pushes `chi` through the stored blocks, latest index (earliest in time) first.
    fn roll_forward(self, g: &Graph, chi: &mut Coloring) -> Result<()> {
        match self {
            BlockStore::Memory(blocks) => {
                for block in blocks.iter().rev() {
                    apply_block_in_place(block, g, chi)?;
                }
            }
            BlockStore::Spill { files, .. } => {
                for path in files.iter().rev() {
                    let block = read_block(path)?;
                    apply_block_in_place(&block, g, chi)?;
                    fs::remove_file(path)?;
                }
            }
        }
        Ok(())
    }
}

pub fn read_block(path: &Path) -> Result<Block> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

/// Draws an exactly uniform proper k-coloring of `g`.
pub fn perfect_sample(g: &Graph, k: u32, seed: MasterSeed) -> Result<SampleOutcome> {
    perfect_sample_with(g, k, seed, &SampleOptions::default(), &mut ())
}

pub fn perfect_sample_with<O: StepObserver + ?Sized>(
    g: &Graph,
    k: u32,
    seed: MasterSeed,
    options: &SampleOptions,
    observer: &mut O,
) -> Result<SampleOutcome> {
    validate_instance(g, k)?;
    let mut store = BlockStore::new(options, seed)?;
    let mut index = 0u64;
    let first = loop {
        let block = generate_block_observed(g, k, seed, index, observer)?;
        index += 1;
        if block.phi {
            break block;
        }
        store.push(block)?;
    };

    // Forced look-back into blocks further in the past. The earliest Φ-true
    // block becomes the starting point and every later block is rolled through.
    let mut lookback = Vec::new();
    for _ in 0..options.extra_blocks {
        lookback.push(generate_block_observed(g, k, seed, index, observer)?);
        index += 1;
    }
    let mut start = match lookback.iter().rposition(|b| b.phi) {
        Some(pos) => {
            let mut chi = lookback[pos].unique_coloring.clone().expect("Φ-true block");
            for block in lookback[..pos].iter().rev() {
                apply_block_in_place(block, g, &mut chi)?;
            }
            apply_block_in_place(&first, g, &mut chi)?;
            chi
        }
        None => first.unique_coloring.expect("Φ-true block"),
    };

    store.roll_forward(g, &mut start)?;
    Ok(SampleOutcome {
        coloring: start,
        blocks_used: index,
    })
}
