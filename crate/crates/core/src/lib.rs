//! Exact sampling of uniformly random proper k-colorings of graphs with
//! maximum degree Δ, for k > 3Δ.
//!
//! The sampler runs coupling from the past over blocks of updates. Each
//! update is drawn against a bounding chain that tracks, for every vertex, a
//! list of colors it could have under any starting coloring. A block whose
//! lists all end up singletons maps every coloring to the same output.
//!
//! ```
//! use cftp_coloring::{generators, perfect_sample, is_proper, MasterSeed};
//!
//! let g = generators::cycle(5);
//! let out = perfect_sample(&g, 7, MasterSeed(42)).unwrap();
//! assert!(is_proper(&g, &out.coloring));
//! ```

pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod phase;
pub mod random;
pub mod sampler;
pub mod update;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{is_proper, max_degree, validate_instance, Color, Coloring, Graph};
pub use io::{load_graph, load_graph_file, write_dimacs, write_edgelist, GraphFormat};
pub use phase::{coalescence_horizon, generate_block, phi, Block, Phase, PhasePlan, StepObserver, StepRecord};
pub use random::{LazyReal, MasterSeed, Rational};
pub use sampler::{apply_block, perfect_sample, perfect_sample_with, SampleOptions, SampleOutcome};
pub use update::{BoundingState, UpdateKind, UpdateTuple};

/// Crate version, embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
