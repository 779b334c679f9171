//! Independent oracles: exhaustive enumeration, exact update marginals and
//! statistical checks of the sampler output.

pub mod enumerate;
pub mod marginal;
pub mod stats;

pub use enumerate::{count_colorings, enumerate_colorings, for_each_coloring, ENUMERATION_LIMIT};
pub use marginal::{
    exact_update_marginal, glauber_marginal, marginal_suite, scripted_trace, ExactDistribution, MarginalSuiteReport,
    MarginalUpdate, TraceStep,
};
pub use stats::{
    chi_square_critical, coalescence_stats, pearson_chi_square, phi_rate, sample_counts, total_variation,
    uniformity_test, write_drift_csv, CoalescenceReport, DriftBin, UniformityReport,
};
