//! Rainbow paths: the structured subgraph, linking, and the full extraction
//! pipeline.

pub mod constants;
pub mod assembly;
pub mod linking;
pub mod pipeline;
pub mod structured;

pub use constants::Constants;
pub use assembly::{build_structured_subgraph, grow_anchored_rainbow_path, robust_vertices, AssemblyOutcome, PathGrowth};
pub use linking::link_fragments;
pub use pipeline::{
    dyadic_gap_select, extend_paths_to_window, extract, extract_with_report, greedy_rogue_matching, pack_bins,
    prune_rogue_degrees, randomized_tail_extension, ExtendOutcome, ExtensionState, ExtractOptions, ExtractReport,
    MatchingOutcome, MatchingState, Mode, Pruned, TailExtension, Trace,
};
pub use structured::{check_property_ii, check_property_iii, PairCheck, Part, StructuredSubgraph};
