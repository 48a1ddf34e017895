pub mod baker;
pub mod basis;
pub mod bits;
pub mod coarse;
pub mod dense;
pub mod error;
pub mod experiment;
pub mod histories;
pub mod shape;
pub mod state;

#[cfg(test)]
mod test_util;

pub use baker::{apply_baker, BakerMap};
pub use basis::{analyze, basis_state, localization_centers, synthesize, BasisLabel, BasisTransform, Localization};
pub use bits::{binary_fraction, bits_to_index, index_to_bits, BitString};
pub use coarse::{enumerate_block, project, validate_run, BlockInitialState, CoarseGraining};
pub use error::{Error, Result};
pub use histories::{
    coarse_dfunc, entropy_bits, full_dfunc, history_distribution, offdiagonal_norm, propagate_branches, theorem1_value,
    theorem2_value, BranchEnsemble, CoarseHistory, FullHistory, HistoryDistribution, HistoryKind, PropagationOptions,
};
pub use shape::SystemShape;
pub use state::{inner_product, StateVector};
