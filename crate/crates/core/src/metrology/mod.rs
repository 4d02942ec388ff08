//! Seeded measurement of centralizer constants, distances, morphism-fit
//! residuals and Gaussian averages.
//!
//! Every supremum is estimated by a maximum over a sample stream, so every
//! reported constant is a lower bound for the true one. Sample `i` always
//! comes from ChaCha stream `i` of the seed; evaluation runs in parallel and
//! the reduction is done in index order, so results do not depend on the
//! thread count.

mod estimate;
mod fit;
mod gamma;
mod profile;
pub mod random;
mod sampler;

pub use estimate::{
    defining_ratio, distance_estimate, distance_ratio, draw_inputs, estimate_constant,
    replay_witness, EstimateKind, EstimateReport, Witness,
};
pub(crate) use estimate::{max_over_stream, SUP_NOTE};
pub use fit::{fit_morphism, FitReport, Side};
pub use gamma::{gamma_summing_mc, GammaTarget, MIN_RELIABLE_SAMPLES};
pub use profile::{
    check_dims, fmt_f64, growth_csv, growth_profile, kp_growth_witness, GrowthExperiment,
    GrowthRow, SpecFamily, SweepParams,
};
pub use sampler::{Sampler, SamplerTag};
