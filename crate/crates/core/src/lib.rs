//! Finite-dimensional laboratory for nonlinear centralizers between
//! Schatten classes.
//!
//! The crate is layered bottom-up:
//!
//! * [`matcore`]: complex dense matrices, Schatten quasinorms, Schmidt and
//!   polar decompositions, Hölder factorizations and joint square roots.
//! * [`seqcore`]: finitely supported sequences, rank sequences and the
//!   Kalton–Peck maps on `ℓ^p`.
//! * [`centralizers`]: closed, serializable descriptions of homogeneous maps
//!   on matrices and the transforms that act on them.
//! * [`metrology`]: seeded sampling of the defining inequalities, morphism
//!   fitting, Gaussian averages and dimension sweeps.
//! * [`twisted`]: twisted-sum quasinorms and splitting probes.

// links the system LAPACK used by the kernel
extern crate openblas_src;

/// Library version recorded in experiment manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod centralizers;
pub mod error;
pub mod matcore;
pub mod metrology;
pub mod seqcore;
pub mod twisted;

pub use centralizers::{
    Centralizer, CentralizerSpec, Evaluation, MatrixMap, QuasilinearMap,
};
pub use error::{LabError, Result};
pub use matcore::{
    concavity_modulus, C64, Mat, NumericConfig, PIndex, PolarForm, SchmidtBackend, SchmidtForm,
    Tolerances, Vector,
};
pub use metrology::{EstimateKind, EstimateReport, Sampler, SamplerTag};
pub use seqcore::{LipschitzFn, Seq};
pub use twisted::TwistedVec;
