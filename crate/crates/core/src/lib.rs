//! Filter mode decomposition.
//!
//! Iterative zero-phase filtering that splits 1D and 2D signals into
//! components, including the LINOEP variants whose components are linearly
//! independent, not pairwise orthogonal, and still preserve energy exactly.
//! Also here: a verifier for energy-preserving sequences, probes for
//! linearity and circular-shift invariance of decomposition systems, and
//! discrete spirals of Theodorus in any dimension.

pub mod dft;
pub mod epcheck;
pub mod error;
pub mod filters;
pub mod fmd;
pub mod signal;
pub mod spiral;

pub use dft::{dft_forward, dft_inverse, Spectrum};
pub use epcheck::{
    fmd_system, probe_additivity, probe_homogeneity, probe_time_invariance, verify_sequence,
    Classification, ProbeProperty, ProbeReport, SequenceVerdict,
};
pub use error::{Error, Result};
pub use filters::{
    apply_zero_phase, gaussian_response, ideal_response, moving_average, FilterSpec,
    FrequencyResponse,
};
pub use fmd::{
    build_ledger, decompose, decompose_linoep_filter_side, decompose_linoep_residue_side,
    decompose_plain, gram_matrix, gram_schmidt, Algorithm, DecompositionResult,
};
pub use signal::{energy, inner_product, norm, pee, EnergyLedger, Shape, Signal};
pub use spiral::{theodorus_2d, theodorus_3d, theodorus_nd, SpiralPath, Steering};

pub use num_complex::Complex64;
