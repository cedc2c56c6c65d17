//! Quaternary message-passing decoding of planar surface codes on nested,
//! progressively sparsified Tanner graphs, together with exact reference
//! computations used to check it.

pub mod decoder;
pub mod error;
pub mod geometry;
pub mod mp;
pub mod noise;
pub mod oracle;
pub mod pauli;
pub mod sim;
pub mod strip;

pub use decoder::{decode, max_iteration_budget, DecodeOutcome, Decoder, DecoderConfig};
pub use error::{Error, Result};
pub use geometry::{
    dilution_sequence, sparsify, CheckType, DilutedGraph, DilutionSequence, PatternFamily,
    SparsificationPattern, SurfaceCode,
};
pub use mp::{run_mp, MpConfig, MpGraph, MpMode, PhiMode};
pub use noise::{prior_of, xz_coupling, NoiseKind, NoiseModel, Prior};
pub use oracle::{error_correcting_radius, RadiusReport, TieRule};
pub use pauli::{classify_residual, syndrome, Pauli, PauliConfig, ResidualClass, Syndrome};
pub use sim::{run_sweep, SweepRow, SweepSpec};
pub use strip::{block_experiment, dilution_map_step, strip_decode, BlockExperimentResult, Strip};
