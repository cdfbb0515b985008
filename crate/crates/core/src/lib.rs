//! Simulator and verification toolkit for Majorana-based topological quantum
//! computation in the sparse-dense mixed encoding.
//!
//! The crate constructs braid and phase unitaries from the Majorana operator
//! algebra over a dense Fock-space representation, provides the sparse,
//! dense, and intermediate encodings, projective parity measurements with
//! reproducible randomness, and the measurement-plus-correction CNOT
//! pipelines (input correction, gate correction, and a probabilistic discard
//! baseline) together with a Monte-Carlo harness.
//!
//! # Quick start
//!
//! ```
//! use majsim_core::prelude::*;
//!
//! let space = build_space(4).unwrap();
//! let input = encode_logical(&space, &LogicalTwoQubit::basis(2)).unwrap(); // |10>
//! let report = cnot_process1(&input, &OutcomePolicy::forced(&[-1, -1])).unwrap();
//! let out = decode_logical(&report.final_state).unwrap();
//! assert_eq!(out.closest_basis_label(), "11");
//! ```

pub mod encoding;
pub mod error;
pub mod fock;
pub mod gates;
pub mod matrix;
pub mod measure;
pub mod protocol;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::encoding::{
        corrected_collapse_basis, decode_logical, dense_basis, encode_logical, even_collapse_basis,
        odd_collapse_basis, sp_basis, sparse_even_basis, sparse_noncomp_basis, EncodedBasis,
        LogicalTwoQubit,
    };
    pub use crate::error::{Error, Result};
    pub use crate::fock::{
        build_space, majorana, pair_parity_op, pairing_basis, quad_parity_op, total_parity_op,
        FockSpace, Operator, Pairing, StateVector,
    };
    pub use crate::gates::{
        braid, braid_matrix_check, duality_check, gate_on, named_gate, phase_gate, sector_matrix,
        BraidConvention, GateMatrix, NamedGate, Sector,
    };
    pub use crate::matrix::{CMat, ALG_TOL, SEQ_TOL};
    pub use crate::measure::{measure, MeasureOutcome, MeasurementRecord, OutcomePolicy, ShotRng};
    pub use crate::protocol::{
        chain_stats, cnot_discard, cnot_process1, cnot_process2, enumerate_cnot_branches,
        extract_logical_matrix, general_corrected_gate, ChainStats, CorrectionScheme, RunMode,
        RunReport,
    };
}
