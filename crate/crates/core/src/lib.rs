//! Synthesis, minimization and verification of the linear Boolean functions
//! that drive the five-pair single-error-correcting code.
//!
//! A block of five Bell pairs is a 10-bit word. An encoding function is an
//! invertible 10×10 GF(2) matrix `M_w`, realized by a sequence of the four
//! basic bilateral operations. Measuring the amplitude bits of pairs 2..5
//! identifies which single error occurred, and a Pauli rotation on pair 1
//! undoes it.

pub mod bell;
pub mod gate;
pub mod gf2;
pub mod io;
pub mod optimizer;
pub mod record;
pub mod synthesis;
pub mod verifier;

pub use bell::{BellLabel, DesignationMatrix, PauliOp};
pub use gate::{AffineMap, Direction, Gate, GateSequence};
pub use gf2::{BitVec10, BitVec4, Block2, GroupIndex, Mat10, PairIndex};
pub use optimizer::{minimal_sequence, permute_and_reduce, Objective, OptimizationResult, OptimizeError};
pub use record::{SolutionRecord, StageCounts};
pub use synthesis::{synthesize, ChoicePath, SynthesisError};
pub use verifier::{check_correction, verify_solution, VerificationReport, VerifyInput};
