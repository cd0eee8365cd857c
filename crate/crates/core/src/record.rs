//! The artifact produced by synthesis and consumed by the optimizer, verifier and CLI.

use serde::{Deserialize, Serialize};

use crate::bell::DesignationMatrix;
use crate::gate::{Direction, GateSequence};
use crate::gf2::Mat10;
use crate::synthesis::ChoicePath;

/// Number of options seen at each stage along one synthesis branch, or
/// summed over an enumeration.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct StageCounts {
    pub stage1: u64,
    pub stage2: u64,
    pub stage3: u64,
    pub stage4: u64,
    pub stage5: u64,
}

impl StageCounts {
    pub fn from_array(a: [u64; 5]) -> Self {
        Self { stage1: a[0], stage2: a[1], stage3: a[2], stage4: a[3], stage5: a[4] }
    }

    pub fn to_array(self) -> [u64; 5] {
        [self.stage1, self.stage2, self.stage3, self.stage4, self.stage5]
    }

    /// Stage `t`, 1-based.
    pub fn get(&self, t: usize) -> u64 {
        self.to_array()[t - 1]
    }
}

/// An encoding matrix together with a reduction sequence realizing it.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SolutionRecord {
    /// The designation the measured rows of `m_w` carry, in `m_w`'s column order.
    pub designation: DesignationMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<ChoicePath>,
    pub m_w: Mat10,
    /// Where the reduction sequence takes `m_w`: a block-permutation matrix.
    pub i_x: Mat10,
    pub sequence: GateSequence,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<StageCounts>,
}

impl SolutionRecord {
    /// Checks the structural invariants: measured rows equal the designation,
    /// the sequence reduces `m_w` to `i_x`, `i_x` is a legal block permutation,
    /// and the forward map times `i_x` is `m_w`.
    pub fn is_consistent(&self) -> bool {
        let measured = DesignationMatrix::from_measured_rows(&self.m_w) == self.designation;
        let forward = self.sequence.matrix(Direction::Forward);
        measured
            && self.sequence.reduce(&self.m_w) == self.i_x
            && self.i_x.is_block_permutation()
            && forward.is_linear()
            && forward.matrix.mul(&self.i_x) == self.m_w
    }
}
