//! Shortening reduction sequences.
//!
//! [`permute_and_reduce`] keeps a record's BXOR gates and searches over their
//! orderings; [`minimal_sequence`] searches all sequences up to a depth.

mod permute;
mod search;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gate::GateSequence;
use crate::gf2::Mat10;

pub use permute::permute_and_reduce;
pub use search::{minimal_sequence, LABEL_BUDGET};

/// What a shorter sequence minimizes.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Sequence length, ties broken by BXOR count.
    #[default]
    TotalOps,
    /// BXOR count, ties broken by sequence length.
    BxorThenTotal,
}

impl Objective {
    /// Compares two `(bxor, total)` values; `Less` is better.
    pub fn compare(self, a: (usize, usize), b: (usize, usize)) -> Ordering {
        match self {
            Objective::TotalOps => (a.1, a.0).cmp(&(b.1, b.0)),
            Objective::BxorThenTotal => a.cmp(&b),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::TotalOps => "total_ops",
            Objective::BxorThenTotal => "bxor_then_total",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown objective {0:?}; expected total or bxor")]
pub struct ObjectiveError(pub String);

impl FromStr for Objective {
    type Err = ObjectiveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "total" | "total_ops" => Ok(Objective::TotalOps),
            "bxor" | "bxor_then_total" => Ok(Objective::BxorThenTotal),
            _ => Err(ObjectiveError(s.to_string())),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct OptimizationResult {
    /// Reduction sequence taking `m_w` to `best_i_x`.
    pub best: GateSequence,
    pub best_i_x: Mat10,
    /// Search nodes visited.
    pub explored: u64,
    /// `(bxor, total)` of `best`.
    pub objective_value: (usize, usize),
}

impl OptimizationResult {
    fn new(best: GateSequence, m_w: &Mat10, explored: u64) -> Self {
        let best_i_x = best.reduce(m_w);
        let objective_value = best.cost();
        Self { best, best_i_x, explored, objective_value }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OptimizeError {
    #[error("no reduction sequence of length at most {max_depth} exists")]
    DepthExceeded { max_depth: usize },
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("search stopped after {labels} states; lower the depth")]
    BudgetExceeded { labels: u64 },
}
