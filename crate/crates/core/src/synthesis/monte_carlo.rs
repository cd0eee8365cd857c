//! Random-walk baseline: append random gates until the map corrects errors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bell::DesignationMatrix;
use crate::gate::{Gate, GateSequence};
use crate::gf2::{Mat10, PairIndex, PAIRS};
use crate::record::SolutionRecord;
use crate::verifier::relabeling;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonteCarloError {
    #[error("no correcting map within {draws} gates")]
    NotFound { draws: usize },
    #[error("designation is invalid")]
    InvalidDesignation,
}

#[derive(Clone, Debug)]
pub struct MonteCarloHit {
    pub record: SolutionRecord,
    /// Gates drawn before the hit, including the last one.
    pub draws: usize,
}

fn random_gate(rng: &mut ChaCha8Rng) -> Gate {
    let p = |rng: &mut ChaCha8Rng| PairIndex::from_zero_based(rng.random_range(0..PAIRS));
    match rng.random_range(0..3) {
        0 => {
            let s = rng.random_range(0..PAIRS);
            let t = (s + 1 + rng.random_range(0..PAIRS - 1)) % PAIRS;
            Gate::Bxor { source: PairIndex::from_zero_based(s), target: PairIndex::from_zero_based(t) }
        }
        1 => Gate::By { pair: p(rng) },
        _ => Gate::SxBx { pair: p(rng) },
    }
}

/// Draws gates uniformly (gate kind first, then its pairs) and appends each
/// to the physical sequence until the measured rows of the accumulated map
/// can be relabeled onto `mv`. Deterministic for a given seed. `Sz` is not
/// drawn: it only shifts every measurement by a constant.
pub fn monte_carlo_search(
    mv: &DesignationMatrix,
    seed: u64,
    max_len: usize,
) -> Result<MonteCarloHit, MonteCarloError> {
    if !mv.is_valid() {
        return Err(MonteCarloError::InvalidDesignation);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut forward: Vec<Gate> = Vec::new();
    let mut m_wx = Mat10::identity();
    for draw in 1..=max_len {
        let g = random_gate(&mut rng);
        g.apply_rows(&mut m_wx);
        forward.push(g);
        if let Some(i_x) = relabeling(&m_wx, mv) {
            let m_w = m_wx.mul(&i_x);
            let sequence = GateSequence::new(forward.iter().rev().copied().collect());
            let record = SolutionRecord {
                designation: *mv,
                path: None,
                m_w,
                i_x,
                sequence,
                counts: None,
            };
            return Ok(MonteCarloHit { record, draws: draw });
        }
    }
    Err(MonteCarloError::NotFound { draws: max_len })
}
