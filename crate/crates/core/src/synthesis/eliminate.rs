//! Zeroing one pair-block against a det-1 pivot block in the same column group.

use std::sync::OnceLock;

use thiserror::Error;

use crate::gate::{apply_rows, Gate, GateSequence};
use crate::gf2::{Block2, PairIndex};

/// Longest local sequence tried.
pub const MAX_DEPTH: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EliminationError {
    #[error("pivot block {0:?} is singular")]
    SingularPivot(Block2),
    #[error("target block {0:?} is invertible")]
    InvertibleTarget(Block2),
    #[error("no sequence of length <= {MAX_DEPTH} zeroes the target")]
    NoSolution,
    #[error("pivot and target are the same pair")]
    SamePair,
}

/// Local gates in tie-break order, with the pivot as pair 1 and the target as pair 2.
const LOCAL: [Gate; 6] = {
    const A: PairIndex = PairIndex::FIRST;
    const B: PairIndex = PairIndex::SECOND;
    [
        Gate::By { pair: A },
        Gate::By { pair: B },
        Gate::SxBx { pair: A },
        Gate::SxBx { pair: B },
        Gate::Bxor { source: A, target: B },
        Gate::Bxor { source: B, target: A },
    ]
};

type Table = Vec<Option<Vec<u8>>>;

fn key(pivot: Block2, target: Block2) -> usize {
    (pivot.nibble() as usize) << 4 | target.nibble() as usize
}

/// Rows 1-2 hold the pivot block and rows 3-4 the target, two bits each.
fn rows_of(pivot: Block2, target: Block2) -> [u8; 10] {
    let row = |b: Block2, r: usize| (b.get(r, 1) as u8) | (b.get(r, 2) as u8) << 1;
    let mut rows = [0u8; 10];
    rows[0] = row(pivot, 1);
    rows[1] = row(pivot, 2);
    rows[2] = row(target, 1);
    rows[3] = row(target, 2);
    rows
}

fn search(start: [u8; 10], depth: usize, word: &mut Vec<u8>) -> bool {
    if word.len() == depth {
        return start[2] == 0 && start[3] == 0;
    }
    for (i, g) in LOCAL.iter().enumerate() {
        let mut rows = start;
        apply_rows(*g, &mut rows);
        word.push(i as u8);
        if search(rows, depth, word) {
            return true;
        }
        word.pop();
    }
    false
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![None; 256];
        for p in Block2::INVERTIBLE {
            for n in 0..16u8 {
                let target = Block2::from_nibble(n);
                if target.det() {
                    continue;
                }
                let start = rows_of(p, target);
                t[key(p, target)] = (0..=MAX_DEPTH).find_map(|d| {
                    let mut word = Vec::new();
                    search(start, d, &mut word).then_some(word)
                });
            }
        }
        t
    })
}

/// The shortest sequence over {By, SxBx on either pair, BXOR either way}
/// whose reduction-order application zeroes `target` while keeping `pivot`
/// invertible; ties go to the lexicographically first word in the order
/// By(α), By(β), SxBx(α), SxBx(β), BXOR(α→β), BXOR(β→α).
pub fn eliminate_block(
    pivot: Block2,
    target: Block2,
    pivot_pair: PairIndex,
    target_pair: PairIndex,
) -> Result<GateSequence, EliminationError> {
    if pivot_pair == target_pair {
        return Err(EliminationError::SamePair);
    }
    if !pivot.det() {
        return Err(EliminationError::SingularPivot(pivot));
    }
    if target.det() {
        return Err(EliminationError::InvertibleTarget(target));
    }
    let word = table()[key(pivot, target)].as_ref().ok_or(EliminationError::NoSolution)?;
    Ok(word.iter().map(|&i| relabel(LOCAL[i as usize], pivot_pair, target_pair)).collect())
}

fn relabel(g: Gate, a: PairIndex, b: PairIndex) -> Gate {
    let map = |p: PairIndex| if p == PairIndex::FIRST { a } else { b };
    match g {
        Gate::Bxor { source, target } => Gate::Bxor { source: map(source), target: map(target) },
        Gate::By { pair } => Gate::By { pair: map(pair) },
        Gate::SxBx { pair } => Gate::SxBx { pair: map(pair) },
        Gate::Sz { pair } => Gate::Sz { pair: map(pair) },
    }
}

/// The block pair after replaying `seq` (built for pairs `a`, `b`).
#[cfg(test)]
pub(crate) fn replay(pivot: Block2, target: Block2, seq: &GateSequence, a: PairIndex, b: PairIndex) -> (Block2, Block2) {
    let mut rows = rows_of(pivot, target);
    let back = |p: PairIndex| if p == a { PairIndex::FIRST } else if p == b { PairIndex::SECOND } else { unreachable!() };
    for g in seq.gates() {
        let g = match *g {
            Gate::Bxor { source, target } => Gate::Bxor { source: back(source), target: back(target) },
            Gate::By { pair } => Gate::By { pair: back(pair) },
            Gate::SxBx { pair } => Gate::SxBx { pair: back(pair) },
            Gate::Sz { pair } => Gate::Sz { pair: back(pair) },
        };
        apply_rows(g, &mut rows);
    }
    let block = |r1: u8, r2: u8| Block2::new([[r1 & 1, r1 >> 1 & 1], [r2 & 1, r2 >> 1 & 1]]);
    (block(rows[0], rows[1]), block(rows[2], rows[3]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::pair;

    #[test]
    fn worked_chain_block() {
        let seq = eliminate_block(
            Block2::IDENTITY,
            Block2::new([[1, 1], [0, 0]]),
            pair(1),
            pair(2),
        )
        .unwrap();
        assert_eq!(seq.len(), 3);
        let (p, t) = replay(Block2::IDENTITY, Block2::new([[1, 1], [0, 0]]), &seq, pair(1), pair(2));
        assert!(t.is_zero());
        assert!(p.det());
        // no sequence of length 2 or less exists, so [By(β), SxBx(α), BXOR(α→β)] ties at 3
        let chain = GateSequence::new(vec![
            Gate::By { pair: pair(2) },
            Gate::SxBx { pair: pair(1) },
            Gate::bxor(pair(1), pair(2)).unwrap(),
        ]);
        let (p2, t2) = replay(Block2::IDENTITY, Block2::new([[1, 1], [0, 0]]), &chain, pair(1), pair(2));
        assert_eq!(p2, Block2::new([[1, 0], [1, 1]]));
        assert!(t2.is_zero());
    }

    #[test]
    fn zero_target_needs_nothing() {
        for p in Block2::INVERTIBLE {
            assert!(eliminate_block(p, Block2::ZERO, pair(3), pair(5)).unwrap().is_empty());
        }
    }

    #[test]
    fn preconditions() {
        assert_eq!(
            eliminate_block(Block2::ZERO, Block2::ZERO, pair(1), pair(2)),
            Err(EliminationError::SingularPivot(Block2::ZERO))
        );
        assert!(eliminate_block(Block2::IDENTITY, Block2::IDENTITY, pair(1), pair(2)).is_err());
        assert!(eliminate_block(Block2::IDENTITY, Block2::ZERO, pair(1), pair(1)).is_err());
    }

    #[test]
    fn gates_name_the_right_pairs() {
        let seq = eliminate_block(Block2::IDENTITY, Block2::new([[0, 0], [1, 0]]), pair(4), pair(2)).unwrap();
        for g in seq.gates() {
            assert!(g.touches(pair(4)) || g.touches(pair(2)));
            assert!(!g.touches(pair(1)));
        }
    }
}
