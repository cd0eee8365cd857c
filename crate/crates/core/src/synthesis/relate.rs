//! Moving between designations with BXORs among the measured pairs.

use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use crate::bell::DesignationMatrix;
use crate::gate::{Gate, GateSequence};
use crate::gf2::BitVec10;

/// A shortest BXOR sequence on pairs 2..5 whose row operations carry the
/// measured rows of `mv1` to `mv2`.
///
/// BXOR(S→T) adds the amplitude row of S to the amplitude row of T, so on a
/// designation it is the row operation `row(T-1) ^= row(S-1)`. Left-multiplying
/// any encoding matrix for `mv1` by the returned gates, in list order, gives
/// one for `mv2`. Among shortest sequences the one first in gate-rank order
/// is returned. `None` when either designation is invalid or none exists.
pub fn relate_designations(mv1: &DesignationMatrix, mv2: &DesignationMatrix) -> Option<GateSequence> {
    if !mv1.is_valid() || !mv2.is_valid() {
        return None;
    }
    let moves: Vec<(Gate, usize, usize)> = Gate::alphabet()
        .filter_map(|g| match g {
            Gate::Bxor { source, target } if source.get() >= 2 && target.get() >= 2 => {
                Some((g, source.get() - 2, target.get() - 2))
            }
            _ => None,
        })
        .collect();
    let start = mv1.rows();
    let goal = mv2.rows();
    let mut parent: FxHashMap<[BitVec10; 4], Option<([BitVec10; 4], Gate)>> = FxHashMap::default();
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        if cur == goal {
            let mut gates = Vec::new();
            let mut at = cur;
            while let Some(Some((prev, g))) = parent.get(&at) {
                gates.push(*g);
                at = *prev;
            }
            gates.reverse();
            return Some(GateSequence::new(gates));
        }
        for &(g, s, t) in &moves {
            let mut next = cur;
            next[t] ^= cur[s];
            parent.entry(next).or_insert_with(|| {
                queue.push_back(next);
                Some((cur, g))
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::pair;
    use crate::gf2::Mat10;
    use crate::synthesis::tests::{mat, mv11, A1_MW};

    #[test]
    fn swapped_is_one_bxor() {
        let swapped: DesignationMatrix = "1011111000 0010111110 0100011010 0001101001".parse().unwrap();
        let s = relate_designations(&mv11(), &swapped).unwrap();
        assert_eq!(s.gates(), &[Gate::bxor(pair(3), pair(2)).unwrap()]);
        let mut m: Mat10 = mat(A1_MW);
        for g in s.gates() {
            g.apply_rows(&mut m);
        }
        assert_eq!(DesignationMatrix::from_measured_rows(&m), swapped);
    }

    #[test]
    fn trivial_cases() {
        assert!(relate_designations(&mv11(), &mv11()).unwrap().is_empty());
        let bad = DesignationMatrix::from_rows([BitVec10::ZERO; 4]);
        assert!(relate_designations(&mv11(), &bad).is_none());
    }
}
