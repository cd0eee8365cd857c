//! Reordering the BXOR gates of a known sequence.

use super::search::{search, Moves};
use super::{Objective, OptimizationResult};
use crate::gate::{Gate, GateSequence};
use crate::gf2::PairIndex;
use crate::record::SolutionRecord;

/// Tries every ordering of the record's BXOR gates and re-derives everything
/// around them: each BXOR may run in either direction and any single-pair
/// gates may sit between them, as an elimination step would choose. The
/// result uses the same BXORs (as unordered pairs, with multiplicity) and
/// still reduces `m_w` to a block permutation, possibly a different one.
/// Returns the record's own sequence if nothing is strictly better.
///
/// All candidates share the BXOR count, so both objectives minimize length.
/// `Sz` gates only shift the offset and are kept at the front. A record whose
/// search would outgrow [`super::LABEL_BUDGET`] keeps its own sequence.
pub fn permute_and_reduce(rec: &SolutionRecord, objective: Objective) -> OptimizationResult {
    let gates = rec.sequence.gates();
    let unordered = |g: &Gate| match *g {
        Gate::Bxor { source, target } => Some((source.min(target), source.max(target))),
        _ => None,
    };
    // distinct pairs with their multiplicities and mixed-radix tag weights
    let mut pairs: Vec<((PairIndex, PairIndex), u32)> = Vec::new();
    for p in gates.iter().filter_map(unordered) {
        match pairs.iter_mut().find(|(q, _)| *q == p) {
            Some((_, n)) => *n += 1,
            None => pairs.push((p, 1)),
        }
    }
    pairs.sort();
    let mut weights = Vec::with_capacity(pairs.len());
    let mut full = 0u32;
    let mut w = 1u32;
    for &(_, n) in &pairs {
        weights.push(w);
        full += n * w;
        w *= n + 1;
    }
    let tag = |t: u32, g: Gate| -> Option<u32> {
        let Some(p) = unordered(&g) else { return Some(t) };
        let i = pairs.iter().position(|(q, _)| *q == p)?;
        let used = t / weights[i] % (pairs[i].1 + 1);
        (used < pairs[i].1).then(|| t + weights[i])
    };
    let mut alphabet: Vec<Gate> = (0..10).filter_map(Gate::from_rank).collect();
    for &((a, b), _) in &pairs {
        alphabet.push(Gate::Bxor { source: a, target: b });
        alphabet.push(Gate::Bxor { source: b, target: a });
    }
    alphabet.sort_by_key(|g| g.rank());
    let moves = Moves { alphabet, tag: &tag, full };

    let sz: Vec<Gate> = gates.iter().copied().filter(|g| matches!(g, Gate::Sz { .. })).collect();
    let linear_len = gates.len() - sz.len();
    // every BXOR is used, so no reduction is shorter than their count; the
    // first depth with a hit is the shortest
    let mut explored = 0;
    let mut found = None;
    for depth in full_count(&pairs)..linear_len {
        match search(&rec.m_w, Objective::TotalOps, depth, &moves) {
            Ok(f) => {
                explored += f.explored;
                if f.gates.is_some() {
                    found = f.gates;
                    break;
                }
            }
            Err(labels) => {
                explored += labels;
                break;
            }
        }
    }
    let original = OptimizationResult::new(rec.sequence.clone(), &rec.m_w, explored);
    let Some(found) = found else { return original };
    let candidate = OptimizationResult::new(sz.into_iter().chain(found).collect::<GateSequence>(), &rec.m_w, explored);
    if objective.compare(candidate.objective_value, original.objective_value).is_lt() {
        candidate
    } else {
        original
    }
}

fn full_count(pairs: &[((PairIndex, PairIndex), u32)]) -> usize {
    pairs.iter().map(|&(_, n)| n as usize).sum()
}
