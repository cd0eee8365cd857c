//! Meet-in-the-middle search for a shortest reduction sequence.
//!
//! A sequence `g_1 … g_L` reduces `m_w` when `G·m_w` lies in the group `N`
//! of block-permutation matrices with invertible blocks, `G = g_L ⋯ g_1`.
//! Right multiplication by `N` permutes the column pairs and mixes each pair
//! within its span, so the right coset `X·N` is determined by the set of five
//! 2-dimensional spans of `X`'s column pairs. Every gate is an involution,
//! hence `G·m_w ∈ N` iff `g_a ⋯ g_1 (m_w N) = g_{a+1} ⋯ g_L N`: one frontier
//! grows from the coset of `m_w`, the other from `N` itself, both under left
//! multiplication, and they meet on a common coset.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::{Objective, OptimizationResult, OptimizeError};
use crate::gate::{Gate, GateSequence, LINEAR_ALPHABET};
use crate::gf2::{Mat10, PAIRS};

type Key = u128;

const NONE: u32 = u32::MAX;
const CHUNK: usize = 1 << 15;

/// Most labels the two frontiers may hold together, about 2 GB.
pub const LABEL_BUDGET: usize = 24_000_000;

/// Canonical code of the plane spanned by two independent column words:
/// the two smallest of its three non-zero vectors, 10 bits each.
fn plane(a: u16, b: u16) -> u32 {
    let c = a ^ b;
    let mut v = [a, b, c];
    v.sort_unstable();
    v[0] as u32 | (v[1] as u32) << 10
}

fn pack(mut planes: [u32; PAIRS]) -> Key {
    planes.sort_unstable();
    planes.iter().fold(0, |k, &p| k << 20 | p as Key)
}

fn unpack(key: Key) -> [u32; PAIRS] {
    std::array::from_fn(|i| (key >> (20 * (PAIRS - 1 - i)) & 0xF_FFFF) as u32)
}

fn coset(m: &Mat10) -> Key {
    pack(std::array::from_fn(|k| plane(m.column(2 * k + 1).word(), m.column(2 * k + 2).word())))
}

fn step(key: Key, g: Gate) -> Key {
    pack(unpack(key).map(|p| plane(g.apply_word(p as u16 & 0x3FF), g.apply_word((p >> 10) as u16))))
}

/// The moves of a search: a gate alphabet and a tag carried along each path.
/// The tag update may reject a gate, and two halves only meet when their
/// tags add up to `full`.
pub(super) struct Moves<'a> {
    pub alphabet: Vec<Gate>,
    pub tag: &'a (dyn Fn(u32, Gate) -> Option<u32> + Sync),
    pub full: u32,
}

impl Moves<'_> {
    fn all_linear() -> Moves<'static> {
        Moves { alphabet: (0..LINEAR_ALPHABET).filter_map(Gate::from_rank).collect(), tag: &|t, _| Some(t), full: 0 }
    }
}

#[derive(Clone, Copy)]
struct Label {
    key: Key,
    tag: u32,
    /// Label this one extends, `NONE` at the root.
    parent: u32,
    /// Earlier label on the same state, `NONE` if first.
    prev: u32,
    gate: u8,
    bxor: u8,
    total: u8,
}

/// All (coset, tag) states within `depth` gates of a start, each with its
/// Pareto-optimal `(bxor, total)` labels (a single shortest label under
/// `TotalOps`).
struct Frontier {
    labels: Vec<Label>,
    /// Most recent label of each state; its `prev` chain lists the rest.
    index: FxHashMap<(Key, u32), u32>,
}

impl Frontier {
    /// `None` once more than `budget` labels would be kept.
    fn grow(start: Key, depth: usize, objective: Objective, moves: &Moves<'_>, budget: usize) -> Option<Self> {
        let root = Label { key: start, tag: 0, parent: NONE, prev: NONE, gate: 0, bxor: 0, total: 0 };
        let mut f = Self { labels: vec![root], index: FxHashMap::default() };
        f.index.insert((start, 0), 0);
        let mut layer = 0..1usize;
        for t in 1..=depth {
            let begin = f.labels.len();
            let mut offset = layer.start;
            while offset < layer.end {
                let end = (offset + CHUNK).min(layer.end);
                let labels = f.labels[offset..end].to_vec();
                let cands: Vec<Label> = labels
                    .par_iter()
                    .enumerate()
                    .flat_map_iter(|(i, l)| {
                        let parent = (offset + i) as u32;
                        // a gate repeated back to back cancels
                        let fresh = move |g: &&Gate| l.parent == NONE || g.rank() != l.gate as usize;
                        moves.alphabet.iter().filter(fresh).filter_map(move |&g| {
                            Some(Label {
                                key: step(l.key, g),
                                tag: (moves.tag)(l.tag, g)?,
                                parent,
                                prev: NONE,
                                gate: g.rank() as u8,
                                bxor: l.bxor + g.is_bxor() as u8,
                                total: t as u8,
                            })
                        })
                    })
                    .collect();
                for label in cands {
                    f.offer(label, objective);
                }
                if f.labels.len() > budget {
                    return None;
                }
                offset = end;
            }
            layer = begin..f.labels.len();
            if layer.is_empty() {
                break;
            }
        }
        Some(f)
    }

    fn offer(&mut self, mut label: Label, objective: Objective) {
        let state = (label.key, label.tag);
        let Some(&latest) = self.index.get(&state) else {
            self.index.insert(state, self.labels.len() as u32);
            self.labels.push(label);
            return;
        };
        let l = &mut self.labels[latest as usize];
        // the latest label has the fewest BXORs on this state
        if objective == Objective::TotalOps || label.bxor >= l.bxor {
            return;
        }
        if l.total == label.total {
            *l = Label { prev: l.prev, ..label };
        } else {
            label.prev = latest;
            self.index.insert(state, self.labels.len() as u32);
            self.labels.push(label);
        }
    }

    /// Gates from the root to label `i`, in the order they were applied.
    fn path(&self, mut i: u32) -> Vec<Gate> {
        let mut out = Vec::new();
        while self.labels[i as usize].parent != NONE {
            let l = self.labels[i as usize];
            out.push(Gate::from_rank(l.gate as usize).expect("stored rank"));
            i = l.parent;
        }
        out.reverse();
        out
    }

    fn chain(&self, state: (Key, u32)) -> impl Iterator<Item = u32> + '_ {
        let mut i = self.index.get(&state).copied().unwrap_or(NONE);
        std::iter::from_fn(move || {
            (i != NONE).then(|| {
                let cur = i;
                i = self.labels[cur as usize].prev;
                cur
            })
        })
    }
}

/// Outcome of one bounded search.
pub(super) struct Found {
    pub gates: Option<Vec<Gate>>,
    /// Search states created.
    pub explored: u64,
}

/// Objective-best reduction of `m_w` with at most `max_depth` moves, if any.
/// Fails with the number of labels kept when the frontiers outgrow [`LABEL_BUDGET`].
pub(super) fn search(m_w: &Mat10, objective: Objective, max_depth: usize, moves: &Moves<'_>) -> Result<Found, u64> {
    let from_m = Frontier::grow(coset(m_w), max_depth / 2, objective, moves, LABEL_BUDGET)
        .ok_or(LABEL_BUDGET as u64)?;
    let budget = LABEL_BUDGET - from_m.labels.len();
    let from_n = Frontier::grow(coset(&Mat10::identity()), max_depth - max_depth / 2, objective, moves, budget)
        .ok_or(LABEL_BUDGET as u64)?;
    let explored = (from_m.labels.len() + from_n.labels.len()) as u64;

    // objective value, gate ranks for tie-breaking, gates
    type Best = ((usize, usize), Vec<usize>, Vec<Gate>);
    let mut best: Option<Best> = None;
    for &(key, tag) in from_m.index.keys() {
        let Some(other) = moves.full.checked_sub(tag).map(|t| (key, t)) else { continue };
        if !from_n.index.contains_key(&other) {
            continue;
        }
        for a in from_m.chain((key, tag)) {
            for b in from_n.chain(other) {
                let (la, lb) = (from_m.labels[a as usize], from_n.labels[b as usize]);
                let value = ((la.bxor + lb.bxor) as usize, (la.total + lb.total) as usize);
                if best.as_ref().is_some_and(|(v, ..)| objective.compare(value, *v).is_gt()) {
                    continue;
                }
                let mut gates = from_m.path(a);
                gates.extend(from_n.path(b).into_iter().rev());
                let ranks: Vec<usize> = gates.iter().map(|g| g.rank()).collect();
                let better = best
                    .as_ref()
                    .is_none_or(|(v, r, _)| objective.compare(value, *v).then_with(|| ranks.cmp(r)).is_lt());
                if better {
                    best = Some((value, ranks, gates));
                }
            }
        }
    }
    Ok(Found { gates: best.map(|(_, _, g)| g), explored })
}

/// Finds the objective-best sequence of at most `max_depth` linear gates that
/// reduces `m_w` to some block permutation. The search is exhaustive, so the
/// value is optimal among all sequences within the depth; among the equally
/// good sequences it keeps, the one with the smallest rank list is returned.
pub fn minimal_sequence(m_w: &Mat10, objective: Objective, max_depth: usize) -> Result<OptimizationResult, OptimizeError> {
    if !m_w.is_invertible() {
        return Err(OptimizeError::NotInvertible);
    }
    let found = search(m_w, objective, max_depth, &Moves::all_linear())
        .map_err(|labels| OptimizeError::BudgetExceeded { labels })?;
    let gates = found.gates.ok_or(OptimizeError::DepthExceeded { max_depth })?;
    let result = OptimizationResult::new(GateSequence::new(gates), m_w, found.explored);
    debug_assert!(result.best_i_x.is_block_permutation());
    Ok(result)
}
