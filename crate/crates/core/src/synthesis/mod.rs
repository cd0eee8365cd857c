//! Staged construction of encoding matrices from a measurement designation.
//!
//! The template holds the designation on rows 4, 6, 8, 10 and unknowns on
//! the other rows. Stage `t` works on template column group `t`: it picks
//! values for the unknowns in that group so that exactly one live pair (the
//! pivot) has an invertible block, eliminates every other live pair's block
//! against the pivot, then requires the pivot's rows to vanish in the later
//! groups. The resulting linear relations are substituted back into both the
//! working matrix and the template. After five stages the working matrix is
//! the block permutation `I_x` and the template is `M_w`.

mod eliminate;
mod enumerate;
mod form;
mod monte_carlo;
mod path;
mod relate;

use thiserror::Error;

pub use eliminate::{eliminate_block, EliminationError, MAX_DEPTH as ELIMINATION_MAX_DEPTH};
pub use enumerate::{enumerate_solutions, EnumerationOptions, EnumerationStats};
pub use form::{AffineForm, Contradiction, ConstraintSet, FormRow, TemplateMatrix, Unknown};
pub use monte_carlo::{monte_carlo_search, MonteCarloError, MonteCarloHit};
pub use path::{identity_order, Assignment, CaseLabel, ChoicePath, StageChoice};
pub use relate::relate_designations;

use crate::bell::{DesignationError, DesignationMatrix};
use crate::gate::{apply_rows, Gate, GateSequence};
use crate::gf2::{Block2, GroupIndex, PairIndex, PAIRS};
use crate::record::{SolutionRecord, StageCounts};
use form::bits;

/// Number of stages, one per column group.
pub const STAGES: usize = PAIRS;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("invalid designation: {0}")]
    InvalidDesignation(#[from] DesignationError),
    #[error("column order is not a permutation of 1..=5")]
    InvalidColumnOrder,
    #[error("no option at stage {stage} is consistent with the path")]
    InfeasiblePath { stage: usize },
    #[error("{candidates} options at stage {stage} match the path; specify more of the choice")]
    AmbiguousChoice { stage: usize, candidates: usize },
    #[error("unknown {unknown} is not free at stage {stage}")]
    UnknownNotFree { stage: usize, unknown: Unknown },
    #[error("elimination order at stage {stage} must list distinct live non-pivot pairs")]
    InvalidEliminationOrder { stage: usize },
    #[error("bad case label: {0}")]
    BadLabel(String),
    #[error("case label selects a missing option at stage {stage}")]
    LabelOutOfRange { stage: usize },
    #[error("a path may give a label or explicit stages, not both")]
    LabelAndStages,
    #[error("a path has at most {STAGES} stages")]
    TooManyStages,
}

/// Working state between stages.
#[derive(Clone)]
pub(crate) struct State {
    work: TemplateMatrix,
    template: TemplateMatrix,
    live: [bool; PAIRS],
    /// 0-based index of the next stage.
    stage: usize,
    seq: Vec<Gate>,
}

impl State {
    fn new(mv: &DesignationMatrix) -> Self {
        let t = TemplateMatrix::new(mv);
        Self { work: t, template: t, live: [true; PAIRS], stage: 0, seq: Vec::new() }
    }

    fn live_pairs(&self) -> impl Iterator<Item = PairIndex> + '_ {
        PairIndex::all().filter(|p| self.live[p.zero_based()])
    }

    fn assign(&mut self, mask: u64, ones: u64) {
        self.work.assign(mask, ones);
        self.template.assign(mask, ones);
    }

    /// Block of the working matrix at `pair` in the current group; the
    /// entries must already be constant.
    fn concrete_block(&self, pair: PairIndex) -> Block2 {
        let (r, c) = (2 * pair.zero_based(), 2 * self.stage);
        let e = |i: usize, j: usize| {
            let f = self.work.rows[r + i].0[c + j];
            debug_assert!(f.is_constant(), "block entry {f} still symbolic");
            f.constant_part()
        };
        Block2::from_bools([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

/// One admissible choice at a stage.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct StageOption {
    pub pivot: PairIndex,
    /// The pivot's block after assignment.
    pub block: Block2,
    mask: u64,
    ones: u64,
}

/// All admissible choices at one stage, in canonical order: pivot pair
/// ascending, then the assignment read as a binary number with the first
/// unknown least significant. At stage 1 the pivot block's position in
/// [`Block2::INVERTIBLE`] is compared before the assignment.
#[derive(Clone, Debug)]
pub struct StageOptions {
    /// 1-based stage number.
    pub stage: usize,
    /// The free unknowns of the stage, ascending.
    pub unknowns: Vec<Unknown>,
    pub options: Vec<StageOption>,
}

impl StageOptions {
    pub fn len(&self) -> usize {
        self.options.len()
    }

    pub fn is_empty(&self) -> bool {
        self.options.is_empty()
    }

    /// Number of options per pivot pair, for pairs with at least one.
    pub fn per_pivot(&self) -> Vec<(PairIndex, usize)> {
        let mut out: Vec<(PairIndex, usize)> = Vec::new();
        for o in &self.options {
            match out.last_mut() {
                Some((p, n)) if *p == o.pivot => *n += 1,
                _ => out.push((o.pivot, 1)),
            }
        }
        out
    }

    pub fn assignment(&self, idx: usize) -> Assignment {
        let o = &self.options[idx];
        Assignment(self.unknowns.iter().map(|u| (*u, o.ones >> u.bit() & 1 == 1)).collect())
    }

    /// `(pivot rank, number)`, both 1-based, as used in case labels.
    pub fn label_position(&self, idx: usize) -> (usize, usize) {
        let pivot = self.options[idx].pivot;
        let per = self.per_pivot();
        let rank = per.iter().position(|(p, _)| *p == pivot).expect("pivot listed");
        let first = self.options.iter().position(|o| o.pivot == pivot).expect("pivot listed");
        (rank + 1, idx - first + 1)
    }

    /// Index of the option at `(pivot rank, number)`.
    pub fn by_label_position(&self, rank: usize, number: usize) -> Option<usize> {
        let (pivot, n) = *self.per_pivot().get(rank.checked_sub(1)?)?;
        if number == 0 || number > n {
            return None;
        }
        let first = self.options.iter().position(|o| o.pivot == pivot)?;
        Some(first + number - 1)
    }
}

fn stage_options(state: &State) -> StageOptions {
    let t = state.stage;
    let live: Vec<PairIndex> = state.live_pairs().collect();
    let cell = |p: PairIndex, i: usize, j: usize| state.work.rows[2 * p.zero_based() + i].0[2 * t + j];
    let mut mask = 0u64;
    for &p in &live {
        for i in 0..2 {
            for j in 0..2 {
                mask |= cell(p, i, j).support_mask();
            }
        }
    }
    let unknowns: Vec<Unknown> = bits(mask).map(Unknown::from_bit).collect();
    let n = unknowns.len();
    // buckets[pivot][block index] in enumeration order
    let mut buckets: Vec<Vec<Vec<StageOption>>> = vec![vec![Vec::new(); 6]; PAIRS];
    for a in 0u64..1 << n {
        let mut ones = 0u64;
        for (i, u) in unknowns.iter().enumerate() {
            if a >> i & 1 == 1 {
                ones |= 1 << u.bit();
            }
        }
        let mut pivot = None;
        let mut several = false;
        for &p in &live {
            let e = |i, j| cell(p, i, j).eval(ones);
            if (e(0, 0) & e(1, 1)) ^ (e(0, 1) & e(1, 0)) {
                several |= pivot.is_some();
                pivot = Some(p);
            }
        }
        let Some(p) = pivot.filter(|_| !several) else { continue };
        if t == 0 && p != PairIndex::FIRST {
            continue;
        }
        let e = |i, j| cell(p, i, j).eval(ones);
        let block = Block2::from_bools([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]);
        let b = if t == 0 { block.invertible_index().expect("det 1") } else { 0 };
        buckets[p.zero_based()][b].push(StageOption { pivot: p, block, mask, ones });
    }
    let options = buckets.into_iter().flatten().flatten().collect();
    StageOptions { stage: t + 1, unknowns, options }
}

/// Eliminates `order` against the pivot and imposes the pivot's zero rows.
fn eliminate_and_constrain(assigned: &State, pivot: PairIndex, order: &[PairIndex]) -> Option<State> {
    let mut s = assigned.clone();
    for &q in order {
        let seq = eliminate_block(s.concrete_block(pivot), s.concrete_block(q), pivot, q)
            .expect("every det-0 target is reachable");
        for g in seq.gates() {
            apply_rows(*g, &mut s.work.rows);
        }
        s.seq.extend(seq.into_gates());
    }
    let mut cs = ConstraintSet::default();
    let r = 2 * pivot.zero_based();
    for row in [r, r + 1] {
        for c in 2 * (s.stage + 1)..2 * PAIRS {
            cs.require_zero(s.work.rows[row].0[c]).ok()?;
        }
    }
    s.work.substitute(&cs);
    s.template.substitute(&cs);
    s.live[pivot.zero_based()] = false;
    s.stage += 1;
    Some(s)
}

/// Lexicographic permutations of `items` (which must be sorted).
fn permutations(items: &[PairIndex]) -> Vec<Vec<PairIndex>> {
    let mut cur = items.to_vec();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

#[derive(Debug)]
enum StageFailure {
    Infeasible,
    BadOrder,
}

/// Runs one stage. Without an explicit order, every order of the pairs with
/// a non-zero block is tried and the one leaving the most options at the next
/// stage wins; ties go to the lexicographically first order. Pairs whose
/// block is already zero need no gates and come last.
fn run_stage(
    state: &State,
    opt: &StageOption,
    order: Option<&[PairIndex]>,
) -> Result<(State, Vec<PairIndex>), StageFailure> {
    let mut assigned = state.clone();
    assigned.assign(opt.mask, opt.ones);
    let others: Vec<PairIndex> = state.live_pairs().filter(|p| *p != opt.pivot).collect();
    let candidates = match order {
        Some(given) => {
            let mut seen = [false; PAIRS];
            for p in given {
                if !others.contains(p) || seen[p.zero_based()] {
                    return Err(StageFailure::BadOrder);
                }
                seen[p.zero_based()] = true;
            }
            let mut full = given.to_vec();
            full.extend(others.iter().filter(|p| !seen[p.zero_based()]));
            vec![full]
        }
        None => {
            let (zero, nonzero): (Vec<PairIndex>, Vec<PairIndex>) =
                others.iter().partition(|q| assigned.concrete_block(**q).is_zero());
            permutations(&nonzero)
                .into_iter()
                .map(|mut p| {
                    p.extend(&zero);
                    p
                })
                .collect()
        }
    };
    if candidates.len() == 1 {
        let next = eliminate_and_constrain(&assigned, opt.pivot, &candidates[0]).ok_or(StageFailure::Infeasible)?;
        return Ok((next, candidates.into_iter().next().expect("one")));
    }
    let mut best: Option<(usize, State, Vec<PairIndex>)> = None;
    for cand in candidates {
        let Some(next) = eliminate_and_constrain(&assigned, opt.pivot, &cand) else { continue };
        let score = if next.stage < STAGES { stage_options(&next).len() } else { 0 };
        if best.as_ref().is_none_or(|(b, _, _)| score > *b) {
            best = Some((score, next, cand));
        }
    }
    best.map(|(_, s, o)| (s, o)).ok_or(StageFailure::Infeasible)
}

/// Bookkeeping for one resolved stage.
#[derive(Clone)]
pub(crate) struct Resolved {
    choice: StageChoice,
    count: usize,
    label_pos: (usize, usize),
}

pub(crate) fn finish(
    designation: DesignationMatrix,
    column_order: [GroupIndex; PAIRS],
    state: &State,
    resolved: &[Resolved],
) -> SolutionRecord {
    let m_w = state.template.to_concrete().expect("all unknowns resolved");
    let i_x = state.work.to_concrete().expect("all unknowns resolved");
    let counts = StageCounts::from_array(std::array::from_fn(|t| resolved[t].count as u64));
    let label = (resolved[3].count == 1 && resolved[4].count == 1).then(|| {
        CaseLabel {
            stage1: resolved[0].label_pos.1,
            stage2: Some(resolved[1].label_pos),
            stage3: Some(resolved[2].label_pos),
        }
        .to_string()
    });
    SolutionRecord {
        designation,
        path: Some(ChoicePath {
            column_order,
            label,
            stages: resolved.iter().map(|r| r.choice.clone()).collect(),
        }),
        m_w,
        i_x,
        sequence: GateSequence::new(state.seq.clone()),
        counts: Some(counts),
    }
}

pub(crate) fn check_order(order: &[GroupIndex; PAIRS]) -> Result<(), SynthesisError> {
    let mut seen = [false; PAIRS];
    for g in order {
        if std::mem::replace(&mut seen[g.zero_based()], true) {
            return Err(SynthesisError::InvalidColumnOrder);
        }
    }
    Ok(())
}

fn select(
    opts: &StageOptions,
    choice: Option<&StageChoice>,
    label: Option<&CaseLabel>,
) -> Result<usize, SynthesisError> {
    let stage = opts.stage;
    if let Some(l) = label {
        let idx = match stage {
            1 => Some(l.stage1 - 1).filter(|i| *i < opts.len()),
            2 | 3 => match l.stage(stage) {
                Some((rank, n)) => opts.by_label_position(rank, n),
                None => return select(opts, None, None),
            },
            _ => return select(opts, None, None),
        };
        return idx.ok_or(SynthesisError::LabelOutOfRange { stage });
    }
    let matches: Vec<usize> = match choice {
        None => (0..opts.len()).collect(),
        Some(c) => {
            for u in c.assignment.0.keys() {
                if !opts.unknowns.contains(u) {
                    return Err(SynthesisError::UnknownNotFree { stage, unknown: *u });
                }
            }
            (0..opts.len())
                .filter(|&i| {
                    let o = &opts.options[i];
                    c.pivot.is_none_or(|p| p == o.pivot)
                        && c.assignment.0.iter().all(|(u, v)| (o.ones >> u.bit() & 1 == 1) == *v)
                })
                .collect()
        }
    };
    match matches.len() {
        0 => Err(SynthesisError::InfeasiblePath { stage }),
        1 => Ok(matches[0]),
        n => Err(SynthesisError::AmbiguousChoice { stage, candidates: n }),
    }
}

/// Runs the staged procedure along `path` and returns the concrete solution.
///
/// Stages not covered by the path must have a single option. The returned
/// record's path is fully resolved: every stage lists its pivot, the values
/// of all its free unknowns and the elimination order used.
pub fn synthesize(mv: &DesignationMatrix, path: &ChoicePath) -> Result<SolutionRecord, SynthesisError> {
    mv.validate()?;
    check_order(&path.column_order)?;
    if path.stages.len() > STAGES {
        return Err(SynthesisError::TooManyStages);
    }
    let label = match &path.label {
        Some(_) if !path.stages.is_empty() => return Err(SynthesisError::LabelAndStages),
        Some(l) => Some(l.parse::<CaseLabel>().map_err(SynthesisError::BadLabel)?),
        None => None,
    };
    let designation = mv.permute_groups(&path.column_order);
    let mut state = State::new(&designation);
    let mut resolved = Vec::with_capacity(STAGES);
    for t in 0..STAGES {
        let stage = t + 1;
        let opts = stage_options(&state);
        let choice = path.stages.get(t);
        let idx = select(&opts, choice, label.as_ref())?;
        let override_order = choice.and_then(|c| c.elimination_order.as_deref());
        let (next, order) = run_stage(&state, &opts.options[idx], override_order).map_err(|e| match e {
            StageFailure::Infeasible => SynthesisError::InfeasiblePath { stage },
            StageFailure::BadOrder => SynthesisError::InvalidEliminationOrder { stage },
        })?;
        resolved.push(Resolved {
            choice: StageChoice {
                pivot: Some(opts.options[idx].pivot),
                assignment: opts.assignment(idx),
                elimination_order: Some(order),
            },
            count: opts.len(),
            label_pos: opts.label_position(idx),
        });
        state = next;
    }
    Ok(finish(designation, path.column_order, &state, &resolved))
}

/// The options available at the first stage not covered by `path`.
pub fn options_after(mv: &DesignationMatrix, path: &ChoicePath) -> Result<StageOptions, SynthesisError> {
    mv.validate()?;
    check_order(&path.column_order)?;
    if path.stages.len() >= STAGES {
        return Err(SynthesisError::TooManyStages);
    }
    let designation = mv.permute_groups(&path.column_order);
    let mut state = State::new(&designation);
    for (t, choice) in path.stages.iter().enumerate() {
        let stage = t + 1;
        let opts = stage_options(&state);
        let idx = select(&opts, Some(choice), None)?;
        state = run_stage(&state, &opts.options[idx], choice.elimination_order.as_deref())
            .map_err(|e| match e {
                StageFailure::Infeasible => SynthesisError::InfeasiblePath { stage },
                StageFailure::BadOrder => SynthesisError::InvalidEliminationOrder { stage },
            })?
            .0;
    }
    Ok(stage_options(&state))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::gate::pair;
    use crate::gf2::Mat10;

    pub(crate) fn mv11() -> DesignationMatrix {
        "1001000110 0010111110 0100011010 0001101001".parse().unwrap()
    }

    pub(crate) fn mat(s: &str) -> Mat10 {
        let rows: Vec<crate::gf2::BitVec10> = s.split_whitespace().map(|r| r.parse().unwrap()).collect();
        Mat10::from_rows(rows.try_into().unwrap())
    }

    pub(crate) const A1_MW: &str = "1000010100 0110000010 0010000010 1001000110 0000010010 \
        0010111110 0000010100 0100011010 0000000010 0001101001";
    pub(crate) const C1_MW: &str = "1000001001 0100000111 0000000111 1001000110 0000101001 \
        0010111110 0000001001 0100011010 0010000111 0001101001";

    pub(crate) fn s1() -> StageChoice {
        StageChoice {
            pivot: Some(pair(1)),
            assignment: Assignment::of(&[
                ("a1", 1), ("a2", 0), ("b1", 0), ("b2", 1), ("c1", 0), ("c2", 0),
                ("d1", 0), ("d2", 0), ("e1", 0), ("e2", 0), ("f1", 0), ("f2", 0),
            ]),
            elimination_order: None,
        }
    }

    pub(crate) fn a1() -> StageChoice {
        StageChoice {
            pivot: Some(pair(2)),
            assignment: Assignment::of(&[
                ("c3", 1), ("c4", 0), ("d3", 0), ("d4", 0), ("e3", 0), ("e4", 0), ("f3", 0), ("f4", 0),
            ]),
            elimination_order: None,
        }
    }

    #[test]
    fn a1alpha1_by_assignment() {
        let alpha1 = StageChoice {
            pivot: Some(pair(3)),
            assignment: Assignment::of(&[("e5", 0), ("e6", 1), ("f5", 0), ("f6", 0)]),
            elimination_order: None,
        };
        let rec = synthesize(&mv11(), &ChoicePath::from_stages(vec![s1(), a1(), alpha1])).unwrap();
        assert_eq!(rec.m_w, mat(A1_MW));
        assert!(rec.is_consistent());
        assert_eq!(rec.path.as_ref().unwrap().label.as_deref(), Some("A1α1"));
        assert_eq!(rec.counts.unwrap().to_array(), [384, 104, 6, 1, 1]);
    }

    #[test]
    fn label_paths() {
        let rec = synthesize(&mv11(), &ChoicePath::from_label("A1alpha1")).unwrap();
        assert_eq!(rec.m_w, mat(A1_MW));
        let c = synthesize(&mv11(), &ChoicePath::from_label("C1β1")).unwrap();
        assert_eq!(c.m_w, mat(C1_MW));
        assert!(c.is_consistent());
    }

    #[test]
    fn a1_stage3_labels_match_assignments() {
        let cases: [(&str, usize, [u8; 4]); 6] = [
            ("A1α1", 3, [0, 1, 0, 0]),
            ("A1α2", 3, [0, 1, 1, 1]),
            ("A1β1", 4, [1, 1, 0, 0]),
            ("A1β2", 4, [1, 1, 0, 1]),
            ("A1γ1", 5, [0, 0, 0, 1]),
            ("A1γ2", 5, [0, 0, 1, 1]),
        ];
        for (label, pivot, [e5, e6, f5, f6]) in cases {
            let third = StageChoice {
                pivot: Some(pair(pivot)),
                assignment: Assignment::of(&[("e5", e5), ("e6", e6), ("f5", f5), ("f6", f6)]),
                elimination_order: None,
            };
            let explicit = synthesize(&mv11(), &ChoicePath::from_stages(vec![s1(), a1(), third])).unwrap();
            let named = synthesize(&mv11(), &ChoicePath::from_label(label)).unwrap();
            assert_eq!(named.m_w, explicit.m_w, "{label}");
            assert_eq!(explicit.path.unwrap().label.as_deref(), Some(label));
        }
    }

    #[test]
    fn stage_counts() {
        let mv = mv11();
        assert_eq!(options_after(&mv, &ChoicePath::default()).unwrap().len(), 384);
        let after16 = options_after(&mv, &ChoicePath::from_stages(vec![s1()])).unwrap();
        assert_eq!(after16.len(), 104);
        assert_eq!(
            after16.unknowns.iter().map(|u| u.to_string()).collect::<Vec<_>>(),
            ["c3", "c4", "d3", "d4", "e3", "e4", "f3", "f4"]
        );
        let swapped = StageChoice { elimination_order: Some(vec![pair(4), pair(2)]), ..s1() };
        assert_eq!(options_after(&mv, &ChoicePath::from_stages(vec![swapped])).unwrap().len(), 72);
        let after_a1 = options_after(&mv, &ChoicePath::from_stages(vec![s1(), a1()])).unwrap();
        assert_eq!(after_a1.len(), 6);
    }

    #[test]
    fn duplicate_pivot_is_infeasible() {
        let twice = StageChoice { pivot: Some(pair(1)), ..Default::default() };
        let err = synthesize(&mv11(), &ChoicePath::from_stages(vec![s1(), twice])).unwrap_err();
        assert_eq!(err, SynthesisError::InfeasiblePath { stage: 2 });
    }

    #[test]
    fn path_errors() {
        let mv = mv11();
        let e = synthesize(&mv, &ChoicePath::default()).unwrap_err();
        assert_eq!(e, SynthesisError::AmbiguousChoice { stage: 1, candidates: 384 });
        let free = StageChoice { assignment: Assignment::of(&[("c3", 1)]), ..Default::default() };
        assert_eq!(
            synthesize(&mv, &ChoicePath::from_stages(vec![free])).unwrap_err(),
            SynthesisError::UnknownNotFree { stage: 1, unknown: "c3".parse().unwrap() }
        );
        let mut both = ChoicePath::from_label("A1α1");
        both.stages.push(s1());
        assert_eq!(synthesize(&mv, &both).unwrap_err(), SynthesisError::LabelAndStages);
        assert!(matches!(
            synthesize(&mv, &ChoicePath::from_label("D1α1")).unwrap_err(),
            SynthesisError::LabelOutOfRange { stage: 2 }
        ));
        let bad_order = StageChoice { elimination_order: Some(vec![pair(1)]), ..s1() };
        assert_eq!(
            synthesize(&mv, &ChoicePath::from_stages(vec![bad_order])).unwrap_err(),
            SynthesisError::InvalidEliminationOrder { stage: 1 }
        );
        let mut dup = ChoicePath::from_label("A1α1");
        dup.column_order[1] = dup.column_order[0];
        assert_eq!(synthesize(&mv, &dup).unwrap_err(), SynthesisError::InvalidColumnOrder);
    }

    #[test]
    fn permutations_lexicographic() {
        let p = permutations(&[pair(2), pair(3), pair(5)]);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![pair(2), pair(3), pair(5)]);
        assert_eq!(p[1], vec![pair(2), pair(5), pair(3)]);
        assert_eq!(p[5], vec![pair(5), pair(3), pair(2)]);
        assert_eq!(permutations(&[]), vec![Vec::<PairIndex>::new()]);
    }
}
