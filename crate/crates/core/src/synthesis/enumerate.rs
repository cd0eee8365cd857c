//! Exhaustive depth-first enumeration of every feasible path.

use rayon::prelude::*;

use super::{check_order, finish, run_stage, stage_options, Resolved, State, StageChoice, STAGES};
use crate::bell::DesignationMatrix;
use crate::gf2::{GroupIndex, PAIRS};
use crate::record::{SolutionRecord, StageCounts};

/// Stage-1 subtrees handed to the worker pool per batch. Fixed so that the
/// work done before a `limit` cut-off does not depend on the thread count.
const BATCH: usize = 16;

#[derive(Clone, Copy, Debug, Default)]
pub struct EnumerationOptions {
    /// Stop after this many records.
    pub limit: Option<usize>,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    /// Options summed over every visited node of each stage.
    pub options: StageCounts,
    /// Options whose linear relations turned out contradictory.
    pub infeasible: u64,
    pub records: u64,
}

impl EnumerationStats {
    fn merge(&mut self, o: &EnumerationStats) {
        let mut a = self.options.to_array();
        for (x, y) in a.iter_mut().zip(o.options.to_array()) {
            *x += y;
        }
        self.options = StageCounts::from_array(a);
        self.infeasible += o.infeasible;
        self.records += o.records;
    }
}

struct Walker<'a> {
    designation: DesignationMatrix,
    column_order: [GroupIndex; PAIRS],
    limit: usize,
    out: &'a mut Vec<SolutionRecord>,
    stats: EnumerationStats,
    stack: Vec<Resolved>,
}

impl Walker<'_> {
    fn visit(&mut self, state: &State) {
        let opts = stage_options(state);
        let mut counts = self.stats.options.to_array();
        counts[state.stage] += opts.len() as u64;
        self.stats.options = StageCounts::from_array(counts);
        for idx in 0..opts.len() {
            if self.out.len() >= self.limit {
                return;
            }
            self.descend(state, &opts, idx);
        }
    }

    fn descend(&mut self, state: &State, opts: &super::StageOptions, idx: usize) {
        let Ok((next, order)) = run_stage(state, &opts.options[idx], None) else {
            self.stats.infeasible += 1;
            return;
        };
        self.stack.push(Resolved {
            choice: StageChoice {
                pivot: Some(opts.options[idx].pivot),
                assignment: opts.assignment(idx),
                elimination_order: Some(order),
            },
            count: opts.len(),
            label_pos: opts.label_position(idx),
        });
        if next.stage == STAGES {
            self.out.push(finish(self.designation, self.column_order, &next, &self.stack));
            self.stats.records += 1;
        } else {
            self.visit(&next);
        }
        self.stack.pop();
    }
}

/// Enumerates every feasible path for `column_order` in canonical order and
/// hands each record to `emit`. An invalid designation or column order
/// yields nothing. Output does not depend on `opts.jobs`.
pub fn enumerate_solutions(
    mv: &DesignationMatrix,
    column_order: [GroupIndex; PAIRS],
    opts: EnumerationOptions,
    mut emit: impl FnMut(SolutionRecord),
) -> EnumerationStats {
    let mut stats = EnumerationStats::default();
    if mv.validate().is_err() || check_order(&column_order).is_err() {
        return stats;
    }
    let designation = mv.permute_groups(&column_order);
    let root = State::new(&designation);
    let first = stage_options(&root);
    stats.options.stage1 = first.len() as u64;
    let limit = opts.limit.unwrap_or(usize::MAX);

    let subtree = |idx: usize, cap: usize| {
        let mut out = Vec::new();
        let mut w = Walker {
            designation,
            column_order,
            limit: cap,
            out: &mut out,
            stats: EnumerationStats::default(),
            stack: Vec::new(),
        };
        w.descend(&root, &first, idx);
        let stats = w.stats;
        (out, stats)
    };

    let pool = opts.jobs.map(|n| {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().expect("thread pool")
    });
    let mut emitted = 0usize;
    for batch in (0..first.len()).collect::<Vec<_>>().chunks(BATCH) {
        if emitted >= limit {
            break;
        }
        let cap = limit - emitted;
        let run = || batch.par_iter().map(|&i| subtree(i, cap)).collect::<Vec<_>>();
        let results = match &pool {
            Some(p) => p.install(run),
            None => run(),
        };
        for (records, s) in results {
            stats.merge(&s);
            for r in records {
                if emitted < limit {
                    emit(r);
                    emitted += 1;
                }
            }
        }
    }
    stats.records = emitted as u64;
    stats
}
