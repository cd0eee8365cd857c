//! Replays all sixteen syndromes through an encoding and audits the recovery.

use serde::{Serialize, Serializer};

use crate::bell::{
    canonical_syndromes, extract_measurement, truncated_word, BellLabel, DesignationMatrix,
    PauliOp, RecoveryTable, SYNDROMES,
};
use crate::gate::{Direction, GateSequence};
use crate::gf2::{BitVec10, BitVec4, Block2, GroupIndex, Mat10, PairIndex};

impl Serialize for BellLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// What to verify: an encoding matrix, or a reduction sequence whose forward
/// map is relabeled onto the designation.
#[derive(Clone, Copy, Debug)]
pub enum VerifyInput<'a> {
    Matrix(&'a Mat10),
    Sequence(&'a GateSequence),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct ReportRow {
    pub i: usize,
    pub x: BitVec10,
    pub w: BitVec10,
    pub v: BitVec4,
    /// Label left on pair 1.
    pub w_prime: BellLabel,
    /// Rotation the receiver applies after seeing `v`.
    pub recovery: PauliOp,
    pub restored: BellLabel,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub failures: Vec<String>,
    /// The linear part of the encoding that was replayed.
    pub m_w: Mat10,
    /// Constant added to every codeword (non-zero only with `Sz` gates).
    pub offset: BitVec10,
    pub rows: Vec<ReportRow>,
}

impl VerificationReport {
    /// The `(v, w')` pair of each syndrome, `i = 0..15`.
    pub fn correspondence(&self) -> Vec<(BitVec4, BellLabel)> {
        self.rows.iter().map(|r| (r.v, r.w_prime)).collect()
    }
}

/// Finds the block permutation `I_x` with `forward · I_x` carrying `mv` on
/// its measured rows: each pair's two measured columns must span the same
/// plane as one designation group, and the 2×2 block maps one basis to the other.
pub fn relabeling(forward: &Mat10, mv: &DesignationMatrix) -> Option<Mat10> {
    let measured = |j: usize| extract_measurement(forward.column(j));
    let mut i_x = Mat10::ZERO;
    let mut used = [false; 5];
    for g in GroupIndex::all() {
        let [d1, d2] = mv.group(g);
        let (p, b) = PairIndex::all().filter(|p| !used[p.zero_based()]).find_map(|p| {
            let c1 = measured(2 * p.get() - 1);
            let c2 = measured(2 * p.get());
            Block2::INVERTIBLE
                .into_iter()
                .find(|b| {
                    let col = |r: [[bool; 2]; 2], k: usize| {
                        let pick = |c: BitVec4, on: bool| if on { c } else { BitVec4::ZERO };
                        pick(c1, r[0][k]) ^ pick(c2, r[1][k])
                    };
                    col(b.rows(), 0) == d1 && col(b.rows(), 1) == d2
                })
                .map(|b| (p, b))
        })?;
        used[p.zero_based()] = true;
        i_x.set_block(p, g, b);
    }
    Some(i_x)
}

/// Replays the sixteen canonical syndromes and checks that the measurement
/// identifies each one and the receiver's lookup restores pair 1 to Φ⁺.
pub fn verify_solution(input: VerifyInput<'_>, mv: &DesignationMatrix) -> VerificationReport {
    let mut failures = Vec::new();
    let (m_w, offset) = match input {
        VerifyInput::Matrix(m) => (*m, BitVec10::ZERO),
        VerifyInput::Sequence(s) => {
            let a = s.matrix(Direction::Forward);
            match relabeling(&a.matrix, mv) {
                Some(i_x) => (a.matrix.mul(&i_x), a.offset),
                None => {
                    failures.push("measured pairs cannot be relabeled onto the designation".to_string());
                    (a.matrix, a.offset)
                }
            }
        }
    };
    replay(m_w, offset, mv, failures)
}

fn replay(m_w: Mat10, offset: BitVec10, mv: &DesignationMatrix, mut failures: Vec<String>) -> VerificationReport {
    if DesignationMatrix::from_measured_rows(&m_w) != *mv {
        failures.push("rows 4, 6, 8, 10 differ from the designation".to_string());
    }
    let syn = canonical_syndromes();
    let codewords: Vec<(usize, BitVec10, BitVec10)> =
        syn.iter().map(|(i, x)| (i, x, m_w.mul_vec(x) ^ offset)).collect();
    let table = RecoveryTable::from_observations(
        codewords.iter().map(|(_, _, w)| (extract_measurement(*w), truncated_word(*w))),
    );
    let mut seen: [Option<usize>; SYNDROMES] = [None; SYNDROMES];
    let mut rows = Vec::with_capacity(SYNDROMES);
    for (i, x, w) in codewords {
        let v = extract_measurement(w);
        let w_prime = truncated_word(w);
        match seen[v.word() as usize] {
            Some(j) => failures.push(format!("syndromes {j} and {i} both measure {v}")),
            None => seen[v.word() as usize] = Some(i),
        }
        let (_, recovery) = table.get(v).expect("observed");
        let restored = recovery.apply(w_prime);
        if restored != BellLabel::PHI_PLUS {
            failures.push(format!("syndrome {i} is left in {restored} after {recovery}"));
        }
        rows.push(ReportRow { i, x, w, v, w_prime, recovery, restored });
    }
    VerificationReport { pass: failures.is_empty(), failures, m_w, offset, rows }
}

/// True iff the designation carried by rows 4, 6, 8, 10 is valid and every
/// single error is undone by the lookup.
pub fn check_correction(m_w: &Mat10) -> bool {
    let mv = DesignationMatrix::from_measured_rows(m_w);
    mv.is_valid() && verify_solution(VerifyInput::Matrix(m_w), &mv).pass
}
