//! Bell-pair labels, the sixteen single-error syndromes, measurement
//! designations and Pauli recovery.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::gf2::{BitVec10, BitVec4, BitsError, GroupIndex, Mat10, PairIndex, DIM, PAIRS};

/// Number of syndromes: no error plus three error kinds on each of five pairs.
pub const SYNDROMES: usize = 16;

/// Rows of a block word that are measured, 1-based: the amplitude rows of pairs 2..5.
pub const MEASURED_ROWS: [usize; 4] = [4, 6, 8, 10];

/// Two-bit Bell state label: `00`=Φ⁺, `10`=Φ⁻, `01`=Ψ⁺, `11`=Ψ⁻ (phase bit first).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct BellLabel {
    pub phase: bool,
    pub amplitude: bool,
}

impl BellLabel {
    pub const PHI_PLUS: Self = Self { phase: false, amplitude: false };
    pub const PHI_MINUS: Self = Self { phase: true, amplitude: false };
    pub const PSI_PLUS: Self = Self { phase: false, amplitude: true };
    pub const PSI_MINUS: Self = Self { phase: true, amplitude: true };

    pub fn new(phase: bool, amplitude: bool) -> Self {
        Self { phase, amplitude }
    }

    /// The label of `pair` inside a block word.
    pub fn of_pair(w: BitVec10, pair: PairIndex) -> Self {
        let (phase, amplitude) = w.pair_bits(pair);
        Self { phase, amplitude }
    }

    pub fn name(self) -> &'static str {
        match (self.phase, self.amplitude) {
            (false, false) => "Phi+",
            (true, false) => "Phi-",
            (false, true) => "Psi+",
            (true, true) => "Psi-",
        }
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.phase as u8, self.amplitude as u8)
    }
}

/// A unilateral Pauli rotation applied by the receiver to the unmeasured pair.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PauliOp {
    Identity,
    SigmaX,
    SigmaY,
    SigmaZ,
}

impl PauliOp {
    pub const ALL: [Self; 4] = [Self::Identity, Self::SigmaX, Self::SigmaY, Self::SigmaZ];

    /// σx flips the amplitude bit, σz the phase bit, σy both.
    pub fn apply(self, label: BellLabel) -> BellLabel {
        match self {
            Self::Identity => label,
            Self::SigmaX => BellLabel::new(label.phase, !label.amplitude),
            Self::SigmaY => BellLabel::new(!label.phase, !label.amplitude),
            Self::SigmaZ => BellLabel::new(!label.phase, label.amplitude),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Identity => "I",
            Self::SigmaX => "sigma_x",
            Self::SigmaY => "sigma_y",
            Self::SigmaZ => "sigma_z",
        }
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The rotation that returns `current` to Φ⁺.
pub fn pauli_for(current: BellLabel) -> PauliOp {
    match (current.phase, current.amplitude) {
        (false, false) => PauliOp::Identity,
        (false, true) => PauliOp::SigmaX,
        (true, true) => PauliOp::SigmaY,
        (true, false) => PauliOp::SigmaZ,
    }
}

/// The sixteen syndromes `x(0)..x(15)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SyndromeSet([BitVec10; SYNDROMES]);

impl SyndromeSet {
    pub fn get(&self, i: usize) -> BitVec10 {
        self.0[i]
    }

    pub fn as_array(&self) -> &[BitVec10; SYNDROMES] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, BitVec10)> + '_ {
        self.0.iter().copied().enumerate()
    }
}

/// `x(0) = 0`; for pair `k`, `x(3k-2)` flips the phase bit, `x(3k-1)` the
/// amplitude bit and `x(3k)` both.
pub fn canonical_syndromes() -> SyndromeSet {
    let mut out = [BitVec10::ZERO; SYNDROMES];
    for k in 1..=PAIRS {
        let phase = BitVec10::unit(2 * k - 1);
        let amp = BitVec10::unit(2 * k);
        out[3 * k - 2] = phase;
        out[3 * k - 1] = amp;
        out[3 * k] = phase ^ amp;
    }
    SyndromeSet(out)
}

/// The pair whose bits syndrome `i` touches; `None` for `i = 0`.
pub fn syndrome_pair(i: usize) -> Option<PairIndex> {
    (1..SYNDROMES)
        .contains(&i)
        .then(|| PairIndex::from_zero_based((i - 1) / 3))
}

/// Components 4, 6, 8, 10 of `w`.
pub fn extract_measurement(w: BitVec10) -> BitVec4 {
    BitVec4::from_bits(MEASURED_ROWS.map(|r| w.get(r)))
}

/// Components 1, 2 of `w`: the label left on the unmeasured pair.
pub fn truncated_word(w: BitVec10) -> BellLabel {
    BellLabel::new(w.get(1), w.get(2))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignationError {
    #[error("syndromes {i} and {j} induce the same measurement vector")]
    Collision { i: usize, j: usize },
}

/// A 4×10 designation: the measurement vectors the single-error syndromes must produce.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DesignationMatrix {
    rows: [BitVec10; 4],
}

impl DesignationMatrix {
    pub fn from_rows(rows: [BitVec10; 4]) -> Self {
        Self { rows }
    }

    /// Rows 4, 6, 8, 10 of `m`.
    pub fn from_measured_rows(m: &Mat10) -> Self {
        Self { rows: MEASURED_ROWS.map(|r| m.row(r)) }
    }

    pub fn rows(&self) -> [BitVec10; 4] {
        self.rows
    }

    /// Row `i`, 1-based.
    pub fn row(&self, i: usize) -> BitVec10 {
        self.rows[i - 1]
    }

    /// Column `j`, 1-based.
    pub fn column(&self, j: usize) -> BitVec4 {
        BitVec4::from_bits(self.rows.map(|r| r.get(j)))
    }

    /// The two columns of `group`.
    pub fn group(&self, group: GroupIndex) -> [BitVec4; 2] {
        let j = 2 * group.get();
        [self.column(j - 1), self.column(j)]
    }

    /// Reorders column groups so that group `j` of the result is group
    /// `order[j]` of `self`.
    pub fn permute_groups(&self, order: &[GroupIndex; PAIRS]) -> Self {
        let rows = self.rows.map(|r| {
            let mut out = BitVec10::ZERO;
            for (j, g) in order.iter().enumerate() {
                out.set(2 * j + 1, r.get(2 * g.get() - 1));
                out.set(2 * j + 2, r.get(2 * g.get()));
            }
            out
        });
        Self { rows }
    }

    /// The sixteen induced measurement vectors, `v(i)` for `i = 0..15`,
    /// without checking distinctness.
    pub fn induced(&self) -> [BitVec4; SYNDROMES] {
        let mut v = [BitVec4::ZERO; SYNDROMES];
        for k in 1..=PAIRS {
            v[3 * k - 2] = self.column(2 * k - 1);
            v[3 * k - 1] = self.column(2 * k);
            v[3 * k] = v[3 * k - 2] ^ v[3 * k - 1];
        }
        v
    }

    /// Accepts iff the sixteen induced vectors are pairwise distinct.
    pub fn validate(&self) -> Result<VTable, DesignationError> {
        let v = self.induced();
        for j in 1..SYNDROMES {
            if let Some(i) = (0..j).find(|&i| v[i] == v[j]) {
                return Err(DesignationError::Collision { i, j });
            }
        }
        Ok(VTable(v))
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }
}

impl fmt::Display for DesignationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DesignationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DesignationMatrix[{} {} {} {}]",
            self.rows[0], self.rows[1], self.rows[2], self.rows[3]
        )
    }
}

impl Serialize for DesignationMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DesignationMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Self { rows: <[BitVec10; 4]>::deserialize(d)? })
    }
}

impl std::str::FromStr for DesignationMatrix {
    type Err = BitsError;
    /// Four whitespace-separated 10-bit rows.
    fn from_str(s: &str) -> Result<Self, BitsError> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(BitsError { expected: 4 * DIM, found: s.to_string() });
        }
        let mut rows = [BitVec10::ZERO; 4];
        for (r, p) in rows.iter_mut().zip(parts) {
            *r = p.parse()?;
        }
        Ok(Self { rows })
    }
}

/// The induced `v(i)` of a valid designation; a permutation of GF(2)⁴.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct VTable([BitVec4; SYNDROMES]);

impl VTable {
    pub fn get(&self, i: usize) -> BitVec4 {
        self.0[i]
    }

    pub fn as_array(&self) -> &[BitVec4; SYNDROMES] {
        &self.0
    }

    /// The syndrome index producing `v`.
    pub fn index_of(&self, v: BitVec4) -> usize {
        self.0.iter().position(|x| *x == v).expect("a valid table covers GF(2)^4")
    }
}

/// One row of the syndrome/measurement correspondence.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Table1Row {
    pub i: usize,
    pub x: BitVec10,
    pub v: BitVec4,
}

/// The sixteen `(i, x(i), v(i))` rows for a valid designation.
pub fn table1(mv: &DesignationMatrix) -> Result<Vec<Table1Row>, DesignationError> {
    let v = mv.validate()?;
    let x = canonical_syndromes();
    Ok((0..SYNDROMES).map(|i| Table1Row { i, x: x.get(i), v: v.get(i) }).collect())
}

/// Lookup from a measurement result to the label left on pair 1 and the
/// rotation restoring it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RecoveryTable([Option<(BellLabel, PauliOp)>; SYNDROMES]);

impl RecoveryTable {
    /// Builds from `(v, w')` observations; the first observation of each `v` wins.
    pub fn from_observations(obs: impl IntoIterator<Item = (BitVec4, BellLabel)>) -> Self {
        let mut t = [None; SYNDROMES];
        for (v, wp) in obs {
            let slot = &mut t[v.word() as usize];
            if slot.is_none() {
                *slot = Some((wp, pauli_for(wp)));
            }
        }
        Self(t)
    }

    pub fn get(&self, v: BitVec4) -> Option<(BellLabel, PauliOp)> {
        self.0[v.word() as usize]
    }

    /// True when every measurement value has an entry.
    pub fn is_total(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }
}
