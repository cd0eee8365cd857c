//! The four basic bilateral operations and sequences of them.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{BitVec10, Mat10, PairIndex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GateError {
    #[error("BXOR source and target are both pair {0}")]
    SameBxorPair(usize),
    #[error("cannot parse gate {0:?}; expected By(k), SxBx(k), Sz(k) or BXOR(s->t)")]
    Syntax(String),
}

/// One basic operation. Gates are their own inverses.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "op", try_from = "GateRepr", into = "GateRepr")]
pub enum Gate {
    /// Bilateral XOR: `(x_S, y_S)(x_T, y_T) -> (x_S ^ x_T, y_S)(x_T, y_S ^ y_T)`.
    Bxor { source: PairIndex, target: PairIndex },
    /// `(x, y) -> (y, x)`.
    By { pair: PairIndex },
    /// `(x, y) -> (x, x ^ y)`.
    SxBx { pair: PairIndex },
    /// `(x, y) -> (x ^ 1, y)`; the only affine gate.
    Sz { pair: PairIndex },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "op")]
enum GateRepr {
    #[serde(rename = "BXOR")]
    Bxor { source: PairIndex, target: PairIndex },
    By { pair: PairIndex },
    SxBx { pair: PairIndex },
    Sz { pair: PairIndex },
}

impl TryFrom<GateRepr> for Gate {
    type Error = GateError;
    fn try_from(r: GateRepr) -> Result<Self, GateError> {
        Ok(match r {
            GateRepr::Bxor { source, target } => Gate::bxor(source, target)?,
            GateRepr::By { pair } => Gate::By { pair },
            GateRepr::SxBx { pair } => Gate::SxBx { pair },
            GateRepr::Sz { pair } => Gate::Sz { pair },
        })
    }
}

impl From<Gate> for GateRepr {
    fn from(g: Gate) -> Self {
        match g {
            Gate::Bxor { source, target } => GateRepr::Bxor { source, target },
            Gate::By { pair } => GateRepr::By { pair },
            Gate::SxBx { pair } => GateRepr::SxBx { pair },
            Gate::Sz { pair } => GateRepr::Sz { pair },
        }
    }
}

/// Size of the full alphabet: 5 By, 5 SxBx, 20 BXOR, 5 Sz.
pub const ALPHABET: usize = 35;
/// The linear gates, `rank < LINEAR_ALPHABET`.
pub const LINEAR_ALPHABET: usize = 30;

impl Gate {
    pub fn bxor(source: PairIndex, target: PairIndex) -> Result<Self, GateError> {
        if source == target {
            return Err(GateError::SameBxorPair(source.get()));
        }
        Ok(Gate::Bxor { source, target })
    }

    pub fn is_bxor(self) -> bool {
        matches!(self, Gate::Bxor { .. })
    }

    /// The pairs the gate acts on; the second entry is set only for BXOR.
    pub fn pairs(self) -> (PairIndex, Option<PairIndex>) {
        match self {
            Gate::Bxor { source, target } => (source, Some(target)),
            Gate::By { pair } | Gate::SxBx { pair } | Gate::Sz { pair } => (pair, None),
        }
    }

    pub fn touches(self, p: PairIndex) -> bool {
        let (a, b) = self.pairs();
        a == p || b == Some(p)
    }

    /// True when the two gates act on disjoint pairs (and hence commute).
    pub fn disjoint(self, other: Gate) -> bool {
        let (a, b) = other.pairs();
        !self.touches(a) && b.is_none_or(|b| !self.touches(b))
    }

    /// Position in the canonical alphabet: By(1..5), SxBx(1..5), BXOR in
    /// lexicographic (source, target) order, Sz(1..5).
    pub fn rank(self) -> usize {
        match self {
            Gate::By { pair } => pair.zero_based(),
            Gate::SxBx { pair } => 5 + pair.zero_based(),
            Gate::Bxor { source, target } => {
                let s = source.zero_based();
                let t = target.zero_based();
                10 + 4 * s + if t < s { t } else { t - 1 }
            }
            Gate::Sz { pair } => 30 + pair.zero_based(),
        }
    }

    pub fn from_rank(rank: usize) -> Option<Self> {
        let p = PairIndex::from_zero_based;
        Some(match rank {
            0..=4 => Gate::By { pair: p(rank) },
            5..=9 => Gate::SxBx { pair: p(rank - 5) },
            10..=29 => {
                let s = (rank - 10) / 4;
                let r = (rank - 10) % 4;
                let t = if r < s { r } else { r + 1 };
                Gate::Bxor { source: p(s), target: p(t) }
            }
            30..=34 => Gate::Sz { pair: p(rank - 30) },
            _ => return None,
        })
    }

    /// Every gate in rank order.
    pub fn alphabet() -> impl Iterator<Item = Gate> {
        (0..ALPHABET).filter_map(Gate::from_rank)
    }

    /// Applies the gate to a block word.
    pub fn apply(self, x: BitVec10) -> BitVec10 {
        BitVec10::from_word(self.apply_word(x.word()))
    }

    #[inline]
    pub(crate) fn apply_word(self, w: u16) -> u16 {
        match self {
            Gate::Bxor { source, target } => {
                let s = 2 * source.zero_based();
                let t = 2 * target.zero_based();
                let w = w ^ ((w >> t & 1) << s);
                w ^ ((w >> (s + 1) & 1) << (t + 1))
            }
            Gate::By { pair } => {
                let k = 2 * pair.zero_based();
                let d = (w >> k ^ w >> (k + 1)) & 1;
                w ^ (d << k | d << (k + 1))
            }
            Gate::SxBx { pair } => {
                let k = 2 * pair.zero_based();
                w ^ ((w >> k & 1) << (k + 1))
            }
            Gate::Sz { pair } => w ^ (1 << (2 * pair.zero_based())),
        }
    }

    /// Left-multiplies `m` by the gate's matrix, as row operations.
    pub fn apply_rows(self, m: &mut Mat10) {
        apply_rows(self, m.words_mut());
    }

    /// The gate as an affine map `x -> Mx ^ b`.
    pub fn matrix(self) -> AffineMap {
        let mut m = Mat10::identity();
        self.apply_rows(&mut m);
        let offset = match self {
            Gate::Sz { pair } => BitVec10::unit(2 * pair.get() - 1),
            _ => BitVec10::ZERO,
        };
        AffineMap { matrix: m, offset }
    }
}

/// Row operations on any row type supporting XOR; shared with the symbolic
/// template rows in synthesis.
pub(crate) fn apply_rows<T: Copy + std::ops::BitXorAssign>(g: Gate, rows: &mut [T; 10]) {
    match g {
        Gate::Bxor { source, target } => {
            let s = 2 * source.zero_based();
            let t = 2 * target.zero_based();
            let (rt, rs) = (rows[t], rows[s + 1]);
            rows[s] ^= rt;
            rows[t + 1] ^= rs;
        }
        Gate::By { pair } => {
            let k = 2 * pair.zero_based();
            rows.swap(k, k + 1);
        }
        Gate::SxBx { pair } => {
            let k = 2 * pair.zero_based();
            let r = rows[k];
            rows[k + 1] ^= r;
        }
        Gate::Sz { .. } => {}
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Bxor { source, target } => write!(f, "BXOR({source}->{target})"),
            Gate::By { pair } => write!(f, "By({pair})"),
            Gate::SxBx { pair } => write!(f, "SxBx({pair})"),
            Gate::Sz { pair } => write!(f, "Sz({pair})"),
        }
    }
}

impl std::str::FromStr for Gate {
    type Err = GateError;

    /// The [`Display`](fmt::Display) form, e.g. `BXOR(2->4)` or `SxBx(1)`.
    fn from_str(s: &str) -> Result<Self, GateError> {
        let syntax = || GateError::Syntax(s.to_string());
        let (name, rest) = s.split_once('(').ok_or_else(syntax)?;
        let args = rest.strip_suffix(')').ok_or_else(syntax)?;
        let pair = |a: &str| a.parse::<usize>().ok().and_then(|k| PairIndex::new(k).ok()).ok_or_else(syntax);
        match name {
            "BXOR" => {
                let (a, b) = args.split_once("->").ok_or_else(syntax)?;
                Gate::bxor(pair(a)?, pair(b)?)
            }
            "By" => Ok(Gate::By { pair: pair(args)? }),
            "SxBx" => Ok(Gate::SxBx { pair: pair(args)? }),
            "Sz" => Ok(Gate::Sz { pair: pair(args)? }),
            _ => Err(syntax()),
        }
    }
}

/// Which way a reduction-order sequence is replayed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    /// Physical encoding: last gate first, taking `I_x` to `M_w`.
    Forward,
    /// Reduction: first gate first, taking `M_w` to `I_x`.
    Backward,
}

/// `x -> matrix·x ^ offset`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct AffineMap {
    pub matrix: Mat10,
    pub offset: BitVec10,
}

impl AffineMap {
    pub fn identity() -> Self {
        Self { matrix: Mat10::identity(), offset: BitVec10::ZERO }
    }

    pub fn apply(&self, x: BitVec10) -> BitVec10 {
        self.matrix.mul_vec(x) ^ self.offset
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn after(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            matrix: self.matrix.mul(&inner.matrix),
            offset: self.matrix.mul_vec(inner.offset) ^ self.offset,
        }
    }

    pub fn is_linear(&self) -> bool {
        self.offset.is_zero()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Order {
    Reduction,
}

#[derive(Serialize, Deserialize)]
struct SequenceRepr {
    order: Order,
    gates: Vec<Gate>,
}

/// Gates in reduction order: the order that takes `M_w` to `I_x`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(from = "SequenceRepr", into = "SequenceRepr")]
pub struct GateSequence {
    gates: Vec<Gate>,
}

impl From<SequenceRepr> for GateSequence {
    fn from(r: SequenceRepr) -> Self {
        Self { gates: r.gates }
    }
}

impl From<GateSequence> for SequenceRepr {
    fn from(s: GateSequence) -> Self {
        Self { order: Order::Reduction, gates: s.gates }
    }
}

impl FromIterator<Gate> for GateSequence {
    fn from_iter<I: IntoIterator<Item = Gate>>(iter: I) -> Self {
        Self { gates: iter.into_iter().collect() }
    }
}

impl GateSequence {
    pub fn new(gates: Vec<Gate>) -> Self {
        Self { gates }
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn extend(&mut self, other: impl IntoIterator<Item = Gate>) {
        self.gates.extend(other);
    }

    pub fn bxor_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_bxor()).count()
    }

    /// `(BXOR count, total length)`.
    pub fn cost(&self) -> (usize, usize) {
        (self.bxor_count(), self.len())
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.gates.iter().map(|g| g.rank()).collect()
    }

    pub fn apply(&self, x: BitVec10, direction: Direction) -> BitVec10 {
        match direction {
            Direction::Backward => self.gates.iter().fold(x, |x, g| g.apply(x)),
            Direction::Forward => self.gates.iter().rev().fold(x, |x, g| g.apply(x)),
        }
    }

    /// The composed affine map, equal pointwise to [`GateSequence::apply`].
    pub fn matrix(&self, direction: Direction) -> AffineMap {
        let step = |acc: AffineMap, g: &Gate| g.matrix().after(&acc);
        match direction {
            Direction::Backward => self.gates.iter().fold(AffineMap::identity(), step),
            Direction::Forward => self.gates.iter().rev().fold(AffineMap::identity(), step),
        }
    }

    /// Replays the sequence as row operations on `m` (left multiplication,
    /// first gate first), ignoring affine offsets.
    pub fn reduce(&self, m: &Mat10) -> Mat10 {
        let mut out = *m;
        for g in &self.gates {
            g.apply_rows(&mut out);
        }
        out
    }

    pub fn reversed(&self) -> Self {
        Self { gates: self.gates.iter().rev().copied().collect() }
    }
}

impl fmt::Display for GateSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.gates.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for GateSequence {
    type Err = GateError;

    /// Whitespace-separated gates in reduction order.
    fn from_str(s: &str) -> Result<Self, GateError> {
        s.split_whitespace().map(str::parse).collect()
    }
}

/// Pair `k`, 1-based, for building gates in tests.
#[cfg(test)]
pub(crate) fn pair(k: usize) -> PairIndex {
    PairIndex::new(k).expect("pair in 1..=5")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::Block2;

    fn v(s: &str) -> BitVec10 {
        s.parse().unwrap()
    }

    #[test]
    fn apply_examples() {
        let g = Gate::bxor(pair(1), pair(2)).unwrap();
        assert_eq!(g.apply(v("1100000000")), v("1101000000"));
        assert_eq!(Gate::By { pair: pair(3) }.apply(v("0000100000")), v("0000010000"));
        assert_eq!(Gate::Sz { pair: pair(1) }.apply(BitVec10::ZERO), v("1000000000"));
        assert!(Gate::bxor(pair(2), pair(2)).is_err());
    }

    #[test]
    fn matrices() {
        let by = Gate::By { pair: pair(2) }.matrix();
        let mut expect = Mat10::identity();
        expect.swap_rows(3, 4);
        assert_eq!(by.matrix, expect);
        assert!(by.is_linear());
        let sx = Gate::SxBx { pair: pair(4) }.matrix();
        let mut expect = Mat10::identity();
        expect.set(8, 7, true);
        assert_eq!(sx.matrix, expect);
        let sz = Gate::Sz { pair: pair(5) }.matrix();
        assert_eq!(sz.matrix, Mat10::identity());
        assert_eq!(sz.offset, BitVec10::unit(9));
    }

    #[test]
    fn bxor_is_symplectic_by_expansion() {
        // Images of the first four unit vectors under BXOR(1->2):
        // c1 = e1, c2 = e2 ^ e4, c3 = e3 ^ e1, c4 = e4. With <ei, ej> = 1 only
        // for {1,2} and {3,4}: <c1,c2> = 1, <c3,c4> = 1, and
        // <c2,c3> = <e2,e3> + <e2,e1> + <e4,e3> + <e4,e1> = 0 + 1 + 1 + 0 = 0;
        // every other cross term has no paired indices.
        let m = Gate::bxor(pair(1), pair(2)).unwrap().matrix().matrix;
        let rows = m.transpose().rows();
        let j = crate::gf2::symplectic_form();
        let form = |a: BitVec10, b: BitVec10| a.dot(j.mul_vec(b));
        assert!(form(rows[0], rows[1]));
        assert!(form(rows[2], rows[3]));
        assert!(!form(rows[0], rows[3]));
        assert!(!form(rows[1], rows[2]));
        assert!(!form(rows[0], rows[2]));
        assert!(!form(rows[1], rows[3]));
        assert!(m.is_symplectic());
    }

    #[test]
    fn rank_roundtrip() {
        let all: Vec<Gate> = Gate::alphabet().collect();
        assert_eq!(all.len(), ALPHABET);
        for (i, g) in all.iter().enumerate() {
            assert_eq!(g.rank(), i);
        }
        assert_eq!(all[10], Gate::bxor(pair(1), pair(2)).unwrap());
        assert_eq!(all[29], Gate::bxor(pair(5), pair(4)).unwrap());
    }

    #[test]
    fn worked_chain() {
        // pivot pair 1 = identity block, target pair 2 = [[1,1],[0,0]] in group 1
        let mut m = Mat10::identity();
        m.set_block(pair(2), crate::gf2::GroupIndex::new(1).unwrap(), Block2::new([[1, 1], [0, 0]]));
        m.set_block(pair(2), crate::gf2::GroupIndex::new(2).unwrap(), Block2::new([[0, 0], [0, 1]]));
        let seq = GateSequence::new(vec![
            Gate::By { pair: pair(2) },
            Gate::SxBx { pair: pair(1) },
            Gate::bxor(pair(1), pair(2)).unwrap(),
        ]);
        let cols: Vec<BitVec10> = (1..=2).map(|j| m.column(j)).collect();
        let out: Vec<BitVec10> =
            cols.iter().map(|c| seq.apply(*c, Direction::Backward)).collect();
        let g1 = crate::gf2::GroupIndex::new(1).unwrap();
        let r = Mat10::from_columns([
            out[0], out[1], BitVec10::ZERO, BitVec10::ZERO, BitVec10::ZERO,
            BitVec10::ZERO, BitVec10::ZERO, BitVec10::ZERO, BitVec10::ZERO, BitVec10::ZERO,
        ]);
        assert_eq!(r.block(pair(1), g1), Block2::new([[1, 0], [1, 1]]));
        assert!(r.block(pair(2), g1).is_zero());
        assert_eq!(seq.reduce(&m).block(pair(1), g1), Block2::new([[1, 0], [1, 1]]));
    }

    #[test]
    fn sequence_directions() {
        let x = v("1011001110");
        let empty = GateSequence::default();
        assert_eq!(empty.apply(x, Direction::Forward), x);
        let one = GateSequence::new(vec![Gate::By { pair: pair(1) }]);
        assert_eq!(one.apply(x, Direction::Forward), one.apply(x, Direction::Backward));
        let g = Gate::SxBx { pair: pair(3) };
        assert_eq!(GateSequence::new(vec![g]).matrix(Direction::Forward), g.matrix());
        let s = GateSequence::new(vec![
            Gate::Sz { pair: pair(2) },
            Gate::bxor(pair(2), pair(5)).unwrap(),
            Gate::By { pair: pair(2) },
        ]);
        let f = s.matrix(Direction::Forward);
        let b = s.matrix(Direction::Backward);
        assert_eq!(f.after(&b), AffineMap::identity());
        assert_eq!(b.apply(x), s.apply(x, Direction::Backward));
    }

    #[test]
    fn json_shape() {
        let s = GateSequence::new(vec![
            Gate::bxor(pair(2), pair(4)).unwrap(),
            Gate::By { pair: pair(3) },
            Gate::SxBx { pair: pair(1) },
            Gate::Sz { pair: pair(5) },
        ]);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(
            j,
            r#"{"order":"reduction","gates":[{"op":"BXOR","source":2,"target":4},{"op":"By","pair":3},{"op":"SxBx","pair":1},{"op":"Sz","pair":5}]}"#
        );
        let back: GateSequence = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<Gate>(r#"{"op":"BXOR","source":2,"target":2}"#).is_err());
        assert!(serde_json::from_str::<Gate>(r#"{"op":"By","pair":6}"#).is_err());
        assert!(serde_json::from_str::<GateSequence>(r#"{"order":"forward","gates":[]}"#).is_err());
    }
}
