//! Bit-packed GF(2) words and matrices for blocks of five Bell pairs.
//!
//! A [`BitVec10`] packs the ten phase/amplitude bits of a five-pair block into
//! one `u16`: bit `i` of the word is component `i + 1`, so pair `k` owns
//! components `2k - 1` (phase, high bit) and `2k` (amplitude, low bit).
//! A [`Mat10`] stores ten such words as rows. All public indexing is 1-based.

use std::fmt;
use std::ops::{BitXor, BitXorAssign, Mul};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An index outside `1..=5`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what} {value} is outside 1..=5")]
pub struct IndexError {
    pub what: &'static str,
    pub value: usize,
}

/// A bit string of the wrong length or with characters other than `0`/`1`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("expected {expected} characters from {{0,1}}, got {found:?}")]
pub struct BitsError {
    pub expected: usize,
    pub found: String,
}

fn parse_bits(s: &str, n: usize) -> Result<u16, BitsError> {
    let err = || BitsError { expected: n, found: s.to_string() };
    if s.len() != n {
        return Err(err());
    }
    let mut w = 0u16;
    for (i, c) in s.bytes().enumerate() {
        match c {
            b'0' => {}
            b'1' => w |= 1 << i,
            _ => return Err(err()),
        }
    }
    Ok(w)
}

/// Number of Bell pairs in a block.
pub const PAIRS: usize = 5;
/// Number of bits in a block word.
pub const DIM: usize = 10;

const MASK10: u16 = (1 << DIM) - 1;

macro_rules! one_based_index {
    ($(#[$meta:meta])* $name:ident, $what:literal) => {
        $(#[$meta])*
        #[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
        pub struct $name(u8);

        impl $name {
            pub const FIRST: Self = Self(1);
            pub const SECOND: Self = Self(2);

            pub fn new(k: usize) -> Result<Self, IndexError> {
                if (1..=PAIRS).contains(&k) {
                    Ok(Self(k as u8))
                } else {
                    Err(IndexError { what: $what, value: k })
                }
            }

            /// The 1-based value.
            pub fn get(self) -> usize {
                self.0 as usize
            }

            pub(crate) fn zero_based(self) -> usize {
                self.0 as usize - 1
            }

            pub(crate) fn from_zero_based(k: usize) -> Self {
                debug_assert!(k < PAIRS);
                Self(k as u8 + 1)
            }

            pub fn all() -> impl Iterator<Item = Self> {
                (1..=PAIRS as u8).map(Self)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl TryFrom<usize> for $name {
            type Error = IndexError;
            fn try_from(k: usize) -> Result<Self, IndexError> {
                Self::new(k)
            }
        }

        impl From<$name> for usize {
            fn from(k: $name) -> usize {
                k.get()
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_u8(self.0)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let k = usize::deserialize(d)?;
                Self::new(k).map_err(serde::de::Error::custom)
            }
        }
    };
}

one_based_index!(
    /// A Bell pair of the block, `1..=5`. Also a block-row of a [`Mat10`].
    PairIndex,
    "pair index"
);
one_based_index!(
    /// A column group (four-group of syndromes), `1..=5`.
    GroupIndex,
    "group index"
);

/// Ten bits: five (phase, amplitude) pairs.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitVec10(u16);

impl BitVec10 {
    pub const ZERO: Self = Self(0);

    /// Builds from a packed word where bit `i` is component `i + 1`.
    pub fn from_word(word: u16) -> Self {
        Self(word & MASK10)
    }

    pub fn word(self) -> u16 {
        self.0
    }

    /// Unit vector with only component `pos` (1-based) set.
    pub fn unit(pos: usize) -> Self {
        assert!((1..=DIM).contains(&pos), "bit position {pos} out of range");
        Self(1 << (pos - 1))
    }

    pub fn from_bits(bits: [bool; DIM]) -> Self {
        let mut w = 0u16;
        for (i, b) in bits.iter().enumerate() {
            if *b {
                w |= 1 << i;
            }
        }
        Self(w)
    }

    /// Component `pos`, 1-based.
    pub fn get(self, pos: usize) -> bool {
        assert!((1..=DIM).contains(&pos), "bit position {pos} out of range");
        self.0 >> (pos - 1) & 1 == 1
    }

    pub fn set(&mut self, pos: usize, value: bool) {
        assert!((1..=DIM).contains(&pos), "bit position {pos} out of range");
        if value {
            self.0 |= 1 << (pos - 1);
        } else {
            self.0 &= !(1 << (pos - 1));
        }
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    /// The (phase, amplitude) bits of `pair`.
    pub fn pair_bits(self, pair: PairIndex) -> (bool, bool) {
        let k = pair.zero_based();
        (self.0 >> (2 * k) & 1 == 1, self.0 >> (2 * k + 1) & 1 == 1)
    }

    /// Parity of `self & other`.
    pub fn dot(self, other: Self) -> bool {
        (self.0 & other.0).count_ones() & 1 == 1
    }
}

impl BitXor for BitVec10 {
    type Output = Self;
    fn bitxor(self, rhs: Self) -> Self {
        Self(self.0 ^ rhs.0)
    }
}

impl BitXorAssign for BitVec10 {
    fn bitxor_assign(&mut self, rhs: Self) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Display for BitVec10 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..DIM {
            f.write_str(if self.0 >> i & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitVec10 {
    type Err = BitsError;
    fn from_str(s: &str) -> Result<Self, BitsError> {
        parse_bits(s, DIM).map(Self)
    }
}

impl Serialize for BitVec10 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitVec10 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for BitVec10 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec10({self})")
    }
}

/// Four bits: the amplitude results of the four measured pairs.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitVec4(u8);

impl BitVec4 {
    pub const ZERO: Self = Self(0);

    /// Bit `i` of `word` is component `i + 1`.
    pub fn from_word(word: u8) -> Self {
        Self(word & 0x0f)
    }

    pub fn word(self) -> u8 {
        self.0
    }

    pub fn from_bits(bits: [bool; 4]) -> Self {
        let mut w = 0u8;
        for (i, b) in bits.iter().enumerate() {
            if *b {
                w |= 1 << i;
            }
        }
        Self(w)
    }

    pub fn get(self, pos: usize) -> bool {
        assert!((1..=4).contains(&pos), "bit position {pos} out of range");
        self.0 >> (pos - 1) & 1 == 1
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// All sixteen values in numeric order of the packed word.
    pub fn all() -> impl Iterator<Item = Self> {
        (0..16u8).map(Self)
    }
}

impl BitXor for BitVec4 {
    type Output = Self;
    fn bitxor(self, rhs: Self) -> Self {
        Self(self.0 ^ rhs.0)
    }
}

impl fmt::Display for BitVec4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..4 {
            f.write_str(if self.0 >> i & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitVec4 {
    type Err = BitsError;
    fn from_str(s: &str) -> Result<Self, BitsError> {
        parse_bits(s, 4).map(|w| Self(w as u8))
    }
}

impl Serialize for BitVec4 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitVec4 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for BitVec4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec4({self})")
    }
}

/// A 2×2 bit block `[[b11, b12], [b21, b22]]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block2 {
    rows: [[bool; 2]; 2],
}

impl Block2 {
    pub const ZERO: Self = Self { rows: [[false; 2]; 2] };
    pub const IDENTITY: Self = Self { rows: [[true, false], [false, true]] };

    /// The six invertible blocks, in the canonical order used to number
    /// solutions: identity, swap, the two shears, the two three-cycles.
    pub const INVERTIBLE: [Self; 6] = [
        Self::IDENTITY,
        Self { rows: [[false, true], [true, false]] },
        Self { rows: [[true, true], [false, true]] },
        Self { rows: [[true, false], [true, true]] },
        Self { rows: [[false, true], [true, true]] },
        Self { rows: [[true, true], [true, false]] },
    ];

    pub fn new(rows: [[u8; 2]; 2]) -> Self {
        Self { rows: rows.map(|r| r.map(|b| b & 1 == 1)) }
    }

    pub fn from_bools(rows: [[bool; 2]; 2]) -> Self {
        Self { rows }
    }

    pub fn rows(self) -> [[bool; 2]; 2] {
        self.rows
    }

    pub fn get(self, r: usize, c: usize) -> bool {
        self.rows[r - 1][c - 1]
    }

    /// `b11·b22 ⊕ b12·b21`.
    pub fn det(self) -> bool {
        let [[a, b], [c, d]] = self.rows;
        (a & d) ^ (b & c)
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    pub fn rank(self) -> usize {
        let [r1, r2] = self.rows;
        let nz1 = r1 != [false; 2];
        let nz2 = r2 != [false; 2];
        match (nz1, nz2) {
            (false, false) => 0,
            (true, false) | (false, true) => 1,
            (true, true) => {
                if r1 == r2 {
                    1
                } else {
                    2
                }
            }
        }
    }

    /// Position of an invertible block in [`Block2::INVERTIBLE`].
    pub fn invertible_index(self) -> Option<usize> {
        Self::INVERTIBLE.iter().position(|b| *b == self)
    }

    /// Packs as `b11 b12 b21 b22` in bits 3..0.
    pub(crate) fn nibble(self) -> u8 {
        let [[a, b], [c, d]] = self.rows;
        (a as u8) << 3 | (b as u8) << 2 | (c as u8) << 1 | d as u8
    }

    pub(crate) fn from_nibble(n: u8) -> Self {
        Self {
            rows: [[n >> 3 & 1 == 1, n >> 2 & 1 == 1], [n >> 1 & 1 == 1, n & 1 == 1]],
        }
    }
}

impl fmt::Debug for Block2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = |x: bool| x as u8;
        let [[a, bb], [c, d]] = self.rows;
        write!(f, "[[{},{}],[{},{}]]", b(a), b(bb), b(c), b(d))
    }
}

/// A 10×10 matrix over GF(2), stored as packed rows.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat10 {
    rows: [u16; DIM],
}

impl Default for Mat10 {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Mat10 {
    pub const ZERO: Self = Self { rows: [0; DIM] };

    pub fn identity() -> Self {
        let mut rows = [0u16; DIM];
        for (i, r) in rows.iter_mut().enumerate() {
            *r = 1 << i;
        }
        Self { rows }
    }

    pub fn from_rows(rows: [BitVec10; DIM]) -> Self {
        Self { rows: rows.map(|r| r.0) }
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u16; DIM] {
        &mut self.rows
    }

    /// Row `i`, 1-based.
    pub fn row(&self, i: usize) -> BitVec10 {
        BitVec10(self.rows[i - 1])
    }

    pub fn rows(&self) -> [BitVec10; DIM] {
        self.rows.map(BitVec10)
    }

    /// Column `j`, 1-based.
    pub fn column(&self, j: usize) -> BitVec10 {
        assert!((1..=DIM).contains(&j), "column {j} out of range");
        let mut w = 0u16;
        for (i, r) in self.rows.iter().enumerate() {
            w |= (r >> (j - 1) & 1) << i;
        }
        BitVec10(w)
    }

    pub fn from_columns(cols: [BitVec10; DIM]) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.row(i).get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let mut r = self.row(i);
        r.set(j, value);
        self.rows[i - 1] = r.0;
    }

    pub fn transpose(&self) -> Self {
        let mut out = [0u16; DIM];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate() {
                *o |= (r >> j & 1) << i;
            }
        }
        Self { rows: out }
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = [0u16; DIM];
        for (o, r) in out.iter_mut().zip(self.rows.iter()) {
            let mut bits = *r;
            while bits != 0 {
                let k = bits.trailing_zeros() as usize;
                *o ^= other.rows[k];
                bits &= bits - 1;
            }
        }
        Self { rows: out }
    }

    /// Matrix-vector product: component `i` is the parity of row `i` against `x`.
    pub fn mul_vec(&self, x: BitVec10) -> BitVec10 {
        let mut w = 0u16;
        for (i, r) in self.rows.iter().enumerate() {
            w |= (((r & x.0).count_ones() & 1) as u16) << i;
        }
        BitVec10(w)
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows;
        let mut rank = 0;
        for col in 0..DIM {
            let bit = 1u16 << col;
            let Some(p) = (rank..DIM).find(|&r| rows[r] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            for r in 0..DIM {
                if r != rank && rows[r] & bit != 0 {
                    rows[r] ^= rows[rank];
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == DIM
    }

    /// Gauss-Jordan inverse, `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let mut a = self.rows;
        let mut inv = Self::identity().rows;
        for col in 0..DIM {
            let bit = 1u16 << col;
            let p = (col..DIM).find(|&r| a[r] & bit != 0)?;
            a.swap(col, p);
            inv.swap(col, p);
            for r in 0..DIM {
                if r != col && a[r] & bit != 0 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Some(Self { rows: inv })
    }

    /// `mᵀ·J·m = J` for the pairwise swap form `J`.
    pub fn is_symplectic(&self) -> bool {
        let j = symplectic_form();
        self.transpose().mul(&j).mul(self) == j
    }

    /// The 2×2 block at block-row `pair`, column group `group`.
    pub fn block(&self, pair: PairIndex, group: GroupIndex) -> Block2 {
        let r = 2 * pair.zero_based();
        let c = 2 * group.zero_based();
        let bit = |row: u16, col: usize| row >> col & 1 == 1;
        Block2::from_bools([
            [bit(self.rows[r], c), bit(self.rows[r], c + 1)],
            [bit(self.rows[r + 1], c), bit(self.rows[r + 1], c + 1)],
        ])
    }

    pub fn set_block(&mut self, pair: PairIndex, group: GroupIndex, block: Block2) {
        let r = 2 * pair.zero_based();
        let c = 2 * group.zero_based();
        let [[a, b], [cc, d]] = block.rows();
        for (row, (x, y)) in [(r, (a, b)), (r + 1, (cc, d))] {
            self.rows[row] &= !(0b11 << c);
            self.rows[row] |= (x as u16) << c | (y as u16) << (c + 1);
        }
    }

    /// `row(dst) ^= row(src)`, 1-based.
    pub fn xor_row(&mut self, dst: usize, src: usize) {
        self.rows[dst - 1] ^= self.rows[src - 1];
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.rows.swap(a - 1, b - 1);
    }

    /// True when the matrix is a block permutation whose non-zero blocks are
    /// invertible: exactly one det-1 block per block-row and block-column,
    /// every other block zero.
    pub fn is_block_permutation(&self) -> bool {
        self.block_permutation().is_some()
    }

    /// For a block-permutation matrix, the column group matched to each pair.
    pub fn block_permutation(&self) -> Option<[GroupIndex; PAIRS]> {
        let mut out = [GroupIndex::from_zero_based(0); PAIRS];
        let mut used = [false; PAIRS];
        for pair in PairIndex::all() {
            let mut found = None;
            for group in GroupIndex::all() {
                let b = self.block(pair, group);
                if b.is_zero() {
                    continue;
                }
                if !b.det() || found.is_some() {
                    return None;
                }
                found = Some(group);
            }
            let g = found?;
            if used[g.zero_based()] {
                return None;
            }
            used[g.zero_based()] = true;
            out[pair.zero_based()] = g;
        }
        Some(out)
    }
}

impl Mul for &Mat10 {
    type Output = Mat10;
    fn mul(self, rhs: &Mat10) -> Mat10 {
        Mat10::mul(self, rhs)
    }
}

impl Mul<BitVec10> for &Mat10 {
    type Output = BitVec10;
    fn mul(self, rhs: BitVec10) -> BitVec10 {
        self.mul_vec(rhs)
    }
}

impl fmt::Display for Mat10 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{}", BitVec10(*r))?;
        }
        Ok(())
    }
}

/// Serialized as ten row strings, row 1 first.
impl Serialize for Mat10 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat10 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = <[BitVec10; DIM]>::deserialize(d)?;
        Ok(Self::from_rows(rows))
    }
}

impl fmt::Debug for Mat10 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Mat10[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", BitVec10(*r))?;
        }
        f.write_str("]")
    }
}

/// The bilinear form conserved by the gate set: `[[0,1],[1,0]]` repeated
/// along the diagonal, one block per pair.
pub fn symplectic_form() -> Mat10 {
    let mut rows = [0u16; DIM];
    for k in 0..PAIRS {
        rows[2 * k] = 1 << (2 * k + 1);
        rows[2 * k + 1] = 1 << (2 * k);
    }
    Mat10 { rows }
}
