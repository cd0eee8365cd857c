//! Affine GF(2) forms over the template unknowns, and linear constraint solving.

use std::fmt;
use std::ops::{BitXor, BitXorAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bell::DesignationMatrix;
use crate::gf2::{Mat10, DIM};

const LETTERS: [u8; 6] = *b"abcdef";
/// 0-based row of each unknown family: a, b, c on rows 1-3, then d, e, f on rows 5, 7, 9.
const LETTER_ROWS: [usize; 6] = [0, 1, 2, 4, 6, 8];

/// One template unknown such as `c3`: a letter family `a..f` and a column `1..10`.
/// Ordered by family, then column.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Unknown(u8);

impl Unknown {
    /// `letter` in `a..=f`, `column` in `1..=10`.
    pub fn new(letter: char, column: usize) -> Option<Self> {
        let l = LETTERS.iter().position(|c| *c as char == letter)?;
        (1..=DIM).contains(&column).then(|| Self((l * DIM + column) as u8))
    }

    pub(crate) fn from_bit(bit: u32) -> Self {
        debug_assert!((1..=60).contains(&bit));
        Self(bit as u8)
    }

    pub(crate) fn bit(self) -> u32 {
        self.0 as u32
    }

    pub fn letter(self) -> char {
        LETTERS[(self.0 as usize - 1) / DIM] as char
    }

    pub fn column(self) -> usize {
        (self.0 as usize - 1) % DIM + 1
    }

    /// The 1-based template row holding this unknown.
    pub fn row(self) -> usize {
        LETTER_ROWS[(self.0 as usize - 1) / DIM] + 1
    }
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter(), self.column())
    }
}

impl fmt::Debug for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Unknown {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(|| "empty unknown name".to_string())?;
        let column: usize = chars.as_str().parse().map_err(|_| format!("bad unknown name {s:?}"))?;
        Self::new(letter, column).ok_or_else(|| format!("bad unknown name {s:?}"))
    }
}

impl Serialize for Unknown {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Unknown {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `constant ⊕ Σ unknowns`, packed: bit 0 is the constant, bit `u` is unknown `u`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct AffineForm(u64);

impl AffineForm {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    pub fn constant(b: bool) -> Self {
        Self(b as u64)
    }

    pub fn unknown(u: Unknown) -> Self {
        Self(1 << u.bit())
    }

    pub(crate) fn raw(self) -> u64 {
        self.0
    }

    pub(crate) fn from_raw(w: u64) -> Self {
        Self(w)
    }

    pub fn constant_part(self) -> bool {
        self.0 & 1 == 1
    }

    /// Bit mask of the unknowns in the support.
    pub(crate) fn support_mask(self) -> u64 {
        self.0 & !1
    }

    pub fn support(self) -> impl Iterator<Item = Unknown> {
        bits(self.support_mask()).map(Unknown::from_bit)
    }

    pub fn is_constant(self) -> bool {
        self.support_mask() == 0
    }

    /// The value when every unknown in `ones` is 1 and every other is 0.
    pub(crate) fn eval(self, ones: u64) -> bool {
        (self.0 & 1) as u32 ^ (self.0 & ones).count_ones() & 1 == 1
    }

    /// Substitutes constants for the unknowns in `mask`: those in `ones` become 1.
    pub(crate) fn assign(self, mask: u64, ones: u64) -> Self {
        let flip = (self.0 & mask & ones).count_ones() as u64 & 1;
        Self((self.0 & !mask) ^ flip)
    }
}

impl BitXor for AffineForm {
    type Output = Self;
    fn bitxor(self, rhs: Self) -> Self {
        Self(self.0 ^ rhs.0)
    }
}

impl BitXorAssign for AffineForm {
    fn bitxor_assign(&mut self, rhs: Self) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.support().map(|u| u.to_string()).collect();
        if self.constant_part() || parts.is_empty() {
            parts.push(if self.constant_part() { "1" } else { "0" }.to_string());
        }
        f.write_str(&parts.join("+"))
    }
}

impl fmt::Debug for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub(crate) fn bits(mut m: u64) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let b = m.trailing_zeros();
            m &= m - 1;
            b
        })
    })
}

/// One row of symbolic forms, columns 1..10.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FormRow(pub(crate) [AffineForm; DIM]);

impl BitXorAssign for FormRow {
    fn bitxor_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a ^= b;
        }
    }
}

/// A 10×10 grid of affine forms: the assumed encoding matrix with unknown rows.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct TemplateMatrix {
    pub(crate) rows: [FormRow; DIM],
}

impl TemplateMatrix {
    /// Rows 4, 6, 8, 10 are the designation rows; rows 1, 2, 3, 5, 7, 9 hold
    /// the unknown families a, b, c, d, e, f, one unknown per column.
    pub fn new(mv: &DesignationMatrix) -> Self {
        let mut rows = [FormRow::default(); DIM];
        for (i, r) in [4, 6, 8, 10].iter().enumerate() {
            for j in 1..=DIM {
                rows[r - 1].0[j - 1] = AffineForm::constant(mv.row(i + 1).get(j));
            }
        }
        for (l, &r) in LETTER_ROWS.iter().enumerate() {
            for j in 1..=DIM {
                let u = Unknown::new(LETTERS[l] as char, j).expect("in range");
                rows[r].0[j - 1] = AffineForm::unknown(u);
            }
        }
        Self { rows }
    }

    /// Entry `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> AffineForm {
        self.rows[i - 1].0[j - 1]
    }

    pub fn is_concrete(&self) -> bool {
        self.rows.iter().all(|r| r.0.iter().all(|f| f.is_constant()))
    }

    /// Evaluates every entry with the unknowns in `ones` set to 1, the rest 0.
    pub fn evaluate(&self, ones: &[Unknown]) -> Mat10 {
        let mask = ones.iter().fold(0u64, |m, u| m | 1 << u.bit());
        let mut m = Mat10::ZERO;
        for i in 0..DIM {
            for j in 0..DIM {
                m.set(i + 1, j + 1, self.rows[i].0[j].eval(mask));
            }
        }
        m
    }

    /// The constant matrix, or `None` while unknowns remain.
    pub fn to_concrete(&self) -> Option<Mat10> {
        self.is_concrete().then(|| self.evaluate(&[]))
    }

    pub(crate) fn assign(&mut self, mask: u64, ones: u64) {
        for r in self.rows.iter_mut() {
            for f in r.0.iter_mut() {
                *f = f.assign(mask, ones);
            }
        }
    }

    pub(crate) fn substitute(&mut self, c: &ConstraintSet) {
        for r in self.rows.iter_mut() {
            for f in r.0.iter_mut() {
                *f = c.reduce(*f);
            }
        }
    }
}

impl fmt::Debug for TemplateMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let cells: Vec<String> = r.0.iter().map(|c| c.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Linear relations `unknown = form`, kept fully reduced: no solved unknown
/// appears on any right-hand side.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct ConstraintSet {
    relations: Vec<(Unknown, AffineForm)>,
}

/// A relation reduced to `1 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Contradiction;

impl ConstraintSet {
    pub fn relations(&self) -> &[(Unknown, AffineForm)] {
        &self.relations
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// Rewrites `f` in terms of unsolved unknowns.
    pub fn reduce(&self, mut f: AffineForm) -> AffineForm {
        for (u, rhs) in &self.relations {
            if f.raw() >> u.bit() & 1 == 1 {
                f = AffineForm::from_raw(f.raw() ^ (1 << u.bit())) ^ *rhs;
            }
        }
        f
    }

    /// Adds `f = 0`, solving for the lowest-numbered unknown in `f`.
    pub fn require_zero(&mut self, f: AffineForm) -> Result<(), Contradiction> {
        let e = self.reduce(f);
        if e == AffineForm::ZERO {
            return Ok(());
        }
        let Some(pivot) = e.support().next() else {
            return Err(Contradiction);
        };
        let rhs = AffineForm::from_raw(e.raw() ^ (1 << pivot.bit()));
        for (_, r) in self.relations.iter_mut() {
            if r.raw() >> pivot.bit() & 1 == 1 {
                *r = AffineForm::from_raw(r.raw() ^ (1 << pivot.bit())) ^ rhs;
            }
        }
        self.relations.push((pivot, rhs));
        Ok(())
    }
}
