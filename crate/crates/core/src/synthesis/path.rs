//! Branch choices through the staged synthesis, and their short case labels.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::form::Unknown;
use crate::gf2::{GroupIndex, PairIndex, PAIRS};

/// Values for some of a stage's free unknowns, serialized as `{"c3": 1, ...}`.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Assignment(#[serde(with = "bit_map")] pub BTreeMap<Unknown, bool>);

mod bit_map {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::synthesis::form::Unknown;

    pub fn serialize<S: Serializer>(m: &BTreeMap<Unknown, bool>, s: S) -> Result<S::Ok, S::Error> {
        let as_bits: BTreeMap<Unknown, u8> = m.iter().map(|(k, v)| (*k, *v as u8)).collect();
        as_bits.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Unknown, bool>, D::Error> {
        let raw = BTreeMap::<Unknown, u8>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| match v {
                0 | 1 => Ok((k, v == 1)),
                _ => Err(serde::de::Error::custom(format!("{k} must be 0 or 1, got {v}"))),
            })
            .collect()
    }
}

impl Assignment {
    pub fn get(&self, u: Unknown) -> Option<bool> {
        self.0.get(&u).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses pairs like `("c3", 1)`; panics on a malformed name.
    pub fn of(pairs: &[(&str, u8)]) -> Self {
        Self(pairs.iter().map(|(n, v)| (n.parse().expect("unknown name"), *v == 1)).collect())
    }
}

/// The choice made at one stage. Omitted fields are inferred when unique.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct StageChoice {
    /// The pair whose block in this stage's column group is invertible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pivot: Option<PairIndex>,
    #[serde(default, skip_serializing_if = "Assignment::is_empty")]
    pub assignment: Assignment,
    /// Order in which the other live pairs are eliminated against the pivot.
    /// Pairs left out follow in ascending order. When absent, the order that
    /// leaves the most options at the next stage is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elimination_order: Option<Vec<PairIndex>>,
}

pub fn identity_order() -> [GroupIndex; PAIRS] {
    [1, 2, 3, 4, 5].map(|k| GroupIndex::new(k).expect("in range"))
}

/// Route through the synthesis tree: the column-group processing order plus
/// a choice per stage, or a case label naming one.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ChoicePath {
    /// Group `j` of the template is group `column_order[j]` of the designation.
    #[serde(default = "identity_order")]
    pub column_order: [GroupIndex; PAIRS],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default)]
    pub stages: Vec<StageChoice>,
}

impl Default for ChoicePath {
    fn default() -> Self {
        Self { column_order: identity_order(), label: None, stages: Vec::new() }
    }
}

impl ChoicePath {
    pub fn from_label(label: &str) -> Self {
        Self { label: Some(label.to_string()), ..Self::default() }
    }

    pub fn from_stages(stages: Vec<StageChoice>) -> Self {
        Self { stages, ..Self::default() }
    }

    pub fn with_column_order(mut self, order: [GroupIndex; PAIRS]) -> Self {
        self.column_order = order;
        self
    }
}

const GREEK: [(char, &str); 6] = [
    ('α', "alpha"),
    ('β', "beta"),
    ('γ', "gamma"),
    ('δ', "delta"),
    ('ε', "epsilon"),
    ('ζ', "zeta"),
];

/// A case label such as `A1α1` or `17:B2γ1`.
///
/// The optional leading number picks the stage-1 option (default 1). The
/// letter picks the stage-2 pivot among pairs that have any option, in
/// ascending pair order, and the number after it the option of that pivot.
/// The Greek letter and number do the same for stage 3. Options of one pivot
/// are ordered by the index of its block in [`crate::gf2::Block2::INVERTIBLE`],
/// then by the assignment read as a binary number in unknown order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CaseLabel {
    pub stage1: usize,
    pub stage2: Option<(usize, usize)>,
    pub stage3: Option<(usize, usize)>,
}

impl CaseLabel {
    /// `(pivot rank, option number)` for stages 2 and 3, 1-based.
    pub fn stage(&self, t: usize) -> Option<(usize, usize)> {
        match t {
            2 => self.stage2,
            3 => self.stage3,
            _ => None,
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.stage1 != 1 {
            write!(f, "{}:", self.stage1)?;
        }
        if let Some((l, n)) = self.stage2 {
            write!(f, "{}{}", (b'A' + l as u8 - 1) as char, n)?;
        }
        if let Some((l, n)) = self.stage3 {
            write!(f, "{}{}", GREEK[l - 1].0, n)?;
        }
        Ok(())
    }
}

impl FromStr for CaseLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("malformed case label {s:?}");
        let mut rest = s.trim();
        let mut stage1 = 1;
        if let Some((n, tail)) = rest.split_once(':') {
            stage1 = n.parse().map_err(|_| bad())?;
            rest = tail;
        }
        let number = |r: &str| -> Result<(usize, usize), String> {
            let len = r.bytes().take_while(u8::is_ascii_digit).count();
            let n = r[..len].parse().map_err(|_| bad())?;
            Ok((n, len))
        };
        let mut stage2 = None;
        if let Some(c) = rest.chars().next().filter(char::is_ascii_uppercase) {
            let (n, len) = number(&rest[1..])?;
            stage2 = Some((c as usize - 'A' as usize + 1, n));
            rest = &rest[1 + len..];
        }
        let mut stage3 = None;
        if !rest.is_empty() {
            let (idx, skip) = GREEK
                .iter()
                .enumerate()
                .find_map(|(i, (c, name))| {
                    if rest.starts_with(*c) {
                        Some((i, c.len_utf8()))
                    } else if rest.starts_with(name) {
                        Some((i, name.len()))
                    } else {
                        None
                    }
                })
                .ok_or_else(bad)?;
            let (n, len) = number(&rest[skip..])?;
            stage3 = Some((idx + 1, n));
            rest = &rest[skip + len..];
        }
        if !rest.is_empty() || stage1 == 0 || stage2.is_some_and(|(_, n)| n == 0) || stage3.is_some_and(|(_, n)| n == 0) {
            return Err(bad());
        }
        if stage3.is_some() && stage2.is_none() {
            return Err(bad());
        }
        Ok(Self { stage1, stage2, stage3 })
    }
}
