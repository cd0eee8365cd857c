#![allow(dead_code)]

use fivepair::{BitVec10, DesignationMatrix, Mat10};

pub const STANDARD: &str = "1001000110 0010111110 0100011010 0001101001";
pub const SWAPPED: &str = "1011111000 0010111110 0100011010 0001101001";

pub const A1_MW: &str = "1000010100 0110000010 0010000010 1001000110 0000010010 \
    0010111110 0000010100 0100011010 0000000010 0001101001";
pub const C1_MW: &str = "1000001001 0100000111 0000000111 1001000110 0000101001 \
    0010111110 0000001001 0100011010 0010000111 0001101001";

/// Block-diagonal forms printed for the two A1α1 sequences.
pub const I_X_A: &str = "1000000000 0100000000 0010000000 0001000000 0000010000 \
    0000100000 0000001100 0000000100 0000000010 0000000001";
pub const I_X_B: &str = "1000000000 0100000000 0001000000 0010000000 0000010000 \
    0000100000 0000000100 0000001100 0000000010 0000000011";

pub const LABELS: [&str; 7] = ["A1α1", "A1α2", "A1β1", "A1β2", "A1γ1", "A1γ2", "C1β1"];

pub fn mat(s: &str) -> Mat10 {
    let rows: Vec<BitVec10> = s.split_whitespace().map(|r| r.parse().unwrap()).collect();
    Mat10::from_rows(rows.try_into().unwrap())
}

pub fn mv(s: &str) -> DesignationMatrix {
    s.parse().unwrap()
}
