//! One row per line, ten characters from `{0,1}`, row 1 first, final newline
//! required.

use super::ParseError;
use crate::bell::DesignationMatrix;
use crate::gate::{Gate, GateSequence};
use crate::gf2::{BitVec10, Mat10, DIM};

fn parse_row(content: &str, line: usize) -> Result<BitVec10, ParseError> {
    let mut bits = [false; DIM];
    let mut n = 0;
    for (c, ch) in content.chars().enumerate() {
        if c == DIM {
            return Err(ParseError::new(line, c + 1, format!("row is longer than {DIM} bits")));
        }
        bits[c] = match ch {
            '0' => false,
            '1' => true,
            _ => return Err(ParseError::new(line, c + 1, format!("expected 0 or 1, found {ch:?}"))),
        };
        n += 1;
    }
    if n < DIM {
        return Err(ParseError::new(line, n + 1, format!("row has {n} bits, expected {DIM}")));
    }
    Ok(BitVec10::from_bits(bits))
}

fn parse_rows<const N: usize>(text: &str) -> Result<[BitVec10; N], ParseError> {
    let mut rows = [BitVec10::ZERO; N];
    let mut rest = text;
    for (i, row) in rows.iter_mut().enumerate() {
        let line = i + 1;
        if rest.is_empty() {
            return Err(ParseError::new(line, 1, format!("expected {N} rows, found {i}")));
        }
        let (content, terminated) = match rest.split_once('\n') {
            Some((c, r)) => {
                rest = r;
                (c, true)
            }
            None => (std::mem::take(&mut rest), false),
        };
        *row = parse_row(content, line)?;
        if !terminated {
            return Err(ParseError::new(line, DIM + 1, "missing final newline"));
        }
    }
    if !rest.is_empty() {
        return Err(ParseError::new(N + 1, 1, format!("unexpected content after {N} rows")));
    }
    Ok(rows)
}

fn format_rows(rows: &[BitVec10]) -> String {
    rows.iter().map(|r| format!("{r}\n")).collect()
}

pub fn parse_matrix(text: &str) -> Result<Mat10, ParseError> {
    parse_rows::<DIM>(text).map(Mat10::from_rows)
}

pub fn format_matrix(m: &Mat10) -> String {
    format_rows(&m.rows())
}

pub fn parse_designation(text: &str) -> Result<DesignationMatrix, ParseError> {
    parse_rows::<4>(text).map(DesignationMatrix::from_rows)
}

pub fn format_designation(mv: &DesignationMatrix) -> String {
    format_rows(&mv.rows())
}

pub fn parse_bitvec(text: &str) -> Result<BitVec10, ParseError> {
    parse_rows::<1>(text).map(|[r]| r)
}

pub fn format_bitvec(x: BitVec10) -> String {
    format_rows(&[x])
}

/// Gates such as `BXOR(1->2) By(3)` separated by any whitespace.
pub fn parse_gate_list(text: &str) -> Result<GateSequence, ParseError> {
    let mut gates = Vec::new();
    for (l, line) in text.lines().enumerate() {
        let mut col = 0;
        for token in line.split_whitespace() {
            let offset = line[col..].find(token).expect("token from this line") + col;
            col = offset + token.len();
            let g: Gate = token.parse().map_err(|e| ParseError::new(l + 1, offset + 1, format!("{e}")))?;
            gates.push(g);
        }
    }
    Ok(GateSequence::new(gates))
}
