//! ASCII gate arrays: one lane per pair, one 8-column slot per gate, slots
//! left to right in reduction order.
//!
//! ```text
//! 1 ---*------[By]----
//!      |
//! 2 ---+--------------
//! ```
//!
//! A BXOR is drawn as `*` on the source lane and `+` on the target, joined
//! by `|`; single-pair gates are boxed.

use super::ParseError;
use crate::gate::{Gate, GateSequence};
use crate::gf2::{PairIndex, PAIRS};

pub const FOOTER: &str = "physical (forward) order: right to left";

const SLOT: usize = 8;
const LABEL: usize = 2;
const END: &str = "--";
const WIRE: &str = "--------";

fn cell(g: Gate, p: PairIndex) -> &'static str {
    match g {
        Gate::Bxor { source, target } => {
            let (lo, hi) = (source.min(target), source.max(target));
            if p == source {
                "---*----"
            } else if p == target {
                "---+----"
            } else if lo < p && p < hi {
                "---|----"
            } else {
                WIRE
            }
        }
        Gate::By { pair } if pair == p => "--[By]--",
        Gate::SxBx { pair } if pair == p => "-[SxBx]-",
        Gate::Sz { pair } if pair == p => "--[Sz]--",
        _ => WIRE,
    }
}

/// Whether the gate's connector crosses the gap below lane `p`.
fn spans_gap(g: Gate, p: PairIndex) -> bool {
    match g {
        Gate::Bxor { source, target } => source.min(target) <= p && p < source.max(target),
        _ => false,
    }
}

/// Draws the sequence with five lanes and a footer giving the physical order.
pub fn render_sequence(seq: &GateSequence) -> String {
    let mut out = String::new();
    for p in PairIndex::all() {
        out.push_str(&format!("{p} "));
        for &g in seq.gates() {
            out.push_str(cell(g, p));
        }
        out.push_str(END);
        out.push('\n');
        if p.get() < PAIRS {
            let mut gap = " ".repeat(LABEL);
            for &g in seq.gates() {
                gap.push_str(if spans_gap(g, p) { "   |    " } else { "        " });
            }
            out.push_str(gap.trim_end());
            out.push('\n');
        }
    }
    out.push_str(FOOTER);
    out.push('\n');
    out
}

/// Reads a diagram produced by [`render_sequence`]. Gap lines and the footer
/// are not needed; the five lane lines carry the gates.
pub fn parse_diagram(text: &str) -> Result<GateSequence, ParseError> {
    let mut lanes: Vec<(usize, &str)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let expected = lanes.len() + 1;
        if expected <= PAIRS && line.starts_with(&format!("{expected} ")) {
            lanes.push((i + 1, &line[LABEL..]));
        }
    }
    let last_line = text.lines().count() + 1;
    if lanes.len() < PAIRS {
        return Err(ParseError::new(last_line, 1, format!("expected {PAIRS} lanes, found {}", lanes.len())));
    }
    let width = lanes[0].1.len();
    for &(line, body) in &lanes {
        if body.len() != width || !body.is_ascii() {
            return Err(ParseError::new(line, LABEL + 1, "lanes differ in length"));
        }
        if !body.ends_with(END) || !(width - END.len()).is_multiple_of(SLOT) {
            return Err(ParseError::new(line, LABEL + width, format!("lane must be slots of {SLOT} columns ending in {END:?}")));
        }
    }
    let slots = (width - END.len()) / SLOT;
    let mut gates = Vec::with_capacity(slots);
    for s in 0..slots {
        let col = LABEL + s * SLOT + 1;
        let cells: Vec<&str> = lanes.iter().map(|(_, b)| &b[s * SLOT..(s + 1) * SLOT]).collect();
        let err = |k: usize, msg: &str| ParseError::new(lanes[k].0, col, msg.to_string());
        let mut source = None;
        let mut target = None;
        let mut single = None;
        for (k, &c) in cells.iter().enumerate() {
            let pair = PairIndex::from_zero_based(k);
            match c {
                WIRE | "---|----" => {}
                "---*----" if source.is_none() => source = Some(pair),
                "---+----" if target.is_none() => target = Some(pair),
                "--[By]--" if single.is_none() => single = Some(Gate::By { pair }),
                "-[SxBx]-" if single.is_none() => single = Some(Gate::SxBx { pair }),
                "--[Sz]--" if single.is_none() => single = Some(Gate::Sz { pair }),
                _ => return Err(err(k, &format!("unexpected cell {c:?}"))),
            }
        }
        let g = match (source, target, single) {
            (Some(source), Some(target), None) => Gate::Bxor { source, target },
            (None, None, Some(g)) => g,
            _ => return Err(err(0, "slot must hold one BXOR or one boxed gate")),
        };
        for (k, &c) in cells.iter().enumerate() {
            if c != cell(g, PairIndex::from_zero_based(k)) {
                return Err(err(k, &format!("cell {c:?} does not match {g}")));
            }
        }
        gates.push(g);
    }
    Ok(GateSequence::new(gates))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sequence_is_bare_lanes() {
        let d = render_sequence(&GateSequence::default());
        assert_eq!(d, format!("1 --\n\n2 --\n\n3 --\n\n4 --\n\n5 --\n{FOOTER}\n"));
        assert!(parse_diagram(&d).unwrap().is_empty());
    }

    #[test]
    fn single_bxor() {
        let seq: GateSequence = "BXOR(1->2)".parse().unwrap();
        let d = render_sequence(&seq);
        let lines: Vec<&str> = d.lines().collect();
        assert_eq!(lines[0], "1 ---*------");
        assert_eq!(lines[1], "     |");
        assert_eq!(lines[2], "2 ---+------");
        assert_eq!(lines[4], "3 ----------");
        assert_eq!(lines.last(), Some(&FOOTER));
        assert_eq!(parse_diagram(&d).unwrap(), seq);
    }

    #[test]
    fn long_connector_and_boxes() {
        let seq: GateSequence = "BXOR(5->2) SxBx(3) By(1) Sz(4) BXOR(1->5)".parse().unwrap();
        let d = render_sequence(&seq);
        assert_eq!(d.lines().nth(4).unwrap(), "3 ---|-----[SxBx]--------------------|------");
        assert_eq!(parse_diagram(&d).unwrap(), seq);
    }

    #[test]
    fn malformed_cell_is_located() {
        let seq: GateSequence = "By(2) BXOR(1->3)".parse().unwrap();
        let d = render_sequence(&seq).replace("--[By]--", "--[Bz]--");
        let e = parse_diagram(&d).unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
    }
}
