//! Acceptance suite: each criterion runs in turn under its time budget and
//! prints one PASS or FAIL line. Criteria that cannot be met are listed in
//! `KNOWN_UNMET`; the test fails if any other criterion fails, or if a known
//! one starts passing.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use fivepair::bell::canonical_syndromes;
use fivepair::io::{read_designation, read_matrix, read_records};
use fivepair::synthesis::{
    eliminate_block, enumerate_solutions, identity_order, monte_carlo_search, options_after, relate_designations,
    Assignment, EnumerationOptions, StageChoice,
};
use fivepair::{
    check_correction, minimal_sequence, permute_and_reduce, synthesize, verify_solution, AffineMap, Block2,
    ChoicePath, DesignationMatrix, Direction, Gate, GateSequence, GroupIndex, Mat10, Objective, OptimizeError,
    PairIndex, VerifyInput,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// The C1β1 matrix has no reduction of length 9 or less; its certified minimum is 11
/// (six BXORs and five other gates).
const KNOWN_UNMET: &[&str] = &["6b"];

const SYNDROME_TSV: &str = "\
i\tx\tv
0\t0000000000\t0000
1\t1000000000\t1000
2\t0100000000\t0010
3\t1100000000\t1010
4\t0010000000\t0100
5\t0001000000\t1001
6\t0011000000\t1101
7\t0000100000\t0101
8\t0000010000\t0110
9\t0000110000\t0011
10\t0000001000\t0111
11\t0000000100\t1100
12\t0000001100\t1011
13\t0000000010\t1110
14\t0000000001\t0001
15\t0000000011\t1111
";

/// `i v w'` for A1α1, A1α2, A1β1, A1β2, A1γ1, A1γ2, C1β1.
const CASE_COLUMNS: &str = "\
0 0000 00 00 00 00 00 00 00
1 1000 10 10 10 10 10 10 10
2 0010 01 01 01 01 01 01 01
3 1010 11 11 11 11 11 11 11
4 0100 01 01 01 01 01 01 00
5 1001 00 00 00 00 00 00 00
6 1101 01 01 01 01 01 01 00
7 0101 00 01 10 10 00 01 00
8 0110 10 11 10 11 01 01 00
9 0011 10 10 00 01 01 00 00
10 0111 00 01 00 01 11 11 10
11 1100 10 10 00 01 01 00 01
12 1011 10 11 00 00 10 11 11
13 1110 01 00 11 11 01 00 01
14 0001 00 01 00 01 11 11 11
15 1111 01 01 11 10 10 11 10";

const LABELS: [&str; 7] = ["A1α1", "A1α2", "A1β1", "A1β2", "A1γ1", "A1γ2", "C1β1"];

type Check = Result<String, String>;

/// Name, time budget, check.
type Criterion = (&'static str, Duration, fn() -> Check);

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn text(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

fn designation() -> DesignationMatrix {
    read_designation(&text("standard.txt")).unwrap()
}

fn matrix(name: &str) -> Mat10 {
    read_matrix(&text(name)).unwrap()
}

fn pair(k: usize) -> PairIndex {
    PairIndex::new(k).unwrap()
}

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn cli(args: &[&str]) -> Result<String, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_fivepair")).args(args).env_remove("FIVEPAIR_JOBS").output().unwrap();
    if !o.status.success() {
        return Err(format!("exit {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr)));
    }
    Ok(String::from_utf8(o.stdout).unwrap())
}

fn synth_cli(choices: &str, expected: &str) -> Check {
    let out = cli(&[
        "synth",
        "--designation",
        fixture("standard.txt").to_str().unwrap(),
        "--choices",
        fixture(choices).to_str().unwrap(),
    ])?;
    let rec = read_records(&out).map_err(|e| e.to_string())?.remove(0);
    ensure(rec.m_w == matrix(expected), || format!("m_w differs:\n{}", rec.m_w))?;
    Ok(format!("m_w equals {expected}"))
}

fn criterion_1() -> Check {
    synth_cli("a1alpha1.json", "a1alpha1_mw.txt")
}

fn criterion_2() -> Check {
    synth_cli("c1beta1.json", "c1beta1_mw.txt")
}

fn criterion_3() -> Check {
    let out = cli(&["tables", "--designation", fixture("standard.txt").to_str().unwrap()])?;
    ensure(out == SYNDROME_TSV, || format!("tables output differs:\n{out}"))?;
    Ok("16 rows byte-exact".into())
}

fn criterion_4() -> Check {
    let lines: Vec<Vec<&str>> = CASE_COLUMNS.lines().map(|l| l.split(' ').collect()).collect();
    let mut matched = 0;
    for (col, label) in LABELS.iter().enumerate() {
        let rec = synthesize(&designation(), &ChoicePath::from_label(label)).map_err(|e| format!("{label}: {e}"))?;
        let report = verify_solution(VerifyInput::Matrix(&rec.m_w), &rec.designation);
        ensure(report.pass, || format!("{label}: {:?}", report.failures))?;
        for (row, line) in report.rows.iter().zip(&lines) {
            ensure(row.v.to_string() == line[1], || format!("{label} i={} v={}", row.i, row.v))?;
            ensure(row.w_prime.to_string() == line[2 + col], || format!("{label} i={} w'={}", row.i, row.w_prime))?;
            matched += 1;
        }
    }
    Ok(format!("{matched} (v, w') pairs match"))
}

fn stage1() -> StageChoice {
    StageChoice {
        pivot: Some(pair(1)),
        assignment: Assignment::of(&[
            ("a1", 1), ("a2", 0), ("b1", 0), ("b2", 1), ("c1", 0), ("c2", 0),
            ("d1", 0), ("d2", 0), ("e1", 0), ("e2", 0), ("f1", 0), ("f2", 0),
        ]),
        elimination_order: None,
    }
}

fn criterion_5() -> Check {
    let mv = designation();
    let count = |stages: Vec<StageChoice>| {
        options_after(&mv, &ChoicePath::from_stages(stages)).map(|o| o.len()).map_err(|e| e.to_string())
    };
    let first = count(vec![])?;
    let second = count(vec![stage1()])?;
    let swapped = count(vec![StageChoice { elimination_order: Some(vec![pair(4), pair(2)]), ..stage1() }])?;
    let a1 = StageChoice {
        pivot: Some(pair(2)),
        assignment: Assignment::of(&[
            ("c3", 1), ("c4", 0), ("d3", 0), ("d4", 0), ("e3", 0), ("e4", 0), ("f3", 0), ("f4", 0),
        ]),
        elimination_order: None,
    };
    let third = options_after(&mv, &ChoicePath::from_stages(vec![stage1(), a1])).map_err(|e| e.to_string())?;
    let got: Vec<[u8; 4]> = (0..third.len())
        .map(|i| {
            let a = third.assignment(i);
            ["e5", "e6", "f5", "f6"].map(|u| a.get(u.parse().unwrap()).unwrap() as u8)
        })
        .collect();
    let printed = vec![[0, 1, 0, 0], [0, 1, 1, 1], [1, 1, 0, 0], [1, 1, 0, 1], [0, 0, 0, 1], [0, 0, 1, 1]];
    ensure((first, second, swapped) == (384, 104, 72), || format!("counts {first}/{second}/{swapped}"))?;
    ensure(got == printed, || format!("stage-3 results {got:?}"))?;
    Ok("384 / 104 / 72 options, 6 stage-3 results".into())
}

fn criterion_6a() -> Check {
    let rec = synthesize(&designation(), &ChoicePath::from_label("A1α1")).map_err(|e| e.to_string())?;
    let r = permute_and_reduce(&rec, Objective::TotalOps);
    let (bxor, total) = r.objective_value;
    ensure(total <= 10 && bxor <= 7, || format!("permuted to {bxor} BXOR / {total} total"))?;
    ensure(r.best.reduce(&rec.m_w) == r.best_i_x && r.best_i_x.is_block_permutation(), || "illegal I_x".into())?;
    Ok(format!("A1α1 record {:?} -> {bxor} BXOR / {total} total", rec.sequence.cost()))
}

fn criterion_6b() -> Check {
    let m = matrix("c1beta1_mw.txt");
    match minimal_sequence(&m, Objective::BxorThenTotal, 9) {
        Ok(r) => {
            let (bxor, total) = r.objective_value;
            ensure(bxor == 6 && total - bxor <= 3, || format!("{bxor} BXOR / {total} total"))?;
            Ok(format!("{bxor} BXOR and {} others", total - bxor))
        }
        Err(OptimizeError::DepthExceeded { .. }) => {
            let best = minimal_sequence(&m, Objective::BxorThenTotal, 11).map_err(|e| e.to_string())?;
            let (bxor, total) = best.objective_value;
            Err(format!(
                "the C1β1 matrix has no sequence within depth 9; certified minimum at depth 11 is {bxor} BXOR + {} others",
                total - bxor
            ))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn all_blocks() -> Vec<Block2> {
    (0..16u8).map(|c| Block2::new([[c & 1, c >> 1 & 1], [c >> 2 & 1, c >> 3 & 1]])).collect()
}

fn criterion_7() -> Check {
    // (a) every gate instance
    let gates: Vec<Gate> = Gate::alphabet().collect();
    ensure(gates.len() == 35, || format!("{} gates", gates.len()))?;
    for g in &gates {
        let m = g.matrix();
        ensure(m.after(&m) == AffineMap::identity(), || format!("{g} is not an involution"))?;
        ensure(m.matrix.is_symplectic(), || format!("{g} is not symplectic"))?;
    }
    // (b) random sequences
    let mut rng = StdRng::seed_from_u64(7);
    let syndromes = canonical_syndromes();
    for _ in 0..1000 {
        let len = rng.random_range(0..=12);
        let seq: GateSequence = (0..len).map(|_| gates[rng.random_range(0..gates.len())]).collect();
        for (i, x) in syndromes.iter() {
            let back = seq.apply(seq.apply(x, Direction::Backward), Direction::Forward);
            ensure(back == x, || format!("{seq}: x({i}) not restored"))?;
        }
    }
    // (c) enumerated records
    let mut records = Vec::new();
    enumerate_solutions(&designation(), identity_order(), EnumerationOptions { limit: Some(500), jobs: None }, |r| {
        records.push(r)
    });
    ensure(records.len() == 500, || format!("{} records", records.len()))?;
    for (n, rec) in records.iter().enumerate() {
        ensure(check_correction(&rec.m_w), || format!("record {n} does not correct"))?;
        let rows = verify_solution(VerifyInput::Matrix(&rec.m_w), &rec.designation).rows;
        let vs: HashSet<u8> = rows.iter().map(|r| r.v.word()).collect();
        ensure(vs.len() == 16, || format!("record {n}: {} distinct v", vs.len()))?;
        for k in 1..=5 {
            ensure(rows[3 * k].w == rows[3 * k - 2].w ^ rows[3 * k - 1].w, || format!("record {n}: w closure k={k}"))?;
        }
    }
    // (d) block elimination
    let g1 = GroupIndex::new(1).unwrap();
    let mut cases = 0;
    for pivot in all_blocks().into_iter().filter(|b| b.det()) {
        for target in all_blocks().into_iter().filter(|b| !b.det()) {
            let seq = eliminate_block(pivot, target, pair(1), pair(2)).map_err(|e| e.to_string())?;
            let mut m = Mat10::ZERO;
            m.set_block(pair(1), g1, pivot);
            m.set_block(pair(2), g1, target);
            let out = seq.reduce(&m);
            ensure(seq.len() <= 6 && out.block(pair(1), g1).det() && out.block(pair(2), g1).is_zero(), || {
                format!("{pivot:?} / {target:?}: {seq}")
            })?;
            cases += 1;
        }
    }
    ensure(cases == 60, || format!("{cases} block pairs"))?;
    Ok("35 gates, 1000 sequences, 500 records, 60 block pairs".into())
}

fn criterion_8() -> Check {
    let mv = designation();
    let mut sets: Vec<HashSet<Mat10>> = Vec::new();
    let mut sizes = Vec::new();
    for first in 1..=5 {
        let mut order = vec![first];
        order.extend((1..=5).filter(|&g| g != first));
        let order: [GroupIndex; 5] = std::array::from_fn(|i| GroupIndex::new(order[i]).unwrap());
        let mut set = HashSet::new();
        let stats = enumerate_solutions(&mv, order, EnumerationOptions::default(), |r| {
            set.insert(r.m_w);
        });
        ensure(stats.records as usize == set.len(), || format!("order {first}: repeated matrices"))?;
        sizes.push(set.len());
        sets.push(set);
    }
    for a in 0..5 {
        for b in a + 1..5 {
            let common = sets[a].intersection(&sets[b]).count();
            ensure(common == 0, || format!("groups {} and {} share {common} matrices", a + 1, b + 1))?;
        }
    }
    let related = relate_designations(&mv, &read_designation(&text("swapped.txt")).unwrap());
    let expected = [Gate::Bxor { source: pair(3), target: pair(2) }];
    ensure(related.as_ref().map(GateSequence::gates) == Some(&expected[..]), || format!("relate gave {related:?}"))?;
    Ok(format!("5 disjoint sets of {sizes:?} records; swapped = BXOR(3->2) on standard"))
}

fn criterion_9() -> Check {
    let hit = monte_carlo_search(&designation(), 0, 1_000_000).map_err(|e| e.to_string())?;
    let report = verify_solution(VerifyInput::Sequence(&hit.record.sequence), &designation());
    ensure(report.pass, || format!("{:?}", report.failures))?;
    ensure(hit.draws == 3205, || format!("seed 0 now hits after {} draws", hit.draws))?;
    Ok(format!("seed 0 hits after {} draws", hit.draws))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("1", Duration::from_secs(1), criterion_1),
        ("2", Duration::from_secs(1), criterion_2),
        ("3", Duration::from_secs(1), criterion_3),
        ("4", Duration::from_secs(5), criterion_4),
        ("5", Duration::from_secs(10), criterion_5),
        ("6a", Duration::from_secs(300), criterion_6a),
        ("6b", Duration::from_secs(300), criterion_6b),
        ("7", Duration::from_secs(60), criterion_7),
        ("8", Duration::from_secs(30), criterion_8),
        ("9", Duration::from_secs(60), criterion_9),
    ];
    let mut failed = Vec::new();
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed <= budget {
                Ok(detail)
            } else {
                Err(format!("{detail}, but took {elapsed:.2?} (budget {budget:?})"))
            }
        });
        match result {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{elapsed:.2?}]"),
            Err(detail) => {
                println!("FAIL criterion {name}: {detail} [{elapsed:.2?}]");
                failed.push(name);
            }
        }
    }
    assert_eq!(failed, KNOWN_UNMET, "criteria failing other than the known ones");
}
