//! Random-walk baseline pinned to one seed.

mod common;

use common::*;
use fivepair::synthesis::{monte_carlo_search, MonteCarloError};
use fivepair::{check_correction, verify_solution, DesignationMatrix, Gate, Mat10, VerifyInput};

const SEED: u64 = 0;

const M_W: &str = "0000100110 0011101100 1001011100 1001000110 0110101011 \
                   0010111110 1110100100 0100011010 0010111100 0001101001";

const I_X: &str = "0000000011 0000000010 1000000000 0100000000 0000000100 \
                   0000001100 0001000000 0011000000 0000110000 0000010000";

/// FNV-1a over the comma-terminated gate ranks.
fn digest(ranks: &[usize]) -> u64 {
    ranks.iter().flat_map(|r| format!("{r},").into_bytes()).fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
    })
}

#[test]
fn pinned_seed_reproduces_its_record() {
    let hit = monte_carlo_search(&mv(STANDARD), SEED, 1_000_000).unwrap();
    assert_eq!(hit.draws, 3205);
    let rec = &hit.record;
    assert_eq!(rec.m_w, mat(M_W));
    assert_eq!(rec.i_x, mat(I_X));
    assert_eq!(rec.sequence.cost(), (1023, 3205));
    // reduction order starts with the last gates drawn
    let head: Vec<String> = rec.sequence.gates()[..6].iter().map(Gate::to_string).collect();
    assert_eq!(head.join(" "), "By(5) SxBx(5) BXOR(5->3) SxBx(3) SxBx(3) BXOR(4->3)");
    assert_eq!(digest(&rec.sequence.ranks()), 0x2f7d_f70e_1027_7f91);

    assert!(rec.is_consistent());
    assert!(check_correction(&rec.m_w));
    let report = verify_solution(VerifyInput::Sequence(&rec.sequence), &mv(STANDARD));
    assert!(report.pass, "{:?}", report.failures);
}

#[test]
fn same_seed_same_walk() {
    let a = monte_carlo_search(&mv(STANDARD), 42, 1_000_000).unwrap();
    let b = monte_carlo_search(&mv(STANDARD), 42, 1_000_000).unwrap();
    assert_eq!(a.draws, b.draws);
    assert_eq!(a.record, b.record);
    assert!(check_correction(&a.record.m_w));
}

#[test]
fn hits_always_correct() {
    for seed in 1..20 {
        let hit = monte_carlo_search(&mv(STANDARD), seed, 1_000_000).unwrap();
        assert!(check_correction(&hit.record.m_w), "seed {seed}");
        assert_eq!(hit.record.sequence.len(), hit.draws);
    }
}

#[test]
fn no_draws_finds_nothing() {
    assert_eq!(monte_carlo_search(&mv(STANDARD), SEED, 0).unwrap_err(), MonteCarloError::NotFound { draws: 0 });
}

#[test]
fn invalid_designation_is_rejected() {
    let bad = DesignationMatrix::from_measured_rows(&Mat10::identity());
    assert_eq!(monte_carlo_search(&bad, SEED, 10).unwrap_err(), MonteCarloError::InvalidDesignation);
}
