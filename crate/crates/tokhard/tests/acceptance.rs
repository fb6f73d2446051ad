//! Acceptance gate: twelve end-to-end criteria, each printing one
//! pass/fail line (run with `--nocapture` to see them on success).

use std::collections::BTreeSet;
use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::time::{Duration, Instant};

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tokhard::core::{
    AddChainInstance, Alphabet, Assignment, CharString, Dataset, Symbol, UnaryCertificate,
    VcInstance, Vocabulary,
};
use tokhard::encoders::{self, unary_direct_encode};
use tokhard::harness;
use tokhard::oracles::{self, SearchBudget};
use tokhard::reductions;
use tokhard::witnesses;

fn criterion<F>(number: usize, name: &str, limit: Duration, body: F)
where
    F: FnOnce() + UnwindSafe,
{
    let start = Instant::now();
    let outcome = catch_unwind(body);
    let elapsed = start.elapsed();
    let ok = outcome.is_ok() && elapsed <= limit;
    println!(
        "criterion {:2} ({}): {} [{:.2?} of {:?}]",
        number,
        name,
        if ok { "pass" } else { "fail" },
        elapsed,
        limit
    );
    if let Err(payload) = outcome {
        resume_unwind(payload);
    }
    assert!(
        elapsed <= limit,
        "criterion {} exceeded its {:?} budget: {:?}",
        number,
        limit,
        elapsed
    );
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn budget() -> SearchBudget {
    SearchBudget::default()
}

/// Plain recursive minimum segmentation, the slow reference for the DP.
fn exhaustive_min(vocab: &Vocabulary, syms: &[Symbol]) -> usize {
    if syms.is_empty() {
        return 0;
    }
    let mut best = usize::MAX;
    for cut in 1..=syms.len() {
        let prefix = CharString::new(syms[..cut].to_vec());
        if vocab.contains(&prefix) {
            best = best.min(1 + exhaustive_min(vocab, &syms[cut..]));
        }
    }
    best
}

#[test]
fn criterion_01_direct_encode_matches_exhaustive_segmentation() {
    criterion(1, "direct encoder vs exhaustive", Duration::from_secs(10), || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x01);
        for _ in 0..200 {
            let len = rng.gen_range(1..=12);
            let string =
                CharString::new((0..len).map(|_| rng.gen_range(0..2u8)).collect());
            let n_extra = rng.gen_range(0..=6);
            let mut vocab = Vocabulary::new(Alphabet::BINARY);
            for _ in 0..n_extra {
                let tlen = rng.gen_range(2..=5);
                let tok = CharString::new((0..tlen).map(|_| rng.gen_range(0..2u8)).collect());
                vocab.insert(tok).unwrap();
            }
            let want = exhaustive_min(&vocab, string.symbols());
            let got = encoders::direct_count(&vocab, &string).unwrap();
            assert_eq!(got, want, "string {:?} vocab {:?}", string, vocab);
            let tokens = encoders::direct_encode(&vocab, &string).unwrap();
            assert_eq!(tokens.len(), want);
            assert_eq!(tokhard::core::concat(&tokens), string);
        }
    });
}

#[test]
fn criterion_02_table_one_replay() {
    criterion(2, "clause replay table", Duration::from_secs(1), || {
        let s1 = reductions::sep1();
        let s2 = reductions::sep2();
        let (y1, y2) = (reductions::y_gadget(1), reductions::y_gadget(2));
        let (n1, n2) = (reductions::n_gadget(1), reductions::n_gadget(2));
        let join = |parts: &[&CharString]| {
            parts
                .iter()
                .fold(CharString::empty(), |acc, p| acc.append(p))
        };
        // Clause strings for (l1, l2) over variables 1 and 2, one per
        // polarity case, with the expected final token count for the
        // conditions TT, FT, TF, FF on (value of var 1, value of var 2).
        let rows: [(CharString, [usize; 4]); 4] = [
            (join(&[&s1, &y1, &s1, &n2, &s1]), [2, 3, 2, 2]),
            (join(&[&s1, &y2, &s1, &n1, &s1]), [2, 2, 3, 2]),
            (join(&[&s2, &n1, &s1, &n2, &s1]), [3, 2, 2, 2]),
            (join(&[&s1, &y1, &s1, &y2, &s2]), [2, 2, 2, 3]),
        ];
        let conditions = [[true, true], [false, true], [true, false], [false, false]];
        for (case, (string, wants)) in rows.iter().enumerate() {
            for (cond, &want) in conditions.iter().zip(wants) {
                let s = Assignment::new(cond.to_vec());
                let merges = witnesses::bottomup_witness_merges(2, &s);
                let got = encoders::bottomup_apply(&merges, string).len();
                assert_eq!(
                    got, want,
                    "case {} condition {:?} on {:?}",
                    case + 1,
                    cond,
                    string
                );
            }
        }
    });
}

fn seeded_j2_instances(count: usize) -> Vec<tokhard::core::Max2SatInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x2345);
    (0..count).map(|_| harness::gen_max2sat(2, &mut rng)).collect()
}

#[test]
fn criterion_03_direct_forward_witness_equality() {
    criterion(3, "direct forward witness", Duration::from_secs(5), || {
        for inst in seeded_j2_instances(20) {
            let red = reductions::reduce_max2sat_to_d2tok(&inst).unwrap();
            for bits in 0..4 {
                let s = Assignment::from_bits(bits, 2);
                let vocab = witnesses::build_direct_witness(&inst, &s);
                let obj = encoders::direct_objective(&vocab, &red.dataset).unwrap();
                let want = big(329 * 2 + 3 * 3 - inst.count_satisfied(&s));
                assert_eq!(obj, want, "instance {:?} assignment {}", inst.clauses, bits);
            }
        }
    });
}

#[test]
fn criterion_04_bottomup_forward_witness_equality() {
    criterion(4, "bottom-up forward witness", Duration::from_secs(10), || {
        for inst in seeded_j2_instances(20) {
            let red = reductions::reduce_max2sat_to_b2tok(&inst).unwrap();
            for bits in 0..4 {
                let s = Assignment::from_bits(bits, 2);
                let merges = witnesses::build_bottomup_witness(&inst, &s);
                let obj = encoders::bottomup_objective(&merges, &red.dataset).unwrap();
                let want = big(5398 * 2 + 575 + 3 * 3 - inst.count_satisfied(&s));
                assert_eq!(obj, want, "instance {:?} assignment {}", inst.clauses, bits);
            }
        }
    });
}

#[test]
fn criterion_05_backward_consistency_binary() {
    criterion(5, "backward consistency", Duration::from_secs(60), || {
        // Compliant enumeration plus the 1-swap probe, both variants.
        for inst in seeded_j2_instances(20) {
            let direct = harness::verify_d2tok_equivalence(&inst).unwrap();
            assert!(direct.passed(), "{}", direct.render_text());
            let bottomup = harness::verify_b2tok_equivalence(&inst).unwrap();
            assert!(bottomup.passed(), "{}", bottomup.render_text());
        }
    });
}

/// Every simple graph with n <= 4 vertices and m <= 4 edges, as (n, edges).
fn small_graphs() -> Vec<(usize, Vec<(usize, usize)>)> {
    let mut graphs = Vec::new();
    for n in 1..=4usize {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                pairs.push((u, v));
            }
        }
        for mask in 0u32..1 << pairs.len() {
            if mask.count_ones() > 4 {
                continue;
            }
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            graphs.push((n, edges));
        }
    }
    graphs
}

#[test]
fn criterion_06_vertex_cover_agreement() {
    criterion(6, "vertex cover agreement", Duration::from_secs(120), || {
        for (n, edges) in small_graphs() {
            for k in 0..=n {
                let inst = VcInstance::new(n, edges.clone(), k).unwrap();
                let (_, min_size) = oracles::solve_vc_exact(&inst).unwrap();
                let red = reductions::reduce_vc_to_d1tok(&inst).unwrap();
                assert_eq!(red.delta, big((3 * n + 2 * edges.len() + 1 - k) as u64));
                let (_, delta_star) =
                    oracles::solve_unary_direct_exact(&red.dataset, red.kappa, None, &budget())
                        .unwrap();
                assert_eq!(
                    min_size <= k,
                    delta_star <= red.delta,
                    "n = {}, edges = {:?}, k = {}: delta* = {}, delta = {}",
                    n,
                    edges,
                    k,
                    delta_star,
                    red.delta
                );
            }
        }
    });
}

#[test]
fn criterion_07_addition_chain_agreement() {
    criterion(7, "addition chain agreement", Duration::from_secs(120), || {
        let mut sets: Vec<BTreeSet<u64>> = Vec::new();
        for t in 1..=24u64 {
            sets.push([t].into_iter().collect());
        }
        for a in 1..=24u64 {
            for b in a + 1..=24 {
                sets.push([a, b].into_iter().collect());
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x07);
        let pool: Vec<u64> = (2..=24).collect();
        for _ in 0..20 {
            let picks: Vec<u64> = pool
                .choose_multiple(&mut rng, 3)
                .copied()
                .collect();
            sets.push(picks.into_iter().collect());
        }
        for targets in sets {
            let inst = AddChainInstance::new(targets.clone(), 0).unwrap();
            let report = harness::verify_uope_equivalence(&inst).unwrap();
            assert!(report.passed(), "{}", report.render_text());
            assert_eq!(
                report.source_optimum, report.reduced_optimum,
                "targets {:?}",
                targets
            );
        }
    });
}

#[test]
fn criterion_08_zero_run_merges() {
    criterion(8, "zero-run merges", Duration::from_secs(30), || {
        for j in 1..=64usize {
            let merges = witnesses::build_zero_run_merges(j);
            assert_eq!(merges.len(), 2 * j - 1, "J = {}", j);
            for run_len in 1..=2 * j {
                let run = CharString::repeated(0, run_len);
                let parts = encoders::bottomup_apply(&merges, &run).len();
                assert_eq!(parts, 1, "J = {}, run 0^{}", j, run_len);
            }
        }
        // 2J-2 merges cannot collapse all 2J runs for small J.
        for j in 1..=3usize {
            let dataset = Dataset::explicit(
                Alphabet::BINARY,
                (1..=2 * j).map(|l| (CharString::repeated(0, l), 1)),
            )
            .unwrap();
            let (_, short) =
                oracles::solve_bottomup_exact(&dataset, 2 * j - 2, &budget()).unwrap();
            assert!(short > big(2 * j as u64), "J = {}: {} with 2J-2 merges", j, short);
            let (_, full) =
                oracles::solve_bottomup_exact(&dataset, 2 * j - 1, &budget()).unwrap();
            assert_eq!(full, big(2 * j as u64), "J = {}", j);
        }
    });
}

#[test]
fn criterion_09_gap_constants() {
    criterion(9, "gap constants", Duration::from_secs(1), || {
        let zero = BigRational::from(BigInt::from(0));
        let d2 = reductions::gap_ratio_d2tok(&zero);
        assert_eq!(d2, BigRational::new(BigInt::from(446213), BigInt::from(446212)));
        assert!(d2 > BigRational::new(BigInt::from(1_000_002), BigInt::from(1_000_000)));
        let b2 = reductions::gap_ratio_b2tok(&zero);
        assert_eq!(b2, BigRational::new(BigInt::from(7258949), BigInt::from(7258948)));
        assert!(b2 > BigRational::new(BigInt::from(10_000_001), BigInt::from(10_000_000)));
    });
}

#[test]
fn criterion_10_number_theory_sweep() {
    criterion(10, "sum-identity sweep", Duration::from_secs(30), || {
        let report = witnesses::check_sum_identities(300);
        assert!(report.is_empty(), "{:?}", report);
    });
}

/// Build the full coin-vector certificate for a witness length set.
fn certificate_for(
    dataset: &Dataset,
    lengths: &BTreeSet<BigUint>,
) -> UnaryCertificate {
    let mut vocab: Vec<BigUint> = lengths.iter().cloned().collect();
    if !vocab.contains(&big(1)) {
        vocab.insert(0, big(1));
    }
    let coin_set: BTreeSet<BigUint> = vocab.iter().cloned().collect();
    let assignments = dataset
        .entries()
        .iter()
        .map(|e| {
            let enc = unary_direct_encode(&coin_set, &e.payload.length()).unwrap();
            vocab
                .iter()
                .map(|l| {
                    enc.coins
                        .iter()
                        .find(|(coin, _)| coin == l)
                        .map(|(_, count)| count.clone())
                        .unwrap_or_else(|| big(0))
                })
                .collect()
        })
        .collect();
    UnaryCertificate {
        vocab_lengths: vocab,
        coin_assignments: assignments,
    }
}

#[test]
fn criterion_11_certificate_verification() {
    criterion(11, "certificate verification", Duration::from_secs(10), || {
        let mut healthy = Vec::new();
        for (n, edges) in small_graphs() {
            let probe = VcInstance::new(n, edges.clone(), n).unwrap();
            let (cover, min_size) = oracles::solve_vc_exact(&probe).unwrap();
            let inst = VcInstance::new(n, edges, min_size).unwrap();
            let red = reductions::reduce_vc_to_d1tok(&inst).unwrap();
            let lengths = witnesses::build_vc_witness(&inst, &cover).unwrap();
            let cert = certificate_for(&red.dataset, &lengths);
            let report =
                witnesses::verify_unary_certificate(&red.dataset, &cert, red.kappa, &red.delta);
            assert!(report.accepted, "n = {}: {:?}", inst.n, report.reasons);
            healthy.push((red, cert));
        }
        // Seeded single-field tamperings must all be rejected.
        let mut rng = ChaCha8Rng::seed_from_u64(0x11);
        for _ in 0..100 {
            let (red, cert) = &healthy[rng.gen_range(0..healthy.len())];
            let mut bad = cert.clone();
            let entry = rng.gen_range(0..bad.coin_assignments.len());
            let slot = rng.gen_range(0..bad.vocab_lengths.len());
            bad.coin_assignments[entry][slot] += big(1);
            let report =
                witnesses::verify_unary_certificate(&red.dataset, &bad, red.kappa, &red.delta);
            assert!(!report.accepted, "tampered certificate slipped through");
        }
    });
}

#[test]
fn criterion_12_vc_reduction_structure() {
    criterion(12, "unary reduction structure", Duration::from_secs(5), || {
        for (n, edges) in small_graphs() {
            let inst = VcInstance::new(n, edges, 0).unwrap();
            let red = reductions::reduce_vc_to_d1tok(&inst).unwrap();
            let layout = reductions::VcReductionLayout::new(inst.n, inst.m());
            reductions::verify_vc_reduction_structure(&inst, &layout, &red.dataset).unwrap();
            // Lengths are pairwise distinct (also asserted inside).
            let lengths: BTreeSet<BigUint> = red
                .dataset
                .entries()
                .iter()
                .map(|e| e.payload.length())
                .collect();
            assert_eq!(lengths.len(), red.dataset.len());
        }
    });
}
