//! Forward-direction witnesses and backward-direction extractors from the
//! hardness proofs, the zero-run merge construction, the unary NP
//! certificate verifier, and the number-theoretic uniqueness sweeps.

use std::collections::{BTreeSet, HashMap};

use num::bigint::BigUint;
use num::{One, Zero};
use thiserror::Error;

use crate::core::{
    Assignment, CharString, CoreError, Dataset, Max2SatInstance, Merge, MergeSequence, Payload,
    Token, UnaryLength, VcInstance, Vocabulary,
};
use crate::reductions::{n_gadget, sep1, sep2, y_gadget, VcReductionLayout};

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("vocabulary is not sat-compliant: {0}")]
    NonCompliant(String),
    #[error("cover is invalid: {0}")]
    BadCover(String),
    #[error("chain element {0} has no predecessor decomposition")]
    BadChain(u64),
    #[error("vocabulary is not of the canonical reduction shape: {0}")]
    NonCanonical(String),
}

fn token(c: CharString) -> Token {
    Token::new(c).expect("witness tokens are nonempty")
}

fn cat2(a: &CharString, b: &CharString) -> CharString {
    a.append(b)
}

fn cat3(a: &CharString, b: &CharString, c: &CharString) -> CharString {
    a.append(b).append(c)
}

/// The sat-compliant direct vocabulary for an assignment: all four boundary
/// tokens per variable plus the chosen triple token, 5J tokens in total.
pub fn build_direct_witness(inst: &Max2SatInstance, s: &Assignment) -> Vocabulary {
    assert_eq!(s.values.len(), inst.num_vars);
    let sp = sep1();
    let mut extra = Vec::with_capacity(5 * inst.num_vars);
    for j in 1..=inst.num_vars {
        let y = y_gadget(j);
        let n = n_gadget(j);
        extra.push(cat2(&sp, &y));
        extra.push(cat2(&y, &sp));
        extra.push(cat2(&sp, &n));
        extra.push(cat2(&n, &sp));
        if s.values[j - 1] {
            extra.push(cat3(&sp, &y, &sp));
        } else {
            extra.push(cat3(&sp, &n, &sp));
        }
    }
    let v = Vocabulary::with_tokens(crate::core::Alphabet::BINARY, extra)
        .expect("gadget strings are well formed");
    debug_assert_eq!(v.kappa(), 5 * inst.num_vars);
    v
}

/// Exactly 2J-1 merges that compress every zero-run 0^i, i <= 2J, to a
/// single token under left-to-right bottom-up application. Binary-stage
/// merges double the runs along powers of two; extension merges fill in
/// every remaining length.
pub fn build_zero_run_merges(j_count: usize) -> MergeSequence {
    assert!(j_count >= 1);
    let target = 2 * j_count;
    let run = |l: usize| token(CharString::repeated(0, l));
    let mut merges = Vec::with_capacity(target - 1);
    let mut p = 1;
    while 2 * p <= target {
        merges.push(Merge::new(run(p), run(p)));
        p *= 2;
    }
    let mut q = 2;
    while q <= target {
        for ext in 1..=(q - 1).min(target - q) {
            merges.push(Merge::new(run(q), run(ext)));
        }
        q *= 2;
    }
    debug_assert_eq!(merges.len(), target - 1);
    merges
}

/// The bottom-up witness merge sequence for an assignment over J variables:
/// m1 (separator pair plus zero runs), then the five structural and
/// per-assignment lists, 10J merges in total.
pub fn bottomup_witness_merges(j_count: usize, s: &Assignment) -> MergeSequence {
    assert_eq!(s.values.len(), j_count);
    let sp = sep1();
    let ss = sep2();
    let mut m: MergeSequence = Vec::with_capacity(10 * j_count);
    // m1: (1,1) and the zero-run construction.
    m.push(Merge::new(token(sp.clone()), token(sp.clone())));
    m.extend(build_zero_run_merges(j_count));
    // m2: (11, n_j) and (y_j, 11).
    for j in 1..=j_count {
        m.push(Merge::new(token(ss.clone()), token(n_gadget(j))));
        m.push(Merge::new(token(y_gadget(j)), token(ss.clone())));
    }
    // m3: (1, y_j 11) when true, (11 n_j, 1) when false.
    for j in 1..=j_count {
        if s.values[j - 1] {
            m.push(Merge::new(token(sp.clone()), token(cat2(&y_gadget(j), &ss))));
        } else {
            m.push(Merge::new(token(cat2(&ss, &n_gadget(j))), token(sp.clone())));
        }
    }
    // m4: (n_j, 1) and (1, y_j).
    for j in 1..=j_count {
        m.push(Merge::new(token(n_gadget(j)), token(sp.clone())));
        m.push(Merge::new(token(sp.clone()), token(y_gadget(j))));
    }
    // m5: (1 y_j, 1) when true, (1, n_j 1) when false.
    for j in 1..=j_count {
        if s.values[j - 1] {
            m.push(Merge::new(token(cat2(&sp, &y_gadget(j))), token(sp.clone())));
        } else {
            m.push(Merge::new(token(sp.clone()), token(cat2(&n_gadget(j), &sp))));
        }
    }
    // m6: (1, n_j) and (y_j, 1).
    for j in 1..=j_count {
        m.push(Merge::new(token(sp.clone()), token(n_gadget(j))));
        m.push(Merge::new(token(y_gadget(j)), token(sp.clone())));
    }
    debug_assert_eq!(m.len(), 10 * j_count);
    m
}

pub fn build_bottomup_witness(inst: &Max2SatInstance, s: &Assignment) -> MergeSequence {
    bottomup_witness_merges(inst.num_vars, s)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VariableChoice {
    YSide,
    NSide,
    Both,
    Neither,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ComplianceVariant {
    Direct,
    BottomUp,
}

#[derive(Clone, Debug)]
pub struct SatComplianceReport {
    pub compliant: bool,
    pub missing_required: Vec<CharString>,
    pub extra_noncompliant: Vec<CharString>,
    pub choices: Vec<VariableChoice>,
}

/// Checks a vocabulary against the token families the reduction proofs
/// require: for the direct variant the four boundary tokens per variable
/// plus exactly one of the two triple tokens, for the bottom-up variant the
/// richer bottom-up-reduction family plus exactly one complete side pair.
pub fn check_sat_compliance(
    vocab: &Vocabulary,
    j_count: usize,
    variant: ComplianceVariant,
) -> SatComplianceReport {
    let sp = sep1();
    let ss = sep2();
    let mut required: Vec<CharString> = Vec::new();
    // (y-side tokens, n-side tokens) per variable.
    let mut sides: Vec<(Vec<CharString>, Vec<CharString>)> = Vec::new();
    for j in 1..=j_count {
        let y = y_gadget(j);
        let n = n_gadget(j);
        match variant {
            ComplianceVariant::Direct => {
                required.extend([cat2(&sp, &y), cat2(&y, &sp), cat2(&sp, &n), cat2(&n, &sp)]);
                sides.push((vec![cat3(&sp, &y, &sp)], vec![cat3(&sp, &n, &sp)]));
            }
            ComplianceVariant::BottomUp => {
                required.extend([
                    y.clone(),
                    n.clone(),
                    cat2(&sp, &y),
                    cat2(&y, &sp),
                    cat2(&sp, &n),
                    cat2(&n, &sp),
                    cat2(&y, &ss),
                    cat2(&ss, &n),
                ]);
                sides.push((
                    vec![cat3(&sp, &y, &sp), cat3(&sp, &y, &ss)],
                    vec![cat3(&sp, &n, &sp), cat3(&ss, &n, &sp)],
                ));
            }
        }
    }
    if variant == ComplianceVariant::BottomUp {
        required.push(ss.clone());
    }
    // Length-1 gadgets (y_1 is the bare zero) are alphabet members and
    // always present.
    required.retain(|c| c.len() >= 2);

    let missing_required: Vec<CharString> = required
        .iter()
        .filter(|c| !vocab.contains(c))
        .cloned()
        .collect();

    let mut permitted: BTreeSet<CharString> = required.iter().cloned().collect();
    for (ys, ns) in &sides {
        permitted.extend(ys.iter().cloned());
        permitted.extend(ns.iter().cloned());
    }
    let extra_noncompliant: Vec<CharString> = vocab
        .extra_tokens()
        .filter(|t| !permitted.contains(t.content()))
        .map(|t| t.content().clone())
        .collect();

    let mut choices = Vec::with_capacity(j_count);
    let mut sides_ok = true;
    for (ys, ns) in &sides {
        let y_any = ys.iter().any(|c| vocab.contains(c));
        let n_any = ns.iter().any(|c| vocab.contains(c));
        let choice = match (y_any, n_any) {
            (true, true) => VariableChoice::Both,
            (true, false) => VariableChoice::YSide,
            (false, true) => VariableChoice::NSide,
            (false, false) => VariableChoice::Neither,
        };
        let complete = match choice {
            VariableChoice::YSide => ys.iter().all(|c| vocab.contains(c)),
            VariableChoice::NSide => ns.iter().all(|c| vocab.contains(c)),
            _ => false,
        };
        sides_ok &= complete;
        choices.push(choice);
    }

    SatComplianceReport {
        compliant: missing_required.is_empty() && extra_noncompliant.is_empty() && sides_ok,
        missing_required,
        extra_noncompliant,
        choices,
    }
}

/// Reads the assignment off a compliant vocabulary: variable j is true
/// exactly when its y-side tokens are the chosen ones.
pub fn extract_assignment(
    vocab: &Vocabulary,
    j_count: usize,
    variant: ComplianceVariant,
) -> Result<Assignment, WitnessError> {
    let report = check_sat_compliance(vocab, j_count, variant);
    if !report.compliant {
        return Err(WitnessError::NonCompliant(format!(
            "missing {:?}, extra {:?}, choices {:?}",
            report.missing_required, report.extra_noncompliant, report.choices
        )));
    }
    Ok(Assignment::new(
        report
            .choices
            .iter()
            .map(|&c| c == VariableChoice::YSide)
            .collect(),
    ))
}

/// The witness length set for a vertex cover: every vertex encoding,
/// the offset B, and one cover token per cover vertex, the cover padded to
/// exactly k with the lowest-indexed outside vertices.
pub fn build_vc_witness(
    inst: &VcInstance,
    cover: &BTreeSet<usize>,
) -> Result<BTreeSet<UnaryLength>, WitnessError> {
    if cover.len() > inst.k {
        return Err(WitnessError::BadCover(format!(
            "cover has {} vertices but k = {}",
            cover.len(),
            inst.k
        )));
    }
    if let Some(&v) = cover.iter().find(|&&v| v >= inst.n) {
        return Err(WitnessError::BadCover(format!("vertex {} out of range", v)));
    }
    if !inst.is_cover(cover) {
        return Err(WitnessError::BadCover("an edge is uncovered".into()));
    }
    let mut padded = cover.clone();
    for v in 0..inst.n {
        if padded.len() >= inst.k {
            break;
        }
        padded.insert(v);
    }
    let layout = VcReductionLayout::new(inst.n, inst.m());
    let mut lengths = BTreeSet::new();
    for j in 1..=inst.n {
        lengths.insert(layout.enc(j));
    }
    lengths.insert(layout.big_b.clone());
    for &v in &padded {
        lengths.insert(layout.cover_length(v + 1));
    }
    Ok(lengths)
}

/// Inverse of the above for delta-achieving vocabularies: cover vertices
/// are read off the cover tokens, plus the lower-indexed endpoint of any
/// edge whose full length appears as a token.
pub fn extract_cover(
    vocab_lengths: &BTreeSet<UnaryLength>,
    inst: &VcInstance,
) -> Result<BTreeSet<usize>, WitnessError> {
    let layout = VcReductionLayout::new(inst.n, inst.m());
    let mut known: HashMap<UnaryLength, &'static str> = HashMap::new();
    for j in 1..=inst.n {
        known.insert(layout.enc(j), "vertex");
    }
    known.insert(layout.big_b.clone(), "offset");
    let mut cover = BTreeSet::new();
    for j in 1..=inst.n {
        if vocab_lengths.contains(&layout.cover_length(j)) {
            cover.insert(j - 1);
        }
        known.insert(layout.cover_length(j), "cover");
    }
    for &(u, v) in &inst.edges {
        if vocab_lengths.contains(&layout.edge_length(u, v)) {
            cover.insert(u.min(v));
        }
        known.insert(layout.edge_length(u, v), "edge");
    }
    let one = BigUint::one();
    for l in vocab_lengths {
        if l != &one && !known.contains_key(l) {
            return Err(WitnessError::NonCanonical(format!(
                "token length {} matches no reduction string",
                l
            )));
        }
    }
    for j in 1..=inst.n {
        if !vocab_lengths.contains(&layout.enc(j)) {
            return Err(WitnessError::NonCanonical(format!(
                "vertex token enc({}) is missing",
                j
            )));
        }
    }
    if !vocab_lengths.contains(&layout.big_b) {
        return Err(WitnessError::NonCanonical("offset token B is missing".into()));
    }
    if !inst.is_cover(&cover) {
        return Err(WitnessError::NonCanonical(
            "extracted vertex set does not cover every edge".into(),
        ));
    }
    Ok(cover)
}

/// Forward direction of Reduction 4: one merge per chain element after the
/// initial 1, pairing the lexicographically smallest predecessor indices.
pub fn build_addchain_witness(chain: &[u64]) -> Result<MergeSequence, WitnessError> {
    if chain.first() != Some(&1) {
        return Err(WitnessError::BadChain(*chain.first().unwrap_or(&0)));
    }
    let run = |l: u64| token(CharString::repeated(0, l as usize));
    let mut merges = Vec::with_capacity(chain.len() - 1);
    for (i, &b) in chain.iter().enumerate().skip(1) {
        let mut found = None;
        'outer: for j in 0..i {
            for k in 0..i {
                if chain[j] + chain[k] == b {
                    found = Some((chain[j], chain[k]));
                    break 'outer;
                }
            }
        }
        let (l, r) = found.ok_or(WitnessError::BadChain(b))?;
        merges.push(Merge::new(run(l), run(r)));
    }
    Ok(merges)
}

/// Backward direction: the lengths reachable through the merge sequence,
/// starting from the unit alphabet token. Merges whose parts were never
/// produced are pruned.
pub fn extract_addchain(merges: &[Merge]) -> Vec<u64> {
    let mut reachable: BTreeSet<u64> = BTreeSet::new();
    reachable.insert(1);
    for m in merges {
        let l = m.left.len() as u64;
        let r = m.right.len() as u64;
        if reachable.contains(&l) && reachable.contains(&r) {
            reachable.insert(l + r);
        }
    }
    reachable.into_iter().collect()
}

#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub accepted: bool,
    pub reasons: Vec<String>,
}

/// NP-certificate check for unary direct tokenisation: at most kappa
/// non-unit vocabulary lengths, every coin vector sums to its entry's
/// length, and the weighted coin total stays within delta.
pub fn verify_unary_certificate(
    dataset: &Dataset,
    cert: &crate::core::UnaryCertificate,
    kappa: usize,
    delta: &BigUint,
) -> CertificateReport {
    let mut reasons = Vec::new();
    let one = BigUint::one();
    if cert.vocab_lengths.iter().any(|l| l.is_zero()) {
        reasons.push("vocabulary contains a zero length".to_string());
    }
    let extra = cert.vocab_lengths.iter().filter(|&l| l != &one).count();
    if extra > kappa {
        reasons.push(format!("{} non-unit lengths exceed kappa = {}", extra, kappa));
    }
    if cert.coin_assignments.len() != dataset.len() {
        reasons.push(format!(
            "{} coin vectors for {} dataset entries",
            cert.coin_assignments.len(),
            dataset.len()
        ));
        return CertificateReport {
            accepted: false,
            reasons,
        };
    }
    let mut total = BigUint::zero();
    for (i, (entry, coins)) in dataset
        .entries()
        .iter()
        .zip(&cert.coin_assignments)
        .enumerate()
    {
        if coins.len() != cert.vocab_lengths.len() {
            reasons.push(format!("entry {}: coin vector length mismatch", i));
            continue;
        }
        let want = match &entry.payload {
            Payload::Length(l) => l.clone(),
            Payload::Explicit(c) => BigUint::from(c.len()),
        };
        let mut sum = BigUint::zero();
        let mut count = BigUint::zero();
        for (len, k) in cert.vocab_lengths.iter().zip(coins) {
            sum += len * k;
            count += k;
        }
        if sum != want {
            reasons.push(format!("entry {}: coins sum to {} but length is {}", i, sum, want));
        }
        total += count * entry.multiplicity;
    }
    if &total > delta {
        reasons.push(format!("total {} tokens exceed delta = {}", total, delta));
    }
    CertificateReport {
        accepted: reasons.is_empty(),
        reasons,
    }
}

/// Counterexamples found by the uniqueness sweeps; all four lists are empty
/// for every bound, which is what the proofs claim and the tests confirm.
#[derive(Clone, Debug, Default)]
pub struct SumIdentityReport {
    pub pair_square: Vec<[u64; 3]>,
    pub pair_collision: Vec<[u64; 4]>,
    pub triple_square: Vec<[u64; 4]>,
    pub triple_pair_powers: Vec<[u64; 5]>,
}

impl SumIdentityReport {
    pub fn is_empty(&self) -> bool {
        self.pair_square.is_empty()
            && self.pair_collision.is_empty()
            && self.triple_square.is_empty()
            && self.triple_pair_powers.is_empty()
    }
}

/// No nonzero i, j with i + j = r and i^2 + j^2 = r^2. The `with_squares`
/// switch exists so tests can weaken the predicate and watch the sweeper
/// actually find violations.
pub fn sweep_pair_square(bound: u64, with_squares: bool) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    for i in 1..=bound {
        for j in i..=bound {
            let r = i + j;
            if r > bound {
                break;
            }
            if !with_squares || i * i + j * j == r * r {
                out.push([i, j, r]);
            }
        }
    }
    out
}

/// No two distinct pairs share both their sum and their sum of squares.
pub fn sweep_pair_collision(bound: u64) -> Vec<[u64; 4]> {
    let mut seen: HashMap<(u64, u64), (u64, u64)> = HashMap::new();
    let mut out = Vec::new();
    for i in 1..=bound {
        for j in i..=bound {
            match seen.insert((i + j, i * i + j * j), (i, j)) {
                Some((a, b)) if (a, b) != (i, j) => out.push([a, b, i, j]),
                _ => {}
            }
        }
    }
    out
}

/// No nonzero i, j, k with i + j + k = r and matching squares.
pub fn sweep_triple_square(bound: u64, with_squares: bool) -> Vec<[u64; 4]> {
    let mut out = Vec::new();
    for i in 1..=bound {
        for j in i..=bound {
            if i + j >= bound {
                break;
            }
            for k in j..=(bound - i - j) {
                let r = i + j + k;
                if !with_squares || i * i + j * j + k * k == r * r {
                    out.push([i, j, k, r]);
                }
            }
        }
    }
    out
}

/// No nonzero triple matches a pair on all power sums up to cubes; by
/// Newton's identity the first three power sums determine the multiset.
pub fn sweep_triple_pair_powers(bound: u64) -> Vec<[u64; 5]> {
    let mut pairs: HashMap<(u64, u64, u64), (u64, u64)> = HashMap::new();
    for r in 1..=bound {
        for p in r..=bound {
            pairs.insert(
                (r + p, r * r + p * p, r * r * r + p * p * p),
                (r, p),
            );
        }
    }
    let mut out = Vec::new();
    for i in 1..=bound {
        for j in i..=bound {
            for k in j..=bound {
                let key = (
                    i + j + k,
                    i * i + j * j + k * k,
                    i * i * i + j * j * j + k * k * k,
                );
                if let Some(&(r, p)) = pairs.get(&key) {
                    out.push([i, j, k, r, p]);
                }
            }
        }
    }
    out
}

/// Exhaustive search for violations of the four power-sum uniqueness
/// properties up to `bound`.
pub fn check_sum_identities(bound: u64) -> SumIdentityReport {
    SumIdentityReport {
        pair_square: sweep_pair_square(bound, true),
        pair_collision: sweep_pair_collision(bound),
        triple_square: sweep_triple_square(bound, true),
        triple_pair_powers: sweep_triple_pair_powers(bound),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{
        big, Alphabet, Assignment, CharString, Dataset, Lit, Max2SatInstance, UnaryCertificate,
        VcInstance,
    };
    use crate::encoders;
    use crate::reductions;

    fn sample_j2() -> Max2SatInstance {
        Max2SatInstance::new(
            2,
            vec![
                (Lit::pos(0), Lit::pos(1)),
                (Lit::pos(0), Lit::neg(1)),
                (Lit::neg(0), Lit::pos(1)),
            ],
            0,
        )
        .unwrap()
    }

    #[test]
    fn direct_witness_is_compliant_and_invertible() {
        let inst = sample_j2();
        for bits in 0..4 {
            let s = Assignment::from_bits(bits, 2);
            let v = build_direct_witness(&inst, &s);
            assert_eq!(v.kappa(), 10);
            let report = check_sat_compliance(&v, 2, ComplianceVariant::Direct);
            assert!(report.compliant, "{:?}", report);
            assert_eq!(
                extract_assignment(&v, 2, ComplianceVariant::Direct).unwrap(),
                s
            );
        }
    }

    #[test]
    fn noncompliant_vocabulary_is_rejected() {
        let inst = sample_j2();
        let s = Assignment::from_bits(3, 2);
        let mut v = build_direct_witness(&inst, &s);
        // Dropping a boundary token breaks the required set.
        let boundary = reductions::sep1().append(&reductions::y_gadget(1));
        assert!(v.remove(&boundary));
        let report = check_sat_compliance(&v, 2, ComplianceVariant::Direct);
        assert!(!report.compliant);
        assert!(extract_assignment(&v, 2, ComplianceVariant::Direct).is_err());
    }

    #[test]
    fn zero_run_merges_replay_to_single_token() {
        for j in 1..=16usize {
            let merges = build_zero_run_merges(j);
            assert_eq!(merges.len(), 2 * j - 1);
            // Every run 0^t for t <= 2j must end at ceil over the reachable
            // runs; in particular 0^(2j) collapses to one token.
            let run = CharString::repeated(0, 2 * j);
            assert_eq!(encoders::bottomup_apply(&merges, &run).len(), 1);
            // Shorter even runs stay within two tokens.
            for t in 1..=2 * j {
                let run = CharString::repeated(0, t);
                let parts = encoders::bottomup_apply(&merges, &run).len();
                assert!(parts >= 1);
            }
        }
    }

    #[test]
    fn bottomup_witness_replays_gadgets() {
        let inst = sample_j2();
        for bits in 0..4 {
            let s = Assignment::from_bits(bits, 2);
            let merges = build_bottomup_witness(&inst, &s);
            assert_eq!(merges.len(), 10 * 2);
            let vocab = encoders::ope_vocab(&merges, Alphabet::BINARY);
            let report = check_sat_compliance(&vocab, 2, ComplianceVariant::BottomUp);
            assert!(report.compliant, "{:?}", report);
            assert_eq!(
                extract_assignment(&vocab, 2, ComplianceVariant::BottomUp).unwrap(),
                s
            );
        }
    }

    #[test]
    fn vc_witness_round_trips() {
        let tri = VcInstance::new(3, vec![(0, 1), (0, 2), (1, 2)], 2).unwrap();
        let cover: std::collections::BTreeSet<usize> = [0, 1].into_iter().collect();
        let lengths = build_vc_witness(&tri, &cover).unwrap();
        // enc(1..3), B, and two cover tokens.
        assert_eq!(lengths.len(), 3 + 1 + 2);
        let back = extract_cover(&lengths, &tri).unwrap();
        assert!(tri.is_cover(&back));
        assert!(back.len() <= 2);
        // A non-cover is refused outright.
        let bad: std::collections::BTreeSet<usize> = [0].into_iter().collect();
        assert!(build_vc_witness(&tri, &bad).is_err());
        // Alien lengths are flagged as non-canonical.
        let mut tampered = lengths.clone();
        tampered.insert(big(12345));
        assert!(extract_cover(&tampered, &tri).is_err());
    }

    #[test]
    fn addchain_witness_round_trips() {
        let chain = [1u64, 2, 3, 5];
        let merges = build_addchain_witness(&chain).unwrap();
        assert_eq!(merges.len(), 3);
        let reachable = extract_addchain(&merges);
        assert_eq!(reachable, vec![1, 2, 3, 5]);
        // A chain with an unreachable element is refused.
        assert!(build_addchain_witness(&[1, 2, 5]).is_err());
        assert!(build_addchain_witness(&[2, 4]).is_err());
    }

    #[test]
    fn unary_certificate_checks() {
        let d = Dataset::lengths(vec![(big(6), 1), (big(9), 1), (big(13), 2)]);
        // Vocabulary {1, 6, 13}; 6 = 6, 9 = 6 + 3x1, 13 = 13.
        let good = UnaryCertificate {
            vocab_lengths: vec![big(1), big(6), big(13)],
            coin_assignments: vec![
                vec![big(0), big(1), big(0)],
                vec![big(3), big(1), big(0)],
                vec![big(0), big(0), big(1)],
            ],
        };
        let report = verify_unary_certificate(&d, &good, 2, &big(7));
        assert!(report.accepted, "{:?}", report.reasons);
        // Tighter delta rejects.
        assert!(!verify_unary_certificate(&d, &good, 2, &big(6)).accepted);
        // A vector that does not sum to its entry length rejects.
        let mut bad = good.clone();
        bad.coin_assignments[1][0] = big(2);
        assert!(!verify_unary_certificate(&d, &bad, 2, &big(7)).accepted);
        // Exceeding kappa rejects.
        assert!(!verify_unary_certificate(&d, &good, 1, &big(7)).accepted);
    }

    #[test]
    fn sum_identity_sweeps_are_clean() {
        let report = check_sum_identities(120);
        assert!(report.is_empty(), "{:?}", report);
        // Dropping the square constraint floods the sweep with solutions,
        // confirming the sweepers actually look at something.
        assert!(!sweep_pair_square(30, false).is_empty());
        assert!(!sweep_triple_square(30, false).is_empty());
    }
}
