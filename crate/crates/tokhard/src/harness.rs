//! End-to-end reduction-equivalence pipelines, the greedy BPE baseline,
//! random instance generation, and report rendering.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num::bigint::BigUint;
use num::rational::BigRational;
use num::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::core::{
    approximation_ratio, AddChainInstance, Assignment, CharString, CoreError, Dataset, Lit,
    Max2SatInstance, Merge, MergeSequence, Mode, ObjectiveKind, Payload, Token, VcInstance,
};
use crate::encoders::{self, EncodeError};
use crate::oracles::{self, OracleError, SearchBudget};
use crate::reductions::{self, ReductionError};
use crate::witnesses;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("instance too large for the verification pipeline: {0}")]
    TooLarge(String),
}

/// Outcome of one equivalence pipeline. `failures` is empty exactly when
/// every forward replay, backward enumeration, and threshold sweep agreed.
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub instance: String,
    pub source_optimum: BigUint,
    pub reduced_optimum: BigUint,
    pub predicted_delta: BigUint,
    pub method: &'static str,
    pub failures: Vec<String>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "instance:        {}", self.instance);
        let _ = writeln!(out, "source optimum:  {}", self.source_optimum);
        let _ = writeln!(out, "reduced optimum: {}", self.reduced_optimum);
        let _ = writeln!(out, "predicted delta: {}", self.predicted_delta);
        let _ = writeln!(out, "method:          {}", self.method);
        for f in &self.failures {
            let _ = writeln!(out, "FAIL: {}", f);
        }
        let _ = writeln!(out, "verdict:         {}", if self.passed() { "PASS" } else { "FAILED" });
        out
    }

    pub fn render_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "instance={}", self.instance);
        let _ = writeln!(out, "source_optimum={}", self.source_optimum);
        let _ = writeln!(out, "reduced_optimum={}", self.reduced_optimum);
        let _ = writeln!(out, "predicted_delta={}", self.predicted_delta);
        let _ = writeln!(out, "method={}", self.method);
        let _ = writeln!(out, "failures={}", self.failures.len());
        for f in &self.failures {
            let _ = writeln!(out, "failure={}", f);
        }
        let _ = writeln!(out, "verdict={}", if self.passed() { "PASS" } else { "FAILED" });
        out
    }
}

fn all_assignments(j_count: usize) -> impl Iterator<Item = Assignment> {
    (0..1u64 << j_count).map(move |bits| Assignment::from_bits(bits, j_count))
}

/// Direct-reduction equivalence: forward witness replay for every
/// assignment, compliant vocabulary enumeration, a 1-swap local probe, and
/// the full threshold sweep. The backward evidence is the declared
/// compliant-enumeration level, not an unrestricted kappa-subset search.
pub fn verify_d2tok_equivalence(inst: &Max2SatInstance) -> Result<EquivalenceReport, HarnessError> {
    let j_count = inst.num_vars;
    let c_count = inst.num_clauses();
    if j_count > 16 {
        return Err(HarnessError::TooLarge(format!("J = {}", j_count)));
    }
    let (_, f_star) = oracles::solve_max2sat_exact(inst)?;
    let reduced = reductions::reduce_max2sat_to_d2tok(&Max2SatInstance {
        target: 0,
        ..inst.clone()
    })?;
    let dataset = &reduced.dataset;
    let base = 329 * j_count as u64 + 3 * c_count as u64;
    let mut failures = Vec::new();

    // Forward equality for every assignment, which is also the compliant
    // enumeration: the compliant vocabularies are exactly the witnesses.
    let mut best = BigUint::from(base);
    let mut best_s = Assignment::from_bits(0, j_count);
    for s in all_assignments(j_count) {
        let vocab = witnesses::build_direct_witness(inst, &s);
        let obj = encoders::direct_objective(&vocab, dataset)?;
        let expected = BigUint::from(base - inst.count_satisfied(&s));
        if obj != expected {
            failures.push(format!(
                "assignment {:?}: witness objective {} != {}",
                s.values, obj, expected
            ));
        }
        let round_trip =
            witnesses::extract_assignment(&vocab, j_count, witnesses::ComplianceVariant::Direct);
        match round_trip {
            Ok(back) if back == s => {}
            other => failures.push(format!("assignment round trip failed: {:?}", other)),
        }
        if obj < best {
            best = obj;
            best_s = s;
        }
    }
    let predicted = BigUint::from(base - f_star);
    if best != predicted {
        failures.push(format!(
            "compliant-enumeration optimum {} != predicted {}",
            best, predicted
        ));
    }

    // 1-swap probe around the best compliant vocabulary.
    let best_vocab = witnesses::build_direct_witness(inst, &best_s);
    for f in one_swap_probe(&best_vocab, dataset, &best)? {
        failures.push(f);
    }

    // Threshold sweep with monotonicity.
    let mut prev_yes = true;
    for f in 0..=c_count as u64 {
        let src_yes = f <= f_star;
        let delta_f = BigUint::from(base - f);
        let tok_yes = best <= delta_f;
        if src_yes != tok_yes {
            failures.push(format!(
                "threshold F = {}: source {} but tokenisation {}",
                f, src_yes, tok_yes
            ));
        }
        if src_yes && !prev_yes {
            failures.push(format!("threshold F = {}: YES after NO breaks monotonicity", f));
        }
        prev_yes = src_yes;
    }

    Ok(EquivalenceReport {
        instance: format!("m2s J={} C={}", j_count, c_count),
        source_optimum: BigUint::from(f_star),
        reduced_optimum: best,
        predicted_delta: predicted,
        method: "compliant-enumeration",
        failures,
    })
}

/// Swapping any single vocabulary token for any unused substring candidate
/// must not improve on `best`; returns the violations.
fn one_swap_probe(
    vocab: &crate::core::Vocabulary,
    dataset: &Dataset,
    best: &BigUint,
) -> Result<Vec<String>, HarnessError> {
    let pool = oracles::substring_candidates(dataset)?;
    let mut failures = Vec::new();
    let extra: Vec<CharString> = vocab.extra_tokens().map(|t| t.content().clone()).collect();
    for out_tok in &extra {
        for cand in &pool {
            if vocab.contains(cand) {
                continue;
            }
            let mut probe = vocab.clone();
            probe.remove(out_tok);
            probe.insert(cand.clone())?;
            let obj = encoders::direct_objective(&probe, dataset)?;
            if &obj < best {
                failures.push(format!(
                    "1-swap {:?} -> {:?} improves {} to {}",
                    out_tok, cand, best, obj
                ));
            }
        }
    }
    Ok(failures)
}

/// Bottom-up-reduction equivalence: witness replay and per-clause token
/// counts for every assignment, compliant enumeration over the merge-extracted
/// vocabularies, direct/bottom-up agreement, a 1-swap
/// probe, and the threshold sweep.
pub fn verify_b2tok_equivalence(inst: &Max2SatInstance) -> Result<EquivalenceReport, HarnessError> {
    let j_count = inst.num_vars;
    let c_count = inst.num_clauses();
    if j_count > 12 {
        return Err(HarnessError::TooLarge(format!("J = {}", j_count)));
    }
    let (_, f_star) = oracles::solve_max2sat_exact(inst)?;
    let reduced = reductions::reduce_max2sat_to_b2tok(&Max2SatInstance {
        target: 0,
        ..inst.clone()
    })?;
    let dataset = &reduced.dataset;
    let base = 5398 * j_count as u64 + 575 + 3 * c_count as u64;
    let mut failures = Vec::new();

    if inst.clauses.iter().any(|&(l1, l2)| l1.var == l2.var) {
        failures.push("a clause pairs a variable with itself; replay counts assume distinct".into());
    }

    // Clause strings are the trailing C entries of the reduced dataset.
    let clause_strings: Vec<&CharString> = dataset.entries()[dataset.len() - c_count..]
        .iter()
        .map(|e| match &e.payload {
            Payload::Explicit(c) => c,
            Payload::Length(_) => unreachable!("the bottom-up reduction emits explicit strings"),
        })
        .collect();

    let mut best = BigUint::from(base);
    let mut best_s = Assignment::from_bits(0, j_count);
    for s in all_assignments(j_count) {
        let merges = witnesses::build_bottomup_witness(inst, &s);
        let obj = encoders::bottomup_objective(&merges, dataset)?;
        let expected = BigUint::from(base - inst.count_satisfied(&s));
        if obj != expected {
            failures.push(format!(
                "assignment {:?}: witness objective {} != {}",
                s.values, obj, expected
            ));
        }
        // A satisfied clause string ends at 2 tokens, an unsatisfied
        // one at 3.
        for (ci, (&(l1, l2), cstr)) in inst.clauses.iter().zip(&clause_strings).enumerate() {
            let want = if l1.eval(&s) || l2.eval(&s) { 2 } else { 3 };
            let got = encoders::bottomup_apply(&merges, cstr).len();
            if got != want {
                failures.push(format!(
                    "clause {} under {:?}: {} tokens, expected {}",
                    ci, s.values, got, want
                ));
            }
        }
        // The merge-extracted vocabulary applied optimally performs
        // exactly as well here.
        let vocab = encoders::ope_vocab(&merges, dataset.alphabet());
        let direct = encoders::direct_objective(&vocab, dataset)?;
        if direct != obj {
            failures.push(format!(
                "assignment {:?}: direct {} != bottom-up {}",
                s.values, direct, obj
            ));
        }
        let round_trip =
            witnesses::extract_assignment(&vocab, j_count, witnesses::ComplianceVariant::BottomUp);
        match round_trip {
            Ok(back) if back == s => {}
            other => failures.push(format!("assignment round trip failed: {:?}", other)),
        }
        if obj < best {
            best = obj;
            best_s = s;
        }
    }
    let predicted = BigUint::from(base - f_star);
    if best != predicted {
        failures.push(format!(
            "compliant-enumeration optimum {} != predicted {}",
            best, predicted
        ));
    }

    let best_vocab = encoders::ope_vocab(
        &witnesses::build_bottomup_witness(inst, &best_s),
        dataset.alphabet(),
    );
    for f in one_swap_probe(&best_vocab, dataset, &best)? {
        failures.push(f);
    }

    let mut prev_yes = true;
    for f in 0..=c_count as u64 {
        let src_yes = f <= f_star;
        let tok_yes = best <= BigUint::from(base - f);
        if src_yes != tok_yes {
            failures.push(format!(
                "threshold F = {}: source {} but tokenisation {}",
                f, src_yes, tok_yes
            ));
        }
        if src_yes && !prev_yes {
            failures.push(format!("threshold F = {}: YES after NO breaks monotonicity", f));
        }
        prev_yes = src_yes;
    }

    Ok(EquivalenceReport {
        instance: format!("m2s J={} C={}", j_count, c_count),
        source_optimum: BigUint::from(f_star),
        reduced_optimum: best,
        predicted_delta: predicted,
        method: "compliant-enumeration",
        failures,
    })
}

/// Vertex-cover equivalence across every budget k in 0..=n, comparing the
/// vertex-cover oracle against the restricted unary oracle on the reduced
/// instance. Also replays the witness vocabulary and the cover extraction.
pub fn verify_d1tok_equivalence(inst: &VcInstance) -> Result<EquivalenceReport, HarnessError> {
    if inst.n > 6 {
        return Err(HarnessError::TooLarge(format!("n = {}", inst.n)));
    }
    let budget = SearchBudget::default();
    let (min_cover, min_size) = oracles::solve_vc_exact(inst)?;
    let mut failures = Vec::new();
    let mut at_min: Option<BigUint> = None;
    let mut prev_delta_star: Option<BigUint> = None;

    for k in 0..=inst.n {
        let sub = VcInstance {
            k,
            ..inst.clone()
        };
        let reduced = reductions::reduce_vc_to_d1tok(&sub)?;
        let (lengths, delta_star) =
            oracles::solve_unary_direct_exact(&reduced.dataset, reduced.kappa, None, &budget)?;
        let src_yes = min_size <= k;
        let tok_yes = delta_star <= reduced.delta;
        if src_yes != tok_yes {
            failures.push(format!(
                "k = {}: cover {} but tokenisation {} (delta* = {}, delta = {})",
                k, src_yes, tok_yes, delta_star, reduced.delta
            ));
        }
        if let Some(prev) = &prev_delta_star {
            if &delta_star > prev {
                failures.push(format!("k = {}: delta* grew from {} to {}", k, prev, delta_star));
            }
        }
        prev_delta_star = Some(delta_star.clone());

        if src_yes {
            // Forward witness achieves the threshold exactly.
            let witness = witnesses::build_vc_witness(&sub, &min_cover)
                .map_err(|e| HarnessError::TooLarge(e.to_string()))?;
            let obj = encoders::unary_objective(&with_unit(&witness), &reduced.dataset)?;
            if obj != reduced.delta {
                failures.push(format!(
                    "k = {}: witness objective {} != delta {}",
                    k, obj, reduced.delta
                ));
            }
            // Backward: the oracle's own solution extracts to a cover.
            let mut full = with_unit(&lengths);
            full.extend(lengths.iter().cloned());
            match witnesses::extract_cover(&full, &sub) {
                Ok(cover) => {
                    if cover.len() > k {
                        failures.push(format!(
                            "k = {}: extracted cover of size {}",
                            k,
                            cover.len()
                        ));
                    }
                }
                Err(e) => failures.push(format!("k = {}: cover extraction failed: {}", k, e)),
            }
        }
        if k == min_size {
            at_min = Some(delta_star);
        }
    }

    let reduced_optimum = at_min.expect("loop visited k = min_size");
    let predicted = BigUint::from((3 * inst.n + 2 * inst.m() + 1 - min_size) as u64);
    Ok(EquivalenceReport {
        instance: format!("vc n={} m={}", inst.n, inst.m()),
        source_optimum: BigUint::from(min_size as u64),
        reduced_optimum: reduced_optimum.clone(),
        predicted_delta: predicted.clone(),
        method: "restricted-oracle",
        failures: {
            let mut f = failures;
            if reduced_optimum != predicted {
                f.push(format!(
                    "delta* at k = min cover is {}, formula gives {}",
                    reduced_optimum, predicted
                ));
            }
            f
        },
    })
}

fn with_unit(lengths: &BTreeSet<BigUint>) -> BTreeSet<BigUint> {
    let mut set = lengths.clone();
    set.insert(BigUint::from(1u32));
    set
}

/// Addition-chain equivalence: the minimal OPE merge count reaching
/// delta = |targets| must equal the minimal chain length, and decisions
/// must agree along the whole zeta sweep.
pub fn verify_uope_equivalence(inst: &AddChainInstance) -> Result<EquivalenceReport, HarnessError> {
    let max_target = *inst.targets.iter().max().unwrap();
    if max_target > 64 {
        return Err(HarnessError::TooLarge(format!("target {}", max_target)));
    }
    let budget = SearchBudget::default();
    let (chain, r_star) = oracles::solve_addchain_exact(inst, &budget)?;
    let reduced = reductions::reduce_addchain_to_uope(inst)?;
    let delta = &reduced.delta;
    let mut failures = Vec::new();

    // Forward witness: the minimal chain's merges hit delta exactly.
    let witness = witnesses::build_addchain_witness(&chain)
        .map_err(|e| HarnessError::TooLarge(e.to_string()))?;
    let vocab = encoders::ope_vocab(&witness, reduced.dataset.alphabet());
    let obj = encoders::direct_objective(&vocab, &reduced.dataset)?;
    if &obj != delta {
        failures.push(format!("chain witness objective {} != delta {}", obj, delta));
    }
    let extracted = witnesses::extract_addchain(&witness);
    if !inst.targets.iter().all(|t| extracted.contains(t)) {
        failures.push(format!(
            "extracted chain {:?} misses a target in {:?}",
            extracted, inst.targets
        ));
    }

    // Independent OPE minimum.
    let sweep_top = r_star.max(inst.zeta);
    let mut kappa_star = None;
    let mut prev_yes = false;
    for zeta in 0..=sweep_top {
        let (_, delta_star) = oracles::solve_ope_exact(&reduced.dataset, zeta, &budget)?;
        let tok_yes = &delta_star <= delta;
        if tok_yes && kappa_star.is_none() {
            kappa_star = Some(zeta);
        }
        let src_yes = r_star <= zeta;
        if src_yes != tok_yes {
            failures.push(format!(
                "zeta = {}: chain {} but OPE {} (delta* = {})",
                zeta, src_yes, tok_yes, delta_star
            ));
        }
        if prev_yes && !tok_yes {
            failures.push(format!("zeta = {}: NO after YES breaks monotonicity", zeta));
        }
        prev_yes = tok_yes;
    }
    match kappa_star {
        Some(k) if k == r_star => {}
        other => failures.push(format!(
            "minimal OPE merge count {:?} != minimal chain length {}",
            other, r_star
        )),
    }

    Ok(EquivalenceReport {
        instance: format!("ac targets={:?}", inst.targets),
        source_optimum: BigUint::from(r_star as u64),
        reduced_optimum: BigUint::from(kappa_star.unwrap_or(usize::MAX) as u64),
        predicted_delta: delta.clone(),
        method: "full-oracle",
        failures,
    })
}

/// Greedy BPE baseline: kappa merges by descending pair frequency, ties to
/// the lexicographically smallest pair. Returns the sequence and how many
/// trailing merges are deliberate no-ops (used when the corpus runs out of
/// adjacent pairs).
pub fn greedy_bpe_train(dataset: &Dataset, kappa: usize) -> Result<(MergeSequence, usize), HarnessError> {
    let mut corpus: Vec<(Vec<Token>, u64)> = dataset
        .entries()
        .iter()
        .map(|e| match &e.payload {
            Payload::Explicit(c) => Ok((
                c.symbols().iter().map(|&s| Token::single(s)).collect(),
                e.multiplicity,
            )),
            Payload::Length(_) => Err(EncodeError::ExpectedExplicit),
        })
        .collect::<Result<_, _>>()?;
    let max_len = dataset
        .entries()
        .iter()
        .map(|e| match &e.payload {
            Payload::Explicit(c) => c.len(),
            Payload::Length(_) => 0,
        })
        .max()
        .unwrap_or(0);

    let mut merges = Vec::with_capacity(kappa);
    let mut noops = 0;
    for _ in 0..kappa {
        let mut freq: HashMap<(Token, Token), u64> = HashMap::new();
        for (tokens, mult) in &corpus {
            for w in tokens.windows(2) {
                *freq.entry((w[0].clone(), w[1].clone())).or_insert(0) += mult;
            }
        }
        let pick = freq.into_iter().max_by(|a, b| {
            a.1.cmp(&b.1).then_with(|| {
                // Reversed so that max_by lands on the smallest pair.
                (b.0 .0.content(), b.0 .1.content()).cmp(&(a.0 .0.content(), a.0 .1.content()))
            })
        });
        match pick {
            Some(((left, right), _)) => {
                let merge = Merge::new(left, right);
                for (tokens, _) in corpus.iter_mut() {
                    let mut next = Vec::with_capacity(tokens.len());
                    let mut i = 0;
                    while i < tokens.len() {
                        if i + 1 < tokens.len()
                            && tokens[i] == merge.left
                            && tokens[i + 1] == merge.right
                        {
                            next.push(merge.product());
                            i += 2;
                        } else {
                            next.push(tokens[i].clone());
                            i += 1;
                        }
                    }
                    *tokens = next;
                }
                merges.push(merge);
            }
            None => {
                // No adjacent pairs remain; pad with a merge that cannot
                // match anything (its operand is longer than every string).
                let w = Token::new(CharString::repeated(0, max_len + 1)).unwrap();
                merges.push(Merge::new(w.clone(), w));
                noops += 1;
            }
        }
    }
    Ok((merges, noops))
}

#[derive(Clone, Debug)]
pub struct RatioReport {
    pub achieved: BigUint,
    pub optimal: BigUint,
    pub ratio_length: BigRational,
    pub ratio_reduce: Option<BigRational>,
    pub lower_bound_only: bool,
    pub notes: Vec<String>,
}

/// Empirical approximation ratio of greedy BPE against the exact oracle
/// for the given mode. On oracle budget exhaustion the report falls back
/// to the trivial one-token-per-string lower bound and says so.
pub fn bench_ratio(dataset: &Dataset, kappa: usize, mode: Mode) -> Result<RatioReport, HarnessError> {
    let budget = SearchBudget::default();
    let (greedy, noops) = greedy_bpe_train(dataset, kappa)?;
    let mut notes = Vec::new();
    if noops > 0 {
        notes.push(format!("greedy padded {} no-op merges", noops));
    }
    let achieved = match mode {
        Mode::Direct | Mode::Ope => {
            encoders::direct_objective(&encoders::ope_vocab(&greedy, dataset.alphabet()), dataset)?
        }
        Mode::BottomUp => encoders::bottomup_objective(&greedy, dataset)?,
    };
    let oracle_result = match mode {
        Mode::Direct => oracles::solve_direct_exact(dataset, kappa, None, &budget).map(|r| r.1),
        Mode::BottomUp => oracles::solve_bottomup_exact(dataset, kappa, &budget).map(|r| r.1),
        Mode::Ope => oracles::solve_ope_exact(dataset, kappa, &budget).map(|r| r.1),
    };
    let (optimal, lower_bound_only) = match oracle_result {
        Ok(v) => (v, false),
        Err(OracleError::BudgetExhausted { nodes, elapsed }) => {
            notes.push(format!(
                "oracle budget exhausted ({} nodes, {:?}); optimum replaced by the trivial lower bound",
                nodes, elapsed
            ));
            (dataset.total_multiplicity(), true)
        }
        Err(e) => return Err(e.into()),
    };
    let ratio_length = approximation_ratio(&achieved, &optimal, ObjectiveKind::Length)?;
    let total = dataset.total_size();
    let achieved_red = &total - &achieved;
    let optimal_red = &total - &optimal;
    let ratio_reduce = if achieved_red.is_zero() {
        notes.push("greedy reduced nothing; reduce-ratio undefined".to_string());
        None
    } else {
        Some(approximation_ratio(
            &achieved_red,
            &optimal_red,
            ObjectiveKind::Reduce,
        )?)
    };
    Ok(RatioReport {
        achieved,
        optimal,
        ratio_length,
        ratio_reduce,
        lower_bound_only,
        notes,
    })
}

/// Uniform random valid 3-occurrence MAX2SAT instance: a random pairing of
/// the 3J literal slots into clauses, re-drawn until no clause pairs a
/// variable with itself, with uniform polarities.
pub fn gen_max2sat<R: Rng>(j_count: usize, rng: &mut R) -> Max2SatInstance {
    assert!(j_count >= 2 && j_count % 2 == 0, "3-occurrence needs even J >= 2");
    loop {
        let mut slots: Vec<usize> = (0..j_count).flat_map(|v| [v, v, v]).collect();
        slots.shuffle(rng);
        if slots.chunks(2).any(|ch| ch[0] == ch[1]) {
            continue;
        }
        let clauses: Vec<(Lit, Lit)> = slots
            .chunks(2)
            .map(|ch| {
                let l1 = Lit {
                    var: ch[0],
                    negated: rng.gen(),
                };
                let l2 = Lit {
                    var: ch[1],
                    negated: rng.gen(),
                };
                (l1, l2)
            })
            .collect();
        return Max2SatInstance::new(j_count, clauses, 0).expect("pairing is valid by construction");
    }
}
