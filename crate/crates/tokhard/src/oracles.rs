//! Exhaustive exact solvers for both sides of every reduction. Each oracle
//! either proves its optimum within budget or fails loudly; there are no
//! heuristic fallbacks and no silent partial answers.

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use num::bigint::BigUint;
use num::{One, Zero};
use thiserror::Error;

use crate::core::{
    AddChainInstance, Assignment, CharString, CoreError, Dataset, Max2SatInstance, Merge, Payload,
    Representation, Token, UnaryLength, VcInstance, Vocabulary,
};
use crate::encoders::{self, EncodeError};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("search budget exhausted after {nodes} nodes / {elapsed:?}")]
    BudgetExhausted { nodes: u64, elapsed: Duration },
    #[error("instance validation failed: {0}")]
    Validation(#[from] CoreError),
    #[error("encoding failed during search: {0}")]
    Encode(#[from] EncodeError),
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),
}

/// Limits for the exhaustive searches. Exceeding either limit aborts the
/// search with an explicit error.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub max_candidates: usize,
    pub max_nodes: u64,
    pub time_limit: Duration,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget {
            max_candidates: 4096,
            max_nodes: 50_000_000,
            time_limit: Duration::from_secs(600),
        }
    }
}

/// Running meter for one search invocation.
struct Meter {
    budget: SearchBudget,
    nodes: u64,
    started: Instant,
}

impl Meter {
    fn new(budget: &SearchBudget) -> Meter {
        Meter {
            budget: *budget,
            nodes: 0,
            started: Instant::now(),
        }
    }

    fn tick(&mut self) -> Result<(), OracleError> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes
            || (self.nodes % 4096 == 0 && self.started.elapsed() > self.budget.time_limit)
        {
            return Err(OracleError::BudgetExhausted {
                nodes: self.nodes,
                elapsed: self.started.elapsed(),
            });
        }
        Ok(())
    }
}

fn explicit_strings(dataset: &Dataset) -> Result<Vec<(&CharString, u64)>, OracleError> {
    dataset
        .entries()
        .iter()
        .map(|e| match &e.payload {
            Payload::Explicit(c) => Ok((c, e.multiplicity)),
            Payload::Length(_) => Err(OracleError::Encode(EncodeError::ExpectedExplicit)),
        })
        .collect()
}

/// All distinct substrings of length >= 2 across the dataset strings: the
/// default candidate universe for direct vocabulary search. Tokens that
/// never match any string are dead weight, so nothing is lost.
pub fn substring_candidates(dataset: &Dataset) -> Result<Vec<CharString>, OracleError> {
    let mut set = BTreeSet::new();
    for (c, _) in explicit_strings(dataset)? {
        let syms = c.symbols();
        for i in 0..syms.len() {
            for j in i + 2..=syms.len() {
                set.insert(CharString::new(syms[i..j].to_vec()));
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// Minimum total token count over all vocabularies of `kappa` non-alphabet
/// tokens drawn from `candidates`. When fewer than `kappa` candidates
/// exist, every candidate is taken; additional tokens could only be dead
/// weight, so the optimum is unaffected.
pub fn solve_direct_exact(
    dataset: &Dataset,
    kappa: usize,
    candidates: Option<Vec<CharString>>,
    budget: &SearchBudget,
) -> Result<(Vocabulary, BigUint), OracleError> {
    let alphabet = dataset.alphabet();
    let candidates = match candidates {
        Some(c) => c,
        None => substring_candidates(dataset)?,
    };
    if candidates.len() > budget.max_candidates {
        return Err(OracleError::TooLarge(format!(
            "{} candidates exceed the budget cap {}",
            candidates.len(),
            budget.max_candidates
        )));
    }
    let baseline = dataset.total_size();

    // Solo savings bound the marginal gain of each token: a token t used q
    // times in an optimal segmentation saves at most q(|t|-1) symbols, and
    // q never exceeds the maximum number of disjoint occurrences of t, so
    // the solo saving (measured against the bare alphabet) is an upper
    // bound on t's marginal saving in any vocabulary.
    let mut scored: Vec<(BigUint, CharString)> = Vec::with_capacity(candidates.len());
    for cand in candidates {
        let v = Vocabulary::with_tokens(alphabet, [cand.clone()])?;
        let obj = encoders::direct_objective(&v, dataset)?;
        scored.push((&baseline - obj, cand));
    }
    scored.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    // suffix_top[i][r]: sum of the r largest savings among scored[i..] is
    // just the first r entries since the list is sorted descending.
    let savings: Vec<BigUint> = scored.iter().map(|(s, _)| s.clone()).collect();

    let kappa_eff = kappa.min(scored.len());
    let mut best_obj = baseline.clone();
    let mut best_set: Vec<CharString> = Vec::new();
    let mut chosen: Vec<CharString> = Vec::new();
    let floor = dataset.total_multiplicity();

    fn dfs(
        scored: &[(BigUint, CharString)],
        savings: &[BigUint],
        idx: usize,
        need: usize,
        dataset: &Dataset,
        alphabet: crate::core::Alphabet,
        chosen: &mut Vec<CharString>,
        best_obj: &mut BigUint,
        best_set: &mut Vec<CharString>,
        floor: &BigUint,
        meter: &mut Meter,
    ) -> Result<(), OracleError> {
        meter.tick()?;
        if &*best_obj <= floor {
            return Ok(()); // already at the absolute lower bound
        }
        let vocab = Vocabulary::with_tokens(alphabet, chosen.iter().cloned())?;
        let obj = encoders::direct_objective(&vocab, dataset)?;
        if need == 0 {
            if obj < *best_obj {
                *best_obj = obj;
                *best_set = chosen.clone();
            }
            return Ok(());
        }
        // Optimistic bound: current objective minus the best `need`
        // remaining solo savings.
        let optimistic: BigUint = savings[idx..].iter().take(need).sum();
        if &obj <= &optimistic || &obj - &optimistic < *best_obj {
            for i in idx..=scored.len() - need {
                chosen.push(scored[i].1.clone());
                dfs(
                    scored, savings, i + 1, need - 1, dataset, alphabet, chosen, best_obj,
                    best_set, floor, meter,
                )?;
                chosen.pop();
            }
        }
        Ok(())
    }

    let mut meter = Meter::new(budget);
    dfs(
        &scored,
        &savings,
        0,
        kappa_eff,
        dataset,
        alphabet,
        &mut chosen,
        &mut best_obj,
        &mut best_set,
        &floor,
        &mut meter,
    )?;
    let vocab = Vocabulary::with_tokens(alphabet, best_set)?;
    Ok((vocab, best_obj))
}

type Corpus = Vec<(Vec<Token>, u64)>;

fn corpus_objective(corpus: &Corpus) -> BigUint {
    let mut total = BigUint::zero();
    for (tokens, mult) in corpus {
        total += BigUint::from(tokens.len()) * *mult;
    }
    total
}

fn adjacent_pairs(corpus: &Corpus) -> Vec<Merge> {
    let mut pairs = BTreeSet::new();
    for (tokens, _) in corpus {
        for w in tokens.windows(2) {
            pairs.insert((w[0].clone(), w[1].clone()));
        }
    }
    pairs
        .into_iter()
        .map(|(l, r)| Merge::new(l, r))
        .collect()
}

fn apply_merge(corpus: &Corpus, merge: &Merge) -> Corpus {
    corpus
        .iter()
        .map(|(tokens, mult)| {
            let mut next = Vec::with_capacity(tokens.len());
            let mut i = 0;
            while i < tokens.len() {
                if i + 1 < tokens.len() && tokens[i] == merge.left && tokens[i + 1] == merge.right {
                    next.push(merge.product());
                    i += 2;
                } else {
                    next.push(tokens[i].clone());
                    i += 1;
                }
            }
            (next, *mult)
        })
        .collect()
}

/// Minimum bottom-up objective over merge sequences of length `kappa`.
/// Candidates at every step are the pairs of tokens currently adjacent
/// somewhere in the corpus; no-op merges are pruned by dominance (swapping
/// a no-op for any effective merge never hurts), so the returned sequence
/// may be shorter than `kappa`.
pub fn solve_bottomup_exact(
    dataset: &Dataset,
    kappa: usize,
    budget: &SearchBudget,
) -> Result<(Vec<Merge>, BigUint), OracleError> {
    let corpus: Corpus = explicit_strings(dataset)?
        .into_iter()
        .map(|(c, m)| (c.symbols().iter().map(|&s| Token::single(s)).collect(), m))
        .collect();
    let floor = dataset.total_multiplicity();

    let mut best_obj = corpus_objective(&corpus);
    let mut best_seq: Vec<Merge> = Vec::new();
    let mut seq: Vec<Merge> = Vec::new();
    let mut meter = Meter::new(budget);

    fn dfs(
        corpus: &Corpus,
        depth_left: usize,
        floor: &BigUint,
        seq: &mut Vec<Merge>,
        best_obj: &mut BigUint,
        best_seq: &mut Vec<Merge>,
        meter: &mut Meter,
    ) -> Result<(), OracleError> {
        meter.tick()?;
        let obj = corpus_objective(corpus);
        if obj < *best_obj {
            *best_obj = obj.clone();
            *best_seq = seq.clone();
        }
        if depth_left == 0 || &*best_obj <= floor {
            return Ok(());
        }
        // One merge pass at best halves every string, so r passes cannot
        // go below sum(mult * ceil(len / 2^r)).
        let mut lb = BigUint::zero();
        for (tokens, mult) in corpus {
            let mut l = tokens.len() as u64;
            for _ in 0..depth_left.min(63) {
                l = (l + 1) / 2;
            }
            lb += BigUint::from(l) * *mult;
        }
        if &lb >= best_obj {
            return Ok(());
        }
        for merge in adjacent_pairs(corpus) {
            let next = apply_merge(corpus, &merge);
            if corpus_objective(&next) == obj {
                continue; // no-op in effect; dominated
            }
            seq.push(merge);
            dfs(&next, depth_left - 1, floor, seq, best_obj, best_seq, meter)?;
            seq.pop();
        }
        Ok(())
    }

    dfs(
        &corpus,
        kappa,
        &floor,
        &mut seq,
        &mut best_obj,
        &mut best_seq,
        &mut meter,
    )?;
    Ok((best_seq, best_obj))
}

/// Minimum OPE objective over reachable merge sequences of length at most
/// `kappa`. Token sets are enumerated once each by insisting that products
/// are added in increasing (length, content) order, which every closed set
/// admits; only substrings of dataset strings are considered, since a
/// useful token is a substring and both halves of a substring are
/// substrings too.
pub fn solve_ope_exact(
    dataset: &Dataset,
    kappa: usize,
    budget: &SearchBudget,
) -> Result<(Vec<Merge>, BigUint), OracleError> {
    let dataset = materialise_unary(dataset)?;
    let alphabet = dataset.alphabet();
    let substrings: HashSet<CharString> = substring_candidates(&dataset)?.into_iter().collect();
    let floor = dataset.total_multiplicity();

    let base = Vocabulary::new(alphabet);
    let mut best_obj = encoders::direct_objective(&base, &dataset)?;
    let mut best_seq: Vec<Merge> = Vec::new();
    let mut seq: Vec<Merge> = Vec::new();
    let mut meter = Meter::new(budget);

    struct Ctx<'a> {
        dataset: &'a Dataset,
        substrings: &'a HashSet<CharString>,
        floor: &'a BigUint,
    }

    fn key(c: &CharString) -> (usize, Vec<u8>) {
        (c.len(), c.symbols().to_vec())
    }

    fn dfs(
        ctx: &Ctx,
        vocab: &Vocabulary,
        last: Option<(usize, Vec<u8>)>,
        depth_left: usize,
        seq: &mut Vec<Merge>,
        best_obj: &mut BigUint,
        best_seq: &mut Vec<Merge>,
        meter: &mut Meter,
    ) -> Result<(), OracleError> {
        meter.tick()?;
        if depth_left == 0 || &*best_obj <= ctx.floor {
            return Ok(());
        }
        // Candidate products of current tokens, deduplicated and filtered
        // to fresh substrings above the canonical cutoff.
        let mut cands: BTreeSet<CharString> = BTreeSet::new();
        for l in vocab.tokens() {
            for r in vocab.tokens() {
                let prod = l.content().append(r.content());
                if !ctx.substrings.contains(&prod) || vocab.contains(&prod) {
                    continue;
                }
                if let Some(ref cutoff) = last {
                    if &key(&prod) <= cutoff {
                        continue;
                    }
                }
                cands.insert(prod);
            }
        }
        for prod in cands {
            // Record one witness split whose halves are current tokens.
            let split = (1..prod.len())
                .find(|&i| {
                    let l = CharString::new(prod.symbols()[..i].to_vec());
                    let r = CharString::new(prod.symbols()[i..].to_vec());
                    vocab.contains(&l) && vocab.contains(&r)
                })
                .expect("product was built from two current tokens");
            let left = Token::new(CharString::new(prod.symbols()[..split].to_vec())).unwrap();
            let right = Token::new(CharString::new(prod.symbols()[split..].to_vec())).unwrap();
            let mut next = vocab.clone();
            next.insert(prod.clone())?;
            seq.push(Merge::new(left, right));
            let obj = encoders::direct_objective(&next, ctx.dataset)?;
            if obj < *best_obj {
                *best_obj = obj;
                *best_seq = seq.clone();
            }
            dfs(
                ctx,
                &next,
                Some(key(&prod)),
                depth_left - 1,
                seq,
                best_obj,
                best_seq,
                meter,
            )?;
            seq.pop();
        }
        Ok(())
    }

    let ctx = Ctx {
        dataset: &dataset,
        substrings: &substrings,
        floor: &floor,
    };
    dfs(
        &ctx,
        &base,
        None,
        kappa,
        &mut seq,
        &mut best_obj,
        &mut best_seq,
        &mut meter,
    )?;
    Ok((best_seq, best_obj))
}

/// Length-representation datasets are converted to explicit unary strings
/// for the OPE search; only small lengths are eligible.
fn materialise_unary(dataset: &Dataset) -> Result<Dataset, OracleError> {
    const CAP: u64 = 10_000;
    match dataset.representation() {
        Representation::Explicit => Ok(dataset.clone()),
        Representation::Length => {
            let entries = dataset
                .entries()
                .iter()
                .map(|e| {
                    let l = match &e.payload {
                        Payload::Length(l) => u64::try_from(l).ok().filter(|&l| l <= CAP),
                        Payload::Explicit(_) => unreachable!(),
                    };
                    match l {
                        Some(l) => Ok((CharString::repeated(0, l as usize), e.multiplicity)),
                        None => Err(OracleError::TooLarge(
                            "length-representation entry too long to materialise".into(),
                        )),
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Dataset::explicit(crate::core::Alphabet::UNARY, entries)
                .expect("unary strings are well formed"))
        }
    }
}

/// Minimum total coin count over all `kappa`-subsets of candidate lengths
/// (default: the distinct target lengths themselves), with length 1 always
/// available as the alphabet. Restricting candidates to the targets is
/// exactly the restriction the unary reduction analysis works with; callers
/// relying on it should say so in their reports.
pub fn solve_unary_direct_exact(
    dataset: &Dataset,
    kappa: usize,
    candidates: Option<BTreeSet<UnaryLength>>,
    budget: &SearchBudget,
) -> Result<(BTreeSet<UnaryLength>, BigUint), OracleError> {
    if dataset.representation() != Representation::Length {
        return Err(OracleError::Encode(EncodeError::ExpectedLength));
    }
    let targets: Vec<(UnaryLength, u64)> = dataset
        .entries()
        .iter()
        .map(|e| match &e.payload {
            Payload::Length(l) => (l.clone(), e.multiplicity),
            Payload::Explicit(_) => unreachable!(),
        })
        .collect();
    let one = BigUint::one();
    let candidates: Vec<UnaryLength> = match candidates {
        Some(set) => set.into_iter().filter(|l| l > &one).collect(),
        None => {
            let set: BTreeSet<_> = targets
                .iter()
                .map(|(l, _)| l.clone())
                .filter(|l| l > &one)
                .collect();
            set.into_iter().collect()
        }
    };
    if candidates.len() > budget.max_candidates {
        return Err(OracleError::TooLarge(format!(
            "{} candidate lengths exceed the budget cap {}",
            candidates.len(),
            budget.max_candidates
        )));
    }
    // Suffix multiplicities give the trivial floor for the still-unencoded
    // entries while costing a subset.
    let mut suffix_mult = vec![BigUint::zero(); targets.len() + 1];
    for i in (0..targets.len()).rev() {
        suffix_mult[i] = &suffix_mult[i + 1] + BigUint::from(targets[i].1);
    }

    // All-unit coins always work, so Sum(mult * L) is a valid incumbent.
    let mut best_obj: BigUint = targets.iter().map(|(l, m)| l * *m).sum();
    let mut best_set: BTreeSet<UnaryLength> = BTreeSet::new();
    let kappa_eff = kappa.min(candidates.len());
    let mut meter = Meter::new(budget);

    let mut subset: Vec<UnaryLength> = Vec::with_capacity(kappa_eff);
    enumerate_subsets(
        &candidates,
        0,
        kappa_eff,
        &mut subset,
        &mut |subset, meter| {
            // Cost this subset with branch-and-bound on the running total.
            let mut coins: Vec<UnaryLength> = subset.to_vec();
            coins.push(one.clone());
            coins.sort_by(|a, b| b.cmp(a));
            let mut acc = BigUint::zero();
            for (i, (l, mult)) in targets.iter().enumerate() {
                meter.tick()?;
                let reserve = &acc + &suffix_mult[i + 1];
                if &best_obj <= &reserve {
                    return Ok(());
                }
                let headroom = (&best_obj - &reserve - 1u32) / BigUint::from(*mult);
                let cap = u64::try_from(&headroom).unwrap_or(u64::MAX).min(100_000);
                match encoders::min_coins_bounded(&coins, l, cap) {
                    Some(enc) => acc += enc.total * *mult,
                    None => return Ok(()), // cannot beat the incumbent
                }
            }
            if acc < best_obj {
                best_obj = acc;
                best_set = subset.iter().cloned().collect();
            }
            Ok(())
        },
        &mut meter,
    )?;
    Ok((best_set, best_obj))
}

fn enumerate_subsets<T: Clone>(
    items: &[T],
    start: usize,
    need: usize,
    chosen: &mut Vec<T>,
    visit: &mut dyn FnMut(&[T], &mut Meter) -> Result<(), OracleError>,
    meter: &mut Meter,
) -> Result<(), OracleError> {
    if need == 0 {
        return visit(chosen, meter);
    }
    for i in start..=items.len() - need {
        chosen.push(items[i].clone());
        enumerate_subsets(items, i + 1, need - 1, chosen, visit, meter)?;
        chosen.pop();
    }
    Ok(())
}

/// Exhaustive MAX2SAT: enumerates all 2^J assignments.
pub fn solve_max2sat_exact(inst: &Max2SatInstance) -> Result<(Assignment, u64), OracleError> {
    inst.validate()?;
    if inst.num_vars > 30 {
        return Err(OracleError::TooLarge(format!(
            "2^{} assignments",
            inst.num_vars
        )));
    }
    let mut best = Assignment::from_bits(0, inst.num_vars);
    let mut best_f = inst.count_satisfied(&best);
    for bits in 1..(1u64 << inst.num_vars) {
        let s = Assignment::from_bits(bits, inst.num_vars);
        let f = inst.count_satisfied(&s);
        if f > best_f {
            best_f = f;
            best = s;
        }
    }
    Ok((best, best_f))
}

/// Exhaustive minimum vertex cover, by increasing subset size.
pub fn solve_vc_exact(inst: &VcInstance) -> Result<(BTreeSet<usize>, usize), OracleError> {
    inst.validate()?;
    if inst.n > 24 {
        return Err(OracleError::TooLarge(format!("2^{} subsets", inst.n)));
    }
    for size in 0..=inst.n {
        let mut found: Option<BTreeSet<usize>> = None;
        let mut chosen = Vec::new();
        subsets_of_size(inst.n, 0, size, &mut chosen, &mut |set| {
            if found.is_none() {
                let cover: BTreeSet<usize> = set.iter().cloned().collect();
                if inst.is_cover(&cover) {
                    found = Some(cover);
                }
            }
        });
        if let Some(cover) = found {
            return Ok((cover, size));
        }
    }
    unreachable!("the full vertex set always covers")
}

fn subsets_of_size(
    n: usize,
    start: usize,
    need: usize,
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if need == 0 {
        visit(chosen);
        return;
    }
    if start + need > n {
        return;
    }
    for v in start..=n - need {
        chosen.push(v);
        subsets_of_size(n, v + 1, need - 1, chosen, visit);
        chosen.pop();
    }
}

/// Minimal addition-chain length covering every target, by iterative
/// deepening over sorted chains. Any chain can be deduplicated and sorted
/// without harm (every element is the sum of two strictly smaller ones),
/// so enumerating strictly increasing chains is exhaustive.
pub fn solve_addchain_exact(
    inst: &AddChainInstance,
    budget: &SearchBudget,
) -> Result<(Vec<u64>, usize), OracleError> {
    let max_target = *inst.targets.iter().max().expect("targets nonempty");
    let targets = inst.targets.clone();
    let mut meter = Meter::new(budget);

    fn ceil_log2_ratio(target: u64, current: u64) -> usize {
        // Steps needed before `current` can even reach `target` by doubling.
        let mut steps = 0;
        let mut reach = current;
        while reach < target {
            reach *= 2;
            steps += 1;
        }
        steps
    }

    fn dfs(
        chain: &mut Vec<u64>,
        covered: &mut Vec<bool>,
        unreached: usize,
        depth_left: usize,
        targets: &BTreeSet<u64>,
        max_target: u64,
        meter: &mut Meter,
        witness: &mut Option<Vec<u64>>,
    ) -> Result<bool, OracleError> {
        meter.tick()?;
        if unreached == 0 {
            *witness = Some(chain.clone());
            return Ok(true);
        }
        if depth_left == 0 {
            return Ok(false);
        }
        let top = *chain.last().unwrap();
        // Each step covers at most one new target, and values at most
        // double per step.
        let hardest = *targets
            .iter()
            .rev()
            .find(|&&t| !covered[t as usize])
            .unwrap();
        if unreached > depth_left || ceil_log2_ratio(hardest, top) > depth_left {
            return Ok(false);
        }
        let mut sums = BTreeSet::new();
        for &x in chain.iter() {
            for &y in chain.iter() {
                let s = x + y;
                if s > top && s <= max_target {
                    sums.insert(s);
                }
            }
        }
        for &s in sums.iter().rev() {
            chain.push(s);
            let newly_covered = targets.contains(&s) && !covered[s as usize];
            if newly_covered {
                covered[s as usize] = true;
            }
            let sub = if newly_covered { 1 } else { 0 };
            let ok = dfs(
                chain,
                covered,
                unreached - sub,
                depth_left - 1,
                targets,
                max_target,
                meter,
                witness,
            )?;
            if newly_covered {
                covered[s as usize] = false;
            }
            chain.pop();
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }

    let unreached0 = targets.iter().filter(|&&t| t != 1).count();
    let lower = unreached0.max(ceil_log2_ratio(max_target, 1));
    for depth in lower.. {
        let mut chain = vec![1u64];
        let mut covered = vec![false; max_target as usize + 1];
        covered[1] = true;
        let mut witness: Option<Vec<u64>> = None;
        if dfs(
            &mut chain,
            &mut covered,
            unreached0,
            depth,
            &targets,
            max_target,
            &mut meter,
            &mut witness,
        )? {
            return Ok((witness.unwrap(), depth));
        }
    }
    unreachable!("iterative deepening always terminates: depth max_target suffices")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{
        big, Alphabet, CharString, Dataset, Lit, Max2SatInstance, VcInstance,
    };
    use std::collections::BTreeSet;

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    fn unary(entries: &[(usize, u64)]) -> Dataset {
        Dataset::explicit(
            Alphabet::UNARY,
            entries
                .iter()
                .map(|&(len, mult)| (CharString::repeated(0, len), mult)),
        )
        .unwrap()
    }

    fn bin(text: &str) -> CharString {
        CharString::parse(text, Alphabet::BINARY).unwrap()
    }

    // The tempting answer here is 5 via the token "aaa" (2*1 + 1*... ), but
    // "aa" wins: 3 entries of "aa" collapse to one token each and "aaa"
    // still needs two tokens, for 3*1 + 2*2 = 7 < 3*2 + 2*1 = 8.
    #[test]
    fn direct_exact_prefers_shorter_heavier_token() {
        let d = unary(&[(2, 3), (3, 2)]);
        let (v, obj) = solve_direct_exact(&d, 1, None, &budget()).unwrap();
        assert_eq!(obj, big(7));
        let extra: Vec<_> = v.extra_tokens().collect();
        assert_eq!(extra.len(), 1);
        assert_eq!(extra[0].len(), 2);
    }

    #[test]
    fn direct_exact_10101() {
        let d = Dataset::explicit(Alphabet::BINARY, vec![(bin("10101"), 4)]).unwrap();
        let (_, obj0) = solve_direct_exact(&d, 0, None, &budget()).unwrap();
        assert_eq!(obj0, big(20));
        // One token suffices: the whole string.
        let (v, obj1) = solve_direct_exact(&d, 1, None, &budget()).unwrap();
        assert_eq!(obj1, big(4));
        assert!(v.contains(&bin("10101")));
        let (_, obj2) = solve_direct_exact(&d, 2, None, &budget()).unwrap();
        assert_eq!(obj2, big(4));
    }

    #[test]
    fn bottomup_exact_10101_needs_three_merges() {
        let d = Dataset::explicit(Alphabet::BINARY, vec![(bin("10101"), 4)]).unwrap();
        for (kappa, want) in [(0u64, 20u64), (1, 12), (2, 8), (3, 4)] {
            let (m, obj) = solve_bottomup_exact(&d, kappa as usize, &budget()).unwrap();
            assert_eq!(obj, big(want), "kappa = {}", kappa);
            assert!(m.len() <= kappa as usize);
        }
    }

    #[test]
    fn ope_matches_bottomup_on_10101() {
        let d = Dataset::explicit(Alphabet::BINARY, vec![(bin("10101"), 4)]).unwrap();
        let (_, obj) = solve_ope_exact(&d, 2, &budget()).unwrap();
        assert_eq!(obj, big(8));
        let (_, obj) = solve_ope_exact(&d, 3, &budget()).unwrap();
        assert_eq!(obj, big(4));
    }

    #[test]
    fn max2sat_exact_small() {
        let inst = Max2SatInstance::new(
            2,
            vec![
                (Lit::pos(0), Lit::pos(1)),
                (Lit::pos(0), Lit::neg(1)),
                (Lit::neg(0), Lit::pos(1)),
            ],
            0,
        )
        .unwrap();
        let (s, f) = solve_max2sat_exact(&inst).unwrap();
        assert_eq!(f, 3);
        assert_eq!(inst.count_satisfied(&s), 3);
    }

    #[test]
    fn vc_exact_triangle() {
        let tri = VcInstance::new(3, vec![(0, 1), (0, 2), (1, 2)], 2).unwrap();
        let (cover, size) = solve_vc_exact(&tri).unwrap();
        assert_eq!(size, 2);
        assert!(tri.is_cover(&cover));
    }

    #[test]
    fn addchain_exact_known_minima() {
        let cases: [(&[u64], usize); 4] =
            [(&[1], 0), (&[2, 4], 2), (&[2, 3, 5], 3), (&[15], 5)];
        for (targets, want) in cases {
            let inst = crate::core::AddChainInstance::new(
                targets.iter().copied().collect(),
                0,
            )
            .unwrap();
            let (chain, r) = solve_addchain_exact(&inst, &budget()).unwrap();
            assert_eq!(r, want, "targets {:?}", targets);
            assert_eq!(chain.len(), want + 1);
            assert_eq!(chain[0], 1);
            let covered: BTreeSet<u64> = chain.iter().copied().collect();
            assert!(targets.iter().all(|t| covered.contains(t)));
        }
    }

    #[test]
    fn unary_direct_exact_picks_reusable_lengths() {
        let d = Dataset::lengths(vec![(big(6), 1), (big(9), 1), (big(13), 2)]);
        let (set, obj) = solve_unary_direct_exact(&d, 2, None, &budget()).unwrap();
        // {6, 13}: 6 = one token, 13 = one token twice, 9 = 6 + 1 + 1 + 1.
        assert_eq!(obj, big(7));
        assert_eq!(set, [big(6), big(13)].into_iter().collect());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let d = Dataset::explicit(Alphabet::BINARY, vec![(bin("10101"), 4)]).unwrap();
        let tiny = SearchBudget {
            max_nodes: 1,
            ..SearchBudget::default()
        };
        match solve_bottomup_exact(&d, 3, &tiny) {
            Err(OracleError::BudgetExhausted { .. }) => {}
            other => panic!("expected budget exhaustion, got {:?}", other.map(|r| r.1)),
        }
    }
}
