//! The three encoding functions (direct, bottom-up, OPE) plus the unary
//! length-representation encoder, which is change-making in disguise.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num::bigint::BigUint;
use num::{One, Zero};
use thiserror::Error;

use crate::core::{
    Alphabet, CharString, Dataset, Merge, Payload, Symbol, Token, UnaryLength, Vocabulary,
};

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error("string cannot be segmented: symbol at position {0} has no matching token")]
    NoSegmentation(usize),
    #[error("unary vocabulary must contain length 1")]
    MissingUnitLength,
    #[error("length {0} is not representable over the given length set")]
    Unrepresentable(UnaryLength),
    #[error("search budget exhausted at depth {0}; no optimum proven")]
    BudgetExhausted(u64),
    #[error("expected an explicit-representation dataset")]
    ExpectedExplicit,
    #[error("expected a length-representation dataset")]
    ExpectedLength,
}

/// Prefix trie over vocabulary tokens, for O(|c| * maxlen) matching.
struct Trie {
    // children[node][symbol] -> node; terminal marks a complete token.
    children: Vec<BTreeMap<Symbol, usize>>,
    terminal: Vec<bool>,
}

impl Trie {
    fn build(vocab: &Vocabulary) -> Trie {
        let mut trie = Trie {
            children: vec![BTreeMap::new()],
            terminal: vec![false],
        };
        for token in vocab.tokens() {
            let mut node = 0;
            for &sym in token.symbols() {
                let next = trie.children.len();
                node = match trie.children[node].get(&sym) {
                    Some(&n) => n,
                    None => {
                        trie.children[node].insert(sym, next);
                        trie.children.push(BTreeMap::new());
                        trie.terminal.push(false);
                        next
                    }
                };
            }
            trie.terminal[node] = true;
        }
        trie
    }

    /// Lengths of all vocabulary tokens that are prefixes of `tail`,
    /// in increasing order.
    fn match_lengths(&self, tail: &[Symbol], out: &mut Vec<usize>) {
        out.clear();
        let mut node = 0;
        for (i, sym) in tail.iter().enumerate() {
            node = match self.children[node].get(sym) {
                Some(&n) => n,
                None => return,
            };
            if self.terminal[node] {
                out.push(i + 1);
            }
        }
    }
}

/// A vocabulary compiled into its matching trie. Worth building once when
/// many strings are encoded against the same vocabulary, as the exhaustive
/// searches do constantly.
pub struct CompiledVocab {
    trie: Trie,
}

impl CompiledVocab {
    pub fn new(vocab: &Vocabulary) -> CompiledVocab {
        CompiledVocab {
            trie: Trie::build(vocab),
        }
    }

    /// Shortest-path DP over string positions; `dist[i]` is the minimum
    /// token count for the suffix starting at i.
    fn distances(&self, syms: &[Symbol]) -> Result<Vec<usize>, EncodeError> {
        let n = syms.len();
        const INF: usize = usize::MAX;
        let mut dist = vec![INF; n + 1];
        dist[n] = 0;
        let mut lens = Vec::new();
        for i in (0..n).rev() {
            self.trie.match_lengths(&syms[i..], &mut lens);
            for &l in &lens {
                if dist[i + l] != INF && dist[i + l] + 1 < dist[i] {
                    dist[i] = dist[i + l] + 1;
                }
            }
            if dist[i] == INF {
                // Only possible when some symbol of c is outside the alphabet.
                return Err(EncodeError::NoSegmentation(i));
            }
        }
        Ok(dist)
    }

    pub fn count(&self, c: &CharString) -> Result<usize, EncodeError> {
        self.distances(c.symbols()).map(|d| d[0])
    }

    pub fn encode(&self, c: &CharString) -> Result<Vec<Token>, EncodeError> {
        let syms = c.symbols();
        let dist = self.distances(syms)?;
        let mut tokens = Vec::with_capacity(dist[0]);
        let mut lens = Vec::new();
        let mut i = 0;
        while i < syms.len() {
            self.trie.match_lengths(&syms[i..], &mut lens);
            let l = *lens
                .iter()
                .find(|&&l| dist[i + l] + 1 == dist[i])
                .expect("DP invariant: some token lies on a shortest path");
            tokens.push(Token::new(CharString::new(syms[i..i + l].to_vec())).unwrap());
            i += l;
        }
        Ok(tokens)
    }
}

/// Minimum-token segmentation of `c` over `vocab`. Among equal-count
/// segmentations the witness is the lexicographically earliest sequence of
/// (start, length) pairs; the count itself is the unique minimum.
pub fn direct_encode(vocab: &Vocabulary, c: &CharString) -> Result<Vec<Token>, EncodeError> {
    CompiledVocab::new(vocab).encode(c)
}

/// Token count of the minimum segmentation.
pub fn direct_count(vocab: &Vocabulary, c: &CharString) -> Result<usize, EncodeError> {
    CompiledVocab::new(vocab).count(c)
}

/// Applies each merge exhaustively in sequence order. Within one pass the
/// scan is left-to-right and greedy: after a replacement at position i the
/// scan resumes after the new token.
pub fn bottomup_apply(merges: &[Merge], c: &CharString) -> Vec<Token> {
    let mut tokens: Vec<Token> = c.symbols().iter().map(|&s| Token::single(s)).collect();
    for merge in merges {
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
        tokens = next;
    }
    tokens
}

/// The merge-extracted vocabulary: the alphabet plus every merge product.
/// Reachability is deliberately not enforced here.
pub fn ope_vocab(merges: &[Merge], alphabet: Alphabet) -> Vocabulary {
    let mut v = Vocabulary::new(alphabet);
    for m in merges {
        v.insert(m.product().content().clone())
            .expect("merge products are nonempty and over the alphabet");
    }
    v
}

/// Optimal pair encoding: apply the merge-extracted vocabulary optimally.
pub fn ope_encode(
    merges: &[Merge],
    alphabet: Alphabet,
    c: &CharString,
) -> Result<Vec<Token>, EncodeError> {
    direct_encode(&ope_vocab(merges, alphabet), c)
}

/// Tuning knobs for the unary encoder. `dp_bound` selects the DP engine for
/// small lengths; beyond it, iterative deepening over coin counts is used,
/// capped at `id_depth_limit` (an exactness cap, not a heuristic: the search
/// fails loudly rather than return an unproven answer).
#[derive(Clone, Copy, Debug)]
pub struct UnaryConfig {
    pub dp_bound: u64,
    pub id_depth_limit: u64,
}

impl Default for UnaryConfig {
    fn default() -> UnaryConfig {
        UnaryConfig {
            dp_bound: 1_000_000,
            id_depth_limit: 1_000,
        }
    }
}

/// Result of a unary encoding: total coin count plus the chosen multiset of
/// coins, reported as (length, count) pairs over the distinct lengths used.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnaryEncoding {
    pub total: BigUint,
    pub coins: Vec<(UnaryLength, BigUint)>,
}

/// Minimum number of coins from `vocab_lengths` summing exactly to `L`.
/// Requires 1 in the length set so every L is representable.
pub fn unary_direct_encode(
    vocab_lengths: &BTreeSet<UnaryLength>,
    l: &UnaryLength,
) -> Result<UnaryEncoding, EncodeError> {
    unary_direct_encode_with(&UnaryConfig::default(), vocab_lengths, l)
}

pub fn unary_direct_encode_with(
    cfg: &UnaryConfig,
    vocab_lengths: &BTreeSet<UnaryLength>,
    l: &UnaryLength,
) -> Result<UnaryEncoding, EncodeError> {
    if !vocab_lengths.contains(&BigUint::one()) {
        return Err(EncodeError::MissingUnitLength);
    }
    if l.is_zero() {
        return Ok(UnaryEncoding {
            total: BigUint::zero(),
            coins: Vec::new(),
        });
    }
    if l <= &BigUint::from(cfg.dp_bound) {
        return Ok(dp_engine(vocab_lengths, l));
    }
    id_engine(cfg, vocab_lengths, l)
}

/// Engine (a): classic change-making DP over 0..=L.
fn dp_engine(vocab_lengths: &BTreeSet<UnaryLength>, l: &UnaryLength) -> UnaryEncoding {
    let target = u64::try_from(l).expect("dp_bound fits in u64") as usize;
    let coins: Vec<usize> = vocab_lengths
        .iter()
        .filter(|&c| c <= l)
        .map(|c| u64::try_from(c).expect("coin below dp_bound") as usize)
        .collect();
    const INF: u64 = u64::MAX;
    let mut dp = vec![INF; target + 1];
    let mut pick = vec![0usize; target + 1];
    dp[0] = 0;
    for x in 1..=target {
        for &c in &coins {
            if c <= x && dp[x - c] != INF && dp[x - c] + 1 < dp[x] {
                dp[x] = dp[x - c] + 1;
                pick[x] = c;
            }
        }
    }
    // 1 is always a coin, so dp[target] is finite.
    let mut counts: BTreeMap<usize, BigUint> = BTreeMap::new();
    let mut x = target;
    while x > 0 {
        let c = pick[x];
        *counts.entry(c).or_insert_with(BigUint::zero) += 1u32;
        x -= c;
    }
    UnaryEncoding {
        total: BigUint::from(dp[target]),
        coins: counts
            .into_iter()
            .map(|(c, k)| (BigUint::from(c), k))
            .collect(),
    }
}

/// Engine (b): iterative deepening over the total coin count. Exact because
/// depth d is only accepted once depths 0..d-1 have been refuted.
fn id_engine(
    cfg: &UnaryConfig,
    vocab_lengths: &BTreeSet<UnaryLength>,
    l: &UnaryLength,
) -> Result<UnaryEncoding, EncodeError> {
    let coins: Vec<UnaryLength> = vocab_lengths
        .iter()
        .filter(|&c| c <= l)
        .rev()
        .cloned()
        .collect();
    for depth in 1..=cfg.id_depth_limit {
        if let Some(enc) = min_coins_bounded(&coins, l, depth) {
            return Ok(enc);
        }
    }
    Err(EncodeError::BudgetExhausted(cfg.id_depth_limit))
}

/// Minimum-coin representation of `l` using at most `cap` coins, or None.
/// `coins` must be sorted in decreasing order. Cheap enough for the huge
/// structured lengths of the unary reductions, where optima are tiny.
pub fn min_coins_bounded(
    coins: &[UnaryLength],
    l: &UnaryLength,
    cap: u64,
) -> Option<UnaryEncoding> {
    let mut best: Option<(u64, Vec<(UnaryLength, u64)>)> = None;
    let mut chosen: Vec<(UnaryLength, u64)> = Vec::new();
    search(coins, l, cap, 0, &mut chosen, &mut best);
    best.map(|(total, picks)| UnaryEncoding {
        total: BigUint::from(total),
        coins: picks
            .into_iter()
            .filter(|&(_, k)| k > 0)
            .map(|(c, k)| (c, BigUint::from(k)))
            .collect(),
    })
}

fn search(
    coins: &[UnaryLength],
    rem: &UnaryLength,
    cap: u64,
    used: u64,
    chosen: &mut Vec<(UnaryLength, u64)>,
    best: &mut Option<(u64, Vec<(UnaryLength, u64)>)>,
) {
    if rem.is_zero() {
        if best.as_ref().map_or(true, |(b, _)| used < *b) {
            *best = Some((used, chosen.clone()));
        }
        return;
    }
    let budget = match best {
        // Strictly improve on the incumbent.
        Some((b, _)) => (*b - 1).min(cap).saturating_sub(used),
        None => cap - used,
    };
    if budget == 0 || coins.is_empty() {
        return;
    }
    let coin = &coins[0];
    // Everything left must fit under the largest remaining coin.
    if rem > &(coin * budget) {
        return;
    }
    let max_here = u64::try_from(rem / coin).unwrap_or(u64::MAX).min(budget);
    for k in (0..=max_here).rev() {
        let next = rem - coin * k;
        chosen.push((coin.clone(), k));
        search(&coins[1..], &next, cap, used + k, chosen, best);
        chosen.pop();
    }
}

/// Total direct-encoding objective over an explicit dataset.
pub fn direct_objective(vocab: &Vocabulary, dataset: &Dataset) -> Result<BigUint, EncodeError> {
    let compiled = CompiledVocab::new(vocab);
    let mut total = BigUint::zero();
    for entry in dataset.entries() {
        let c = match &entry.payload {
            Payload::Explicit(c) => c,
            Payload::Length(_) => return Err(EncodeError::ExpectedExplicit),
        };
        total += BigUint::from(compiled.count(c)?) * entry.multiplicity;
    }
    Ok(total)
}

/// Total bottom-up objective over an explicit dataset.
pub fn bottomup_objective(merges: &[Merge], dataset: &Dataset) -> Result<BigUint, EncodeError> {
    let mut total = BigUint::zero();
    for entry in dataset.entries() {
        let c = match &entry.payload {
            Payload::Explicit(c) => c,
            Payload::Length(_) => return Err(EncodeError::ExpectedExplicit),
        };
        total += BigUint::from(bottomup_apply(merges, c).len()) * entry.multiplicity;
    }
    Ok(total)
}

/// Total unary direct objective over a length-representation dataset.
pub fn unary_objective(
    vocab_lengths: &BTreeSet<UnaryLength>,
    dataset: &Dataset,
) -> Result<BigUint, EncodeError> {
    let mut total = BigUint::zero();
    for entry in dataset.entries() {
        let l = match &entry.payload {
            Payload::Length(l) => l,
            Payload::Explicit(_) => return Err(EncodeError::ExpectedLength),
        };
        total += unary_direct_encode(vocab_lengths, l)?.total * entry.multiplicity;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::big;

    fn bin(text: &str) -> CharString {
        CharString::parse(text, Alphabet::BINARY).unwrap()
    }

    fn un(text: &str) -> CharString {
        CharString::parse(text, Alphabet::UNARY).unwrap()
    }

    fn vocab(alphabet: Alphabet, extra: &[&str]) -> Vocabulary {
        Vocabulary::with_tokens(
            alphabet,
            extra.iter().map(|t| CharString::parse(t, alphabet).unwrap()),
        )
        .unwrap()
    }

    fn merges(alphabet: Alphabet, pairs: &[(&str, &str)]) -> Vec<Merge> {
        pairs
            .iter()
            .map(|&(l, r)| {
                Merge::new(
                    Token::new(CharString::parse(l, alphabet).unwrap()).unwrap(),
                    Token::new(CharString::parse(r, alphabet).unwrap()).unwrap(),
                )
            })
            .collect()
    }

    #[test]
    fn direct_encode_basics() {
        let v = vocab(Alphabet::UNARY, &["aa", "aaa"]);
        assert_eq!(direct_count(&v, &un("aaa")).unwrap(), 1);
        // Alphabet only: one token per symbol.
        let sigma = Vocabulary::new(Alphabet::BINARY);
        assert_eq!(direct_count(&sigma, &bin("100110")).unwrap(), 6);
        let v = vocab(Alphabet::BINARY, &["10", "01", "101"]);
        assert_eq!(direct_count(&v, &bin("10101")).unwrap(), 2);
    }

    #[test]
    fn direct_encode_witness_reconstructs() {
        let v = vocab(Alphabet::BINARY, &["10", "01", "101", "00"]);
        for text in ["10101", "1001001", "0", "111000111"] {
            let c = bin(text);
            let tokens = direct_encode(&v, &c).unwrap();
            assert_eq!(crate::core::concat(&tokens), c);
        }
        assert_eq!(direct_encode(&v, &bin("")).unwrap().len(), 0);
    }

    #[test]
    fn direct_encode_deterministic_tie_break() {
        // "10101" splits as <101,01> or <10,101>; the earliest (start,len)
        // sequence prefers the 2-symbol token at position 0.
        let v = vocab(Alphabet::BINARY, &["10", "01", "101"]);
        let tokens = direct_encode(&v, &bin("10101")).unwrap();
        let rendered: Vec<String> = tokens
            .iter()
            .map(|t| t.content().render(Alphabet::BINARY))
            .collect();
        assert_eq!(rendered, vec!["10", "101"]);
    }

    #[test]
    fn bottomup_left_to_right_greedy() {
        let m = merges(Alphabet::BINARY, &[("0", "0")]);
        let out = bottomup_apply(&m, &bin("000"));
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].content(), &bin("00"));
        assert_eq!(out[1].content(), &bin("0"));
        // Empty merge list is the identity.
        assert_eq!(bottomup_apply(&[], &bin("0110")).len(), 4);
    }

    #[test]
    fn bottomup_merge_chain() {
        let m = merges(Alphabet::BINARY, &[("0", "0"), ("00", "00")]);
        assert_eq!(bottomup_apply(&m, &bin("0000")).len(), 1);
        assert_eq!(bottomup_apply(&m, &bin("00000")).len(), 2);
    }

    #[test]
    fn ope_vocab_examples() {
        let m = merges(Alphabet::UNARY, &[("a", "a"), ("aa", "a")]);
        let v = ope_vocab(&m, Alphabet::UNARY);
        assert_eq!(v.len(), 3);
        assert!(v.contains(&un("aaa")));
        assert_eq!(ope_vocab(&[], Alphabet::BINARY).len(), 2);
        let m = merges(Alphabet::BINARY, &[("1", "1"), ("0", "0")]);
        let v = ope_vocab(&m, Alphabet::BINARY);
        assert!(v.contains(&bin("11")) && v.contains(&bin("00")));
        assert_eq!(v.kappa(), 2);
    }

    #[test]
    fn ope_encode_equals_direct_on_extracted_vocab() {
        let m = merges(Alphabet::UNARY, &[("a", "a")]);
        assert_eq!(ope_encode(&m, Alphabet::UNARY, &un("aaaa")).unwrap().len(), 2);
        let m = merges(Alphabet::UNARY, &[("a", "a"), ("aa", "aa")]);
        assert_eq!(ope_encode(&m, Alphabet::UNARY, &un("aaaa")).unwrap().len(), 1);
    }

    #[test]
    fn unary_change_making() {
        let lengths: BTreeSet<_> = [1u64, 3, 4].iter().map(|&x| big(x)).collect();
        let enc = unary_direct_encode(&lengths, &big(6)).unwrap();
        assert_eq!(enc.total, big(2)); // 3 + 3
        let ones: BTreeSet<_> = [big(1)].into_iter().collect();
        assert_eq!(unary_direct_encode(&ones, &big(7)).unwrap().total, big(7));
        let missing: BTreeSet<_> = [big(2)].into_iter().collect();
        assert!(unary_direct_encode(&missing, &big(4)).is_err());
    }

    #[test]
    fn unary_coin_vectors_sum_back() {
        let lengths: BTreeSet<_> = [1u64, 5, 7, 11].iter().map(|&x| big(x)).collect();
        for l in [0u64, 1, 4, 12, 23, 100] {
            let enc = unary_direct_encode(&lengths, &big(l)).unwrap();
            let sum: BigUint = enc.coins.iter().map(|(c, k)| c * k).sum();
            assert_eq!(sum, big(l));
            let count: BigUint = enc.coins.iter().map(|(_, k)| k.clone()).sum();
            assert_eq!(count, enc.total);
        }
    }

    #[test]
    fn unary_engines_agree() {
        let lengths: BTreeSet<_> = [1u64, 6, 10].iter().map(|&x| big(x)).collect();
        let small = UnaryConfig {
            dp_bound: 0,
            ..UnaryConfig::default()
        };
        for l in [1u64, 12, 18, 30, 47] {
            let dp = unary_direct_encode(&lengths, &big(l)).unwrap();
            let id = unary_direct_encode_with(&small, &lengths, &big(l)).unwrap();
            assert_eq!(dp.total, id.total, "L = {}", l);
        }
    }

    #[test]
    fn unary_huge_length_structured() {
        // A coin set shaped like the unary reductions: a giant offset plus
        // per-item values; optima have depth <= 3.
        let b = big(10).pow(40);
        let e1 = big(123456789);
        let e2 = big(987654321);
        let lengths: BTreeSet<_> =
            [big(1), e1.clone(), e2.clone(), b.clone(), &e1 + &b].into_iter().collect();
        let enc = unary_direct_encode(&lengths, &(&e1 + &b)).unwrap();
        assert_eq!(enc.total, big(1));
        let enc = unary_direct_encode(&lengths, &(&e2 + &b)).unwrap();
        assert_eq!(enc.total, big(2));
        // e1 + e2 + b decomposes as (e1 + b) + e2.
        let enc = unary_direct_encode(&lengths, &(&e1 + &e2 + &b)).unwrap();
        assert_eq!(enc.total, big(2));
        let enc = unary_direct_encode(&lengths, &(&e1 + &e1 + &b)).unwrap();
        assert_eq!(enc.total, big(2));
        let enc = unary_direct_encode(&lengths, &(&e1 + &e2 + &e2 + &b)).unwrap();
        assert_eq!(enc.total, big(3));
    }

    #[test]
    fn direct_count_never_above_bottomup() {
        let pairs = [("0", "1"), ("01", "01"), ("1", "0")];
        let m = merges(Alphabet::BINARY, &pairs);
        let v = ope_vocab(&m, Alphabet::BINARY);
        for text in ["0101", "010101", "10011010", "0110"] {
            let c = bin(text);
            let d = direct_count(&v, &c).unwrap();
            let b = bottomup_apply(&m, &c).len();
            assert!(d <= b && b <= c.len(), "{}: {} <= {} <= {}", text, d, b, c.len());
        }
    }
}
