//! Shared domain types: alphabets, character-strings, vocabularies, merge
//! sequences, datasets, the decision-problem instances, and the two
//! compression objectives with exact rational approximation ratios.

use std::collections::BTreeSet;
use std::fmt;

use num::bigint::BigUint;
use num::rational::BigRational;
use num::{BigInt, One, Zero};
use thiserror::Error;

/// A symbol is an index into an alphabet.
pub type Symbol = u8;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("count list has {got} entries but dataset has {want}")]
    CountMismatch { got: usize, want: usize },
    #[error("token count {count} exceeds string length {len}")]
    CountExceedsLength { count: BigUint, len: BigUint },
    #[error("approximation ratio denominator is zero")]
    DivisionByZero,
    #[error("achieved reduction {achieved} exceeds optimal reduction {optimal}")]
    ReduceOrder { achieved: BigUint, optimal: BigUint },
    #[error("symbol {0} is outside alphabet of size {1}")]
    SymbolOutOfRange(Symbol, usize),
    #[error("glyph {0:?} is not valid for an alphabet of size {1}")]
    BadGlyph(char, usize),
    #[error("token content must be nonempty")]
    EmptyToken,
    #[error("length representation requires a unary alphabet, got size {0}")]
    LengthReprNotUnary(usize),
    #[error("malformed MAX2SAT instance: {0}")]
    BadMax2Sat(String),
    #[error("malformed vertex-cover instance: {0}")]
    BadVc(String),
    #[error("malformed addition-chain instance: {0}")]
    BadAddChain(String),
}

/// A finite alphabet of `size` symbols. Symbols are the indices `0..size`.
///
/// Rendering uses '0'/'1' for the binary alphabet, 'a' for the unary one,
/// and 'a','b','c',... for anything larger (debug output only; instance
/// files never carry alphabets above size 2).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Alphabet {
    size: usize,
}

impl Alphabet {
    pub const UNARY: Alphabet = Alphabet { size: 1 };
    pub const BINARY: Alphabet = Alphabet { size: 2 };

    pub fn new(size: usize) -> Alphabet {
        assert!(size >= 1, "alphabet must have at least one symbol");
        assert!(size <= Symbol::MAX as usize + 1);
        Alphabet { size }
    }

    pub fn size(self) -> usize {
        self.size
    }

    pub fn symbols(self) -> impl Iterator<Item = Symbol> {
        (0..self.size as Symbol).into_iter()
    }

    pub fn glyph(self, sym: Symbol) -> char {
        debug_assert!((sym as usize) < self.size);
        match self.size {
            2 => char::from(b'0' + sym),
            _ => char::from(b'a' + sym),
        }
    }

    pub fn symbol_of(self, glyph: char) -> Result<Symbol, CoreError> {
        let sym = match (self.size, glyph) {
            (2, '0') => 0,
            (2, '1') => 1,
            (n, c) if n != 2 && c.is_ascii_lowercase() => c as Symbol - b'a',
            (n, c) => return Err(CoreError::BadGlyph(c, n)),
        };
        if (sym as usize) < self.size {
            Ok(sym)
        } else {
            Err(CoreError::BadGlyph(glyph, self.size))
        }
    }
}

/// A finite sequence of alphabet indices. Emptiness is allowed; operations
/// that need nonemptiness (tokens) enforce it themselves.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CharString(Vec<Symbol>);

impl CharString {
    pub fn new(symbols: Vec<Symbol>) -> CharString {
        CharString(symbols)
    }

    pub fn empty() -> CharString {
        CharString(Vec::new())
    }

    /// `count` copies of `sym`.
    pub fn repeated(sym: Symbol, count: usize) -> CharString {
        CharString(vec![sym; count])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn append(&self, other: &CharString) -> CharString {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        CharString(v)
    }

    pub fn check_over(&self, alphabet: Alphabet) -> Result<(), CoreError> {
        for &s in &self.0 {
            if s as usize >= alphabet.size() {
                return Err(CoreError::SymbolOutOfRange(s, alphabet.size()));
            }
        }
        Ok(())
    }

    pub fn render(&self, alphabet: Alphabet) -> String {
        self.0.iter().map(|&s| alphabet.glyph(s)).collect()
    }

    pub fn parse(text: &str, alphabet: Alphabet) -> Result<CharString, CoreError> {
        text.chars()
            .map(|c| alphabet.symbol_of(c))
            .collect::<Result<Vec<_>, _>>()
            .map(CharString)
    }
}

impl fmt::Debug for CharString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Debug rendering assumes digits for symbols 0 and 1; fine for
        // every string this crate constructs.
        write!(f, "\"")?;
        for &s in &self.0 {
            write!(f, "{}", s)?;
        }
        write!(f, "\"")
    }
}

/// Length-only encoding of a unary string.
pub type UnaryLength = BigUint;

/// A nonempty span usable as a vocabulary element or merge operand.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Token(CharString);

impl Token {
    pub fn new(content: CharString) -> Result<Token, CoreError> {
        if content.is_empty() {
            Err(CoreError::EmptyToken)
        } else {
            Ok(Token(content))
        }
    }

    pub fn single(sym: Symbol) -> Token {
        Token(CharString(vec![sym]))
    }

    pub fn content(&self) -> &CharString {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn symbols(&self) -> &[Symbol] {
        self.0.symbols()
    }
}

/// Concatenation of a subword sequence; this is also detokenisation.
pub fn concat(subwords: &[Token]) -> CharString {
    let mut v = Vec::with_capacity(subwords.iter().map(Token::len).sum());
    for t in subwords {
        v.extend_from_slice(t.symbols());
    }
    CharString(v)
}

/// A vocabulary always contains every single-symbol string of its alphabet,
/// so `|V| = |Sigma| + kappa` where `kappa` counts the longer tokens.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vocabulary {
    alphabet: Alphabet,
    tokens: BTreeSet<Token>,
}

impl Vocabulary {
    pub fn new(alphabet: Alphabet) -> Vocabulary {
        let tokens = alphabet.symbols().map(Token::single).collect();
        Vocabulary { alphabet, tokens }
    }

    pub fn with_tokens<I>(alphabet: Alphabet, extra: I) -> Result<Vocabulary, CoreError>
    where
        I: IntoIterator<Item = CharString>,
    {
        let mut v = Vocabulary::new(alphabet);
        for content in extra {
            v.insert(content)?;
        }
        Ok(v)
    }

    pub fn insert(&mut self, content: CharString) -> Result<bool, CoreError> {
        content.check_over(self.alphabet)?;
        Ok(self.tokens.insert(Token::new(content)?))
    }

    pub fn remove(&mut self, content: &CharString) -> bool {
        if content.len() <= 1 {
            return false; // alphabet tokens are permanent
        }
        match Token::new(content.clone()) {
            Ok(t) => self.tokens.remove(&t),
            Err(_) => false,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn contains(&self, content: &CharString) -> bool {
        match Token::new(content.clone()) {
            Ok(t) => self.tokens.contains(&t),
            Err(_) => false,
        }
    }

    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter()
    }

    /// Non-alphabet tokens, i.e. those counted by kappa.
    pub fn extra_tokens(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| t.len() >= 2)
    }

    pub fn kappa(&self) -> usize {
        self.extra_tokens().count()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }
}

/// An ordered merge pair; the merge introduces the token `left ∘ right`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Merge {
    pub left: Token,
    pub right: Token,
}

impl Merge {
    pub fn new(left: Token, right: Token) -> Merge {
        Merge { left, right }
    }

    pub fn product(&self) -> Token {
        Token(self.left.content().append(self.right.content()))
    }
}

/// Sequence order is significant for bottom-up application.
pub type MergeSequence = Vec<Merge>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Representation {
    Explicit,
    Length,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Payload {
    Explicit(CharString),
    Length(UnaryLength),
}

impl Payload {
    pub fn length(&self) -> BigUint {
        match self {
            Payload::Explicit(c) => BigUint::from(c.len()),
            Payload::Length(l) => l.clone(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DatasetEntry {
    pub payload: Payload,
    pub multiplicity: u64,
}

/// A multiset of character-strings with symbolic multiplicities.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dataset {
    alphabet: Alphabet,
    representation: Representation,
    entries: Vec<DatasetEntry>,
}

impl Dataset {
    pub fn explicit<I>(alphabet: Alphabet, entries: I) -> Result<Dataset, CoreError>
    where
        I: IntoIterator<Item = (CharString, u64)>,
    {
        let entries = entries
            .into_iter()
            .map(|(c, m)| {
                assert!(m >= 1, "multiplicities must be positive");
                c.check_over(alphabet)?;
                Ok(DatasetEntry {
                    payload: Payload::Explicit(c),
                    multiplicity: m,
                })
            })
            .collect::<Result<Vec<_>, CoreError>>()?;
        Ok(Dataset {
            alphabet,
            representation: Representation::Explicit,
            entries,
        })
    }

    pub fn lengths<I>(entries: I) -> Dataset
    where
        I: IntoIterator<Item = (UnaryLength, u64)>,
    {
        let entries = entries
            .into_iter()
            .map(|(l, m)| {
                assert!(m >= 1, "multiplicities must be positive");
                DatasetEntry {
                    payload: Payload::Length(l),
                    multiplicity: m,
                }
            })
            .collect();
        Dataset {
            alphabet: Alphabet::UNARY,
            representation: Representation::Length,
            entries,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn entries(&self) -> &[DatasetEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total raw symbol count, multiplicities included.
    pub fn total_size(&self) -> BigUint {
        let mut total = BigUint::zero();
        for e in &self.entries {
            total += e.payload.length() * e.multiplicity;
        }
        total
    }

    /// Sum of multiplicities; the floor on any achievable token count as
    /// long as every string is nonempty.
    pub fn total_multiplicity(&self) -> BigUint {
        self.entries
            .iter()
            .map(|e| BigUint::from(e.multiplicity))
            .sum()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Direct,
    BottomUp,
    Ope,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Direct => "direct",
            Mode::BottomUp => "bottomup",
            Mode::Ope => "ope",
        })
    }
}

/// Decision instance: can `dataset` be compressed to at most `delta` tokens
/// with a budget of `kappa` extra tokens (or merges)?
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TokenisationInstance {
    pub dataset: Dataset,
    pub kappa: usize,
    pub delta: BigUint,
    pub mode: Mode,
}

/// Gap instance: the optimum is promised to be at most `delta_plus` (YES)
/// or at least `delta_minus` (NO).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GapInstance {
    pub dataset: Dataset,
    pub kappa: usize,
    pub mode: Mode,
    pub delta_minus: BigUint,
    pub delta_plus: BigUint,
}

/// A literal: a variable index (0-based) with a polarity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Lit {
        Lit { var, negated: true }
    }

    pub fn eval(self, s: &Assignment) -> bool {
        s.values[self.var] != self.negated
    }
}

/// 3-OCC-MAX2SAT: every variable occurs in exactly three clauses, so
/// C = 3J/2 and J is even.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Max2SatInstance {
    pub num_vars: usize,
    pub clauses: Vec<(Lit, Lit)>,
    pub target: u64,
}

impl Max2SatInstance {
    pub fn new(
        num_vars: usize,
        clauses: Vec<(Lit, Lit)>,
        target: u64,
    ) -> Result<Max2SatInstance, CoreError> {
        let inst = Max2SatInstance {
            num_vars,
            clauses,
            target,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        let mut occ = vec![0usize; self.num_vars];
        for &(l1, l2) in &self.clauses {
            for l in [l1, l2] {
                if l.var >= self.num_vars {
                    return Err(CoreError::BadMax2Sat(format!(
                        "literal references variable {} but J = {}",
                        l.var + 1,
                        self.num_vars
                    )));
                }
                occ[l.var] += 1;
            }
        }
        for (v, &count) in occ.iter().enumerate() {
            if count != 3 {
                return Err(CoreError::BadMax2Sat(format!(
                    "variable {} occurs {} times, expected 3",
                    v + 1,
                    count
                )));
            }
        }
        if 2 * self.clauses.len() != 3 * self.num_vars {
            return Err(CoreError::BadMax2Sat(format!(
                "C = {} but 3J/2 = {}",
                self.clauses.len(),
                3 * self.num_vars / 2
            )));
        }
        Ok(())
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Number of clauses satisfied by `s`.
    pub fn count_satisfied(&self, s: &Assignment) -> u64 {
        assert_eq!(s.values.len(), self.num_vars);
        self.clauses
            .iter()
            .filter(|&&(l1, l2)| l1.eval(s) || l2.eval(s))
            .count() as u64
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Assignment {
    pub values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Assignment {
        Assignment { values }
    }

    /// The `bits`-indexed assignment over `len` variables; variable j is
    /// true when bit j of `bits` is set. Used for exhaustive enumeration.
    pub fn from_bits(bits: u64, len: usize) -> Assignment {
        Assignment {
            values: (0..len).map(|j| bits >> j & 1 == 1).collect(),
        }
    }
}

/// Vertex-cover instance over a simple graph; vertices are 0-based.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VcInstance {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub k: usize,
}

impl VcInstance {
    pub fn new(n: usize, edges: Vec<(usize, usize)>, k: usize) -> Result<VcInstance, CoreError> {
        let inst = VcInstance { n, edges, k };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if self.k > self.n {
            return Err(CoreError::BadVc(format!(
                "budget k = {} exceeds n = {}",
                self.k, self.n
            )));
        }
        let mut seen = BTreeSet::new();
        for &(u, v) in &self.edges {
            if u >= self.n || v >= self.n {
                return Err(CoreError::BadVc(format!(
                    "edge ({}, {}) out of range for n = {}",
                    u + 1,
                    v + 1,
                    self.n
                )));
            }
            if u == v {
                return Err(CoreError::BadVc(format!("self-loop at vertex {}", u + 1)));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(CoreError::BadVc(format!(
                    "duplicate edge ({}, {})",
                    u + 1,
                    v + 1
                )));
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_cover(&self, cover: &BTreeSet<usize>) -> bool {
        self.edges
            .iter()
            .all(|&(u, v)| cover.contains(&u) || cover.contains(&v))
    }
}

/// Addition-chain instance: cover every target with a chain of length at
/// most zeta starting from 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AddChainInstance {
    pub targets: BTreeSet<u64>,
    pub zeta: usize,
}

impl AddChainInstance {
    pub fn new(targets: BTreeSet<u64>, zeta: usize) -> Result<AddChainInstance, CoreError> {
        if targets.is_empty() {
            return Err(CoreError::BadAddChain("empty target set".into()));
        }
        if targets.contains(&0) {
            return Err(CoreError::BadAddChain("targets must be positive".into()));
        }
        Ok(AddChainInstance { targets, zeta })
    }
}

/// NP certificate for unary direct tokenisation: the vocabulary as a length
/// set plus one coin vector per dataset entry, aligned with `vocab_lengths`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnaryCertificate {
    pub vocab_lengths: Vec<UnaryLength>,
    pub coin_assignments: Vec<Vec<BigUint>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ObjectiveKind {
    Length,
    Reduce,
}

/// Total compressed size: sum over entries of multiplicity times token count.
pub fn objective_length(counts: &[BigUint], dataset: &Dataset) -> Result<BigUint, CoreError> {
    if counts.len() != dataset.len() {
        return Err(CoreError::CountMismatch {
            got: counts.len(),
            want: dataset.len(),
        });
    }
    let mut total = BigUint::zero();
    for (count, entry) in counts.iter().zip(dataset.entries()) {
        total += count * entry.multiplicity;
    }
    Ok(total)
}

/// Total number of reduced symbols: sum of multiplicity times (|c| - |tau(c)|).
/// Reported as a nonnegative reduction.
pub fn objective_reduce(counts: &[BigUint], dataset: &Dataset) -> Result<BigUint, CoreError> {
    if counts.len() != dataset.len() {
        return Err(CoreError::CountMismatch {
            got: counts.len(),
            want: dataset.len(),
        });
    }
    let mut total = BigUint::zero();
    for (count, entry) in counts.iter().zip(dataset.entries()) {
        let len = entry.payload.length();
        if count > &len {
            return Err(CoreError::CountExceedsLength {
                count: count.clone(),
                len,
            });
        }
        total += (len - count) * entry.multiplicity;
    }
    Ok(total)
}

/// Exact approximation ratio, always at least 1 for valid inputs. The
/// reduce objective is a maximisation, so its ratio is inverted.
pub fn approximation_ratio(
    achieved: &BigUint,
    optimal: &BigUint,
    objective: ObjectiveKind,
) -> Result<BigRational, CoreError> {
    let (num, den) = match objective {
        ObjectiveKind::Length => (achieved, optimal),
        ObjectiveKind::Reduce => {
            if achieved > optimal {
                return Err(CoreError::ReduceOrder {
                    achieved: achieved.clone(),
                    optimal: optimal.clone(),
                });
            }
            (optimal, achieved)
        }
    };
    if den.is_zero() {
        return Err(CoreError::DivisionByZero);
    }
    Ok(BigRational::new(
        BigInt::from(num.clone()),
        BigInt::from(den.clone()),
    ))
}

/// Convenience constructor for exact rationals in tests and gap formulas.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

pub fn one() -> BigUint {
    BigUint::one()
}
