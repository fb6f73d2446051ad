//! Plain-text instance and witness file formats (DIMACS-inspired).
//!
//! Every format is a header line starting with `p` followed by a body;
//! `parse` and `render` are exact inverses on valid in-memory values.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use num::bigint::BigUint;
use thiserror::Error;

use crate::core::{
    Alphabet, CharString, CoreError, Dataset, GapInstance, Lit, Max2SatInstance, Merge, Mode,
    Payload, Representation, Token, TokenisationInstance, UnaryLength, VcInstance,
};

#[derive(Debug, Error)]
#[error("line {line}: {msg}")]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        msg: msg.into(),
    })
}

fn core_err(line: usize, e: CoreError) -> FormatError {
    FormatError {
        line,
        msg: e.to_string(),
    }
}

fn field<T: FromStr>(parts: &[&str], idx: usize, line: usize, what: &str) -> Result<T, FormatError> {
    let raw = parts
        .get(idx)
        .ok_or_else(|| FormatError {
            line,
            msg: format!("missing {}", what),
        })?;
    raw.parse().map_err(|_| FormatError {
        line,
        msg: format!("bad {}: {:?}", what, raw),
    })
}

/// Numbered non-blank lines; blank lines are skipped but keep their
/// one-based numbers for error reporting.
fn lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

// --- MAX2SAT ---------------------------------------------------------------

pub fn parse_m2s(text: &str) -> Result<Max2SatInstance, FormatError> {
    let lines = lines(text);
    let Some(&(hline, header)) = lines.first() else {
        return err(1, "empty file");
    };
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 5 || parts[0] != "p" || parts[1] != "m2s" {
        return err(hline, "expected header `p m2s <J> <C> <F>`");
    }
    let num_vars: usize = field(&parts, 2, hline, "J")?;
    let num_clauses: usize = field(&parts, 3, hline, "C")?;
    let target: u64 = field(&parts, 4, hline, "F")?;
    let body = &lines[1..];
    if body.len() != num_clauses {
        return err(hline, format!("header says {} clauses, found {}", num_clauses, body.len()));
    }
    let mut clauses = Vec::with_capacity(num_clauses);
    for &(ln, l) in body {
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 2 {
            return err(ln, "expected `<l1> <l2>`");
        }
        let lit = |idx: usize| -> Result<Lit, FormatError> {
            let raw: i64 = field(&parts, idx, ln, "literal")?;
            if raw == 0 || raw.unsigned_abs() as usize > num_vars {
                return err(ln, format!("literal {} out of range", raw));
            }
            Ok(Lit {
                var: raw.unsigned_abs() as usize - 1,
                negated: raw < 0,
            })
        };
        clauses.push((lit(0)?, lit(1)?));
    }
    Max2SatInstance::new(num_vars, clauses, target).map_err(|e| core_err(hline, e))
}

pub fn render_m2s(inst: &Max2SatInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "p m2s {} {} {}",
        inst.num_vars,
        inst.num_clauses(),
        inst.target
    );
    let signed = |l: Lit| {
        let v = (l.var + 1) as i64;
        if l.negated {
            -v
        } else {
            v
        }
    };
    for &(l1, l2) in &inst.clauses {
        let _ = writeln!(out, "{} {}", signed(l1), signed(l2));
    }
    out
}

// --- Vertex cover ----------------------------------------------------------

pub fn parse_vc(text: &str) -> Result<VcInstance, FormatError> {
    let lines = lines(text);
    let Some(&(hline, header)) = lines.first() else {
        return err(1, "empty file");
    };
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 5 || parts[0] != "p" || parts[1] != "vc" {
        return err(hline, "expected header `p vc <n> <m> <k>`");
    }
    let n: usize = field(&parts, 2, hline, "n")?;
    let m: usize = field(&parts, 3, hline, "m")?;
    let k: usize = field(&parts, 4, hline, "k")?;
    let body = &lines[1..];
    if body.len() != m {
        return err(hline, format!("header says {} edges, found {}", m, body.len()));
    }
    let mut edges = Vec::with_capacity(m);
    for &(ln, l) in body {
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 2 {
            return err(ln, "expected `<u> <v>`");
        }
        let u: usize = field(&parts, 0, ln, "u")?;
        let v: usize = field(&parts, 1, ln, "v")?;
        if u == 0 || v == 0 || u > n || v > n {
            return err(ln, "endpoint out of range");
        }
        edges.push((u - 1, v - 1));
    }
    VcInstance::new(n, edges, k).map_err(|e| core_err(hline, e))
}

pub fn render_vc(inst: &VcInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p vc {} {} {}", inst.n, inst.m(), inst.k);
    for &(u, v) in &inst.edges {
        let _ = writeln!(out, "{} {}", u + 1, v + 1);
    }
    out
}

// --- Addition chain --------------------------------------------------------

pub fn parse_ac(text: &str) -> Result<crate::core::AddChainInstance, FormatError> {
    let lines = lines(text);
    let Some(&(hline, header)) = lines.first() else {
        return err(1, "empty file");
    };
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "p" || parts[1] != "ac" {
        return err(hline, "expected header `p ac <T> <zeta>`");
    }
    let t: usize = field(&parts, 2, hline, "T")?;
    let zeta: usize = field(&parts, 3, hline, "zeta")?;
    let body = &lines[1..];
    if body.len() != 1 {
        return err(hline, "expected exactly one target line");
    }
    let (ln, l) = body[0];
    let raw: Vec<&str> = l.split_whitespace().collect();
    if raw.len() != t {
        return err(ln, format!("header says {} targets, found {}", t, raw.len()));
    }
    let mut targets = BTreeSet::new();
    for (i, _) in raw.iter().enumerate() {
        let v: u64 = field(&raw, i, ln, "target")?;
        if !targets.insert(v) {
            return err(ln, format!("duplicate target {}", v));
        }
    }
    crate::core::AddChainInstance::new(targets, zeta).map_err(|e| core_err(hline, e))
}

pub fn render_ac(inst: &crate::core::AddChainInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p ac {} {}", inst.targets.len(), inst.zeta);
    let targets: Vec<String> = inst.targets.iter().map(|t| t.to_string()).collect();
    let _ = writeln!(out, "{}", targets.join(" "));
    out
}

// --- Tokenisation ----------------------------------------------------------

/// In-memory form of a `.tok` file. A gap instance carries the same header
/// (delta echoes delta_minus) plus a trailing `g` line.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TokFile {
    pub dataset: Dataset,
    pub kappa: usize,
    pub delta: BigUint,
    pub mode: Mode,
    pub gap: Option<(BigUint, BigUint)>,
}

impl TokFile {
    pub fn from_instance(inst: &TokenisationInstance) -> TokFile {
        TokFile {
            dataset: inst.dataset.clone(),
            kappa: inst.kappa,
            delta: inst.delta.clone(),
            mode: inst.mode,
            gap: None,
        }
    }

    pub fn from_gap(inst: &GapInstance) -> TokFile {
        TokFile {
            dataset: inst.dataset.clone(),
            kappa: inst.kappa,
            delta: inst.delta_minus.clone(),
            mode: inst.mode,
            gap: Some((inst.delta_minus.clone(), inst.delta_plus.clone())),
        }
    }
}

fn mode_str(mode: Mode) -> &'static str {
    match mode {
        Mode::Direct => "direct",
        Mode::BottomUp => "bottomup",
        Mode::Ope => "ope",
    }
}

pub fn parse_tok(text: &str) -> Result<TokFile, FormatError> {
    let lines = lines(text);
    let Some(&(hline, header)) = lines.first() else {
        return err(1, "empty file");
    };
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 8 || parts[0] != "p" || parts[1] != "tok" {
        return err(
            hline,
            "expected header `p tok <alphabet> <entries> <kappa> <delta> <mode> <repr>`",
        );
    }
    let alpha_size: usize = field(&parts, 2, hline, "alphabet size")?;
    if alpha_size == 0 {
        return err(hline, "alphabet size must be positive");
    }
    let n_entries: usize = field(&parts, 3, hline, "entry count")?;
    let kappa: usize = field(&parts, 4, hline, "kappa")?;
    let delta = BigUint::parse_bytes(parts[5].as_bytes(), 10)
        .ok_or_else(|| FormatError {
            line: hline,
            msg: format!("bad delta: {:?}", parts[5]),
        })?;
    let mode = match parts[6] {
        "direct" => Mode::Direct,
        "bottomup" => Mode::BottomUp,
        "ope" => Mode::Ope,
        other => return err(hline, format!("unknown mode {:?}", other)),
    };
    let repr = match parts[7] {
        "explicit" => Representation::Explicit,
        "length" => Representation::Length,
        other => return err(hline, format!("unknown representation {:?}", other)),
    };
    let alphabet = Alphabet::new(alpha_size);

    let mut body = &lines[1..];
    let mut gap = None;
    if let Some(&(ln, last)) = body.last() {
        if last.starts_with("g ") || last == "g" {
            let parts: Vec<&str> = last.split_whitespace().collect();
            if parts.len() != 3 {
                return err(ln, "expected `g <delta_minus> <delta_plus>`");
            }
            let parse_big = |s: &str| {
                BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| FormatError {
                    line: ln,
                    msg: format!("bad gap bound: {:?}", s),
                })
            };
            gap = Some((parse_big(parts[1])?, parse_big(parts[2])?));
            body = &body[..body.len() - 1];
        }
    }
    if body.len() != n_entries {
        return err(
            hline,
            format!("header says {} entries, found {}", n_entries, body.len()),
        );
    }

    let mut explicit = Vec::new();
    let mut lengths_body = Vec::new();
    for &(ln, l) in body {
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 2 {
            return err(ln, "expected `<multiplicity> <payload>`");
        }
        let mult: u64 = field(&parts, 0, ln, "multiplicity")?;
        match repr {
            Representation::Explicit => {
                let s = CharString::parse(parts[1], alphabet).map_err(|e| core_err(ln, e))?;
                explicit.push((s, mult));
            }
            Representation::Length => {
                let len = BigUint::parse_bytes(parts[1].as_bytes(), 10).ok_or_else(|| {
                    FormatError {
                        line: ln,
                        msg: format!("bad length: {:?}", parts[1]),
                    }
                })?;
                lengths_body.push((len, mult));
            }
        }
    }
    let dataset = match repr {
        Representation::Explicit => {
            Dataset::explicit(alphabet, explicit).map_err(|e| core_err(hline, e))?
        }
        Representation::Length => Dataset::lengths(lengths_body),
    };
    Ok(TokFile {
        dataset,
        kappa,
        delta,
        mode,
        gap,
    })
}

pub fn render_tok(file: &TokFile) -> String {
    let mut out = String::new();
    let repr = match file.dataset.representation() {
        Representation::Explicit => "explicit",
        Representation::Length => "length",
    };
    let _ = writeln!(
        out,
        "p tok {} {} {} {} {} {}",
        file.dataset.alphabet().size(),
        file.dataset.len(),
        file.kappa,
        file.delta,
        mode_str(file.mode),
        repr
    );
    for entry in file.dataset.entries() {
        match &entry.payload {
            Payload::Explicit(c) => {
                let _ = writeln!(
                    out,
                    "{} {}",
                    entry.multiplicity,
                    c.render(file.dataset.alphabet())
                );
            }
            Payload::Length(l) => {
                let _ = writeln!(out, "{} {}", entry.multiplicity, l);
            }
        }
    }
    if let Some((minus, plus)) = &file.gap {
        let _ = writeln!(out, "g {} {}", minus, plus);
    }
    out
}

// --- Witness files ---------------------------------------------------------

/// Parsed witness body: `v` lines in order, then `m` lines in order. A file
/// normally carries only one kind.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WitnessFile {
    pub tokens: Vec<CharString>,
    pub merges: Vec<Merge>,
}

pub fn parse_witness(text: &str, alphabet: Alphabet) -> Result<WitnessFile, FormatError> {
    let mut out = WitnessFile::default();
    for (ln, l) in lines(text) {
        let parts: Vec<&str> = l.split_whitespace().collect();
        match parts.first() {
            Some(&"v") if parts.len() == 2 => {
                out.tokens
                    .push(CharString::parse(parts[1], alphabet).map_err(|e| core_err(ln, e))?);
            }
            Some(&"m") if parts.len() == 3 => {
                let tok = |s: &str| -> Result<Token, FormatError> {
                    Token::new(CharString::parse(s, alphabet).map_err(|e| core_err(ln, e))?)
                        .map_err(|e| core_err(ln, e))
                };
                out.merges.push(Merge::new(tok(parts[1])?, tok(parts[2])?));
            }
            _ => return err(ln, "expected `v <token>` or `m <left> <right>`"),
        }
    }
    Ok(out)
}

pub fn render_witness(file: &WitnessFile, alphabet: Alphabet) -> String {
    let mut out = String::new();
    for t in &file.tokens {
        let _ = writeln!(out, "v {}", t.render(alphabet));
    }
    for m in &file.merges {
        let _ = writeln!(
            out,
            "m {} {}",
            m.left.content().render(alphabet),
            m.right.content().render(alphabet)
        );
    }
    out
}

/// Witness for a length-representation unary instance: `v` lines carrying
/// decimal lengths instead of glyph strings.
pub fn parse_length_witness(text: &str) -> Result<BTreeSet<UnaryLength>, FormatError> {
    let mut out = BTreeSet::new();
    for (ln, l) in lines(text) {
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 2 || parts[0] != "v" {
            return err(ln, "expected `v <decimal length>`");
        }
        let len = BigUint::parse_bytes(parts[1].as_bytes(), 10).ok_or_else(|| FormatError {
            line: ln,
            msg: format!("bad length: {:?}", parts[1]),
        })?;
        out.insert(len);
    }
    Ok(out)
}

pub fn render_length_witness(lengths: &BTreeSet<UnaryLength>) -> String {
    let mut out = String::new();
    for l in lengths {
        let _ = writeln!(out, "v {}", l);
    }
    out
}
