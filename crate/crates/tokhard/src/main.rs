//! Command-line frontend.
//!
//! Exit codes: 0 success/PASS, 1 usage error, 2 verification FAIL,
//! 3 oracle budget exhausted.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num::bigint::BigInt;
use num::rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tokhard::core::{
    Assignment, Mode, Representation, VcInstance,
};
use tokhard::encoders;
use tokhard::formats::{self, TokFile, WitnessFile};
use tokhard::harness;
use tokhard::oracles::{self, OracleError, SearchBudget};
use tokhard::reductions;
use tokhard::witnesses;

const EXIT_FAIL: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "tokhard", version, about = "Tokenisation hardness toolkit")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Search-node budget for the exact oracles.
    #[arg(long, global = true)]
    budget_nodes: Option<u64>,
    /// Wall-clock budget in seconds (also via TOKHARD_BUDGET_SECONDS).
    #[arg(long, global = true)]
    budget_seconds: Option<u64>,
    /// Report style.
    #[arg(long, global = true, value_enum, default_value_t = ReportStyle::Text)]
    report: ReportStyle,
    /// RNG seed for randomised commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportStyle {
    Text,
    Kv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    D2tok,
    B2tok,
    D1tok,
    Uope,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a source instance to a tokenisation instance.
    Reduce {
        src: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        /// Output path; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a witness file against a tokenisation instance.
    Encode {
        tok: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Run the matching exact solver on any instance file.
    Solve { file: PathBuf },
    /// Build a witness file from a source-problem solution.
    Witness {
        src: PathBuf,
        /// Truth assignment as a 0/1 string, most significant variable first.
        #[arg(long)]
        assignment: Option<String>,
        /// Comma-separated 1-based cover vertices.
        #[arg(long)]
        cover: Option<String>,
        /// Comma-separated addition chain starting at 1.
        #[arg(long)]
        chain: Option<String>,
        /// Reduction variant for MAX2SAT sources.
        #[arg(long, value_enum, default_value_t = Target::D2tok)]
        to: Target,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run the full equivalence pipeline for a source instance.
    Verify {
        src: PathBuf,
        /// Reduction variant for MAX2SAT sources.
        #[arg(long, value_enum)]
        to: Option<Target>,
    },
    /// Build the inapproximability gap instance and print its ratio.
    Gap {
        m2s: PathBuf,
        /// Epsilon in [0, 1/2], as an integer or `p/q` fraction.
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_enum, default_value_t = Target::D2tok)]
        to: Target,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compare greedy BPE against the exact oracle.
    Bench {
        tok: PathBuf,
        /// Use the greedy BPE baseline (the only baseline available).
        #[arg(long, default_value_t = true)]
        greedy: bool,
    },
    /// Internal consistency checks: constants, clause replay, sum sweeps.
    Selftest,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successes; everything else is usage.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            if is_budget(&e) {
                eprintln!("budget exhausted: {:#}", e);
                ExitCode::from(EXIT_BUDGET)
            } else {
                eprintln!("error: {:#}", e);
                ExitCode::from(1)
            }
        }
    }
}

fn is_budget(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        matches!(c.downcast_ref(), Some(OracleError::BudgetExhausted { .. }))
            || matches!(
                c.downcast_ref(),
                Some(encoders::EncodeError::BudgetExhausted { .. })
            )
    })
}

fn budget_from(args: &GlobalArgs) -> SearchBudget {
    let mut b = SearchBudget::default();
    if let Some(n) = args.budget_nodes {
        b.max_nodes = n;
    }
    let seconds = args.budget_seconds.or_else(|| {
        std::env::var("TOKHARD_BUDGET_SECONDS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(s) = seconds {
        b.time_limit = Duration::from_secs(s);
    }
    b
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", text),
    }
    Ok(())
}

fn extension(path: &Path) -> Result<&str> {
    path.extension()
        .and_then(|e| e.to_str())
        .ok_or_else(|| anyhow!("{}: cannot tell the format without an extension", path.display()))
}

fn parse_rational(text: &str) -> Result<BigRational> {
    let mk = |s: &str| -> Result<BigInt> {
        BigInt::from_str(s.trim()).map_err(|_| anyhow!("bad number {:?}", s))
    };
    match text.split_once('/') {
        Some((p, q)) => {
            let den = mk(q)?;
            if den == BigInt::from(0) {
                bail!("zero denominator in {:?}", text);
            }
            Ok(BigRational::new(mk(p)?, den))
        }
        None => Ok(BigRational::from(mk(text)?)),
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let budget = budget_from(&cli.global);
    match &cli.command {
        Command::Reduce { src, to, out } => cmd_reduce(src, *to, out),
        Command::Encode { tok, witness } => cmd_encode(tok, witness),
        Command::Solve { file } => cmd_solve(file, &budget),
        Command::Witness {
            src,
            assignment,
            cover,
            chain,
            to,
            out,
        } => cmd_witness(src, assignment, cover, chain, *to, out),
        Command::Verify { src, to } => cmd_verify(src, *to, cli.global.report),
        Command::Gap {
            m2s,
            epsilon,
            to,
            out,
        } => cmd_gap(m2s, epsilon, *to, out),
        Command::Bench { tok, greedy } => cmd_bench(tok, *greedy),
        Command::Selftest => cmd_selftest(cli.global.seed),
    }
}

fn cmd_reduce(src: &Path, to: Target, out: &Option<PathBuf>) -> Result<ExitCode> {
    let text = read(src)?;
    let file = match (extension(src)?, to) {
        ("m2s", Target::D2tok) => {
            TokFile::from_instance(&reductions::reduce_max2sat_to_d2tok(&formats::parse_m2s(&text)?)?)
        }
        ("m2s", Target::B2tok) => {
            TokFile::from_instance(&reductions::reduce_max2sat_to_b2tok(&formats::parse_m2s(&text)?)?)
        }
        ("vc", Target::D1tok) => {
            TokFile::from_instance(&reductions::reduce_vc_to_d1tok(&formats::parse_vc(&text)?)?)
        }
        ("ac", Target::Uope) => {
            TokFile::from_instance(&reductions::reduce_addchain_to_uope(&formats::parse_ac(&text)?)?)
        }
        (ext, _) => bail!("{}: no reduction from .{} to the requested target", src.display(), ext),
    };
    emit(out, &formats::render_tok(&file))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_encode(tok_path: &Path, witness_path: &Path) -> Result<ExitCode> {
    let tok = formats::parse_tok(&read(tok_path)?)?;
    let wtext = read(witness_path)?;
    let objective = match tok.dataset.representation() {
        Representation::Length => {
            let lengths = formats::parse_length_witness(&wtext)?;
            let mut with_unit = lengths;
            with_unit.insert(num::BigUint::from(1u32));
            encoders::unary_objective(&with_unit, &tok.dataset)?
        }
        Representation::Explicit => {
            let w = formats::parse_witness(&wtext, tok.dataset.alphabet())?;
            match tok.mode {
                Mode::Direct => {
                    let vocab = tokhard::core::Vocabulary::with_tokens(
                        tok.dataset.alphabet(),
                        w.tokens.iter().cloned(),
                    )?;
                    encoders::direct_objective(&vocab, &tok.dataset)?
                }
                Mode::BottomUp => encoders::bottomup_objective(&w.merges, &tok.dataset)?,
                Mode::Ope => {
                    let vocab = encoders::ope_vocab(&w.merges, tok.dataset.alphabet());
                    encoders::direct_objective(&vocab, &tok.dataset)?
                }
            }
        }
    };
    let decision = objective <= tok.delta;
    println!(
        "objective={} delta={} decision={}",
        objective,
        tok.delta,
        if decision { "YES" } else { "NO" }
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(file: &Path, budget: &SearchBudget) -> Result<ExitCode> {
    match extension(file)? {
        "m2s" => {
            let inst = formats::parse_m2s(&read(file)?)?;
            let (s, f) = oracles::solve_max2sat_exact(&inst)?;
            let bits: String = s.values.iter().map(|&b| if b { '1' } else { '0' }).collect();
            println!(
                "optimum={} assignment={} decision={}",
                f,
                bits,
                if f >= inst.target { "YES" } else { "NO" }
            );
        }
        "vc" => {
            let inst = formats::parse_vc(&read(file)?)?;
            let (cover, size) = oracles::solve_vc_exact(&inst)?;
            let verts: Vec<String> = cover.iter().map(|v| (v + 1).to_string()).collect();
            println!(
                "optimum={} cover={} decision={}",
                size,
                verts.join(","),
                if size <= inst.k { "YES" } else { "NO" }
            );
        }
        "ac" => {
            let inst = formats::parse_ac(&read(file)?)?;
            let (chain, r) = oracles::solve_addchain_exact(&inst, budget)?;
            let steps: Vec<String> = chain.iter().map(|x| x.to_string()).collect();
            println!(
                "optimum={} chain={} decision={}",
                r,
                steps.join(","),
                if r <= inst.zeta { "YES" } else { "NO" }
            );
        }
        "tok" => {
            let tok = formats::parse_tok(&read(file)?)?;
            let optimum = match (tok.mode, tok.dataset.representation()) {
                (Mode::Direct, Representation::Explicit) => {
                    oracles::solve_direct_exact(&tok.dataset, tok.kappa, None, budget)?.1
                }
                (Mode::Direct, Representation::Length) => {
                    oracles::solve_unary_direct_exact(&tok.dataset, tok.kappa, None, budget)?.1
                }
                (Mode::BottomUp, _) => {
                    oracles::solve_bottomup_exact(&tok.dataset, tok.kappa, budget)?.1
                }
                (Mode::Ope, _) => oracles::solve_ope_exact(&tok.dataset, tok.kappa, budget)?.1,
            };
            println!(
                "optimum={} delta={} decision={}",
                optimum,
                tok.delta,
                if optimum <= tok.delta { "YES" } else { "NO" }
            );
        }
        ext => bail!("{}: no solver for .{} files", file.display(), ext),
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_assignment(text: &str, num_vars: usize) -> Result<Assignment> {
    if text.len() != num_vars || !text.chars().all(|c| c == '0' || c == '1') {
        bail!("assignment must be a 0/1 string of length {}", num_vars);
    }
    Ok(Assignment::new(text.chars().map(|c| c == '1').collect()))
}

fn cmd_witness(
    src: &Path,
    assignment: &Option<String>,
    cover: &Option<String>,
    chain: &Option<String>,
    to: Target,
    out: &Option<PathBuf>,
) -> Result<ExitCode> {
    let text = read(src)?;
    let rendered = match extension(src)? {
        "m2s" => {
            let inst = formats::parse_m2s(&text)?;
            let a = assignment
                .as_ref()
                .ok_or_else(|| anyhow!("MAX2SAT witnesses need --assignment"))?;
            let s = parse_assignment(a, inst.num_vars)?;
            let file = match to {
                Target::D2tok => WitnessFile {
                    tokens: witnesses::build_direct_witness(&inst, &s)
                        .extra_tokens()
                        .map(|t| t.content().clone())
                        .collect(),
                    merges: Vec::new(),
                },
                Target::B2tok => WitnessFile {
                    tokens: Vec::new(),
                    merges: witnesses::build_bottomup_witness(&inst, &s),
                },
                _ => bail!("MAX2SAT witnesses target d2tok or b2tok"),
            };
            formats::render_witness(&file, tokhard::core::Alphabet::BINARY)
        }
        "vc" => {
            let inst = formats::parse_vc(&text)?;
            let c = cover
                .as_ref()
                .ok_or_else(|| anyhow!("vertex-cover witnesses need --cover"))?;
            let mut set = BTreeSet::new();
            for part in c.split(',').filter(|p| !p.is_empty()) {
                let v: usize = part
                    .trim()
                    .parse()
                    .map_err(|_| anyhow!("bad vertex {:?}", part))?;
                if v == 0 || v > inst.n {
                    bail!("vertex {} out of range", v);
                }
                set.insert(v - 1);
            }
            let lengths = witnesses::build_vc_witness(&inst, &set)?;
            formats::render_length_witness(&lengths)
        }
        "ac" => {
            let inst = formats::parse_ac(&text)?;
            let c = chain
                .as_ref()
                .ok_or_else(|| anyhow!("addition-chain witnesses need --chain"))?;
            let steps: Vec<u64> = c
                .split(',')
                .filter(|p| !p.is_empty())
                .map(|p| p.trim().parse().map_err(|_| anyhow!("bad chain step {:?}", p)))
                .collect::<Result<_>>()?;
            for t in &inst.targets {
                if !steps.contains(t) {
                    bail!("chain misses target {}", t);
                }
            }
            let merges = witnesses::build_addchain_witness(&steps)?;
            formats::render_witness(
                &WitnessFile {
                    tokens: Vec::new(),
                    merges,
                },
                tokhard::core::Alphabet::UNARY,
            )
        }
        ext => bail!("{}: no witness construction for .{} files", src.display(), ext),
    };
    emit(out, &rendered)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(src: &Path, to: Option<Target>, style: ReportStyle) -> Result<ExitCode> {
    let text = read(src)?;
    let report = match extension(src)? {
        "m2s" => {
            let inst = formats::parse_m2s(&text)?;
            match to.unwrap_or(Target::D2tok) {
                Target::D2tok => harness::verify_d2tok_equivalence(&inst)?,
                Target::B2tok => harness::verify_b2tok_equivalence(&inst)?,
                _ => bail!("MAX2SAT verifies against d2tok or b2tok"),
            }
        }
        "vc" => harness::verify_d1tok_equivalence(&formats::parse_vc(&text)?)?,
        "ac" => harness::verify_uope_equivalence(&formats::parse_ac(&text)?)?,
        ext => bail!("{}: no equivalence pipeline for .{} files", src.display(), ext),
    };
    match style {
        ReportStyle::Text => print!("{}", report.render_text()),
        ReportStyle::Kv => print!("{}", report.render_kv()),
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    })
}

fn cmd_gap(m2s: &Path, epsilon: &str, to: Target, out: &Option<PathBuf>) -> Result<ExitCode> {
    let inst = formats::parse_m2s(&read(m2s)?)?;
    let c = inst.num_clauses() as u64;
    if c % 2016 != 0 {
        bail!("gap construction needs C to be a multiple of 2016, got {}", c);
    }
    let n_bk = c / 2016;
    let eps = parse_rational(epsilon)?;
    let (gap, ratio) = match to {
        Target::D2tok => reductions::make_gap_d2tok(&inst, n_bk, &eps)?,
        Target::B2tok => reductions::make_gap_b2tok(&inst, n_bk, &eps)?,
        _ => bail!("gap instances exist for d2tok and b2tok"),
    };
    println!("{}", ratio);
    if out.is_some() {
        emit(out, &formats::render_tok(&TokFile::from_gap(&gap)))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(tok_path: &Path, greedy: bool) -> Result<ExitCode> {
    if !greedy {
        bail!("only the greedy baseline is implemented; pass --greedy");
    }
    let tok = formats::parse_tok(&read(tok_path)?)?;
    let report = harness::bench_ratio(&tok.dataset, tok.kappa, tok.mode)?;
    let mut text = String::new();
    let _ = writeln!(text, "achieved={}", report.achieved);
    let _ = writeln!(text, "optimal={}", report.optimal);
    let _ = writeln!(text, "ratio_length={}", report.ratio_length);
    match &report.ratio_reduce {
        Some(r) => {
            let _ = writeln!(text, "ratio_reduce={}", r);
        }
        None => {
            let _ = writeln!(text, "ratio_reduce=undefined");
        }
    }
    let _ = writeln!(text, "lower_bound_only={}", report.lower_bound_only);
    for note in &report.notes {
        let _ = writeln!(text, "note={}", note);
    }
    print!("{}", text);
    Ok(if report.lower_bound_only {
        ExitCode::from(EXIT_BUDGET)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_selftest(seed: u64) -> Result<ExitCode> {
    let mut failures = 0usize;
    let mut check = |name: &str, ok: bool| {
        println!("{}: {}", name, if ok { "ok" } else { "FAILED" });
        if !ok {
            failures += 1;
        }
    };

    reductions::CONSTANTS.verify();
    check("reduction constants", true);

    let sweeps = witnesses::check_sum_identities(200);
    check("sum-identity sweeps", sweeps.is_empty());

    // Clause replay plus the full pipelines on a seeded random instance.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = harness::gen_max2sat(2, &mut rng);
    let d2 = harness::verify_d2tok_equivalence(&inst)?;
    check("direct reduction pipeline", d2.passed());
    let b2 = harness::verify_b2tok_equivalence(&inst)?;
    check("bottom-up reduction pipeline (clause replay)", b2.passed());

    let tri = VcInstance::new(3, vec![(0, 1), (0, 2), (1, 2)], 2)?;
    let d1 = harness::verify_d1tok_equivalence(&tri)?;
    check("unary reduction pipeline", d1.passed());

    let ac = tokhard::core::AddChainInstance::new([2u64, 3, 5].into_iter().collect(), 3)?;
    let uo = harness::verify_uope_equivalence(&ac)?;
    check("addition-chain pipeline", uo.passed());

    let zero = witnesses::build_zero_run_merges(8);
    check("zero-run merges", zero.len() == 15);

    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    })
}
