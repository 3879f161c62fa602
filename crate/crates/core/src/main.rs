//! Command-line surface: evaluate walks and characteristics, run the
//! verification suites, generate and check sequence files, export JSON/DOT.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 walk node cap exceeded.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hwalks::analysis::{run_lemma_suite, LemmaId, SamplingPlan};
use hwalks::chars::{resh_n, rho2_n};
use hwalks::cseq::{check_coherence, landmark_grid, CSequence};
use hwalks::error::WalkError;
use hwalks::game::{build_by_game, SeededAdversary};
use hwalks::ordinal::{parse_ordinal_list, Ordinal};
use hwalks::specfile::{parse_builtin, parse_ncseq, print_ncseq};
use hwalks::stepped::SteppedUp;
use hwalks::walk::{render_text, walk, Sign, DEFAULT_NODE_CAP};

#[derive(Parser)]
#[command(
    name = "hwalks",
    about = "Higher-dimensional walks on ordinals: trace trees, characteristics, and checkers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SeqArgs {
    /// Sequence source: `builtin:minimal-fs:<ord>`, `builtin:maximal:<ord>`
    /// or a sequence file path.
    #[arg(long)]
    seq: String,
    /// Dimension, required for builtins.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Walk from a signed tuple and print the trace tree.
    Walk {
        #[command(flatten)]
        seq: SeqArgs,
        /// The full input tuple `alpha,gamma_1,...,gamma_n`.
        #[arg(long)]
        tuple: String,
        /// Root sign, `+` or `-`.
        #[arg(long, default_value = "+")]
        sign: String,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        cap: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The signed node count of a walk.
    Rho2 {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        tuple: String,
        #[arg(long, default_value = "+")]
        sign: String,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        cap: usize,
    },
    /// The free-abelian enrichment of a walk.
    Resh {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        tuple: String,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        cap: usize,
        /// `text` or `json`.
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Scan a sequence for coherence violations below a window.
    Coherence {
        #[command(flatten)]
        seq: SeqArgs,
        /// Scan window; defaults to the universe bound.
        #[arg(long)]
        window: Option<String>,
        /// Grid density (coefficient cap per exponent).
        #[arg(long, default_value_t = 4)]
        density: u64,
    },
    /// Run the property suite over sampled walks.
    Suite {
        #[command(flatten)]
        seq: SeqArgs,
        /// Comma-separated property names; all when omitted.
        #[arg(long)]
        lemmas: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances per property.
        #[arg(long, default_value_t = 60)]
        budget: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build a sequence and emit it as a sequence file.
    Generate {
        #[command(subcommand)]
        builder: Builder,
    },
    /// Parse a sequence file and verify it reprints canonically.
    ParseCheck {
        /// Sequence file path.
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum Builder {
    /// Order-type-minimal universe.
    OrderMinimal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Maximal-interval universe.
    Maximal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Play the extension game.
    Game {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Step a sequence up one dimension along a scaffold.
    SteppedUp {
        #[arg(long)]
        kappa: String,
        /// Scaffold builtin, e.g. `minimal-fs:w^2`.
        #[arg(long)]
        d: String,
        /// Copied-sequence builtin on kappa, e.g. `minimal-fs:w`.
        #[arg(long)]
        e: String,
        /// Dimension of the copied sequence.
        #[arg(long, default_value_t = 1)]
        e_n: usize,
        /// Realization points (comma-separated ordinals).
        #[arg(long)]
        s: String,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

enum CmdError {
    Usage(String),
    Cap(usize),
    Io(String),
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmdError::Usage(m) | CmdError::Io(m) => write!(f, "{m}"),
            CmdError::Cap(c) => write!(f, "walk exceeded the node cap of {c}"),
        }
    }
}

impl CmdError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CmdError::Usage(_) | CmdError::Io(_) => ExitCode::from(2),
            CmdError::Cap(_) => ExitCode::from(3),
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CmdError {
    CmdError::Usage(e.to_string())
}

fn from_walk_error(e: WalkError) -> CmdError {
    match e {
        WalkError::CapExceeded(c) => CmdError::Cap(c),
        other => CmdError::Usage(other.to_string()),
    }
}

fn load_seq(args: &SeqArgs) -> Result<CSequence, CmdError> {
    if let Some(desc) = args.seq.strip_prefix("builtin:") {
        let n = args.n.ok_or_else(|| usage("builtin sequences need --n"))?;
        parse_builtin(desc, n).map_err(usage)
    } else {
        let text = fs::read_to_string(&args.seq)
            .map_err(|e| CmdError::Io(format!("cannot read {}: {e}", args.seq)))?;
        let seq = parse_ncseq(&text).map_err(usage)?;
        if let Some(n) = args.n {
            if n != seq.n() {
                return Err(usage(format!(
                    "--n {n} disagrees with the file dimension {}",
                    seq.n()
                )));
            }
        }
        Ok(seq)
    }
}

fn parse_input_tuple(seq: &CSequence, tuple: &str) -> Result<(Ordinal, Vec<Ordinal>), CmdError> {
    let entries = parse_ordinal_list(tuple).map_err(usage)?;
    if entries.len() != seq.n() + 1 {
        return Err(usage(format!(
            "walk inputs need {} entries (alpha plus {}), got {}",
            seq.n() + 1,
            seq.n(),
            entries.len()
        )));
    }
    Ok((entries[0].clone(), entries[1..].to_vec()))
}

fn parse_sign(s: &str) -> Result<Sign, CmdError> {
    match s {
        "+" | "+1" | "plus" => Ok(Sign::Plus),
        "-" | "-1" | "minus" => Ok(Sign::Minus),
        other => Err(usage(format!("bad sign `{other}`"))),
    }
}

fn emit(out: &OutArgs, content: &str) -> Result<(), CmdError> {
    match &out.out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CmdError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CmdError> {
    match cli.command {
        Command::Walk {
            seq,
            tuple,
            sign,
            cap,
            out,
        } => {
            let s = load_seq(&seq)?;
            let (alpha, gamma) = parse_input_tuple(&s, &tuple)?;
            let sign = parse_sign(&sign)?;
            let tree = walk(&s, sign, &alpha, &gamma, cap).map_err(from_walk_error)?;
            let content = match out.format.as_str() {
                "text" => render_text(&tree),
                "json" => format!("{:#}\n", tree.to_json(&s)),
                "dot" => tree.to_dot(),
                other => return Err(usage(format!("unknown format `{other}`"))),
            };
            emit(&out, &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Rho2 {
            seq,
            tuple,
            sign,
            cap,
        } => {
            let s = load_seq(&seq)?;
            let (alpha, gamma) = parse_input_tuple(&s, &tuple)?;
            let sign = parse_sign(&sign)?;
            let count = rho2_n(&s, sign, &alpha, &gamma, cap).map_err(from_walk_error)?;
            println!("{count}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Resh {
            seq,
            tuple,
            cap,
            format,
        } => {
            let s = load_seq(&seq)?;
            let (alpha, gamma) = parse_input_tuple(&s, &tuple)?;
            let value = resh_n(&s, &alpha, &gamma, cap).map_err(from_walk_error)?;
            match format.as_str() {
                "json" => println!("{}", value.to_json()),
                _ => println!("{value}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Coherence {
            seq,
            window,
            density,
        } => {
            let s = load_seq(&seq)?;
            let window = match window {
                Some(w) => w.parse::<Ordinal>().map_err(usage)?,
                None => s.bound(),
            };
            let grid = landmark_grid(&window, density);
            let report = check_coherence(&s, &window, &grid);
            println!(
                "window {} grid {} accumulation-set {}",
                report.window,
                report.grid.len(),
                report
                    .x_set
                    .iter()
                    .map(|o| o.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            if report.is_coherent() {
                println!("coherent: no violations");
                Ok(ExitCode::SUCCESS)
            } else {
                for v in &report.violations {
                    println!("violation: {}", v.describe());
                }
                Ok(ExitCode::from(1))
            }
        }
        Command::Suite {
            seq,
            lemmas,
            seed,
            budget,
            out,
        } => {
            let s = load_seq(&seq)?;
            let plan = SamplingPlan::default_for(&s)
                .with_seed(seed)
                .with_per_lemma(budget);
            let selected: Vec<LemmaId> = match lemmas {
                None => LemmaId::ALL.to_vec(),
                Some(names) => names
                    .split(',')
                    .map(|n| {
                        LemmaId::from_name(n.trim())
                            .ok_or_else(|| usage(format!("unknown property `{n}`")))
                    })
                    .collect::<Result<_, _>>()?,
            };
            // structural and coherence scan first; property instances are
            // only meaningful on a sequence that passes it
            let window = s.bound();
            let scan = check_coherence(&s, &window, &landmark_grid(&window, 4));
            let mut coherent_lines = String::new();
            for v in &scan.violations {
                coherent_lines.push_str(&format!("COHERENCE verdict=fail: {}\n", v.describe()));
            }
            if scan.is_coherent() {
                coherent_lines.push_str("COHERENCE verdict=pass\n");
            }
            let report = run_lemma_suite(&s, &plan, &selected).map_err(from_walk_error)?;
            let content = match out.format.as_str() {
                "json" => format!("{:#}\n", report.to_json()),
                _ => format!("{coherent_lines}{}", report.render_lines()),
            };
            emit(&out, &content)?;
            if report.all_pass() && scan.is_coherent() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Generate { builder } => {
            let (seq, out) = match builder {
                Builder::OrderMinimal { n, lambda, out } => {
                    let lambda: Ordinal = lambda.parse().map_err(usage)?;
                    (CSequence::order_minimal(n, lambda).map_err(usage)?, out)
                }
                Builder::Maximal { n, lambda, out } => {
                    let lambda: Ordinal = lambda.parse().map_err(usage)?;
                    (CSequence::maximal(n, lambda).map_err(usage)?, out)
                }
                Builder::Game {
                    n,
                    rounds,
                    seed,
                    out,
                } => {
                    let mut adversary = SeededAdversary::new(seed);
                    (
                        build_by_game(n, rounds, &mut adversary, seed).map_err(usage)?,
                        out,
                    )
                }
                Builder::SteppedUp {
                    kappa,
                    d,
                    e,
                    e_n,
                    s,
                    out,
                } => {
                    let kappa: Ordinal = kappa.parse().map_err(usage)?;
                    let d_seq = parse_builtin(&d, 1).map_err(usage)?;
                    let e_seq = parse_builtin(&e, e_n).map_err(usage)?;
                    let points = parse_ordinal_list(&s).map_err(usage)?;
                    let stepped = SteppedUp::new(d_seq, e_seq, points, kappa).map_err(usage)?;
                    (CSequence::from_stepped(stepped), out)
                }
            };
            emit(&out, &print_ncseq(&seq))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ParseCheck { file } => {
            let text = fs::read_to_string(&file)
                .map_err(|e| CmdError::Io(format!("cannot read {}: {e}", file.display())))?;
            let seq = parse_ncseq(&text).map_err(usage)?;
            let printed = print_ncseq(&seq);
            let reparsed = parse_ncseq(&printed).map_err(usage)?;
            if print_ncseq(&reparsed) != printed {
                return Err(usage("file does not reprint canonically"));
            }
            println!(
                "ok: {}-dimensional {} sequence on {}",
                seq.n(),
                seq.kind_name(),
                seq.bound()
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}
