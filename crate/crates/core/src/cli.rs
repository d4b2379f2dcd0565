//! The `nocode` command line.
//!
//! Exit codes: 0 success, 1 semantic violation (overlapping code, failed
//! invariant), 2 input or usage error, 3 search cap or node budget exceeded.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{length_report, BoundError, BoundReport, CTable};
use crate::codes::{
    is_maximal, maximality_witness, non_overlap_witness, prefix_code_witness, Code, CodeError,
};
use crate::extension::{extend, extend_unchecked, extension_size};
use crate::search::{
    classic_construction, greedy_maximal, max_fixed, max_variable, SearchConfig, SearchError,
    SearchResult, Strategy, DEFAULT_CANDIDATE_CAP,
};
use crate::words::Symbol;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable overriding the candidate-count cap.
pub const CAP_ENV: &str = "NOCODE_CAP";

#[derive(Debug, Parser)]
#[command(name = "nocode", version, about = "Verify, extend, search, and bound non-overlapping codes")]
pub struct CommandConfig {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Bnb,
    Exhaustive,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a code file is non-overlapping
    Verify {
        /// Code file, or - for stdin
        input: PathBuf,
    },
    /// Extend a variable-length non-overlapping code to fixed length
    Extend {
        /// Code file, or - for stdin
        input: PathBuf,
        /// Where to write the extended code
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
        /// Extend even if the input overlaps (no guarantees on the result)
        #[arg(long)]
        force: bool,
    },
    /// Exact maximum fixed-length code C(n, q)
    MaxFixed(SearchArgs),
    /// Exact maximum variable-length code with lengths 2..=n
    MaxVariable(SearchArgs),
    /// Generate a greedy maximal code, or check maximality of a code file
    Maximal {
        /// Maximum codeword length
        #[arg(short)]
        n: Option<usize>,
        /// Alphabet size (generation only)
        #[arg(short)]
        q: Option<Symbol>,
        /// Candidate order seed; 0 is canonical order
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Check this code file instead of generating one
        #[arg(long)]
        input: Option<PathBuf>,
        /// Also write the generated code to this file
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The classic construction: first symbol 0, all others nonzero
    Classic {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        q: Symbol,
        /// Also write the code to this file
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Closed-form bounds on C(n, q)
    Bounds {
        /// Codeword length
        #[arg(short)]
        n: usize,
        /// Alphabet size
        #[arg(short)]
        q: Symbol,
        /// Also report the trivial sum bound over lengths m..=n
        #[arg(short)]
        m: Option<usize>,
        /// Compute C(n, q) exactly and check it against the bounds
        #[arg(long)]
        exact: bool,
        /// Give up after this many search nodes
        #[arg(long)]
        node_budget: Option<u64>,
    },
    /// Average-length statistics for a code file
    Stats {
        /// Code file, or - for stdin
        input: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Codeword length (maximum length for max-variable)
    #[arg(short)]
    pub n: usize,
    /// Alphabet size
    #[arg(short)]
    pub q: Symbol,
    /// Give up after this many search nodes
    #[arg(long)]
    pub node_budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Bnb)]
    pub strategy: StrategyArg,
    /// Also write the extremal code to this file
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    format: Format,
    cap: u64,
}

/// Exits early from a command with a message and exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn violation(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VIOLATION,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match CommandConfig::try_parse_from(args) {
        Ok(config) => config,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let cap = match std::env::var(CAP_ENV) {
        Ok(value) => match value.trim().parse::<u64>() {
            Ok(cap) if cap > 0 => cap,
            _ => {
                let _ = writeln!(stderr, "error: {CAP_ENV} must be a positive integer");
                return EXIT_INPUT;
            }
        },
        Err(_) => DEFAULT_CANDIDATE_CAP,
    };
    let mut io = Io {
        stdin,
        stdout,
        stderr,
        format: config.format,
        cap,
    };
    match dispatch(config.command, &mut io) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(io.stderr, "error: {}", failure.message);
            failure.code
        }
    }
}

fn dispatch(command: Command, io: &mut Io) -> Outcome {
    match command {
        Command::Verify { input } => cmd_verify(&input, io),
        Command::Extend {
            input,
            output,
            force,
        } => cmd_extend(&input, &output, force, io),
        Command::MaxFixed(args) => cmd_search(SearchKind::Fixed, &args, io),
        Command::MaxVariable(args) => cmd_search(SearchKind::Variable, &args, io),
        Command::Maximal {
            n,
            q,
            seed,
            input,
            output,
        } => cmd_maximal(n, q, seed, input.as_ref(), output.as_ref(), io),
        Command::Classic { n, q, output } => cmd_classic(n, q, output.as_ref(), io),
        Command::Bounds {
            n,
            q,
            m,
            exact,
            node_budget,
        } => cmd_bounds(n, q, m, exact, node_budget, io),
        Command::Stats { input } => cmd_stats(&input, io),
    }
}

fn is_stdio(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn read_code(path: &PathBuf, io: &mut Io) -> Result<Code, Failure> {
    let text = if is_stdio(path) {
        let mut buf = String::new();
        io.stdin.read_to_string(&mut buf)?;
        buf
    } else {
        fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?
    };
    Code::parse(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_code(path: &PathBuf, code: &Code, io: &mut Io) -> Result<(), Failure> {
    if is_stdio(path) {
        io.stdout.write_all(code.render().as_bytes())?;
        Ok(())
    } else {
        fs::write(path, code.render())
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
    }
}

fn emit_json(value: &Value, out: &mut dyn Write) -> Result<(), Failure> {
    writeln!(out, "{}", serde_json::to_string_pretty(value).expect("json"))?;
    Ok(())
}

fn code_json(code: &Code) -> Value {
    let alphabet = code.alphabet();
    Value::from(
        code.iter()
            .map(|w| alphabet.render(w))
            .collect::<Vec<String>>(),
    )
}

pub fn cmd_verify_code(code: &Code) -> (bool, Value) {
    let witness = non_overlap_witness(code);
    let prefix = prefix_code_witness(code);
    let report = json!({
        "q": code.q(),
        "size": code.len(),
        "non_overlapping": witness.is_none(),
        "prefix_code": prefix.is_none(),
        "witness": witness.as_ref().map(|w| w.to_json(code.alphabet())),
    });
    (witness.is_none(), report)
}

fn cmd_verify(input: &PathBuf, io: &mut Io) -> Outcome {
    let code = read_code(input, io)?;
    let (ok, report) = cmd_verify_code(&code);
    match io.format {
        Format::Json => emit_json(&report, io.stdout)?,
        Format::Text => {
            match non_overlap_witness(&code) {
                None => writeln!(io.stdout, "non-overlapping")?,
                Some(w) => writeln!(io.stdout, "overlapping: {w}")?,
            }
            match prefix_code_witness(&code) {
                None => writeln!(io.stdout, "prefix code: yes")?,
                Some(w) => writeln!(io.stdout, "prefix code: no ({w})")?,
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_VIOLATION })
}

fn overlapping_failure(code: &Code) -> Failure {
    match non_overlap_witness(code) {
        Some(w) => Failure::violation(format!("code is overlapping: {w}")),
        None => Failure::violation("code is overlapping"),
    }
}

fn cmd_extend(input: &PathBuf, output: &PathBuf, force: bool, io: &mut Io) -> Outcome {
    let code = read_code(input, io)?;
    if code.is_empty() {
        return Err(Failure::input("cannot extend an empty code"));
    }
    let overlapping = non_overlap_witness(&code).is_some();
    if overlapping && !force {
        return Err(overlapping_failure(&code));
    }
    let extended = if force {
        extend_unchecked(&code)
    } else {
        extend(&code)
    }
    .map_err(|e| Failure::violation(e.to_string()))?;
    let predicted = if overlapping {
        None
    } else {
        Some(extension_size(&code).map_err(|e| Failure::violation(e.to_string()))?)
    };
    write_code(output, &extended, io)?;

    let report_out: &mut dyn Write = if is_stdio(output) {
        &mut *io.stderr
    } else {
        &mut *io.stdout
    };
    match io.format {
        Format::Json => emit_json(
            &json!({
                "n": code.max_len(),
                "input_size": code.len(),
                "extended_size": extended.len(),
                "extension_size": predicted,
                "forced": overlapping,
            }),
            report_out,
        )?,
        Format::Text => {
            writeln!(report_out, "{} → {}", code.len(), extended.len())?;
            match predicted {
                Some(p) => writeln!(report_out, "extension size formula: {p}")?,
                None => writeln!(report_out, "input overlaps; result carries no guarantee")?,
            }
        }
    }
    if predicted.is_some_and(|p| p != extended.len()) {
        return Err(Failure::violation(format!(
            "extension size formula gives {} but the extension has {} words",
            predicted.unwrap_or(0),
            extended.len()
        )));
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SearchKind {
    Fixed,
    Variable,
}

fn search_config(strategy: StrategyArg, budget: Option<u64>, cap: u64) -> Result<SearchConfig, Failure> {
    if budget == Some(0) {
        return Err(Failure::input("--node-budget must be at least 1"));
    }
    Ok(SearchConfig {
        node_budget: budget,
        strategy: match strategy {
            StrategyArg::Bnb => Strategy::BranchAndBound,
            StrategyArg::Exhaustive => Strategy::Exhaustive,
        },
        candidate_cap: cap,
    })
}

fn validate_nq(n: usize, q: Symbol) -> Result<(), Failure> {
    if n < 2 || q < 2 {
        return Err(Failure::input(format!(
            "need n >= 2 and q >= 2, got n = {n}, q = {q}"
        )));
    }
    Ok(())
}

fn search_failure(err: SearchError, n: usize, q: Symbol, io: &mut Io) -> Failure {
    match err {
        SearchError::InvalidParameters(msg) => Failure::input(msg),
        SearchError::OverCap { .. } => Failure {
            code: EXIT_BUDGET,
            message: format!(
                "{err}; best lower bound: {} (classic construction)",
                crate::bounds::classic_lower(n, q)
            ),
        },
        SearchError::BudgetExhausted { ref best, .. } => {
            if io.format == Format::Json {
                let _ = emit_json(&best.to_json(), io.stdout);
            }
            Failure {
                code: EXIT_BUDGET,
                message: format!("{err}; best lower bound: {}", best.cardinality),
            }
        }
    }
}

fn cmd_search(kind: SearchKind, args: &SearchArgs, io: &mut Io) -> Outcome {
    validate_nq(args.n, args.q)?;
    let cfg = search_config(args.strategy, args.node_budget, io.cap)?;
    let searched = match kind {
        SearchKind::Fixed => max_fixed(args.n, args.q, &cfg),
        SearchKind::Variable => max_variable(args.n, args.q, &cfg),
    };
    let result = searched.map_err(|e| search_failure(e, args.n, args.q, io))?;

    let mut report = result.to_json();
    let mut fixed = None;
    if kind == SearchKind::Variable {
        fixed = max_fixed(args.n, args.q, &cfg).ok().map(|r| r.cardinality);
        report["fixed_cardinality"] = json!(fixed);
    }
    if let Some(path) = &args.output {
        write_code(path, &result.code, io)?;
    }
    match io.format {
        Format::Json => emit_json(&report, io.stdout)?,
        Format::Text => write_search_text(&result, fixed, args.output.is_none(), io)?,
    }
    if let Some(c) = fixed {
        if result.cardinality > c {
            return Err(Failure::violation(format!(
                "variable-length maximum {} exceeds C({}, {}) = {c}",
                result.cardinality, args.n, args.q
            )));
        }
    }
    Ok(EXIT_OK)
}

fn write_search_text(
    result: &SearchResult,
    fixed: Option<usize>,
    with_code: bool,
    io: &mut Io,
) -> Result<(), Failure> {
    writeln!(io.stdout, "n = {}, q = {}", result.n, result.q)?;
    writeln!(io.stdout, "cardinality: {}", result.cardinality)?;
    if let Some(c) = fixed {
        writeln!(io.stdout, "fixed-length C(n, q): {c}")?;
    }
    writeln!(io.stdout, "nodes expanded: {}", result.nodes_expanded)?;
    writeln!(io.stdout, "elapsed: {} ms", result.elapsed.as_millis())?;
    if with_code {
        io.stdout.write_all(result.code.render().as_bytes())?;
    }
    Ok(())
}

fn cmd_maximal(
    n: Option<usize>,
    q: Option<Symbol>,
    seed: u64,
    input: Option<&PathBuf>,
    output: Option<&PathBuf>,
    io: &mut Io,
) -> Outcome {
    if let Some(path) = input {
        let code = read_code(path, io)?;
        let n = n.or(code.max_len()).ok_or_else(|| {
            Failure::input("-n is required to check maximality of an empty code")
        })?;
        let witness = maximality_witness(&code, n).map_err(|e| match e {
            CodeError::Overlapping(_) => overlapping_failure(&code),
            other => Failure::input(other.to_string()),
        })?;
        let alphabet = code.alphabet();
        match io.format {
            Format::Json => emit_json(
                &json!({
                    "n": n,
                    "q": code.q(),
                    "maximal": witness.is_none(),
                    "extending_word": witness.as_ref().map(|w| alphabet.render(w)),
                }),
                io.stdout,
            )?,
            Format::Text => match &witness {
                None => writeln!(io.stdout, "maximal")?,
                Some(w) => writeln!(io.stdout, "not maximal: {} can be added", alphabet.render(w))?,
            },
        }
        return Ok(if witness.is_none() { EXIT_OK } else { EXIT_VIOLATION });
    }

    let n = n.ok_or_else(|| Failure::input("-n is required"))?;
    let q = q.ok_or_else(|| Failure::input("-q is required"))?;
    validate_nq(n, q)?;
    let code = greedy_maximal(n, q, seed).map_err(|e| Failure::input(e.to_string()))?;
    let maximal = is_maximal(&code, n).map_err(|e| Failure::violation(e.to_string()))?;
    if let Some(path) = output {
        write_code(path, &code, io)?;
    }
    match io.format {
        Format::Json => emit_json(
            &json!({
                "n": n,
                "q": q,
                "seed": seed,
                "size": code.len(),
                "maximal": maximal,
                "code": code_json(&code),
            }),
            io.stdout,
        )?,
        Format::Text => {
            if output.is_none() {
                io.stdout.write_all(code.render().as_bytes())?;
            } else {
                writeln!(io.stdout, "size: {}", code.len())?;
            }
        }
    }
    Ok(if maximal { EXIT_OK } else { EXIT_VIOLATION })
}

fn cmd_classic(n: usize, q: Symbol, output: Option<&PathBuf>, io: &mut Io) -> Outcome {
    validate_nq(n, q)?;
    let count = crate::search::candidate_count(q - 1, n - 1, n - 1);
    if count > io.cap as u128 {
        return Err(Failure {
            code: EXIT_BUDGET,
            message: format!("{count} codewords exceed the cap of {}", io.cap),
        });
    }
    let code = classic_construction(n, q).map_err(|e| Failure::input(e.to_string()))?;
    if let Some(path) = output {
        write_code(path, &code, io)?;
    }
    match io.format {
        Format::Json => emit_json(
            &json!({"n": n, "q": q, "size": code.len(), "code": code_json(&code)}),
            io.stdout,
        )?,
        Format::Text => {
            if output.is_none() {
                io.stdout.write_all(code.render().as_bytes())?;
            } else {
                writeln!(io.stdout, "size: {}", code.len())?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn bound_failure(e: BoundError) -> Failure {
    match e {
        BoundError::Invariant(msg) => Failure::violation(msg),
        other => Failure::input(other.to_string()),
    }
}

fn cmd_bounds(
    n: usize,
    q: Symbol,
    m: Option<usize>,
    exact: bool,
    node_budget: Option<u64>,
    io: &mut Io,
) -> Outcome {
    validate_nq(n, q)?;
    if let Some(m) = m {
        if m < 2 || m > n {
            return Err(Failure::input(format!("need 2 <= m <= n, got m = {m}")));
        }
    }
    let cfg = search_config(StrategyArg::Bnb, node_budget, io.cap)?;
    let mut report = BoundReport::new(n, q).map_err(bound_failure)?;
    if exact {
        let result = max_fixed(n, q, &cfg).map_err(|e| search_failure(e, n, q, io))?;
        report = report.with_exact(result.cardinality).map_err(bound_failure)?;
    }
    if let Some(m) = m {
        let table = if exact {
            let mut values = Vec::new();
            for i in m..=n {
                let result = max_fixed(i, q, &cfg).map_err(|e| search_failure(e, i, q, io))?;
                values.push((i, result.cardinality));
            }
            CTable::exact(q, values)
        } else {
            CTable::levenshtein_floors(m, n, q)
        };
        report = report.with_trivial_sum(m, &table).map_err(bound_failure)?;
    }
    match io.format {
        Format::Json => emit_json(&report.to_json(), io.stdout)?,
        Format::Text => write!(io.stdout, "{report}")?,
    }
    Ok(EXIT_OK)
}

fn cmd_stats(input: &PathBuf, io: &mut Io) -> Outcome {
    let code = read_code(input, io)?;
    if code.is_empty() {
        return Err(Failure::input("code file has no codewords"));
    }
    let report = length_report(&code).map_err(|e| match e {
        BoundError::Code(CodeError::Overlapping(_)) => overlapping_failure(&code),
        other => bound_failure(other),
    })?;
    match io.format {
        Format::Json => emit_json(&report.to_json(), io.stdout)?,
        Format::Text => write!(io.stdout, "{report}")?,
    }
    Ok(EXIT_OK)
}
