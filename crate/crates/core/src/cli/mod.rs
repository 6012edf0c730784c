//! The `parabose` command-line interface.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 theorem violation,
//! nonexistence, parameter mismatch or failed verification, 3 I/O error,
//! 4 shell above the capacity bound.

pub mod expr;
pub mod report;
pub mod state_file;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::decompose::{build_lwhw_vector, signature_bijection, Decomposer, OspSignature};
use crate::error::{Error, Result};
use crate::fock::{ModelParams, SpinState, State, DEFAULT_CAPACITY};
use crate::generators::{negative_gauge_roots, positive_gauge_roots};
use crate::half::{format_halves, Half};
use crate::verify::{self, Suite, VerifyConfig};

use report::Format;
use state_file::{read_state, write_atomic, StateFile};

pub const CAPACITY_ENV: &str = "PARABOSE_CAPACITY";

#[derive(Parser, Debug)]
#[command(
    name = "parabose",
    version,
    about = "Exact decomposition of parabose Fock spaces into osp(1|2n) and gauge irreps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Model {
    /// Number of parabose pairs.
    #[arg(short = 'n', long = "modes")]
    n: usize,
    /// Order of parastatistics.
    #[arg(short = 'p', long = "order")]
    p: usize,
    /// Largest shell to enumerate; overrides PARABOSE_CAPACITY.
    #[arg(long)]
    capacity: Option<usize>,
}

impl Model {
    fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.n, self.p)
    }

    fn capacity(&self) -> Result<usize> {
        if let Some(c) = self.capacity {
            return Ok(c);
        }
        match std::env::var(CAPACITY_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| Error::Parse(format!("{CAPACITY_ENV} must be a count, got {v:?}"))),
            Err(_) => Ok(DEFAULT_CAPACITY),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of joint osp lowest-weight / gauge highest-weight vectors.
    Decompose {
        #[command(flatten)]
        model: Model,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
        /// Write the table here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Write each row's vector as a state file in this directory.
        #[arg(long)]
        vectors_dir: Option<PathBuf>,
    },
    /// Build the explicit lowest-weight vector of an osp signature "d;s1,...".
    Lwv {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        sig: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a property suite.
    Verify {
        #[command(flatten)]
        model: Model,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        /// Seed for the random states added to the sample.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        random_states: usize,
    },
    /// Apply an operator expression to a state file.
    Apply {
        expr: String,
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Print the result as text instead of a state file.
        #[arg(long)]
        pretty: bool,
    },
    /// Write the vacuum with the given spin signs, e.g. "+-".
    Vacuum {
        #[command(flatten)]
        model: Model,
        #[arg(long, default_value = "")]
        spin: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Shell sizes, Cartan data and positive roots.
    Info {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        degree: Option<usize>,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::InvalidParams(_)
        | Error::IndexOutOfRange(_)
        | Error::InvalidLabel(_)
        | Error::Parity { .. }
        | Error::NonDominant(_)
        | Error::Json(_) => 1,
        Error::ParamsMismatch(..)
        | Error::Nonexistence(_)
        | Error::ZeroVector(_)
        | Error::TheoremViolation(_)
        | Error::NotEigenvector(_)
        | Error::MixedDegree(..)
        | Error::ZeroState
        | Error::DivisionByZero => 2,
        Error::Io(_) => 3,
        Error::Capacity { .. } => 4,
    }
}

/// Failed verification or construction, reported with exit code 2.
struct Failed;

/// Run the CLI on `args` (including the program name); returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(Ok(())) => 0,
        Ok(Err(Failed)) => 2,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, text),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<std::result::Result<(), Failed>> {
    match cmd {
        Command::Decompose { model, max_degree, format, output, vectors_dir } => {
            let params = model.params()?;
            let mut dec = Decomposer::new(params, model.capacity()?)?;
            let report = dec.joint_lw_hw_table(max_degree)?;
            if let Some(dir) = &vectors_dir {
                std::fs::create_dir_all(dir)?;
                for (i, row) in report.rows.iter().enumerate() {
                    let path = dir.join(format!("{}.json", report::vector_id(i, row)));
                    write_atomic(&path, &StateFile::from_state(&row.vector).to_json())?;
                }
            }
            emit(out, output.as_deref(), &report::render(&report, format))?;
        }
        Command::Lwv { model, sig, output } => {
            let params = model.params()?;
            let lambda: OspSignature = sig.parse()?;
            if lambda.n() != params.n() {
                return Err(Error::Parse(format!("signature {lambda} needs {} entries after d", params.n() - 1)));
            }
            let s0 = lambda.s0(params.p());
            if !s0.is_integer() || s0 < Half::ZERO {
                return Err(Error::Nonexistence(format!(
                    "d − p/2 = {s0} must be a nonnegative integer for a vector of this form"
                )));
            }
            let Some(gauge) = signature_bijection(&lambda, &params) else {
                return Err(Error::Nonexistence(format!(
                    "{lambda} needs s_α = 0 for α < n − q = {}",
                    params.n().saturating_sub(params.q())
                )));
            };
            let v = build_lwhw_vector(&params, &lambda)?;
            let summary =
                format!("{lambda}  sigma = {gauge}  mu = ({})  terms = {}\n", format_halves(&gauge.mu()), v.len());
            match &output {
                Some(p) => {
                    write_atomic(p, &StateFile::from_state(&v).to_json())?;
                    out.write_all(summary.as_bytes())?;
                }
                None => {
                    out.write_all(StateFile::from_state(&v).to_json().as_bytes())?;
                    err.write_all(summary.as_bytes())?;
                }
            }
        }
        Command::Verify { model, suite, max_degree, seed, random_states } => {
            let suite: Suite = suite.parse()?;
            let cfg =
                VerifyConfig { params: model.params()?, max_degree, capacity: model.capacity()?, seed, random_states };
            let mut all_ok = true;
            for r in verify::run(suite, &cfg)? {
                writeln!(
                    out,
                    "{:<10} {}  passed {}  failed {}",
                    r.suite.name(),
                    if r.ok() { "PASS" } else { "FAIL" },
                    r.passed,
                    r.failures.len()
                )?;
                for f in r.failures.iter().take(5) {
                    writeln!(err, "{}: {}", r.suite.name(), f.what)?;
                    if let Some(s) = &f.state {
                        err.write_all(StateFile::from_state(s).to_json().as_bytes())?;
                    }
                }
                all_ok &= r.ok();
            }
            if !all_ok {
                return Ok(Err(Failed));
            }
        }
        Command::Apply { expr, input, output, pretty } => {
            let op = expr::parse(&expr)?;
            let v = read_state(&input)?;
            let result = op.apply(&v)?;
            let text = if pretty { format!("{result}\n") } else { StateFile::from_state(&result).to_json() };
            emit(out, output.as_deref(), &text)?;
        }
        Command::Vacuum { model, spin, output } => {
            let params = model.params()?;
            let signs = spin
                .chars()
                .map(|c| match c {
                    '+' => Ok(1),
                    '-' => Ok(-1),
                    _ => Err(Error::Parse(format!("spin must be a string of + and -, got {spin:?}"))),
                })
                .collect::<Result<Vec<i8>>>()?;
            let spin = if signs.is_empty() { SpinState::all_up(params.q()) } else { SpinState::from_signs(&signs)? };
            if spin.len() != params.q() {
                return Err(Error::Parse(format!("spin needs {} signs", params.q())));
            }
            emit(out, output.as_deref(), &StateFile::from_state(&State::vacuum(params, spin)).to_json())?;
        }
        Command::Info { model, degree } => {
            let params = model.params()?;
            out.write_all(info(&params, degree).as_bytes())?;
        }
    }
    Ok(Ok(()))
}

fn info(pr: &ModelParams, degree: Option<usize>) -> String {
    let (n, p, q) = (pr.n(), pr.p(), pr.q());
    let mut s = format!("n = {n}, p = {p}, q = {q}, eps = {}\n", pr.eps());
    s += &format!("vacuum energy np/2 = {}\n", pr.vacuum_energy());
    s += &format!("osp(1|2n) Cartan: (1/2){{b†_α, b_α}}, α = 1..{n}\n");
    s += "osp(1|2n) positive roots and root vectors:\n";
    for a in 1..=n {
        s += &format!("  +δ{a}        b†_{a}\n");
    }
    for a in 1..=n {
        for b in a + 1..=n {
            s += &format!("  +δ{a}+δ{b}     {{b†_{a}, b†_{b}}}\n");
        }
    }
    for a in 1..=n {
        for b in a + 1..=n {
            s += &format!("  +δ{a}−δ{b}     {{b†_{a}, b_{b}}}\n");
        }
    }
    for a in 1..=n {
        s += &format!("  +2δ{a}       {{b†_{a}, b†_{a}}}\n");
    }
    let mut simple: Vec<String> = (1..n).map(|a| format!("{{b†_{a}, b_{}}}", a + 1)).collect();
    simple.push(format!("b†_{n}"));
    s += &format!("osp(1|2n) simple root vectors: {}\n", simple.join(", "));
    if q == 0 {
        s += "so(p) Cartan: none\n";
    } else {
        s += &format!("so(p) Cartan: G^(k) = G^{{2k−1,2k}}, k = 1..{q}\n");
    }
    let pos = positive_gauge_roots(pr);
    if pos.is_empty() {
        s += &format!("so({p}) roots: none positive\n");
    } else {
        s += &format!("so({p}) positive roots ({} of them, {} negative):\n", pos.len(), negative_gauge_roots(pr).len());
        for r in pos {
            let root = r.root(q);
            let text: String = root
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(k, &c)| format!("{}δ{}", if c > 0 { "+" } else { "−" }, k + 1))
                .collect();
            s += &format!("  {text:<10} Groot({r})\n");
        }
    }
    let degrees: Vec<usize> = match degree {
        Some(d) => vec![d],
        None => (0..=3).collect(),
    };
    s += &format!("spin states: 2^{q} = {}\n", pr.spin_dim());
    for d in degrees {
        s += &format!(
            "shell degree {d}: {} kets = 2^{q} · C({} + {d} − 1, {d}), energy {}\n",
            pr.shell_size(d),
            pr.num_modes(),
            pr.vacuum_energy() + Half::from_int(d as i64)
        );
    }
    s
}
