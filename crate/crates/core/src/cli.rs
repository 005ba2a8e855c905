//! Command-line front end. [`run`] does all the work and returns what would be
//! printed, so the binary is a thin shell around it and tests can call it
//! directly.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain or validation error,
//! 3 corruption detected.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;

use crate::circulant::{
    build_f_matrix, build_g_matrix, build_h_matrix, det_bruteforce, det_closed_f, det_closed_g, det_closed_g_float,
    det_closed_h, det_closed_h_float, eigenvalues_closed_f, eigenvalues_dft, RatioCirculantParams,
};
use crate::codec::{decode, encode, verify_packet, Algorithm, CharTable, CodePacket, CodecError, ALPHABET};
use crate::polyseq::{
    fibonacci_binet, fibonacci_seq, lucas_binet, lucas_seq, IntRecurrenceParams, Polynomial, RecurrenceParams,
};
use crate::selftest::{self, SelfTestConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_CORRUPT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fibcirc", version, about = "Fibonacci/Lucas circulants and determinant-checked block coding")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode a message into a packet.
    Encode {
        #[arg(long, value_enum, default_value_t = AlgArg::Fib3)]
        alg: AlgArg,
        #[arg(long, value_enum, default_value_t = Format::Canonical)]
        format: Format,
        /// Write the packet here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Message text; read from standard input when absent.
        message: Option<String>,
    },
    /// Decode a packet, or report which blocks fail their integrity check.
    Decode {
        /// Packet file; standard input when absent or `-`.
        input: Option<PathBuf>,
    },
    /// Print the character table for an offset.
    Table {
        #[arg(long)]
        n: u64,
    },
    /// Fibonacci and Lucas terms for (p, q).
    Seq {
        #[command(flatten)]
        params: ParamArgs,
        /// Number of terms.
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Closed-form determinant against an elimination oracle.
    Det {
        #[arg(long, value_enum)]
        matrix: MatrixKind,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: usize,
        /// Ratio-circulant scale (matrix F only).
        #[arg(long)]
        a: Option<f64>,
        /// Ratio-circulant ratio (matrix F only).
        #[arg(long)]
        r: Option<f64>,
    },
    /// Closed-form eigenvalues of the ratio circulant against the DFT sum.
    Eig {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        n: usize,
    },
    /// Run every closed form and codec check with seeded random draws.
    Selftest {
        #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
    },
}

/// `p` and `q` given directly, or as polynomials evaluated at `x`.
#[derive(Debug, Clone, clap::Args)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true, required_unless_present = "p_poly", conflicts_with = "p_poly")]
    pub p: Option<String>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "q_poly", conflicts_with = "q_poly")]
    pub q: Option<String>,
    /// Coefficients of p(x), constant term first, comma separated.
    #[arg(long, allow_hyphen_values = true, requires = "x")]
    pub p_poly: Option<String>,
    /// Coefficients of q(x), constant term first, comma separated.
    #[arg(long, allow_hyphen_values = true, requires = "x")]
    pub q_poly: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    /// Use floating arithmetic even for integer p, q.
    #[arg(long)]
    pub float: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgArg {
    Fib3,
    Lucas2,
}

impl From<AlgArg> for Algorithm {
    fn from(a: AlgArg) -> Self {
        match a {
            AlgArg::Fib3 => Algorithm::Fib3,
            AlgArg::Lucas2 => Algorithm::Lucas2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Canonical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixKind {
    #[value(name = "G", alias = "g")]
    G,
    #[value(name = "H", alias = "h")]
    H,
    #[value(name = "F", alias = "f")]
    F,
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stderr: impl Into<String>) -> Self {
        let mut stderr = stderr.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Self { code, stdout: String::new(), stderr }
    }
}

/// Either exact integers or evaluated reals.
#[derive(Debug, Clone)]
pub enum Params {
    Exact(IntRecurrenceParams),
    Float(RecurrenceParams),
}

impl ParamArgs {
    pub fn resolve(&self) -> Result<Params, String> {
        if let (Some(pp), Some(qp)) = (&self.p_poly, &self.q_poly) {
            let x = self.x.ok_or("--x is required with --p-poly/--q-poly")?;
            let params = RecurrenceParams::from_polynomials(&parse_poly(pp)?, &parse_poly(qp)?, x)
                .map_err(|e| e.to_string())?;
            return Ok(Params::Float(params));
        }
        let (Some(p), Some(q)) = (&self.p, &self.q) else {
            return Err("give both --p and --q, or both --p-poly and --q-poly".into());
        };
        if !self.float {
            if let (Ok(p), Ok(q)) = (p.parse::<BigInt>(), q.parse::<BigInt>()) {
                return IntRecurrenceParams::new(p, q).map(Params::Exact).map_err(|e| e.to_string());
            }
        }
        let p: f64 = p.parse().map_err(|_| format!("--p {p:?} is not a number"))?;
        let q: f64 = q.parse().map_err(|_| format!("--q {q:?} is not a number"))?;
        RecurrenceParams::new(p, q).map(Params::Float).map_err(|e| e.to_string())
    }

    fn resolve_float(&self) -> Result<RecurrenceParams, String> {
        match self.resolve()? {
            Params::Float(p) => Ok(p),
            Params::Exact(p) => p.to_float().map_err(|e| e.to_string()),
        }
    }
}

fn parse_poly(text: &str) -> Result<Polynomial, String> {
    text.split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|_| format!("bad polynomial coefficient {c:?}")))
        .collect::<Result<Vec<_>, _>>()
        .map(Polynomial::new)
}

/// Parses `args` (including the program name) and runs the command.
/// `stdin` is read only by commands that take input from it.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let text = err.render().to_string();
            return if err.use_stderr() {
                Outcome::fail(EXIT_USAGE, text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    execute(&cli.command, stdin)
}

pub fn execute(command: &Command, stdin: &mut dyn Read) -> Outcome {
    match command {
        Command::Encode { alg, format, output, message } => run_encode((*alg).into(), *format, output.as_ref(), message.as_deref(), stdin),
        Command::Decode { input } => run_decode(input.as_ref(), stdin),
        Command::Table { n } => run_table(*n),
        Command::Seq { params, count } => run_seq(params, *count),
        Command::Det { matrix, params, n, a, r } => run_det(*matrix, params, *n, *a, *r),
        Command::Eig { params, a, r, n } => run_eig(params, *a, *r, *n),
        Command::Selftest { seed, max_n } => run_selftest(*seed, *max_n),
    }
}

fn read_all(stdin: &mut dyn Read) -> Result<String, String> {
    let mut text = String::new();
    stdin.read_to_string(&mut text).map_err(|e| format!("reading standard input: {e}"))?;
    Ok(text)
}

/// The human-readable packet listing.
pub fn packet_summary(packet: &CodePacket) -> String {
    let mut out = String::new();
    writeln!(out, "algorithm: {}", packet.algorithm).unwrap();
    writeln!(out, "n: {}", packet.n).unwrap();
    writeln!(out, "blocks: {}", packet.b).unwrap();
    writeln!(out, "original length: {}", packet.original_length).unwrap();
    for (i, record) in packet.records.iter().enumerate() {
        writeln!(out, "block {}: d = {}, retained = {:?}", i + 1, record.d, record.retained).unwrap();
    }
    out
}

pub fn run_encode(
    alg: Algorithm,
    format: Format,
    output: Option<&PathBuf>,
    message: Option<&str>,
    stdin: &mut dyn Read,
) -> Outcome {
    let text = match message {
        Some(m) => m.to_string(),
        None => match read_all(stdin) {
            Ok(t) => t.trim_end_matches(['\n', '\r']).to_string(),
            Err(e) => return Outcome::fail(EXIT_DOMAIN, e),
        },
    };
    let packet = match encode(&text, alg) {
        Ok(p) => p,
        Err(e) => return Outcome::fail(EXIT_DOMAIN, format!("error: {e}")),
    };
    let rendered = match format {
        Format::Canonical => format!("{}\n", packet.to_canonical_string()),
        Format::Human => packet_summary(&packet),
    };
    match output {
        None => Outcome::ok(rendered),
        Some(path) => match std::fs::write(path, rendered) {
            Ok(()) => Outcome::ok(String::new()),
            Err(e) => Outcome::fail(EXIT_DOMAIN, format!("error: writing {}: {e}", path.display())),
        },
    }
}

pub fn run_decode(input: Option<&PathBuf>, stdin: &mut dyn Read) -> Outcome {
    let text = match input {
        Some(path) if path.as_os_str() != "-" => match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return Outcome::fail(EXIT_DOMAIN, format!("error: reading {}: {e}", path.display())),
        },
        _ => match read_all(stdin) {
            Ok(t) => t,
            Err(e) => return Outcome::fail(EXIT_DOMAIN, e),
        },
    };
    let packet = match CodePacket::from_canonical_str(&text) {
        Ok(p) => p,
        Err(e) => return Outcome::fail(EXIT_DOMAIN, format!("error: {e}")),
    };
    match decode(&packet) {
        Ok(message) => Outcome::ok(format!("{message}\n")),
        Err(err @ CodecError::CorruptPacket { .. }) => Outcome {
            code: EXIT_CORRUPT,
            stdout: verify_packet(&packet).to_string(),
            stderr: format!("error: {err}\n"),
        },
        Err(err) => Outcome::fail(EXIT_DOMAIN, format!("error: {err}")),
    }
}

pub fn table_listing(offset: u64) -> Result<String, CodecError> {
    let table = CharTable::new(offset)?;
    let mut out = String::new();
    for ch in ALPHABET {
        writeln!(out, "{ch} {}", table.code(ch)?).unwrap();
    }
    Ok(out)
}

pub fn run_table(n: u64) -> Outcome {
    match table_listing(n) {
        Ok(text) => Outcome::ok(text),
        Err(e) => Outcome::fail(EXIT_DOMAIN, format!("error: {e}")),
    }
}

pub fn run_seq(args: &ParamArgs, count: usize) -> Outcome {
    let mut out = String::new();
    match args.resolve() {
        Err(e) => return Outcome::fail(EXIT_DOMAIN, format!("error: {e}")),
        Ok(Params::Exact(params)) => {
            writeln!(out, "k F_k L_k (p = {}, q = {}, exact)", params.p(), params.q()).unwrap();
            let (f, l) = (fibonacci_seq(&params, count), lucas_seq(&params, count));
            for k in 0..count {
                writeln!(out, "{k} {} {}", f[k], l[k]).unwrap();
            }
        }
        Ok(Params::Float(params)) => {
            writeln!(out, "k F_k L_k F_k(Binet) L_k(Binet) (p = {}, q = {})", params.p(), params.q()).unwrap();
            let (f, l) = (fibonacci_seq(&params, count), lucas_seq(&params, count));
            for k in 0..count {
                let (fb, lb) = (fibonacci_binet(&params, k as u32), lucas_binet(&params, k as u32));
                writeln!(out, "{k} {} {} {fb} {lb}", f[k], l[k]).unwrap();
            }
        }
    }
    Outcome::ok(out)
}

fn deviation_lines(out: &mut String, closed: f64, oracle: f64) {
    let abs = (closed - oracle).abs();
    let rel = if oracle == 0.0 { abs } else { abs / oracle.abs() };
    writeln!(out, "  absolute deviation: {abs:e}").unwrap();
    writeln!(out, "  relative deviation: {rel:e}").unwrap();
}

/// Report for `det --matrix G|H`.
pub fn det_gh_report(kind: MatrixKind, params: &Params, n: usize) -> Result<String, String> {
    let mut out = String::new();
    let name = if kind == MatrixKind::G { "G" } else { "H" };
    match params {
        Params::Exact(p) => {
            let matrix = match kind {
                MatrixKind::G => build_g_matrix(p, n),
                _ => build_h_matrix(p, n),
            }
            .and_then(|m| m.to_dense())
            .map_err(|e| e.to_string())?;
            let oracle = det_bruteforce(&matrix);
            writeln!(out, "det {name}_{n} (p = {}, q = {}, exact)", p.p(), p.q()).unwrap();
            let closed = match kind {
                MatrixKind::G => det_closed_g(p, n).map_err(|e| e.to_string())?,
                _ => {
                    let h = det_closed_h(p, n).map_err(|e| e.to_string())?;
                    if h.fallback_used {
                        writeln!(out, "closed form undefined (q L_n - 2q = 0); elimination fallback used").unwrap();
                    }
                    h.value
                }
            };
            let dev: BigInt = &closed - &oracle;
            writeln!(out, "closed form: {closed}").unwrap();
            writeln!(out, "oracle (Bareiss): {oracle}").unwrap();
            writeln!(out, "  absolute deviation: {}", num_traits::Signed::abs(&dev)).unwrap();
            writeln!(out, "  relative deviation: {}", if dev == BigInt::from(0) { "0" } else { "nonzero" }).unwrap();
        }
        Params::Float(p) => {
            let matrix = match kind {
                MatrixKind::G => build_g_matrix(p, n),
                _ => build_h_matrix(p, n),
            }
            .and_then(|m| m.to_dense())
            .map_err(|e| e.to_string())?;
            let oracle = det_bruteforce(&matrix);
            writeln!(out, "det {name}_{n} (p = {}, q = {})", p.p(), p.q()).unwrap();
            let closed = match kind {
                MatrixKind::G => det_closed_g_float(p, n).map_err(|e| e.to_string())?,
                _ => {
                    let h = det_closed_h_float(p, n).map_err(|e| e.to_string())?;
                    if h.fallback_used {
                        writeln!(out, "closed form undefined (q L_n - 2q = 0); elimination fallback used").unwrap();
                    }
                    h.value
                }
            };
            writeln!(out, "closed form: {closed}").unwrap();
            writeln!(out, "oracle (partial pivoting): {oracle}").unwrap();
            deviation_lines(&mut out, closed, oracle);
        }
    }
    Ok(out)
}

/// Report for `det --matrix F`.
pub fn det_f_report(rp: &RatioCirculantParams) -> Result<String, String> {
    let closed = det_closed_f(rp).map_err(|e| e.to_string())?;
    let matrix = build_f_matrix(rp);
    let product = eigenvalues_dft(&matrix).product().re;
    let elimination = det_bruteforce(&matrix.to_dense().map_err(|e| e.to_string())?);
    let mut out = String::new();
    let p = rp.params();
    writeln!(out, "det F_{} (p = {}, q = {}, a = {}, r = {})", rp.n(), p.p(), p.q(), rp.a(), rp.r()).unwrap();
    writeln!(out, "closed form: {closed:e}").unwrap();
    writeln!(out, "oracle (DFT eigenvalue product): {product:e}").unwrap();
    deviation_lines(&mut out, closed, product);
    writeln!(out, "oracle (partial pivoting): {elimination:e}").unwrap();
    deviation_lines(&mut out, closed, elimination);
    Ok(out)
}

pub fn run_det(kind: MatrixKind, args: &ParamArgs, n: usize, a: Option<f64>, r: Option<f64>) -> Outcome {
    let report = match kind {
        MatrixKind::F => {
            let (Some(a), Some(r)) = (a, r) else {
                return Outcome::fail(EXIT_USAGE, "error: --matrix F needs --a and --r");
            };
            args.resolve_float()
                .and_then(|p| RatioCirculantParams::new(p, a, r, n).map_err(|e| e.to_string()))
                .and_then(|rp| det_f_report(&rp))
        }
        _ => args.resolve().and_then(|p| det_gh_report(kind, &p, n)),
    };
    match report {
        Ok(text) => Outcome::ok(text),
        Err(e) => Outcome::fail(EXIT_DOMAIN, format!("error: {e}")),
    }
}

/// Twelve decimals, trailing zeros dropped, no negative zero.
pub fn format_real(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

/// `a+bi` using [`format_real`] for both parts.
pub fn format_complex(z: Complex64) -> String {
    let im = format_real(z.im);
    match im.strip_prefix('-') {
        Some(mag) => format!("{}-{mag}i", format_real(z.re)),
        None => format!("{}+{im}i", format_real(z.re)),
    }
}

/// Report for `eig`.
pub fn eig_report(rp: &RatioCirculantParams) -> Result<String, String> {
    let closed = eigenvalues_closed_f(rp).map_err(|e| e.to_string())?;
    let dft = eigenvalues_dft(&build_f_matrix(rp));
    let mut out = String::new();
    let p = rp.params();
    writeln!(out, "eigenvalues of F_{} (p = {}, q = {}, a = {}, r = {})", rp.n(), p.p(), p.q(), rp.a(), rp.r()).unwrap();
    writeln!(out, "m closed-form dft-oracle abs-deviation rel-deviation").unwrap();
    let mut worst = 0.0f64;
    for (m, (c, d)) in closed.iter().zip(dft.iter()).enumerate() {
        let abs = (c - d).norm();
        let rel = if d.norm() == 0.0 { abs } else { abs / d.norm() };
        worst = worst.max(rel);
        writeln!(out, "{m} {} {} {abs:e} {rel:e}", format_complex(*c), format_complex(*d)).unwrap();
    }
    writeln!(out, "max relative deviation: {worst:e}").unwrap();
    Ok(out)
}

pub fn run_eig(args: &ParamArgs, a: f64, r: f64, n: usize) -> Outcome {
    let report = args
        .resolve_float()
        .and_then(|p| RatioCirculantParams::new(p, a, r, n).map_err(|e| e.to_string()))
        .and_then(|rp| eig_report(&rp));
    match report {
        Ok(text) => Outcome::ok(text),
        Err(e) => Outcome::fail(EXIT_DOMAIN, format!("error: {e}")),
    }
}

pub fn run_selftest(seed: u64, max_n: usize) -> Outcome {
    if max_n == 0 {
        return Outcome::fail(EXIT_DOMAIN, "error: --max-n must be at least 1");
    }
    let report = selftest::run(&SelfTestConfig { seed, max_n, ..SelfTestConfig::default() });
    let code = if report.passed() { EXIT_OK } else { EXIT_DOMAIN };
    Outcome { code, stdout: report.to_string(), stderr: String::new() }
}
