//! Command-line front end and the polynomial expression grammar.
//!
//! ```text
//! expression := [sign] term (sign term)*
//! term       := [integer ['*']] variable ['^' integer]
//! variable   := letter digit*
//! ```
//!
//! Whitespace is ignored and the grammar is ASCII only. Every variable may
//! appear once; equal exponents throughout give a diagonal form.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{CrossCheck, Engine, Method, MethodChoice};
use crate::error::{Error, Result};
use crate::oracle::{Budget, Oracle};
use crate::poly::{DiagonalPolynomial, Family, GeneralPolynomial, Polynomial, Term};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

/// A parsed `--poly` argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySpec {
    pub source: String,
    pub parsed: Polynomial,
    pub family: Option<Family>,
}

/// Parses an expression such as `"3x^3 - 2y^3"`.
pub fn parse_poly(text: &str) -> Result<PolySpec> {
    let parsed = ExprParser::new(text).expression()?;
    Ok(PolySpec {
        source: text.to_string(),
        family: parsed.family(),
        parsed,
    })
}

/// Canonical text for `f`; [`parse_poly`] reads it back to an equal polynomial.
pub fn render(f: &Polynomial) -> String {
    f.to_string()
}

struct ExprParser {
    chars: Vec<(usize, char)>,
    at: usize,
    len: usize,
}

impl ExprParser {
    fn new(text: &str) -> Self {
        ExprParser {
            chars: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            at: 0,
            len: text.len(),
        }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.len, |&(p, _)| p)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn eat(&mut self, c: char) -> bool {
        let hit = self.peek() == Some(c);
        self.at += hit as usize;
        hit
    }

    fn error<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos, msg: msg.into() })
    }

    fn integer(&mut self) -> Result<Option<u64>> {
        let start = self.pos();
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.at += 1;
        }
        if digits.is_empty() {
            return Ok(None);
        }
        match digits.parse() {
            Ok(v) => Ok(Some(v)),
            Err(_) => self.error(start, "integer out of range"),
        }
    }

    fn variable(&mut self) -> Option<String> {
        let mut name = String::from(self.peek().filter(char::is_ascii_alphabetic)?);
        self.at += 1;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            name.push(c);
            self.at += 1;
        }
        Some(name)
    }

    fn expression(&mut self) -> Result<Polynomial> {
        if let Some(&(pos, c)) = self.chars.iter().find(|(_, c)| !c.is_ascii()) {
            return self.error(pos, format!("non-ASCII character {c:?}"));
        }
        if self.chars.is_empty() {
            return self.error(0, "empty expression");
        }
        let mut names: Vec<String> = Vec::new();
        let mut terms: Vec<(i64, u32)> = Vec::new();
        while self.peek().is_some() {
            let mut negative = false;
            let mut signed = false;
            while let Some(c) = self.peek().filter(|&c| c == '+' || c == '-') {
                negative ^= c == '-';
                signed = true;
                self.at += 1;
            }
            if !terms.is_empty() && !signed {
                return self.error(self.pos(), "expected '+' or '-'");
            }
            let coeff_pos = self.pos();
            let magnitude = self.integer()?;
            if magnitude.is_some() {
                self.eat('*');
            }
            let var_pos = self.pos();
            let Some(name) = self.variable() else {
                return self.error(var_pos, "expected a variable");
            };
            let exponent = if self.eat('^') {
                let exp_pos = self.pos();
                match self.integer()? {
                    Some(0) => return self.error(exp_pos, "exponent must be positive"),
                    Some(e) => u32::try_from(e).or_else(|_| self.error(exp_pos, "exponent out of range"))?,
                    None => return self.error(exp_pos, "expected an exponent"),
                }
            } else {
                1
            };
            let magnitude = i64::try_from(magnitude.unwrap_or(1)).or_else(|_| self.error(coeff_pos, "coefficient out of range"))?;
            if magnitude == 0 {
                return self.error(coeff_pos, "zero coefficient");
            }
            if names.contains(&name) {
                return self.error(var_pos, format!("repeated variable {name}"));
            }
            names.push(name);
            terms.push((if negative { -magnitude } else { magnitude }, exponent));
        }
        let k = terms[0].1;
        if terms.iter().all(|&(_, e)| e == k) {
            let coefficients = terms.iter().map(|&(c, _)| c).collect();
            return Ok(DiagonalPolynomial::new(k, coefficients)?.into());
        }
        let t = terms.len();
        let general = terms
            .iter()
            .enumerate()
            .map(|(i, &(coefficient, e))| {
                let mut exponents = vec![0; t];
                exponents[i] = e;
                Term { coefficient, exponents }
            })
            .collect();
        Ok(GeneralPolynomial::new(t, general)?.into())
    }
}

fn poly_arg(text: &str) -> Result<PolySpec> {
    parse_poly(text)
}

#[derive(Debug, Parser)]
#[command(name = "congruence", version, about = "Image sets of polynomials modulo n")]
struct Cli {
    /// Accepted for compatibility; no command path uses randomness.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SetFormat {
    Json,
    Csv,
    Bits,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// α(n) with the chosen method.
    Alpha {
        #[arg(long, value_parser = poly_arg)]
        poly: PolySpec,
        #[arg(long)]
        n: u64,
        /// auto, closed, recurrence or oracle
        #[arg(long, default_value = "auto")]
        method: MethodChoice,
        /// Recompute by a second method and fail on disagreement.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        json: bool,
    },
    /// The image set A_n.
    Set {
        #[arg(long, value_parser = poly_arg)]
        poly: PolySpec,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = SetFormat::Json)]
        format: SetFormat,
    },
    /// N-sets at levels 2..=max-level.
    Nset {
        #[arg(long, value_parser = poly_arg)]
        poly: PolySpec,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        max_level: u32,
        #[arg(long)]
        json: bool,
    },
    /// Whether f is onto Z_n, for one n or every n up to a bound.
    #[command(group(ArgGroup::new("range").required(true).args(["n", "max_n"])))]
    Surjective {
        #[arg(long, value_parser = poly_arg)]
        poly: PolySpec,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        max_n: Option<u64>,
    },
    /// CSV table of α(n) for n = 1..=max-n.
    Table {
        #[arg(long, value_parser = poly_arg)]
        poly: PolySpec,
        #[arg(long)]
        max_n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check every available method against the oracle.
    Verify {
        #[arg(long, value_parser = poly_arg)]
        poly: PolySpec,
        #[arg(long)]
        max_n: u64,
    },
}

#[derive(Serialize)]
struct AlphaJson<'a> {
    poly: &'a str,
    n: u64,
    alpha: u64,
    method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    checked: Option<CrossCheck>,
}

#[derive(Serialize)]
struct LevelJson {
    level: u32,
    modulus: u64,
    members: Vec<u64>,
}

#[derive(Serialize)]
struct NSetJson<'a> {
    poly: &'a str,
    p: u64,
    levels: Vec<LevelJson>,
}

/// Runs the command line `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let engine = match Budget::from_env() {
        Ok(budget) => Engine::new(Oracle::new(budget)),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    match execute(&engine, cli.command) {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_USAGE
            }
        },
        Err(Failure::Mismatch(text)) => {
            let _ = write!(out, "{text}");
            EXIT_MISMATCH
        }
        Err(Failure::Usage(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Mismatch { .. } => EXIT_MISMATCH,
        _ => EXIT_USAGE,
    }
}

enum Failure {
    Usage(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e)
    }
}

fn execute(engine: &Engine, command: Command) -> std::result::Result<String, Failure> {
    let mut s = String::new();
    match command {
        Command::Alpha {
            poly,
            n,
            method,
            verify,
            json,
        } => {
            let r = engine.alpha(&poly.parsed, n, method, verify)?;
            if json {
                let rendered = render(&poly.parsed);
                let doc = AlphaJson {
                    poly: &rendered,
                    n,
                    alpha: r.value,
                    method: r.method,
                    checked: r.checked,
                };
                writeln!(s, "{}", serde_json::to_string(&doc).expect("serializable")).unwrap();
            } else {
                writeln!(s, "{}", r.value).unwrap();
                match r.checked {
                    Some(c) => writeln!(s, "method: {}; checked against {}: agree", r.method, c.against).unwrap(),
                    None => writeln!(s, "method: {}", r.method).unwrap(),
                }
            }
        }
        Command::Set { poly, n, format } => {
            let set = engine.oracle.image(&poly.parsed, n)?;
            match format {
                SetFormat::Json => writeln!(s, "{}", serde_json::to_string(&set).expect("serializable")).unwrap(),
                SetFormat::Csv => {
                    s.push_str("residue\n");
                    for a in set.iter() {
                        writeln!(s, "{a}").unwrap();
                    }
                }
                SetFormat::Bits => writeln!(s, "{}", set.to_hex()).unwrap(),
            }
        }
        Command::Nset {
            poly,
            p,
            max_level,
            json,
        } => {
            let levels = (2..=max_level)
                .map(|r| Ok((r, engine.oracle.n_set(&poly.parsed, p, r)?)))
                .collect::<Result<Vec<_>>>()?;
            if json {
                let rendered = render(&poly.parsed);
                let doc = NSetJson {
                    poly: &rendered,
                    p,
                    levels: levels
                        .into_iter()
                        .map(|(level, set)| LevelJson {
                            level,
                            modulus: set.modulus(),
                            members: set.members(),
                        })
                        .collect(),
                };
                writeln!(s, "{}", serde_json::to_string(&doc).expect("serializable")).unwrap();
            } else {
                for (r, set) in levels {
                    writeln!(s, "{r}:{set}").unwrap();
                }
            }
        }
        Command::Surjective { poly, n, max_n } => match (n, max_n) {
            (Some(n), _) => writeln!(s, "{}", engine.is_surjective(&poly.parsed, n)?).unwrap(),
            (None, Some(max)) => {
                let flags = (1..=max)
                    .into_par_iter()
                    .map(|n| engine.is_surjective(&poly.parsed, n))
                    .collect::<Result<Vec<bool>>>()?;
                for (n, _) in (1..=max).zip(flags).filter(|&(_, onto)| onto) {
                    writeln!(s, "{n}").unwrap();
                }
            }
            (None, None) => unreachable!("clap requires one of --n, --max-n"),
        },
        Command::Table { poly, max_n, out } => {
            let table = alpha_table(engine, &poly.parsed, max_n)?;
            let csv = table_csv(&table);
            match out {
                Some(path) => std::fs::write(&path, csv)
                    .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?,
                None => s = csv,
            }
        }
        Command::Verify { poly, max_n } => {
            let report = verify(engine, &poly.parsed, max_n)?;
            match report.first_mismatch {
                Some(m) => {
                    writeln!(
                        s,
                        "mismatch at n = {}: {} gave {}, oracle gave {}",
                        m.n, m.method, m.value, m.oracle
                    )
                    .unwrap();
                    return Err(Failure::Mismatch(s));
                }
                None => writeln!(
                    s,
                    "{}: {} comparisons for n = 1..={max_n}, all agree",
                    render(&poly.parsed),
                    report.comparisons
                )
                .unwrap(),
            }
        }
    }
    Ok(s)
}

/// One row of `table` output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub n: u64,
    pub alpha: u64,
    pub method: Method,
}

/// α(n) for `n = 1..=max_n` by the default dispatch.
pub fn alpha_table(engine: &Engine, f: &Polynomial, max_n: u64) -> Result<Vec<TableRow>> {
    (1..=max_n)
        .into_par_iter()
        .map(|n| {
            let r = engine.alpha(f, n, MethodChoice::Auto, false)?;
            Ok(TableRow {
                n,
                alpha: r.value,
                method: r.method,
            })
        })
        .collect()
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut s = String::from("n,alpha,method\n");
    for row in rows {
        writeln!(s, "{},{},{}", row.n, row.alpha, row.method).unwrap();
    }
    s
}

/// Reads back the output of [`table_csv`].
pub fn parse_table_csv(text: &str) -> Result<Vec<TableRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "n,alpha,method")) => {}
        _ => return Err(Error::Parse { pos: 0, msg: "missing header n,alpha,method".into() }),
    }
    lines
        .map(|(i, line)| {
            let bad = || Error::Parse {
                pos: i,
                msg: format!("malformed row {line:?}"),
            };
            let mut cells = line.split(',');
            let (Some(n), Some(alpha), Some(method), None) = (cells.next(), cells.next(), cells.next(), cells.next())
            else {
                return Err(bad());
            };
            Ok(TableRow {
                n: n.parse().map_err(|_| bad())?,
                alpha: alpha.parse().map_err(|_| bad())?,
                method: method.parse()?,
            })
        })
        .collect()
}

/// A method whose value differs from the oracle's.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyMismatch {
    pub n: u64,
    pub method: Method,
    pub value: u64,
    pub oracle: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyReport {
    pub comparisons: u64,
    pub first_mismatch: Option<VerifyMismatch>,
}

/// Compares closed form, recurrence and default dispatch with the oracle for
/// every `n ≤ max_n`. Methods that do not apply to `f` are skipped.
pub fn verify(engine: &Engine, f: &Polynomial, max_n: u64) -> Result<VerifyReport> {
    let per_n = (1..=max_n)
        .into_par_iter()
        .map(|n| {
            let oracle = engine.oracle.alpha(f, n)?;
            let mut comparisons = 0u64;
            let mut mismatch = None;
            for choice in [MethodChoice::Closed, MethodChoice::Recurrence, MethodChoice::Auto] {
                let r = match engine.alpha(f, n, choice, false) {
                    Ok(r) => r,
                    Err(Error::Unsupported(_)) if choice == MethodChoice::Closed => continue,
                    Err(e) => return Err(e),
                };
                comparisons += 1;
                if r.value != oracle && mismatch.is_none() {
                    mismatch = Some(VerifyMismatch {
                        n,
                        method: r.method,
                        value: r.value,
                        oracle,
                    });
                }
            }
            Ok((comparisons, mismatch))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport {
        comparisons: per_n.iter().map(|(c, _)| c).sum(),
        first_mismatch: per_n.into_iter().find_map(|(_, m)| m),
    })
}
