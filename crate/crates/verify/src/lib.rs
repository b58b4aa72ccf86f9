//! Command-line front end for `unramified-core`: runs the verification
//! suites over a grid of `(n, place, q)` and writes reports or value tables.

use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;
use std::thread;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Number, Value};

use unramified_core::identity::{
    guard, period_parts, rhs_value, Alternating, BaseCase, Determinant, LocalCalc, Reading, Recursion, RunParams,
    SpecialVectors, WeylConstancy, BASE_SERIES_TERMS,
};
use unramified_core::numfield::motive_delta;
use unramified_core::paramcalc::{AppendixCheck, AppendixIdentity};
use unramified_core::report::{Check, SampleOutcome};
use unramified_core::sample::{generic_pair, rng_for};
use unramified_core::zetarec::SplitZetaText;
use unramified_core::{identity, rel_err, Error, FieldData, PlaceKind, VerificationReport, C64};

#[derive(Parser, Debug)]
#[command(name = "verify", version, about = "Check unramified local identities on seeded random samples")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// ζ(Ξ,ξ) S(1) against Δ L(1/2), with factor-level localization on failure.
    Identity(Opts),
    /// Weyl-sum constancy, special vectors and the alternating property (inert only).
    Weyl(Opts),
    /// ζ closed forms against the recursion.
    Recursion(Opts),
    /// The base cases: ζ = 1 (inert), geometric series against the closed form (split).
    Basecase(Opts),
    /// Standard L-factor display against the determinant formula.
    Determinant(Opts),
    /// The theta-lift L-factor identities (inert only).
    Appendix(Opts),
    /// Per-sample values of ζ, S(1), Δ and the L-ratio.
    Table(Opts),
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Values of n, for U(n+1) × U(n+2).
    #[arg(long = "n", num_args = 1.., default_values_t = [1])]
    pub n: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Place::Both)]
    pub place: Place,
    /// Residue field sizes q_F.
    #[arg(long = "q", num_args = 1.., default_values_t = [2])]
    pub q: Vec<u64>,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance; each command has its own default.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Allow n > 3 for the identity (Weyl sums grow quickly).
    #[arg(long)]
    pub unbounded: bool,
    /// Which reading of the printed formulas to use.
    #[arg(long, value_enum, default_value_t = ReadingArg::Reconciled)]
    pub reading: ReadingArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Place {
    Inert,
    Split,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReadingArg {
    /// The reading under which the identity holds.
    Reconciled,
    /// The formulas exactly as printed.
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Identity,
    Weyl,
    Recursion,
    Basecase,
    Determinant,
    Appendix,
    Table,
}

impl CommandKind {
    fn default_tol(self) -> f64 {
        match self {
            CommandKind::Identity | CommandKind::Table => 1e-7,
            CommandKind::Weyl => 1e-6,
            CommandKind::Basecase => 1e-8,
            CommandKind::Determinant => 1e-10,
            CommandKind::Recursion | CommandKind::Appendix => 1e-9,
        }
    }
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n: Vec<usize>,
    pub places: Vec<PlaceKind>,
    pub q: Vec<u64>,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub format: Format,
    pub threads: usize,
    pub unbounded: bool,
    pub reading: Reading,
}

#[derive(Debug)]
pub enum RunError {
    /// Bad flags; exit status 2.
    Usage(String),
    /// A check could not be carried out; exit status 1.
    Failure(String),
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Failure(format!("write failed: {e}"))
    }
}

fn usage(msg: impl Into<String>) -> RunError {
    RunError::Usage(msg.into())
}

impl RunConfig {
    pub fn from_command(cmd: &Command) -> Result<Self, RunError> {
        let (command, o) = match cmd {
            Command::Identity(o) => (CommandKind::Identity, o),
            Command::Weyl(o) => (CommandKind::Weyl, o),
            Command::Recursion(o) => (CommandKind::Recursion, o),
            Command::Basecase(o) => (CommandKind::Basecase, o),
            Command::Determinant(o) => (CommandKind::Determinant, o),
            Command::Appendix(o) => (CommandKind::Appendix, o),
            Command::Table(o) => (CommandKind::Table, o),
        };
        if o.samples == 0 {
            return Err(usage("--samples must be at least 1"));
        }
        let tol = o.tol.unwrap_or(command.default_tol());
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(usage(format!("--tol must be a positive number, got {tol}")));
        }
        for &q in &o.q {
            FieldData::inert(q).map_err(|e| usage(format!("--q {q}: {e}")))?;
        }
        let inert_only = matches!(command, CommandKind::Weyl | CommandKind::Appendix);
        let places = match (o.place, inert_only) {
            (Place::Split, true) => return Err(usage(format!("{command:?} checks live at inert places only"))),
            (_, true) | (Place::Inert, false) => vec![PlaceKind::Inert],
            (Place::Split, false) => vec![PlaceKind::Split],
            (Place::Both, false) => vec![PlaceKind::Inert, PlaceKind::Split],
        };
        for &n in &o.n {
            let r = match command {
                CommandKind::Identity | CommandKind::Table => guard(n, o.unbounded),
                CommandKind::Weyl | CommandKind::Recursion | CommandKind::Determinant => guard(n, true),
                CommandKind::Basecase | CommandKind::Appendix => Ok(()),
            };
            r.map_err(|e| match e {
                Error::Size { max, .. } if max == identity::MAX_IDENTITY_N => {
                    usage(format!("--n {n} exceeds the size guard n <= {max}; pass --unbounded to lift it"))
                }
                e => usage(format!("--n {n}: {e}")),
            })?;
        }
        let threads = o.threads.unwrap_or_else(|| thread::available_parallelism().map(|k| k.get()).unwrap_or(1));
        if threads == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        let reading = match o.reading {
            ReadingArg::Reconciled => Reading::default(),
            ReadingArg::Printed => Reading::as_printed(),
        };
        Ok(RunConfig {
            command,
            n: o.n.clone(),
            places,
            q: o.q.clone(),
            samples: o.samples,
            seed: o.seed,
            tol,
            format: o.format,
            threads,
            unbounded: o.unbounded,
            reading,
        })
    }

    fn grid(&self) -> Vec<(usize, FieldData)> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &kind in &self.places {
                for &q in &self.q {
                    out.push((n, FieldData::new(q, kind).expect("q validated")));
                }
            }
        }
        out
    }

    fn params(&self, n: usize, field: FieldData) -> Result<RunParams, RunError> {
        RunParams::new(n, field, self.samples, self.seed, self.tol).map_err(|e| usage(e.to_string()))
    }

    /// The checks to run, in output order.
    pub fn checks(&self) -> Result<Vec<Box<dyn Check>>, RunError> {
        let mut out: Vec<Box<dyn Check>> = Vec::new();
        match self.command {
            CommandKind::Identity => {
                for (n, f) in self.grid() {
                    out.push(Box::new(LocalCalc { params: self.params(n, f)?, reading: self.reading }));
                }
            }
            CommandKind::Weyl => {
                for (n, f) in self.grid() {
                    let p = self.params(n, f)?;
                    out.push(Box::new(WeylConstancy { params: p }));
                    out.push(Box::new(SpecialVectors { params: RunParams { samples: 1, ..p } }));
                    out.push(Box::new(Alternating { params: p }));
                }
            }
            CommandKind::Recursion => {
                let text = if self.reading == Reading::as_printed() {
                    SplitZetaText::AsPrinted
                } else {
                    SplitZetaText::Corrected
                };
                for (n, f) in self.grid() {
                    out.push(Box::new(Recursion { params: self.params(n, f)?, text }));
                }
            }
            CommandKind::Basecase => {
                for &kind in &self.places {
                    for &q in &self.q {
                        let f = FieldData::new(q, kind).expect("q validated");
                        out.push(Box::new(BaseCase { params: self.params(0, f)?, terms: BASE_SERIES_TERMS }));
                    }
                }
            }
            CommandKind::Determinant => {
                for (n, f) in self.grid() {
                    out.push(Box::new(Determinant { params: self.params(n, f)? }));
                }
            }
            CommandKind::Appendix => {
                for &q in &self.q {
                    let field = FieldData::inert(q).expect("q validated");
                    for identity in AppendixIdentity::ALL {
                        out.push(Box::new(AppendixCheck {
                            identity,
                            field,
                            samples: self.samples,
                            seed: self.seed,
                            tol: self.tol,
                        }));
                    }
                }
            }
            CommandKind::Table => {}
        }
        Ok(out)
    }
}

/// Evaluate the samples of a check on `threads` workers and reduce in index order.
pub fn run_parallel(check: &dyn Check, threads: usize) -> Result<VerificationReport, Error> {
    let meta = check.meta();
    let k = meta.samples;
    let workers = threads.clamp(1, k.max(1));
    let parts: Vec<Result<Vec<SampleOutcome>, Error>> = thread::scope(|sc| {
        let handles: Vec<_> = (0..workers)
            .map(|t| sc.spawn(move || (t..k).step_by(workers).map(|i| check.sample(i)).collect()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("sample worker panicked")).collect()
    });
    let mut outcomes = Vec::with_capacity(k);
    for p in parts {
        outcomes.extend(p?);
    }
    Ok(VerificationReport::assemble(meta, outcomes))
}

/// `x` with 17 significant digits, or `null` when not finite.
pub fn json_number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&format!("{x:.16e}")).expect("formatted float is a JSON number"))
}

/// `re+imi` with `digits` significant digits in each part.
pub fn fmt_complex(z: C64, digits: usize) -> String {
    let p = digits.saturating_sub(1);
    let mut s = format!("{:.*e}", p, z.re);
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    let _ = write!(s, "{sign}{:.*e}i", p, z.im.abs());
    s
}

fn complex_json(z: C64) -> Value {
    if z.re.is_finite() && z.im.is_finite() {
        Value::String(fmt_complex(z, 17))
    } else {
        Value::Null
    }
}

pub fn place_name(kind: PlaceKind) -> &'static str {
    match kind {
        PlaceKind::Inert => "inert",
        PlaceKind::Split => "split",
    }
}

/// The report as a JSON object; keys come out sorted.
pub fn report_json(r: &VerificationReport) -> Value {
    let diffs: Vec<Value> = r
        .factor_diffs
        .iter()
        .map(|d| {
            let mut m = Map::new();
            m.insert("factor".into(), Value::String(d.factor.clone()));
            m.insert("lhs".into(), complex_json(d.lhs));
            m.insert("rhs".into(), complex_json(d.rhs));
            m.insert("sample".into(), Value::from(d.sample));
            Value::Object(m)
        })
        .collect();
    let mut m = Map::new();
    m.insert("check".into(), Value::String(r.check.clone()));
    m.insert("factor_diffs".into(), Value::Array(diffs));
    m.insert("max_rel_err".into(), json_number(r.max_rel_err));
    m.insert("n".into(), Value::from(r.n));
    m.insert("pass".into(), Value::Bool(r.pass));
    m.insert("place".into(), Value::String(place_name(r.kind).into()));
    m.insert("q".into(), Value::from(r.q_f));
    m.insert("samples".into(), Value::from(r.samples));
    m.insert("seed".into(), Value::from(r.seed));
    m.insert("tol".into(), json_number(r.tol));
    Value::Object(m)
}

pub const REPORT_CSV_HEADER: &str = "check,n,place,q,samples,seed,tol,max_rel_err,pass,factor_diffs";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn report_csv(r: &VerificationReport) -> String {
    let diffs: Vec<String> = r
        .factor_diffs
        .iter()
        .map(|d| format!("[{}] {}: {} vs {}", d.sample, d.factor, fmt_complex(d.lhs, 17), fmt_complex(d.rhs, 17)))
        .collect();
    format!(
        "{},{},{},{},{},{},{:.16e},{:.16e},{},{}",
        csv_field(&r.check),
        r.n,
        place_name(r.kind),
        r.q_f,
        r.samples,
        r.seed,
        r.tol,
        r.max_rel_err,
        r.pass,
        csv_field(&diffs.join("; "))
    )
}

fn report_text(r: &VerificationReport) -> String {
    let mut s = format!(
        "{} {} n={} place={} q={} samples={} seed={} max_rel_err={:.3e} tol={:.1e}",
        if r.pass { "PASS" } else { "FAIL" },
        r.check,
        r.n,
        place_name(r.kind),
        r.q_f,
        r.samples,
        r.seed,
        r.max_rel_err,
        r.tol
    );
    for d in &r.factor_diffs {
        let _ = write!(
            s,
            "\n    sample {}: {}\n        lhs = {}\n        rhs = {}",
            d.sample,
            d.factor,
            fmt_complex(d.lhs, 17),
            fmt_complex(d.rhs, 17)
        );
    }
    s
}

pub const TABLE_COLUMNS: [&str; 8] =
    ["sample_index", "zeta", "s_value", "delta", "lratio_half", "lhs", "rhs", "rel_err"];

/// One row of the value table: the same sample the identity check draws.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub sample_index: usize,
    pub zeta: C64,
    pub s_value: C64,
    pub delta: C64,
    pub lratio_half: C64,
    pub lhs: C64,
    pub rhs: C64,
    pub rel_err: f64,
}

pub fn table_row(n: usize, field: FieldData, seed: u64, index: usize, reading: Reading) -> Result<TableRow, Error> {
    let (small, big) = generic_pair(&mut rng_for(seed, index), n, field)?;
    let nan = C64::new(f64::NAN, f64::NAN);
    let (zeta, s_value) = period_parts(&small, &big, reading).unwrap_or((nan, nan));
    let delta = motive_delta(n + 2, &field);
    let lratio_half = identity::lratio(C64::new(0.5, 0.0), &small, &big).unwrap_or(nan);
    let rhs = rhs_value(&small, &big).unwrap_or(nan);
    let lhs = zeta * s_value;
    Ok(TableRow { sample_index: index, zeta, s_value, delta, lratio_half, lhs, rhs, rel_err: rel_err(lhs, rhs) })
}

fn row_csv(r: &TableRow) -> String {
    let c = |z| fmt_complex(z, 15);
    format!(
        "{},{},{},{},{},{},{},{:.14e}",
        r.sample_index,
        c(r.zeta),
        c(r.s_value),
        c(r.delta),
        c(r.lratio_half),
        c(r.lhs),
        c(r.rhs),
        r.rel_err
    )
}

fn row_json(n: usize, field: FieldData, r: &TableRow) -> Value {
    let mut m = Map::new();
    m.insert("n".into(), Value::from(n));
    m.insert("place".into(), Value::String(place_name(field.kind()).into()));
    m.insert("q".into(), Value::from(field.q_f()));
    m.insert("sample_index".into(), Value::from(r.sample_index));
    for (k, z) in [
        ("zeta", r.zeta),
        ("s_value", r.s_value),
        ("delta", r.delta),
        ("lratio_half", r.lratio_half),
        ("lhs", r.lhs),
        ("rhs", r.rhs),
    ] {
        m.insert(k.into(), complex_json(z));
    }
    m.insert("rel_err".into(), json_number(r.rel_err));
    Value::Object(m)
}

fn failure(e: Error) -> RunError {
    RunError::Failure(e.to_string())
}

/// Run a validated configuration, writing to `out`. Returns whether everything passed.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<bool, RunError> {
    if config.command == CommandKind::Table {
        return emit_table(config, out);
    }
    let mut all_pass = true;
    if config.format == Format::Csv {
        writeln!(out, "{REPORT_CSV_HEADER}")?;
    }
    for check in config.checks()? {
        let r = run_parallel(check.as_ref(), config.threads).map_err(failure)?;
        all_pass &= r.pass;
        let line = match config.format {
            Format::Json => report_json(&r).to_string(),
            Format::Csv => report_csv(&r),
            Format::Text => report_text(&r),
        };
        writeln!(out, "{line}")?;
    }
    Ok(all_pass)
}

/// Per-sample values as CSV (header row first) or JSON lines.
pub fn emit_table(config: &RunConfig, out: &mut dyn Write) -> Result<bool, RunError> {
    let mut all_pass = true;
    for (n, field) in config.grid() {
        if config.format != Format::Json {
            writeln!(out, "{}", TABLE_COLUMNS.join(","))?;
        }
        for k in 0..config.samples {
            let row = table_row(n, field, config.seed, k, config.reading).map_err(failure)?;
            all_pass &= row.rel_err <= config.tol;
            match config.format {
                Format::Json => writeln!(out, "{}", row_json(n, field, &row))?,
                _ => writeln!(out, "{}", row_csv(&row))?,
            }
        }
    }
    Ok(all_pass)
}

/// Parse, run, and return the process exit status.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let result = RunConfig::from_command(&cli.command).and_then(|c| run(&c, out));
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(RunError::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(RunError::Failure(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_formatting() {
        assert_eq!(fmt_complex(C64::new(1.5, -0.25), 3), "1.50e0-2.50e-1i");
        assert_eq!(fmt_complex(C64::new(-2.0, 0.0), 2), "-2.0e0+0.0e0i");
        assert_eq!(json_number(f64::INFINITY), Value::Null);
        assert_eq!(json_number(0.5).to_string(), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("plain"), "plain");
    }

    #[test]
    fn parallel_matches_sequential() {
        let f = FieldData::split(2).unwrap();
        let p = RunParams::new(1, f, 7, 3, 1e-7).unwrap();
        let c = LocalCalc { params: p, reading: Reading::default() };
        let seq = unramified_core::report::run_check(&c).unwrap();
        assert_eq!(run_parallel(&c, 3).unwrap(), seq);
        assert_eq!(run_parallel(&c, 64).unwrap(), seq);
    }
}
