//! Command-line front end.
//!
//! Every query echoes itself, names the methods it ran, prints the result
//! in canonical form, and reports a verification status:
//!
//! - `single-method` — only one computation route was requested;
//! - `verified-agree` — all requested routes produced identical results;
//! - `MISMATCH` — routes disagree (the record is still printed and the
//!   process exits with code 2).
//!
//! Exit codes: 0 success, 1 usage error, 2 verification mismatch. Data goes
//! to stdout, diagnostics to stderr.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Display;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigUint;
use serde::{Deserialize, Serialize};

use crate::dist::{self, DistributionPolynomial, Family};
use crate::laurent::LaurentPolynomial;
use crate::perm::AltClass;
use crate::pop::{self, FlatPop, FlatPopKind};
use crate::series::LaurentSeries;
use crate::springer::{self, QAnalogue, SpringerDeformation};
use crate::StatKind;

/// Default expansion order for series output.
pub const DEFAULT_ORDER: usize = 12;
/// Default cap on series orders; raise with the environment variable.
pub const DEFAULT_MAX_ORDER: usize = 14;
/// Environment variable overriding the series order cap.
pub const MAX_ORDER_ENV: &str = "ALTPERM_MAX_ORDER";
/// Brute-force sweeps refuse lengths beyond this without `--force`.
pub const BRUTE_LENGTH_GUARD: usize = 13;

// ---------------------------------------------------------------------------
// Output records
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "single-method")]
    SingleMethod,
    #[serde(rename = "verified-agree")]
    VerifiedAgree,
    #[serde(rename = "MISMATCH")]
    Mismatch,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::SingleMethod => "single-method",
            Status::VerifiedAgree => "verified-agree",
            Status::Mismatch => "MISMATCH",
        }
    }
}

/// One term of a polynomial in the JSON output; zero exponents are
/// omitted, coefficients are decimal (or `num/den`) strings, never floats.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_p: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_q: Option<i64>,
    pub c: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceRow {
    pub index: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub n: usize,
    pub egf: Vec<TermJson>,
    pub display: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OccurrenceRow {
    pub occurrences: usize,
    pub count: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRow {
    pub identity: String,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ResultPayload {
    Integer { value: String },
    Polynomial { polynomial: Vec<TermJson> },
    Sequence { values: Vec<SequenceRow> },
    Series { coefficients: Vec<SeriesRow> },
    Occurrences { rows: Vec<OccurrenceRow> },
    Identities { identities: Vec<IdentityRow> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub query: BTreeMap<String, String>,
    pub methods: Vec<String>,
    pub result: ResultPayload,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

pub fn polynomial_terms(p: &DistributionPolynomial) -> Vec<TermJson> {
    p.terms()
        .map(|((ep, eq), c)| TermJson {
            e_p: (ep > 0).then_some(ep as i64),
            e_q: (eq > 0).then_some(eq as i64),
            c: c.to_string(),
        })
        .collect()
}

fn laurent_terms(p: &LaurentPolynomial) -> Vec<TermJson> {
    p.terms()
        .map(|((ep, eq), c)| TermJson {
            e_p: (ep != 0).then_some(ep),
            e_q: (eq != 0).then_some(eq),
            c: c.to_string(),
        })
        .collect()
}

/// Compare the per-method values and derive the record status.
fn verify<T: PartialEq + Display>(entries: &[(&'static str, T)]) -> (Status, Option<String>) {
    if entries.len() <= 1 {
        return (Status::SingleMethod, None);
    }
    let (first_name, first) = &entries[0];
    for (name, value) in &entries[1..] {
        if value != first {
            return (
                Status::Mismatch,
                Some(format!("{first_name} gives {first} but {name} gives {value}")),
            );
        }
    }
    (Status::VerifiedAgree, None)
}

fn record(
    query: BTreeMap<String, String>,
    methods: Vec<String>,
    result: ResultPayload,
    status: Status,
    detail: Option<String>,
) -> OutputRecord {
    OutputRecord { query, methods, result, status, detail }
}

// ---------------------------------------------------------------------------
// Argument grammar
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Ud,
    Du,
}

impl ClassArg {
    fn class(self) -> AltClass {
        match self {
            ClassArg::Ud => AltClass::UpDown,
            ClassArg::Du => AltClass::DownUp,
        }
    }
    fn label(self) -> &'static str {
        match self {
            ClassArg::Ud => "ud",
            ClassArg::Du => "du",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatArg {
    Lrmax,
    Rlmax,
    Lrmin,
    Rlmin,
}

impl StatArg {
    fn kind(self) -> StatKind {
        match self {
            StatArg::Lrmax => StatKind::LrMax,
            StatArg::Rlmax => StatKind::RlMax,
            StatArg::Lrmin => StatKind::LrMin,
            StatArg::Rlmin => StatKind::RlMin,
        }
    }
    fn label(self) -> &'static str {
        match self {
            StatArg::Lrmax => "lrmax",
            StatArg::Rlmax => "rlmax",
            StatArg::Lrmin => "lrmin",
            StatArg::Rlmin => "rlmin",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Brute,
    Gf,
    Rec,
    Both,
    All,
}

impl MethodArg {
    fn label(self) -> &'static str {
        match self {
            MethodArg::Brute => "brute",
            MethodArg::Gf => "gf",
            MethodArg::Rec => "rec",
            MethodArg::Both => "both",
            MethodArg::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QAnalogArg {
    Lle,
    Be,
    Joint,
}

impl QAnalogArg {
    fn which(self) -> QAnalogue {
        match self {
            QAnalogArg::Lle => QAnalogue::Lle,
            QAnalogArg::Be => QAnalogue::Be,
            QAnalogArg::Joint => QAnalogue::Joint,
        }
    }
    fn label(self) -> &'static str {
        match self {
            QAnalogArg::Lle => "lle",
            QAnalogArg::Be => "be",
            QAnalogArg::Joint => "joint",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Lambda,
    TopFirst,
    BottomFirst,
    Vee,
}

impl VariantArg {
    fn kind(self) -> FlatPopKind {
        match self {
            VariantArg::Lambda => FlatPopKind::Lambda,
            VariantArg::TopFirst => FlatPopKind::TopFirst,
            VariantArg::BottomFirst => FlatPopKind::BottomFirst,
            VariantArg::Vee => FlatPopKind::Vee,
        }
    }
}

/// Everything `series show --name` accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GfName {
    /// sec t + tan t (zigzag-number EGF)
    Euler,
    /// 1/(cos t - sin t) (Springer-number EGF)
    Springer,
    /// right-to-left maxima on even up-down permutations
    SingleUdEven,
    /// right-to-left maxima on odd up-down permutations
    SingleUdOdd,
    /// right-to-left maxima on even down-up permutations
    SingleDuEven,
    /// right-to-left maxima on odd down-up permutations
    SingleDuOdd,
    /// joint marked-quadrant counts on even up-down permutations
    JointMmpUdEven,
    /// joint marked-quadrant counts on odd up-down permutations
    JointMmpUdOdd,
    /// joint marked-quadrant counts on even down-up permutations
    JointMmpDuEven,
    /// joint marked-quadrant counts on odd down-up permutations
    JointMmpDuOdd,
    /// joint maxima on even up-down permutations
    JointMaxminUdEven,
    /// joint maxima on odd up-down permutations
    JointMaxminUdOdd,
    /// joint maxima on even down-up permutations
    JointMaxminDuEven,
    /// joint maxima on odd down-up permutations
    JointMaxminDuOdd,
    /// LLE-marked analogue of the Springer EGF
    Lle,
    /// BE-marked analogue of the Springer EGF
    Be,
    /// joint LLE/BE analogue of the Springer EGF
    LleBe,
    /// 1/(cos t - q sin t)
    #[value(name = "springer-deformed-1")]
    SpringerDeformed1,
    /// 1/(cos t - sin qt)
    #[value(name = "springer-deformed-2")]
    SpringerDeformed2,
    /// 1/(cos qt - sin t)
    #[value(name = "springer-deformed-3")]
    SpringerDeformed3,
    /// 1/(cos t - sin t)^q
    #[value(name = "springer-deformed-4")]
    SpringerDeformed4,
}

#[derive(Parser, Debug)]
#[command(
    name = "altperm",
    version,
    about = "Exact distributions, avoidance counts, and sequence identities on alternating permutations, cross-verified by independent methods"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,
    /// Run brute-force sweeps beyond the length-13 guard.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distributions of statistics over alternating permutations.
    Dist {
        #[command(subcommand)]
        which: DistCommand,
    },
    /// Springer numbers, their recurrence, and the LLE/BE analogues.
    Springer(SpringerArgs),
    /// Flat poset-pattern avoidance and occurrence distributions.
    Pop {
        #[command(subcommand)]
        which: PopCommand,
    },
    /// Named generating functions, expanded with exact coefficients.
    Series {
        #[command(subcommand)]
        which: SeriesCommand,
    },
}

#[derive(Subcommand, Debug)]
enum DistCommand {
    /// Distribution of one maxima/minima statistic.
    Single {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum)]
        stat: StatArg,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
    },
    /// Joint distribution of the two marked-quadrant counts.
    JointMmp {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value = "all")]
        method: MethodArg,
    },
    /// Joint distribution of left-to-right and right-to-left maxima.
    JointMaxmin {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value = "all")]
        method: MethodArg,
    },
    /// Brute-verify the equidistribution identities at one length.
    Check {
        #[arg(long)]
        length: usize,
    },
}

#[derive(Args, Debug)]
struct SpringerArgs {
    /// Largest half-length to tabulate (permutation length is twice this).
    #[arg(long, default_value_t = 6)]
    max_half_n: usize,
    /// Expand an extreme-statistic analogue instead of the plain sequence
    /// (rows are labeled by permutation length, twice the t-power).
    #[arg(long, value_enum)]
    q_analog: Option<QAnalogArg>,
    /// Expand one of the four q-deformed Springer series (1-4).
    #[arg(long, value_parser = clap::value_parser!(usize))]
    section7: Option<usize>,
    /// Expansion order for --section7 (defaults to --max-half-n).
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, value_enum, default_value = "both")]
    method: MethodArg,
}

#[derive(Subcommand, Debug)]
enum PopCommand {
    /// Avoiders of a flat pattern among alternating permutations.
    Count {
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
    },
    /// Occurrence-count distribution over all permutations of the length.
    Dist {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value = "rec")]
        method: MethodArg,
    },
}

#[derive(Subcommand, Debug)]
enum SeriesCommand {
    /// Print EGF coefficients of a named series.
    Show {
        #[arg(long, value_enum)]
        name: GfName,
        /// Highest power of t to expand (default 12, capped; raise the cap
        /// with ALTPERM_MAX_ORDER).
        #[arg(long)]
        order: Option<usize>,
    },
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

enum CliError {
    Usage(String),
    Compute(String),
}

impl CliError {
    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Compute(m) => m,
        }
    }
}

fn order_cap() -> usize {
    std::env::var(MAX_ORDER_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_ORDER)
}

fn check_order(order: usize) -> Result<(), CliError> {
    let cap = order_cap();
    if order > cap {
        return Err(CliError::Usage(format!(
            "series order {order} exceeds the cap of {cap}; set {MAX_ORDER_ENV} to raise it"
        )));
    }
    Ok(())
}

fn brute_guard(length: usize, force: bool, what: &str) -> Result<(), CliError> {
    if length > BRUTE_LENGTH_GUARD {
        if !force {
            return Err(CliError::Usage(format!(
                "brute-force {what} at length {length} exceeds the guard of {BRUTE_LENGTH_GUARD}; pass --force to run anyway"
            )));
        }
        eprintln!(
            "warning: brute-force {what} at length {length} may take a long time"
        );
    }
    Ok(())
}

fn query(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

type MethodValues<T> = Vec<(&'static str, T)>;

fn polynomial_record(
    q: BTreeMap<String, String>,
    entries: MethodValues<DistributionPolynomial>,
) -> OutputRecord {
    let (status, detail) = verify(&entries);
    let methods = entries.iter().map(|(name, _)| name.to_string()).collect();
    let payload = ResultPayload::Polynomial { polynomial: polynomial_terms(&entries[0].1) };
    record(q, methods, payload, status, detail)
}

fn no_rec_route() -> CliError {
    CliError::Usage("this query has no recurrence route; use brute, gf, both, or all".into())
}

fn run_dist_single(
    class: ClassArg,
    length: usize,
    stat: StatArg,
    method: MethodArg,
    force: bool,
) -> Result<Vec<OutputRecord>, CliError> {
    if length == 0 {
        return Err(CliError::Usage("distributions need --length >= 1".into()));
    }
    let family = dist::single_family(class.class(), length, stat.kind());
    let routes: Vec<&'static str> = match method {
        MethodArg::Brute => vec!["brute"],
        MethodArg::Gf => vec!["gf"],
        MethodArg::Rec => return Err(no_rec_route()),
        MethodArg::Both | MethodArg::All => vec!["brute", "gf"],
    };
    let mut entries: MethodValues<DistributionPolynomial> = Vec::new();
    for name in routes {
        match name {
            "brute" => {
                brute_guard(length, force, "distribution sweep")?;
                entries.push((name, dist::brute_single(length, class.class(), stat.kind())));
            }
            "gf" => {
                check_order(length)?;
                let series = dist::gf_single(family, length);
                let value = dist::egf_distribution(&series, length, "single closed form")
                    .map_err(|e| CliError::Compute(e.to_string()))?;
                entries.push((name, value));
            }
            _ => unreachable!(),
        }
    }
    let q = query(&[
        ("command", "dist single".into()),
        ("class", class.label().into()),
        ("length", length.to_string()),
        ("stat", stat.label().into()),
        ("method", method.label().into()),
    ]);
    Ok(vec![polynomial_record(q, entries)])
}

fn run_dist_joint(
    mmp: bool,
    class: ClassArg,
    length: usize,
    method: MethodArg,
    force: bool,
) -> Result<Vec<OutputRecord>, CliError> {
    if length == 0 {
        return Err(CliError::Usage("distributions need --length >= 1".into()));
    }
    let family = Family::of(class.class(), length);
    let routes: Vec<&'static str> = match (method, mmp) {
        (MethodArg::Brute, _) => vec!["brute"],
        (MethodArg::Gf, _) => vec!["gf"],
        (MethodArg::Rec, true) => vec!["rec"],
        (MethodArg::Rec, false) => return Err(no_rec_route()),
        (MethodArg::Both, _) => vec!["brute", "gf"],
        (MethodArg::All, true) => vec!["brute", "gf", "rec"],
        (MethodArg::All, false) => vec!["brute", "gf", "subst"],
    };
    let mut entries: MethodValues<DistributionPolynomial> = Vec::new();
    for name in routes {
        let value = match name {
            "brute" => {
                brute_guard(length, force, "distribution sweep")?;
                if mmp {
                    dist::brute_joint_mmp(length, class.class())
                } else {
                    dist::brute_joint_maxmin(length, class.class())
                }
            }
            "gf" => {
                check_order(length)?;
                let series = if mmp {
                    dist::gf_joint_mmp(family, length)
                } else {
                    dist::gf_joint_maxmin(family, length)
                };
                dist::egf_distribution(&series, length, "joint closed form")
                    .map_err(|e| CliError::Compute(e.to_string()))?
            }
            "rec" => dist::rec_joint_mmp(family, length)
                .map_err(|e| CliError::Compute(e.to_string()))?,
            "subst" => {
                check_order(length)?;
                let series = dist::gf_joint_maxmin_via_subst(family, length);
                dist::egf_distribution(&series, length, "substitution route")
                    .map_err(|e| CliError::Compute(e.to_string()))?
            }
            _ => unreachable!(),
        };
        entries.push((name, value));
    }
    let q = query(&[
        ("command", if mmp { "dist joint-mmp" } else { "dist joint-maxmin" }.into()),
        ("class", class.label().into()),
        ("length", length.to_string()),
        ("method", method.label().into()),
    ]);
    Ok(vec![polynomial_record(q, entries)])
}

fn run_dist_check(length: usize, force: bool) -> Result<Vec<OutputRecord>, CliError> {
    if length == 0 {
        return Err(CliError::Usage("distributions need --length >= 1".into()));
    }
    brute_guard(length, force, "equidistribution sweep")?;
    let report = dist::check_equidistribution(length);
    let identities: Vec<IdentityRow> = report
        .checks
        .iter()
        .map(|c| IdentityRow {
            identity: c.name.clone(),
            status: if c.passed() { Status::VerifiedAgree } else { Status::Mismatch },
        })
        .collect();
    let status = if report.all_pass() { Status::VerifiedAgree } else { Status::Mismatch };
    let detail = (!report.all_pass())
        .then(|| format!("{} identities failed", report.failures().len()));
    let q = query(&[("command", "dist check".into()), ("length", length.to_string())]);
    Ok(vec![record(
        q,
        vec!["brute".into()],
        ResultPayload::Identities { identities },
        status,
        detail,
    )])
}

fn run_springer(args: &SpringerArgs, force: bool) -> Result<Vec<OutputRecord>, CliError> {
    if let Some(index) = args.section7 {
        let kind = SpringerDeformation::from_index(index)
            .ok_or_else(|| CliError::Usage("--section7 takes an index from 1 to 4".into()))?;
        return run_deformation(args, kind);
    }
    if let Some(analog) = args.q_analog {
        return run_q_analogue(args, analog, force);
    }
    run_springer_table(args, force)
}

fn run_springer_table(args: &SpringerArgs, force: bool) -> Result<Vec<OutputRecord>, CliError> {
    let max = args.max_half_n;
    let mut entries: MethodValues<Vec<BigUint>> = Vec::new();
    let methods: Vec<&'static str> = match args.method {
        MethodArg::Gf => vec!["gf"],
        MethodArg::Rec => vec!["rec"],
        MethodArg::Brute => vec!["brute"],
        MethodArg::Both => vec!["gf", "rec"],
        MethodArg::All => vec!["gf", "rec", "brute"],
    };
    for name in methods {
        let values = match name {
            "gf" => {
                check_order(max)?;
                springer::springer_numbers(max)
            }
            "rec" => springer::rc_count_recurrence(max),
            "brute" => {
                brute_guard(2 * max, force, "fixed-permutation sweep")?;
                (0..=max).map(springer::brute_rc_count).collect()
            }
            _ => unreachable!(),
        };
        entries.push((name, values));
    }
    let (status, detail) = verify_tables(&entries);
    let method_names = entries.iter().map(|(n, _)| n.to_string()).collect();
    let values = entries[0]
        .1
        .iter()
        .enumerate()
        .map(|(index, v)| SequenceRow { index, value: v.to_string() })
        .collect();
    let q = query(&[
        ("command", "springer".into()),
        ("max-half-n", max.to_string()),
        ("method", args.method.label().into()),
    ]);
    Ok(vec![record(q, method_names, ResultPayload::Sequence { values }, status, detail)])
}

fn verify_tables(entries: &MethodValues<Vec<BigUint>>) -> (Status, Option<String>) {
    if entries.len() <= 1 {
        return (Status::SingleMethod, None);
    }
    let (first_name, first) = &entries[0];
    for (name, values) in &entries[1..] {
        if let Some(i) = (0..first.len().max(values.len()))
            .find(|&i| first.get(i) != values.get(i))
        {
            return (
                Status::Mismatch,
                Some(format!(
                    "{first_name} and {name} first disagree at index {i}: {:?} vs {:?}",
                    first.get(i),
                    values.get(i)
                )),
            );
        }
    }
    (Status::VerifiedAgree, None)
}

fn run_q_analogue(
    args: &SpringerArgs,
    analog: QAnalogArg,
    force: bool,
) -> Result<Vec<OutputRecord>, CliError> {
    let max = args.max_half_n;
    check_order(max)?;
    let use_brute = matches!(args.method, MethodArg::Both | MethodArg::All | MethodArg::Brute);
    let use_gf = !matches!(args.method, MethodArg::Brute);
    if matches!(args.method, MethodArg::Rec) {
        return Err(CliError::Usage(
            "the analogues have no recurrence route; use brute, gf, both, or all".into(),
        ));
    }
    if use_brute {
        brute_guard(2 * max, force, "fixed-permutation sweep")?;
    }

    let mut methods: Vec<String> = Vec::new();
    if use_gf {
        methods.push("gf".into());
    }
    if use_brute {
        methods.push("brute".into());
    }

    let mut rows = Vec::new();
    let mut status = if methods.len() == 1 { Status::SingleMethod } else { Status::VerifiedAgree };
    let mut detail = None;
    // the analogue series start at t^1; rows are labeled by permutation
    // length (twice the t-power) to avoid half-length ambiguity
    for n in 1..=max {
        let gf_value = springer::q_analogue_coefficient(analog.which(), n)
            .map_err(|e| CliError::Compute(e.to_string()))?;
        let value = if use_gf {
            gf_value.clone()
        } else {
            brute_analogue(analog, n).map_err(|e| CliError::Compute(e.to_string()))?
        };
        if use_gf && use_brute {
            let brute = brute_analogue(analog, n).map_err(|e| CliError::Compute(e.to_string()))?;
            if brute != gf_value && status != Status::Mismatch {
                status = Status::Mismatch;
                detail = Some(format!(
                    "gf gives {gf_value} but brute gives {brute} at length {}",
                    2 * n
                ));
            }
        }
        rows.push(SeriesRow {
            n: 2 * n,
            egf: polynomial_terms(&value),
            display: value.to_string(),
        });
    }
    let q = query(&[
        ("command", "springer".into()),
        ("q-analog", analog.label().into()),
        ("max-half-n", max.to_string()),
        ("method", args.method.label().into()),
    ]);
    Ok(vec![record(q, methods, ResultPayload::Series { coefficients: rows }, status, detail)])
}

fn brute_analogue(analog: QAnalogArg, half_n: usize) -> Result<DistributionPolynomial, String> {
    let joint = springer::brute_lle_be(2 * half_n).map_err(|e| e.to_string())?;
    Ok(match analog {
        QAnalogArg::Lle => joint.set_p_one(),
        QAnalogArg::Be => joint.set_q_one(),
        QAnalogArg::Joint => joint,
    })
}

fn run_deformation(
    args: &SpringerArgs,
    kind: SpringerDeformation,
) -> Result<Vec<OutputRecord>, CliError> {
    if matches!(args.method, MethodArg::Brute | MethodArg::Rec) {
        return Err(CliError::Usage(
            "the deformed series have a single (gf) route; use gf, both, or all".into(),
        ));
    }
    let order = args.order.unwrap_or(args.max_half_n.max(4));
    check_order(order)?;
    let mut rows = Vec::new();
    for n in 0..=order {
        let value = springer::deformed_springer_coefficient(kind, n)
            .map_err(|e| CliError::Compute(e.to_string()))?;
        rows.push(SeriesRow { n, egf: polynomial_terms(&value), display: value.to_string() });
    }
    let q = query(&[
        ("command", "springer".into()),
        ("section7", kind.index().to_string()),
        ("order", order.to_string()),
    ]);
    Ok(vec![record(
        q,
        vec!["gf".into()],
        ResultPayload::Series { coefficients: rows },
        Status::SingleMethod,
        None,
    )])
}

fn run_pop_count(
    variant: VariantArg,
    k: usize,
    class: ClassArg,
    length: usize,
    method: MethodArg,
    force: bool,
) -> Result<Vec<OutputRecord>, CliError> {
    let pattern =
        FlatPop::new(variant.kind(), k).map_err(|e| CliError::Usage(e.to_string()))?;
    let methods: Vec<&'static str> = match method {
        MethodArg::Brute => vec!["brute"],
        MethodArg::Gf => {
            return Err(CliError::Usage(
                "pattern counts have no gf route; use rec, brute, both, or all".into(),
            ))
        }
        MethodArg::Rec => vec!["rec"],
        MethodArg::Both | MethodArg::All => vec!["rec", "brute"],
    };
    let mut entries: MethodValues<BigUint> = Vec::new();
    for name in methods {
        let value = match name {
            "rec" => pop::pop_table_lookup(pattern, class.class(), length)
                .map_err(|e| CliError::Compute(e.to_string()))?,
            "brute" => {
                brute_guard(length, force, "avoidance sweep")?;
                pop::brute_pop_avoiding(length, class.class(), &pattern.pop())
            }
            _ => unreachable!(),
        };
        entries.push((name, value));
    }
    let (status, detail) = verify(&entries);
    let method_names = entries.iter().map(|(n, _)| n.to_string()).collect();
    let payload = ResultPayload::Integer { value: entries[0].1.to_string() };
    let q = query(&[
        ("command", "pop count".into()),
        ("variant", pattern.kind().name().into()),
        ("k", k.to_string()),
        ("class", class.label().into()),
        ("length", length.to_string()),
        ("method", method.label().into()),
    ]);
    Ok(vec![record(q, method_names, payload, status, detail)])
}

fn run_pop_dist(
    k: usize,
    length: usize,
    method: MethodArg,
    force: bool,
) -> Result<Vec<OutputRecord>, CliError> {
    let methods: Vec<&'static str> = match method {
        MethodArg::Brute => vec!["brute"],
        MethodArg::Gf => {
            return Err(CliError::Usage(
                "occurrence distributions have no gf route; use rec, brute, both, or all".into(),
            ))
        }
        MethodArg::Rec => vec!["rec"],
        MethodArg::Both | MethodArg::All => vec!["rec", "brute"],
    };
    let mut entries: MethodValues<pop::OccurrenceTable> = Vec::new();
    for name in methods {
        let value = match name {
            "rec" => pop::flat_pop_distribution(length, k)
                .map_err(|e| CliError::Usage(e.to_string()))?,
            "brute" => {
                brute_guard(length, force, "full-symmetric-group sweep")?;
                pop::brute_flat_pop_distribution(length, k)
                    .map_err(|e| CliError::Usage(e.to_string()))?
            }
            _ => unreachable!(),
        };
        entries.push((name, value));
    }
    let (status, detail) = verify_tables_occ(&entries);
    let method_names = entries.iter().map(|(n, _)| n.to_string()).collect();
    let rows = entries[0]
        .1
        .counts()
        .iter()
        .enumerate()
        .map(|(occurrences, count)| OccurrenceRow { occurrences, count: count.to_string() })
        .collect();
    let q = query(&[
        ("command", "pop dist".into()),
        ("k", k.to_string()),
        ("length", length.to_string()),
        ("method", method.label().into()),
    ]);
    Ok(vec![record(q, method_names, ResultPayload::Occurrences { rows }, status, detail)])
}

fn verify_tables_occ(entries: &MethodValues<pop::OccurrenceTable>) -> (Status, Option<String>) {
    if entries.len() <= 1 {
        return (Status::SingleMethod, None);
    }
    let (first_name, first) = &entries[0];
    for (name, table) in &entries[1..] {
        if table.counts() != first.counts() {
            return (
                Status::Mismatch,
                Some(format!("{first_name} and {name} tables differ")),
            );
        }
    }
    (Status::VerifiedAgree, None)
}

fn named_series(name: GfName, order: usize) -> LaurentSeries {
    match name {
        GfName::Euler => crate::series::sec_plus_tan::<LaurentPolynomial>(order),
        GfName::Springer => crate::series::springer_egf::<LaurentPolynomial>(order),
        GfName::SingleUdEven => dist::gf_single(Family::UdEven, order),
        GfName::SingleUdOdd => dist::gf_single(Family::UdOdd, order),
        GfName::SingleDuEven => dist::gf_single(Family::DuEven, order),
        GfName::SingleDuOdd => dist::gf_single(Family::DuOdd, order),
        GfName::JointMmpUdEven => dist::gf_joint_mmp(Family::UdEven, order),
        GfName::JointMmpUdOdd => dist::gf_joint_mmp(Family::UdOdd, order),
        GfName::JointMmpDuEven => dist::gf_joint_mmp(Family::DuEven, order),
        GfName::JointMmpDuOdd => dist::gf_joint_mmp(Family::DuOdd, order),
        GfName::JointMaxminUdEven => dist::gf_joint_maxmin(Family::UdEven, order),
        GfName::JointMaxminUdOdd => dist::gf_joint_maxmin(Family::UdOdd, order),
        GfName::JointMaxminDuEven => dist::gf_joint_maxmin(Family::DuEven, order),
        GfName::JointMaxminDuOdd => dist::gf_joint_maxmin(Family::DuOdd, order),
        GfName::Lle => springer::gf_q_analogue(QAnalogue::Lle, order),
        GfName::Be => springer::gf_q_analogue(QAnalogue::Be, order),
        GfName::LleBe => springer::gf_q_analogue(QAnalogue::Joint, order),
        GfName::SpringerDeformed1 => {
            springer::deformed_springer_egf(SpringerDeformation::ScaledSine, order)
        }
        GfName::SpringerDeformed2 => {
            springer::deformed_springer_egf(SpringerDeformation::SineArgument, order)
        }
        GfName::SpringerDeformed3 => {
            springer::deformed_springer_egf(SpringerDeformation::CosineArgument, order)
        }
        GfName::SpringerDeformed4 => {
            springer::deformed_springer_egf(SpringerDeformation::PowerExponent, order)
        }
    }
}

fn run_series_show(name: GfName, order: Option<usize>) -> Result<Vec<OutputRecord>, CliError> {
    let order = order.unwrap_or(DEFAULT_ORDER);
    check_order(order)?;
    let series = named_series(name, order);
    let mut rows = Vec::new();
    for n in 0..=order.min(series.order()) {
        let value = series
            .egf_coefficient(n)
            .map_err(|e| CliError::Compute(e.to_string()))?;
        rows.push(SeriesRow { n, egf: laurent_terms(&value), display: value.to_string() });
    }
    let name_label = name
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let q = query(&[
        ("command", "series show".into()),
        ("name", name_label),
        ("order", order.to_string()),
    ]);
    Ok(vec![record(
        q,
        vec!["gf".into()],
        ResultPayload::Series { coefficients: rows },
        Status::SingleMethod,
        None,
    )])
}

fn execute(cli: &Cli) -> Result<Vec<OutputRecord>, CliError> {
    match &cli.command {
        Command::Dist { which } => match *which {
            DistCommand::Single { class, length, stat, method } => {
                run_dist_single(class, length, stat, method, cli.force)
            }
            DistCommand::JointMmp { class, length, method } => {
                run_dist_joint(true, class, length, method, cli.force)
            }
            DistCommand::JointMaxmin { class, length, method } => {
                run_dist_joint(false, class, length, method, cli.force)
            }
            DistCommand::Check { length } => run_dist_check(length, cli.force),
        },
        Command::Springer(args) => run_springer(args, cli.force),
        Command::Pop { which } => match *which {
            PopCommand::Count { variant, k, class, length, method } => {
                run_pop_count(variant, k, class, length, method, cli.force)
            }
            PopCommand::Dist { k, length, method } => {
                run_pop_dist(k, length, method, cli.force)
            }
        },
        Command::Series { which } => match *which {
            SeriesCommand::Show { name, order } => run_series_show(name, order),
        },
    }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

fn render_table(records: &[OutputRecord], out: &mut String) {
    for (i, r) in records.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let query_line: Vec<String> =
            r.query.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!("query:   {}\n", query_line.join(" ")));
        out.push_str(&format!("methods: {}\n", r.methods.join(", ")));
        match &r.result {
            ResultPayload::Integer { value } => out.push_str(&format!("result:  {value}\n")),
            ResultPayload::Polynomial { .. } => {
                // the display form is reconstructible from the terms, but the
                // terms were built from a polynomial we no longer hold; print
                // them in canonical order
                let terms = match &r.result {
                    ResultPayload::Polynomial { polynomial } => polynomial,
                    _ => unreachable!(),
                };
                out.push_str(&format!("result:  {}\n", render_terms(terms)));
            }
            ResultPayload::Sequence { values } => {
                out.push_str("result:\n");
                for row in values {
                    out.push_str(&format!("  {:>4}  {}\n", row.index, row.value));
                }
            }
            ResultPayload::Series { coefficients } => {
                out.push_str("result:\n");
                for row in coefficients {
                    out.push_str(&format!("  {:>4}  {}\n", row.n, row.display));
                }
            }
            ResultPayload::Occurrences { rows } => {
                out.push_str("result:\n");
                for row in rows {
                    out.push_str(&format!("  {:>4}  {}\n", row.occurrences, row.count));
                }
            }
            ResultPayload::Identities { identities } => {
                out.push_str("result:\n");
                for row in identities {
                    out.push_str(&format!("  {:<9} {}\n", row.status.label(), row.identity));
                }
            }
        }
        out.push_str(&format!("status:  {}\n", r.status.label()));
        if let Some(detail) = &r.detail {
            out.push_str(&format!("detail:  {detail}\n"));
        }
    }
}

/// Human form of a JSON term list (used by the table renderer).
fn render_terms(terms: &[TermJson]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for t in terms {
        let mut s = String::new();
        let has_vars = t.e_p.is_some() || t.e_q.is_some();
        if t.c != "1" || !has_vars {
            s.push_str(&t.c);
        }
        if let Some(ep) = t.e_p {
            s.push('p');
            if ep != 1 {
                s.push_str(&format!("^{ep}"));
            }
        }
        if let Some(eq) = t.e_q {
            s.push('q');
            if eq != 1 {
                s.push_str(&format!("^{eq}"));
            }
        }
        parts.push(s);
    }
    parts.join(" + ")
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn render_csv(records: &[OutputRecord], out: &mut String) {
    for r in records {
        match &r.result {
            ResultPayload::Integer { value } => {
                out.push_str("value\n");
                out.push_str(&format!("{value}\n"));
            }
            ResultPayload::Polynomial { polynomial } => {
                out.push_str("e_p,e_q,coefficient\n");
                for t in polynomial {
                    out.push_str(&format!(
                        "{},{},{}\n",
                        t.e_p.unwrap_or(0),
                        t.e_q.unwrap_or(0),
                        csv_quote(&t.c)
                    ));
                }
            }
            ResultPayload::Sequence { values } => {
                out.push_str("index,value\n");
                for row in values {
                    out.push_str(&format!("{},{}\n", row.index, csv_quote(&row.value)));
                }
            }
            ResultPayload::Series { coefficients } => {
                out.push_str("n,coefficient\n");
                for row in coefficients {
                    out.push_str(&format!("{},{}\n", row.n, csv_quote(&row.display)));
                }
            }
            ResultPayload::Occurrences { rows } => {
                out.push_str("occurrences,count\n");
                for row in rows {
                    out.push_str(&format!("{},{}\n", row.occurrences, csv_quote(&row.count)));
                }
            }
            ResultPayload::Identities { identities } => {
                out.push_str("identity,status\n");
                for row in identities {
                    out.push_str(&format!(
                        "{},{}\n",
                        csv_quote(&row.identity),
                        row.status.label()
                    ));
                }
            }
        }
    }
}

fn render(records: &[OutputRecord], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Table => render_table(records, &mut out),
        Format::Json => {
            if records.len() == 1 {
                out.push_str(&serde_json::to_string(&records[0]).expect("serializable"));
            } else {
                out.push_str(&serde_json::to_string(records).expect("serializable"));
            }
            out.push('\n');
        }
        Format::Csv => render_csv(records, &mut out),
    }
    out
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Parse and run; returns the process exit code. Output goes to stdout,
/// diagnostics (usage errors, warnings) to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            return 1;
        }
    };
    match execute(&cli) {
        Ok(records) => {
            print!("{}", render(&records, cli.format));
            if records.iter().any(|r| r.status == Status::Mismatch) {
                2
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dp(pairs: &[(u32, u32, u64)]) -> DistributionPolynomial {
        let mut out = DistributionPolynomial::zero();
        for &(ep, eq, c) in pairs {
            for _ in 0..c {
                out.add_unit_term(ep, eq);
            }
        }
        out
    }

    #[test]
    fn term_serialization_omits_zero_exponents() {
        let poly = dp(&[(0, 1, 2), (0, 2, 3)]);
        let json = serde_json::to_string(&polynomial_terms(&poly)).unwrap();
        assert_eq!(json, r#"[{"e_q":1,"c":"2"},{"e_q":2,"c":"3"}]"#);
        let mixed = dp(&[(0, 0, 1), (1, 2, 4)]);
        let json = serde_json::to_string(&polynomial_terms(&mixed)).unwrap();
        assert_eq!(json, r#"[{"c":"1"},{"e_p":1,"e_q":2,"c":"4"}]"#);
    }

    #[test]
    fn term_json_roundtrip_is_byte_identical() {
        let poly = dp(&[(0, 1, 2), (0, 2, 3), (2, 0, 7)]);
        let emitted = serde_json::to_string(&polynomial_terms(&poly)).unwrap();
        let parsed: Vec<TermJson> = serde_json::from_str(&emitted).unwrap();
        assert_eq!(serde_json::to_string(&parsed).unwrap(), emitted);
    }

    #[test]
    fn verify_statuses() {
        let a = dp(&[(0, 1, 2)]);
        let b = dp(&[(0, 1, 3)]);
        assert_eq!(verify(&[("brute", a.clone())]).0, Status::SingleMethod);
        assert_eq!(verify(&[("brute", a.clone()), ("gf", a.clone())]).0, Status::VerifiedAgree);
        let (status, detail) = verify(&[("brute", a), ("gf", b)]);
        assert_eq!(status, Status::Mismatch);
        assert!(detail.unwrap().contains("brute"));
    }

    #[test]
    fn render_terms_human_form() {
        let poly = dp(&[(0, 1, 2), (0, 2, 3)]);
        assert_eq!(render_terms(&polynomial_terms(&poly)), "2q + 3q^2");
        let one = DistributionPolynomial::one();
        assert_eq!(render_terms(&polynomial_terms(&one)), "1");
        assert_eq!(render_terms(&[]), "0");
        let unit_vars = dp(&[(1, 1, 1)]);
        assert_eq!(render_terms(&polynomial_terms(&unit_vars)), "pq");
    }

    #[test]
    fn mismatch_records_yield_exit_two() {
        // wire a fake mismatch through the aggregation logic
        let a = dp(&[(0, 1, 2)]);
        let b = dp(&[(0, 1, 3)]);
        let rec = polynomial_record(
            query(&[("command", "test".into())]),
            vec![("brute", a), ("gf", b)],
        );
        assert_eq!(rec.status, Status::Mismatch);
        assert!(rec.detail.is_some());
        // the runner maps any mismatch record to exit code 2
        let records = vec![rec];
        let code = if records.iter().any(|r| r.status == Status::Mismatch) { 2 } else { 0 };
        assert_eq!(code, 2);
    }

    #[test]
    fn order_cap_env_override() {
        // no env set in tests: default cap applies
        assert!(check_order(DEFAULT_MAX_ORDER).is_ok());
        assert!(check_order(DEFAULT_MAX_ORDER + 1).is_err());
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_quote("plain"), "plain");
        assert_eq!(csv_quote("a,b"), "\"a,b\"");
        assert_eq!(csv_quote("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
