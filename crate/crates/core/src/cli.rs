//! Command-line front end. Exit codes: 0 success, 1 invalid arguments,
//! 2 validation failure, 3 budget exceeded.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::abelian::SearchBudget;
use crate::arith::{solve_pentagonal_residues, Modulus};
use crate::cayley::{
    check_identity, toyoda_decompose, validate_latin, CayleyTable, IdentityName, Operation,
    DEFAULT_MEDIAL_LIMIT,
};
use crate::enumerate::{survey, SurveyOptions};
use crate::error::{Error, Result};
use crate::parastro::{
    classify_report, classify_table, linear_parastrophe, parastrophe, parastrophe_class_matrix,
    Column, Method, ParastropheIndex, MATRIX_CLASSES,
};
use crate::pentagon::{construct_table, make_linear};
use crate::translat::{
    a_table, all_translatability_indices, k_table, translatability_witness, DEFAULT_VERIFY_LIMIT,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_ARGS: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Formula,
    Brute,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Formula => Method::Formula,
            MethodArg::Brute => Method::BruteForce,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "pentaq",
    version,
    about = "Pentagonal quasigroups: construction, verification, translatability, parastrophes"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Label base for printed elements and tables (0 or 1).
    #[arg(long, global = true, default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=1))]
    base: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coefficients 1 < a < n of pentagonal quasigroups on Z_n.
    Solve {
        #[arg(long)]
        n: u64,
    },
    /// Cayley table of x.y = [ax + (1-a)y]_n.
    Build {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Latin, idempotent, medial and pentagonal checks on a table file.
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// Largest order checked for mediality.
        #[arg(long, default_value_t = DEFAULT_MEDIAL_LIMIT)]
        medial_limit: usize,
    },
    /// Recover the group sum and automorphism of a table file.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        /// Base element, as a 0-based label.
        #[arg(long, default_value_t = 0)]
        e: usize,
    },
    /// Translatability indices of a table file or a linear quasigroup.
    Translate {
        #[arg(long, conflicts_with_all = ["n", "a"], required_unless_present_all = ["n", "a"])]
        input: Option<PathBuf>,
        #[arg(long, requires = "a")]
        n: Option<u64>,
        #[arg(long, requires = "n")]
        a: Option<u64>,
    },
    /// Linear quasigroups that are k-translatable, for k = 2..max.
    Ktable {
        #[arg(long, default_value_t = 20)]
        max: u64,
    },
    /// One parastrophe of a linear pentagonal quasigroup.
    Parastrophe {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        a: u64,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        which: u8,
        /// Also print the materialized table.
        #[arg(long)]
        table: bool,
    },
    /// Identity classes of a table file, a linear quasigroup, or the
    /// parastrophe class matrix of all linear pentagonal quasigroups.
    Classify {
        #[arg(long, conflicts_with_all = ["n", "a", "matrix"])]
        input: Option<PathBuf>,
        #[arg(long, requires = "a", conflicts_with = "matrix")]
        n: Option<u64>,
        #[arg(long, requires = "n", conflicts_with = "matrix")]
        a: Option<u64>,
        /// Class matrix over all (n, a) with n < max-n.
        #[arg(long)]
        matrix: bool,
        #[arg(long, default_value_t = 100)]
        max_n: u64,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
    },
    /// Which Abelian groups of order 2..max induce pentagonal quasigroups.
    Survey {
        #[arg(long, default_value_t = 100)]
        max: u64,
        /// Run searches beyond the default candidate budget.
        #[arg(long)]
        heavy: bool,
    },
    /// Moduli n and translatability indices k for each coefficient a = 2..a-max.
    Atable {
        #[arg(long, default_value_t = 24)]
        a_max: u64,
    },
}

/// Failure carrying an exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::InvalidModulus(_)
            | Error::InvalidArgument(_)
            | Error::InvalidCoefficient { .. }
            | Error::Io(_) => EXIT_INVALID_ARGS,
            Error::ShapeMismatch(_)
            | Error::Unsupported(_)
            | Error::NotLatin
            | Error::Precondition(_)
            | Error::Inconsistent(_)
            | Error::Parse { .. } => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::from(Error::Io(e))
    }
}

type CliResult = std::result::Result<i32, Failure>;

fn configure_threads() {
    if let Some(n) = std::env::var("PENTAQ_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

/// Parses `argv` (including the program name) and runs one verb.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_INVALID_ARGS
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    configure_threads();
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult {
    let fmt = cli.format;
    let base = cli.base;
    match &cli.command {
        Command::Solve { n } => cmd_solve(*n, fmt, out),
        Command::Build { n, a, out: path } => cmd_build(*n, *a, path.as_ref(), fmt, base, out),
        Command::Verify {
            input,
            medial_limit,
        } => cmd_verify(input, *medial_limit, fmt, out),
        Command::Decompose { input, e } => cmd_decompose(input, *e, fmt, base, out),
        Command::Translate { input, n, a } => cmd_translate(input.as_ref(), *n, *a, fmt, out),
        Command::Ktable { max } => cmd_ktable(*max, fmt, out),
        Command::Parastrophe { n, a, which, table } => {
            cmd_parastrophe(*n, *a, *which, *table, fmt, base, out)
        }
        Command::Classify {
            input,
            n,
            a,
            matrix,
            max_n,
            method,
        } => {
            if *matrix {
                cmd_matrix(*max_n, (*method).into(), fmt, out)
            } else {
                cmd_classify(input.as_ref(), *n, *a, (*method).into(), fmt, out)
            }
        }
        Command::Survey { max, heavy } => cmd_survey(*max, *heavy, fmt, out),
        Command::Atable { a_max } => cmd_atable(*a_max, fmt, out),
    }
}

fn emit_json(out: &mut dyn Write, v: &Value) -> std::io::Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(v).expect("serializable")
    )
}

fn table_csv(t: &CayleyTable, base: u32) -> String {
    t.rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| (v + base).to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

fn table_json(t: &CayleyTable, base: u32) -> Value {
    let rows: Vec<Vec<u32>> = t
        .rows()
        .into_iter()
        .map(|r| r.into_iter().map(|v| v + base).collect())
        .collect();
    json!(rows)
}

fn render_table(t: &CayleyTable, fmt: Format, base: u32) -> String {
    match fmt {
        Format::Csv => table_csv(t, base),
        _ => t.to_text(base),
    }
}

fn cmd_solve(n: u64, fmt: Format, out: &mut dyn Write) -> CliResult {
    let roots: Vec<u64> = solve_pentagonal_residues(Modulus::new(n)?)?
        .into_iter()
        .map(|r| r.value())
        .collect();
    match fmt {
        Format::Text => {
            let s: Vec<String> = roots.iter().map(u64::to_string).collect();
            writeln!(out, "{}", s.join(" "))?;
        }
        Format::Csv => {
            writeln!(out, "n,a")?;
            for a in &roots {
                writeln!(out, "{n},{a}")?;
            }
        }
        Format::Json => emit_json(out, &json!({ "n": n, "roots": roots }))?,
    }
    Ok(EXIT_OK)
}

fn cmd_build(
    n: u64,
    a: u64,
    path: Option<&PathBuf>,
    fmt: Format,
    base: u32,
    out: &mut dyn Write,
) -> CliResult {
    let q = make_linear(n, a)?;
    let t = construct_table(&q).map_err(|e| match e {
        Error::BudgetExceeded { size, limit, .. } => Failure {
            code: EXIT_BUDGET,
            message: format!(
                "order {size} exceeds the table limit {limit}; use `translate --n {n} --a {a}` \
                 or `parastrophe` for symbolic results"
            ),
        },
        other => other.into(),
    })?;
    if let Some(p) = path {
        t.write_file(p, base)?;
        return Ok(EXIT_OK);
    }
    match fmt {
        Format::Json => emit_json(
            out,
            &json!({ "n": n, "a": a, "base": base, "rows": table_json(&t, base) }),
        )?,
        _ => write!(out, "{}", render_table(&t, fmt, base))?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify(input: &Path, medial_limit: usize, fmt: Format, out: &mut dyn Write) -> CliResult {
    let t = CayleyTable::read_file(input)?;
    let latin = validate_latin(&t);
    let check = |id| -> Result<Option<bool>> {
        if !latin {
            return Ok(None);
        }
        match check_identity(&t, id, medial_limit) {
            Ok(b) => Ok(Some(b)),
            Err(Error::BudgetExceeded { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let idempotent = check(IdentityName::Idempotent)?;
    let medial = check(IdentityName::Medial)?;
    let pentagonal = check(IdentityName::Pentagonal)?;
    let all = latin && idempotent == Some(true) && medial == Some(true) && pentagonal == Some(true);
    let skipped_medial = latin && medial.is_none();
    let show = |v: Option<bool>| match v {
        Some(b) => b.to_string(),
        None => "skipped".into(),
    };
    match fmt {
        Format::Json => emit_json(
            out,
            &json!({
                "order": t.order(),
                "latin": latin,
                "idempotent": idempotent,
                "medial": medial,
                "pentagonal": pentagonal,
                "pentagonal_quasigroup": all,
            }),
        )?,
        Format::Csv => {
            writeln!(
                out,
                "order,latin,idempotent,medial,pentagonal,pentagonal_quasigroup"
            )?;
            writeln!(
                out,
                "{},{latin},{},{},{},{all}",
                t.order(),
                show(idempotent),
                show(medial),
                show(pentagonal)
            )?;
        }
        Format::Text => {
            writeln!(out, "order: {}", t.order())?;
            writeln!(out, "latin: {latin}")?;
            writeln!(out, "idempotent: {}", show(idempotent))?;
            writeln!(out, "medial: {}", show(medial))?;
            writeln!(out, "pentagonal: {}", show(pentagonal))?;
            writeln!(out, "pentagonal quasigroup: {all}")?;
        }
    }
    Ok(if all {
        EXIT_OK
    } else if skipped_medial && idempotent == Some(true) && pentagonal == Some(true) {
        EXIT_BUDGET
    } else {
        EXIT_VALIDATION
    })
}

fn cmd_decompose(input: &Path, e: usize, fmt: Format, base: u32, out: &mut dyn Write) -> CliResult {
    let t = CayleyTable::read_file(input)?;
    let d = toyoda_decompose(&t, e)?;
    let phi: Vec<usize> = d.phi.iter().map(|&v| v + base as usize).collect();
    match fmt {
        Format::Json => emit_json(
            out,
            &json!({
                "order": t.order(),
                "base": base,
                "neutral": e + base as usize,
                "sum": table_json(&d.sum, base),
                "phi": phi,
                "pentagonal": d.pentagonal,
            }),
        )?,
        Format::Csv => {
            writeln!(out, "x,phi")?;
            for (x, p) in phi.iter().enumerate() {
                writeln!(out, "{},{p}", x + base as usize)?;
            }
        }
        Format::Text => {
            writeln!(out, "neutral: {}", e + base as usize)?;
            let s: Vec<String> = phi.iter().map(usize::to_string).collect();
            writeln!(out, "phi: {}", s.join(" "))?;
            writeln!(
                out,
                "phi satisfies x^4 - x^3 + x^2 - x + 1 = 0: {}",
                d.pentagonal
            )?;
            writeln!(out, "sum:")?;
            write!(out, "{}", d.sum.to_text(base))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_translate(
    input: Option<&PathBuf>,
    n: Option<u64>,
    a: Option<u64>,
    fmt: Format,
    out: &mut dyn Write,
) -> CliResult {
    if let Some(path) = input {
        let t = CayleyTable::read_file(path)?;
        if !validate_latin(&t) {
            return Err(Error::NotLatin.into());
        }
        let ks = all_translatability_indices(&t);
        match fmt {
            Format::Json => emit_json(out, &json!({ "order": t.order(), "indices": ks }))?,
            Format::Csv => {
                writeln!(out, "k")?;
                for k in &ks {
                    writeln!(out, "{k}")?;
                }
            }
            Format::Text => {
                let s: Vec<String> = ks.iter().map(usize::to_string).collect();
                writeln!(out, "{}", s.join(" "))?;
            }
        }
        return Ok(EXIT_OK);
    }
    let (n, a) = (n.expect("clap requires n"), a.expect("clap requires a"));
    let q = make_linear(n, a)?;
    let w = translatability_witness(&q, DEFAULT_VERIFY_LIMIT)?;
    match fmt {
        Format::Json => emit_json(
            out,
            &json!({ "n": n, "a": a, "k": w.k, "verified": w.verified }),
        )?,
        Format::Csv => {
            writeln!(out, "n,a,k,verified")?;
            writeln!(out, "{n},{a},{},{}", w.k, w.verified)?;
        }
        Format::Text => {
            let how = if w.verified {
                "verified"
            } else {
                "closed form"
            };
            writeln!(out, "{q} is {}-translatable ({how})", w.k)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_ktable(max: u64, fmt: Format, out: &mut dyn Write) -> CliResult {
    let rows = k_table(max)?;
    match fmt {
        Format::Json => emit_json(out, &serde_json::to_value(&rows).expect("serializable"))?,
        Format::Csv => {
            writeln!(out, "k,m,n,a,b")?;
            for r in &rows {
                for e in &r.entries {
                    writeln!(out, "{},{},{},{},{}", r.k, r.m, e.n, e.a, e.b)?;
                }
            }
        }
        Format::Text => {
            for r in &rows {
                let forms: Vec<String> = r.entries.iter().map(|e| e.form()).collect();
                write!(out, "k={} m={}: {}", r.k, r.m, forms.join(", "))?;
                if !r.excluded.is_empty() {
                    write!(out, " (excluded n <= k: {:?})", r.excluded)?;
                }
                writeln!(out)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_parastrophe(
    n: u64,
    a: u64,
    which: u8,
    with_table: bool,
    fmt: Format,
    base: u32,
    out: &mut dyn Write,
) -> CliResult {
    let i = ParastropheIndex::new(which)?;
    let f = linear_parastrophe(n, a, i)?;
    let table = if with_table {
        let t = parastrophe(&construct_table(&make_linear(n, a)?)?, i)?;
        if t != construct_table(&f.form())? {
            return Err(Error::Inconsistent(format!(
                "{i} of [{a}x]_{n}: table and closed form differ"
            ))
            .into());
        }
        Some(t)
    } else {
        None
    };
    match fmt {
        Format::Json => {
            let mut v = json!({
                "n": n, "a": a, "which": which,
                "x_coef": f.x_coef, "y_coef": f.y_coef, "k": f.k,
            });
            if let Some(t) = &table {
                v["rows"] = table_json(t, base);
            }
            emit_json(out, &v)?;
        }
        Format::Csv => {
            writeln!(out, "n,a,which,x_coef,y_coef,k")?;
            writeln!(out, "{n},{a},{which},{},{},{}", f.x_coef, f.y_coef, f.k)?;
        }
        Format::Text => {
            writeln!(out, "{i}: {} is {}-translatable", f.form(), f.k)?;
            if let Some(t) = &table {
                write!(out, "{}", t.to_text(base))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn write_classes(
    subject: &str,
    classes: &BTreeSet<IdentityName>,
    fmt: Format,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    let names: Vec<&str> = classes.iter().map(|c| c.name()).collect();
    match fmt {
        Format::Json => emit_json(out, &json!({ "subject": subject, "classes": names })),
        Format::Csv => {
            writeln!(out, "subject,class")?;
            for c in &names {
                writeln!(out, "{subject},{c}")?;
            }
            Ok(())
        }
        Format::Text => writeln!(out, "{subject}: {}", names.join(", ")),
    }
}

fn cmd_classify(
    input: Option<&PathBuf>,
    n: Option<u64>,
    a: Option<u64>,
    method: Method,
    fmt: Format,
    out: &mut dyn Write,
) -> CliResult {
    if let Some(path) = input {
        let t = CayleyTable::read_file(path)?;
        if !validate_latin(&t) {
            return Err(Error::NotLatin.into());
        }
        if t.order() > DEFAULT_MEDIAL_LIMIT {
            return Err(Error::BudgetExceeded {
                what: "order for mediality check",
                size: t.order() as u128,
                limit: DEFAULT_MEDIAL_LIMIT as u128,
            }
            .into());
        }
        write_classes(&path.display().to_string(), &classify_table(&t), fmt, out)?;
        return Ok(EXIT_OK);
    }
    let (Some(n), Some(a)) = (n, a) else {
        return Err(Failure {
            code: EXIT_INVALID_ARGS,
            message: "classify needs --input, --n with --a, or --matrix".into(),
        });
    };
    let report = classify_report(n, a, method)?;
    write_classes(&report.subject, &report.classes, fmt, out)?;
    Ok(EXIT_OK)
}

fn cmd_matrix(max_n: u64, method: Method, fmt: Format, out: &mut dyn Write) -> CliResult {
    let mut corpus = Vec::new();
    for n in 2..max_n {
        for r in solve_pentagonal_residues(Modulus::new(n)?)? {
            corpus.push(make_linear(n, r.value())?);
        }
    }
    let m = parastrophe_class_matrix(&corpus, method)?;
    match fmt {
        Format::Json => {
            let rows: Vec<Value> = MATRIX_CLASSES
                .iter()
                .map(|&class| {
                    let mut cells = serde_json::Map::new();
                    for col in Column::ALL {
                        cells.insert(col.to_string(), json!(m.cell(class, col).to_string()));
                    }
                    json!({ "class": class.name(), "cells": cells })
                })
                .collect();
            emit_json(out, &json!({ "corpus_size": corpus.len(), "rows": rows }))?;
        }
        Format::Csv => {
            writeln!(out, "class,column,members")?;
            for class in MATRIX_CLASSES {
                for col in Column::ALL {
                    writeln!(out, "{},{},\"{}\"", class.name(), col, m.cell(class, col))?;
                }
            }
        }
        Format::Text => {
            for class in MATRIX_CLASSES {
                writeln!(out, "{}:", class.name())?;
                for col in Column::ALL {
                    writeln!(out, "  {col}: {}", m.cell(class, col))?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_survey(max: u64, heavy: bool, fmt: Format, out: &mut dyn Write) -> CliResult {
    let last_decile = AtomicUsize::new(0);
    let progress = |done: usize, total: usize| {
        let decile = done * 10 / total;
        if last_decile.fetch_max(decile, Ordering::Relaxed) < decile {
            eprintln!("search progress: {}%", decile * 10);
        }
    };
    let opts = SurveyOptions {
        heavy,
        budget: SearchBudget::default(),
        progress: if heavy { Some(&progress) } else { None },
        ..SurveyOptions::default()
    };
    let records = survey(max, &opts)?;
    match fmt {
        Format::Json => emit_json(out, &serde_json::to_value(&records).expect("serializable"))?,
        Format::Csv => {
            writeln!(out, "order,group,count,verdict")?;
            for r in &records {
                let count = r.count.map(|c| c.to_string()).unwrap_or_default();
                writeln!(out, "{},{},{count},{:?}", r.order, r.group, r.verdict)?;
            }
        }
        Format::Text => {
            for r in &records {
                let count = r.count.map(|c| c.to_string()).unwrap_or_else(|| "-".into());
                writeln!(
                    out,
                    "{:>3}  {:<14} {:>7}  {:?}: {}",
                    r.order,
                    r.group,
                    count,
                    r.verdict,
                    r.verdict.explanation()
                )?;
            }
            let positive: Vec<&str> = records
                .iter()
                .filter(|r| r.is_positive())
                .map(|r| r.group.as_str())
                .collect();
            writeln!(out, "inducing groups: {}", positive.join(", "))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_atable(a_max: u64, fmt: Format, out: &mut dyn Write) -> CliResult {
    let rows = a_table(a_max)?;
    match fmt {
        Format::Json => emit_json(out, &serde_json::to_value(&rows).expect("serializable"))?,
        Format::Csv => {
            writeln!(out, "a,n,k")?;
            for r in &rows {
                for (n, k) in &r.pairs {
                    writeln!(out, "{},{n},{k}", r.a)?;
                }
            }
        }
        Format::Text => {
            for r in &rows {
                let pairs: Vec<String> = r
                    .pairs
                    .iter()
                    .map(|(n, k)| format!("(n={n},k={k})"))
                    .collect();
                writeln!(out, "a={}: {}", r.a, pairs.join(" "))?;
            }
        }
    }
    Ok(EXIT_OK)
}
