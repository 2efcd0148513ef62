//! Command-line driver: file I/O, flag parsing and report rendering on top
//! of the core library. All randomized paths demand an explicit seed, and
//! reports are byte-identical across runs with identical inputs.

pub mod formats;
pub mod report;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use hyperdel_core::balls::{BallCache, BallKind};
use hyperdel_core::codes::{
    is_deletion_correcting, is_insdel_correcting, is_insertion_correcting,
    is_scalar_deletion_correcting, is_scalar_insertion_correcting, Code, CodeVerdict,
    ScalarVerdict,
};
use hyperdel_core::lab::{
    counterexample_reproduce, verify_chain_del, verify_chain_ins, verify_general_equivalence,
    verify_insdel_axis, verify_insdel_equivalence, verify_projection_claim,
    verify_scalar_equivalence, verify_swap_lemma, verify_uniform_equivalence, EditCase,
    VerifyConfig, VerifyOutcome, DEFAULT_BUDGET,
};
use hyperdel_core::search::{redundancy_table, DEFAULT_VERTEX_BUDGET};
use hyperdel_core::tensor::{Alphabet, EditVector, NdArray, Shape};

use formats::ArrayDoc;
use report::{Report, TableRowDoc, Verdict};

pub const CACHE_DIR_ENV: &str = "HYPERDEL_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "hyperdel",
    version,
    about = "Hyperplane insertion/deletion channels on d-dimensional arrays: balls, codes, exhaustive equivalence checks and maximum-code search"
)]
struct Cli {
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for parallel scans (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Enumerate the edit ball around the array in FILE
    Ball {
        file: PathBuf,
        /// Per-axis edit counts, comma-separated
        #[arg(long)]
        t: String,
        /// del | ins | insdel
        #[arg(long, default_value = "del")]
        kind: String,
        /// List every member of the ball
        #[arg(long)]
        members: bool,
    },
    /// Decide whether a set of arrays is a correcting code
    #[command(name = "check-code")]
    CheckCode {
        /// Array files, one codeword each
        files: Vec<PathBuf>,
        /// JSON code file {q, d, n, words}
        #[arg(long)]
        code: Option<PathBuf>,
        /// Per-axis edit counts, or a total count with --scalar
        #[arg(long)]
        t: String,
        /// del | ins | insdel
        #[arg(long, default_value = "del")]
        kind: String,
        /// Treat --t as a total over all axes and check every composition
        #[arg(long)]
        scalar: bool,
    },
    /// Verify an equivalence statement over all array pairs
    Verify {
        /// One of: t1-equivalence, swap-lemma, general, scalar, projection,
        /// insdel-axis, insdel, chain-del, chain-ins, counterexample
        statement: String,
        #[arg(long)]
        q: Option<u64>,
        /// Number of axes (with a cubic --n)
        #[arg(long)]
        d: Option<usize>,
        /// Extent (cubic) or comma-separated extents
        #[arg(long)]
        n: Option<String>,
        /// Edit counts: scalar or comma-separated per-axis, statement-dependent
        #[arg(long)]
        t: Option<String>,
        /// First axis of the swap lemma
        #[arg(long)]
        i: Option<usize>,
        /// Second axis of the swap lemma
        #[arg(long)]
        j: Option<usize>,
        /// Axis of the single-axis insdel claim
        #[arg(long)]
        axis: Option<usize>,
        /// Edit count on that axis
        #[arg(long)]
        r: Option<usize>,
        /// Edit counts on the first array (projection claim)
        #[arg(long)]
        r1: Option<String>,
        /// Edit counts on the second array (projection claim)
        #[arg(long)]
        r2: Option<String>,
        /// Projection axis (must carry no edits)
        #[arg(long)]
        kappa: Option<usize>,
        /// del | ins | both (projection claim)
        #[arg(long, default_value = "both")]
        case: String,
        /// Maximum number of pair checks before sampling
        #[arg(long)]
        budget: Option<u128>,
        /// Seed for sampled runs; required whenever sampling happens
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reproduce the fixed 3x3 column/row-deletion counterexample
    Counterexample,
    /// Build confusability graphs and report maximum-code sizes
    Search {
        #[arg(long)]
        q: u64,
        /// Comma-separated extents
        #[arg(long)]
        shape: String,
        /// Per-axis edit counts; repeat the flag for several rows
        #[arg(long = "t", required = true)]
        t: Vec<String>,
        /// Largest admissible vertex count
        #[arg(long, default_value_t = DEFAULT_VERTEX_BUDGET)]
        vertex_budget: u128,
        /// Time limit per maximum-code search, in milliseconds
        #[arg(long)]
        timeout_ms: Option<u64>,
    },
}

fn parse_extents(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .with_context(|| format!("bad extent {p:?}"))
        })
        .collect()
}

/// Resolve `--d`/`--n` into a shape: a comma list is a full shape, a single
/// value is cubic and needs `--d`.
fn resolve_shape(d: Option<usize>, n: Option<&str>) -> Result<Shape> {
    let n = n.ok_or_else(|| anyhow!("missing --n"))?;
    let extents = parse_extents(n)?;
    let dims = if extents.len() > 1 {
        if let Some(d) = d {
            if d != extents.len() {
                bail!("--d {} contradicts --n with {} extents", d, extents.len());
            }
        }
        extents
    } else {
        let d = d.ok_or_else(|| anyhow!("a cubic --n needs --d"))?;
        vec![extents[0]; d]
    };
    if dims.is_empty() {
        bail!("empty shape");
    }
    Ok(Shape::new(dims))
}

fn resolve_alphabet(q: Option<u64>) -> Result<Alphabet> {
    Ok(Alphabet::new(q.ok_or_else(|| anyhow!("missing --q"))?)?)
}

fn scalar_t(t: Option<&str>, default: Option<usize>) -> Result<usize> {
    match t {
        None => default.ok_or_else(|| anyhow!("missing --t")),
        Some(s) => s.trim().parse().with_context(|| format!("bad --t {s:?}")),
    }
}

fn vector_t(t: Option<&str>, d: usize) -> Result<EditVector> {
    let s = t.ok_or_else(|| anyhow!("missing --t"))?;
    let v = EditVector::from_str(s)?;
    if v.dim() != d {
        bail!("--t has {} entries for a {}-dimensional shape", v.dim(), d);
    }
    Ok(v)
}

fn make_cache() -> BallCache {
    match std::env::var_os(CACHE_DIR_ENV) {
        Some(dir) if !dir.is_empty() => BallCache::with_disk(PathBuf::from(dir)),
        _ => BallCache::new(),
    }
}

fn init_threads(threads: Option<usize>) {
    if let Some(k) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
}

fn outcome_report(outcome: &VerifyOutcome) -> Report {
    let verdict = if outcome.pass { Verdict::Pass } else { Verdict::Fail };
    let mut report = Report::new(&format!("verify {}", outcome.statement), verdict);
    for (k, v) in &outcome.params {
        report.param(k, v);
    }
    report.seed = outcome.seed;
    report.stat("total_pairs", outcome.total_pairs);
    report.stat("checked_pairs", outcome.checked_pairs);
    report.stat("sampled", outcome.sampled);
    report.stat("lhs_holds", outcome.lhs_holds);
    report.stat("rhs_holds", outcome.rhs_holds);
    report.stat("mismatches", outcome.mismatches);
    report.notes = outcome.notes.clone();
    if let Some(ci) = &outcome.counterinstance {
        report
            .arrays
            .insert("counter_x".into(), ArrayDoc::of(&ci.x));
        report
            .arrays
            .insert("counter_y".into(), ArrayDoc::of(&ci.y));
        let detail = ci.detail.clone().unwrap_or_default();
        report.notes.push(format!(
            "counterinstance: lhs={} rhs={}{}{}",
            ci.lhs,
            ci.rhs,
            if detail.is_empty() { "" } else { " " },
            detail
        ));
    }
    report
}

fn cmd_ball(file: &PathBuf, t: &str, kind: &str, members: bool, cache: &BallCache) -> Result<Report> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let center = formats::parse_array(&text)?;
    let t = EditVector::from_str(t)?;
    if t.dim() != center.dim() {
        bail!("--t has {} entries for a {}-dimensional array", t.dim(), center.dim());
    }
    let kind = BallKind::from_str(kind)?;
    let ball = cache.ball(kind, &center, &t)?;
    let mut report = Report::new("ball", Verdict::Ok);
    report.param("file", file.display());
    report.param("t", &t);
    report.param("kind", kind);
    report.stat("size", ball.len());
    report
        .arrays
        .insert("center".into(), ArrayDoc::of(&center));
    if members {
        report.members = ball.members().iter().map(ArrayDoc::of).collect();
    }
    Ok(report)
}

fn cmd_check_code(
    files: &[PathBuf],
    code_file: Option<&PathBuf>,
    t: &str,
    kind: &str,
    scalar: bool,
    cache: &BallCache,
) -> Result<Report> {
    let mut words: Vec<NdArray> = Vec::new();
    for file in files {
        let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
        words.push(formats::parse_array(&text)?);
    }
    if let Some(file) = code_file {
        let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
        words.extend(formats::parse_code(&text)?);
    }
    let code = Code::new(words)?;
    let mut report = Report::new("check-code", Verdict::Correcting);
    report.param("kind", kind);
    report.param("t", t);
    report.param("scalar", scalar);
    report.param("words", code.len());
    report.param("shape", code.shape());
    report.param("q", code.alphabet());
    report.stat("redundancy", code.redundancy()?);
    if scalar {
        let total: usize = t.trim().parse().with_context(|| format!("bad --t {t:?}"))?;
        let verdict = match BallKind::from_str(kind)? {
            BallKind::Deletion => is_scalar_deletion_correcting(&code, total, cache)?,
            BallKind::Insertion => is_scalar_insertion_correcting(&code, total, cache)?,
            BallKind::Insdel => bail!("scalar insdel checking is not defined; pass a per-axis --t"),
        };
        if let ScalarVerdict::NotCorrecting { composition, triple } = verdict {
            report.verdict = Verdict::NotCorrecting;
            report.stat("failing_composition", &composition);
            report.arrays.insert("x".into(), ArrayDoc::of(&triple.x));
            report.arrays.insert("y".into(), ArrayDoc::of(&triple.y));
            report
                .arrays
                .insert("shared".into(), ArrayDoc::of(&triple.shared));
        }
    } else {
        let t = EditVector::from_str(t)?;
        if t.dim() != code.shape().dim() {
            bail!("--t has {} entries for a {}-dimensional code", t.dim(), code.shape().dim());
        }
        let verdict = match BallKind::from_str(kind)? {
            BallKind::Deletion => is_deletion_correcting(&code, &t, cache)?,
            BallKind::Insertion => is_insertion_correcting(&code, &t, cache)?,
            BallKind::Insdel => is_insdel_correcting(&code, &t, cache)?,
        };
        if let CodeVerdict::NotCorrecting(triple) = verdict {
            report.verdict = Verdict::NotCorrecting;
            report.arrays.insert("x".into(), ArrayDoc::of(&triple.x));
            report.arrays.insert("y".into(), ArrayDoc::of(&triple.y));
            report
                .arrays
                .insert("shared".into(), ArrayDoc::of(&triple.shared));
        }
    }
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    statement: &str,
    q: Option<u64>,
    d: Option<usize>,
    n: Option<&str>,
    t: Option<&str>,
    i: Option<usize>,
    j: Option<usize>,
    axis: Option<usize>,
    r: Option<usize>,
    r1: Option<&str>,
    r2: Option<&str>,
    kappa: Option<usize>,
    case: &str,
    budget: Option<u128>,
    seed: Option<u64>,
    cache: &BallCache,
) -> Result<Report> {
    if statement == "counterexample" {
        return cmd_counterexample(cache);
    }
    let cfg = VerifyConfig {
        budget: budget.unwrap_or(DEFAULT_BUDGET),
        seed,
    };
    let alphabet = resolve_alphabet(q)?;
    let shape = resolve_shape(d, n)?;
    let dd = shape.dim();
    let outcome = match statement {
        "t1-equivalence" => {
            verify_uniform_equivalence(alphabet, &shape, scalar_t(t, Some(1))?, &cfg, cache)?
        }
        "swap-lemma" => {
            let combo = match (i, j) {
                (Some(i), Some(j)) => Some((i, j)),
                (None, None) => None,
                _ => bail!("--i and --j go together"),
            };
            verify_swap_lemma(alphabet, &shape, combo, &cfg, cache)?
        }
        "general" => verify_general_equivalence(alphabet, &shape, &vector_t(t, dd)?, &cfg, cache)?,
        "scalar" => verify_scalar_equivalence(alphabet, &shape, scalar_t(t, None)?, &cfg, cache)?,
        "projection" => {
            let r1 = r1.ok_or_else(|| anyhow!("missing --r1"))?;
            let r2 = r2.unwrap_or(r1);
            let kappa = kappa.ok_or_else(|| anyhow!("missing --kappa"))?;
            let (v1, v2) = (EditVector::from_str(r1)?, EditVector::from_str(r2)?);
            verify_projection_claim(
                alphabet,
                &shape,
                &v1,
                &v2,
                kappa,
                EditCase::from_str(case)?,
                &cfg,
                cache,
            )?
        }
        "insdel-axis" => {
            let axis = axis.ok_or_else(|| anyhow!("missing --axis"))?;
            let r = r.ok_or_else(|| anyhow!("missing --r"))?;
            verify_insdel_axis(alphabet, &shape, axis, r, &cfg, cache)?
        }
        "insdel" => verify_insdel_equivalence(alphabet, &shape, &vector_t(t, dd)?, &cfg, cache)?,
        "chain-del" => verify_chain_del(alphabet, &shape, scalar_t(t, None)?, &cfg, cache)?,
        "chain-ins" => verify_chain_ins(alphabet, &shape, scalar_t(t, None)?, &cfg, cache)?,
        other => bail!("unknown statement {other:?}"),
    };
    Ok(outcome_report(&outcome))
}

fn cmd_counterexample(cache: &BallCache) -> Result<Report> {
    let reproduced = counterexample_reproduce(cache)?;
    let mut report = Report::new("counterexample", Verdict::Pass);
    report.arrays.insert("x".into(), ArrayDoc::of(&reproduced.x));
    report.arrays.insert("y".into(), ArrayDoc::of(&reproduced.y));
    report
        .arrays
        .insert("shared".into(), ArrayDoc::of(&reproduced.shared));
    report.notes = reproduced.notes;
    Ok(report)
}

fn cmd_search(
    q: u64,
    shape: &str,
    ts: &[String],
    vertex_budget: u128,
    timeout_ms: Option<u64>,
    cache: &BallCache,
) -> Result<Report> {
    let alphabet = Alphabet::new(q)?;
    let shape = Shape::new(parse_extents(shape)?);
    let rows: Vec<(Shape, EditVector)> = ts
        .iter()
        .map(|s| Ok((shape.clone(), EditVector::from_str(s)?)))
        .collect::<Result<_>>()?;
    for (shape, t) in &rows {
        if t.dim() != shape.dim() {
            bail!("--t {} has {} entries for a {}-dimensional shape", t, t.dim(), shape.dim());
        }
    }
    let table = redundancy_table(
        alphabet,
        &rows,
        vertex_budget,
        timeout_ms.map(Duration::from_millis),
        cache,
    )?;
    let mut report = Report::new("search", Verdict::Pass);
    report.param("q", q);
    report.param("shape", &shape);
    report.rows = table
        .iter()
        .map(|row| TableRowDoc {
            shape: row.shape.dims().to_vec(),
            t: row.t.counts().to_vec(),
            vertices: row.vertices,
            edges: row.edges,
            del_max: row.del_size,
            del_exact: row.del_exact,
            insdel_max: row.insdel_size,
            insdel_exact: row.insdel_exact,
            redundancy: row.redundancy.to_string(),
            sizes_match: row.sizes_match,
        })
        .collect();
    if report.rows.iter().any(|r| !r.sizes_match) {
        report.verdict = Verdict::Fail;
    }
    Ok(report)
}

fn dispatch(cli: &Cli, cache: &BallCache) -> Result<Report> {
    match &cli.command {
        Cmd::Ball {
            file,
            t,
            kind,
            members,
        } => cmd_ball(file, t, kind, *members, cache),
        Cmd::CheckCode {
            files,
            code,
            t,
            kind,
            scalar,
        } => cmd_check_code(files, code.as_ref(), t, kind, *scalar, cache),
        Cmd::Verify {
            statement,
            q,
            d,
            n,
            t,
            i,
            j,
            axis,
            r,
            r1,
            r2,
            kappa,
            case,
            budget,
            seed,
        } => cmd_verify(
            statement,
            *q,
            *d,
            n.as_deref(),
            t.as_deref(),
            *i,
            *j,
            *axis,
            *r,
            r1.as_deref(),
            r2.as_deref(),
            *kappa,
            case,
            *budget,
            *seed,
            cache,
        ),
        Cmd::Counterexample => cmd_counterexample(cache),
        Cmd::Search {
            q,
            shape,
            t,
            vertex_budget,
            timeout_ms,
        } => cmd_search(*q, shape, t, *vertex_budget, *timeout_ms, cache),
    }
}

/// Run the CLI against explicit arguments, writing the report to `out`.
/// Returns the process exit code: 0 for PASS/CORRECTING/OK, 1 for
/// FAIL/NOT-CORRECTING or a verification failure, 2 for usage and I/O
/// errors.
pub fn run<I, S>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            // clap handles --help/--version through this path
            let _ = err.print();
            return if err.use_stderr() { 2 } else { 0 };
        }
    };
    init_threads(cli.threads);
    let cache = make_cache();
    let started = Instant::now();
    let result = dispatch(&cli, &cache);
    let elapsed = started.elapsed();
    match result {
        Ok(report) => {
            let rendered = match cli.format {
                Format::Text => report.render_text(),
                Format::Json => report.render_json(),
            };
            if out.write_all(rendered.as_bytes()).is_err() {
                return 2;
            }
            eprintln!("elapsed_ms {}", elapsed.as_millis());
            if report.verdict.success() {
                0
            } else {
                1
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            let verification = err
                .downcast_ref::<hyperdel_core::Error>()
                .map(|e| matches!(e, hyperdel_core::Error::VerificationFailure(_)))
                .unwrap_or(false);
            if verification {
                1
            } else {
                2
            }
        }
    }
}

/// Convenience used by tests: run and capture stdout as bytes.
pub fn run_captured<I, S>(args: I) -> (i32, Vec<u8>)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let mut buf = Vec::new();
    let code = run(args, &mut buf);
    (code, buf)
}

#[allow(dead_code)]
fn params_doc(params: &[(String, String)]) -> BTreeMap<String, String> {
    params.iter().cloned().collect()
}
