//! Command-line front end. Every subcommand produces a [`Report`]; the
//! process exits with 0 when every check passes, 1 when at least one fails
//! and 2 on usage or input errors.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;

use crate::error::{Error, Result};
use crate::ext::{
    aligned_sup_gap, decide_sigma_additive, eval_ext, not_sub_gea_demo, oplus, sigma_violation_witness,
    DemoVariant, ExtMeasure, OplusOutcome, SigmaAdditivity,
};
use crate::forms::{frame_weight, polarize_recover, quad, FrameFunctionView, MatrixForm};
use crate::gea::{check_axioms, derived_order, is_sub_gea, FiniteGeaModel, ModelFile};
use crate::hilbert::{HermitianOp, Subspace};
use crate::measures::{check_additivity, is_state, GleasonMeasure};
use crate::report::{ext_value, CheckRecord, Report};
use crate::seq::{
    classify_frame_type, classify_summability, rearrange_to_target, IndexSet, Mode, SeqDescriptor, Target,
};
use crate::sobolev::{boundary_blowup, chain_report, Grid};
use crate::suites;
use crate::tol::Tolerances;

pub const THREADS_ENV: &str = "GLEASON_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "gleason-lab", version, about = "Checks for measures on Hilbert space lattices and generalized effect algebras")]
pub struct Cli {
    /// Comparison tolerance; construction and additivity tolerances scale
    /// with it.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Omit the timestamp, so equal runs give identical bytes.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Default,
    ZeroControl,
    TraceClassControl,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the generalized effect algebra axioms of a finite model.
    CheckAxioms {
        /// Model file: {"elements": [...], "zero": "0", "sums": [[x, y, z], ...]}.
        model: PathBuf,
        /// Comma-separated elements to test as a sub-algebra.
        #[arg(long, value_delimiter = ',')]
        subset: Vec<String>,
    },
    /// Randomized additivity and regularity checks of m(M) = tr(T P_M).
    Gleason {
        #[arg(long, default_value_t = 500)]
        instances: u64,
        /// Generator: a matrix (rows of numbers or [re, im] pairs) or
        /// {"T": matrix}, inline or as a file path.
        #[arg(long)]
        generator: Option<String>,
    },
    /// Frame weight invariance and polarization round trips.
    Frame {
        #[arg(long, default_value_t = 200)]
        instances: u64,
        #[arg(long, default_value_t = 100)]
        polarization: u64,
        /// Generator for the frame weight checks, same forms as for `gleason`.
        #[arg(long)]
        generator: Option<String>,
    },
    /// Summability and frame-type class of a diagonal sequence.
    Classify {
        /// Sequence descriptor, inline JSON or a file path.
        #[arg(long)]
        seq: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// Also run the partial-sum heuristic and require agreement.
        #[arg(long)]
        cross_check: bool,
    },
    /// Greedy rearrangement of a conditionally convergent series.
    Rearrange {
        /// Sequence descriptor, inline JSON or a file path.
        #[arg(long)]
        seq: String,
        /// A number, `pi`, `inf` or `-inf`.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        /// Write the trace (step, index, partial sum) as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Evaluate a tagged measure and decide σ-additivity.
    Ext {
        /// Tagged measure, inline JSON or a file path.
        #[arg(long)]
        measure: String,
        /// Second measure for the partial sum.
        #[arg(long)]
        other: Option<String>,
        /// Index set, e.g. {"kind":"finite","indices":[1,2]}.
        #[arg(long)]
        index_set: Option<String>,
    },
    /// σ-additive measures fail the two-of-three rule.
    DemoNonsub {
        #[arg(long, value_enum, default_value_t = VariantArg::Default)]
        variant: VariantArg,
    },
    /// Discrete Sobolev chain and boundary-form blow-up.
    Sobolev {
        /// Interval counts 1/h.
        #[arg(long, value_delimiter = ',', default_values_t = [10usize, 20, 40, 80, 160, 320])]
        grids: Vec<usize>,
        #[arg(long, default_value_t = 50)]
        nmax: u32,
        /// CSV table (h, norm, slope); defaults to `<out stem>_table.csv`
        /// next to --out.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Convergence m_n = tr((T + S/n) P_M) -> m on random pairs.
    Nikodym {
        #[arg(long, default_value_t = 50)]
        pairs: u64,
        #[arg(long, default_value_t = 100)]
        nmax: u32,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckAxioms { .. } => "check-axioms",
            Command::Gleason { .. } => "gleason",
            Command::Frame { .. } => "frame",
            Command::Classify { .. } => "classify",
            Command::Rearrange { .. } => "rearrange",
            Command::Ext { .. } => "ext",
            Command::DemoNonsub { .. } => "demo-nonsub",
            Command::Sobolev { .. } => "sobolev",
            Command::Nikodym { .. } => "nikodym",
        }
    }
}

/// Parses inline JSON, or reads the file named by `arg`.
fn load_json<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with(['{', '[', '"']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Input(format!("{what}: cannot read `{arg}`: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{what}: {e}")))
}

/// A generator given as a matrix or as a measure `{"T": matrix}`.
fn load_generator(arg: &str) -> Result<HermitianOp> {
    let v: serde_json::Value = load_json(arg, "generator")?;
    let m = match v {
        serde_json::Value::Object(mut o) => o
            .remove("T")
            .ok_or_else(|| Error::Input("generator: missing field `T`".into()))?,
        other => other,
    };
    serde_json::from_value(m).map_err(|e| Error::Input(format!("generator: field `T`: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Input(format!("cannot write `{}`: {e}", path.display())))
}

pub fn run(cli: &Cli) -> Result<Report> {
    let tol = cli.tol.map(Tolerances::with_comparison).unwrap_or_default();
    if !(tol.comparison > 0.0 && tol.comparison.is_finite()) {
        return Err(Error::Input("--tol must be positive".into()));
    }
    let mut report = Report::new(cli.command.name());
    match &cli.command {
        Command::CheckAxioms { model, subset } => {
            let text = std::fs::read_to_string(model)
                .map_err(|e| Error::Input(format!("model: cannot read `{}`: {e}", model.display())))?;
            let file: ModelFile = serde_json::from_str(&text).map_err(|e| Error::Input(format!("model: {e}")))?;
            let m = FiniteGeaModel::from_file(&file)?;
            let axioms = check_axioms(&m);
            for v in &axioms.verdicts {
                report.push(CheckRecord::equal(
                    format!("axiom {}", v.axiom.label()),
                    "generalized effect algebra axioms",
                    v.pass,
                    true,
                ));
            }
            let order = derived_order(&m).ok().map(|p| {
                p.pairs()
                    .iter()
                    .map(|&(x, y)| [m.name(x).to_string(), m.name(y).to_string()])
                    .collect::<Vec<_>>()
            });
            let mut sub = None;
            if !subset.is_empty() {
                let names: Vec<&str> = subset.iter().map(String::as_str).collect();
                let ids = m.ids(&names)?;
                let v = is_sub_gea(&ids, &m)?;
                report.push(CheckRecord::equal(
                    format!("{{{}}} is a sub-GEA", subset.join(", ")),
                    "0 in S and two of x, y, x+y in S imply all three",
                    v.holds,
                    true,
                ));
                sub = Some(serde_json::json!({
                    "holds": v.holds,
                    "witness": v.witness.map(|w| match w {
                        crate::gea::SubGeaWitness::MissingZero => serde_json::json!("missing zero"),
                        crate::gea::SubGeaWitness::Triple(x, y, z) =>
                            serde_json::json!([m.name(x), m.name(y), m.name(z)]),
                    }),
                }));
            }
            let witnesses: Vec<serde_json::Value> = axioms
                .witnesses
                .iter()
                .map(|w| {
                    serde_json::json!({
                        "axiom": w.axiom.label(),
                        "elements": w.elements,
                    })
                })
                .collect();
            report.set_details(serde_json::json!({
                "elements": m.elements(),
                "witnesses": witnesses,
                "order": order,
                "subset": sub,
            }));
        }
        Command::Gleason { instances, generator } => {
            report = report.with_seed(cli.seed);
            report.push(suites::gleason_additivity(cli.seed, *instances, &tol)?.record());
            report.push(suites::regularity(cli.seed, (*instances).min(100), &tol)?.record());
            if let Some(g) = generator {
                let t = load_generator(g)?;
                let m = GleasonMeasure::new(t.clone());
                let lines: Vec<Subspace> = (0..t.dim())
                    .map(|i| Subspace::coordinate(t.dim(), &[i]))
                    .collect::<Result<_>>()?;
                let rep = check_additivity(&m, &lines, &tol)?;
                report.push(
                    CheckRecord::close(
                        "m(H) equals the sum over coordinate lines",
                        "m(M v N) = m(M) + m(N) for M ⊥ N",
                        rep.lhs,
                        rep.rhs,
                        tol.additivity,
                    ),
                );
                let values: Vec<f64> = lines.iter().map(|l| m.eval(l)).collect::<Result<_>>()?;
                report.set_details(serde_json::json!({
                    "line_values": values,
                    "total": rep.lhs,
                    "is_state": is_state(&m, &tol),
                }));
            }
        }
        Command::Frame {
            instances,
            polarization,
            generator,
        } => {
            report = report.with_seed(cli.seed);
            report.push(suites::frame_weight_invariance(cli.seed, *instances, &tol)?.record());
            report.push(suites::polarization_roundtrip(cli.seed, *polarization, &tol)?.record());
            if let Some(g) = generator {
                let t = load_generator(g)?;
                let f = FrameFunctionView::from_generator(t.clone());
                let full = Subspace::full(t.dim());
                let w = frame_weight(&f, &full, None, &tol)?;
                report.push(CheckRecord::close(
                    "frame weight of H equals the trace",
                    "W_H = tr(T)",
                    w,
                    t.trace(),
                    tol.additivity,
                ));
                let form = MatrixForm::new(t.clone());
                let rec = polarize_recover(|x| quad(&form, x).unwrap_or(f64::NAN), t.dim(), &tol)?;
                report.push(CheckRecord::close(
                    "generator recovered from unit-sphere values",
                    "polarization identity",
                    rec.form.generator().max_abs_diff(&t),
                    0.0,
                    tol.comparison,
                ));
            }
        }
        Command::Classify { seq, mode, cross_check } => {
            let s: SeqDescriptor = load_json(seq, "seq")?;
            let mode = match mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Heuristic => Mode::Heuristic,
            };
            let summability = classify_summability(&s, mode)?;
            let frame = classify_frame_type(&s)?;
            report.push(
                CheckRecord::new("summability class", "cases by sum a_n^+ and sum a_n^-")
                    .values(summability.class, summability.provenance)
                    .pass(true),
            );
            report.push(
                CheckRecord::new("frame type class", "frame type iff sum a_n^- < inf")
                    .values(frame.class, frame.provenance)
                    .pass(true),
            );
            if *cross_check {
                let exact = classify_summability(&s, Mode::Exact)?.class;
                let heur = classify_summability(&s, Mode::Heuristic)?.class;
                report.push(CheckRecord::equal(
                    "exact and heuristic classes agree",
                    "partial sums up to 10^6 terms",
                    exact,
                    heur,
                ));
                let heur_frame = crate::seq::classify_frame_type_heuristic(&s)?;
                report.push(CheckRecord::equal(
                    "exact and heuristic frame-type classes agree",
                    "partial sums up to 10^6 terms",
                    frame.class,
                    heur_frame,
                ));
            }
            report.set_details(serde_json::json!({
                "facts": s.facts(),
                "summability": summability,
                "frame_type": frame,
                "case": frame.class.case(),
                "is_frame_type": frame.class.is_frame_type(),
                "note": "a frame type function needs ONS sums that are summable or +inf, so case III is \
                         frame type only for sum a_n^+ = inf, sum a_n^- < inf; the mirrored case is not",
            }));
        }
        Command::Rearrange {
            seq,
            target,
            steps,
            trace,
        } => {
            let s: SeqDescriptor = load_json(seq, "seq")?;
            let target: Target = target.parse()?;
            let r = rearrange_to_target(&s, target, *steps)?;
            let mut used = r.indices.clone();
            used.sort_unstable();
            used.dedup();
            report.push(CheckRecord::equal(
                "every index used at most once",
                "rearrangement is a permutation prefix",
                used.len(),
                r.indices.len(),
            ));
            match target {
                Target::Finite(t) => {
                    let approach = r.closest_approach.unwrap_or(f64::INFINITY);
                    report.push(
                        CheckRecord::new(
                            "partial sums reach the target",
                            "greedy rearrangement converges to any target",
                        )
                        .values(approach, 0.0)
                        .tolerance(1e-3)
                        .pass(approach <= 1e-3),
                    );
                    report.set_details(serde_json::json!({
                        "target": t,
                        "final_sum": r.final_sum,
                        "crossings": r.crossings,
                        "closest_approach": r.closest_approach,
                        "steps": steps,
                    }));
                }
                Target::Infinite(side) => {
                    let up = matches!(side, crate::seq::InfiniteTarget::PlusInfinity);
                    let beyond = if up { r.final_sum > 1.0 } else { r.final_sum < -1.0 };
                    report.push(
                        CheckRecord::new(
                            "partial sums move past the first milestone",
                            "greedy rearrangement diverges to the chosen infinity",
                        )
                        .values(r.final_sum, if up { 1.0 } else { -1.0 })
                        .pass(beyond),
                    );
                    report.set_details(serde_json::json!({
                        "target": if up { "inf" } else { "-inf" },
                        "final_sum": r.final_sum,
                        "steps": steps,
                    }));
                }
            }
            if let Some(path) = trace {
                let mut w = csv::Writer::from_writer(Vec::new());
                let err = |e: csv::Error| Error::Input(e.to_string());
                w.write_record(["step", "index", "partial_sum"]).map_err(err)?;
                for (k, (i, s)) in r.indices.iter().zip(&r.partial_sums).enumerate() {
                    w.write_record([(k + 1).to_string(), i.to_string(), s.to_string()])
                        .map_err(err)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Input(e.to_string()))?;
                write_file(path, &String::from_utf8_lossy(&bytes))?;
            }
        }
        Command::Ext {
            measure,
            other,
            index_set,
        } => {
            let m: ExtMeasure = load_json(measure, "measure")?;
            let d = decide_sigma_additive(&m)?;
            report.push(
                CheckRecord::new("σ-additivity decided", d.explanation)
                    .values(d.verdict, d.rule)
                    .pass(d.verdict != SigmaAdditivity::Undecidable),
            );
            let witness = sigma_violation_witness(&m).ok();
            let mut details = serde_json::json!({
                "measure": m,
                "decision": d,
                "witness": witness,
            });
            if let Some(j) = index_set {
                let j: IndexSet = load_json(j, "index_set")?;
                let v = eval_ext(&m, &j)?;
                let gap = aligned_sup_gap(&m, &j)?;
                report.push(
                    CheckRecord::new("value on the index set", "m(M_J) = tr(t P_J) or inf")
                        .values(ext_value(v.value), ext_value(gap.finite_sup))
                        .pass(true),
                );
                details["value"] = serde_json::json!({"value": ext_value(v.value), "exact": v.exact});
                details["sup_gap"] = serde_json::to_value(gap).unwrap_or_default();
            }
            if let Some(o) = other {
                let o: ExtMeasure = load_json(o, "other")?;
                let sum = oplus(&m, &o);
                report.push(
                    CheckRecord::new(
                        "partial sum",
                        "defined iff a summand is P1(H)-bounded or the domains agree",
                    )
                    .values(sum.is_defined(), serde_json::Value::Null)
                    .pass(true),
                );
                if let OplusOutcome::Defined { measure } = &sum {
                    let ds = decide_sigma_additive(measure)?;
                    details["sum_decision"] = serde_json::to_value(ds).unwrap_or_default();
                }
                details["sum"] = serde_json::to_value(sum).unwrap_or_default();
            }
            report.set_details(details);
        }
        Command::DemoNonsub { variant } => {
            let v = match variant {
                VariantArg::Default => DemoVariant::Default,
                VariantArg::ZeroControl => DemoVariant::ZeroControl,
                VariantArg::TraceClassControl => DemoVariant::TraceClassControl,
            };
            let r = not_sub_gea_demo(v)?;
            if v == DemoVariant::Default {
                report.extend(suites::nonsub_records()?);
            } else {
                report.push(CheckRecord::equal(
                    "no violation of the two-of-three rule",
                    "control: all three measures are σ-additive",
                    (r.violation.is_none(), r.finite_check_holds),
                    (true, true),
                ));
            }
            report.set_details(r);
        }
        Command::Sobolev { grids, nmax, table } => {
            let gs: Vec<Grid> = grids.iter().map(|&k| Grid::with_intervals(k)).collect::<Result<_>>()?;
            let blow = boundary_blowup(&gs)?;
            let mut chains = Vec::new();
            for g in &gs {
                let c = chain_report(g, *nmax)?;
                let worst_gap = c
                    .steps
                    .iter()
                    .map(|s| s.next_gap.min(s.limit_gap))
                    .fold(f64::INFINITY, f64::min);
                let worst_identity = c.steps.iter().map(|s| s.identity_defect).fold(c.split_defect, f64::max);
                report.push(
                    CheckRecord::new(
                        format!("chain s_n decreasing to s, h = 1/{}", g.intervals()),
                        "s_(n+1) <= s_n, s <= s_n, s_hat <= s",
                    )
                    .values(worst_gap, 0.0)
                    .tolerance(c.tolerance)
                    .pass(worst_gap >= -c.tolerance && c.hat_below_s && !c.s_below_hat),
                );
                report.push(CheckRecord::close(
                    format!("s_n = (1 + 1/n) s_hat + s_0, h = 1/{}", g.intervals()),
                    "matrix identity",
                    worst_identity,
                    0.0,
                    1e-12,
                ));
                chains.push(c);
            }
            for r in &blow.rows {
                report.push(
                    CheckRecord::new(
                        format!("boundary term norm, h = 1/{}", r.n_points - 1),
                        "norm of |u(0)|^2 in the weighted geometry is 1/h",
                    )
                    .values(r.per_term_norm, r.expected)
                    .tolerance(1e-9)
                    .pass(r.relative_error <= 1e-9),
                );
            }
            report.push(CheckRecord::equal(
                "boundary norm strictly increasing as h decreases",
                "the boundary form is unbounded",
                blow.strictly_increasing,
                true,
            ));
            report.push(CheckRecord::close("log-log slope", "norm ~ 1/h", blow.slope, -1.0, 0.01));
            let csv = blow.to_csv()?;
            let table_path = table.clone().or_else(|| {
                cli.out.as_ref().map(|o| {
                    let stem = o.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                    o.with_file_name(format!("{stem}_table.csv"))
                })
            });
            if let Some(p) = &table_path {
                write_file(p, &csv)?;
            }
            // Chain steps are bulky; keep the summary fields only.
            let chain_summary: Vec<serde_json::Value> = chains
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "n_points": c.n_points,
                        "h": c.h,
                        "split_defect": c.split_defect,
                        "hat_gap": c.hat_gap,
                        "boundary_spectrum": c.boundary_spectrum,
                        "pass": c.pass,
                    })
                })
                .collect();
            report.set_details(serde_json::json!({
                "blowup": blow,
                "chains": chain_summary,
                "table": table_path,
            }));
        }
        Command::Nikodym { pairs, nmax, samples } => {
            report = report.with_seed(cli.seed);
            let summary = suites::nikodym_pairs(cli.seed, *pairs, *nmax, *samples, &tol)?;
            report.push(summary.record());
            report.set_details(summary);
        }
    }
    Ok(report)
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            // A pool that is already configured is kept.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Runs the CLI on the given arguments and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let mut report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if !cli.no_timestamp {
        report.stamp();
    }
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Csv => match report.to_csv() {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        },
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = write_file(p, &text) {
                eprintln!("error: {e}");
                return 2;
            }
        }
        None => print!("{text}"),
    }
    eprintln!(
        "{}: {} checks, {} failed",
        report.command,
        report.checks.len(),
        report.failed()
    );
    if report.all_pass() {
        0
    } else {
        1
    }
}

pub fn main() -> i32 {
    main_with_args(std::env::args_os())
}
