//! Command-line surface. `main` only parses arguments, sizes the thread pool
//! and reports errors; everything else happens in [`run`].

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::aligner::{consensus_reference, progressive_align, ScoringScheme};
use crate::error::{Error, Result};
use crate::experiments::{
    correlation_experiment, generate_log, perturb, tf_ratio_sweep, CorrelationReport, ExperimentConfig, Metric,
    ProcessModelSpec, SweepPoint, TF_RATIO_GRID,
};
use crate::io::{format_alignment, format_log, read_alignment, read_log, read_text, write_text};
use crate::metrics::{evaluate, extract_patterns, EvaluationParams, MetricReport, PatternCensus};

#[derive(Debug, Parser)]
#[command(name = "trace-align", version, about = "Align event-log traces and score alignment quality")]
pub struct Cli {
    /// Worker threads (default: all available cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Progressive alignment of a log.
    Align {
        log: PathBuf,
        #[command(flatten)]
        scoring: ScoringArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Best-of-k consensus reference alignment.
    Consensus {
        log: PathBuf,
        #[command(flatten)]
        scoring: ScoringArgs,
        /// Guide trees to try.
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Metric report for an alignment.
    Evaluate {
        alignment: PathBuf,
        #[arg(long)]
        reference: Option<PathBuf>,
        #[command(flatten)]
        scoring: ScoringArgs,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Pattern census histogram by frequency band and length.
    Patterns {
        log: PathBuf,
        #[arg(long, default_value_t = 2)]
        min_len: usize,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long, default_value_t = 10)]
        bands: usize,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Inject random relocations into an alignment.
    Perturb {
        alignment: PathBuf,
        #[arg(long)]
        moves: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sample a synthetic log from a process model spec.
    GenLog {
        model: PathBuf,
        #[arg(long, default_value_t = 30)]
        traces: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Correlate every metric with injected heuristic errors.
    Correlate {
        log: PathBuf,
        #[command(flatten)]
        scoring: ScoringArgs,
        #[arg(long, default_value_t = 0.40)]
        tf_ratio: f64,
        #[arg(long, default_value_t = 30)]
        samples: usize,
        #[arg(long, default_value_t = 30)]
        max_moves: usize,
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Report corr(OMS, N_e) across the tf_ratio grid instead.
        #[arg(long)]
        sweep: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, Args)]
pub struct ScoringArgs {
    #[arg(long = "match", default_value_t = 1, allow_hyphen_values = true)]
    pub match_score: i64,
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    pub mismatch: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub gap: i64,
}

impl ScoringArgs {
    fn scheme(&self) -> Result<ScoringScheme> {
        ScoringScheme::new(self.match_score, self.mismatch, self.gap)
    }
}

#[derive(Clone, Copy, Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long, default_value_t = 0.40)]
    pub tf_ratio: f64,
    #[arg(long, default_value_t = 0.5)]
    pub majority: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

fn effective_seed(seed: Option<u64>, diag: &mut dyn Write) -> u64 {
    let seed = seed.unwrap_or_else(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0)
    });
    let _ = writeln!(diag, "seed: {seed}");
    seed
}

fn emit(output: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match output {
        Some(path) => write_text(path, text),
        None => out.write_all(text.as_bytes()).map_err(|source| Error::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// Runs one command. Regular output goes to `out` (unless redirected to a
/// file), seeds and other notes to `diag`.
pub fn run(command: Command, out: &mut dyn Write, diag: &mut dyn Write) -> Result<()> {
    match command {
        Command::Align { log, scoring, output } => {
            let log = Arc::new(read_log(&log)?);
            let a = progressive_align(log, &scoring.scheme()?, None)?;
            emit(output.as_deref(), &format_alignment(&a)?, out)
        }
        Command::Consensus {
            log,
            scoring,
            k,
            seed,
            output,
        } => {
            let log = Arc::new(read_log(&log)?);
            let seed = effective_seed(seed, diag);
            let a = consensus_reference(log, &scoring.scheme()?, k, seed)?;
            emit(output.as_deref(), &format_alignment(&a)?, out)
        }
        Command::Evaluate {
            alignment,
            reference,
            scoring,
            thresholds,
            format,
            output,
        } => {
            let a = read_alignment(&alignment)?;
            let reference = reference.as_deref().map(read_alignment).transpose()?;
            check_range("tf-ratio", thresholds.tf_ratio, false)?;
            check_range("majority", thresholds.majority, true)?;
            let params = EvaluationParams {
                scoring: scoring.scheme()?,
                tf_ratio: thresholds.tf_ratio,
                majority: thresholds.majority,
            };
            let report = evaluate(&a, reference.as_ref(), &params)?;
            let text = match format {
                Format::Json => json(&report),
                Format::Human => report_table(&report),
                Format::Csv => report_csv(&report),
            };
            emit(output.as_deref(), &text, out)
        }
        Command::Patterns {
            log,
            min_len,
            max_len,
            bands,
            format,
            output,
        } => {
            let log = read_log(&log)?;
            let census = extract_patterns(&log, min_len, max_len)?;
            if bands == 0 {
                return Err(Error::Config("bands must be at least 1".into()));
            }
            emit(output.as_deref(), &census_text(&census, bands, format), out)
        }
        Command::Perturb {
            alignment,
            moves,
            seed,
            output,
        } => {
            let a = read_alignment(&alignment)?;
            let seed = effective_seed(seed, diag);
            let p = perturb(&a, moves, seed)?;
            emit(output.as_deref(), &format_alignment(&p.alignment)?, out)
        }
        Command::GenLog {
            model,
            traces,
            seed,
            output,
        } => {
            let spec = ProcessModelSpec::from_json(&read_text(&model)?)
                .map_err(|e| Error::Config(format!("{}: {e}", model.display())))?;
            let seed = effective_seed(seed, diag);
            let log = generate_log(&spec, traces, seed)?;
            emit(output.as_deref(), &format_log(&log)?, out)
        }
        Command::Correlate {
            log,
            scoring,
            tf_ratio,
            samples,
            max_moves,
            k,
            seed,
            sweep,
            format,
            output,
        } => {
            let log = Arc::new(read_log(&log)?);
            let config = ExperimentConfig {
                scoring: scoring.scheme()?,
                samples,
                max_moves,
                tf_ratio,
                seed: effective_seed(seed, diag),
                consensus_trees: k,
            };
            let text = if sweep {
                let reference = consensus_reference(log, &config.scoring, k, config.seed)?;
                let points = tf_ratio_sweep(&reference, &config, &TF_RATIO_GRID)?;
                sweep_text(&points, format)
            } else {
                let report = correlation_experiment(log, &config)?;
                correlation_text(&report, format)
            };
            emit(output.as_deref(), &text, out)
        }
    }
}

fn check_range(name: &str, v: f64, allow_zero: bool) -> Result<()> {
    let ok = if allow_zero { (0.0..1.0).contains(&v) } else { v > 0.0 && v <= 1.0 };
    if !ok {
        return Err(Error::Config(format!("--{name} out of range: {v}")));
    }
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_owned(), |x| format!("{x:.6}"))
}

/// Flat `(section, metric, value)` rows in report order.
fn report_rows(r: &MetricReport) -> Vec<(&'static str, String, String)> {
    let a = &r.accuracy;
    let mut rows = vec![
        ("accuracy", "ref_free_sps".to_owned(), a.ref_free_sps.to_string()),
        ("accuracy", "ref_based_sps".to_owned(), opt(a.ref_based_sps)),
        ("accuracy", "column_score".to_owned(), opt(a.column_score)),
        ("accuracy", "n_e".to_owned(), a.n_e.map_or("n/a".to_owned(), |n| n.to_string())),
        ("accuracy", "oms".to_owned(), format!("{:.6}", a.oms)),
        ("accuracy", "eligible_patterns".to_owned(), a.eligible_patterns.to_string()),
        ("accuracy", "f_max".to_owned(), a.f_max.to_string()),
        ("accuracy", "ms_top".to_owned(), a.ms_top.score.to_string()),
        ("accuracy", "ms_top_pattern".to_owned(), a.ms_top.pattern.join(",")),
        ("confidence", "ois".to_owned(), format!("{:.6}", r.confidence.ois)),
        ("complexity", "complexity".to_owned(), format!("{:.6}", r.complexity.value)),
        ("complexity", "complexity_lower".to_owned(), format!("{:.6}", r.complexity.lower_bound)),
        ("complexity", "complexity_upper".to_owned(), format!("{:.6}", r.complexity.upper_bound)),
    ];
    let consensus: Vec<&str> = r.consensus.iter().map(|c| c.label.as_str()).collect();
    rows.push(("consensus", "sequence".to_owned(), consensus.join(",")));
    rows
}

fn report_table(r: &MetricReport) -> String {
    let mut s = String::new();
    let sh = &r.shape;
    let _ = writeln!(
        s,
        "traces {}  activities {}  types {}  columns {} (min {})",
        sh.traces, sh.activities, sh.activity_types, sh.columns, sh.min_columns
    );
    let mut section = "";
    for (sec, name, value) in report_rows(r) {
        if sec != section {
            let _ = writeln!(s, "\n[{sec}]");
            section = sec;
        }
        let _ = writeln!(s, "  {name:<18} {value}");
    }
    s
}

fn report_csv(r: &MetricReport) -> String {
    csv_text(
        &["section", "metric", "value"],
        report_rows(r).into_iter().map(|(a, b, c)| vec![a.to_owned(), b, c]),
    )
}

fn census_text(c: &PatternCensus, bands: usize, format: Format) -> String {
    let bins = c.frequency_histogram(bands);
    match format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = bins
                .iter()
                .map(|b| {
                    serde_json::json!({
                        "lower": b.lower, "upper": b.upper, "length": b.length, "patterns": b.patterns
                    })
                })
                .collect();
            json(&serde_json::json!({ "f_max": c.f_max(), "patterns": c.len(), "bins": rows }))
        }
        Format::Csv => csv_text(
            &["band_lower", "band_upper", "length", "patterns"],
            bins.iter().map(|b| {
                vec![
                    format!("{:.3}", b.lower),
                    format!("{:.3}", b.upper),
                    b.length.to_string(),
                    b.patterns.to_string(),
                ]
            }),
        ),
        Format::Human => {
            let mut s = format!("patterns {}  f_max {}\n", c.len(), c.f_max());
            let _ = writeln!(s, "{:>13}  {:>6}  {:>8}", "f_p/f_M", "length", "patterns");
            for b in &bins {
                let _ = writeln!(
                    s,
                    "{:>5.2} - {:>4.2}  {:>6}  {:>8}",
                    b.lower, b.upper, b.length, b.patterns
                );
            }
            s
        }
    }
}

fn correlation_text(r: &CorrelationReport, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => {
            let mut header = vec!["sample_id", "n_e"];
            header.extend(Metric::ALL.iter().map(|m| m.name()));
            csv_text(
                &header,
                r.samples.iter().map(|s| {
                    let mut row = vec![s.sample_id.to_string(), s.n_e.to_string()];
                    row.extend(s.values.iter().map(|v| format!("{v}")));
                    row
                }),
            )
        }
        Format::Human => {
            let mut s = format!(
                "samples {}  max_moves {}  tf_ratio {}  seed {}\n",
                r.config.samples, r.config.max_moves, r.config.tf_ratio, r.config.seed
            );
            for c in &r.correlations {
                let value = match (&c.coefficient, &c.error) {
                    (Some(v), _) => format!("{v:+.4}"),
                    (None, Some(e)) => e.clone(),
                    (None, None) => "n/a".into(),
                };
                let _ = writeln!(s, "  {:<14} {value}", c.metric.name());
            }
            s
        }
    }
}

fn sweep_text(points: &[SweepPoint], format: Format) -> String {
    match format {
        Format::Json => json(&points),
        Format::Csv | Format::Human => csv_text(
            &["tf_ratio", "eligible_patterns", "corr_oms_n_e"],
            points.iter().map(|p| {
                vec![
                    p.tf_ratio.to_string(),
                    p.eligible_patterns.to_string(),
                    p.coefficient.map_or_else(String::new, |c| format!("{c}")),
                ]
            }),
        ),
    }
}
