//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

mod common;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::{aln, all_strings, brute_force_pairwise, labels, random_log, three_way_optimum};
use trace_align::aligner::{consensus_reference, pairwise_align, progressive_align, ScoringScheme};
use trace_align::experiments::{
    correlation_against, perturb, tf_ratio_sweep, CorrelationReport, ExperimentConfig, Metric, SweepPoint,
    TF_RATIO_GRID,
};
use trace_align::io::{read_alignment, read_log};
use trace_align::metrics::{
    alignment_complexity, column_score, count_heuristic_errors, extract_patterns, misalignment_score,
    overall_information_score, overall_misalignment_score, ref_based_sps, ref_free_sps, Pattern,
};
use trace_align::model::{Alignment, EventLog, Trace};

const BIN: &str = env!("CARGO_BIN_EXE_trace-align");
const LOGS: [&str; 5] = [
    "trauma_primary_survey",
    "emergency_triage",
    "sepsis_pathway",
    "outpatient_surgery",
    "stroke_code",
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn bundled_log(name: &str) -> Arc<EventLog> {
    Arc::new(read_log(&data(&format!("logs/{name}.tsv"))).unwrap())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn c1_complexity_bounds() -> Outcome {
    let lower = aln(&[
        ("t1", vec!["A", "B", "C", "D"]),
        ("t2", vec!["A", "B", "C", "-"]),
        ("t3", vec!["A", "B", "-", "-"]),
    ]);
    let spread = |row: usize, cols: &[(usize, &'static str)]| {
        let mut cells = vec!["-"; 9];
        for &(c, l) in cols {
            cells[c] = l;
        }
        (["t1", "t2", "t3"][row], cells)
    };
    let upper = aln(&[
        spread(0, &[(0, "A"), (3, "B"), (6, "C"), (8, "D")]),
        spread(1, &[(1, "A"), (4, "B"), (7, "C")]),
        spread(2, &[(2, "A"), (5, "B")]),
    ]);
    let (lo, hi) = (alignment_complexity(&lower), alignment_complexity(&upper));
    let pass = lo.value == 0.25
        && lo.value == lo.lower_bound
        && close(hi.value, 2.0 / 3.0, 1e-12)
        && close(hi.value, hi.upper_bound, 1e-12)
        && lower.source().total_activities() == 9;
    outcome(pass, format!("P(lower) = {}, P(upper) = {:.12}", lo.value, hi.value))
}

fn c2_universal_bounds() -> Outcome {
    let s = ScoringScheme::default();
    let failures: Vec<u64> = (0..1000u64)
        .into_par_iter()
        .filter(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(2..=7);
            let max_len = rng.gen_range(1..=9);
            let types = rng.gen_range(1..=6);
            let log = random_log(&mut rng, n, max_len, types);
            let a = progressive_align(log, &s, None).unwrap();
            let p = perturb(&a, rng.gen_range(0..=10), seed).unwrap().alignment;
            let gapless = Alignment::gapless(a.source_arc().clone()).unwrap();
            ![a, p, gapless].iter().all(|x| {
                let c = alignment_complexity(x);
                c.lower_bound - 1e-12 <= c.value && c.value <= c.upper_bound + 1e-12
            })
        })
        .collect();
    outcome(
        failures.is_empty(),
        format!("1000 logs x 3 alignments, {} out of bounds", failures.len()),
    )
}

fn c3_ois_splitting() -> Outcome {
    let compact = aln(&[
        ("1", vec!["A", "B", "C"]),
        ("2", vec!["A", "B", "C"]),
        ("3", vec!["A", "-", "C"]),
        ("4", vec!["A", "-", "C"]),
    ]);
    let split = aln(&[
        ("1", vec!["A", "B", "-", "C"]),
        ("2", vec!["A", "-", "B", "C"]),
        ("3", vec!["A", "-", "-", "C"]),
        ("4", vec!["A", "-", "-", "C"]),
    ]);
    let h = |p: f64| -(p * p.log2() + (1.0 - p) * (1.0 - p).log2());
    let want_compact = 1.0 - 1.0 / 6.0;
    let want_split = 1.0 - 2.0 * h(0.25) / 8.0;
    let (c, s) = (overall_information_score(&compact), overall_information_score(&split));
    let pass = close(c, want_compact, 1e-9) && close(s, want_split, 1e-9) && c > s && close(s, 0.7972, 5e-5);
    outcome(pass, format!("OIS compact = {c:.10}, split = {s:.10}"))
}

fn c4_column_score_insensitivity() -> Outcome {
    let reference = aln(&[
        ("1", vec!["A", "B", "C"]),
        ("2", vec!["A", "B", "C"]),
        ("3", vec!["A", "B", "C"]),
        ("4", vec!["A", "B", "C"]),
    ]);
    let one = aln(&[
        ("1", vec!["A", "B", "C", "-"]),
        ("2", vec!["A", "B", "C", "-"]),
        ("3", vec!["A", "B", "C", "-"]),
        ("4", vec!["A", "-", "B", "C"]),
    ]);
    let two = aln(&[
        ("1", vec!["A", "B", "C", "-"]),
        ("2", vec!["A", "B", "C", "-"]),
        ("3", vec!["A", "-", "B", "C"]),
        ("4", vec!["A", "-", "B", "C"]),
    ]);
    let cs1 = column_score(&one, &reference).unwrap();
    let cs2 = column_score(&two, &reference).unwrap();
    let q1 = ref_based_sps(&one, &reference).unwrap();
    let q2 = ref_based_sps(&two, &reference).unwrap();
    let (m1, m2) = (displaced(&one, &reference), displaced(&two, &reference));
    let pass = cs1 == cs2 && m1 < m2 && q1 > q2;
    outcome(
        pass,
        format!("CS {cs1} vs {cs2} with {m1} vs {m2} misaligned activities; ref-based SPS {q1:.3} vs {q2:.3}"),
    )
}

/// Occurrences sitting in a different column index than in the reference.
fn displaced(a: &Alignment, reference: &Alignment) -> usize {
    let (x, y) = (a.occurrence_columns(), reference.occurrence_columns());
    x.iter().flatten().zip(y.iter().flatten()).filter(|(p, q)| p != q).count()
}

/// Alignment where the pattern A,B,C sits in the same three columns of every
/// row, between independently aligned random prefixes and suffixes over other letters.
fn planted(rng: &mut ChaCha8Rng) -> (Alignment, Vec<Pattern>) {
    let s = ScoringScheme::default();
    let n = rng.gen_range(2..=6);
    let shift = |log: &EventLog| -> Vec<Vec<String>> {
        let a = progressive_align(Arc::new(log.clone()), &s, None).unwrap();
        a.rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| c.occurrence().map_or("-".to_owned(), |o| a.label(o).to_owned()))
                    .collect()
            })
            .collect()
    };
    let side = |rng: &mut ChaCha8Rng| {
        let rows: Vec<(String, Vec<&str>)> = (0..n)
            .map(|i| {
                let len = rng.gen_range(1..=4);
                (format!("t{i}"), (0..len).map(|_| ["D", "E", "F", "G"][rng.gen_range(0..4)]).collect())
            })
            .collect();
        EventLog::from_label_rows(&rows).unwrap()
    };
    let pre = shift(&side(rng));
    let post = shift(&side(rng));
    let rows: Vec<(String, Vec<String>)> = (0..n)
        .map(|i| {
            let mut cells = pre[i].clone();
            cells.extend(["A", "B", "C"].map(String::from));
            cells.extend(post[i].iter().cloned());
            (format!("t{i}"), cells)
        })
        .collect();
    let patterns = [vec!["A", "B"], vec!["B", "C"], vec!["A", "B", "C"]]
        .into_iter()
        .map(|p| Pattern::new(p).unwrap())
        .collect();
    (Alignment::from_label_rows(&rows).unwrap(), patterns)
}

fn c5_identity_suite() -> Outcome {
    let s = ScoringScheme::default();
    let bad: Vec<String> = (0..200u64)
        .into_par_iter()
        .filter_map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(10_000 + seed);
            let (n, len) = (rng.gen_range(2..=6), rng.gen_range(2..=8));
            let log = random_log(&mut rng, n, len, 4);
            let base = progressive_align(log, &s, None).unwrap();
            let a = perturb(&base, rng.gen_range(0..5), seed).unwrap().alignment;
            if let Ok(q) = ref_based_sps(&a, &a) {
                if q != 1.0 || column_score(&a, &a).unwrap() != 1.0 {
                    return Some(format!("seed {seed}: Q or CS != 1"));
                }
            }
            if count_heuristic_errors(&a, &a).unwrap() != 0 {
                return Some(format!("seed {seed}: N_e != 0"));
            }
            let (p, patterns) = planted(&mut rng);
            if ref_based_sps(&p, &p).unwrap() != 1.0 || column_score(&p, &p).unwrap() != 1.0 {
                return Some(format!("seed {seed}: planted Q or CS != 1"));
            }
            if let Some(pat) = patterns.iter().find(|pat| misalignment_score(&p, pat) != 0) {
                return Some(format!("seed {seed}: MS({pat}) != 0"));
            }
            None
        })
        .collect();
    outcome(
        bad.is_empty(),
        match bad.first() {
            None => "200 perturbed + 200 planted alignments".to_owned(),
            Some(first) => format!("{} failures, first: {first}", bad.len()),
        },
    )
}

fn c6_pairwise_optimality() -> Outcome {
    let s = ScoringScheme::default();
    let strings = all_strings(3, 5);
    let traces = |id: &str| -> Vec<Trace> {
        strings
            .iter()
            .map(|c| Trace::from_labels(id, &labels(c)).unwrap())
            .collect()
    };
    let (firsts, seconds) = (traces("a"), traces("b"));
    let mismatches: usize = (0..strings.len())
        .into_par_iter()
        .map(|i| {
            (0..strings.len())
                .filter(|&j| {
                    let got = pairwise_align(&firsts[i], &seconds[j], &s).unwrap().score;
                    got != brute_force_pairwise(&strings[i], &strings[j], &s)
                })
                .count()
        })
        .sum();
    let n = strings.len() * strings.len();
    outcome(mismatches == 0, format!("{n} pairs, {mismatches} below the brute-force optimum"))
}

fn c7_progressive_vs_three_way() -> Outcome {
    let s = ScoringScheme::default();
    let mut below = Vec::new();
    let (mut total_got, mut total_best) = (0, 0);
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(20_000 + seed);
        let codes: Vec<Vec<u8>> = (0..3)
            .map(|_| (0..rng.gen_range(1..=6)).map(|_| rng.gen_range(0..3)).collect())
            .collect();
        let rows: Vec<(String, Vec<&str>)> = codes
            .iter()
            .enumerate()
            .map(|(i, c)| (format!("t{i}"), labels(c)))
            .collect();
        let log = Arc::new(EventLog::from_label_rows(&rows).unwrap());
        let got = ref_free_sps(&progressive_align(log, &s, None).unwrap(), &s);
        let best = three_way_optimum([&codes[0], &codes[1], &codes[2]], &s);
        total_got += got;
        total_best += best;
        if (got as f64) < 0.9 * best as f64 {
            below.push(format!("seed {seed}: {got}/{best}"));
        }
    }
    outcome(
        below.is_empty(),
        format!(
            "50 instances, {} below 0.9 x optimum [{}]; aggregate {total_got}/{total_best}",
            below.len(),
            below.join(", ")
        ),
    )
}

fn experiment_config() -> ExperimentConfig {
    ExperimentConfig {
        samples: 30,
        max_moves: 30,
        seed: 7,
        ..ExperimentConfig::default()
    }
}

fn references() -> Vec<(&'static str, Alignment)> {
    let c = experiment_config();
    LOGS.par_iter()
        .map(|&name| {
            let r = consensus_reference(bundled_log(name), &c.scoring, c.consensus_trees, c.seed).unwrap();
            (name, r)
        })
        .collect()
}

fn c8_correlation(refs: &[(&str, Alignment)]) -> Outcome {
    let c = experiment_config();
    let reports: Vec<(&str, CorrelationReport)> = refs
        .iter()
        .map(|(name, r)| (*name, correlation_against(r, &c).unwrap()))
        .collect();
    let mut all_strong = true;
    let mut oms_wins = 0;
    let mut signs = true;
    let mut lines = Vec::new();
    for (name, rep) in &reports {
        let get = |m| rep.coefficient(m).unwrap_or(f64::NAN);
        let (oms, ms) = (get(Metric::Oms), get(Metric::MsTop));
        let (q, sps) = (get(Metric::RefBasedSps), get(Metric::RefFreeSps));
        all_strong &= oms >= 0.7;
        oms_wins += usize::from(oms >= ms);
        signs &= oms > 0.0 && q < 0.0 && sps < 0.0;
        lines.push(format!("{name}: OMS {oms:.3} MS {ms:.3} Q {q:.3} SPS {sps:.3}"));
    }
    let pass = all_strong && oms_wins >= 3 && signs;
    outcome(
        pass,
        format!(
            "(a) all >= 0.7: {all_strong}; (b) OMS >= MS on {oms_wins}/5; (c) signs: {signs}\n      {}",
            lines.join("\n      ")
        ),
    )
}

fn c9_tf_sweep(refs: &[(&str, Alignment)]) -> Outcome {
    let c = experiment_config();
    let mut wins = 0;
    let mut lines = Vec::new();
    for (name, r) in refs {
        let points: Vec<SweepPoint> = tf_ratio_sweep(r, &c, &TF_RATIO_GRID).unwrap();
        let best = points
            .iter()
            .filter_map(|p| p.coefficient.map(|v| (p.tf_ratio, v)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let at_04 = points.iter().find(|p| p.tf_ratio == 0.4).and_then(|p| p.coefficient);
        wins += usize::from(at_04 == Some(best.1));
        let row: Vec<String> = points
            .iter()
            .map(|p| format!("{}:{}", p.tf_ratio, p.coefficient.map_or("n/a".into(), |v| format!("{v:.3}"))))
            .collect();
        lines.push(format!("{name}: best tf {} | {}", best.0, row.join(" ")));
    }
    outcome(
        wins >= 3,
        format!("tf 0.4 is the argmax on {wins}/5\n      {}", lines.join("\n      ")),
    )
}

fn cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(BIN).args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn c10_roundtrip_and_determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("trace-align-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = |name: &str| dir.join(name).to_str().unwrap().to_owned();
    let mut problems = Vec::new();
    let mut checked = 0;
    for name in LOGS {
        let model = data(&format!("models/{name}.json"));
        let log = p(&format!("{name}.tsv"));
        let aligned = p(&format!("{name}.aln"));
        let reference = p(&format!("{name}.ref.aln"));
        let noisy = p(&format!("{name}.noisy.aln"));
        let seeded: Vec<Vec<&str>> = vec![
            vec!["gen-log", model.to_str().unwrap(), "--traces", "25", "--seed", "11", "-o", &log],
            vec!["align", &log, "-o", &aligned],
            vec!["consensus", &log, "--k", "4", "--seed", "11", "-o", &reference],
            vec!["perturb", &reference, "--moves", "9", "--seed", "11", "-o", &noisy],
        ];
        for args in &seeded {
            cli(args);
            let out_path = args.last().unwrap();
            let first = std::fs::read(out_path).unwrap();
            cli(args);
            if std::fs::read(out_path).unwrap() != first {
                problems.push(format!("{} not reproducible", args[0]));
            }
            checked += 1;
        }
        let source = read_log(Path::new(&log)).unwrap();
        for file in [&aligned, &reference, &noisy] {
            if read_alignment(Path::new(file)).unwrap().strip_gaps().unwrap() != source {
                problems.push(format!("{file} does not strip back to its log"));
            }
        }
        let eval = ["evaluate", noisy.as_str(), "--reference", reference.as_str(), "--format", "json"];
        if cli(&eval) != cli(&eval) {
            problems.push("evaluate not reproducible".into());
        }
        checked += 1;
    }
    let log = data("logs/emergency_triage.tsv");
    let corr = ["correlate", log.to_str().unwrap(), "--seed", "5", "--samples", "12", "--max-moves", "10"];
    if cli(&corr) != cli(&corr) {
        problems.push("correlate not reproducible".into());
    }
    checked += 1;
    let _ = std::fs::remove_dir_all(&dir);
    outcome(
        problems.is_empty(),
        match problems.first() {
            None => format!("{checked} seeded commands ran twice byte-identically; 15 alignments strip back"),
            Some(p) => p.clone(),
        },
    )
}

fn c11_performance() -> Outcome {
    let s = ScoringScheme::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let rows = |rng: &mut ChaCha8Rng, len: usize| -> Arc<EventLog> {
        let rows: Vec<(String, Vec<&str>)> = (0..50)
            .map(|i| {
                let l = (0..len).map(|_| common::LETTERS[rng.gen_range(0..14)]).collect();
                (format!("t{i}"), l)
            })
            .collect();
        Arc::new(EventLog::from_label_rows(&rows).unwrap())
    };
    let log = rows(&mut rng, 100);
    let t = Instant::now();
    let a = progressive_align(log.clone(), &s, None).unwrap();
    let align_time = t.elapsed();

    let t = Instant::now();
    let census = extract_patterns(&log, 2, None).unwrap();
    let oms = overall_misalignment_score(&a, &census, 0.4).unwrap();
    let oms_time = t.elapsed();

    let census_time = |log: &EventLog| {
        (0..3)
            .map(|_| {
                let t = Instant::now();
                extract_patterns(log, 2, None).unwrap();
                t.elapsed()
            })
            .min()
            .unwrap()
    };
    let long = rows(&mut rng, 200);
    let (t100, t200) = (census_time(&log), census_time(&long));
    let ratio = t200.as_secs_f64() / t100.as_secs_f64().max(1e-9);
    let pass = oms_time < Duration::from_secs(10) && ratio <= 10.0 && oms.is_finite();
    outcome(
        pass,
        format!(
            "census + OMS {:.2?} (alignment {:.2?}); census {:.2?} -> {:.2?} at 2x length, ratio {ratio:.2}",
            oms_time, align_time, t100, t200
        ),
    )
}

fn main() {
    let mut failed = 0;
    let mut report = |id: u32, name: &str, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {status} {name} [{:.2?}]: {}", t.elapsed(), o.detail);
        failed += usize::from(!o.pass);
    };
    report(1, "complexity bounds exactness", &c1_complexity_bounds);
    report(2, "complexity bounds over random alignments", &c2_universal_bounds);
    report(3, "OIS splitting pathology", &c3_ois_splitting);
    report(4, "column score insensitivity", &c4_column_score_insensitivity);
    report(5, "identity suite", &c5_identity_suite);
    report(6, "pairwise DP optimality", &c6_pairwise_optimality);
    report(7, "progressive vs exact 3-way", &c7_progressive_vs_three_way);
    let refs = references();
    report(8, "correlation methodology", &|| c8_correlation(&refs));
    report(9, "tf_ratio sweep", &|| c9_tf_sweep(&refs));
    report(10, "roundtrip and determinism", &c10_roundtrip_and_determinism);
    report(11, "performance envelope", &c11_performance);
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
