//! Text formats for logs and alignments.
//!
//! Log file, one trace per line:
//!
//! ```text
//! #version=1
//! case_1<TAB>Register,Triage,Discharge
//! ```
//!
//! Alignment file, one row per trace, gap cells written as `-`:
//!
//! ```text
//! #version=1
//! #L=4
//! case_1<TAB>A<TAB>B<TAB>-<TAB>D
//! ```
//!
//! The version line is optional on input and always written on output. Other
//! lines starting with `#` are comments; blank lines are skipped.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::{Activity, Alignment, Cell, EventLog, Trace, GAP};

pub const LOG_FORMAT_VERSION: u32 = 1;
pub const ALIGNMENT_FORMAT_VERSION: u32 = 1;

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn read_log(path: &Path) -> Result<EventLog> {
    parse_log(&read_text(path)?, path)
}

pub fn read_alignment(path: &Path) -> Result<Alignment> {
    parse_alignment(&read_text(path)?, path)
}

struct Cursor<'a> {
    path: &'a Path,
    line: usize,
}

impl Cursor<'_> {
    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_owned(),
            line: self.line,
            column,
            message: message.into(),
        }
    }
}

/// Splits off directive and comment lines. Returns `(line number, text)` for
/// data lines and the value of every `#key=value` directive seen.
fn data_lines<'a>(
    text: &'a str,
    path: &'a Path,
    version: u32,
    mut directive: impl FnMut(&Cursor, &str, &str) -> Result<()>,
) -> Result<Vec<(usize, &'a str)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let at = Cursor { path, line: i + 1 };
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((key, value)) = rest.split_once('=') {
                if key == "version" {
                    if !out.is_empty() {
                        return Err(at.err(1, "version line must come before the data"));
                    }
                    match value.trim().parse::<u32>() {
                        Ok(v) if v == version => {}
                        _ => {
                            return Err(at.err(
                                10,
                                format!("unsupported format version {value:?} (expected {version})"),
                            ))
                        }
                    }
                } else {
                    directive(&at, key, value)?;
                }
            }
            continue;
        }
        out.push((i + 1, line));
    }
    Ok(out)
}

fn case_id<'a>(at: &Cursor, line: &'a str) -> Result<(&'a str, &'a str)> {
    let Some((case, rest)) = line.split_once('\t') else {
        return Err(at.err(line.chars().count() + 1, "expected a tab after the case id"));
    };
    if case.is_empty() {
        return Err(at.err(1, "empty case id"));
    }
    Ok((case, rest))
}

fn activity(at: &Cursor, column: usize, label: &str) -> Result<Activity> {
    Activity::new(label).map_err(|e| at.err(column, e.to_string()))
}

pub fn parse_log(text: &str, path: &Path) -> Result<EventLog> {
    let lines = data_lines(text, path, LOG_FORMAT_VERSION, |_, _, _| Ok(()))?;
    let mut traces = Vec::with_capacity(lines.len());
    let mut seen = HashSet::new();
    for (line_no, line) in lines {
        let at = Cursor { path, line: line_no };
        let (case, rest) = case_id(&at, line)?;
        if !seen.insert(case) {
            return Err(at.err(1, format!("duplicate case id {case:?}")));
        }
        if rest.contains('\t') {
            return Err(at.err(
                case.chars().count() + rest.find('\t').unwrap() + 2,
                "activities are separated by commas, not tabs",
            ));
        }
        let mut column = case.chars().count() + 2;
        let mut activities = Vec::new();
        for label in rest.split(',') {
            activities.push(activity(&at, column, label)?);
            column += label.chars().count() + 1;
        }
        let trace = Trace::new(case, activities).map_err(|e| at.err(1, e.to_string()))?;
        traces.push(trace);
    }
    EventLog::new(traces)
}

pub fn format_log(log: &EventLog) -> Result<String> {
    let mut out = format!("#version={LOG_FORMAT_VERSION}\n");
    for t in log.traces() {
        check_case_id(t.case_id())?;
        if let Some(bad) = t.labels().find(|l| l.contains(',')) {
            return Err(Error::InvalidActivity {
                label: bad.to_owned(),
                reason: "label contains a comma, which the log format uses as separator",
            });
        }
        out.push_str(t.case_id());
        out.push('\t');
        out.push_str(&t.labels().collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_alignment(text: &str, path: &Path) -> Result<Alignment> {
    let mut width: Option<usize> = None;
    let lines = data_lines(text, path, ALIGNMENT_FORMAT_VERSION, |at, key, value| {
        if key == "L" {
            let n = value
                .trim()
                .parse::<usize>()
                .map_err(|_| at.err(4, format!("bad column count {value:?}")))?;
            width = Some(n);
        }
        Ok(())
    })?;
    let Some(width) = width else {
        return Err(Error::Parse {
            path: path.to_owned(),
            line: 1,
            column: 1,
            message: "missing #L=<columns> header".into(),
        });
    };

    let mut rows: Vec<(String, Vec<String>)> = Vec::with_capacity(lines.len());
    let mut seen = HashSet::new();
    for (line_no, line) in lines {
        let at = Cursor { path, line: line_no };
        let (case, rest) = case_id(&at, line)?;
        if !seen.insert(case) {
            return Err(at.err(1, format!("duplicate case id {case:?}")));
        }
        let mut column = case.chars().count() + 2;
        let mut cells = Vec::with_capacity(width);
        for cell in rest.split('\t') {
            if cell != GAP {
                activity(&at, column, cell)?;
            }
            cells.push(cell.to_owned());
            column += cell.chars().count() + 1;
        }
        if cells.len() != width {
            return Err(at.err(1, format!("expected {width} cells, found {}", cells.len())));
        }
        rows.push((case.to_owned(), cells));
    }
    Alignment::from_label_rows(&rows)
}

pub fn format_alignment(a: &Alignment) -> Result<String> {
    let mut out = format!("#version={ALIGNMENT_FORMAT_VERSION}\n#L={}\n", a.n_columns());
    for (i, row) in a.rows().iter().enumerate() {
        let case = a.source().traces()[i].case_id();
        check_case_id(case)?;
        out.push_str(case);
        for cell in row {
            out.push('\t');
            match cell {
                Cell::Gap => out.push_str(GAP),
                Cell::Occupied(o) => out.push_str(a.label(*o)),
            }
        }
        out.push('\n');
    }
    Ok(out)
}

fn check_case_id(case: &str) -> Result<()> {
    if case.is_empty() || case.starts_with('#') || case.contains(['\t', '\n', '\r']) {
        return Err(Error::Config(format!("case id {case:?} cannot be written to a text file")));
    }
    Ok(())
}

/// Path used in diagnostics for in-memory text.
pub fn memory_path() -> PathBuf {
    PathBuf::from("<memory>")
}
