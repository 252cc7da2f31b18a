//! Deterministic analysis reports with an exact TSV round trip.
//!
//! A report records what was analyzed (path plus content hash), the
//! bounds in force, one line per verdict, and free-form notes for
//! informational findings that are not verdicts.  The TSV form keeps
//! metadata on `#`-prefixed directive lines and one verdict per plain
//! line with exactly three tab-separated fields, so downstream tooling
//! can consume verdicts with a dumb splitter.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grading::GradedVerdict;

/// One verdict row: property label, status label, witness text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportLine {
    pub property: String,
    pub status: String,
    pub witness: String,
}

/// A full analysis report.  Reports compare by value, which is what the
/// round-trip invariant (`parse_report(to_tsv(r)) == r`) relies on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    /// Input path, or a symbolic name for embedded inputs.
    pub input: String,
    /// Hex SHA-256 of the input bytes.
    pub sha256: String,
    /// Labelled bounds in force, in declaration order.
    pub bounds: Vec<(String, usize)>,
    pub lines: Vec<ReportLine>,
    pub notes: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Tabs and newlines would break the one-line-per-verdict format, so
/// witness and note text is flattened on the way in.
fn flatten(s: &str) -> String {
    s.replace(['\t', '\n'], " ")
}

impl AnalysisReport {
    pub fn new(input: &str, content: &[u8], bounds: Vec<(String, usize)>) -> Self {
        AnalysisReport {
            input: input.to_string(),
            sha256: sha256_hex(content),
            bounds,
            lines: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push_verdict(&mut self, v: &GradedVerdict) {
        self.lines.push(ReportLine {
            property: v.property.label().to_string(),
            status: v.status.label().to_string(),
            witness: flatten(&v.witness),
        });
    }

    pub fn push_line(&mut self, property: &str, status: &str, witness: &str) {
        self.lines.push(ReportLine {
            property: flatten(property),
            status: flatten(status),
            witness: flatten(witness),
        });
    }

    pub fn push_note(&mut self, note: &str) {
        self.notes.push(flatten(note));
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# input\t{}\n", self.input));
        out.push_str(&format!("# sha256\t{}\n", self.sha256));
        for (name, value) in &self.bounds {
            out.push_str(&format!("# bound\t{name}\t{value}\n"));
        }
        for line in &self.lines {
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                line.property, line.status, line.witness
            ));
        }
        for note in &self.notes {
            out.push_str(&format!("# note\t{note}\n"));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("input:  {}\n", self.input));
        out.push_str(&format!("sha256: {}\n", self.sha256));
        if !self.bounds.is_empty() {
            let rendered: Vec<String> = self
                .bounds
                .iter()
                .map(|(n, v)| format!("{n}={v}"))
                .collect();
            out.push_str(&format!("bounds: {}\n", rendered.join(", ")));
        }
        out.push('\n');
        let width = self
            .lines
            .iter()
            .map(|l| l.property.len())
            .max()
            .unwrap_or(0);
        for line in &self.lines {
            out.push_str(&format!(
                "{:width$}  {:13}  {}\n",
                line.property, line.status, line.witness
            ));
        }
        if !self.notes.is_empty() {
            out.push('\n');
            for note in &self.notes {
                out.push_str(&format!("note: {note}\n"));
            }
        }
        out
    }
}

/// Parses the TSV form back into a report; inverse of
/// [`AnalysisReport::to_tsv`] on its image.
pub fn parse_report(text: &str) -> Result<AnalysisReport> {
    let mut input = None;
    let mut sha256 = None;
    let mut bounds = Vec::new();
    let mut lines = Vec::new();
    let mut notes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let no = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if let Some(first) = fields.first().and_then(|f| f.strip_prefix("# ")) {
            match (first, fields.len()) {
                ("input", 2) => input = Some(fields[1].to_string()),
                ("sha256", 2) => sha256 = Some(fields[1].to_string()),
                ("bound", 3) => {
                    let value: usize = fields[2].parse().map_err(|_| {
                        Error::parse(no, format!("bad bound value {:?}", fields[2]))
                    })?;
                    bounds.push((fields[1].to_string(), value));
                }
                ("note", 2) => notes.push(fields[1].to_string()),
                _ => {
                    return Err(Error::parse(
                        no,
                        format!("unknown or malformed directive {first:?}"),
                    ))
                }
            }
            continue;
        }
        if fields.len() != 3 {
            return Err(Error::parse(
                no,
                format!("verdict line needs 3 tab-separated fields, got {}", fields.len()),
            ));
        }
        lines.push(ReportLine {
            property: fields[0].to_string(),
            status: fields[1].to_string(),
            witness: fields[2].to_string(),
        });
    }
    let Some(input) = input else {
        return Err(Error::parse(0, "missing `# input` directive"));
    };
    let Some(sha256) = sha256 else {
        return Err(Error::parse(0, "missing `# sha256` directive"));
    };
    Ok(AnalysisReport {
        input,
        sha256,
        bounds,
        lines,
        notes,
    })
}
