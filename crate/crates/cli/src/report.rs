//! Plain-text and JSON renderings of verification and differential runs.
//!
//! The structured form is one JSON document per run. Field order follows the
//! struct declarations below and is part of the output contract.

use std::time::Duration;

use serde::Serialize;

use pathguard::baseline::DivergenceRecord;
use pathguard::verify::{EnumerationSpec, NoResidueReport, PreimageReport};
use pathguard::CanonicalPath;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Plain,
    Structured,
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn quoted(bytes: &[u8]) -> String {
    format!("{:?}", text(bytes))
}

fn millis(d: Duration) -> u64 {
    d.as_millis().try_into().unwrap_or(u64::MAX)
}

#[derive(Serialize)]
struct Record {
    input: String,
    output: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    offending: Option<String>,
}

#[derive(Serialize)]
struct Summary {
    visited: u64,
    violations: usize,
    elapsed_ms: u64,
}

#[derive(Serialize)]
struct VerifyDocument {
    mode: &'static str,
    alphabet: String,
    max_len: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<String>,
    records: Vec<Record>,
    summary: Summary,
}

fn write_json(out: &mut Vec<u8>, doc: &impl Serialize) {
    serde_json::to_writer_pretty(&mut *out, doc).expect("serializing to memory");
    out.push(b'\n');
}

pub fn no_residue(
    out: &mut Vec<u8>,
    format: Format,
    spec: &EnumerationSpec,
    report: &NoResidueReport,
    elapsed: Duration,
) {
    match format {
        Format::Plain => {
            for v in &report.violations {
                out.extend(
                    format!(
                        "{}\t{}\t{}\n",
                        quoted(&v.input),
                        quoted(&v.output),
                        v.offending
                    )
                    .into_bytes(),
                );
            }
            out.extend(
                format!(
                    "{} violations / {} visited\n",
                    report.violations.len(),
                    report.visited
                )
                .into_bytes(),
            );
        }
        Format::Structured => write_json(
            out,
            &VerifyDocument {
                mode: "no-residue",
                alphabet: text(spec.alphabet()),
                max_len: spec.max_len(),
                target: None,
                records: report
                    .violations
                    .iter()
                    .map(|v| Record {
                        input: text(&v.input),
                        output: text(&v.output),
                        offending: Some(v.offending.to_string()),
                    })
                    .collect(),
                summary: Summary {
                    visited: report.visited,
                    violations: report.violations.len(),
                    elapsed_ms: millis(elapsed),
                },
            },
        ),
    }
}

pub fn preimages(
    out: &mut Vec<u8>,
    format: Format,
    spec: &EnumerationSpec,
    target: &CanonicalPath,
    report: &PreimageReport,
    elapsed: Duration,
) {
    match format {
        Format::Plain => {
            for p in &report.preimages {
                out.extend(format!("{}\n", quoted(p)).into_bytes());
            }
            out.extend(
                format!(
                    "{} preimages of {} / {} visited\n",
                    report.preimages.len(),
                    target,
                    report.visited
                )
                .into_bytes(),
            );
        }
        Format::Structured => write_json(
            out,
            &VerifyDocument {
                mode: "preimages",
                alphabet: text(spec.alphabet()),
                max_len: spec.max_len(),
                target: Some(target.to_string()),
                records: report
                    .preimages
                    .iter()
                    .map(|p| Record {
                        input: text(p),
                        output: target.to_string(),
                        offending: None,
                    })
                    .collect(),
                summary: Summary {
                    visited: report.visited,
                    violations: 0,
                    elapsed_ms: millis(elapsed),
                },
            },
        ),
    }
}

#[derive(Serialize)]
struct Divergence {
    input: String,
    baseline_output: String,
    canonical_output: String,
    residue_found: Vec<&'static str>,
}

#[derive(Serialize)]
struct DiffSummary {
    inputs: usize,
    divergences: usize,
    with_residue: usize,
    elapsed_ms: u64,
}

#[derive(Serialize)]
struct DiffDocument {
    mode: &'static str,
    records: Vec<Divergence>,
    summary: DiffSummary,
}

pub fn divergences(
    out: &mut Vec<u8>,
    format: Format,
    inputs: usize,
    records: &[DivergenceRecord],
    elapsed: Duration,
) {
    let with_residue = records
        .iter()
        .filter(|r| !r.residue_found.is_empty())
        .count();
    match format {
        Format::Plain => {
            for r in records {
                let residue: Vec<_> = r.residue_found.iter().map(|x| x.as_str()).collect();
                out.extend(
                    format!(
                        "{}\tbaseline {}\tcanonical {}\tresidue [{}]\n",
                        quoted(r.input.as_bytes()),
                        quoted(&r.baseline_output),
                        quoted(r.canonical_output.as_bytes()),
                        residue.join(", ")
                    )
                    .into_bytes(),
                );
            }
            out.extend(
                format!(
                    "{} divergences, {} with residue / {} inputs\n",
                    records.len(),
                    with_residue,
                    inputs
                )
                .into_bytes(),
            );
        }
        Format::Structured => write_json(
            out,
            &DiffDocument {
                mode: "differential",
                records: records
                    .iter()
                    .map(|r| Divergence {
                        input: text(r.input.as_bytes()),
                        baseline_output: text(&r.baseline_output),
                        canonical_output: r.canonical_output.to_string(),
                        residue_found: r.residue_found.iter().map(|x| x.as_str()).collect(),
                    })
                    .collect(),
                summary: DiffSummary {
                    inputs,
                    divergences: records.len(),
                    with_residue,
                    elapsed_ms: millis(elapsed),
                },
            },
        ),
    }
}
