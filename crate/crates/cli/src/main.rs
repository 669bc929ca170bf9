//! `pathguard`: canonicalize paths, check them against a whitelist, and run
//! the exhaustive and differential verification sweeps.
//!
//! Exit status: 0 allowed / clean, 1 denied / violations found, 2 usage or
//! input error.

mod report;

use std::ffi::{OsStr, OsString};
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use pathguard::baseline::{load_corpus, run_differential, DifferentialConfig};
use pathguard::verify::{preimages_of, verify_no_residue, EnumerationSpec};
use pathguard::{
    canonicalize, canonicalize_jailed, canonicalize_reporting, load_whitelist, validate_raw,
    whitelist_contains, CanonicalPath, EntryPolicy, Limits, RawPathString,
};

use report::Format;

#[derive(Debug, Parser)]
#[command(
    name = "pathguard",
    version,
    about = "Lexical path canonicalization and whitelisting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the canonical form of a path.
    Canon {
        /// Path to canonicalize.
        #[arg(required_unless_present = "stdin", conflicts_with = "stdin")]
        path: Option<OsString>,
        /// Canonical application root prepended to the input.
        #[arg(long)]
        root: Option<OsString>,
        /// Warn on standard error when `..` climbs above the root.
        #[arg(long)]
        strict_underflow: bool,
        /// Read one path per line from standard input.
        #[arg(long)]
        stdin: bool,
    },
    /// Allow or deny a path against a whitelist file.
    Check {
        #[arg(required_unless_present = "stdin", conflicts_with = "stdin")]
        path: Option<OsString>,
        /// Whitelist file: one canonical path per line.
        #[arg(long)]
        whitelist: PathBuf,
        #[arg(long)]
        root: Option<OsString>,
        /// Canonicalize whitelist entries instead of rejecting non-canonical ones.
        #[arg(long)]
        canonicalize_entries: bool,
        #[arg(long)]
        stdin: bool,
    },
    /// Exhaustively check every string over a small alphabet.
    Verify {
        #[arg(long, default_value_t = pathguard::verify::DEFAULT_MAX_LEN)]
        max_len: usize,
        /// Characters to enumerate; must include '/' and '.'.
        #[arg(long, default_value = "/.abc")]
        alphabet: OsString,
        /// List the preimages of this canonical path instead of sweeping for residue.
        #[arg(long)]
        target: Option<OsString>,
        #[arg(long, value_enum, default_value_t = FormatArg::Plain)]
        format: FormatArg,
    },
    /// Compare the legacy de_dotdot routine against the canonicalizer.
    Diff {
        /// Corpus file: one raw path per line.
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Plain)]
        format: FormatArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Plain,
    Structured,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Plain => Format::Plain,
            FormatArg::Structured => Format::Structured,
        }
    }
}

/// Decision reached by a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Clean,
    Denied,
}

#[cfg(unix)]
fn os_bytes(s: &OsStr) -> Vec<u8> {
    use std::os::unix::ffi::OsStrExt;
    s.as_bytes().to_vec()
}

#[cfg(not(unix))]
fn os_bytes(s: &OsStr) -> Vec<u8> {
    s.to_string_lossy().into_owned().into_bytes()
}

fn parse_root(root: Option<&OsStr>) -> Result<Option<CanonicalPath>> {
    root.map(|r| {
        let bytes = os_bytes(r);
        CanonicalPath::parse(&bytes).with_context(|| "--root must be a canonical absolute path")
    })
    .transpose()
}

/// All input paths, validated up front so nothing is decided on a partial batch.
fn gather_inputs(path: Option<&OsStr>, stdin: bool, limits: Limits) -> Result<Vec<RawPathString>> {
    if !stdin {
        let path = path.context("missing path argument")?;
        return Ok(vec![validate_raw(os_bytes(path), limits)?]);
    }
    let mut buf = Vec::new();
    io::stdin()
        .read_to_end(&mut buf)
        .context("reading standard input")?;
    if buf.last() == Some(&b'\n') {
        buf.pop();
    }
    if buf.is_empty() {
        return Ok(Vec::new());
    }
    buf.split(|&b| b == b'\n')
        .enumerate()
        .map(|(i, line)| {
            let line = line.strip_suffix(b"\r").unwrap_or(line);
            validate_raw(line, limits).with_context(|| format!("stdin line {}", i + 1))
        })
        .collect()
}

fn resolve(
    raw: &RawPathString,
    root: Option<&CanonicalPath>,
    limits: Limits,
) -> Result<CanonicalPath> {
    Ok(match root {
        Some(root) => canonicalize_jailed(root, raw, limits)?,
        None => canonicalize(raw),
    })
}

fn line(out: &mut Vec<u8>, tag: &[u8], path: &CanonicalPath) {
    out.extend_from_slice(tag);
    out.extend_from_slice(path.as_bytes());
    out.push(b'\n');
}

fn run(cli: Cli, out: &mut Vec<u8>) -> Result<Verdict> {
    let limits = Limits::default();
    match cli.command {
        Command::Canon {
            path,
            root,
            strict_underflow,
            stdin,
        } => {
            let root = parse_root(root.as_deref())?;
            let inputs = gather_inputs(path.as_deref(), stdin, limits)?;
            let resolved = inputs
                .iter()
                .map(|raw| resolve(raw, root.as_ref(), limits))
                .collect::<Result<Vec<_>>>()?;
            for (raw, canonical) in inputs.iter().zip(&resolved) {
                if strict_underflow {
                    let climbs = canonicalize_reporting(raw).underflows;
                    if climbs > 0 {
                        eprintln!(
                            "warning: {climbs} '..' component(s) above the root in {:?}",
                            raw.to_string()
                        );
                    }
                }
                out.extend_from_slice(canonical.as_bytes());
                out.push(b'\n');
            }
            Ok(Verdict::Clean)
        }
        Command::Check {
            path,
            whitelist,
            root,
            canonicalize_entries,
            stdin,
        } => {
            let root = parse_root(root.as_deref())?;
            let source = std::fs::read(&whitelist)
                .with_context(|| format!("reading whitelist {}", whitelist.display()))?;
            let policy = if canonicalize_entries {
                EntryPolicy::Canonicalize
            } else {
                EntryPolicy::Reject
            };
            let whitelist = load_whitelist(&source, limits, policy)
                .with_context(|| format!("loading whitelist {}", whitelist.display()))?;
            let inputs = gather_inputs(path.as_deref(), stdin, limits)?;
            let resolved = inputs
                .iter()
                .map(|raw| resolve(raw, root.as_ref(), limits))
                .collect::<Result<Vec<_>>>()?;
            let mut verdict = Verdict::Clean;
            for canonical in &resolved {
                if whitelist_contains(&whitelist, canonical) {
                    line(out, b"ALLOW ", canonical);
                } else {
                    line(out, b"DENY ", canonical);
                    verdict = Verdict::Denied;
                }
            }
            Ok(verdict)
        }
        Command::Verify {
            max_len,
            alphabet,
            target,
            format,
        } => {
            let alphabet = os_bytes(&alphabet);
            for needed in *b"/." {
                if !alphabet.contains(&needed) {
                    bail!("alphabet must contain {:?} and {:?}", '/', '.');
                }
            }
            let spec = EnumerationSpec::new(alphabet, max_len)?;
            let target = target
                .map(|t| CanonicalPath::parse(os_bytes(&t)).context("--target must be canonical"))
                .transpose()?;
            let start = Instant::now();
            match target {
                None => {
                    let report = verify_no_residue(&spec)?;
                    let elapsed = start.elapsed();
                    report::no_residue(out, format.into(), &spec, &report, elapsed);
                    Ok(if report.violations.is_empty() {
                        Verdict::Clean
                    } else {
                        Verdict::Denied
                    })
                }
                Some(target) => {
                    let report = preimages_of(&spec, &target)?;
                    let elapsed = start.elapsed();
                    report::preimages(out, format.into(), &spec, &target, &report, elapsed);
                    Ok(Verdict::Clean)
                }
            }
        }
        Command::Diff { corpus, format } => {
            let source = std::fs::read(&corpus)
                .with_context(|| format!("reading corpus {}", corpus.display()))?;
            let inputs = load_corpus(&source, limits)
                .with_context(|| format!("loading corpus {}", corpus.display()))?;
            let start = Instant::now();
            let records = run_differential(&inputs, &DifferentialConfig::default());
            let elapsed = start.elapsed();
            report::divergences(out, format.into(), inputs.len(), &records, elapsed);
            Ok(if records.iter().any(|r| !r.residue_found.is_empty()) {
                Verdict::Denied
            } else {
                Verdict::Clean
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap exits 0 for --help/--version and 2 for usage errors
        Err(e) => e.exit(),
    };
    let mut out = Vec::new();
    let code = match run(cli, &mut out) {
        Ok(Verdict::Clean) => 0,
        Ok(Verdict::Denied) => 1,
        Err(e) => {
            eprintln!("pathguard: {e:#}");
            return ExitCode::from(2);
        }
    };
    let mut stdout = io::stdout().lock();
    if stdout.write_all(&out).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
