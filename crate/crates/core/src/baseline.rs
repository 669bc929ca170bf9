//! Port of the `de_dotdot` routine from ACME Labs' thttpd / mini_httpd, plus a
//! differential runner comparing it with the stack canonicalizer.
//!
//! `de_dotdot` rewrites the path in place with a fixed sequence of substring
//! removals. It is kept byte-for-byte faithful to the C original, bugs
//! included; the golden tests pin its behavior.

use std::fmt;

use rayon::prelude::*;

use crate::algebra::is_component_prefix;
use crate::canon::{canonicalize, canonicalize_bytes};
use crate::error::Result;
use crate::model::{config_lines, validate_raw, CanonicalPath, Limits, RawPathString};

fn find_sub(s: &[u8], needle: &[u8]) -> Option<usize> {
    s.windows(needle.len()).position(|w| w == needle)
}

/// Start of the component ending just before `end`, i.e. one past the
/// previous `/`, or `None` when there is no `/` before `end` (C: `cp2 < file`).
fn prev_slash(s: &[u8], end: usize) -> Option<usize> {
    s[..end].iter().rposition(|&b| b == b'/')
}

/// The upstream routine, operating on a copy of `raw`.
///
/// ```c
/// /* Collapse any multiple / sequences. */
/// while ( ( cp = strstr( file, "//") ) != (char*) 0 )
///     {
///     for ( cp2 = cp + 2; *cp2 == '/'; ++cp2 )
///         continue;
///     (void) strcpy( cp + 1, cp2 );
///     }
///
/// /* Remove leading ./ and any /./ sequences. */
/// while ( strncmp( file, "./", 2 ) == 0 )
///     (void) strcpy( file, file + 2 );
/// while ( ( cp = strstr( file, "/./") ) != (char*) 0 )
///     (void) strcpy( cp, cp + 2 );
///
/// /* Alternate between removing leading ../ and removing xxx/../ */
/// for (;;)
///     {
///     while ( strncmp( file, "../", 3 ) == 0 )
///         (void) strcpy( file, file + 3 );
///     cp = strstr( file, "/../" );
///     if ( cp == (char*) 0 )
///         break;
///     for ( cp2 = cp - 1; cp2 >= file && *cp2 != '/'; --cp2 )
///         continue;
///     (void) strcpy( cp2 + 1, cp + 4 );
///     }
///
/// /* Also elide any xxx/.. at the end. */
/// while ( ( l = strlen( file ) ) > 3 &&
///         strcmp( ( cp = file + l - 3 ), "/.." ) == 0 )
///     {
///     for ( cp2 = cp - 1; cp2 >= file && *cp2 != '/'; --cp2 )
///         continue;
///     if ( cp2 < file )
///         break;
///     *cp2 = '\0';
///     }
/// ```
pub fn de_dotdot(raw: &RawPathString) -> Vec<u8> {
    let mut file = raw.as_bytes().to_vec();

    while let Some(cp) = find_sub(&file, b"//") {
        let cp2 = cp + 2 + file[cp + 2..].iter().take_while(|&&b| b == b'/').count();
        file.drain(cp + 1..cp2);
    }

    while file.starts_with(b"./") {
        file.drain(..2);
    }
    while let Some(cp) = find_sub(&file, b"/./") {
        file.drain(cp..cp + 2);
    }

    loop {
        while file.starts_with(b"../") {
            file.drain(..3);
        }
        let Some(cp) = find_sub(&file, b"/../") else {
            break;
        };
        let from = prev_slash(&file, cp).map_or(0, |s| s + 1);
        file.drain(from..cp + 4);
    }

    while file.len() > 3 && file.ends_with(b"/..") {
        let cp = file.len() - 3;
        let Some(cp2) = prev_slash(&file, cp) else {
            break;
        };
        file.truncate(cp2);
    }

    file
}

/// A semantic problem left in the baseline's output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Residue {
    /// `..` anywhere, including inside a name such as `etc..`.
    DotDot,
    DoubleSlash,
    SlashDotSlash,
    SlashDotDotSlash,
    /// Output is an absolute path reaching a protected file from the
    /// filesystem root.
    AbsoluteReach,
}

impl Residue {
    pub fn as_str(&self) -> &'static str {
        match self {
            Residue::DotDot => "..",
            Residue::DoubleSlash => "//",
            Residue::SlashDotSlash => "/./",
            Residue::SlashDotDotSlash => "/../",
            Residue::AbsoluteReach => "absolute-reach",
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivergenceRecord {
    pub input: RawPathString,
    pub baseline_output: Vec<u8>,
    pub canonical_output: CanonicalPath,
    pub residue_found: Vec<Residue>,
}

/// Files the baseline is expected to keep out of reach.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialConfig {
    pub protected: Vec<CanonicalPath>,
}

impl Default for DifferentialConfig {
    fn default() -> Self {
        Self {
            protected: vec![CanonicalPath::parse("/etc/passwd").expect("canonical literal")],
        }
    }
}

/// Residue present in a baseline output.
pub fn baseline_residue(output: &[u8], config: &DifferentialConfig) -> Vec<Residue> {
    let mut found = Vec::new();
    for (residue, needle) in [
        (Residue::DotDot, &b".."[..]),
        (Residue::DoubleSlash, b"//"),
        (Residue::SlashDotSlash, b"/./"),
        (Residue::SlashDotDotSlash, b"/../"),
    ] {
        if find_sub(output, needle).is_some() {
            found.push(residue);
        }
    }
    if output.first() == Some(&b'/') {
        let reached = canonicalize_bytes(output);
        if config
            .protected
            .iter()
            .any(|p| is_component_prefix(p, &reached))
        {
            found.push(Residue::AbsoluteReach);
        }
    }
    found
}

/// Text the baseline output is compared against: the canonical form, minus
/// the root anchor when the input was relative.
fn comparable(input: &RawPathString, canonical: &CanonicalPath) -> Vec<u8> {
    if input.as_bytes().first() == Some(&b'/') {
        canonical.as_bytes().to_vec()
    } else {
        canonical.as_bytes()[1..].to_vec()
    }
}

fn diff_one(input: &RawPathString, config: &DifferentialConfig) -> Option<DivergenceRecord> {
    let baseline_output = de_dotdot(input);
    let canonical_output = canonicalize(input);
    let residue_found = baseline_residue(&baseline_output, config);
    let diverges = baseline_output != comparable(input, &canonical_output);
    (diverges || !residue_found.is_empty()).then(|| DivergenceRecord {
        input: input.clone(),
        baseline_output,
        canonical_output,
        residue_found,
    })
}

/// Runs both implementations over `corpus`, reporting every input where the
/// outputs differ or the baseline leaves residue. Records keep corpus order.
pub fn run_differential(
    corpus: &[RawPathString],
    config: &DifferentialConfig,
) -> Vec<DivergenceRecord> {
    corpus
        .par_iter()
        .filter_map(|input| diff_one(input, config))
        .collect()
}

/// Parses a corpus file: one raw path per line, `#` comments and blank lines
/// skipped.
pub fn load_corpus(source: &[u8], limits: Limits) -> Result<Vec<RawPathString>> {
    config_lines(source)
        .map(|(line, text)| validate_raw(text, limits).map_err(|e| e.at_line(line)))
        .collect()
}
