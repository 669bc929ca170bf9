//! Shared domain types: validated raw input, tokens, the component stack,
//! canonical paths and the whitelist store.

use std::collections::BTreeSet;
use std::fmt;

use crate::canon::canonicalize;
use crate::error::{Error, Result};

/// Default upper bound on the length of a user-supplied path (Linux `PATH_MAX`).
pub const DEFAULT_MAX_PATH_LEN: usize = 4096;

/// Validation limits applied to untrusted input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    max_path_len: usize,
}

impl Limits {
    pub fn new(max_path_len: usize) -> Result<Self> {
        if max_path_len == 0 {
            return Err(Error::InvalidLimits);
        }
        Ok(Self { max_path_len })
    }

    pub fn max_path_len(&self) -> usize {
        self.max_path_len
    }
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_path_len: DEFAULT_MAX_PATH_LEN,
        }
    }
}

/// An untrusted path that has passed length and NUL checks.
///
/// The bytes are opaque: no decoding, no Unicode normalization, and `\` is an
/// ordinary filename byte.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RawPathString(Vec<u8>);

impl RawPathString {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }
}

impl fmt::Display for RawPathString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.0))
    }
}

/// Checks `bytes` against `limits` and wraps them as a [`RawPathString`].
///
/// NUL is rejected outright, never truncated at.
pub fn validate_raw(bytes: impl AsRef<[u8]>, limits: Limits) -> Result<RawPathString> {
    let bytes = bytes.as_ref();
    if bytes.len() > limits.max_path_len {
        return Err(Error::PathTooLong {
            len: bytes.len(),
            max: limits.max_path_len,
        });
    }
    if let Some(offset) = bytes.iter().position(|&b| b == 0) {
        return Err(Error::EmbeddedNul { offset });
    }
    Ok(RawPathString(bytes.to_vec()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Normal,
    Dot,
    DotDot,
}

/// One component of a path: a non-empty run of bytes without `/`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathToken {
    text: Vec<u8>,
    kind: TokenKind,
}

impl PathToken {
    /// Returns `None` for an empty slice or one containing `/`.
    pub fn new(text: &[u8]) -> Option<Self> {
        if text.is_empty() || text.contains(&b'/') {
            return None;
        }
        let kind = match text {
            b"." => TokenKind::Dot,
            b".." => TokenKind::DotDot,
            _ => TokenKind::Normal,
        };
        Some(Self {
            text: text.to_vec(),
            kind,
        })
    }

    pub fn text(&self) -> &[u8] {
        &self.text
    }

    pub fn kind(&self) -> TokenKind {
        self.kind
    }
}

impl fmt::Display for PathToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.text))
    }
}

/// Stack of `Normal` components, bottom to top.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComponentStack {
    items: Vec<PathToken>,
}

impl ComponentStack {
    pub fn new() -> Self {
        Self::default()
    }

    /// Pushes a `Normal` token. `Dot` and `DotDot` tokens are never stored;
    /// passing one returns it back as an error.
    pub fn push(&mut self, token: PathToken) -> std::result::Result<(), PathToken> {
        if token.kind() != TokenKind::Normal {
            return Err(token);
        }
        self.items.push(token);
        Ok(())
    }

    pub fn pop(&mut self) -> Option<PathToken> {
        self.items.pop()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[PathToken] {
        &self.items
    }
}

/// An absolute path with no empty, `.` or `..` components and no trailing
/// separator (the root `/` excepted).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalPath(Vec<u8>);

impl CanonicalPath {
    pub fn root() -> Self {
        Self(b"/".to_vec())
    }

    /// Accepts `bytes` only if they are already in canonical form.
    pub fn parse(bytes: impl AsRef<[u8]>) -> Result<Self> {
        let bytes = bytes.as_ref();
        if is_canonical_form(bytes) {
            Ok(Self(bytes.to_vec()))
        } else {
            Err(Error::NotCanonical(
                String::from_utf8_lossy(bytes).into_owned(),
            ))
        }
    }

    /// Caller guarantees `bytes` is canonical. Checked in debug builds.
    pub(crate) fn from_canonical_bytes(bytes: Vec<u8>) -> Self {
        debug_assert!(
            is_canonical_form(&bytes),
            "{:?}",
            String::from_utf8_lossy(&bytes)
        );
        Self(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_root(&self) -> bool {
        self.0 == b"/"
    }

    /// Component sequence; empty for the root.
    pub fn components(&self) -> impl Iterator<Item = &[u8]> {
        self.0[1..].split(|&b| b == b'/').filter(|c| !c.is_empty())
    }
}

impl AsRef<[u8]> for CanonicalPath {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for CanonicalPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.0))
    }
}

/// Structural canonical-form check, independent of the canonicalizer.
pub(crate) fn is_canonical_form(bytes: &[u8]) -> bool {
    match bytes {
        [b'/'] => true,
        [b'/', rest @ ..] => rest
            .split(|&b| b == b'/')
            .all(|c| !c.is_empty() && c != b"." && c != b".." && !c.contains(&0)),
        _ => false,
    }
}

/// How [`load_whitelist`] treats entries that are not already canonical.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum EntryPolicy {
    #[default]
    Reject,
    Canonicalize,
}

/// A set of canonical paths; membership is exact byte equality.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Whitelist {
    entries: BTreeSet<CanonicalPath>,
}

impl Whitelist {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, path: CanonicalPath) -> bool {
        self.entries.insert(path)
    }

    pub fn contains(&self, path: &CanonicalPath) -> bool {
        self.entries.contains(path)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CanonicalPath> {
        self.entries.iter()
    }
}

impl FromIterator<CanonicalPath> for Whitelist {
    fn from_iter<I: IntoIterator<Item = CanonicalPath>>(iter: I) -> Self {
        Self {
            entries: iter.into_iter().collect(),
        }
    }
}

pub fn whitelist_contains(whitelist: &Whitelist, path: &CanonicalPath) -> bool {
    whitelist.contains(path)
}

/// Yields `(line_number, content)` for every non-blank, non-comment line of a
/// line-oriented config source. Accepts `\n` and `\r\n`; strips spaces and
/// tabs at both ends. Line numbers start at 1.
pub fn config_lines(source: &[u8]) -> impl Iterator<Item = (usize, &[u8])> {
    source
        .split(|&b| b == b'\n')
        .enumerate()
        .filter_map(|(idx, line)| {
            let line = line.strip_suffix(b"\r").unwrap_or(line);
            let line = trim_horizontal(line);
            if line.is_empty() || line[0] == b'#' {
                None
            } else {
                Some((idx + 1, line))
            }
        })
}

fn trim_horizontal(mut line: &[u8]) -> &[u8] {
    while let [b' ' | b'\t', rest @ ..] = line {
        line = rest;
    }
    while let [rest @ .., b' ' | b'\t'] = line {
        line = rest;
    }
    line
}

/// Parses a whitelist file. Each entry must already be a fixpoint of
/// canonicalization unless `policy` is [`EntryPolicy::Canonicalize`].
pub fn load_whitelist(source: &[u8], limits: Limits, policy: EntryPolicy) -> Result<Whitelist> {
    let mut whitelist = Whitelist::new();
    for (line, text) in config_lines(source) {
        let raw = validate_raw(text, limits).map_err(|e| e.at_line(line))?;
        let canonical = canonicalize(&raw);
        if canonical.as_bytes() != raw.as_bytes() && policy == EntryPolicy::Reject {
            return Err(Error::NonCanonicalEntry {
                line,
                entry: raw.to_string(),
                canonical: canonical.to_string(),
            });
        }
        whitelist.insert(canonical);
    }
    Ok(whitelist)
}
