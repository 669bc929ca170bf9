//! Exhaustive verification over a bounded alphabet.
//!
//! Every string of length `0..=max_len` over the alphabet is fed to the
//! canonicalizer. Two checks are offered: a sweep asserting that no output
//! carries traversal residue, and the preimage set of a target path.
//! Strings are visited in shortlex order (by length, then by alphabet
//! position), and parallel runs are merged back into that order.

use std::fmt;

use rayon::prelude::*;

use crate::canon::canonicalize_bytes;
use crate::error::{Error, Result};
use crate::model::CanonicalPath;
use crate::rewrite::rewrite_canonicalize;

pub const DEFAULT_ALPHABET: &[u8] = b"/.abc";
pub const DEFAULT_MAX_LEN: usize = 8;
/// Ceiling on the number of strings a single enumeration may visit. Large
/// enough for the default alphabet at length 12 (about 3 * 10^8 strings).
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationSpec {
    alphabet: Vec<u8>,
    max_len: usize,
    budget: u64,
    parallel: bool,
}

impl EnumerationSpec {
    /// Alphabet bytes must be distinct and non-NUL.
    pub fn new(alphabet: impl Into<Vec<u8>>, max_len: usize) -> Result<Self> {
        let alphabet = alphabet.into();
        if alphabet.contains(&0) {
            return Err(Error::InvalidAlphabet("alphabet contains NUL".into()));
        }
        let mut seen = [false; 256];
        for &b in &alphabet {
            if std::mem::replace(&mut seen[b as usize], true) {
                return Err(Error::InvalidAlphabet(format!(
                    "duplicate character {:?}",
                    b as char
                )));
            }
        }
        Ok(Self {
            alphabet,
            max_len,
            budget: DEFAULT_BUDGET,
            parallel: true,
        })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// Run sweeps on the calling thread only.
    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }

    pub fn alphabet(&self) -> &[u8] {
        &self.alphabet
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Number of strings an enumeration visits, or `BudgetExceeded`.
    pub fn count(&self) -> Result<u64> {
        let exceeded = |requested: String| Error::BudgetExceeded {
            requested,
            budget: self.budget,
        };
        let base = self.alphabet.len() as u64;
        let mut total: u64 = 0;
        let mut power: u64 = 1;
        for k in 0..=self.max_len {
            if k > 0 {
                power = power
                    .checked_mul(base)
                    .ok_or_else(|| exceeded(format!("more than {}", u64::MAX)))?;
            }
            total = total
                .checked_add(power)
                .ok_or_else(|| exceeded(format!("more than {}", u64::MAX)))?;
            if total > self.budget {
                return Err(exceeded(format!("at least {total}")));
            }
        }
        Ok(total)
    }

    /// Verification sweeps need both separator and dot in the alphabet.
    fn require_path_alphabet(&self) -> Result<()> {
        for needed in *b"/." {
            if !self.alphabet.contains(&needed) {
                return Err(Error::InvalidAlphabet(format!(
                    "alphabet must contain {:?}",
                    needed as char
                )));
            }
        }
        Ok(())
    }

    /// Sort key giving shortlex order under this alphabet.
    fn shortlex_key(&self, s: &[u8]) -> (usize, Vec<u8>) {
        let mut rank = [0u8; 256];
        for (i, &b) in self.alphabet.iter().enumerate() {
            rank[b as usize] = i as u8;
        }
        (s.len(), s.iter().map(|&b| rank[b as usize]).collect())
    }
}

impl Default for EnumerationSpec {
    fn default() -> Self {
        Self::new(DEFAULT_ALPHABET, DEFAULT_MAX_LEN).expect("default alphabet is valid")
    }
}

/// Visits every string of exactly `len` bytes starting with `prefix`, in
/// shortlex order. `buf` is scratch space.
fn walk_len(
    alphabet: &[u8],
    prefix: &[u8],
    len: usize,
    buf: &mut Vec<u8>,
    visit: &mut impl FnMut(&[u8]),
) {
    if len < prefix.len() {
        return;
    }
    if alphabet.is_empty() && len > prefix.len() {
        return;
    }
    let free = len - prefix.len();
    let mut digits = vec![0usize; free];
    buf.clear();
    buf.extend_from_slice(prefix);
    buf.extend(std::iter::repeat_n(
        alphabet.first().copied().unwrap_or(0),
        free,
    ));
    loop {
        visit(buf);
        // odometer increment, rightmost digit fastest
        let mut pos = free;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < alphabet.len() {
                buf[prefix.len() + pos] = alphabet[digits[pos]];
                break;
            }
            digits[pos] = 0;
            buf[prefix.len() + pos] = alphabet[0];
        }
    }
}

/// Visits every string of length `0..=max_len` exactly once, in shortlex
/// order, on the calling thread. Returns the number of strings visited.
pub fn enumerate_all(spec: &EnumerationSpec, mut visit: impl FnMut(&[u8])) -> Result<u64> {
    let expected = spec.count()?;
    let mut visited = 0u64;
    let mut buf = Vec::with_capacity(spec.max_len);
    for len in 0..=spec.max_len {
        walk_len(&spec.alphabet, &[], len, &mut buf, &mut |s| {
            visited += 1;
            visit(s);
        });
    }
    debug_assert_eq!(visited, expected);
    Ok(visited)
}

/// Strings that passed a check, with what the check returned for each.
pub type Hits<T> = Vec<(Vec<u8>, T)>;

/// Applies `check` to every enumerated string, possibly from several threads,
/// and returns the hits in shortlex order together with the visit count.
///
/// Work is sharded by first character. With `spec.sequential()` everything
/// runs on the calling thread.
pub fn enumerate_collect<T, F>(spec: &EnumerationSpec, check: F) -> Result<(u64, Hits<T>)>
where
    T: Send,
    F: Fn(&[u8]) -> Option<T> + Sync,
{
    let expected = spec.count()?;

    if !spec.parallel {
        let mut hits = Vec::new();
        let visited = enumerate_all(spec, |s| {
            if let Some(t) = check(s) {
                hits.push((s.to_vec(), t));
            }
        })?;
        return Ok((visited, hits));
    }

    let mut hits = Vec::new();
    let mut visited = 1u64;
    if let Some(t) = check(&[]) {
        hits.push((Vec::new(), t));
    }
    let shards: Vec<(u64, Hits<T>)> = spec
        .alphabet
        .par_iter()
        .map(|&first| {
            let mut local = Vec::new();
            let mut count = 0u64;
            let mut buf = Vec::with_capacity(spec.max_len);
            for len in 1..=spec.max_len {
                walk_len(&spec.alphabet, &[first], len, &mut buf, &mut |s| {
                    count += 1;
                    if let Some(t) = check(s) {
                        local.push((s.to_vec(), t));
                    }
                });
            }
            (count, local)
        })
        .collect();
    for (count, local) in shards {
        visited += count;
        hits.extend(local);
    }
    debug_assert_eq!(visited, expected);
    hits.sort_by_cached_key(|(s, _)| spec.shortlex_key(s));
    Ok((visited, hits))
}

/// Kind of residue found in a canonicalizer output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Offense {
    DoubleSlash,
    SlashDotSlash,
    SlashDotDotSlash,
    MissingLeadingSlash,
    TrailingSlash,
}

impl Offense {
    pub fn as_str(&self) -> &'static str {
        match self {
            Offense::DoubleSlash => "//",
            Offense::SlashDotSlash => "/./",
            Offense::SlashDotDotSlash => "/../",
            Offense::MissingLeadingSlash => "missing-leading-slash",
            Offense::TrailingSlash => "trailing-slash",
        }
    }
}

impl fmt::Display for Offense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueViolation {
    pub input: Vec<u8>,
    pub output: Vec<u8>,
    pub offending: Offense,
}

fn contains(hay: &[u8], needle: &[u8]) -> bool {
    hay.windows(needle.len()).any(|w| w == needle)
}

/// Residue in a supposedly canonical output.
///
/// The substring checks run against `output + "/"` so that a trailing `.` or
/// `..` component (`/a/..`) is caught as `/../`. The root `/` is clean.
pub fn residue_of(output: &[u8]) -> Vec<Offense> {
    let mut found = Vec::new();
    if output.first() != Some(&b'/') {
        found.push(Offense::MissingLeadingSlash);
    }
    if output == b"/" {
        return found;
    }
    if output.last() == Some(&b'/') {
        found.push(Offense::TrailingSlash);
    }
    let mut probe = output.to_vec();
    probe.push(b'/');
    for (offense, needle) in [
        (Offense::DoubleSlash, &b"//"[..]),
        (Offense::SlashDotSlash, b"/./"),
        (Offense::SlashDotDotSlash, b"/../"),
    ] {
        // a trailing slash would otherwise also show up as "//"
        if offense == Offense::DoubleSlash && !contains(output, needle) {
            continue;
        }
        if contains(&probe, needle) {
            found.push(offense);
        }
    }
    found
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoResidueReport {
    pub visited: u64,
    pub violations: Vec<ResidueViolation>,
}

/// Canonicalizes every enumerated string and reports each residue found.
/// An empty `violations` list certifies the property over the whole domain.
pub fn verify_no_residue(spec: &EnumerationSpec) -> Result<NoResidueReport> {
    verify_with(spec, canonicalize_bytes)
}

/// [`verify_no_residue`] against an arbitrary canonicalizer under test.
pub fn verify_with<C, F>(spec: &EnumerationSpec, canonicalizer: F) -> Result<NoResidueReport>
where
    C: AsRef<[u8]>,
    F: Fn(&[u8]) -> C + Sync,
{
    spec.require_path_alphabet()?;
    let (visited, hits) = enumerate_collect(spec, |input| {
        let output = canonicalizer(input);
        let offenses = residue_of(output.as_ref());
        (!offenses.is_empty()).then(|| (output.as_ref().to_vec(), offenses))
    })?;
    let violations = hits
        .into_iter()
        .flat_map(|(input, (output, offenses))| {
            offenses.into_iter().map(move |offending| ResidueViolation {
                input: input.clone(),
                output: output.clone(),
                offending,
            })
        })
        .collect();
    Ok(NoResidueReport {
        visited,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreimageReport {
    pub visited: u64,
    /// Shortlex-ordered, no duplicates.
    pub preimages: Vec<Vec<u8>>,
}

/// Every enumerated string whose canonical form is `target`. Each hit is
/// cross-checked against the rewriting oracle; a disagreement is an error.
pub fn preimages_of(spec: &EnumerationSpec, target: &CanonicalPath) -> Result<PreimageReport> {
    spec.require_path_alphabet()?;
    let (visited, hits) = enumerate_collect(spec, |input| {
        (canonicalize_bytes(input) == *target).then_some(())
    })?;
    let mut preimages = Vec::with_capacity(hits.len());
    for (input, ()) in hits {
        let raw = crate::model::validate_raw(&input, crate::model::Limits::default())?;
        let oracle = rewrite_canonicalize(&raw);
        if oracle != *target {
            return Err(Error::OracleMismatch {
                input: String::from_utf8_lossy(&input).into_owned(),
                stack: target.to_string(),
                oracle: oracle.to_string(),
            });
        }
        preimages.push(input);
    }
    Ok(PreimageReport { visited, preimages })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn collect(spec: &EnumerationSpec) -> Vec<String> {
        let mut out = Vec::new();
        enumerate_all(spec, |s| out.push(String::from_utf8(s.to_vec()).unwrap())).unwrap();
        out
    }

    #[test]
    fn enumerate_examples() {
        let spec = EnumerationSpec::new("a", 2).unwrap();
        assert_eq!(collect(&spec), ["", "a", "aa"]);
        let spec = EnumerationSpec::new("a/", 1).unwrap();
        assert_eq!(collect(&spec), ["", "a", "/"]);
        let spec = EnumerationSpec::default();
        // (5^9 - 1) / 4
        assert_eq!(enumerate_all(&spec, |_| {}).unwrap(), (5u64.pow(9) - 1) / 4);
        assert_eq!(spec.count().unwrap(), 488_281);
    }

    #[test]
    fn enumerate_is_shortlex_without_duplicates() {
        let spec = EnumerationSpec::new("ba/", 4).unwrap();
        let all = collect(&spec);
        assert_eq!(all.len() as u64, spec.count().unwrap());
        assert_eq!(all.iter().collect::<HashSet<_>>().len(), all.len());
        let rank = |c: char| "ba/".find(c).unwrap();
        for pair in all.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let ka: Vec<_> = a.chars().map(rank).collect();
            let kb: Vec<_> = b.chars().map(rank).collect();
            assert!((a.len(), ka) < (b.len(), kb), "{a:?} !< {b:?}");
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let spec = EnumerationSpec::new("/.ab", 6).unwrap();
        let pick =
            |s: &[u8]| (s.len().is_multiple_of(3) && s.first() != Some(&b'a')).then_some(s.len());
        let par = enumerate_collect(&spec, pick).unwrap();
        let seq = enumerate_collect(&spec.clone().sequential(), pick).unwrap();
        assert_eq!(par, seq);
    }

    #[test]
    fn empty_alphabet_visits_only_empty_string() {
        let spec = EnumerationSpec::new("", 5).unwrap();
        assert_eq!(collect(&spec), [""]);
    }

    #[test]
    fn budget_enforced() {
        let spec = EnumerationSpec::new("ab", 3).unwrap().with_budget(14);
        assert!(matches!(
            spec.count(),
            Err(Error::BudgetExceeded { budget: 14, .. })
        ));
        assert!(enumerate_all(&spec, |_| {}).is_err());
        assert_eq!(spec.with_budget(15).count().unwrap(), 15);
        let huge = EnumerationSpec::new(DEFAULT_ALPHABET, 64)
            .unwrap()
            .with_budget(u64::MAX);
        assert!(matches!(huge.count(), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn alphabet_validation() {
        assert!(EnumerationSpec::new("aa", 1).is_err());
        assert!(EnumerationSpec::new(b"/.\0".to_vec(), 1).is_err());
        let spec = EnumerationSpec::new("ab", 3).unwrap();
        assert!(matches!(
            verify_no_residue(&spec),
            Err(Error::InvalidAlphabet(_))
        ));
    }

    #[test]
    fn residue_classification() {
        assert!(residue_of(b"/").is_empty());
        assert!(residue_of(b"/a/b").is_empty());
        assert!(residue_of(b"/a..").is_empty());
        assert_eq!(residue_of(b"a"), [Offense::MissingLeadingSlash]);
        assert_eq!(residue_of(b"/a/"), [Offense::TrailingSlash]);
        assert_eq!(residue_of(b"/a//b"), [Offense::DoubleSlash]);
        assert_eq!(residue_of(b"/a/./b"), [Offense::SlashDotSlash]);
        assert_eq!(residue_of(b"/a/.."), [Offense::SlashDotDotSlash]);
        assert_eq!(residue_of(b"/a/."), [Offense::SlashDotSlash]);
    }

    #[test]
    fn no_residue_examples() {
        let spec = EnumerationSpec::new("/.a", 4).unwrap();
        let report = verify_no_residue(&spec).unwrap();
        assert_eq!(report.visited, 121);
        assert!(report.violations.is_empty());

        let spec = EnumerationSpec::new(DEFAULT_ALPHABET, 0).unwrap();
        let report = verify_no_residue(&spec).unwrap();
        assert_eq!(report.visited, 1);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn sweep_catches_a_broken_canonicalizer() {
        let spec = EnumerationSpec::new("/.a", 3).unwrap();
        let report = verify_with(&spec, |s: &[u8]| s.to_vec()).unwrap();
        let first = &report.violations[0];
        assert_eq!(first.input, b"");
        assert_eq!(first.offending, Offense::MissingLeadingSlash);
        assert!(report
            .violations
            .iter()
            .any(|v| v.input == b"/./" && v.offending == Offense::SlashDotSlash));
    }

    #[test]
    fn preimages_small_brute_force() {
        let spec = EnumerationSpec::new("/.a", 2).unwrap();
        let target = CanonicalPath::parse("/a").unwrap();
        let report = preimages_of(&spec, &target).unwrap();
        assert_eq!(report.visited, 13);
        assert_eq!(
            report.preimages,
            [b"a".to_vec(), b"/a".to_vec(), b"a/".to_vec()]
        );
    }

    #[test]
    fn root_preimages_include_empty_string() {
        let spec = EnumerationSpec::new("/.ab", 3).unwrap();
        let report = preimages_of(&spec, &CanonicalPath::root()).unwrap();
        assert_eq!(report.preimages[0], b"");
    }
}
