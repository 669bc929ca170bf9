//! Reference canonicalizer built on string rewriting.
//!
//! Deliberately shares nothing with the token/stack code in [`crate::canon`]:
//! it is the oracle the stack algorithm is checked against. It is slow
//! (quadratic per input) and only meant for tests and verification sweeps.
//!
//! The input is wrapped as `"/" + x + "/"` (leading `/` only when missing),
//! then rules are applied until none matches. At each step the first rule in
//! list order that matches anywhere fires at its leftmost match:
//!
//! 1. `//` → `/`
//! 2. `/./` → `/`
//! 3. `/../` at the very start → `/`
//! 4. `/T/../` → `/` for a component `T` other than `.` and `..`
//!
//! Every rule shortens the string, so the loop ends after at most `len` steps.
//! Finally the trailing `/` is dropped unless the whole string is `/`.

use crate::model::{CanonicalPath, RawPathString};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    CollapseSlash,
    DropDot,
    DotDotAtRoot,
    CancelParent,
}

const RULES: [Rule; 4] = [
    Rule::CollapseSlash,
    Rule::DropDot,
    Rule::DotDotAtRoot,
    Rule::CancelParent,
];

/// Leftmost match of `rule` as the byte range to replace with a single `/`.
fn find(rule: Rule, s: &[u8]) -> Option<(usize, usize)> {
    match rule {
        Rule::CollapseSlash => find_sub(s, b"//").map(|i| (i, i + 2)),
        Rule::DropDot => find_sub(s, b"/./").map(|i| (i, i + 3)),
        Rule::DotDotAtRoot => s.starts_with(b"/../").then_some((0, 4)),
        Rule::CancelParent => {
            let mut start = 0;
            while let Some(off) = s[start..].iter().position(|&b| b == b'/') {
                let i = start + off;
                let Some(len) = s[i + 1..].iter().position(|&b| b == b'/') else {
                    break;
                };
                let j = i + 1 + len;
                let name = &s[i + 1..j];
                if !name.is_empty() && name != b"." && name != b".." && s[j..].starts_with(b"/../")
                {
                    return Some((i, j + 4));
                }
                start = j;
            }
            None
        }
    }
}

fn find_sub(s: &[u8], needle: &[u8]) -> Option<usize> {
    s.windows(needle.len()).position(|w| w == needle)
}

/// Applies one rewrite step. Returns `false` at a fixpoint.
fn step(s: &mut Vec<u8>) -> bool {
    for rule in RULES {
        if let Some((from, to)) = find(rule, s) {
            s.splice(from..to, *b"/");
            return true;
        }
    }
    false
}

pub fn rewrite_canonicalize(raw: &RawPathString) -> CanonicalPath {
    let bytes = raw.as_bytes();
    let mut s = Vec::with_capacity(bytes.len() + 2);
    if bytes.first() != Some(&b'/') {
        s.push(b'/');
    }
    s.extend_from_slice(bytes);
    s.push(b'/');

    while step(&mut s) {}

    if s.len() > 1 {
        s.pop();
    }
    CanonicalPath::from_canonical_bytes(s)
}
