//! Helpers shared by the lemma and acceptance suites.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use pathguard::{canonicalize_traced, validate_raw, CanonicalPath, Limits, RawPathString};

pub fn raw(bytes: impl AsRef<[u8]>) -> RawPathString {
    validate_raw(bytes, Limits::default()).unwrap()
}

/// All strings over `alphabet` of length `0..=max_len`, by plain recursion.
/// Kept separate from the library enumerator so the two can cross-check.
pub fn for_each_string(alphabet: &[u8], max_len: usize, mut visit: impl FnMut(&[u8])) {
    fn go(alphabet: &[u8], left: usize, buf: &mut Vec<u8>, visit: &mut impl FnMut(&[u8])) {
        visit(buf);
        if left == 0 {
            return;
        }
        for &c in alphabet {
            buf.push(c);
            go(alphabet, left - 1, buf, visit);
            buf.pop();
        }
    }
    go(alphabet, max_len, &mut Vec::new(), &mut visit);
}

/// Component-level loop invariant of the stack algorithm: after every token,
/// each stacked component past the longest common prefix with the final
/// result is popped by some later token.
pub fn trace_invariant_holds(input: &RawPathString) -> bool {
    let (result, trace) = canonicalize_traced(input);
    let finals: Vec<&[u8]> = result.components().collect();
    let stacks: Vec<Vec<&[u8]>> = trace
        .snapshots
        .iter()
        .map(|s| s.stack_after.items().iter().map(|t| t.text()).collect())
        .collect();
    stacks_satisfy_invariant(&finals, &stacks)
}

pub fn stacks_satisfy_invariant(finals: &[&[u8]], stacks: &[Vec<&[u8]>]) -> bool {
    stacks.iter().enumerate().all(|(k, items)| {
        let common = items
            .iter()
            .zip(finals)
            .take_while(|(item, f)| item == f)
            .count();
        (common..items.len()).all(|pos| stacks[k + 1..].iter().any(|later| later.len() <= pos))
    })
}

const NAMES: &[&str] = &["a", "b", "c", "home", "user", ".ssh", "etc..", "...", "x.y"];

pub fn random_canonical(rng: &mut impl Rng) -> CanonicalPath {
    let depth = rng.gen_range(0..=5);
    let mut s = String::new();
    for _ in 0..depth {
        s.push('/');
        s.push_str(NAMES.choose(rng).unwrap());
    }
    if s.is_empty() {
        s.push('/');
    }
    CanonicalPath::parse(s).unwrap()
}

/// Applies 1..=4 equivalence-preserving edits to `target`: duplicate a `/`,
/// insert `/./`, insert `/<fresh>/../`, or prepend `./` / `../`.
pub fn mutate(target: &CanonicalPath, rng: &mut impl Rng) -> Vec<u8> {
    let mut s = target.as_bytes().to_vec();
    for _ in 0..rng.gen_range(1..=4) {
        let slashes: Vec<usize> = (0..s.len()).filter(|&i| s[i] == b'/').collect();
        let edit = rng.gen_range(0..4);
        match (edit, slashes.choose(rng)) {
            (0, Some(&i)) => {
                s.insert(i, b'/');
            }
            (1, Some(&i)) => {
                s.splice(i..i + 1, *b"/./");
            }
            (2, Some(&i)) => {
                let fresh = format!("/{}/../", NAMES.choose(rng).unwrap());
                s.splice(i..i + 1, fresh.into_bytes());
            }
            _ => {
                let prefix: &[u8] = if rng.gen_bool(0.5) { b"./" } else { b"../" };
                s.splice(0..0, prefix.iter().copied());
            }
        }
    }
    s
}
