//! The stack-based canonicalizer and the whitelist check built on it.
//!
//! Input is split on runs of `/`. Each `Normal` component is pushed, `.` is
//! skipped, and `..` pops the most recent component (or is skipped when the
//! stack is empty, so nothing climbs above the root). The stack is then
//! rendered as `/` followed by its components joined with `/`.

use crate::error::Result;
use crate::model::{
    validate_raw, whitelist_contains, CanonicalPath, ComponentStack, Limits, PathToken,
    RawPathString, TokenKind, Whitelist,
};

/// Splits on maximal runs of `/`; never yields an empty token.
pub fn tokenize(raw: &RawPathString) -> Vec<PathToken> {
    tokens(raw.as_bytes()).collect()
}

fn tokens(bytes: &[u8]) -> impl Iterator<Item = PathToken> + '_ {
    bytes.split(|&b| b == b'/').filter_map(PathToken::new)
}

/// Renders a stack as an absolute path. The empty stack is `/`.
pub fn stack_to_string(stack: &ComponentStack) -> CanonicalPath {
    let items = stack.items();
    let mut out = Vec::with_capacity(1 + items.iter().map(|t| t.text().len() + 1).sum::<usize>());
    out.push(b'/');
    for (i, item) in items.iter().enumerate() {
        out.extend_from_slice(item.text());
        if i != items.len() - 1 {
            out.push(b'/');
        }
    }
    CanonicalPath::from_canonical_bytes(out)
}

/// Outcome of a single token against the stack.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Pushed,
    Popped,
    Skipped,
    Underflow,
}

fn apply(stack: &mut ComponentStack, token: PathToken) -> Step {
    match token.kind() {
        TokenKind::DotDot => {
            if stack.pop().is_some() {
                Step::Popped
            } else {
                Step::Underflow
            }
        }
        TokenKind::Dot => Step::Skipped,
        TokenKind::Normal => {
            // kind is Normal, push cannot fail
            let _ = stack.push(token);
            Step::Pushed
        }
    }
}

pub fn canonicalize(raw: &RawPathString) -> CanonicalPath {
    canonicalize_bytes(raw.as_bytes())
}

/// Canonicalizes bytes that are already known to be well-formed (for example
/// the output of another routine that was fed a validated path).
pub(crate) fn canonicalize_bytes(bytes: &[u8]) -> CanonicalPath {
    let mut stack = ComponentStack::new();
    for token in tokens(bytes) {
        apply(&mut stack, token);
    }
    stack_to_string(&stack)
}

/// Result of canonicalization with underflow accounting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonicalized {
    pub path: CanonicalPath,
    /// Number of `..` components that arrived while the stack was empty.
    /// A non-zero count usually means someone tried to climb out of the root.
    pub underflows: usize,
}

/// Same as [`canonicalize`], also counting `..` components skipped on an
/// empty stack. The count never affects the returned path.
pub fn canonicalize_reporting(raw: &RawPathString) -> Canonicalized {
    let mut stack = ComponentStack::new();
    let mut underflows = 0;
    for token in tokens(raw.as_bytes()) {
        if apply(&mut stack, token) == Step::Underflow {
            underflows += 1;
        }
    }
    Canonicalized {
        path: stack_to_string(&stack),
        underflows,
    }
}

/// `true` iff the canonical form of `raw` is listed in `whitelist`.
/// An empty whitelist denies everything.
pub fn sanitize(raw: &RawPathString, whitelist: &Whitelist) -> bool {
    whitelist_contains(whitelist, &canonicalize(raw))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub iteration: usize,
    pub token: PathToken,
    pub stack_after: ComponentStack,
}

/// Stack state after every processed token.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CanonicalizationTrace {
    pub snapshots: Vec<Snapshot>,
}

impl CanonicalizationTrace {
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }
}

pub fn canonicalize_traced(raw: &RawPathString) -> (CanonicalPath, CanonicalizationTrace) {
    let mut stack = ComponentStack::new();
    let mut trace = CanonicalizationTrace::default();
    for (iteration, token) in tokens(raw.as_bytes()).enumerate() {
        apply(&mut stack, token.clone());
        trace.snapshots.push(Snapshot {
            iteration,
            token,
            stack_after: stack.clone(),
        });
    }
    (stack_to_string(&stack), trace)
}

/// Canonicalizes `root + "/" + raw`.
///
/// The result is not confined to `root`: `..` components in `raw` can climb
/// out of it. Callers still need the whitelist or a prefix check.
pub fn canonicalize_jailed(
    root: &CanonicalPath,
    raw: &RawPathString,
    limits: Limits,
) -> Result<CanonicalPath> {
    let mut joined = Vec::with_capacity(root.len() + 1 + raw.len());
    joined.extend_from_slice(root.as_bytes());
    joined.push(b'/');
    joined.extend_from_slice(raw.as_bytes());
    let joined = validate_raw(joined, limits)?;
    Ok(canonicalize(&joined))
}
