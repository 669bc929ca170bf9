//! Lexical path canonicalization and exact-match whitelisting to stop
//! directory traversal.
//!
//! ```
//! use pathguard::{canonicalize, sanitize, validate_raw, CanonicalPath, Limits, Whitelist};
//!
//! let raw = validate_raw("./a//b/../b/c/", Limits::default()).unwrap();
//! assert_eq!(canonicalize(&raw).to_string(), "/a/b/c");
//!
//! let whitelist: Whitelist = [CanonicalPath::parse("/a/b/c").unwrap()].into_iter().collect();
//! assert!(sanitize(&raw, &whitelist));
//! ```
//!
//! The crate also ships the tooling used to check the canonicalizer: a
//! rewriting-based reference implementation ([`rewrite`]), a port of a
//! known-flawed legacy routine ([`baseline`]) and exhaustive sweeps over small
//! alphabets ([`verify`]).

pub mod algebra;
pub mod baseline;
pub mod canon;
mod error;
pub mod model;
pub mod rewrite;
pub mod verify;

pub use canon::{
    canonicalize, canonicalize_jailed, canonicalize_reporting, canonicalize_traced, sanitize,
    stack_to_string, tokenize, CanonicalizationTrace, Canonicalized, Snapshot,
};
pub use error::{Error, Result};
pub use model::{
    load_whitelist, validate_raw, whitelist_contains, CanonicalPath, ComponentStack, EntryPolicy,
    Limits, PathToken, RawPathString, TokenKind, Whitelist, DEFAULT_MAX_PATH_LEN,
};
pub use rewrite::rewrite_canonicalize;
