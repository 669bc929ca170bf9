//! Character- and component-level relations between path strings.

use crate::error::{Error, Result};
use crate::model::CanonicalPath;

/// Byte-wise prefix: `p1` is no longer than `p2` and agrees with it on every
/// position of `p1`. Ignores component boundaries, so `/ab` is a prefix of `/abc`.
pub fn is_char_prefix(p1: &[u8], p2: &[u8]) -> bool {
    p1.len() <= p2.len() && p1.iter().zip(p2).all(|(a, b)| a == b)
}

/// `p1`'s components form a leading run of `p2`'s components.
pub fn is_component_prefix(p1: &CanonicalPath, p2: &CanonicalPath) -> bool {
    let mut rest = p2.components();
    p1.components().all(|c| rest.next() == Some(c))
}

/// Equal length and mutual prefixes, i.e. plain string equality. No semantic
/// normalization is involved: `//a` and `/a` are not equivalent here.
pub fn are_equivalent(p1: &[u8], p2: &[u8]) -> bool {
    p1.len() == p2.len() && is_char_prefix(p1, p2) && is_char_prefix(p2, p1)
}

/// `true` iff `"/" + name + "/"` occurs in `p + "/"`.
///
/// The extra trailing `/` lets the last component match, so `/etc/passwd`
/// contains `passwd`. A bare substring hit is not enough: `/my_dir1/` does
/// not contain `my_dir`.
pub fn contains_component(p: &[u8], name: &[u8]) -> Result<bool> {
    if name.is_empty() || name.contains(&b'/') {
        return Err(Error::InvalidName(
            String::from_utf8_lossy(name).into_owned(),
        ));
    }
    let mut needle = Vec::with_capacity(name.len() + 2);
    needle.push(b'/');
    needle.extend_from_slice(name);
    needle.push(b'/');

    let mut haystack = Vec::with_capacity(p.len() + 1);
    haystack.extend_from_slice(p);
    haystack.push(b'/');

    Ok(haystack
        .windows(needle.len())
        .any(|w| w == needle.as_slice()))
}
