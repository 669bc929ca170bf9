//! Input generators shared by the benchmarks.

use pathguard::{validate_raw, Limits, RawPathString};

/// A deep path that climbs back out of most of what it descends into.
pub fn zigzag(depth: usize) -> RawPathString {
    let mut s = String::new();
    for i in 0..depth {
        s.push_str(&format!("/dir{i}/./sub//.."));
    }
    s.push_str("/file.txt");
    validate_raw(s, Limits::default()).expect("zigzag fits the default limit")
}

/// `len` separators and nothing else.
pub fn slashes(len: usize) -> RawPathString {
    validate_raw("/".repeat(len), Limits::default()).expect("within limit")
}

/// A mixed corpus of short request paths.
pub fn request_corpus() -> Vec<RawPathString> {
    [
        "/index.html",
        "/static/css/../js/app.js",
        "//a//b///c",
        "../../../../etc/passwd",
        "/home/NonexistentUserFolder/../ActualUserFolder/",
        "./a/.//b/c",
        "/etc../",
        "/var/www/html/./images/../../html/logo.png",
    ]
    .iter()
    .map(|s| validate_raw(s, Limits::default()).expect("short literal"))
    .collect()
}
