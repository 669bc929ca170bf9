use proptest::prelude::*;

use pathguard::algebra::{are_equivalent, contains_component, is_char_prefix, is_component_prefix};
use pathguard::verify::residue_of;
use pathguard::{
    canonicalize, canonicalize_jailed, canonicalize_reporting, load_whitelist,
    rewrite_canonicalize, tokenize, validate_raw, CanonicalPath, EntryPolicy, Limits,
    RawPathString, Whitelist,
};

fn raw(bytes: &[u8]) -> RawPathString {
    validate_raw(bytes, Limits::default()).unwrap()
}

/// Paths built from a small alphabet that hits every token class often.
fn path_bytes() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(
        prop::sample::select(vec![b'/', b'/', b'.', b'.', b'a', b'b', b'\\', b'x']),
        0..48,
    )
}

/// Arbitrary non-NUL bytes.
fn any_bytes() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(1u8..=255, 0..64)
}

fn canonical() -> impl Strategy<Value = CanonicalPath> {
    path_bytes().prop_map(|b| canonicalize(&raw(&b)))
}

proptest! {
    #[test]
    fn stack_agrees_with_rewriting(bytes in path_bytes()) {
        let r = raw(&bytes);
        prop_assert_eq!(canonicalize(&r), rewrite_canonicalize(&r));
    }

    #[test]
    fn stack_agrees_with_rewriting_on_arbitrary_bytes(bytes in any_bytes()) {
        let r = raw(&bytes);
        prop_assert_eq!(canonicalize(&r), rewrite_canonicalize(&r));
    }

    #[test]
    fn output_is_canonical_fixpoint(bytes in any_bytes()) {
        let out = canonicalize(&raw(&bytes));
        prop_assert!(residue_of(out.as_bytes()).is_empty());
        prop_assert_eq!(CanonicalPath::parse(out.as_bytes()).unwrap(), out.clone());
        prop_assert_eq!(canonicalize(&raw(out.as_bytes())), out);
    }

    #[test]
    fn absolute_inputs_never_grow(bytes in path_bytes()) {
        let mut abs = vec![b'/'];
        abs.extend(bytes);
        prop_assert!(canonicalize(&raw(&abs)).len() <= abs.len());
    }

    #[test]
    fn token_count_bounded(bytes in path_bytes()) {
        let r = raw(&bytes);
        prop_assert!(tokenize(&r).len() <= bytes.len().div_ceil(2) + 1);
    }

    #[test]
    fn tokens_rejoin_to_same_canonical_form(bytes in path_bytes()) {
        let r = raw(&bytes);
        let joined = tokenize(&r)
            .iter()
            .map(|t| t.text().to_vec())
            .collect::<Vec<_>>()
            .join(&b'/');
        prop_assert_eq!(canonicalize(&raw(&joined)), canonicalize(&r));
    }

    #[test]
    fn underflow_count_never_changes_path(bytes in path_bytes()) {
        let r = raw(&bytes);
        prop_assert_eq!(canonicalize_reporting(&r).path, canonicalize(&r));
    }

    #[test]
    fn jailed_is_canonicalized_concatenation(root in canonical(), rest in path_bytes()) {
        let limits = Limits::default();
        let mut joined = root.as_bytes().to_vec();
        joined.push(b'/');
        joined.extend(&rest);
        prop_assert_eq!(
            canonicalize_jailed(&root, &raw(&rest), limits).unwrap(),
            canonicalize(&raw(&joined))
        );
    }

    #[test]
    fn char_prefix_reflexive_and_transitive(a in path_bytes(), b in path_bytes(), c in path_bytes()) {
        prop_assert!(is_char_prefix(&a, &a));
        let ab: Vec<u8> = a.iter().chain(&b).copied().collect();
        let abc: Vec<u8> = ab.iter().chain(&c).copied().collect();
        prop_assert!(is_char_prefix(&a, &ab) && is_char_prefix(&ab, &abc));
        prop_assert!(is_char_prefix(&a, &abc));
    }

    #[test]
    fn equivalence_is_string_equality(a in path_bytes(), b in path_bytes()) {
        let mutual = a.len() == b.len() && is_char_prefix(&a, &b) && is_char_prefix(&b, &a);
        prop_assert_eq!(are_equivalent(&a, &b), mutual);
        prop_assert_eq!(are_equivalent(&a, &b), a == b);
    }

    #[test]
    fn component_prefix_vs_char_prefix(p1 in canonical(), p2 in canonical()) {
        let comp = is_component_prefix(&p1, &p2);
        if comp {
            prop_assert!(is_char_prefix(p1.as_bytes(), p2.as_bytes()));
        }
        if !p1.is_root() {
            let mut s1 = p1.as_bytes().to_vec();
            s1.push(b'/');
            let mut s2 = p2.as_bytes().to_vec();
            s2.push(b'/');
            prop_assert_eq!(comp, is_char_prefix(&s1, &s2));
        }
    }

    #[test]
    fn contains_component_matches_split(bytes in path_bytes(), name in "[ab.x]{1,3}") {
        let out = canonicalize(&raw(&bytes));
        let expected = out.components().any(|c| c == name.as_bytes());
        prop_assert_eq!(contains_component(out.as_bytes(), name.as_bytes()).unwrap(), expected);
    }

    #[test]
    fn whitelist_is_exact_match(p in canonical(), q in canonical()) {
        let w: Whitelist = [p.clone()].into_iter().collect();
        prop_assert!(w.contains(&p));
        prop_assert_eq!(w.contains(&q), p == q);
    }

    #[test]
    fn loaded_entries_are_fixpoints(lines in prop::collection::vec(path_bytes(), 0..12)) {
        let source = lines.join(&b'\n');
        let w = load_whitelist(&source, Limits::default(), EntryPolicy::Canonicalize).unwrap();
        for entry in w.iter() {
            prop_assert_eq!(&canonicalize(&raw(entry.as_bytes())), entry);
        }
        // Every canonical entry loads under the strict policy too.
        let rendered: Vec<u8> = w
            .iter()
            .map(|e| e.as_bytes().to_vec())
            .collect::<Vec<_>>()
            .join(&b'\n');
        let strict = load_whitelist(&rendered, Limits::default(), EntryPolicy::Reject).unwrap();
        prop_assert_eq!(strict, w);
    }

    #[test]
    fn validate_raw_iff_length_and_nul(bytes in prop::collection::vec(any::<u8>(), 0..20), max in 1usize..20) {
        let ok = bytes.len() <= max && !bytes.contains(&0);
        prop_assert_eq!(validate_raw(&bytes, Limits::new(max).unwrap()).is_ok(), ok);
    }
}

#[test]
fn concurrent_callers_see_identical_results() {
    let inputs: Vec<RawPathString> = (0..500)
        .map(|i| raw(format!("/a{}/../b{}/./c//{}", i % 7, i % 3, i).as_bytes()))
        .collect();
    let expected: Vec<CanonicalPath> = inputs.iter().map(canonicalize).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..8)
            .map(|_| s.spawn(|| inputs.iter().map(canonicalize).collect::<Vec<_>>()))
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), expected);
        }
    });
}
