//! Canonical JSON encoding.
//!
//! Genesis files, transaction ids, and simulator wire frames all hash or
//! compare JSON bytes, so the encoding must be stable: object keys in
//! lexicographic order, no insignificant whitespace, `,` and `:` as the only
//! separators. Routing a value through [`serde_json::Value`] gets us there —
//! its map type keeps keys sorted — and `to_string` is already compact.

use serde::Serialize;

/// Encodes `value` as canonical JSON bytes.
///
/// # Panics
///
/// Panics if `value` cannot be represented as JSON (for example a map with
/// non-string keys). Every type fed through here is a plain data struct, so
/// a panic indicates a bug rather than bad input.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Vec<u8> {
    let tree = serde_json::to_value(value).expect("value must be representable as JSON");
    serde_json::to_string(&tree)
        .expect("JSON tree must serialize")
        .into_bytes()
}
