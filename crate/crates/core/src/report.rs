//! Serialization helpers shared by report types.

use serde::Serializer;

/// Serialize an integer as a decimal string so that JSON readers never
/// round it through a double.
pub fn display_string<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// As [`display_string`] for a slice of integers.
pub fn display_strings<T: std::fmt::Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}
