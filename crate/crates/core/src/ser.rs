//! Serialization helpers: big integers are written as decimal strings.

use serde::{Serialize, Serializer};

pub(crate) fn display<T: std::fmt::Display, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub(crate) fn display_vec<T: std::fmt::Display, S: Serializer>(x: &[T], s: S) -> Result<S::Ok, S::Error> {
    x.iter().map(|v| v.to_string()).collect::<Vec<_>>().serialize(s)
}

pub(crate) fn display_mat<T: std::fmt::Display, S: Serializer>(x: &[Vec<T>], s: S) -> Result<S::Ok, S::Error> {
    x.iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>().serialize(s)
}

pub(crate) fn display_opt<T: std::fmt::Display, S: Serializer>(x: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    x.as_ref().map(|v| v.to_string()).serialize(s)
}
