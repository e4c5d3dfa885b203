//! Serialization helpers shared by the result documents.

use serde::Serializer;

use crate::scalar::rational_to_string;
use crate::Rational;

/// Exact rational as a `"num/den"` (or `"num"`) string.
pub fn rational<S: Serializer>(q: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&rational_to_string(q))
}

pub fn optional_rational<S: Serializer>(q: &Option<Rational>, serializer: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => rational(q, serializer),
        None => serializer.serialize_none(),
    }
}
