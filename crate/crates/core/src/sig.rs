//! Serialization helpers that round floats to 12 significant digits so that
//! identical runs produce byte-identical output.

use serde::ser::SerializeSeq;
use serde::Serializer;

pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

pub fn f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x))
}

pub fn opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_some(&round_sig(*x)),
        None => s.serialize_none(),
    }
}

pub fn vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&round_sig(*x))?;
    }
    seq.end()
}

pub fn pair<S: Serializer>(xs: &(f64, f64), s: S) -> Result<S::Ok, S::Error> {
    vec(&[xs.0, xs.1], s)
}
