//! JSON output with every float written to 17 significant digits.

use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};

/// Writes floats as `d.dddddddddddddddde±x`, which round-trips every `f64`
/// and never depends on the shortest-representation heuristics. Non-finite
/// values become `null`.
struct Sig17<F>(F);

fn write_float<W: ?Sized + io::Write>(writer: &mut W, value: f64) -> io::Result<()> {
    if value.is_finite() {
        write!(writer, "{value:.16e}")
    } else {
        writer.write_all(b"null")
    }
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl<F: Formatter> Formatter for Sig17<F> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write_float(writer, value)
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        write_float(writer, value as f64)
    }

    delegate! {
        begin_array(); end_array();
        begin_array_value(first: bool); end_array_value();
        begin_object(); end_object();
        begin_object_key(first: bool); end_object_key();
        begin_object_value(); end_object_value();
    }
}

pub fn to_line<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    value.serialize(&mut serde_json::Serializer::with_formatter(&mut out, Sig17(CompactFormatter)))?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

pub fn to_pretty<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    value.serialize(&mut serde_json::Serializer::with_formatter(&mut out, Sig17(PrettyFormatter::new())))?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_have_seventeen_digits() {
        let line = to_line(&json!({"a": 0.375, "b": [1.0e-300, -2.5], "n": 3})).unwrap();
        assert_eq!(line, r#"{"a":3.7500000000000000e-1,"b":[1.0000000000000000e-300,-2.5000000000000000e0],"n":3}"#);
    }

    #[test]
    fn round_trips_exactly() {
        for x in [0.1, 1.1102230246251563e-16, 1.0 / 3.0, std::f64::consts::PI, 5e-324, f64::MAX, -0.0] {
            let back: f64 = serde_json::from_str(&to_line(&x).unwrap()).unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
    }

    #[test]
    fn non_finite_is_null() {
        assert_eq!(to_line(&vec![f64::NAN, f64::INFINITY]).unwrap(), "[null,null]");
    }

    #[test]
    fn pretty_output_keeps_the_format() {
        let text = to_pretty(&json!({"x": 0.5})).unwrap();
        assert!(text.contains("5.0000000000000000e-1"));
        assert!(text.contains('\n'));
    }
}
