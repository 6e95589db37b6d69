//! Number formatting shared by the JSON and CSV writers.
//!
//! Floats are written in scientific notation with 15 significant digits;
//! non-finite values become `null` in JSON and an empty CSV field. Integers
//! of any size are written as bare JSON numbers.

use heatzeta_core::{BigInt, BigRational};
use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1";

pub fn sci(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.14e}")
    } else {
        String::new()
    }
}

pub fn short(x: f64) -> String {
    format!("{x:.3e}")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Float(pub f64);

impl Serialize for Float {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        RawValue::from_string(sci(self.0))
            .map_err(S::Error::custom)?
            .serialize(serializer)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RawValue::from_string(self.0.to_string())
            .map_err(S::Error::custom)?
            .serialize(serializer)
    }
}

/// Exact rational written as the string `"p/q"`, or `"p"` when integral.
#[derive(Debug, Clone, PartialEq)]
pub struct Rational(pub BigRational);

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

pub fn to_json<T: Serialize>(report: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::Invariant(format!("JSON encoding: {e}")))?;
    text.push('\n');
    Ok(text)
}

pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let encode = |e: csv::Error| CliError::Invariant(format!("CSV encoding: {e}"));
    writer.write_record(header).map_err(encode)?;
    for row in rows {
        writer.write_record(row).map_err(encode)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Invariant(format!("CSV encoding: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Invariant(format!("CSV encoding: {e}")))
}

pub fn opt_int(value: &Option<BigInt>) -> String {
    value.as_ref().map(ToString::to_string).unwrap_or_default()
}

pub fn opt_float(value: Option<f64>) -> String {
    value.map(sci).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_fifteen_significant_digits() {
        assert_eq!(sci(1.0), "1.00000000000000e0");
        assert_eq!(sci(-0.000123), "-1.23000000000000e-4");
        assert_eq!(sci(f64::NAN), "");
        let value: f64 = sci(0.1 + 0.2).parse().unwrap();
        assert!((value - 0.3).abs() < 1e-15);
    }

    #[test]
    fn json_numbers_are_raw() {
        #[derive(Serialize)]
        struct Row {
            a: Float,
            b: Float,
            n: Int,
            r: Rational,
        }
        let row = Row {
            a: Float(2.5),
            b: Float(f64::INFINITY),
            n: Int("123456789012345678901234567890".parse().unwrap()),
            r: Rational(BigRational::new(BigInt::from(6), BigInt::from(4))),
        };
        let text = serde_json::to_string(&row).unwrap();
        assert_eq!(
            text,
            r#"{"a":2.50000000000000e0,"b":null,"n":123456789012345678901234567890,"r":"3/2"}"#
        );
    }

    #[test]
    fn csv_quotes_only_when_needed() {
        let text = to_csv(&["a", "b"], &[vec!["1".into(), "x,y".into()]]).unwrap();
        assert_eq!(text, "a,b\n1,\"x,y\"\n");
    }
}
