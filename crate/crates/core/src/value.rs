//! Runtime values.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::containers::ContainerId;

/// A scalar value: what a scalar variable or a container slot holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "lowercase")]
pub enum Scalar {
    Int(i64),
    Bool(bool),
    Char(char),
    Double(f64),
    String(String),
}

/// A value held by a variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "lowercase")]
pub enum Value {
    Int(i64),
    Bool(bool),
    Char(char),
    Double(f64),
    String(String),
    Container(ContainerId),
}

impl Scalar {
    /// Total order used for map keys. Keys of one map always share a type;
    /// mixed types fall back to a fixed order of type tags.
    pub fn key_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => a.cmp(b),
            (Scalar::Bool(a), Scalar::Bool(b)) => a.cmp(b),
            (Scalar::Char(a), Scalar::Char(b)) => a.cmp(b),
            (Scalar::Double(a), Scalar::Double(b)) => a.total_cmp(b),
            (Scalar::String(a), Scalar::String(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Scalar::Int(_) => 0,
            Scalar::Bool(_) => 1,
            Scalar::Char(_) => 2,
            Scalar::Double(_) => 3,
            Scalar::String(_) => 4,
        }
    }

    /// Text written by `cout << value`.
    pub fn to_stream_text(&self) -> String {
        match self {
            Scalar::Int(i) => i.to_string(),
            Scalar::Bool(b) => u8::from(*b).to_string(),
            Scalar::Char(c) => c.to_string(),
            Scalar::Double(d) => format_general(*d, 6),
            Scalar::String(s) => s.clone(),
        }
    }
}

impl From<Scalar> for Value {
    fn from(s: Scalar) -> Self {
        match s {
            Scalar::Int(v) => Value::Int(v),
            Scalar::Bool(v) => Value::Bool(v),
            Scalar::Char(v) => Value::Char(v),
            Scalar::Double(v) => Value::Double(v),
            Scalar::String(v) => Value::String(v),
        }
    }
}

impl Value {
    pub fn as_scalar(&self) -> Option<Scalar> {
        Some(match self {
            Value::Int(v) => Scalar::Int(*v),
            Value::Bool(v) => Scalar::Bool(*v),
            Value::Char(v) => Scalar::Char(*v),
            Value::Double(v) => Scalar::Double(*v),
            Value::String(v) => Scalar::String(v.clone()),
            Value::Container(_) => return None,
        })
    }

    pub fn container(&self) -> Option<ContainerId> {
        match self {
            Value::Container(id) => Some(*id),
            _ => None,
        }
    }
}

/// Human-facing rendering used in explanations: strings and chars quoted,
/// doubles in shortest round-trip form.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Bool(v) => write!(f, "{v}"),
            Scalar::Char(v) => write!(f, "{v:?}"),
            Scalar::Double(v) => write!(f, "{v:?}"),
            Scalar::String(v) => write!(f, "{v:?}"),
        }
    }
}

/// Format a double the way a default-configured C++ output stream does
/// (`%g` with the given precision).
pub fn format_general(value: f64, precision: usize) -> String {
    if value.is_nan() {
        return if value.is_sign_negative() { "-nan" } else { "nan" }.to_string();
    }
    if value.is_infinite() {
        return if value < 0.0 { "-inf" } else { "inf" }.to_string();
    }
    let precision = precision.max(1);
    if value == 0.0 {
        return if value.is_sign_negative() { "-0" } else { "0" }.to_string();
    }
    let sci = format!("{:.*e}", precision - 1, value);
    let (mantissa, exponent) = sci.split_once('e').expect("exponent marker");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if exponent < -4 || exponent >= precision as i32 {
        let mantissa = strip_fraction_zeros(mantissa);
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exponent.abs())
    } else {
        let decimals = (precision as i32 - 1 - exponent).max(0) as usize;
        strip_fraction_zeros(&format!("{value:.decimals$}")).to_string()
    }
}

fn strip_fraction_zeros(text: &str) -> &str {
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.')
    } else {
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_format_matches_iostream() {
        // Expected strings from printf("%g").
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (2.5, "2.5"),
            (1.0 / 3.0, "0.333333"),
            (2.0 / 3.0, "0.666667"),
            (100000.0, "100000"),
            (1000000.0, "1e+06"),
            (1234567.0, "1.23457e+06"),
            (0.0001, "0.0001"),
            (0.00001, "1e-05"),
            (0.000123456789, "0.000123457"),
            (-3.75, "-3.75"),
            (1e100, "1e+100"),
            (123456.5, "123456"),
            (999999.5, "1e+06"),
            (1.23456789, "1.23457"),
        ];
        for (v, want) in cases {
            assert_eq!(format_general(v, 6), want, "formatting {v}");
        }
    }

    #[test]
    fn serde_shape() {
        let v = Value::Int(5);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"type":"int","value":5}"#);
        let c = Value::Container(ContainerId(3));
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"type":"container","value":3}"#);
        let s: Scalar = serde_json::from_str(r#"{"type":"char","value":"a"}"#).unwrap();
        assert_eq!(s, Scalar::Char('a'));
    }

    #[test]
    fn key_order() {
        assert_eq!(Scalar::Int(1).key_cmp(&Scalar::Int(2)), Ordering::Less);
        assert_eq!(
            Scalar::String("b".into()).key_cmp(&Scalar::String("a".into())),
            Ordering::Greater
        );
    }
}
