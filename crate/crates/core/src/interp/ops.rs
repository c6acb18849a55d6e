//! Scalar operators with C++ semantics and checked 64-bit integers.

use std::cmp::Ordering;

use crate::ccr::{BinaryOp, TypeTag, UnaryOp};
use crate::cgr::RuntimeErrorKind;
use crate::value::Scalar;

pub type OpResult = Result<Scalar, (RuntimeErrorKind, String)>;

fn as_i64(s: &Scalar) -> Option<i64> {
    match s {
        Scalar::Int(v) => Some(*v),
        Scalar::Char(c) => Some(*c as i64),
        _ => None,
    }
}

fn as_f64(s: &Scalar) -> Option<f64> {
    match s {
        Scalar::Double(d) => Some(*d),
        other => as_i64(other).map(|v| v as f64),
    }
}

/// Default value of an uninitialized scalar.
pub fn default_value(ty: &TypeTag) -> Scalar {
    match ty {
        TypeTag::Int => Scalar::Int(0),
        TypeTag::Bool => Scalar::Bool(false),
        TypeTag::Char => Scalar::Char('\0'),
        TypeTag::Double => Scalar::Double(0.0),
        TypeTag::String | TypeTag::Container { .. } => Scalar::String(String::new()),
    }
}

/// Applies the only implicit conversion, int to double.
pub fn coerce(value: Scalar, ty: &TypeTag) -> Scalar {
    match (value, ty) {
        (Scalar::Int(v), TypeTag::Double) => Scalar::Double(v as f64),
        (v, _) => v,
    }
}

/// Truth value of a condition operand.
pub fn truthy(value: &Scalar) -> bool {
    match value {
        Scalar::Bool(b) => *b,
        Scalar::Int(v) => *v != 0,
        Scalar::Char(c) => *c != '\0',
        Scalar::Double(d) => *d != 0.0,
        Scalar::String(_) => true,
    }
}

fn overflow(a: impl std::fmt::Display, op: BinaryOp, b: impl std::fmt::Display) -> (RuntimeErrorKind, String) {
    (
        RuntimeErrorKind::IntegerOverflow,
        format!("integer overflow in {a} {} {b}", op.symbol()),
    )
}

fn finite(op: BinaryOp, a: f64, b: f64, r: f64) -> OpResult {
    if r.is_finite() {
        Ok(Scalar::Double(r))
    } else {
        Err((
            RuntimeErrorKind::NonFiniteDouble,
            format!("{a:?} {} {b:?} is not a finite number", op.symbol()),
        ))
    }
}

/// Evaluates an arithmetic or comparison operator. `&&` and `||` are
/// handled by the caller because they short-circuit.
pub fn binary(op: BinaryOp, a: &Scalar, b: &Scalar) -> OpResult {
    if op.is_comparison() {
        return compare(op, a, b).map(Scalar::Bool);
    }
    if let (BinaryOp::Add, Scalar::String(x), Scalar::String(y)) = (op, a, b) {
        return Ok(Scalar::String(format!("{x}{y}")));
    }
    if matches!(a, Scalar::Double(_)) || matches!(b, Scalar::Double(_)) {
        let (x, y) = (as_f64(a).expect("numeric operand"), as_f64(b).expect("numeric operand"));
        if matches!(op, BinaryOp::Div) && y == 0.0 {
            return Err((RuntimeErrorKind::DivisionByZero, format!("division of {x:?} by zero")));
        }
        let r = match op {
            BinaryOp::Add => x + y,
            BinaryOp::Sub => x - y,
            BinaryOp::Mul => x * y,
            BinaryOp::Div => x / y,
            _ => unreachable!("operator {op:?} on doubles"),
        };
        return finite(op, x, y, r);
    }
    let (x, y) = (as_i64(a).expect("integer operand"), as_i64(b).expect("integer operand"));
    let r = match op {
        BinaryOp::Add => x.checked_add(y),
        BinaryOp::Sub => x.checked_sub(y),
        BinaryOp::Mul => x.checked_mul(y),
        BinaryOp::Div | BinaryOp::Rem if y == 0 => {
            let what = if op == BinaryOp::Div { "division" } else { "remainder" };
            return Err((RuntimeErrorKind::DivisionByZero, format!("{what} of {x} by zero")));
        }
        BinaryOp::Div => x.checked_div(y),
        BinaryOp::Rem => x.checked_rem(y),
        _ => unreachable!("operator {op:?} on integers"),
    };
    r.map(Scalar::Int).ok_or_else(|| overflow(x, op, y))
}

fn compare(op: BinaryOp, a: &Scalar, b: &Scalar) -> Result<bool, (RuntimeErrorKind, String)> {
    let ord = match (a, b) {
        (Scalar::String(x), Scalar::String(y)) => x.cmp(y),
        (Scalar::Bool(x), Scalar::Bool(y)) => x.cmp(y),
        _ if matches!(a, Scalar::Double(_)) || matches!(b, Scalar::Double(_)) => {
            let (x, y) = (as_f64(a).expect("numeric operand"), as_f64(b).expect("numeric operand"));
            x.partial_cmp(&y).unwrap_or(Ordering::Equal)
        }
        _ => as_i64(a).expect("numeric operand").cmp(&as_i64(b).expect("numeric operand")),
    };
    Ok(match op {
        BinaryOp::Lt => ord.is_lt(),
        BinaryOp::Le => ord.is_le(),
        BinaryOp::Gt => ord.is_gt(),
        BinaryOp::Ge => ord.is_ge(),
        BinaryOp::Eq => ord.is_eq(),
        BinaryOp::Ne => ord.is_ne(),
        _ => unreachable!("{op:?} is not a comparison"),
    })
}

pub fn unary(op: UnaryOp, a: &Scalar) -> OpResult {
    match (op, a) {
        (UnaryOp::Not, v) => Ok(Scalar::Bool(!truthy(v))),
        (UnaryOp::Neg, Scalar::Double(d)) => Ok(Scalar::Double(-d)),
        (UnaryOp::Neg, v) => {
            let x = as_i64(v).expect("numeric operand");
            x.checked_neg().map(Scalar::Int).ok_or_else(|| {
                (
                    RuntimeErrorKind::IntegerOverflow,
                    format!("integer overflow in -({x})"),
                )
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(v: i64) -> Scalar {
        Scalar::Int(v)
    }

    #[test]
    fn integer_division_truncates_toward_zero() {
        assert_eq!(binary(BinaryOp::Div, &int(-7), &int(2)), Ok(int(-3)));
        assert_eq!(binary(BinaryOp::Rem, &int(-7), &int(2)), Ok(int(-1)));
        assert_eq!(binary(BinaryOp::Rem, &int(7), &int(-2)), Ok(int(1)));
    }

    #[test]
    fn faults() {
        let kind = |r: OpResult| r.unwrap_err().0;
        assert_eq!(kind(binary(BinaryOp::Div, &int(1), &int(0))), RuntimeErrorKind::DivisionByZero);
        assert_eq!(kind(binary(BinaryOp::Rem, &int(1), &int(0))), RuntimeErrorKind::DivisionByZero);
        assert_eq!(
            kind(binary(BinaryOp::Div, &Scalar::Double(1.0), &int(0))),
            RuntimeErrorKind::DivisionByZero
        );
        assert_eq!(kind(binary(BinaryOp::Add, &int(i64::MAX), &int(1))), RuntimeErrorKind::IntegerOverflow);
        assert_eq!(kind(binary(BinaryOp::Div, &int(i64::MIN), &int(-1))), RuntimeErrorKind::IntegerOverflow);
        assert_eq!(kind(unary(UnaryOp::Neg, &int(i64::MIN))), RuntimeErrorKind::IntegerOverflow);
        assert_eq!(
            kind(binary(BinaryOp::Mul, &Scalar::Double(1e308), &Scalar::Double(10.0))),
            RuntimeErrorKind::NonFiniteDouble
        );
    }

    #[test]
    fn mixed_arithmetic() {
        assert_eq!(binary(BinaryOp::Add, &int(1), &Scalar::Double(0.5)), Ok(Scalar::Double(1.5)));
        assert_eq!(binary(BinaryOp::Sub, &Scalar::Char('c'), &Scalar::Char('a')), Ok(int(2)));
        assert_eq!(
            binary(BinaryOp::Add, &Scalar::String("ab".into()), &Scalar::String("c".into())),
            Ok(Scalar::String("abc".into()))
        );
        assert_eq!(binary(BinaryOp::Lt, &int(1), &Scalar::Double(1.5)), Ok(Scalar::Bool(true)));
        assert_eq!(
            binary(BinaryOp::Lt, &Scalar::String("Z".into()), &Scalar::String("a".into())),
            Ok(Scalar::Bool(true))
        );
        assert_eq!(coerce(int(2), &TypeTag::Double), Scalar::Double(2.0));
    }

    proptest! {
        #[test]
        fn checked_ops_agree_with_i128(a in any::<i64>(), b in any::<i64>()) {
            for (op, wide) in [
                (BinaryOp::Add, (a as i128) + (b as i128)),
                (BinaryOp::Sub, (a as i128) - (b as i128)),
                (BinaryOp::Mul, (a as i128) * (b as i128)),
            ] {
                let fits = i64::try_from(wide).is_ok();
                match binary(op, &int(a), &int(b)) {
                    Ok(Scalar::Int(r)) => prop_assert!(fits && r as i128 == wide),
                    Err((RuntimeErrorKind::IntegerOverflow, _)) => prop_assert!(!fits),
                    other => prop_assert!(false, "unexpected {other:?}"),
                }
            }
        }
    }
}
