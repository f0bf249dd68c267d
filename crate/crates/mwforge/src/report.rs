//! Deterministic rendering shared by the CLI reports: exact fractions as
//! `a/b`, JSON fractions as `{num, den}`, and fixed-width decimals (six
//! fractional digits, ties to even) for oracle-deviation columns only.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::heights::round_half_even;

/// `a/b` in lowest terms, or plain `a` when the denominator is 1.
pub fn fraction_str(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn bigint_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

/// `{"num": .., "den": ..}` with integer payloads (strings if too large).
pub fn fraction_json(r: &BigRational) -> Value {
    json!({ "num": bigint_value(r.numer()), "den": bigint_value(r.denom()) })
}

pub fn int_json(n: &BigInt) -> Value {
    bigint_value(n)
}

/// Fixed six fractional digits, round half to even.
pub fn decimal6(r: &BigRational) -> String {
    let scaled = r * BigRational::from(BigInt::from(1_000_000));
    let rounded = round_half_even(&scaled);
    let neg = rounded.is_negative() && !rounded.is_zero();
    let abs = rounded.abs();
    let million = BigInt::from(1_000_000);
    let int_part = &abs / &million;
    let frac = &abs % &million;
    format!("{}{}.{:06}", if neg { "-" } else { "" }, int_part, frac)
}

/// Tab-joined row.
pub fn tsv_row(fields: &[String]) -> String {
    fields.join("\t")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn fraction_rendering() {
        assert_eq!(fraction_str(&r(4, 3)), "4/3");
        assert_eq!(fraction_str(&r(-2, 3)), "-2/3");
        assert_eq!(fraction_str(&r(6, 3)), "2");
        assert_eq!(fraction_str(&r(0, 5)), "0");
    }

    #[test]
    fn fraction_json_shape() {
        let v = fraction_json(&r(-2, 3));
        assert_eq!(v["num"], json!(-2));
        assert_eq!(v["den"], json!(3));
    }

    #[test]
    fn decimals_round_half_even() {
        assert_eq!(decimal6(&r(2, 3)), "0.666667");
        assert_eq!(decimal6(&r(-2, 3)), "-0.666667");
        assert_eq!(decimal6(&r(1, 2)), "0.500000");
        // 0.0000005 is a tie at the sixth digit: rounds to even (0.000000).
        assert_eq!(decimal6(&r(1, 2_000_000)), "0.000000");
        // 0.0000015 ties to 0.000002.
        assert_eq!(decimal6(&r(3, 2_000_000)), "0.000002");
        assert_eq!(decimal6(&r(5, 1)), "5.000000");
    }
}
