//! Exact rationals and their textual forms.

use num_rational::Ratio;
use serde::{Serialize, Serializer};

pub type Rational = Ratio<u64>;

/// Serializes a rational as `"n/d"` (reduced), or `"n"` when integral.
pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    r.to_string().serialize(s)
}

pub fn serialize_opt<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    r.map(|r| r.to_string()).serialize(s)
}

/// Decimal expansion truncated (not rounded) to `places` digits.
///
/// `3/7` renders as `0.4285` at four places.
pub fn truncated_decimal(r: &Rational, places: usize) -> String {
    let (n, d) = (u128::from(*r.numer()), u128::from(*r.denom()));
    let int = n / d;
    let mut rem = n % d;
    let mut out = int.to_string();
    if places > 0 {
        out.push('.');
        for _ in 0..places {
            rem *= 10;
            out.push(char::from(b'0' + (rem / d) as u8));
            rem %= d;
        }
    }
    out
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_matches_printed_table_values() {
        assert_eq!(truncated_decimal(&Rational::new(3, 7), 4), "0.4285");
        assert_eq!(truncated_decimal(&Rational::new(1, 7), 4), "0.1428");
        assert_eq!(truncated_decimal(&Rational::new(3, 26), 4), "0.1153");
        assert_eq!(truncated_decimal(&Rational::new(92, 28), 4), "3.2857");
        assert_eq!(truncated_decimal(&Rational::new(7, 2), 4), "3.5000");
        assert_eq!(truncated_decimal(&Rational::new(7, 1), 0), "7");
    }
}
