//! Exact rationals. Everything order-theoretic in this crate runs on
//! [`Rational`]; floating point never enters pattern classification.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `7`, `-3/4` or a finite decimal such as `3.5`.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, fraction)) = text.split_once('.') {
        if fraction.is_empty() || !fraction.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole_abs = whole.trim_start_matches(['-', '+']);
        let whole_value: BigInt = if whole_abs.is_empty() {
            BigInt::zero()
        } else {
            whole_abs.parse().ok()?
        };
        let scale = num::pow(BigInt::from(10), fraction.len());
        let fraction_value: BigInt = fraction.parse().ok()?;
        let magnitude = Rational::new(whole_value * &scale + fraction_value, scale);
        return Some(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = text.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Renders `n` or `n/d`, the same shape [`parse`] accepts.
pub fn render(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn render_all(values: &[Rational]) -> String {
    values.iter().map(render).collect::<Vec<_>>().join(" ")
}

/// Bounded strictly increasing map of the rationals onto (-1, 1).
pub(crate) fn squash_unit(x: &Rational) -> Rational {
    if x.is_negative() {
        x / (Rational::one() - x)
    } else {
        x / (Rational::one() + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_shapes() {
        assert_eq!(parse("7"), Some(int(7)));
        assert_eq!(parse("-3/4"), Some(frac(-3, 4)));
        assert_eq!(parse("3.5"), Some(frac(7, 2)));
        assert_eq!(parse("-0.25"), Some(frac(-1, 4)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
    }

    #[test]
    fn render_round_trips() {
        for v in [int(0), int(-4), frac(22, 7), frac(-1, 3)] {
            assert_eq!(parse(&render(&v)), Some(v));
        }
    }

    #[test]
    fn unit_squash_is_increasing_and_bounded() {
        let xs: Vec<Rational> = (-20..=20).map(|i| frac(i, 3)).collect();
        for w in xs.windows(2) {
            let (a, b) = (squash_unit(&w[0]), squash_unit(&w[1]));
            assert!(a < b);
            assert!(a > int(-1) && b < int(1));
        }
    }
}
