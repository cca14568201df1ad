//! Exact rational helpers on top of [`num_rational::BigRational`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `true` iff `0 ≤ value ≤ 1`.
pub fn in_unit_interval(value: &Rational) -> bool {
    !value.is_negative() && *value <= Rational::one()
}

/// `true` iff `0 < value < 1`.
pub fn in_open_unit_interval(value: &Rational) -> bool {
    value.is_positive() && *value < Rational::one()
}

/// Always renders `p/q`, including integers (`0/1`, `1/1`).
pub fn to_fraction_string(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Parses `p/q`, a decimal literal (`0.57`), or scientific notation (`1e-5`)
/// into an exact rational. No rounding happens: `0.1` is `1/10`.
pub fn parse_rational(token: &str) -> Result<Rational> {
    let token = token.trim();
    let bad = || Error::Usage(format!("cannot parse `{token}` as a rational number"));
    if token.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = token.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Usage(format!("zero denominator in `{token}`")));
        }
        return Ok(Rational::new(p, q));
    }

    let (mantissa, exponent) = match token.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = token[pos + 1..].parse().map_err(|_| bad())?;
            (&token[..pos], exp)
        }
        None => (token, 0),
    };
    let (negative, mantissa) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10u8);
    let mut value = if scale >= 0 {
        Rational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Scales a non-negative rational vector to the smallest proportional vector
/// of non-negative integers (clears denominators by their LCM, then divides
/// out the GCD of the numerators).
pub fn to_integer_ray(values: &[Rational]) -> Vec<BigInt> {
    let lcm = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scaled: Vec<BigInt> = values.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    let gcd = scaled.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if gcd.is_zero() {
        return scaled;
    }
    scaled.into_iter().map(|v| v / &gcd).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("0.57").unwrap(), rat(57, 100));
        assert_eq!(parse_rational("1e-5").unwrap(), rat(1, 100_000));
        assert_eq!(parse_rational("2.5E1").unwrap(), int(25));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("1").unwrap(), int(1));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.2.3", "0x10", "1e", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn integer_ray_is_primitive() {
        let ray = to_integer_ray(&[rat(1, 2), rat(1, 3), Rational::zero()]);
        assert_eq!(ray, vec![BigInt::from(3), BigInt::from(2), BigInt::zero()]);
        let ray = to_integer_ray(&[int(4), int(6)]);
        assert_eq!(ray, vec![BigInt::from(2), BigInt::from(3)]);
    }

    #[test]
    fn fraction_strings_always_carry_a_denominator() {
        assert_eq!(to_fraction_string(&int(0)), "0/1");
        assert_eq!(to_fraction_string(&rat(6, 4)), "3/2");
    }
}
