//! Exact-rational helpers shared by the series and constants code.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses `"3"`, `"7/2"`, `"-1/4"` or a terminating decimal such as `"2.5"` or `"1e-3"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational number: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| bad())?;
    let mut value = BigRational::new(all, BigInt::from(10u32).pow(frac_part.len() as u32 + 1));
    let ten = BigRational::from_integer(BigInt::from(10u32));
    if exp >= 0 {
        value *= num_traits::pow(ten, exp as usize);
    } else {
        value /= num_traits::pow(ten, (-exp) as usize);
    }
    Ok(if neg { -value } else { value })
}

/// Renders as `p/q`, or `p` when the denominator is one.
pub fn render(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Lossy conversion for reporting; huge values saturate to infinity.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a log-scale estimate when numerator or denominator overflow f64.
        let ln = ln_big(r.numer()) - ln_big(r.denom());
        ln.exp()
    })
}

/// Natural log of a positive rational, without overflowing on huge parts.
pub fn ln(r: &BigRational) -> f64 {
    ln_big(r.numer()) - ln_big(r.denom())
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().map(|v| v.abs().ln()).unwrap_or(f64::NAN);
    }
    let shift = bits - 64;
    let top = (x.magnitude() >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Binomial coefficient `C(n, k)` as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Falling factorial `(m)_j = m (m-1) ... (m-j+1)`, zero when `j > m`.
pub fn falling(m: u64, j: u64) -> BigUint {
    if j > m {
        return BigUint::zero();
    }
    (0..j).fold(BigUint::one(), |acc, i| acc * (m - i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse_rational("3").unwrap(), q(3, 1));
        assert_eq!(parse_rational("7/2").unwrap(), q(7, 2));
        assert_eq!(parse_rational("2.5").unwrap(), q(5, 2));
        assert_eq!(parse_rational("-0.125").unwrap(), q(-1, 8));
        assert_eq!(parse_rational("2e4").unwrap(), q(20000, 1));
        assert_eq!(parse_rational("1.5e-1").unwrap(), q(3, 20));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn binomials_and_falling_factorials() {
        assert_eq!(binomial(6, 2), BigUint::from(15u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(falling(5, 2), BigUint::from(20u32));
        assert_eq!(falling(2, 3), BigUint::zero());
        assert_eq!(falling(4, 0), BigUint::one());
    }

    #[test]
    fn render_and_float() {
        assert_eq!(render(&q(6, 4)), "3/2");
        assert_eq!(render(&q(4, 2)), "2");
        let huge = BigRational::from_integer(BigInt::from(10u32).pow(400)) / int(3);
        assert!((to_f64(&huge).ln() - (400.0 * 10f64.ln() - 3f64.ln())).abs() < 1e-6 || to_f64(&huge).is_infinite());
    }
}
