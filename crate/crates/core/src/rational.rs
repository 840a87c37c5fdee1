//! Exact rational scalars.
//!
//! `Rational` is arbitrary precision and always in canonical form
//! (reduced, positive denominator); that is exactly what
//! `num_rational::BigRational` maintains, so we use it directly rather
//! than wrapping it. Serialized form everywhere is the decimal-free
//! string "p/q" (or "p" when q = 1), which matches `Display`/`FromStr`.

use crate::error::{CoreError, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// p/q with small operands.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as a rational.
pub fn rat_int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| CoreError::BadInput(format!("bad rational {s:?}: {e}")))
}

/// n! as a BigInt.
pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

pub fn pow_i64(base: &Rational, e: i64) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    let mut b = if e < 0 { base.recip() } else { base.clone() };
    let mut n = e.unsigned_abs();
    let mut acc = Rational::one();
    while n > 0 {
        if n & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        n >>= 1;
    }
    acc
}

/// Renders with `digits` significant decimal digits (round half away from zero).
/// Used for the human-facing floating columns; the exact value is always
/// emitted alongside, so this is presentation only.
pub fn to_decimal_string(x: &Rational, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let ax = x.abs();
    // exponent e with 10^(e-1) <= ax < 10^e
    let mut e: i64 = 0;
    let one = Rational::one();
    let ten = rat_int(10);
    let mut v = ax.clone();
    while v >= ten {
        v /= &ten;
        e += 1;
    }
    while v < one {
        v *= &ten;
        e -= 1;
    }
    e += 1;
    // mantissa digits: round(ax * 10^(digits - e))
    let shift = digits as i64 - e;
    let scaled = &ax * pow_i64(&ten, shift);
    let rounded = (&scaled + rat(1, 2)).floor().to_integer();
    let mut mant = rounded.to_string();
    // rounding may carry over to one more digit (e.g. 999.96 -> 1000)
    if mant.len() > digits {
        e += 1;
        mant.truncate(digits);
    }
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if e <= -4 || e > digits as i64 + 6 {
        // scientific
        out.push_str(&mant[..1]);
        if mant.len() > 1 {
            out.push('.');
            out.push_str(&mant[1..]);
        }
        out.push('e');
        out.push_str(&(e - 1).to_string());
    } else if e <= 0 {
        out.push_str("0.");
        for _ in 0..(-e) {
            out.push('0');
        }
        out.push_str(&mant);
    } else if (e as usize) >= mant.len() {
        out.push_str(&mant);
        for _ in 0..(e as usize - mant.len()) {
            out.push('0');
        }
    } else {
        out.push_str(&mant[..e as usize]);
        out.push('.');
        out.push_str(&mant[e as usize..]);
    }
    out
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
