use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn ri(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn pow10(k: u32) -> Int {
    num_traits::pow(Int::from(10), k as usize)
}

pub fn pow2(k: u64) -> Int {
    Int::one() << k
}

/// Parses an integer, a fraction `p/q`, or a finite decimal (optionally with
/// an exponent) into its exact rational value.
pub fn parse_number(text: &str) -> Result<Rat> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::BadNumber(text.to_string()));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_decimal(n.trim()).ok_or_else(|| Error::BadNumber(text.to_string()))?;
        let d = parse_decimal(d.trim()).ok_or_else(|| Error::BadNumber(text.to_string()))?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator(text.to_string()));
        }
        return Ok(n / d);
    }
    parse_decimal(t).ok_or_else(|| Error::BadNumber(text.to_string()))
}

fn parse_decimal(t: &str) -> Option<Rat> {
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rat::from_integer(digits.parse::<Int>().ok()?);
    let shift = exp - frac_part.len() as i32;
    if shift >= 0 {
        value *= Rat::from_integer(pow10(shift as u32));
    } else {
        value /= Rat::from_integer(pow10((-shift) as u32));
    }
    Some(if neg { -value } else { value })
}

/// `p/q` or `p` when the denominator is one.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() && (v != 0.0 || r.is_zero()) {
            return v;
        }
    }
    // Wide operands: shift both sides into range first.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db;
    let scaled = if shift > 0 {
        r / Rat::from_integer(pow2(shift as u64))
    } else {
        r * Rat::from_integer(pow2((-shift) as u64))
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift.clamp(-1100, 1100) as i32)
}

/// Approximate base-2 logarithm of |r| (exact to within one).
pub fn log2_floor(r: &Rat) -> i64 {
    r.numer().bits() as i64 - r.denom().bits() as i64
}

pub fn lcm_denoms<'a>(it: impl IntoIterator<Item = &'a Rat>) -> Int {
    it.into_iter().fold(Int::one(), |acc, r| acc.lcm(r.denom()))
}

/// Clears denominators of a rational vector and divides by the content gcd.
/// Returns the zero vector unchanged (as integers).
pub fn primitive_part(v: &[Rat]) -> Vec<Int> {
    let l = lcm_denoms(v);
    let ints: Vec<Int> = v
        .iter()
        .map(|r| (r * Rat::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

fn scale_pow2(r: &Rat, s: i64) -> Rat {
    if s >= 0 {
        r * Rat::from_integer(pow2(s as u64))
    } else {
        r / Rat::from_integer(pow2((-s) as u64))
    }
}

fn shift_for(r: &Rat, bits: u32) -> i64 {
    bits as i64 - log2_floor(r)
}

/// Largest dyadic with `bits` significant bits not above `r`.
pub fn round_down(r: &Rat, bits: u32) -> Rat {
    if r.numer().bits() + r.denom().bits() <= 2 * bits as u64 {
        return r.clone();
    }
    let s = shift_for(r, bits);
    let q = scale_pow2(r, s).floor();
    scale_pow2(&q, -s)
}

/// Smallest dyadic with `bits` significant bits not below `r`.
pub fn round_up(r: &Rat, bits: u32) -> Rat {
    -round_down(&-r, bits)
}

/// Rational bounds `lo <= sqrt(r) <= hi` with relative gap about 2^-bits.
pub fn sqrt_bounds(r: &Rat, bits: u32) -> (Rat, Rat) {
    assert!(!r.is_negative(), "sqrt of negative rational");
    if r.is_zero() {
        return (Rat::zero(), Rat::zero());
    }
    let k = (bits as i64 + (-log2_floor(r)).max(0) / 2 + 2) as u64;
    let scale = Rat::from_integer(pow2(2 * k));
    let lo_int = (r * &scale).floor().to_integer().sqrt();
    let hi_rad = (r * &scale).ceil().to_integer();
    let mut hi_int = hi_rad.sqrt();
    if &hi_int * &hi_int < hi_rad {
        hi_int += 1;
    }
    let den = pow2(k);
    (Rat::new(lo_int, den.clone()), Rat::new(hi_int, den))
}

pub fn sign_of(r: &Rat) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
