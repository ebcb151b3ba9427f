//! Parameter windows, in floating point and in exact rational arithmetic.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// Interval with independently open or closed endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl<T> Interval<T> {
    pub fn open(lo: T, hi: T) -> Self {
        Self {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn open_closed(lo: T, hi: T) -> Self {
        Self {
            lo,
            hi,
            lo_closed: false,
            hi_closed: true,
        }
    }
}

impl<T: PartialOrd> Interval<T> {
    pub fn contains(&self, x: &T) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        above && below
    }

    pub fn is_empty(&self) -> bool {
        if self.lo_closed && self.hi_closed {
            self.lo > self.hi
        } else {
            self.lo >= self.hi
        }
    }
}

impl Interval<Rational> {
    pub fn to_f64(&self) -> Interval<f64> {
        Interval {
            lo: ratio_to_f64(&self.lo),
            hi: ratio_to_f64(&self.hi),
            lo_closed: self.lo_closed,
            hi_closed: self.hi_closed,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

pub fn ratio_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Exact rational display: a terminating decimal when one exists, `p/q` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(into = "String")]
pub struct Exact(pub Rational);

impl From<Exact> for String {
    fn from(e: Exact) -> String {
        e.to_string()
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.0;
        let mut d = *r.denom();
        let mut twos = 0u32;
        let mut fives = 0u32;
        while d % 2 == 0 {
            d /= 2;
            twos += 1;
        }
        while d % 5 == 0 {
            d /= 5;
            fives += 1;
        }
        if d != 1 {
            return write!(f, "{}/{}", r.numer(), r.denom());
        }
        let digits = twos.max(fives);
        if digits == 0 {
            return write!(f, "{}", r.numer());
        }
        let scale = 10i128.pow(digits);
        let scaled = *r.numer() as i128 * scale / *r.denom() as i128;
        let sign = if scaled < 0 { "-" } else { "" };
        let abs = scaled.unsigned_abs();
        let int = abs / scale as u128;
        let frac = format!("{:0width$}", abs % scale as u128, width = digits as usize);
        write!(f, "{sign}{int}.{}", frac.trim_end_matches('0'))
    }
}

/// Parses `"1.5"`, `"-0.25"`, `"3"` or `"3/2"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational number: {s:?}"));
    if s.contains('/') {
        return Rational::from_str(s).map_err(|_| bad());
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int.is_empty() && frac.is_empty())
        || !int.chars().all(|c| c.is_ascii_digit())
        || !frac.chars().all(|c| c.is_ascii_digit())
        || frac.len() > 15
    {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let numer: i64 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
    let denom = 10i64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
    let r = Rational::new(numer, denom);
    Ok(if neg { -r } else { r })
}
