//! Helpers around `rug::Rational`, which is the exact scalar everywhere.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"0.1"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((ip, fp)) = s.split_once('.') {
        if !fp.is_empty() && fp.chars().all(|c| c.is_ascii_digit()) {
            let digits = format!("{ip}{fp}");
            let num: Integer = digits
                .parse()
                .map_err(|_| Error::Invalid(format!("bad number {s:?}")))?;
            let den = Integer::from(10).pow(fp.len() as u32);
            return Ok(Rational::from((num, den)));
        }
    }
    s.parse::<Rational>()
        .map_err(|_| Error::Invalid(format!("bad rational {s:?}")))
}

/// Exact square root of a non-negative rational, if it exists.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.cmp0() == std::cmp::Ordering::Less {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    if !n.is_perfect_square() || !d.is_perfect_square() {
        return None;
    }
    Some(Rational::from((n.clone().sqrt(), d.clone().sqrt())))
}

/// `r^e` for any integer `e` (r must be nonzero when e < 0).
pub fn rpow(r: &Rational, e: i64) -> Rational {
    let base = if e < 0 { r.clone().recip() } else { r.clone() };
    let mut out = Rational::from(1);
    let mut b = base;
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            out *= &b;
        }
        b = Rational::from(&b * &b);
        k >>= 1;
    }
    out
}

/// Bernoulli numbers B_0..B_n with B_1 = -1/2.
pub fn bernoulli(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::new(); n + 1];
    b[0] = Rational::from(1);
    for m in 1..=n {
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (k, bk) in b.iter().enumerate().take(m) {
            acc += &binom * bk.clone();
            binom = binom * (m + 1 - k) / (k + 1);
        }
        b[m] = -acc / Rational::from(m + 1);
    }
    b
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Euler totient, used for cyclotomic degrees.
pub fn totient(m: u32) -> u32 {
    (1..=m).filter(|&k| gcd(k, m) == 1).count() as u32
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("9/4").unwrap(), Rational::from((9, 4)));
        assert_eq!(parse_rational("0.1").unwrap(), Rational::from((1, 10)));
        assert_eq!(parse_rational("-3").unwrap(), Rational::from(-3));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn sqrt_and_pow() {
        assert_eq!(rational_sqrt(&Rational::from((25, 16))), Some(Rational::from((5, 4))));
        assert_eq!(rational_sqrt(&Rational::from(2)), None);
        assert_eq!(rpow(&Rational::from(2), -3), Rational::from((1, 8)));
    }

    #[test]
    fn bernoulli_small() {
        let b = bernoulli(8);
        assert_eq!(b[1], Rational::from((-1, 2)));
        assert_eq!(b[2], Rational::from((1, 6)));
        assert_eq!(b[4], Rational::from((-1, 30)));
        assert_eq!(b[6], Rational::from((1, 42)));
        assert_eq!(b[8], Rational::from((-1, 30)));
    }
}
