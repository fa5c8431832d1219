//! The n-point function F_t(Q; s₁..sₙ) of t-core partitions by enumeration
//! and by the closed theta-determinant formula, plus the q-deformed partition
//! function, the all-partitions function and correlation functions.

mod brute;
mod closed;
mod correlation;
mod qdeformed;
mod setpart;

use rug::Rational;
use serde_json::{json, Value};

pub use brute::{
    bloch_okounkov_f, brute_force_ft, t_core_generating_series, t_core_product, tail_sum, CoreProductExponent,
};
pub use closed::{closed_ft, closed_ft_cyclo, closed_ft_r, closed_ft_r_cyclo, one_point_closed, ClosedOptions};
pub use correlation::{correlation, correlation_expansion};
pub use qdeformed::{qdeformed_z_product, qdeformed_z_sum, qdeformed_zn_sum};
pub use setpart::{set_partitions, SetPartition};

use crate::algebra::rational::{parse_rational, rational_sqrt};
use crate::algebra::Series;
use crate::error::{Error, Result};

/// A value s > 1 that is a rational square, with its positive root.
#[derive(Clone, Debug, PartialEq)]
pub struct SValue {
    pub s: Rational,
    pub sqrt_s: Rational,
}

impl SValue {
    pub fn new(s: &Rational) -> Result<SValue> {
        if *s <= 1 {
            return Err(Error::Invalid(format!("s must exceed 1, got {s}")));
        }
        let sqrt_s = rational_sqrt(s).ok_or_else(|| Error::Invalid(format!("s = {s} is not a rational square")))?;
        Ok(SValue { s: s.clone(), sqrt_s })
    }

    pub fn parse(text: &str) -> Result<SValue> {
        SValue::new(&parse_rational(text)?)
    }

    pub fn from_sqrt(r: &Rational) -> Result<SValue> {
        SValue::new(&Rational::from(r * r))
    }
}

/// Checks a vector of s-values for use at level t.
///
/// Every sub-product is > 1 because each s_j is, so s_π ≠ 1 and s_π·ξ_t^m ≠ 1
/// hold automatically; the check documents and enforces the positivity.
pub fn validate_svector(t: u32, s: &[SValue]) -> Result<()> {
    if t < 2 {
        return Err(Error::Invalid("t must be at least 2".into()));
    }
    for v in s {
        if v.s <= 1 || Rational::from(&v.sqrt_s * &v.sqrt_s) != v.s || v.sqrt_s.cmp0().is_le() {
            return Err(Error::Invalid(format!("bad s value {}", v.s)));
        }
    }
    Ok(())
}

/// Product of s_j (and of their roots) over a bitmask of indices.
pub(crate) fn block_product(s: &[SValue], mask: u32) -> (Rational, Rational) {
    let mut p = Rational::from(1);
    let mut r = Rational::from(1);
    for (j, v) in s.iter().enumerate() {
        if mask & (1 << j) != 0 {
            p *= &v.s;
            r *= &v.sqrt_s;
        }
    }
    (p, r)
}

/// How a series result was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Brute,
    Closed,
    ClosedR,
    Contour,
}

/// A computed F_t series with its parameters.
#[derive(Clone, Debug)]
pub struct NPointResult {
    pub method: Method,
    pub t: u32,
    pub s: Vec<SValue>,
    pub q2: Option<Rational>,
    pub r: Option<usize>,
    pub series: Series<Rational>,
    pub elapsed_ms: u128,
}

impl NPointResult {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "method": self.method,
            "t": self.t,
            "n": self.s.len(),
            "s": self.s.iter().map(|x| x.s.to_string()).collect::<Vec<_>>(),
            "order2": self.series.trunc(),
            "series": self.series.to_json(),
            "elapsed_ms": self.elapsed_ms,
        });
        if let Some(q2) = &self.q2 {
            v["Q2"] = json!(q2.to_string());
        }
        if let Some(r) = self.r {
            v["r"] = json!(r);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svalue_checks() {
        assert!(SValue::parse("4").is_ok());
        assert_eq!(SValue::parse("9/4").unwrap().sqrt_s, Rational::from((3, 2)));
        assert!(SValue::parse("2").is_err());
        assert!(SValue::parse("1").is_err());
        assert!(SValue::parse("1/4").is_err());
    }
}
