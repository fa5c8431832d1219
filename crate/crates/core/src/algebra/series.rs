//! Truncated Laurent series in one variable `x`.
//!
//! For q-series the variable is `Q^{1/2}`, so every exponent is stored doubled
//! (see [`HalfExp`]). A series knows its coefficients exactly up to and
//! including exponent `trunc`; nothing above `trunc` is ever stored.

use std::fmt;

use rug::ops::Pow;
use rug::{Complex, Rational};
use serde_json::{json, Value};

use super::coeff::Coeff;
use crate::error::{Error, Result};

/// A half-integer exponent stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfExp(pub i64);

impl HalfExp {
    pub fn int(e: i64) -> HalfExp {
        HalfExp(2 * e)
    }
    pub fn twice(self) -> i64 {
        self.0
    }
}

impl std::ops::Add for HalfExp {
    type Output = HalfExp;
    fn add(self, o: HalfExp) -> HalfExp {
        HalfExp(self.0 + o.0)
    }
}

impl std::ops::Neg for HalfExp {
    type Output = HalfExp;
    fn neg(self) -> HalfExp {
        HalfExp(-self.0)
    }
}

/// Truncation used for values that are known exactly (finite sums).
pub const EXACT: i64 = 1 << 40;

#[derive(Clone)]
pub struct Series<F: Coeff> {
    ctx: F::Ctx,
    low: i64,
    trunc: i64,
    c: Vec<F>,
}

/// A q-series: a [`Series`] in `Q^{1/2}`.
pub type QSeries<F> = Series<F>;

impl<F: Coeff> fmt::Debug for Series<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[")?;
        for (e, c) in self.terms() {
            write!(f, " ({c:?})x^{e}")?;
        }
        write!(f, " + O(x^{})]", self.trunc + 1)
    }
}

impl<F: Coeff> PartialEq for Series<F> {
    fn eq(&self, o: &Self) -> bool {
        self.trunc == o.trunc && self.low == o.low && self.c == o.c
    }
}

impl<F: Coeff> Series<F> {
    /// Builds from dense coefficients starting at exponent `low`; entries
    /// beyond `trunc` are dropped.
    pub fn from_dense(ctx: &F::Ctx, low: i64, mut coeffs: Vec<F>, trunc: i64) -> Self {
        let keep = (trunc - low + 1).max(0) as usize;
        coeffs.truncate(keep);
        let mut s = Series { ctx: ctx.clone(), low, trunc, c: coeffs };
        s.normalize();
        s
    }

    pub fn zero(ctx: &F::Ctx, trunc: i64) -> Self {
        Series { ctx: ctx.clone(), low: trunc + 1, trunc, c: Vec::new() }
    }

    pub fn one(ctx: &F::Ctx, trunc: i64) -> Self {
        Self::monomial(F::one_in(ctx), 0, trunc)
    }

    pub fn constant(c: F, trunc: i64) -> Self {
        Self::monomial(c, 0, trunc)
    }

    pub fn monomial(c: F, e: i64, trunc: i64) -> Self {
        let ctx = c.ctx();
        if e > trunc {
            return Self::zero(&ctx, trunc);
        }
        Self::from_dense(&ctx, e, vec![c], trunc)
    }

    /// Builds from sparse `(exponent, coeff)` pairs, summing duplicates.
    pub fn from_terms(ctx: &F::Ctx, terms: impl IntoIterator<Item = (i64, F)>, trunc: i64) -> Self {
        let terms: Vec<(i64, F)> = terms.into_iter().filter(|(e, _)| *e <= trunc).collect();
        let Some(low) = terms.iter().map(|(e, _)| *e).min() else {
            return Self::zero(ctx, trunc);
        };
        let mut c = vec![F::zero_in(ctx); (trunc - low + 1) as usize];
        for (e, v) in terms {
            let i = (e - low) as usize;
            c[i] = c[i].add(&v);
        }
        Self::from_dense(ctx, low, c, trunc)
    }

    fn normalize(&mut self) {
        let lead = self.c.iter().position(|v| !v.is_zero());
        match lead {
            None => {
                self.c.clear();
                self.low = self.trunc + 1;
            }
            Some(k) => {
                if k > 0 {
                    self.c.drain(..k);
                    self.low += k as i64;
                }
                while self.c.last().is_some_and(|v| v.is_zero()) {
                    self.c.pop();
                }
            }
        }
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    /// Highest exponent known exactly.
    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// Exponent of the first nonzero term, or `trunc + 1` for a zero series.
    pub fn valuation(&self) -> i64 {
        self.low
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Coefficient of `x^e`; `None` when `e` lies beyond the truncation.
    pub fn coeff(&self, e: i64) -> Option<F> {
        if e > self.trunc {
            return None;
        }
        let i = e - self.low;
        if i < 0 || i as usize >= self.c.len() {
            return Some(F::zero_in(&self.ctx));
        }
        Some(self.c[i as usize].clone())
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &F)> + '_ {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(i, v)| (self.low + i as i64, v))
    }

    pub fn truncate(&self, trunc: i64) -> Self {
        if trunc >= self.trunc {
            return self.clone();
        }
        Self::from_dense(&self.ctx, self.low, self.c.clone(), trunc)
    }

    /// Raises the truncation claim; only valid when the caller knows the
    /// missing terms vanish (e.g. finite sums).
    pub fn with_trunc_unchecked(&self, trunc: i64) -> Self {
        let mut s = self.clone();
        s.trunc = trunc;
        if s.c.is_empty() {
            s.low = trunc + 1;
        }
        s.normalize();
        s
    }

    pub fn map_coeffs<G: Coeff>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> Series<G> {
        let c = self.c.iter().map(f).collect();
        Series::from_dense(ctx, self.low, c, self.trunc)
    }

    pub fn add(&self, o: &Self) -> Self {
        let trunc = self.trunc.min(o.trunc);
        let low = self.low.min(o.low);
        if low > trunc {
            return Self::zero(&self.ctx, trunc);
        }
        let mut c = vec![F::zero_in(&self.ctx); (trunc - low + 1) as usize];
        for s in [self, o] {
            for (i, v) in s.c.iter().enumerate() {
                let e = s.low + i as i64;
                if e > trunc {
                    break;
                }
                let k = (e - low) as usize;
                c[k] = c[k].add(v);
            }
        }
        Self::from_dense(&self.ctx, low, c, trunc)
    }

    pub fn neg(&self) -> Self {
        Series { ctx: self.ctx.clone(), low: self.low, trunc: self.trunc, c: self.c.iter().map(|v| v.neg()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &F) -> Self {
        let c = self.c.iter().map(|v| v.mul(k)).collect();
        Self::from_dense(&self.ctx, self.low, c, self.trunc)
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        let c = self.c.iter().map(|v| v.mul_rational(r)).collect();
        Self::from_dense(&self.ctx, self.low, c, self.trunc)
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut s = self.clone();
        s.low += k;
        s.trunc += k;
        s
    }

    /// Substitutes `x ↦ x^d` for `d ≥ 1`.
    pub fn rescale(&self, d: i64) -> Self {
        assert!(d >= 1);
        let terms: Vec<(i64, F)> = self.terms().map(|(e, v)| (e * d, v.clone())).collect();
        // known up to the next exponent that could appear
        let trunc = (self.trunc + 1) * d - 1;
        Self::from_terms(&self.ctx, terms, trunc)
    }

    /// Adds `c·x^e` in place (ignored beyond the truncation).
    pub fn add_term(&mut self, e: i64, c: &F) {
        if e > self.trunc || c.is_zero() {
            return;
        }
        if self.c.is_empty() {
            self.low = e;
            self.c.push(c.clone());
            return;
        }
        if e < self.low {
            let pad = (self.low - e) as usize;
            let mut nc = vec![F::zero_in(&self.ctx); pad];
            nc.append(&mut self.c);
            self.c = nc;
            self.low = e;
        }
        let i = (e - self.low) as usize;
        if i >= self.c.len() {
            self.c.resize(i + 1, F::zero_in(&self.ctx));
        }
        self.c[i] = self.c[i].add(c);
        self.normalize();
    }

    pub fn mul(&self, o: &Self) -> Self {
        let trunc = (self.trunc + o.low).min(o.trunc + self.low);
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.ctx, trunc);
        }
        let low = self.low + o.low;
        if low > trunc {
            return Self::zero(&self.ctx, trunc);
        }
        let len = (trunc - low + 1) as usize;
        let mut c = vec![F::zero_in(&self.ctx); len];
        for (i, a) in self.c.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    c[i + j].add_mul_assign(a, b);
                }
            }
        }
        Self::from_dense(&self.ctx, low, c, trunc)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.ctx, EXACT);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Multiplicative inverse; the lowest term must be invertible.
    pub fn inv(&self) -> Result<Self> {
        Self::one(&self.ctx, EXACT).div(self)
    }

    /// Series division; result valuation is `val(self) − val(o)`.
    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::ZeroSeries);
        }
        let v = o.low;
        let b0inv = o.c[0].inv().ok_or(Error::DivisionByZero)?;
        let rel = (self.trunc - self.low).min(o.trunc - v);
        if self.is_zero() {
            return Ok(Self::zero(&self.ctx, self.trunc - v));
        }
        let low = self.low - v;
        let trunc = low + rel;
        let len = (rel + 1) as usize;
        let mut q: Vec<F> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = self.c.get(k).cloned().unwrap_or_else(|| F::zero_in(&self.ctx));
            for j in 1..=k.min(o.c.len().saturating_sub(1)) {
                if o.c[j].is_zero() || q[k - j].is_zero() {
                    continue;
                }
                acc = acc.sub(&o.c[j].mul(&q[k - j]));
            }
            q.push(acc.mul(&b0inv));
        }
        Ok(Self::from_dense(&self.ctx, low, q, trunc))
    }

    /// Formal logarithm; requires valuation 0 with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if self.low != 0 || !self.c[0].is_one() {
            return Err(Error::LogPrecondition);
        }
        let n = self.trunc;
        if n < 0 {
            return Err(Error::LogPrecondition);
        }
        let a = |k: i64| -> F { self.c.get(k as usize).cloned().unwrap_or_else(|| F::zero_in(&self.ctx)) };
        let mut b = vec![F::zero_in(&self.ctx); (n + 1) as usize];
        for k in 1..=n {
            // k b_k = k a_k − Σ_{j=1}^{k−1} j b_j a_{k−j}
            let mut acc = a(k).mul_rational(&Rational::from(k));
            for j in 1..k {
                let aj = a(k - j);
                if aj.is_zero() || b[j as usize].is_zero() {
                    continue;
                }
                acc = acc.sub(&b[j as usize].mul(&aj).mul_rational(&Rational::from(j)));
            }
            b[k as usize] = acc.mul_rational(&Rational::from((1, k)));
        }
        Ok(Self::from_dense(&self.ctx, 0, b, n))
    }

    /// Formal exponential; requires positive valuation.
    pub fn exp(&self) -> Result<Self> {
        if self.low <= 0 && !self.is_zero() {
            return Err(Error::ExpPrecondition);
        }
        let n = self.trunc;
        let a = |k: i64| -> F {
            let i = k - self.low;
            if i < 0 {
                F::zero_in(&self.ctx)
            } else {
                self.c.get(i as usize).cloned().unwrap_or_else(|| F::zero_in(&self.ctx))
            }
        };
        let mut b = vec![F::one_in(&self.ctx)];
        for k in 1..=n {
            // k b_k = Σ_{j=1}^{k} j a_j b_{k−j}
            let mut acc = F::zero_in(&self.ctx);
            for j in 1..=k {
                let aj = a(j);
                if aj.is_zero() {
                    continue;
                }
                acc = acc.add(&aj.mul(&b[(k - j) as usize]).mul_rational(&Rational::from(j)));
            }
            b.push(acc.mul_rational(&Rational::from((1, k))));
        }
        Ok(Self::from_dense(&self.ctx, 0, b, n.max(0)))
    }

    /// Evaluates at numeric `x`, using only the stored terms.
    pub fn eval(&self, x: &Complex, prec: u32) -> Complex {
        let mut acc = Complex::new(prec);
        for (e, v) in self.terms() {
            let xe = Complex::with_val(prec, x.pow(e as i32));
            acc += xe * v.to_complex(prec);
        }
        acc
    }

    /// JSON form `{"trunc2": …, "terms": [{"exp2": …, "coeff": …}]}`.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(e, v)| json!({"exp2": e, "coeff": v.to_json()}))
            .collect();
        json!({"trunc2": self.trunc, "terms": terms})
    }
}

impl Series<Rational> {
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Invalid("malformed series JSON".into());
        let trunc = v["trunc2"].as_i64().ok_or_else(bad)?;
        let mut terms = Vec::new();
        for t in v["terms"].as_array().ok_or_else(bad)? {
            let e = t["exp2"].as_i64().ok_or_else(bad)?;
            let c = super::rational::parse_rational(t["coeff"].as_str().ok_or_else(bad)?)?;
            terms.push((e, c));
        }
        Ok(Self::from_terms(&(), terms, trunc))
    }

    /// `Σ_k x^{k·step}` for k ≥ 0, i.e. `1/(1 − x^step)`.
    pub fn geometric(step: i64, trunc: i64) -> Self {
        let terms = (0..=trunc / step).map(|k| (k * step, Rational::from(1)));
        Self::from_terms(&(), terms, trunc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from(v)
    }

    fn poly(cs: &[i64], trunc: i64) -> Series<Rational> {
        Series::from_terms(&(), cs.iter().enumerate().map(|(i, &c)| (i as i64, q(c))), trunc)
    }

    #[test]
    fn geometric_inverse() {
        let one_minus = poly(&[1, -1], 10);
        let g = one_minus.inv().unwrap();
        assert_eq!(g, Series::geometric(1, 10));
    }

    #[test]
    fn exact_quotient() {
        let a = poly(&[1, 0, -1], 8);
        let b = poly(&[1, -1], 8);
        assert_eq!(a.div(&b).unwrap(), poly(&[1, 1], 8));
    }

    #[test]
    fn quotient_valuation() {
        let a = poly(&[0, 0, 3, 1], 9);
        let b = poly(&[0, 2, 1], 9);
        let r = a.div(&b).unwrap();
        assert_eq!(r.valuation(), 1);
        assert_eq!(r.mul(&b).truncate(9).coeff(2), Some(q(3)));
    }

    #[test]
    fn division_by_zero_series() {
        assert_eq!(poly(&[1], 5).div(&Series::<Rational>::zero(&(), 5)), Err(Error::ZeroSeries));
    }

    #[test]
    fn mercator() {
        let l = poly(&[1, 1], 6).log().unwrap();
        let expect: Vec<Rational> = (1..=6)
            .map(|k| Rational::from((if k % 2 == 1 { 1 } else { -1 }, k)))
            .collect();
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(l.coeff(k as i64 + 1).unwrap(), *e);
        }
        assert_eq!(Series::<Rational>::zero(&(), 5).exp().unwrap(), Series::one(&(), 5));
        assert_eq!(l.exp().unwrap(), poly(&[1, 1], 6));
    }

    #[test]
    fn mul_truncation_tracks_valuation() {
        let a = poly(&[0, 1], 5);
        let b = poly(&[1, 1], 3);
        let p = a.mul(&b);
        assert_eq!(p.trunc(), 4);
        assert_eq!(p.coeff(5), None);
    }

    #[test]
    fn json_round_trip() {
        let a = Series::from_terms(&(), [(1, Rational::from((1, 2))), (4, q(-3))], 6);
        let j = a.to_json();
        assert_eq!(j["trunc2"], 6);
        assert_eq!(Series::from_json(&j).unwrap(), a);
    }

    #[test]
    fn rescale_square() {
        let a = poly(&[1, 2], 3);
        let r = a.rescale(2);
        assert_eq!(r.trunc(), 7);
        assert_eq!(r.coeff(2), Some(q(2)));
    }

    #[test]
    fn half_exp_add() {
        assert_eq!(HalfExp(3) + HalfExp(-1), HalfExp(2));
        assert_eq!(HalfExp::int(2).twice(), 4);
    }
}
