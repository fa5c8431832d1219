//! Truncated power series in two variables (Q, Q₁), graded by total doubled
//! degree with one shared cutoff.

use std::collections::BTreeMap;

use rug::Rational;
use serde_json::{json, Value};

use super::coeff::Coeff;
use super::series::Series;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries<F: Coeff> {
    ctx: F::Ctx,
    /// terms with a2 + b2 ≤ trunc2 are exact
    trunc2: i64,
    terms: BTreeMap<(i64, i64), F>,
}

impl<F: Coeff> BiSeries<F> {
    pub fn zero(ctx: &F::Ctx, trunc2: i64) -> Self {
        BiSeries { ctx: ctx.clone(), trunc2, terms: BTreeMap::new() }
    }

    pub fn one(ctx: &F::Ctx, trunc2: i64) -> Self {
        Self::monomial(F::one_in(ctx), (0, 0), trunc2)
    }

    /// `c · Q^{a2/2} Q₁^{b2/2}`
    pub fn monomial(c: F, (a2, b2): (i64, i64), trunc2: i64) -> Self {
        let mut s = Self::zero(&c.ctx(), trunc2);
        s.add_term((a2, b2), &c);
        s
    }

    pub fn trunc2(&self) -> i64 {
        self.trunc2
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn add_term(&mut self, (a2, b2): (i64, i64), c: &F) {
        assert!(a2 >= 0 && b2 >= 0, "negative exponent in bivariate series");
        if a2 + b2 > self.trunc2 || c.is_zero() {
            return;
        }
        let e = self.terms.entry((a2, b2)).or_insert_with(|| F::zero_in(&self.ctx));
        *e = e.add(c);
        if e.is_zero() {
            self.terms.remove(&(a2, b2));
        }
    }

    pub fn coeff(&self, a2: i64, b2: i64) -> Option<F> {
        if a2 + b2 > self.trunc2 {
            return None;
        }
        Some(self.terms.get(&(a2, b2)).cloned().unwrap_or_else(|| F::zero_in(&self.ctx)))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &F)> {
        self.terms.iter()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = Self::zero(&self.ctx, self.trunc2.min(o.trunc2));
        for (k, v) in self.terms.iter().chain(o.terms.iter()) {
            s.add_term(*k, v);
        }
        s
    }

    pub fn neg(&self) -> Self {
        let mut s = Self::zero(&self.ctx, self.trunc2);
        for (k, v) in &self.terms {
            s.add_term(*k, &v.neg());
        }
        s
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut s = Self::zero(&self.ctx, self.trunc2);
        for (k, v) in &self.terms {
            s.add_term(*k, &v.mul(c));
        }
        s
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut s = Self::zero(&self.ctx, self.trunc2.min(o.trunc2));
        for ((a1, b1), x) in &self.terms {
            for ((a2, b2), y) in &o.terms {
                if a1 + a2 + b1 + b2 <= s.trunc2 {
                    s.add_term((a1 + a2, b1 + b2), &x.mul(y));
                }
            }
        }
        s
    }

    /// Inverse of a series whose constant term is invertible.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.coeff(0, 0).unwrap_or_else(|| F::zero_in(&self.ctx));
        let c0inv = c0.inv().ok_or(Error::DivisionByZero)?;
        // 1/(c0(1 − u)) = c0⁻¹ Σ u^k, with u of positive degree
        let mut u = self.scale(&c0inv).neg();
        u.add_term((0, 0), &F::one_in(&self.ctx));
        let mut acc = Self::one(&self.ctx, self.trunc2);
        let mut pw = Self::one(&self.ctx, self.trunc2);
        loop {
            pw = pw.mul(&u);
            if pw.terms.is_empty() {
                break;
            }
            acc = acc.add(&pw);
        }
        Ok(acc.scale(&c0inv))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Substitutes the monomial `Q^{da/2} Q₁^{db/2}` for the variable of a
    /// univariate power series.
    pub fn from_univariate(f: &Series<F>, (da, db): (i64, i64), trunc2: i64) -> Self {
        let deg = da + db;
        assert!(deg > 0 && f.valuation() >= 0);
        let mut s = Self::zero(f.ctx(), trunc2);
        for (k, c) in f.terms() {
            s.add_term((k * da, k * db), c);
        }
        let top = trunc2 / deg;
        assert!(f.trunc() >= top, "univariate series too short for substitution");
        s
    }

    /// Keeps only terms with no Q₁ dependence.
    pub fn at_q1_zero(&self) -> Series<F> {
        let terms = self.terms.iter().filter(|((_, b), _)| *b == 0).map(|((a, _), v)| (*a, v.clone()));
        Series::from_terms(&self.ctx, terms, self.trunc2)
    }

    pub fn map_coeffs<G: Coeff>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> BiSeries<G> {
        let mut s = BiSeries::zero(ctx, self.trunc2);
        for (k, v) in &self.terms {
            s.add_term(*k, &f(v));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|((a, b), v)| json!({"exp2": [a, b], "coeff": v.to_json()}))
            .collect();
        json!({"trunc2": self.trunc2, "terms": terms})
    }
}

impl BiSeries<Rational> {
    pub fn rational_one(trunc2: i64) -> Self {
        Self::one(&(), trunc2)
    }
}
