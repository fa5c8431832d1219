//! Expansions in auxiliary variables z (with s = e^z) whose coefficients are
//! q-series.

use std::collections::BTreeMap;

use rug::Rational;

use super::coeff::Coeff;
use super::series::Series;
use crate::error::{Error, Result};

/// `e^{a z}` as a Taylor series in z up to `z^order`.
pub fn exp_linear(a: &Rational, order: i64) -> Series<Rational> {
    let mut terms = Vec::new();
    let mut c = Rational::from(1);
    for k in 0..=order {
        terms.push((k, c.clone()));
        c = c * a / Rational::from(k + 1);
    }
    Series::from_terms(&(), terms, order)
}

/// `1/(e^z − 1)` as a Laurent series in z up to `z^order`.
pub fn inv_expm1(order: i64) -> Series<Rational> {
    // (e^z − 1)/z = Σ z^k/(k+1)!
    let mut terms = Vec::new();
    let mut f = Rational::from(1);
    for k in 0..=order + 1 {
        f /= Rational::from(k + 1);
        terms.push((k, f.clone()));
    }
    let d = Series::from_terms(&(), terms, order + 1);
    d.inv().expect("unit constant term").shift(-1).truncate(order)
}

/// Single-variable z-expansion with q-series coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ZSeries<F: Coeff> {
    ctx: F::Ctx,
    ztrunc: i64,
    qtrunc: i64,
    /// coefficient of z^k for k = 0..=ztrunc
    c: Vec<Series<F>>,
}

impl<F: Coeff> ZSeries<F> {
    /// Lifts a z-series with scalar coefficients.
    pub fn from_scalar(f: &Series<F>, qtrunc: i64) -> Self {
        assert!(f.valuation() >= 0, "ZSeries holds Taylor series only");
        let ctx = f.ctx().clone();
        let c = (0..=f.trunc())
            .map(|k| Series::constant(f.coeff(k).unwrap(), qtrunc))
            .collect();
        ZSeries { ctx, ztrunc: f.trunc(), qtrunc, c }
    }

    pub fn ztrunc(&self) -> i64 {
        self.ztrunc
    }

    pub fn coeff(&self, k: i64) -> Option<&Series<F>> {
        if k < 0 {
            return None;
        }
        self.c.get(k as usize)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let zt = self.ztrunc.min(o.ztrunc);
        let qt = self.qtrunc.min(o.qtrunc);
        let mut c = vec![Series::zero(&self.ctx, qt); (zt + 1) as usize];
        for i in 0..=zt as usize {
            for j in 0..=(zt as usize - i) {
                if self.c[i].is_zero() || o.c[j].is_zero() {
                    continue;
                }
                c[i + j] = c[i + j].add(&self.c[i].mul(&o.c[j]).truncate(qt));
            }
        }
        ZSeries { ctx: self.ctx.clone(), ztrunc: zt, qtrunc: qt, c }
    }

    /// `R ← R·(1 − k·Q^{b2/2}·e^{εz})` for ε = ±1.
    pub fn mul_one_minus_exp(&mut self, k: &F, b2: i64, eps: i64) {
        let ez = exp_linear(&Rational::from(eps), self.ztrunc);
        let mut out = self.c.clone();
        for (n, slot) in out.iter_mut().enumerate() {
            for m in 0..=n {
                let w = ez.coeff(m as i64).unwrap();
                let src = &self.c[n - m];
                if src.is_zero() {
                    continue;
                }
                let term = src.shift(b2).truncate(self.qtrunc).scale(&k.mul_rational(&w));
                *slot = slot.sub(&term);
            }
        }
        self.c = out;
    }

    /// `R ← R / (1 − k·Q^{b2/2})`.
    pub fn div_one_minus(&mut self, k: &F, b2: i64) -> Result<()> {
        let mut d = Series::one(&self.ctx, self.qtrunc);
        d.add_term(b2, &k.neg());
        for slot in self.c.iter_mut() {
            *slot = slot.div(&d)?;
        }
        Ok(())
    }

    /// Divides every coefficient by a q-series.
    pub fn div_series(&self, d: &Series<F>) -> Result<Self> {
        let c = self.c.iter().map(|s| s.div(d).map(|v| v.truncate(self.qtrunc))).collect::<Result<Vec<_>>>()?;
        let qtrunc = c.iter().map(|s| s.trunc()).min().unwrap_or(self.qtrunc);
        Ok(ZSeries { ctx: self.ctx.clone(), ztrunc: self.ztrunc, qtrunc, c })
    }

    /// Logarithm; the z⁰ coefficient must be exactly 1.
    pub fn log(&self) -> Result<Self> {
        if self.c[0] != Series::one(&self.ctx, self.qtrunc) {
            return Err(Error::LogPrecondition);
        }
        let n = self.ztrunc as usize;
        let mut b = vec![Series::zero(&self.ctx, self.qtrunc); n + 1];
        for k in 1..=n {
            let mut acc = self.c[k].scale_rational(&Rational::from(k));
            for j in 1..k {
                if b[j].is_zero() || self.c[k - j].is_zero() {
                    continue;
                }
                let t = b[j].mul(&self.c[k - j]).truncate(self.qtrunc).scale_rational(&Rational::from(j));
                acc = acc.sub(&t);
            }
            b[k] = acc.scale_rational(&Rational::from((1, k as i64)));
        }
        Ok(ZSeries { ctx: self.ctx.clone(), ztrunc: self.ztrunc, qtrunc: self.qtrunc, c: b })
    }
}

/// Truncated multivariate expansion in z₁..zₙ, allowing a simple pole per
/// variable, with q-series coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentTaylor {
    min_exp: Vec<i64>,
    max_exp: Vec<i64>,
    qtrunc: i64,
    terms: BTreeMap<Vec<i64>, Series<Rational>>,
}

impl LaurentTaylor {
    pub fn new(min_exp: Vec<i64>, max_exp: Vec<i64>, qtrunc: i64) -> Self {
        assert_eq!(min_exp.len(), max_exp.len());
        assert!(min_exp.iter().all(|&m| m == 0 || m == -1));
        LaurentTaylor { min_exp, max_exp, qtrunc, terms: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.min_exp.len()
    }

    pub fn min_exp(&self) -> &[i64] {
        &self.min_exp
    }

    pub fn max_exp(&self) -> &[i64] {
        &self.max_exp
    }

    /// Adds `w · Q^{e2/2} · ∏_j f_j(z_j)` where each `f_j` is a z-Laurent
    /// series whose valuation respects the pole floor.
    pub fn add_product(&mut self, e2: i64, w: &Rational, factors: &[Series<Rational>]) {
        assert_eq!(factors.len(), self.nvars());
        if e2 > self.qtrunc {
            return;
        }
        let mut idx: Vec<i64> = self.min_exp.clone();
        let n = idx.len();
        loop {
            let mut c = w.clone();
            for (j, f) in factors.iter().enumerate() {
                match f.coeff(idx[j]) {
                    Some(v) => c *= v,
                    None => panic!("factor expansion shorter than requested order"),
                }
                if c.cmp0().is_eq() {
                    break;
                }
            }
            if c.cmp0().is_ne() {
                let qt = self.qtrunc;
                self.terms
                    .entry(idx.clone())
                    .or_insert_with(|| Series::zero(&(), qt))
                    .add_term(e2, &c);
            }
            // advance the odometer
            let mut j = 0;
            loop {
                if j == n {
                    return;
                }
                idx[j] += 1;
                if idx[j] <= self.max_exp[j] {
                    break;
                }
                idx[j] = self.min_exp[j];
                j += 1;
            }
        }
    }

    /// Coefficient of ∏ z_j^{e_j}.
    pub fn coeff(&self, e: &[i64]) -> Result<Series<Rational>> {
        for (j, &ej) in e.iter().enumerate() {
            if ej > self.max_exp[j] {
                return Err(Error::OrderExceeded { requested: ej, available: self.max_exp[j] });
            }
        }
        Ok(self.terms.get(e).cloned().unwrap_or_else(|| Series::zero(&(), self.qtrunc)))
    }

    pub fn map_series(&self, f: impl Fn(&Series<Rational>) -> Result<Series<Rational>>) -> Result<Self> {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = f(v)?;
        }
        Ok(out)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Series<Rational>)> {
        self.terms.iter()
    }
}
