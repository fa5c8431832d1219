//! The field Q(√d) for a positive rational d, used to carry half powers of q.

use std::fmt;
use std::sync::Arc;

use rug::{Complex, Float, Rational};
use serde_json::Value;

use super::coeff::Coeff;
use super::rational::rational_sqrt;

#[derive(Debug, PartialEq)]
pub struct QuadCtx {
    pub d: Rational,
    /// Set when d is a rational square; then every element is rational.
    pub root: Option<Rational>,
}

/// `a + b·√d`
#[derive(Clone, PartialEq)]
pub struct QuadNum {
    ctx: Arc<QuadCtx>,
    a: Rational,
    b: Rational,
}

impl fmt::Debug for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.cmp0().is_eq() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + ({})*sqrt({})", self.a, self.b, self.ctx.d)
        }
    }
}

impl QuadNum {
    pub fn context(d: &Rational) -> Arc<QuadCtx> {
        assert!(d.cmp0().is_gt(), "radicand must be positive");
        Arc::new(QuadCtx { d: d.clone(), root: rational_sqrt(d) })
    }

    pub fn new(ctx: &Arc<QuadCtx>, a: Rational, b: Rational) -> QuadNum {
        match &ctx.root {
            Some(r) => QuadNum { ctx: ctx.clone(), a: a + b * r, b: Rational::new() },
            None => QuadNum { ctx: ctx.clone(), a, b },
        }
    }

    /// `√d`
    pub fn sqrt_d(ctx: &Arc<QuadCtx>) -> QuadNum {
        QuadNum::new(ctx, Rational::new(), Rational::from(1))
    }

    /// `d^{e/2}` for any integer e.
    pub fn half_pow(ctx: &Arc<QuadCtx>, e: i64) -> QuadNum {
        let whole = super::rational::rpow(&ctx.d, e.div_euclid(2));
        if e.rem_euclid(2) == 0 {
            QuadNum::new(ctx, whole, Rational::new())
        } else {
            QuadNum::new(ctx, Rational::new(), whole)
        }
    }

    pub fn parts(&self) -> (&Rational, &Rational) {
        (&self.a, &self.b)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.b.cmp0().is_eq().then(|| self.a.clone())
    }
}

impl Coeff for QuadNum {
    type Ctx = Arc<QuadCtx>;

    fn ctx(&self) -> Self::Ctx {
        self.ctx.clone()
    }
    fn zero_in(ctx: &Self::Ctx) -> Self {
        QuadNum { ctx: ctx.clone(), a: Rational::new(), b: Rational::new() }
    }
    fn one_in(ctx: &Self::Ctx) -> Self {
        QuadNum { ctx: ctx.clone(), a: Rational::from(1), b: Rational::new() }
    }
    fn from_rational_in(ctx: &Self::Ctx, r: &Rational) -> Self {
        QuadNum { ctx: ctx.clone(), a: r.clone(), b: Rational::new() }
    }
    fn is_zero(&self) -> bool {
        self.a.cmp0().is_eq() && self.b.cmp0().is_eq()
    }
    fn add(&self, o: &Self) -> Self {
        QuadNum { ctx: self.ctx.clone(), a: Rational::from(&self.a + &o.a), b: Rational::from(&self.b + &o.b) }
    }
    fn sub(&self, o: &Self) -> Self {
        QuadNum { ctx: self.ctx.clone(), a: Rational::from(&self.a - &o.a), b: Rational::from(&self.b - &o.b) }
    }
    fn mul(&self, o: &Self) -> Self {
        let bd = Rational::from(&self.b * &o.b) * &self.ctx.d;
        let a = Rational::from(&self.a * &o.a) + bd;
        let b = Rational::from(&self.a * &o.b) + Rational::from(&self.b * &o.a);
        QuadNum { ctx: self.ctx.clone(), a, b }
    }
    fn neg(&self) -> Self {
        QuadNum { ctx: self.ctx.clone(), a: Rational::from(-&self.a), b: Rational::from(-&self.b) }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // (a − b√d)/(a² − b²d); the norm is nonzero because √d is irrational here
        let norm = Rational::from(&self.a * &self.a) - Rational::from(&self.b * &self.b) * &self.ctx.d;
        let ninv = norm.recip();
        Some(QuadNum {
            ctx: self.ctx.clone(),
            a: Rational::from(&self.a * &ninv),
            b: -Rational::from(&self.b * &ninv),
        })
    }
    fn mul_rational(&self, r: &Rational) -> Self {
        QuadNum { ctx: self.ctx.clone(), a: Rational::from(&self.a * r), b: Rational::from(&self.b * r) }
    }
    fn to_complex(&self, prec: u32) -> Complex {
        let s = Float::with_val(prec, &self.ctx.d).sqrt();
        let v = Float::with_val(prec, &self.a) + s * Float::with_val(prec, &self.b);
        Complex::with_val(prec, v)
    }
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_in_sqrt2() {
        let ctx = QuadNum::context(&Rational::from(2));
        let r = QuadNum::sqrt_d(&ctx);
        assert_eq!(r.mul(&r).as_rational(), Some(Rational::from(2)));
        let x = QuadNum::new(&ctx, Rational::from(1), Rational::from(1));
        assert!(x.mul(&x.inv().unwrap()).is_one());
        assert_eq!(QuadNum::half_pow(&ctx, -3).mul(&QuadNum::half_pow(&ctx, 3)), QuadNum::one_in(&ctx));
    }

    #[test]
    fn square_radicand_folds() {
        let ctx = QuadNum::context(&Rational::from(4));
        assert_eq!(QuadNum::half_pow(&ctx, 3).as_rational(), Some(Rational::from(8)));
        assert_eq!(QuadNum::half_pow(&ctx, -1).as_rational(), Some(Rational::from((1, 2))));
    }
}
