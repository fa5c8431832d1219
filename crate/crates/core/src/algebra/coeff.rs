use std::fmt::Debug;

use rug::{Complex, Rational};
use serde_json::Value;

/// A coefficient field usable inside truncated series.
///
/// Fields such as cyclotomic numbers need a runtime context (the conductor),
/// which is carried by `Ctx` so zero and one can be built without an operand.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync {
    type Ctx: Clone + PartialEq + Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn one_in(ctx: &Self::Ctx) -> Self;
    fn from_rational_in(ctx: &Self::Ctx, r: &Rational) -> Self;

    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn mul_rational(&self, r: &Rational) -> Self;

    /// `self += a * b`
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        let p = a.mul(b);
        *self = self.add(&p);
    }

    fn to_complex(&self, prec: u32) -> Complex;
    fn to_json(&self) -> Value;

    fn is_one(&self) -> bool {
        *self == Self::one_in(&self.ctx())
    }
}

impl Coeff for Rational {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero_in(_: &()) -> Self {
        Rational::new()
    }
    fn one_in(_: &()) -> Self {
        Rational::from(1)
    }
    fn from_rational_in(_: &(), r: &Rational) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }
    fn add(&self, o: &Self) -> Self {
        Rational::from(self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Rational::from(self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Rational::from(self * o)
    }
    fn neg(&self) -> Self {
        Rational::from(-self)
    }
    fn inv(&self) -> Option<Self> {
        if Coeff::is_zero(self) {
            None
        } else {
            Some(self.clone().recip())
        }
    }
    fn mul_rational(&self, r: &Rational) -> Self {
        Rational::from(self * r)
    }
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if Coeff::is_zero(a) || Coeff::is_zero(b) {
            return;
        }
        *self += Rational::from(a * b);
    }
    fn to_complex(&self, prec: u32) -> Complex {
        Complex::with_val(prec, self)
    }
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}
