//! High-precision complex helpers; `rug::Complex` serves as the big complex type.

use rug::{Complex, Float};

pub type BigComplex = Complex;

/// Sums in a fixed pairwise order so results do not depend on scheduling.
pub fn pairwise_sum(v: &[Complex], prec: u32) -> Complex {
    match v.len() {
        0 => Complex::new(prec),
        1 => v[0].clone(),
        n => {
            let (a, b) = v.split_at(n / 2);
            pairwise_sum(a, prec) + pairwise_sum(b, prec)
        }
    }
}

pub fn abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

pub fn is_finite(z: &Complex) -> bool {
    z.real().is_finite() && z.imag().is_finite()
}

/// `2^{-bits}` at precision `prec`.
pub fn eps(bits: u32, prec: u32) -> Float {
    Float::with_val(prec, Float::i_exp(1, -(bits as i32)))
}
