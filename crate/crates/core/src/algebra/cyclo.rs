//! Elements of the cyclotomic field Q(ξ_m), stored in the power basis
//! 1, ξ, …, ξ^{φ(m)−1} reduced modulo Φ_m.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use rug::float::Constant;
use rug::{Complex, Float, Rational};
use serde_json::{json, Value};

use super::coeff::Coeff;
use super::rational::totient;
use crate::error::{Error, Result};

/// Reduction data for one conductor.
#[derive(Debug, PartialEq, Eq)]
pub struct CycloTable {
    pub m: u32,
    pub phi: usize,
    /// `xpow[k]` is ξ^k in the power basis, for k in 0..max(m, 2φ−1).
    xpow: Vec<Vec<i64>>,
}

/// Integer coefficients of Φ_m, lowest degree first.
pub fn cyclotomic_poly(m: u32) -> Vec<i64> {
    // x^m - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        let den = cyclotomic_poly(d);
        num = poly_div_exact(&num, &den);
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dn = den.len() - 1;
    let lead = den[dn];
    let qn = r.len() - 1 - dn;
    let mut q = vec![0i64; qn + 1];
    for k in (0..=qn).rev() {
        let c = r[k + dn] / lead;
        q[k] = c;
        for (j, dj) in den.iter().enumerate() {
            r[k + j] -= c * dj;
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

impl CycloTable {
    fn build(m: u32) -> CycloTable {
        let phi = totient(m) as usize;
        let poly = cyclotomic_poly(m);
        let n = (m as usize).max(2 * phi);
        let mut xpow = Vec::with_capacity(n);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            xpow.push(cur.clone());
            // multiply by x and reduce with the monic Φ_m
            let top = cur[phi - 1];
            for j in (1..phi).rev() {
                cur[j] = cur[j - 1] - top * poly[j];
            }
            cur[0] = -top * poly[0];
        }
        CycloTable { m, phi, xpow }
    }

    pub fn get(m: u32) -> Arc<CycloTable> {
        static CACHE: OnceLock<RwLock<HashMap<u32, Arc<CycloTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.read().unwrap().get(&m) {
            return t.clone();
        }
        let t = Arc::new(CycloTable::build(m));
        cache.write().unwrap().entry(m).or_insert(t).clone()
    }
}

/// Exact element of Q(ξ_m) with ξ_m = exp(2πi/m).
#[derive(Clone)]
pub struct CycloNum {
    tab: Arc<CycloTable>,
    c: Vec<Rational>,
}

impl PartialEq for CycloNum {
    fn eq(&self, o: &Self) -> bool {
        self.tab.m == o.tab.m && self.c == o.c
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.c.iter().enumerate() {
            if c.cmp0().is_eq() {
                continue;
            }
            parts.push(match k {
                0 => format!("{c}"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{k}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl CycloNum {
    pub fn conductor(&self) -> u32 {
        self.tab.m
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn from_coeffs(m: u32, coeffs: Vec<Rational>) -> Result<CycloNum> {
        let tab = CycloTable::get(m);
        if coeffs.len() != tab.phi {
            return Err(Error::Invalid(format!(
                "expected {} coefficients for conductor {m}",
                tab.phi
            )));
        }
        Ok(CycloNum { tab, c: coeffs })
    }

    pub fn rational(m: u32, r: &Rational) -> CycloNum {
        let tab = CycloTable::get(m);
        let mut c = vec![Rational::new(); tab.phi];
        c[0] = r.clone();
        CycloNum { tab, c }
    }

    /// ξ_m^k for any integer k.
    pub fn root_pow(m: u32, k: i64) -> CycloNum {
        let tab = CycloTable::get(m);
        let e = k.rem_euclid(m as i64) as usize;
        let c = tab.xpow[e].iter().map(|&v| Rational::from(v)).collect();
        CycloNum { tab, c }
    }

    /// `r · ξ_m^k`
    pub fn scaled_root(m: u32, r: &Rational, k: i64) -> CycloNum {
        CycloNum::root_pow(m, k).mul_rational(r)
    }

    /// The same element viewed in Q(ξ_{m·f}).
    pub fn lift(&self, f: u32) -> CycloNum {
        let m2 = self.tab.m * f;
        let mut out = CycloNum::rational(m2, &Rational::new());
        for (k, c) in self.c.iter().enumerate() {
            if c.cmp0().is_ne() {
                out = out.add(&CycloNum::scaled_root(m2, c, k as i64 * f as i64));
            }
        }
        out
    }

    pub fn checked_mul(&self, o: &CycloNum) -> Result<CycloNum> {
        if self.tab.m != o.tab.m {
            return Err(Error::ConductorMismatch(self.tab.m, o.tab.m));
        }
        Ok(self.mul(o))
    }

    /// Complex conjugation ξ ↦ ξ^{-1}.
    pub fn conj(&self) -> CycloNum {
        let m = self.tab.m as i64;
        let mut out = CycloNum::rational(self.tab.m, &Rational::new());
        for (k, c) in self.c.iter().enumerate() {
            if c.cmp0().is_ne() {
                out = out.add(&CycloNum::scaled_root(self.tab.m, c, m - k as i64));
            }
        }
        out
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(|c| c.cmp0().is_eq())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.c[0].clone())
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    fn reduce(tab: &Arc<CycloTable>, wide: Vec<Rational>) -> CycloNum {
        let phi = tab.phi;
        let mut c: Vec<Rational> = wide.iter().take(phi).cloned().collect();
        c.resize(phi, Rational::new());
        for (k, w) in wide.iter().enumerate().skip(phi) {
            if w.cmp0().is_eq() {
                continue;
            }
            for (j, &v) in tab.xpow[k].iter().enumerate() {
                if v != 0 {
                    c[j] += Rational::from(w * v);
                }
            }
        }
        CycloNum { tab: tab.clone(), c }
    }
}

pub fn root_of_unity(m: u32, k: i64, prec: u32) -> Complex {
    let pi = Float::with_val(prec, Constant::Pi);
    let ang = pi * Float::with_val(prec, 2 * k) / Float::with_val(prec, m);
    let (s, c) = ang.sin_cos(Float::new(prec));
    Complex::with_val(prec, (c, s))
}

impl Coeff for CycloNum {
    type Ctx = Arc<CycloTable>;

    fn ctx(&self) -> Self::Ctx {
        self.tab.clone()
    }
    fn zero_in(ctx: &Self::Ctx) -> Self {
        CycloNum { tab: ctx.clone(), c: vec![Rational::new(); ctx.phi] }
    }
    fn one_in(ctx: &Self::Ctx) -> Self {
        let mut z = Self::zero_in(ctx);
        z.c[0] = Rational::from(1);
        z
    }
    fn from_rational_in(ctx: &Self::Ctx, r: &Rational) -> Self {
        let mut z = Self::zero_in(ctx);
        z.c[0] = r.clone();
        z
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|c| c.cmp0().is_eq())
    }
    fn add(&self, o: &Self) -> Self {
        assert_eq!(self.tab.m, o.tab.m, "conductor mismatch");
        let c = self.c.iter().zip(&o.c).map(|(a, b)| Rational::from(a + b)).collect();
        CycloNum { tab: self.tab.clone(), c }
    }
    fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.tab.m, o.tab.m, "conductor mismatch");
        let c = self.c.iter().zip(&o.c).map(|(a, b)| Rational::from(a - b)).collect();
        CycloNum { tab: self.tab.clone(), c }
    }
    fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.tab.m, o.tab.m, "conductor mismatch");
        let phi = self.tab.phi;
        let mut wide = vec![Rational::new(); 2 * phi - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.cmp0().is_eq() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.cmp0().is_ne() {
                    wide[i + j] += Rational::from(a * b);
                }
            }
        }
        CycloNum::reduce(&self.tab, wide)
    }
    fn neg(&self) -> Self {
        CycloNum { tab: self.tab.clone(), c: self.c.iter().map(|a| Rational::from(-a)).collect() }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_rational() {
            return Some(CycloNum::rational(self.tab.m, &self.c[0].clone().recip()));
        }
        // solve (self · y) = 1 using the multiplication matrix
        let phi = self.tab.phi;
        let cols: Vec<CycloNum> = (0..phi)
            .map(|j| self.mul(&CycloNum::root_pow(self.tab.m, j as i64)))
            .collect();
        let a: Vec<Vec<Rational>> =
            (0..phi).map(|i| (0..phi).map(|j| cols[j].c[i].clone()).collect()).collect();
        let mut rhs = vec![Rational::new(); phi];
        rhs[0] = Rational::from(1);
        let y = super::linalg::solve_square(a, rhs)?;
        Some(CycloNum { tab: self.tab.clone(), c: y })
    }
    fn mul_rational(&self, r: &Rational) -> Self {
        CycloNum { tab: self.tab.clone(), c: self.c.iter().map(|a| Rational::from(a * r)).collect() }
    }
    fn to_complex(&self, prec: u32) -> Complex {
        let mut acc = Complex::new(prec);
        for (k, c) in self.c.iter().enumerate() {
            if c.cmp0().is_ne() {
                acc += root_of_unity(self.tab.m, k as i64, prec) * Float::with_val(prec, c);
            }
        }
        acc
    }
    fn to_json(&self) -> Value {
        json!({
            "m": self.tab.m,
            "coeffs": self.c.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xi(m: u32) -> CycloNum {
        CycloNum::root_pow(m, 1)
    }

    fn int(m: u32, v: i64) -> CycloNum {
        CycloNum::rational(m, &Rational::from(v))
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn products() {
        assert_eq!(xi(4).mul(&xi(4)), int(4, -1));
        let a = int(3, 1).add(&xi(3));
        assert_eq!(a.mul(&xi(3).neg()), int(3, 1));
        assert_eq!(xi(6).mul(&xi(6)).mul(&xi(6)), int(6, -1));
        assert!(xi(4).checked_mul(&xi(3)).is_err());
    }

    #[test]
    fn inverses() {
        let a = int(3, 1).add(&xi(3));
        assert_eq!(a.inv().unwrap(), xi(3).neg());
        assert_eq!(int(7, 2).inv().unwrap(), CycloNum::rational(7, &Rational::from((1, 2))));
        assert_eq!(xi(5).inv().unwrap(), CycloNum::root_pow(5, 4));
        assert!(int(5, 0).inv().is_none());
    }

    #[test]
    fn root_powers_wrap() {
        assert_eq!(CycloNum::root_pow(8, 8), int(8, 1));
        assert_eq!(CycloNum::root_pow(8, -1), CycloNum::root_pow(8, 7));
        assert_eq!(CycloNum::root_pow(6, 3), int(6, -1));
    }

    #[test]
    fn lift_and_conj() {
        let a = xi(3);
        assert_eq!(a.lift(2), CycloNum::root_pow(6, 2));
        assert_eq!(a.conj(), CycloNum::root_pow(3, 2));
        assert!(a.add(&a.conj()).is_real());
        assert_eq!(a.add(&a.conj()).as_rational(), Some(Rational::from(-1)));
    }

    #[test]
    fn embedding_value() {
        let z = xi(6).to_complex(128);
        assert!((z.real().to_f64() - 0.5).abs() < 1e-30);
        assert!((z.imag().to_f64() - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }
}
