//! Truncated q-series of ϑ, Θ₃ and j, the MacMahon function, Eisenstein
//! series and the level-t series E^r_l.
//!
//! All q-series use doubled exponents (the variable is Q^{1/2}).

use rug::ops::Pow;
use rug::Rational;

use crate::algebra::rational::{bernoulli, factorial, rpow};
use crate::algebra::zseries::{exp_linear, ZSeries};
use crate::algebra::{Coeff, CycloNum, Series};
use crate::error::{Error, Result};

/// A nonzero argument z together with a chosen square root.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaArg {
    pub z: CycloNum,
    pub sqrt_z: CycloNum,
}

impl ThetaArg {
    pub fn new(z: CycloNum, sqrt_z: CycloNum) -> Result<ThetaArg> {
        if z.is_zero() {
            return Err(Error::Invalid("theta argument must be nonzero".into()));
        }
        if sqrt_z.mul(&sqrt_z) != z {
            return Err(Error::Invalid("sqrt_z does not square to z".into()));
        }
        Ok(ThetaArg { z, sqrt_z })
    }

    /// z = ρ²·ξ_t^c with square root ρ·ξ_{2t}^c, over Q(ξ_{2t}).
    ///
    /// The exponent c is used literally, not reduced mod t, so c and c + t
    /// give the two branches.
    pub fn scaled_root(t: u32, rho: &Rational, c: i64) -> ThetaArg {
        let m = 2 * t;
        let sqrt_z = CycloNum::scaled_root(m, rho, c);
        let z = CycloNum::scaled_root(m, &Rational::from(rho * rho), 2 * c);
        ThetaArg { z, sqrt_z }
    }

    /// z⁻¹ with square root (sqrt_z)⁻¹.
    pub fn inverse(&self) -> ThetaArg {
        ThetaArg { z: self.z.inv().unwrap(), sqrt_z: self.sqrt_z.inv().unwrap() }
    }

    pub fn conductor(&self) -> u32 {
        self.z.conductor()
    }
}

fn factor_one_minus(c: &CycloNum, e2: i64, trunc2: i64) -> Series<CycloNum> {
    let one = CycloNum::one_in(&c.ctx());
    Series::from_terms(&c.ctx(), [(0, one), (e2, c.neg())], trunc2)
}

/// ∏_{b ≤ trunc2/2} 1/(1 − Q^b)², a rational series.
fn inv_euler_squared(trunc2: i64) -> Series<Rational> {
    let mut acc = Series::one(&(), trunc2);
    for b in 1..=trunc2 / 2 {
        let g = Series::geometric(2 * b, trunc2);
        acc = acc.mul(&g).mul(&g);
    }
    acc
}

fn lift(s: &Series<Rational>, m: u32) -> Series<CycloNum> {
    let ctx = CycloNum::rational(m, &Rational::new()).ctx();
    s.map_coeffs(&ctx, |r| CycloNum::rational(m, r))
}

/// ϑ(z;Q) = (z^{1/2} − z^{−1/2}) ∏_{b≥1} (1 − zQ^b)(1 − z⁻¹Q^b)/(1 − Q^b)²,
/// to doubled order `trunc2`. Factors with b > trunc2/2 only touch higher
/// exponents, so the product stops there.
pub fn vartheta(arg: &ThetaArg, trunc2: i64) -> Series<CycloNum> {
    let zi = arg.z.inv().expect("nonzero");
    let pre = arg.sqrt_z.sub(&arg.sqrt_z.inv().expect("nonzero"));
    let mut acc = Series::constant(pre, trunc2);
    for b in 1..=trunc2 / 2 {
        acc = acc.mul(&factor_one_minus(&arg.z, 2 * b, trunc2));
        acc = acc.mul(&factor_one_minus(&zi, 2 * b, trunc2));
    }
    acc.mul(&lift(&inv_euler_squared(trunc2), arg.conductor()))
}

/// Θ₃(z;Q) = Σ_a z^a Q^{a²/2}, summing |a| ≤ √trunc2.
pub fn theta3(z: &CycloNum, trunc2: i64) -> Series<CycloNum> {
    let zi = z.inv().expect("nonzero");
    let mut terms = vec![(0, CycloNum::one_in(&z.ctx()))];
    let (mut zp, mut zn) = (z.clone(), zi.clone());
    let mut a = 1i64;
    while a * a <= trunc2 {
        terms.push((a * a, zp.clone()));
        terms.push((a * a, zn.clone()));
        zp = zp.mul(z);
        zn = zn.mul(&zi);
        a += 1;
    }
    Series::from_terms(&z.ctx(), terms, trunc2)
}

/// Product form ∏(1 − Q^b)(1 + zQ^{b−1/2})(1 + z⁻¹Q^{b−1/2}) of Θ₃.
pub fn theta3_product(z: &CycloNum, trunc2: i64) -> Series<CycloNum> {
    let zi = z.inv().expect("nonzero");
    let one = CycloNum::one_in(&z.ctx());
    let mut acc = Series::one(&z.ctx(), trunc2);
    for b in 1..=(trunc2 + 1) / 2 {
        acc = acc.mul(&factor_one_minus(&one, 2 * b, trunc2));
        acc = acc.mul(&factor_one_minus(&z.neg(), 2 * b - 1, trunc2));
        acc = acc.mul(&factor_one_minus(&zi.neg(), 2 * b - 1, trunc2));
    }
    acc
}

/// j(z;Q) = Σ_a (−z)^a Q^{(a²−a)/2}.
pub fn jacobi_j(z: &CycloNum, trunc2: i64) -> Series<CycloNum> {
    let mut terms = Vec::new();
    let mz = z.neg();
    let mzi = mz.inv().expect("nonzero");
    let mut a = 0i64;
    loop {
        let (ep, en) = (a * a - a, a * a + a);
        if ep > trunc2 && en > trunc2 {
            break;
        }
        let pw = if a == 0 { CycloNum::one_in(&z.ctx()) } else { pow_c(&mz, a) };
        terms.push((ep, pw));
        if a > 0 {
            terms.push((en, pow_c(&mzi, a)));
        }
        a += 1;
    }
    Series::from_terms(&z.ctx(), terms, trunc2)
}

/// Product form ∏(1 − Q^b)(1 − zQ^{b−1})(1 − z⁻¹Q^b) of j.
pub fn jacobi_j_product(z: &CycloNum, trunc2: i64) -> Series<CycloNum> {
    let zi = z.inv().expect("nonzero");
    let one = CycloNum::one_in(&z.ctx());
    let mut acc = Series::constant(one.sub(z), trunc2);
    for b in 1..=trunc2 / 2 {
        acc = acc.mul(&factor_one_minus(&one, 2 * b, trunc2));
        acc = acc.mul(&factor_one_minus(z, 2 * b, trunc2));
        acc = acc.mul(&factor_one_minus(&zi, 2 * b, trunc2));
    }
    acc
}

fn pow_c(x: &CycloNum, k: i64) -> CycloNum {
    let mut out = CycloNum::one_in(&x.ctx());
    for _ in 0..k {
        out = out.mul(x);
    }
    out
}

/// M(x;q) = ∏_{j≥1}(1 − x q^{−j})^j as a power series in a formal variable x,
/// computed exactly as exp(−Σ_m x^m p_m/m) with p_m = q^{−m}/(1 − q^{−m})².
pub fn macmahon(q: &Rational, order: i64) -> Result<Series<Rational>> {
    if Rational::from(q.abs_ref()) <= 1 {
        return Err(Error::Invalid("need |q| > 1".into()));
    }
    let mut terms = Vec::new();
    for m in 1..=order {
        let x = rpow(q, -m);
        let d = Rational::from(1) - &x;
        let pm = x / Rational::from(&d * &d);
        terms.push((m, -pm / Rational::from(m)));
    }
    Series::from_terms(&(), terms, order).exp()
}

/// E_{2k}(Q) = −B_{2k}/(4k) + Σ_{n≥1} σ_{2k−1}(n) Qⁿ, to Q^order.
pub fn eisenstein(k: u32, order: i64) -> Series<Rational> {
    assert!(k >= 1);
    let b = bernoulli(2 * k as usize);
    let c0 = -b[2 * k as usize].clone() / Rational::from(4 * k);
    let mut terms = vec![(0, c0)];
    for n in 1..=order {
        let mut sigma = rug::Integer::new();
        for d in (1..=n).filter(|d| n % d == 0) {
            sigma += rug::Integer::from(d).pow(2 * k - 1);
        }
        terms.push((2 * n, Rational::from(sigma)));
    }
    Series::from_terms(&(), terms, 2 * order)
}

/// ϑ(x·e^z;Q) expanded in z to `zorder` with q-series coefficients, using the
/// branch (x e^z)^{1/2} = x^{1/2} e^{z/2}.
pub fn vartheta_exp(x: &ThetaArg, zorder: i64, trunc2: i64) -> ZSeries<CycloNum> {
    let ctx = x.z.ctx();
    let si = x.sqrt_z.inv().expect("nonzero");
    let half = Rational::from((1, 2));
    let ep = exp_linear(&half, zorder);
    let em = exp_linear(&-half, zorder);
    let pre_terms = (0..=zorder).map(|k| {
        let a = x.sqrt_z.mul_rational(&ep.coeff(k).unwrap());
        let b = si.mul_rational(&em.coeff(k).unwrap());
        (k, a.sub(&b))
    });
    let pre = Series::from_terms(&ctx, pre_terms, zorder);
    let mut r = ZSeries::from_scalar(&pre, trunc2);
    let xi = x.z.inv().expect("nonzero");
    let one = CycloNum::one_in(&ctx);
    for b in 1..=trunc2 / 2 {
        r.mul_one_minus_exp(&x.z, 2 * b, 1);
        r.mul_one_minus_exp(&xi, 2 * b, -1);
        r.div_one_minus(&one, 2 * b).expect("unit");
        r.div_one_minus(&one, 2 * b).expect("unit");
    }
    r
}

/// log(ϑ(x e^z)/ϑ(x)) in z to `zorder`, coefficients to doubled order `trunc2`.
pub fn log_theta_ratio(x: &ThetaArg, zorder: i64, trunc2: i64) -> Result<ZSeries<CycloNum>> {
    let th = vartheta(x, trunc2);
    if th.valuation() != 0 {
        return Err(Error::SingularTheta("ϑ(x) has no constant term".into()));
    }
    let num = vartheta_exp(x, zorder, trunc2);
    num.div_series(&th)?.log()
}

/// E^r_l(Q) for l = 1..=lmax, where log(ϑ(ξ_t^r e^z)/ϑ(ξ_t^r)) = Σ z^l/l!·E^r_l,
/// to Q^order, over Q(ξ_{2t}).
pub fn level_series_all(t: u32, r: i64, lmax: u32, order: i64) -> Result<Vec<Series<CycloNum>>> {
    if r.rem_euclid(t as i64) == 0 {
        return Err(Error::Invalid(format!("r = {r} is divisible by t = {t}")));
    }
    let x = ThetaArg::scaled_root(t, &Rational::from(1), r);
    let lg = log_theta_ratio(&x, lmax as i64, 2 * order)?;
    Ok((1..=lmax)
        .map(|l| lg.coeff(l as i64).unwrap().scale_rational(&Rational::from(factorial(l))))
        .collect())
}

pub fn level_series(t: u32, r: i64, l: u32, order: i64) -> Result<Series<CycloNum>> {
    assert!(l >= 1);
    Ok(level_series_all(t, r, l, order)?.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(m: u32, v: Rational) -> CycloNum {
        CycloNum::rational(m, &v)
    }

    #[test]
    fn vartheta_at_one_vanishes() {
        let a = ThetaArg::scaled_root(2, &Rational::from(1), 0);
        assert!(vartheta(&a, 8).is_zero());
    }

    #[test]
    fn vartheta_first_order() {
        let a = ThetaArg::scaled_root(3, &Rational::from(2), 1);
        let th = vartheta(&a, 2);
        let pre = a.sqrt_z.sub(&a.sqrt_z.inv().unwrap());
        let two = rat(6, Rational::from(2));
        let c1 = two.sub(&a.z).sub(&a.z.inv().unwrap());
        assert_eq!(th.coeff(0).unwrap(), pre);
        assert_eq!(th.coeff(2).unwrap(), pre.mul(&c1));
    }

    #[test]
    fn vartheta_quasi_period() {
        // ϑ(Qz) = −Q^{−1/2} z⁻¹ ϑ(z), z = 4, checked via the product formula
        let n = 12;
        let a = ThetaArg::scaled_root(1, &Rational::from(2), 0);
        let ctx = a.z.ctx();
        let zi = a.z.inv().unwrap();
        let one = CycloNum::one_in(&ctx);
        // prefactor of ϑ(Qz): sqrt_z Q^{1/2} − sqrt_z⁻¹ Q^{−1/2}
        let mut lhs = Series::from_terms(&ctx, [(1, a.sqrt_z.clone()), (-1, a.sqrt_z.inv().unwrap().neg())], n + 2);
        for b in 1..=n {
            lhs = lhs.mul(&factor_one_minus(&a.z, 2 * b + 2, n + 2));
            let f = Series::from_terms(&ctx, [(0, one.clone()), (2 * b - 2, zi.neg())], n + 2);
            lhs = lhs.mul(&f);
        }
        lhs = lhs.mul(&lift(&inv_euler_squared(n + 2), a.conductor()));
        let rhs = vartheta(&a, n + 2).scale(&zi.neg()).shift(-1);
        assert_eq!(lhs.truncate(n), rhs.truncate(n));
    }

    #[test]
    fn theta3_low_order() {
        let z = CycloNum::scaled_root(6, &Rational::from((3, 2)), 2);
        let s = theta3(&z, 1);
        assert_eq!(s.coeff(0).unwrap(), CycloNum::one_in(&z.ctx()));
        assert_eq!(s.coeff(1).unwrap(), z.add(&z.inv().unwrap()));
    }

    #[test]
    fn theta3_sum_equals_product() {
        let z = CycloNum::scaled_root(3, &Rational::from((3, 2)), 1);
        assert_eq!(theta3(&z, 16), theta3_product(&z, 16));
    }

    #[test]
    fn theta3_quasi_period() {
        // Θ₃(Qz) = Σ z^a Q^{a + a²/2} = Q^{−1/2} z⁻¹ Θ₃(z)
        let z = CycloNum::rational(1, &Rational::from((5, 3)));
        let n = 12;
        let zi = z.inv().unwrap();
        let mut terms = Vec::new();
        for a in -6i64..=6 {
            let c = if a >= 0 { pow_c(&z, a) } else { pow_c(&zi, -a) };
            terms.push((a * a + 2 * a, c));
        }
        let lhs = Series::from_terms(&z.ctx(), terms, n);
        let rhs = theta3(&z, n + 1).scale(&zi).shift(-1);
        assert_eq!(lhs, rhs.truncate(n));
    }

    #[test]
    fn jacobi_triple_product() {
        for z in [
            CycloNum::rational(1, &Rational::from(2)),
            CycloNum::root_pow(3, 1),
            CycloNum::rational(1, &Rational::from((-3, 2))),
        ] {
            assert_eq!(jacobi_j(&z, 20), jacobi_j_product(&z, 20));
        }
    }

    #[test]
    fn theta3_is_shifted_j() {
        // j(−zQ^{1/2}) via the product form with the shifted argument
        let z = CycloNum::scaled_root(4, &Rational::from(3), 1);
        let n = 16;
        let ctx = z.ctx();
        let one = CycloNum::one_in(&ctx);
        let zi = z.inv().unwrap();
        let mut p = Series::one(&ctx, n);
        for b in 1..=n / 2 + 1 {
            p = p.mul(&factor_one_minus(&one, 2 * b, n));
            p = p.mul(&factor_one_minus(&z.neg(), 2 * b - 1, n));
            p = p.mul(&factor_one_minus(&zi.neg(), 2 * b - 1, n));
        }
        assert_eq!(theta3(&z, n), p);
    }

    #[test]
    fn theta_derivative_at_one() {
        let x = ThetaArg::scaled_root(1, &Rational::from(1), 0);
        let e = vartheta_exp(&x, 2, 16);
        assert!(e.coeff(0).unwrap().is_zero());
        assert_eq!(*e.coeff(1).unwrap(), Series::one(&x.z.ctx(), 16));
    }

    #[test]
    fn macmahon_terms() {
        let q = Rational::from(2);
        let m = macmahon(&q, 3).unwrap();
        assert_eq!(m.coeff(0), Some(Rational::from(1)));
        // −q⁻¹/(1 − q⁻¹)² = −2 at q = 2
        assert_eq!(m.coeff(1), Some(Rational::from(-2)));
    }

    #[test]
    fn macmahon_vs_finite_product() {
        // ∏_{j≤40}(1 − x 2^{−j})^j agrees to ~2^{−40}
        let q = Rational::from(2);
        let m = macmahon(&q, 3).unwrap();
        let mut p = Series::one(&(), 3);
        for j in 1..=40i64 {
            let f = Series::from_terms(&(), [(0, Rational::from(1)), (1, -rpow(&q, -j))], 3);
            for _ in 0..j {
                p = p.mul(&f);
            }
        }
        for k in 0..=3 {
            let d = m.coeff(k).unwrap() - p.coeff(k).unwrap();
            assert!(d.abs() < Rational::from((1, 1u64 << 30)), "x^{k}");
        }
    }

    #[test]
    fn eisenstein_terms() {
        let e2 = eisenstein(1, 4);
        assert_eq!(e2.coeff(0), Some(Rational::from((-1, 24))));
        assert_eq!(e2.coeff(2), Some(Rational::from(1)));
        assert_eq!(e2.coeff(8), Some(Rational::from(7)));
        assert_eq!(eisenstein(2, 3).coeff(4), Some(Rational::from(9)));
        assert_eq!(eisenstein(2, 3).coeff(0), Some(Rational::from((1, 240))));
    }

    /// E^r_l from the divisor-sum form of the log of the product formula.
    fn level_series_divisor(t: u32, r: i64, l: u32, order: i64) -> Series<CycloNum> {
        let x = ThetaArg::scaled_root(t, &Rational::from(1), r);
        let m = 2 * t;
        let ctx = x.z.ctx();
        let si = x.sqrt_z.inv().unwrap();
        // log of (x^{1/2}e^{z/2} − x^{−1/2}e^{−z/2})/(x^{1/2} − x^{−1/2})
        let lz = l as i64;
        let ep = exp_linear(&Rational::from((1, 2)), lz);
        let em = exp_linear(&Rational::from((-1, 2)), lz);
        let den = x.sqrt_z.sub(&si).inv().unwrap();
        let f = Series::from_terms(
            &ctx,
            (0..=lz).map(|k| {
                let v = x.sqrt_z.mul_rational(&ep.coeff(k).unwrap()).sub(&si.mul_rational(&em.coeff(k).unwrap()));
                (k, v.mul(&den))
            }),
            lz,
        );
        let c0 = f.log().unwrap().coeff(lz).unwrap().mul_rational(&Rational::from(factorial(l)));
        let mut terms = vec![(0, c0)];
        let sign = if l.is_multiple_of(2) { 1 } else { -1 };
        for n in 1..=order {
            let mut acc = CycloNum::zero_in(&ctx);
            for d in (1..=n).filter(|d| n % d == 0) {
                let w = Rational::from(rug::Integer::from(d).pow(l - 1));
                let xp = CycloNum::root_pow(m, 2 * r * d);
                let xm = CycloNum::root_pow(m, -2 * r * d).mul_rational(&Rational::from(sign));
                acc = acc.add(&xp.add(&xm).mul_rational(&w));
            }
            terms.push((2 * n, acc.neg()));
        }
        Series::from_terms(&ctx, terms, 2 * order)
    }

    #[test]
    fn level_series_two_routes() {
        for (t, r) in [(3u32, 1i64), (3, 2), (4, 1), (2, 1)] {
            let all = level_series_all(t, r, 4, 8).unwrap();
            for l in 1..=4u32 {
                assert_eq!(all[l as usize - 1], level_series_divisor(t, r, l, 8), "t={t} r={r} l={l}");
            }
        }
    }

    #[test]
    fn level_series_t2_matches_eisenstein() {
        // 2(E_{2k}(Q) − 2^{2k}E_{2k}(Q²)) for 2k ∈ {2, 4}
        let all = level_series_all(2, 1, 4, 10).unwrap();
        for k in 1..=2u32 {
            let e = eisenstein(k, 10);
            let e2 = eisenstein(k, 5).rescale(2).truncate(20);
            let comb = e.sub(&e2.scale_rational(&Rational::from(1u32 << (2 * k)))).scale_rational(&Rational::from(2));
            assert_eq!(all[2 * k as usize - 1], lift(&comb, 4), "weight {}", 2 * k);
        }
    }

    #[test]
    fn level_series_rejects_trivial_root() {
        assert!(level_series(3, 3, 1, 4).is_err());
    }
}
