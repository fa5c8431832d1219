//! Schur and skew Schur functions at the principal specializations q^ρ and
//! q^{ν+ρ}, and the topological vertex, for a fixed rational |q| > 1.
//!
//! Values live in Q(q^{1/2}), represented by [`QuadNum`].

use std::sync::Arc;

use rug::Rational;

use crate::algebra::linalg::det;
use crate::algebra::quad::{QuadCtx, QuadNum};
use crate::algebra::rational::rpow;
use crate::algebra::{Coeff, Series};
use crate::error::{Error, Result};
use crate::partitions::{partitions_of, Partition};

/// The point x_i = q^{ν_i − i + 1/2}, i ≥ 1.
#[derive(Clone, Debug)]
pub struct SpecPoint {
    q: Rational,
    nu: Partition,
    ctx: Arc<QuadCtx>,
}

impl SpecPoint {
    pub fn new(q: &Rational, nu: Partition) -> Result<SpecPoint> {
        if Rational::from(q.abs_ref()) <= 1 {
            return Err(Error::Invalid(format!("need |q| > 1, got {q}")));
        }
        Ok(SpecPoint { q: q.clone(), nu, ctx: QuadNum::context(&Rational::from(q.abs_ref())) })
    }

    /// q^ρ, i.e. ν = ∅.
    pub fn rho(q: &Rational) -> Result<SpecPoint> {
        SpecPoint::new(q, Partition::empty())
    }

    pub fn ctx(&self) -> &Arc<QuadCtx> {
        &self.ctx
    }

    /// q^{e/2}; negative q only supports even e.
    fn qhalf(&self, e: i64) -> QuadNum {
        if self.q.cmp0().is_lt() {
            assert!(e % 2 == 0, "half powers of negative q are not supported");
            return QuadNum::from_rational_in(&self.ctx, &rpow(&self.q, e / 2));
        }
        QuadNum::half_pow(&self.ctx, e)
    }

    /// p_k = Σ_{i≤l} q^{k(ν_i−i+1/2)} + q^{k(−l−1/2)}/(1 − q^{−k}).
    pub fn power_sum(&self, k: u32) -> Result<QuadNum> {
        assert!(k >= 1);
        let k = k as i64;
        let l = self.nu.len() as i64;
        let mut acc = QuadNum::zero_in(&self.ctx);
        for (i, &p) in self.nu.parts().iter().enumerate() {
            acc = acc.add(&self.qhalf(k * (2 * p as i64 - 2 * (i as i64 + 1) + 1)));
        }
        let denom = Rational::from(1) - rpow(&self.q, -k);
        if denom.cmp0().is_eq() {
            return Err(Error::DivisionByZero);
        }
        let tail = self.qhalf(k * (-2 * l - 1)).mul_rational(&denom.recip());
        Ok(acc.add(&tail))
    }

    /// h_0..h_rmax via Newton's identities r·h_r = Σ_{i=1}^r p_i h_{r−i}.
    pub fn complete_homogeneous(&self, rmax: usize) -> Result<Vec<QuadNum>> {
        let p: Vec<QuadNum> = (1..=rmax as u32).map(|k| self.power_sum(k)).collect::<Result<_>>()?;
        let mut h = vec![QuadNum::one_in(&self.ctx)];
        for r in 1..=rmax {
            let mut acc = QuadNum::zero_in(&self.ctx);
            for i in 1..=r {
                acc = acc.add(&p[i - 1].mul(&h[r - i]));
            }
            h.push(acc.mul_rational(&Rational::from((1, r as i64))));
        }
        Ok(h)
    }

    /// s_{λ/η} = det(h_{λ_i − η_j − i + j}); zero when η ⊄ λ.
    pub fn skew_schur(&self, lam: &Partition, eta: &Partition) -> Result<QuadNum> {
        let h = self.complete_homogeneous(lam.part(1) as usize + lam.len())?;
        Ok(skew_schur_from_h(&h, lam, eta, &self.ctx))
    }

    pub fn schur(&self, lam: &Partition) -> Result<QuadNum> {
        self.skew_schur(lam, &Partition::empty())
    }
}

/// Jacobi–Trudi with a precomputed table of h_r.
pub fn skew_schur_from_h(h: &[QuadNum], lam: &Partition, eta: &Partition, ctx: &Arc<QuadCtx>) -> QuadNum {
    if !lam.contains(eta) {
        return QuadNum::zero_in(ctx);
    }
    let n = lam.len();
    if n == 0 {
        return QuadNum::one_in(ctx);
    }
    let m: Vec<Vec<QuadNum>> = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let r = lam.part(i) as i64 - eta.part(j) as i64 - i as i64 + j as i64;
                    if r < 0 {
                        QuadNum::zero_in(ctx)
                    } else {
                        h[r as usize].clone()
                    }
                })
                .collect()
        })
        .collect();
    det(m, ctx)
}

/// s_λ(q^ρ) = q^{−n(λ)−|λ|/2} ∏_{boxes} 1/(1 − q^{−h}).
pub fn schur_hook_formula(lam: &Partition, q: &Rational) -> Result<QuadNum> {
    let sp = SpecPoint::rho(q)?;
    let mut prod = Rational::from(1);
    for (_, h) in lam.hook_lengths() {
        prod *= Rational::from(1) - rpow(q, -(h as i64));
    }
    let e = -2 * lam.n_statistic() as i64 - lam.size() as i64;
    Ok(sp.qhalf(e).mul_rational(&prod.recip()))
}

/// C_{λμν}(q) = q^{κ(λ)/2+κ(ν)/2} s_{νᵗ}(q^ρ) Σ_η s_{λᵗ/η}(q^{ν+ρ}) s_{μ/η}(q^{νᵗ+ρ}),
/// summing over η ⊆ λᵗ ∩ μ with |η| ≤ `eta_bound`.
pub fn topological_vertex_bounded(
    lam: &Partition,
    mu: &Partition,
    nu: &Partition,
    q: &Rational,
    eta_bound: u32,
) -> Result<QuadNum> {
    let lt = lam.conjugate();
    let nt = nu.conjugate();
    let rho = SpecPoint::rho(q)?;
    let a = SpecPoint::new(q, nu.clone())?;
    let b = SpecPoint::new(q, nt.clone())?;
    let ctx = rho.ctx().clone();
    let ha = a.complete_homogeneous(lt.part(1) as usize + lt.len())?;
    let hb = b.complete_homogeneous(mu.part(1) as usize + mu.len())?;
    let mut sum = QuadNum::zero_in(&ctx);
    for eta in lt.subpartitions() {
        if !mu.contains(&eta) || eta.size() > eta_bound {
            continue;
        }
        let x = skew_schur_from_h(&ha, &lt, &eta, &ctx);
        let y = skew_schur_from_h(&hb, mu, &eta, &ctx);
        sum = sum.add(&x.mul(&y));
    }
    let pre = rho.qhalf(lam.kappa() + nu.kappa()).mul(&rho.schur(&nt)?);
    Ok(pre.mul(&sum))
}

pub fn topological_vertex(lam: &Partition, mu: &Partition, nu: &Partition, q: &Rational) -> Result<QuadNum> {
    topological_vertex_bounded(lam, mu, nu, q, lam.size().min(mu.size()))
}

/// Left side of the Cauchy-type identity
/// Σ_λ z^{|λ|} s_λ(q^{ν¹+ρ}) s_{λᵗ}(q^{ν²ᵗ+ρ}) as a series in z.
pub fn dual_cauchy_sum(nu1: &Partition, nu2: &Partition, q: &Rational, order: u32) -> Result<Series<QuadNum>> {
    let a = SpecPoint::new(q, nu1.clone())?;
    let b = SpecPoint::new(q, nu2.conjugate())?;
    let ctx = a.ctx().clone();
    let ha = a.complete_homogeneous(2 * order as usize)?;
    let hb = b.complete_homogeneous(2 * order as usize)?;
    let mut terms = Vec::new();
    for r in 0..=order {
        let mut acc = QuadNum::zero_in(&ctx);
        for lam in partitions_of(r) {
            let x = skew_schur_from_h(&ha, &lam, &Partition::empty(), &ctx);
            let y = skew_schur_from_h(&hb, &lam.conjugate(), &Partition::empty(), &ctx);
            acc = acc.add(&x.mul(&y));
        }
        terms.push((r as i64, acc));
    }
    Ok(Series::from_terms(&ctx, terms, order as i64))
}

/// ∏_{j,k≥1}(1 + z q^{−j−k+1}) = exp(Σ_r (−1)^{r−1} z^r p_r / r) with
/// p_r = q^{−r}/(1 − q^{−r})².
pub fn staircase_product(q: &Rational, order: u32) -> Series<Rational> {
    let mut terms = Vec::new();
    for r in 1..=order as i64 {
        let x = rpow(q, -r);
        let one_minus = Rational::from(1) - &x;
        let pr = x / Rational::from(&one_minus * &one_minus);
        let sign = if r % 2 == 1 { 1 } else { -1 };
        terms.push((r, pr * Rational::from((sign, r))));
    }
    Series::from_terms(&(), terms, order as i64).exp().expect("positive valuation")
}

/// Right side of the identity: the staircase product times two finite products.
pub fn dual_cauchy_product(nu1: &Partition, nu2: &Partition, q: &Rational, order: u32) -> Series<Rational> {
    let n1t = nu1.conjugate();
    let n2t = nu2.conjugate();
    // the second product uses ν²_j; with ν^{2,t}_j the identity fails unless ν² is self-conjugate
    let mut acc = staircase_product(q, order);
    let mut times = |e: i64| {
        let f = Series::from_terms(&(), [(0, Rational::from(1)), (1, rpow(q, e))], order as i64);
        acc = acc.mul(&f);
    };
    for (j, k) in nu1.boxes() {
        times(nu1.part(j) as i64 + n2t.part(k) as i64 - j as i64 - k as i64 + 1);
    }
    for (j, k) in nu2.boxes() {
        times(-(n1t.part(k) as i64) - nu2.part(j) as i64 + j as i64 + k as i64 - 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn r(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    #[test]
    fn power_sums() {
        let q = Rational::from(4);
        let s = SpecPoint::new(&q, p(&[1])).unwrap();
        assert_eq!(s.power_sum(1).unwrap().as_rational(), Some(r(13, 6)));
        // ν = ∅: 1/(q^{k/2} − q^{−k/2})
        let s0 = SpecPoint::rho(&q).unwrap();
        assert_eq!(s0.power_sum(1).unwrap().as_rational(), Some(r(2, 3)));
        assert_eq!(s0.power_sum(2).unwrap().as_rational(), Some(r(4, 15)));
    }

    #[test]
    fn power_sum_matches_numeric_tail() {
        use rug::ops::Pow;
        let q = Rational::from(9);
        let s0 = SpecPoint::rho(&q).unwrap();
        for k in 1..=3u32 {
            let exact = s0.power_sum(k).unwrap().as_rational().unwrap();
            let mut num = rug::Float::with_val(256, 0);
            for i in 1..=200i64 {
                let e = k as i32 * (1 - 2 * i as i32);
                num += rug::Float::with_val(256, 3).pow(e);
            }
            let diff = num - rug::Float::with_val(256, &exact);
            assert!(diff.abs() < 1e-30);
        }
    }

    #[test]
    fn newton_identities() {
        let s0 = SpecPoint::rho(&Rational::from(4)).unwrap();
        let h = s0.complete_homogeneous(2).unwrap();
        assert!(h[0].is_one());
        assert_eq!(h[1].as_rational(), Some(r(2, 3)));
        assert_eq!(h[2].as_rational(), Some(r(16, 45)));
    }

    #[test]
    fn skew_basics() {
        let s = SpecPoint::new(&Rational::from(2), p(&[2, 1])).unwrap();
        let lam = p(&[3, 1]);
        assert!(s.skew_schur(&lam, &lam).unwrap().is_one());
        assert!(s.skew_schur(&p(&[1]), &p(&[2])).unwrap().is_zero());
        // s_(1)(q^ρ) = q^{−1/2}/(1 − q^{−1})
        let q = Rational::from(2);
        let s1 = SpecPoint::rho(&q).unwrap().schur(&p(&[1])).unwrap();
        let ctx = s1.ctx();
        let expect = QuadNum::half_pow(&ctx, -1).mul_rational(&Rational::from(2));
        assert_eq!(s1, expect);
    }

    #[test]
    fn hook_formula_small() {
        let q = Rational::from((3, 2));
        let rho = SpecPoint::rho(&q).unwrap();
        for n in 0..=5 {
            for lam in partitions_of(n) {
                assert_eq!(rho.schur(&lam).unwrap(), schur_hook_formula(&lam, &q).unwrap(), "{lam}");
            }
        }
    }

    #[test]
    fn vertex_small_values() {
        let q = Rational::from(3);
        let e = Partition::empty();
        assert!(topological_vertex(&e, &e, &e, &q).unwrap().is_one());
        let c = topological_vertex(&e, &e, &p(&[1]), &q).unwrap();
        assert_eq!(c, SpecPoint::rho(&q).unwrap().schur(&p(&[1])).unwrap());
    }

    #[test]
    fn vertex_rotation_spot() {
        let q = Rational::from(2);
        let (a, b, c) = (p(&[2]), p(&[1]), p(&[1, 1]));
        let x = topological_vertex(&a, &b, &c, &q).unwrap();
        let y = topological_vertex(&b, &c, &a, &q).unwrap();
        let z = topological_vertex(&c, &a, &b, &q).unwrap();
        assert_eq!(x, y);
        assert_eq!(y, z);
    }

    #[test]
    fn dual_cauchy_spot() {
        let q = Rational::from(2);
        let lhs = dual_cauchy_sum(&p(&[2]), &p(&[1]), &q, 4).unwrap();
        let rhs = dual_cauchy_product(&p(&[2]), &p(&[1]), &q, 4);
        for k in 0..=4 {
            assert_eq!(lhs.coeff(k).unwrap().as_rational(), rhs.coeff(k), "z^{k}");
        }
    }

    #[test]
    fn dual_cauchy_non_self_conjugate() {
        let q = Rational::from(2);
        for (a, b) in [(p(&[2]), p(&[1, 1])), (p(&[1]), p(&[3])), (p(&[2, 1]), p(&[2]))] {
            let lhs = dual_cauchy_sum(&a, &b, &q, 4).unwrap();
            let rhs = dual_cauchy_product(&a, &b, &q, 4);
            for k in 0..=4 {
                assert_eq!(lhs.coeff(k).unwrap().as_rational(), rhs.coeff(k), "{a} {b} z^{k}");
            }
        }
    }
}
