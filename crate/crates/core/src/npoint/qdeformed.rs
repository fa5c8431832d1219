use rug::Rational;

use super::{tail_sum, SValue};
use crate::algebra::bivariate::BiSeries;
use crate::algebra::quad::QuadNum;
use crate::algebra::Coeff;
use crate::error::{Error, Result};
use crate::partitions::{partitions_of, Partition};
use crate::symfunc::topological_vertex;
use crate::theta::macmahon;

fn check_q(q: &Rational) -> Result<()> {
    if Rational::from(q.abs_ref()) <= 1 {
        return Err(Error::Invalid(format!("need |q| > 1, got {q}")));
    }
    Ok(())
}

/// Σ_{|μ|+|ν| ≤ order} (−Q₁)^{|μ|} (−Q)^{|ν|} C_{∅,μᵗ,ν} C_{∅,μ,νᵗ} · w(ν).
fn weighted_z(q: &Rational, order_total: u32, w: impl Fn(&Partition) -> Rational) -> Result<BiSeries<QuadNum>> {
    check_q(q)?;
    let ctx = QuadNum::context(&Rational::from(q.abs_ref()));
    let trunc2 = 2 * order_total as i64;
    let empty = Partition::empty();
    let mut z = BiSeries::zero(&ctx, trunc2);
    for nsize in 0..=order_total {
        for nu in partitions_of(nsize) {
            let nut = nu.conjugate();
            let wn = w(&nu);
            for msize in 0..=order_total - nsize {
                let sign = if (msize + nsize) % 2 == 0 { 1 } else { -1 };
                for mu in partitions_of(msize) {
                    let a = topological_vertex(&empty, &mu.conjugate(), &nu, q)?;
                    let b = topological_vertex(&empty, &mu, &nut, q)?;
                    let c = a.mul(&b).mul_rational(&Rational::from(sign)).mul_rational(&wn);
                    z.add_term((2 * nsize as i64, 2 * msize as i64), &c);
                }
            }
        }
    }
    Ok(z)
}

/// The q-deformed partition function from its defining double sum.
pub fn qdeformed_z_sum(q: &Rational, order_total: u32) -> Result<BiSeries<QuadNum>> {
    weighted_z(q, order_total, |_| Rational::from(1))
}

/// The same function from its MacMahon product form.
pub fn qdeformed_z_product(q: &Rational, order_total: u32) -> Result<BiSeries<QuadNum>> {
    check_q(q)?;
    let ctx = QuadNum::context(&Rational::from(q.abs_ref()));
    let trunc2 = 2 * order_total as i64;
    let lift = |(da, db): (i64, i64), f: &dyn Fn(i64) -> Result<crate::algebra::Series<Rational>>| -> Result<BiSeries<QuadNum>> {
        let k = trunc2 / (da + db);
        let s = f(k)?.map_coeffs(&ctx, |r| QuadNum::from_rational_in(&ctx, r));
        Ok(BiSeries::from_univariate(&s, (da, db), trunc2))
    };
    let m = |k: i64| macmahon(q, k);
    let geo = |k: i64| Ok(crate::algebra::Series::geometric(1, k));
    let mut acc = lift((0, 2), &m)?;
    for b in 1..=order_total as i64 {
        let diag = (2 * b, 2 * b);
        acc = acc.mul(&lift((2 * b, 2 * b + 2), &m)?);
        acc = acc.mul(&lift((2 * b, 2 * b - 2), &m)?);
        acc = acc.mul(&lift(diag, &geo)?);
        let md = lift(diag, &m)?;
        acc = acc.div(&md.mul(&md))?;
    }
    Ok(acc)
}

/// ⟨∏_j T_j⟩ in the q-deformed measure, normalized by the partition function.
pub fn qdeformed_zn_sum(q: &Rational, s: &[SValue], order_total: u32) -> Result<BiSeries<QuadNum>> {
    let num = weighted_z(q, order_total, |nu| {
        let mut p = Rational::from(1);
        for v in s {
            p *= tail_sum(nu, v);
        }
        p
    })?;
    num.div(&qdeformed_z_sum(q, order_total)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::SpecPoint;

    fn r(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    #[test]
    fn sum_and_product_agree() {
        for q in [r(2, 1), r(3, 2)] {
            assert_eq!(qdeformed_z_sum(&q, 4).unwrap(), qdeformed_z_product(&q, 4).unwrap(), "q = {q}");
        }
    }

    #[test]
    fn leading_coefficients() {
        let q = r(2, 1);
        let z = qdeformed_z_sum(&q, 2).unwrap();
        assert!(z.coeff(0, 0).unwrap().is_one());
        let s1 = SpecPoint::rho(&q).unwrap().schur(&Partition::new(vec![1]).unwrap()).unwrap();
        assert_eq!(z.coeff(0, 2).unwrap(), s1.mul(&s1).neg());
        assert_eq!(qdeformed_z_product(&q, 0).unwrap(), BiSeries::one(z.ctx(), 0));
    }

    #[test]
    fn n_point_limits() {
        let q = r(3, 1);
        let v = SValue::parse("4").unwrap();
        assert!(qdeformed_zn_sum(&q, &[], 3).unwrap().coeff(0, 0).unwrap().is_one());
        let z1 = qdeformed_zn_sum(&q, std::slice::from_ref(&v), 3).unwrap();
        assert_eq!(z1.coeff(0, 0).unwrap().as_rational(), Some(r(2, 3)));
        // Q₁ = 0 keeps μ = ∅, where C_{∅,∅,ν} C_{∅,∅,νᵗ} = s_ν(q^ρ) s_{νᵗ}(q^ρ)
        let rho = SpecPoint::rho(&q).unwrap();
        let ctx = rho.ctx().clone();
        let mut num = crate::algebra::Series::zero(&ctx, 6);
        let mut den = crate::algebra::Series::zero(&ctx, 6);
        for k in 0..=3u32 {
            for nu in partitions_of(k) {
                let w = rho.schur(&nu).unwrap().mul(&rho.schur(&nu.conjugate()).unwrap());
                let w = if k % 2 == 1 { w.neg() } else { w };
                num.add_term(2 * k as i64, &w.mul_rational(&tail_sum(&nu, &v)));
                den.add_term(2 * k as i64, &w);
            }
        }
        assert_eq!(z1.at_q1_zero(), num.div(&den).unwrap());
    }
}
