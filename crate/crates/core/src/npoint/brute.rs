use rug::Rational;

use super::{validate_svector, SValue};
use crate::algebra::rational::rpow;
use crate::algebra::Series;
use crate::error::{Error, Result};
use crate::partitions::{enumerate_t_cores, for_each_partition_up_to, Partition};

/// Powers √s^e for e in [−span, span], plus the geometric tails.
struct TTable {
    span: i64,
    pw: Vec<Rational>,
    /// tail[l] = s^{1/2−l}/(s − 1)
    tail: Vec<Rational>,
}

impl TTable {
    fn new(v: &SValue, max_size: u32) -> TTable {
        let span = 2 * max_size as i64 + 3;
        let pw = (-span..=span).map(|e| rpow(&v.sqrt_s, e)).collect();
        let inv = Rational::from(&v.s - 1u32).recip();
        let tail = (0..=max_size as i64 + 1).map(|l| rpow(&v.sqrt_s, 1 - 2 * l) * &inv).collect();
        TTable { span, pw, tail }
    }

    fn pow(&self, e: i64) -> &Rational {
        &self.pw[(e + self.span) as usize]
    }

    /// Σ_{i≥1} s^{ν_i − i + 1/2}, closed by the geometric tail.
    fn t_value(&self, nu: &Partition) -> Rational {
        let mut acc = self.tail[nu.len()].clone();
        for (i, &p) in nu.parts().iter().enumerate() {
            acc += self.pow(2 * p as i64 - 2 * i as i64 - 1);
        }
        acc
    }
}

/// Σ_{i≥1} s^{ν_i−i+1/2} for s > 1.
pub fn tail_sum(nu: &Partition, v: &SValue) -> Rational {
    TTable::new(v, nu.size().max(nu.len() as u32)).t_value(nu)
}

/// Σ over t-cores of Q^{|ν|}, doubled exponents, to Q^order.
pub fn t_core_generating_series(t: u32, order: u32) -> Series<Rational> {
    let cores = enumerate_t_cores(t, order);
    let terms = cores.iter().enumerate().map(|(n, c)| (2 * n as i64, Rational::from(c.len())));
    Series::from_terms(&(), terms, 2 * order as i64)
}

/// Which exponent k_n to use in ∏_{n≥1} (1 − Q^{nt})^{k_n}/(1 − Qⁿ).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoreProductExponent {
    /// k_n = t
    T,
    /// k_n = n
    N,
}

/// The product ∏_{n≥1} (1 − Q^{nt})^{k_n}/(1 − Qⁿ) to Q^order, doubled exponents.
pub fn t_core_product(t: u32, exponent: CoreProductExponent, order: u32) -> Series<Rational> {
    let t2 = 2 * order as i64;
    let mut acc = Series::one(&(), t2);
    for n in 1..=order as i64 {
        acc = acc.mul(&Series::geometric(2 * n, t2));
        let e = 2 * n * t as i64;
        if e > t2 {
            continue;
        }
        let k = match exponent {
            CoreProductExponent::T => t,
            CoreProductExponent::N => n as u32,
        };
        let f = Series::from_terms(&(), [(0, Rational::from(1)), (e, Rational::from(-1))], t2);
        acc = acc.mul(&f.pow(k));
    }
    acc
}

fn weighted_sum<'a>(parts: impl Iterator<Item = &'a Partition>, s: &[SValue], order: u32) -> (Vec<Rational>, Vec<Rational>) {
    let tabs: Vec<TTable> = s.iter().map(|v| TTable::new(v, order)).collect();
    let mut num = vec![Rational::new(); order as usize + 1];
    let mut den = vec![Rational::new(); order as usize + 1];
    for nu in parts {
        let k = nu.size() as usize;
        let mut prod = Rational::from(1);
        for tb in &tabs {
            prod *= tb.t_value(nu);
        }
        num[k] += prod;
        den[k] += 1u32;
    }
    (num, den)
}

fn ratio(num: Vec<Rational>, den: Vec<Rational>, order: u32) -> Result<Series<Rational>> {
    let t2 = 2 * order as i64;
    let n = Series::from_terms(&(), num.into_iter().enumerate().map(|(k, v)| (2 * k as i64, v)), t2);
    let d = Series::from_terms(&(), den.into_iter().enumerate().map(|(k, v)| (2 * k as i64, v)), t2);
    Ok(n.div(&d)?.truncate(t2))
}

/// F_t(Q; s) from its defining sum over t-cores of size ≤ order.
pub fn brute_force_ft(t: u32, s: &[SValue], order: u32) -> Result<Series<Rational>> {
    validate_svector(t, s)?;
    let cores = enumerate_t_cores(t, order);
    let (num, den) = weighted_sum(cores.iter().flatten(), s, order);
    ratio(num, den, order)
}

/// The same normalized sum over all partitions of size ≤ order.
pub fn bloch_okounkov_f(s: &[SValue], order: u32) -> Result<Series<Rational>> {
    if s.iter().any(|v| v.s <= 1) {
        return Err(Error::Invalid("s must exceed 1".into()));
    }
    let tabs: Vec<TTable> = s.iter().map(|v| TTable::new(v, order)).collect();
    let mut num = vec![Rational::new(); order as usize + 1];
    let mut den = vec![Rational::new(); order as usize + 1];
    for_each_partition_up_to(order, |nu| {
        let k = nu.size() as usize;
        let mut prod = Rational::from(1);
        for tb in &tabs {
            prod *= tb.t_value(nu);
        }
        num[k] += prod;
        den[k] += 1u32;
    });
    ratio(num, den, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(a: i64, b: i64) -> SValue {
        SValue::new(&Rational::from((a, b))).unwrap()
    }

    #[test]
    fn constant_term_is_geometric_tail() {
        for t in 2..=4 {
            let f = brute_force_ft(t, &[sv(9, 4)], 3).unwrap();
            // √s/(s−1) = (3/2)/(5/4)
            assert_eq!(f.coeff(0), Some(Rational::from((6, 5))));
        }
    }

    #[test]
    fn empty_product_is_one() {
        assert_eq!(brute_force_ft(3, &[], 5).unwrap(), Series::one(&(), 10));
        assert_eq!(bloch_okounkov_f(&[], 4).unwrap(), Series::one(&(), 8));
    }

    #[test]
    fn two_core_values_at_four() {
        let f = brute_force_ft(2, &[sv(4, 1)], 6).unwrap();
        let expect = [(2, 3), (3, 2), (-3, 2), (75, 8), (-87, 8), (99, 8), (375, 32)];
        for (k, (a, b)) in expect.iter().enumerate() {
            assert_eq!(f.coeff(2 * k as i64), Some(Rational::from((*a, *b))), "Q^{k}");
        }
    }

    #[test]
    fn all_partitions_first_order() {
        // (T(∅) + Q T((1)))/(1 + Q) → Q¹ coefficient T((1)) − T(∅)
        let v = sv(4, 1);
        let f = bloch_okounkov_f(std::slice::from_ref(&v), 1).unwrap();
        let t0 = tail_sum(&Partition::empty(), &v);
        let t1 = tail_sum(&Partition::new(vec![1]).unwrap(), &v);
        assert_eq!(f.coeff(2), Some(t1 - t0));
    }

    #[test]
    fn core_counts_follow_exponent_t() {
        for t in 2..=4 {
            let e = t_core_generating_series(t, 20);
            assert_eq!(e, t_core_product(t, CoreProductExponent::T, 20), "t = {t}");
            assert_ne!(e, t_core_product(t, CoreProductExponent::N, 20), "t = {t}");
        }
    }

    #[test]
    fn tail_sum_single_box() {
        // s^{1/2} + s^{−1/2}/(s−1) at s = 4: 2 + 1/6
        let v = sv(4, 1);
        assert_eq!(tail_sum(&Partition::new(vec![1]).unwrap(), &v), Rational::from((13, 6)));
    }
}
