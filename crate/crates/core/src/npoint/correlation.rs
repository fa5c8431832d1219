use rug::Rational;

use super::t_core_generating_series;
use crate::algebra::zseries::{exp_linear, inv_expm1, LaurentTaylor};
use crate::algebra::Series;
use crate::error::{Error, Result};
use crate::partitions::{enumerate_t_cores, Partition};

/// T(ν) at s = e^z as a Laurent series in z with a simple pole.
fn t_laurent(nu: &Partition, zorder: i64) -> Series<Rational> {
    let l = nu.len() as i64;
    let mut acc = exp_linear(&Rational::from((1 - 2 * l, 2)), zorder + 1).mul(&inv_expm1(zorder + 1));
    for (i, &p) in nu.parts().iter().enumerate() {
        let a = Rational::from((2 * p as i64 - 2 * i as i64 - 1, 2));
        acc = acc.add(&exp_linear(&a, zorder));
    }
    acc.truncate(zorder)
}

/// Coefficients of ∏ z_j^{e_j} in F_t(Q; e^{z₁}..e^{zₙ}) for −1 ≤ e_j < lmax[j],
/// each a rational q-series to Q^q_order.
pub fn correlation_expansion(t: u32, lmax: &[u32], q_order: u32) -> Result<LaurentTaylor> {
    if t < 2 {
        return Err(Error::Invalid("t must be at least 2".into()));
    }
    let n = lmax.len();
    let zmax = lmax.iter().copied().max().unwrap_or(0) as i64;
    let qtrunc = 2 * q_order as i64;
    let mut acc = LaurentTaylor::new(vec![-1; n], lmax.iter().map(|&l| l as i64 - 1).collect(), qtrunc);
    let one = Rational::from(1);
    for (k, cores) in enumerate_t_cores(t, q_order).iter().enumerate() {
        for nu in cores {
            let f = t_laurent(nu, zmax);
            let factors = vec![f; n];
            acc.add_product(2 * k as i64, &one, &factors);
        }
    }
    let norm = t_core_generating_series(t, q_order);
    acc.map_series(|s| s.div(&norm).map(|x| x.truncate(qtrunc)))
}

/// ⟨f_{l₁}…f_{lₙ}⟩, the coefficient of ∏ z_j^{l_j − 1}.
pub fn correlation(table: &LaurentTaylor, l: &[u32]) -> Result<Series<Rational>> {
    if l.len() != table.nvars() {
        return Err(Error::Invalid("wrong number of indices".into()));
    }
    let e: Vec<i64> = l.iter().map(|&x| x as i64 - 1).collect();
    table.coeff(&e)
}
