use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use rug::Rational;

use super::{block_product, set_partitions, validate_svector, SValue, SetPartition};
use crate::algebra::cyclo::CycloTable;
use crate::algebra::rational::rpow;
use crate::algebra::{CycloNum, Series};
use crate::error::{Error, Result};
use crate::theta::{theta3, vartheta, ThetaArg};

#[derive(Clone, Copy, Debug, Default)]
pub struct ClosedOptions {
    /// Also sum l-tuples with repeated entries (their determinants vanish).
    pub all_tuples: bool,
}

type S = Series<CycloNum>;

/// det of a k×k matrix of series by Laplace expansion over column subsets.
fn series_det(a: &[Vec<&S>], ctx: &Arc<CycloTable>, trunc2: i64) -> S {
    let k = a.len();
    let mut d: Vec<Option<S>> = vec![None; 1 << k];
    d[0] = Some(Series::one(ctx, trunc2));
    for mask in 0usize..(1 << k) {
        let Some(cur) = d[mask].take() else { continue };
        let i = mask.count_ones() as usize;
        if i == k {
            d[mask] = Some(cur);
            continue;
        }
        for j in 0..k {
            if mask & (1 << j) != 0 {
                continue;
            }
            let above = (mask >> (j + 1)).count_ones();
            let mut term = cur.mul(a[i][j]);
            if above % 2 == 1 {
                term = term.neg();
            }
            let slot = &mut d[mask | (1 << j)];
            *slot = Some(match slot.take() {
                Some(prev) => prev.add(&term),
                None => term,
            });
        }
    }
    d[(1 << k) - 1].take().unwrap()
}

fn tuples(t: u32, k: usize, distinct: bool) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![1i64; k];
    loop {
        let ok = !distinct || (0..k).all(|i| (i + 1..k).all(|j| cur[i] != cur[j]));
        if ok {
            out.push(cur.clone());
        }
        let mut i = 0;
        while i < k && cur[i] == t as i64 {
            cur[i] = 1;
            i += 1;
        }
        if i == k {
            return out;
        }
        cur[i] += 1;
    }
}

/// Block weights ∏_a ϑ(s_B ξ^{a−l}) / ∏_{a≠l} ϑ(ξ^{a−l}) keyed by (mask, l).
fn block_weights(t: u32, s: &[SValue], trunc2: i64) -> Result<HashMap<(u32, i64), S>> {
    let n = s.len();
    let unit: HashMap<i64, S> = (1 - t as i64..t as i64)
        .filter(|&c| c != 0)
        .map(|c| (c, vartheta(&ThetaArg::scaled_root(t, &Rational::from(1), c), trunc2)))
        .collect();
    let mut out = HashMap::new();
    for mask in 1u32..(1 << n) {
        let (_, root) = block_product(s, mask);
        let shifted: HashMap<i64, S> =
            (1 - t as i64..t as i64).map(|c| (c, vartheta(&ThetaArg::scaled_root(t, &root, c), trunc2))).collect();
        for l in 1..=t as i64 {
            let mut num = shifted[&(1 - l)].clone();
            for a in 2..=t as i64 {
                num = num.mul(&shifted[&(a - l)]);
            }
            let mut den: Option<S> = None;
            for a in (1..=t as i64).filter(|&a| a != l) {
                let f = &unit[&(a - l)];
                den = Some(match den {
                    Some(d) => d.mul(f),
                    None => f.clone(),
                });
            }
            let g = match den {
                Some(d) => num
                    .div(&d)
                    .map_err(|_| Error::SingularTheta(format!("unit theta product at l = {l}")))?,
                None => num,
            };
            out.insert((mask, l), g);
        }
    }
    Ok(out)
}

/// Shared skeleton of both closed forms: Σ_k w_k Σ_π Σ_l ∏G · det(entry(B_i, l_j − l_i)).
fn closed_sum(
    t: u32,
    s: &[SValue],
    trunc2: i64,
    opts: ClosedOptions,
    level_weight: &[S],
    entry: &HashMap<(u32, i64), S>,
) -> Result<S> {
    let m = 2 * t;
    let ctx = CycloTable::get(m);
    let g = block_weights(t, s, trunc2)?;
    let parts = set_partitions(s.len());
    let mut jobs: Vec<(&SetPartition, Vec<i64>)> = Vec::new();
    for p in &parts {
        for l in tuples(t, p.blocks.len(), !opts.all_tuples) {
            jobs.push((p, l));
        }
    }
    let terms: Vec<S> = jobs
        .par_iter()
        .map(|(p, l)| {
            let k = p.blocks.len();
            let mut acc = level_weight[k - 1].clone();
            for (b, &lb) in p.blocks.iter().zip(l) {
                acc = acc.mul(&g[&(*b, lb)]);
            }
            let rows: Vec<Vec<&S>> =
                (0..k).map(|i| (0..k).map(|j| &entry[&(p.blocks[i], l[j] - l[i])]).collect()).collect();
            acc.mul(&series_det(&rows, &ctx, trunc2))
        })
        .collect();
    let mut total = Series::zero(&ctx, trunc2);
    for term in &terms {
        total = total.add(term);
    }
    Ok(total)
}

fn rational_prefactor(t: u32, s: &[SValue]) -> Rational {
    let mut p = Rational::from(1);
    for v in s {
        p *= rpow(&v.sqrt_s, t as i64) - rpow(&v.sqrt_s, -(t as i64));
    }
    p.recip()
}

fn inverse_powers(x: &S, kmax: usize) -> Result<Vec<S>> {
    let inv = x.inv()?;
    let mut out = vec![Series::one(x.ctx(), x.trunc())];
    for _ in 1..kmax {
        let next = out.last().unwrap().mul(&inv);
        out.push(next);
    }
    Ok(out)
}

/// F_t via the theta-determinant formula with free parameter Q₂, over
/// Q(ξ_{2t}), to Q^order.
pub fn closed_ft_cyclo(t: u32, s: &[SValue], q2: &Rational, order: u32, opts: ClosedOptions) -> Result<S> {
    validate_svector(t, s)?;
    if q2.is_zero() {
        return Err(Error::Invalid("Q2 must be nonzero".into()));
    }
    let m = 2 * t;
    let trunc2 = 2 * order as i64;
    let ctx = CycloTable::get(m);
    if s.is_empty() {
        return Ok(Series::one(&ctx, trunc2));
    }
    let n = s.len();
    let th = theta3(&CycloNum::rational(m, &-q2.clone()), trunc2);
    let level_weight = inverse_powers(&th, n)?;
    let mut entry = HashMap::new();
    for mask in 1u32..(1 << n) {
        let (prod, root) = block_product(s, mask);
        let z0 = -q2.clone() / &prod;
        for d in 1 - t as i64..t as i64 {
            let num = theta3(&CycloNum::scaled_root(m, &z0, -2 * d), trunc2);
            let den = vartheta(&ThetaArg::scaled_root(t, &root, d), trunc2);
            let e = num.div(&den).map_err(|_| Error::SingularTheta(format!("block {mask:#b}, offset {d}")))?;
            entry.insert((mask, d), e);
        }
    }
    let total = closed_sum(t, s, trunc2, opts, &level_weight, &entry)?;
    let (all, _) = block_product(s, (1 << n) - 1);
    let norm = theta3(&CycloNum::rational(m, &(-q2.clone() / all)), trunc2);
    Ok(total.div(&norm)?.scale_rational(&rational_prefactor(t, s)).truncate(trunc2))
}

/// F_t via the ϑ-only specialization at split point r, over Q(ξ_{2t}).
pub fn closed_ft_r_cyclo(t: u32, s: &[SValue], r: usize, order: u32, opts: ClosedOptions) -> Result<S> {
    validate_svector(t, s)?;
    let n = s.len();
    if n < 2 || r < 1 || r >= n {
        return Err(Error::Invalid(format!("need 1 <= r < n, got r = {r}, n = {n}")));
    }
    let trunc2 = 2 * order as i64;
    let first: u32 = (1 << r) - 1;
    let rest: u32 = ((1 << n) - 1) ^ first;
    let (s_r, root_r) = block_product(s, first);
    let th_r = vartheta(&ThetaArg::scaled_root(t, &root_r, 0), trunc2);
    let level_weight = inverse_powers(&th_r, n)?;
    let mut entry = HashMap::new();
    for mask in 1u32..(1 << n) {
        let (prod, root) = block_product(s, mask);
        let ratio_root = Rational::from(&root_r / &root);
        debug_assert_eq!(Rational::from(&ratio_root * &ratio_root), Rational::from(&s_r / &prod));
        for d in 1 - t as i64..t as i64 {
            let num = vartheta(&ThetaArg::scaled_root(t, &ratio_root, -d), trunc2);
            let den = vartheta(&ThetaArg::scaled_root(t, &root, d), trunc2);
            let e = num.div(&den).map_err(|_| Error::SingularTheta(format!("block {mask:#b}, offset {d}")))?;
            entry.insert((mask, d), e);
        }
    }
    let total = closed_sum(t, s, trunc2, opts, &level_weight, &entry)?;
    let (_, root_rest) = block_product(s, rest);
    let norm = vartheta(&ThetaArg::scaled_root(t, &root_rest.recip(), 0), trunc2);
    Ok(total.div(&norm)?.scale_rational(&rational_prefactor(t, s)).truncate(trunc2))
}

fn to_rational(x: &S) -> Result<Series<Rational>> {
    let mut terms = Vec::new();
    for (e, c) in x.terms() {
        match c.as_rational() {
            Some(r) => terms.push((e, r)),
            None => return Err(Error::NotRational(e)),
        }
    }
    Ok(Series::from_terms(&(), terms, x.trunc()))
}

/// closed_ft_cyclo, checked to have rational coefficients.
pub fn closed_ft(t: u32, s: &[SValue], q2: &Rational, order: u32, opts: ClosedOptions) -> Result<Series<Rational>> {
    to_rational(&closed_ft_cyclo(t, s, q2, order, opts)?)
}

pub fn closed_ft_r(t: u32, s: &[SValue], r: usize, order: u32) -> Result<Series<Rational>> {
    to_rational(&closed_ft_r_cyclo(t, s, r, order, ClosedOptions::default())?)
}

/// t/(s^{t/2} − s^{−t/2}) · ∏_{a=1}^{t−1} ϑ(s ξ_t^a)/ϑ(ξ_t^a).
pub fn one_point_closed(t: u32, s: &SValue, order: u32) -> Result<Series<Rational>> {
    validate_svector(t, std::slice::from_ref(s))?;
    let trunc2 = 2 * order as i64;
    let ctx = CycloTable::get(2 * t);
    let mut acc = Series::one(&ctx, trunc2);
    for a in 1..t as i64 {
        let num = vartheta(&ThetaArg::scaled_root(t, &s.sqrt_s, a), trunc2);
        let den = vartheta(&ThetaArg::scaled_root(t, &Rational::from(1), a), trunc2);
        acc = acc.mul(&num.div(&den)?);
    }
    let pre = Rational::from(t) * rational_prefactor(t, std::slice::from_ref(s));
    to_rational(&acc.scale_rational(&pre))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::npoint::brute_force_ft;

    fn sv(a: i64, b: i64) -> SValue {
        SValue::new(&Rational::from((a, b))).unwrap()
    }

    #[test]
    fn det_of_constants() {
        let ctx = CycloTable::get(1);
        let c = |v: i64| Series::constant(CycloNum::rational(1, &Rational::from(v)), 4);
        let m = [[c(2), c(1), c(0)], [c(1), c(3), c(1)], [c(0), c(1), c(4)]];
        let rows: Vec<Vec<&S>> = m.iter().map(|r| r.iter().collect()).collect();
        // 2(12 − 1) − 1(4 − 0) = 18
        assert_eq!(series_det(&rows, &ctx, 4).coeff(0).unwrap().as_rational(), Some(Rational::from(18)));
    }

    #[test]
    fn one_point_matches_enumeration() {
        for t in 2..=4 {
            let s = sv(9, 4);
            let a = brute_force_ft(t, std::slice::from_ref(&s), 6).unwrap();
            assert_eq!(one_point_closed(t, &s, 6).unwrap(), a, "t = {t}");
            assert_eq!(closed_ft(t, &[s], &Rational::from(1), 6, ClosedOptions::default()).unwrap(), a);
        }
    }

    #[test]
    fn two_point_matches_enumeration() {
        let s = [sv(4, 1), sv(9, 4)];
        for t in 2..=3 {
            let a = brute_force_ft(t, &s, 5).unwrap();
            let b = closed_ft(t, &s, &Rational::from((5, 3)), 5, ClosedOptions::default()).unwrap();
            assert_eq!(a, b, "t = {t}");
            assert_eq!(closed_ft_r(t, &s, 1, 5).unwrap(), a, "t = {t}");
        }
    }
}
