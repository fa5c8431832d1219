//! Exact membership tests of q-series in spaces spanned by products of
//! Eisenstein-type series, graded by weight.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::Rational;
use serde_json::{json, Value};

use crate::algebra::cyclo::CycloTable;
use crate::algebra::linalg::Echelon;
use crate::algebra::rational::factorial;
use crate::algebra::{Coeff, CycloNum, Series};
use crate::error::{Error, Result};
use crate::theta::{eisenstein, level_series_all, log_theta_ratio, ThetaArg};

/// A generator of the graded algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// E^r_l, weight l
    Level { r: u32, l: u32 },
    /// E_{2k}(Q^d), weight 2k
    Eisenstein { k: u32, d: u32 },
}

impl Generator {
    pub fn weight(&self) -> u32 {
        match self {
            Generator::Level { l, .. } => *l,
            Generator::Eisenstein { k, .. } => 2 * k,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Level { r, l } => write!(f, "E^{r}_{l}"),
            Generator::Eisenstein { k, d: 1 } => write!(f, "E_{}(Q)", 2 * k),
            Generator::Eisenstein { k, d } => write!(f, "E_{}(Q^{d})", 2 * k),
        }
    }
}

/// A product of generators, stored as an exponent vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub exps: Vec<u32>,
    pub weight: u32,
}

/// All monomials of weight ≤ W with their q-expansions over Q(ξ_{2t}).
pub struct WeightedBasis {
    pub t: u32,
    pub max_weight: u32,
    /// expansions are exact through Q^order
    pub order: u32,
    pub generators: Vec<Generator>,
    pub monomials: Vec<Monomial>,
    pub series: Vec<Series<CycloNum>>,
}

impl WeightedBasis {
    pub fn ctx(&self) -> Arc<CycloTable> {
        CycloTable::get(2 * self.t)
    }

    pub fn name(&self, i: usize) -> String {
        let m = &self.monomials[i];
        let parts: Vec<String> = m
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(g, &e)| if e == 1 { self.generators[g].to_string() } else { format!("{}^{e}", self.generators[g]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

fn monomials(gens: &[Generator], w: u32) -> Vec<Monomial> {
    fn rec(gens: &[Generator], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>, w: u32) {
        if i == gens.len() {
            out.push(Monomial { exps: cur.clone(), weight: w - left });
            return;
        }
        let gw = gens[i].weight();
        let mut e = 0;
        loop {
            cur[i] = e;
            rec(gens, i + 1, left - e * gw, cur, out, w);
            if (e + 1) * gw > left {
                break;
            }
            e += 1;
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; gens.len()];
    rec(gens, 0, w, &mut cur, &mut out, w);
    // classical monomials first, so the greedy independent subset prefers them
    let level_degree = |m: &Monomial| -> u32 {
        m.exps.iter().zip(gens).filter(|(_, g)| matches!(g, Generator::Level { .. })).map(|(e, _)| *e).sum()
    };
    out.sort_by_key(|m| (m.weight, level_degree(m)));
    out
}

/// Generators E^r_l (1 ≤ r < t, l ≤ W) and E_{2k}(Q^d) (d | t, 2k ≤ W), and
/// every monomial in them of weight ≤ W, expanded to Q^order.
pub fn build_basis(t: u32, max_weight: u32, order: u32) -> Result<WeightedBasis> {
    if t < 2 {
        return Err(Error::Invalid("t must be at least 2".into()));
    }
    if max_weight > 8 {
        return Err(Error::Invalid("weights above 8 are not supported".into()));
    }
    let m = 2 * t;
    let ctx = CycloTable::get(m);
    let trunc2 = 2 * order as i64;
    let mut gens = Vec::new();
    let mut gser: Vec<Series<CycloNum>> = Vec::new();
    if max_weight >= 1 {
        let levels: Vec<Vec<Series<CycloNum>>> = (1..t)
            .into_par_iter()
            .map(|r| level_series_all(t, r as i64, max_weight, order as i64))
            .collect::<Result<_>>()?;
        for (r, ls) in (1..t).zip(levels) {
            for (l, s) in (1..=max_weight).zip(ls) {
                gens.push(Generator::Level { r, l });
                gser.push(s.truncate(trunc2));
            }
        }
    }
    for d in (1..=t).filter(|d| t.is_multiple_of(*d)) {
        for k in 1..=max_weight / 2 {
            let e = eisenstein(k, order as i64).rescale(d as i64).truncate(trunc2);
            gens.push(Generator::Eisenstein { k, d });
            gser.push(e.map_coeffs(&ctx, |r| CycloNum::rational(m, r)));
        }
    }
    let monos = monomials(&gens, max_weight);
    let series = monos
        .par_iter()
        .map(|mono| {
            let mut acc = Series::one(&ctx, trunc2);
            for (g, &e) in mono.exps.iter().enumerate() {
                for _ in 0..e {
                    acc = acc.mul(&gser[g]);
                }
            }
            acc.truncate(trunc2)
        })
        .collect();
    Ok(WeightedBasis { t, max_weight, order, generators: gens, monomials: monos, series })
}

/// Outcome of a membership test.
#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    /// coefficients, one per basis monomial
    Accept(Vec<CycloNum>),
    /// first doubled exponent at which no combination fits
    Reject { exp2: i64 },
    /// fewer independent fit equations than independent monomials
    Underdetermined { rank: usize, unknowns: usize },
}

impl Membership {
    pub fn status(&self) -> &'static str {
        match self {
            Membership::Accept(_) => "accept",
            Membership::Reject { .. } => "reject",
            Membership::Underdetermined { .. } => "underdetermined",
        }
    }
}

fn coeff_vec(s: &Series<CycloNum>, top2: i64, ctx: &Arc<CycloTable>) -> Result<Vec<CycloNum>> {
    (0..=top2)
        .map(|e| s.coeff(e).ok_or(Error::OrderExceeded { requested: e, available: s.trunc() }))
        .map(|c| c.map(|c| if c.is_zero() { CycloNum::zero_in(ctx) } else { c }))
        .collect()
}

/// Indices of a maximal linearly independent subset, chosen greedily in order.
fn independent_subset(vecs: &[Vec<CycloNum>]) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<CycloNum>)> = Vec::new();
    let mut keep = Vec::new();
    for (i, v) in vecs.iter().enumerate() {
        let mut v = v.clone();
        for (p, b) in &basis {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(b) {
                    *x = x.sub(&y.mul(&f));
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[p].inv().expect("nonzero");
            let v: Vec<CycloNum> = v.iter().map(|x| x.mul(&inv)).collect();
            for (_, b) in basis.iter_mut() {
                if !b[p].is_zero() {
                    let f = b[p].clone();
                    for (x, y) in b.iter_mut().zip(&v) {
                        *x = x.sub(&y.mul(&f));
                    }
                }
            }
            basis.push((p, v));
            keep.push(i);
        }
    }
    keep
}

/// Fits `target` by the basis on Q⁰..Q^fit_n and demands an exactly zero
/// residual through Q^check_n.
pub fn membership_solve(target: &Series<CycloNum>, basis: &WeightedBasis, fit_n: u32, check_n: u32) -> Result<Membership> {
    if check_n <= fit_n {
        return Err(Error::Invalid("check_N must exceed fit_N".into()));
    }
    if check_n > basis.order {
        return Err(Error::OrderExceeded { requested: 2 * check_n as i64, available: 2 * basis.order as i64 });
    }
    let ctx = basis.ctx();
    let top2 = 2 * check_n as i64;
    let fit2 = 2 * fit_n as usize;
    let cols: Vec<Vec<CycloNum>> = basis.series.iter().map(|s| coeff_vec(s, top2, &ctx)).collect::<Result<_>>()?;
    let tv = coeff_vec(&target.map_coeffs(&ctx, |c| c.lift(2 * basis.t / c.conductor())), top2, &ctx)?;
    let idx = independent_subset(&cols);
    let k = idx.len();
    let rows: Vec<Vec<CycloNum>> = (0..=fit2)
        .map(|e| {
            let mut r: Vec<CycloNum> = idx.iter().map(|&i| cols[i][e].clone()).collect();
            r.push(tv[e].clone());
            r
        })
        .collect();
    let ech = Echelon::reduce(rows, k);
    if let Some(e) = ech.inconsistent_row {
        return Ok(Membership::Reject { exp2: e as i64 });
    }
    if ech.pivots.len() < k {
        return Ok(Membership::Underdetermined { rank: ech.pivots.len(), unknowns: k });
    }
    let mut coeffs = vec![CycloNum::zero_in(&ctx); basis.series.len()];
    for (row, &p) in ech.pivots.iter().enumerate() {
        coeffs[idx[p]] = ech.rows[row][k].clone();
    }
    for e in 0..=top2 as usize {
        let mut acc = CycloNum::zero_in(&ctx);
        for (c, col) in coeffs.iter().zip(&cols) {
            if !c.is_zero() {
                acc = acc.add(&c.mul(&col[e]));
            }
        }
        if acc != tv[e] {
            return Ok(Membership::Reject { exp2: e as i64 });
        }
    }
    Ok(Membership::Accept(coeffs))
}

fn cyclo_string(c: &CycloNum) -> String {
    match c.as_rational() {
        Some(r) => r.to_string(),
        None => c.to_string(),
    }
}

/// JSON report for one membership test.
pub fn membership_report(target: &str, basis: &WeightedBasis, fit_n: u32, check_n: u32, result: &Membership) -> Value {
    let mut v = json!({
        "target": target,
        "weight": basis.max_weight,
        "monomials": (0..basis.monomials.len()).map(|i| basis.name(i)).collect::<Vec<_>>(),
        "coeffs": match result {
            Membership::Accept(c) => c.iter().map(cyclo_string).collect::<Vec<_>>(),
            _ => Vec::new(),
        },
        "fit_N": fit_n,
        "check_N": check_n,
        "status": result.status(),
    });
    match result {
        Membership::Reject { exp2 } => v["failed_exp2"] = json!(exp2),
        Membership::Underdetermined { rank, unknowns } => {
            v["rank"] = json!(rank);
            v["unknowns"] = json!(unknowns);
        }
        Membership::Accept(_) => {}
    }
    v
}

/// Result of comparing log(ϑ(−e^z)/ϑ(−1)) with its Eisenstein expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub holds: bool,
    /// first z-power where the two sides differ
    pub first_mismatch: Option<u32>,
}

/// Checks log(ϑ(−e^z)/ϑ(−1)) = 2Σ_k z^{2k}/(2k)!·(E_{2k}(Q) − 4^k E_{2k}(Q²))
/// coefficientwise through z^{z_order} and Q^{q_order}, with odd powers zero.
pub fn check_2core_identity(z_order: u32, q_order: u32) -> Result<IdentityCheck> {
    if !z_order.is_multiple_of(2) || z_order > 10 {
        return Err(Error::Invalid("z_order must be even and at most 10".into()));
    }
    let trunc2 = 2 * q_order as i64;
    let x = ThetaArg::scaled_root(2, &Rational::from(1), 1);
    let lg = log_theta_ratio(&x, z_order as i64, trunc2)?;
    for j in 1..=z_order {
        let lhs = lg.coeff(j as i64).expect("within order").clone();
        let ok = if j % 2 == 1 {
            lhs.is_zero()
        } else {
            let k = j / 2;
            let e1 = eisenstein(k, q_order as i64);
            let e2 = eisenstein(k, q_order as i64).rescale(2).truncate(trunc2);
            let four_k = Rational::from(rug::Integer::from(4).pow(k));
            let rhs = e1.sub(&e2.scale_rational(&four_k)).scale_rational(&(Rational::from(2) / Rational::from(factorial(j))));
            let rhs = rhs.map_coeffs(&lhs.ctx().clone(), |r| CycloNum::rational(x.conductor(), r));
            lhs.truncate(trunc2) == rhs.truncate(trunc2)
        };
        if !ok {
            return Ok(IdentityCheck { holds: false, first_mismatch: Some(j) });
        }
    }
    Ok(IdentityCheck { holds: true, first_mismatch: None })
}

/// Lifts a rational series into Q(ξ_{2t}).
pub fn lift_rational(s: &Series<Rational>, t: u32) -> Series<CycloNum> {
    let ctx = CycloTable::get(2 * t);
    s.map_coeffs(&ctx, |r| CycloNum::rational(2 * t, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::npoint::{correlation, correlation_expansion};

    #[test]
    fn weight_two_generators_at_level_two() {
        let b = build_basis(2, 2, 4).unwrap();
        let names: Vec<String> = b.generators.iter().map(|g| g.to_string()).collect();
        for want in ["E^1_1", "E^1_2", "E_2(Q)", "E_2(Q^2)"] {
            assert!(names.contains(&want.to_string()), "{want}");
        }
        assert_eq!(b.name(0), "1");
        // 1, E^1_1, (E^1_1)², E^1_2, E_2(Q), E_2(Q²)
        assert_eq!(b.monomials.len(), 6);
        let b0 = build_basis(3, 0, 4).unwrap();
        assert_eq!(b0.monomials.len(), 1);
    }

    #[test]
    fn eisenstein_is_a_unit_vector() {
        let b = build_basis(2, 2, 12).unwrap();
        let target = lift_rational(&eisenstein(1, 12), 2);
        let Membership::Accept(c) = membership_solve(&target, &b, 8, 12).unwrap() else { panic!() };
        let idx = b.generators.iter().position(|g| *g == Generator::Eisenstein { k: 1, d: 1 }).unwrap();
        let pos = b.monomials.iter().position(|m| m.exps.iter().enumerate().all(|(g, &e)| e == (g == idx) as u32)).unwrap();
        for (i, x) in c.iter().enumerate() {
            assert_eq!(x.is_one(), i == pos);
            assert!(i == pos || x.is_zero());
        }
    }

    #[test]
    fn f2_accepted_at_level_two() {
        let tab = correlation_expansion(2, &[2], 20).unwrap();
        let f2 = lift_rational(&correlation(&tab, &[2]).unwrap(), 2);
        let b = build_basis(2, 2, 20).unwrap();
        let r = membership_solve(&f2, &b, 12, 20).unwrap();
        assert_eq!(r.status(), "accept", "{r:?}");
    }

    #[test]
    fn lacunary_series_rejected() {
        let terms = (0..=3i64).map(|n| (6 * n * n, Rational::from(1)));
        let target = lift_rational(&Series::from_terms(&(), terms, 40), 2);
        let b = build_basis(2, 2, 20).unwrap();
        assert!(matches!(membership_solve(&target, &b, 12, 20).unwrap(), Membership::Reject { .. }));
    }

    #[test]
    fn level_two_identity() {
        assert_eq!(check_2core_identity(4, 8).unwrap(), IdentityCheck { holds: true, first_mismatch: None });
        assert!(check_2core_identity(3, 8).is_err());
    }
}
