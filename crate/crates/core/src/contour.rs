//! Numeric coefficient extraction over a torus of circles |w_j| = r_j.
//!
//! Every ϑ factor is written as ϑ(z) = z^{−1/2}·P(z) with
//! P(z) = (z − 1)∏_{b≥1}(1 − zQ^b)(1 − Q^b/z)/(1 − Q^b)². The half powers are
//! combined by hand in each integrand, so only P and Θ₃ are evaluated
//! numerically and no branch choice arises.

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};
use serde_json::{json, Value};

use crate::algebra::numeric::{abs, eps, is_finite, pairwise_sum};
use crate::algebra::Series;
use crate::error::{Error, Result};

/// Guard bits used when truncating infinite sums and products.
pub const GUARD_BITS: u32 = 16;

/// Numeric setting for one extraction.
#[derive(Clone, Debug)]
pub struct QuadratureConfig {
    /// Starting number of points per circle (a power of two).
    pub m: usize,
    /// Largest number of points per circle tried before giving up.
    pub max_m: usize,
    pub prec: u32,
    pub q: Rational,
    pub radii: Vec<Float>,
    /// Target agreement in decimal digits; M doubles until successive values
    /// differ by less than 10^{−(digits+5)}.
    pub digits: u32,
}

impl QuadratureConfig {
    /// Chooses radii with equal gaps in log|w| across the chain
    /// 1 < r_n < s_n r_n < … < r_1 < s_1 r_1 < 1/Q, requiring every gap to be
    /// at least a factor 1.1.
    pub fn new(q: &Rational, s: &[Rational], prec: u32, digits: u32) -> Result<QuadratureConfig> {
        if s.len() > 3 {
            return Err(Error::Invalid("contour extraction supports n <= 3".into()));
        }
        if q.cmp0().is_le() || *q >= 1 {
            return Err(Error::Invalid(format!("need 0 < Q < 1, got {q}")));
        }
        if s.iter().any(|x| *x <= 1) {
            return Err(Error::Invalid("need s_j > 1".into()));
        }
        let n = s.len();
        let lq = -Float::with_val(prec, q).ln();
        let mut total = lq.clone();
        for x in s {
            total -= Float::with_val(prec, x).ln();
        }
        let gap = total / (n as u32 + 1);
        if gap < Float::with_val(prec, 1.1f64).ln() {
            return Err(Error::Invalid("region too narrow for a 10% margin".into()));
        }
        // r_n = e^g, r_{j−1} = s_j r_j e^g
        let mut logs = vec![Float::new(prec); n];
        let mut cur = gap.clone();
        for j in (0..n).rev() {
            logs[j] = cur.clone();
            cur = cur + Float::with_val(prec, &s[j]).ln() + &gap;
        }
        let radii = logs.into_iter().map(|l| l.exp()).collect();
        let m = if n <= 1 { 16 } else { 32 };
        let max_m = match n {
            0 | 1 => 4096,
            2 => 2048,
            _ => 256,
        };
        Ok(QuadratureConfig { m, max_m, prec, q: q.clone(), radii, digits })
    }

    /// Checks the region inequalities for explicit radii.
    pub fn check_region(&self, s: &[Rational]) -> Result<()> {
        let p = self.prec;
        let mut lower = Float::with_val(p, 1);
        for j in (0..s.len()).rev() {
            let r = &self.radii[j];
            if *r <= lower {
                return Err(Error::Invalid(format!("radius {j} violates the region")));
            }
            lower = Float::with_val(p, r * &Float::with_val(p, &s[j]));
        }
        let top = Float::with_val(p, &self.q).recip();
        if lower >= top {
            return Err(Error::Invalid("outer radius exceeds 1/Q".into()));
        }
        Ok(())
    }
}

/// Numeric constants shared by the evaluators.
pub struct Numeric {
    pub prec: u32,
    pub q: Float,
    pub qhalf: Float,
    tol: Float,
}

impl Numeric {
    pub fn new(q: &Rational, prec: u32) -> Numeric {
        let q = Float::with_val(prec, q);
        let qhalf = Float::with_val(prec, q.sqrt_ref());
        Numeric { prec, q, qhalf, tol: eps(prec + GUARD_BITS, prec) }
    }

    fn c<T>(&self, x: T) -> Complex
    where
        Float: rug::Assign<T>,
    {
        Complex::with_val(self.prec, (Float::with_val(self.prec, x), 0))
    }

    /// P(z) = (z − 1) ∏_b (1 − zQ^b)(1 − Q^b/z)/(1 − Q^b)².
    pub fn p(&self, z: &Complex) -> Result<Complex> {
        let p = self.prec;
        let zi = Complex::with_val(p, z.recip_ref());
        let mut acc = Complex::with_val(p, z - 1u32);
        let mut qb = Float::with_val(p, &self.q);
        loop {
            let a = Complex::with_val(p, z * &qb);
            let b = Complex::with_val(p, &zi * &qb);
            let one_minus = Float::with_val(p, 1u32 - &qb);
            let den = Float::with_val(p, &one_minus * &one_minus);
            acc *= Complex::with_val(p, 1u32 - &a) * Complex::with_val(p, 1u32 - &b) / den;
            if abs(&a) < self.tol && abs(&b) < self.tol && qb < self.tol {
                break;
            }
            qb *= &self.q;
        }
        if !is_finite(&acc) {
            return Err(Error::NonFinite("theta product".into()));
        }
        Ok(acc)
    }

    /// ϑ(z) for z with a given square root.
    pub fn vartheta(&self, z: &Complex, sqrt_z: &Complex) -> Result<Complex> {
        Ok(self.p(z)? / sqrt_z.clone())
    }

    /// Θ₃(z) = Σ_a z^a Q^{a²/2}.
    pub fn theta3(&self, z: &Complex) -> Result<Complex> {
        let p = self.prec;
        let zi = Complex::with_val(p, z.recip_ref());
        let mut acc = self.c(1);
        let (mut tp, mut tn) = (self.c(1), self.c(1));
        // Q^{(a+1)²/2} / Q^{a²/2} = Q^{a+1/2}
        let mut step = self.qhalf.clone();
        let mut a = 0u32;
        loop {
            tp *= Complex::with_val(p, z * &step);
            tn *= Complex::with_val(p, &zi * &step);
            acc += &tp;
            acc += &tn;
            a += 1;
            step *= &self.q;
            let small = abs(&tp) < self.tol && abs(&tn) < self.tol;
            let shrinking = abs(&Complex::with_val(p, z * &step)) < 1 && abs(&Complex::with_val(p, &zi * &step)) < 1;
            if (small && shrinking) || a > 100_000 {
                break;
            }
        }
        if !is_finite(&acc) {
            return Err(Error::NonFinite("theta3 sum".into()));
        }
        Ok(acc)
    }

    fn nonzero(&self, z: Complex, what: &str) -> Result<Complex> {
        if abs(&z) < eps(self.prec / 2, self.prec) {
            return Err(Error::SingularTheta(what.to_string()));
        }
        Ok(z)
    }

    fn root_of_unity(&self, t: u32, a: i64) -> Complex {
        crate::algebra::cyclo::root_of_unity(t, a, self.prec)
    }
}

fn fl(prec: u32, r: &Rational) -> Float {
    Float::with_val(prec, r)
}

/// ∏_a P(−s w ξ^a)/P(−w ξ^a).
fn root_ratio(nm: &Numeric, t: u32, s: &Float, w: &Complex) -> Result<Complex> {
    let p = nm.prec;
    let mut acc = nm.c(1);
    for a in 1..=t as i64 {
        let x = Complex::with_val(p, -(w * nm.root_of_unity(t, a)));
        let num = nm.p(&Complex::with_val(p, &x * s))?;
        let den = nm.nonzero(nm.p(&x)?, "P(-w xi^a) vanished on the contour")?;
        acc *= num / den;
    }
    Ok(acc)
}

/// ϑ(s_i^{−1}s_k u)ϑ(u)/(ϑ(s_i^{−1}u)ϑ(s_k u)) for u = w_k/w_i.
fn pair_ratio(nm: &Numeric, si: &Float, sk: &Float, u: &Complex) -> Result<Complex> {
    let p = nm.prec;
    let a = nm.p(&Complex::with_val(p, u * Float::with_val(p, sk / si)))?;
    let b = nm.p(u)?;
    let c = nm.p(&Complex::with_val(p, u / si))?;
    let d = nm.p(&Complex::with_val(p, u * sk))?;
    let den = nm.nonzero(c * d, "pair denominator vanished on the contour")?;
    Ok(a * b / den)
}

fn fs(nm: &Numeric, s: &[Rational]) -> Vec<Float> {
    s.iter().map(|x| fl(nm.prec, x)).collect()
}

fn sqrt_product(nm: &Numeric, s: &[Float]) -> Float {
    let mut acc = Float::with_val(nm.prec, 1);
    for x in s {
        acc *= x;
    }
    acc.sqrt()
}

/// Product-of-thetas integrand at a single point w.
pub fn eval_cor42(t: u32, s: &[Rational], q: &Rational, w: &[Complex], prec: u32) -> Result<Complex> {
    let nm = Numeric::new(q, prec);
    let sf = fs(&nm, s);
    let n = s.len();
    let mut acc = nm.c(1);
    for j in 0..n {
        let pre = Float::with_val(prec, (&sf[j]).pow(Float::with_val(prec, 0.5f64) - t));
        let den = nm.nonzero(nm.p(&nm.c(sf[j].clone()))?, "P(s) vanished")?;
        acc *= nm.c(pre) / den;
        acc *= root_ratio(&nm, t, &sf[j], &w[j])?;
    }
    for i in 0..n {
        for k in i + 1..n {
            let u = Complex::with_val(prec, &w[k] / &w[i]);
            acc *= pair_ratio(&nm, &sf[i], &sf[k], &u)?;
        }
    }
    Ok(acc)
}

/// Θ₃(σ·Q₂ s_i^{−1} v)/P(s_i/v) with v = w_j/w_i.
fn det_entry(nm: &Numeric, sign: i32, q2: &Float, si: &Float, v: &Complex) -> Result<Complex> {
    let p = nm.prec;
    let arg = Complex::with_val(p, v * Float::with_val(p, q2 / si)) * sign;
    let num = nm.theta3(&arg)?;
    let den = nm.nonzero(nm.p(&Complex::with_val(p, si / v))?, "determinant denominator vanished")?;
    Ok(num / den)
}

fn det_small(m: Vec<Vec<Complex>>, prec: u32) -> Complex {
    let n = m.len();
    match n {
        0 => Complex::with_val(prec, 1),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Complex::new(prec);
            for j in 0..n {
                let minor: Vec<Vec<Complex>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
                let term = Complex::with_val(prec, &m[0][j] * det_small(minor, prec));
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

fn det_prefactor(nm: &Numeric, sign: i32, t: Option<u32>, s: &[Float], q2: &Float) -> Result<Complex> {
    let p = nm.prec;
    let n = s.len() as i32;
    let mut all = Float::with_val(p, 1);
    for x in s {
        all *= x;
    }
    let th0 = nm.theta3(&(nm.c(q2.clone()) * sign))?;
    let th1 = nm.theta3(&(nm.c(Float::with_val(p, q2 / &all)) * sign))?;
    let den = nm.nonzero(th0.pow(n - 1) * th1, "normalizing theta3 vanished")?;
    // half powers: s^{1/2} from the determinant, s^{−t} from the root ratios
    let mut pre = sqrt_product(nm, s);
    if let Some(t) = t {
        pre *= Float::with_val(p, (&all).pow(-(t as i32)));
    }
    Ok(nm.c(pre) / den)
}

/// Θ₃/ϑ determinant integrand for t-cores at a single point w.
pub fn eval_cor43(t: u32, s: &[Rational], q: &Rational, q2: &Rational, w: &[Complex], prec: u32) -> Result<Complex> {
    let nm = Numeric::new(q, prec);
    let sf = fs(&nm, s);
    let q2f = fl(prec, q2);
    let n = s.len();
    let mut acc = det_prefactor(&nm, -1, Some(t), &sf, &q2f)?;
    for j in 0..n {
        acc *= root_ratio(&nm, t, &sf[j], &w[j])?;
    }
    let mut m = vec![vec![Complex::new(prec); n]; n];
    for i in 0..n {
        for j in 0..n {
            let v = Complex::with_val(prec, &w[j] / &w[i]);
            m[i][j] = det_entry(&nm, -1, &q2f, &sf[i], &v)?;
        }
    }
    Ok(acc * det_small(m, prec))
}

/// The all-partitions determinant integrand at a single point w.
pub fn eval_bo_determinant(s: &[Rational], q: &Rational, q2: &Rational, w: &[Complex], prec: u32) -> Result<Complex> {
    let nm = Numeric::new(q, prec);
    let sf = fs(&nm, s);
    let q2f = fl(prec, q2);
    let n = s.len();
    let acc = det_prefactor(&nm, 1, None, &sf, &q2f)?;
    let mut m = vec![vec![Complex::new(prec); n]; n];
    for i in 0..n {
        for j in 0..n {
            let v = Complex::with_val(prec, &w[j] / &w[i]);
            m[i][j] = det_entry(&nm, 1, &q2f, &sf[i], &v)?;
        }
    }
    Ok(acc * det_small(m, prec))
}

fn grid_point(r: &Float, k: usize, m: usize, prec: u32) -> Complex {
    let mut angle = Float::with_val(prec, Constant::Pi) * 2u32;
    angle *= k as u32;
    angle /= m as u32;
    let unit = Complex::with_val(prec, (angle.clone().cos(), angle.sin()));
    unit * r
}

fn odometer(idx: &mut [usize], m: usize) -> bool {
    for x in idx.iter_mut() {
        *x += 1;
        if *x < m {
            return true;
        }
        *x = 0;
    }
    false
}

/// Average of f over the M^n grid w_j = r_j·e^{2πi k_j/M}.
pub fn torus_extract<F>(f: F, radii: &[Float], m: usize, prec: u32) -> Result<Complex>
where
    F: Fn(&[Complex]) -> Result<Complex> + Sync,
{
    let n = radii.len();
    if n == 0 {
        return f(&[]);
    }
    let pts: Vec<Vec<Complex>> = radii.iter().map(|r| (0..m).map(|k| grid_point(r, k, m, prec)).collect()).collect();
    // rows indexed by the first variable, summed pairwise in a fixed order
    let rows: Vec<Complex> = (0..m)
        .into_par_iter()
        .map(|k0| {
            let mut vals = Vec::new();
            let mut idx = vec![0usize; n - 1];
            loop {
                let mut w = vec![pts[0][k0].clone()];
                w.extend(idx.iter().enumerate().map(|(j, &k)| pts[j + 1][k].clone()));
                let v = f(&w)?;
                if !is_finite(&v) {
                    return Err(Error::NonFinite("integrand at a grid point".into()));
                }
                vals.push(v);
                if !odometer(&mut idx, m) {
                    break;
                }
            }
            Ok(pairwise_sum(&vals, prec))
        })
        .collect::<Result<_>>()?;
    let total = pairwise_sum(&rows, prec);
    Ok(total / Float::with_val(prec, m.pow(n as u32) as f64))
}

/// Which integrand to extract.
#[derive(Clone, Debug, PartialEq)]
pub enum Integrand {
    /// product of theta ratios
    Cor42 { t: u32 },
    /// Θ₃/ϑ determinant for t-cores
    Cor43 { t: u32, q2: Rational },
    /// all-partitions determinant
    BlochOkounkov { q2: Rational },
}

/// The integrand split as a constant times per-variable factors times
/// factors depending only on k_j − k_i mod M.
struct Tables {
    m: usize,
    constant: Complex,
    single: Vec<Vec<Complex>>,
    /// pair[i][k][d]: for products, the factor for i < k; for determinants,
    /// the (i, k) entry
    pair: Vec<Vec<Vec<Complex>>>,
    det: bool,
}

fn build_tables(kind: &Integrand, s: &[Rational], cfg: &QuadratureConfig, m: usize) -> Result<Tables> {
    let prec = cfg.prec;
    let nm = Numeric::new(&cfg.q, prec);
    let sf = fs(&nm, s);
    let n = s.len();
    let pts: Vec<Vec<Complex>> = cfg.radii.iter().map(|r| (0..m).map(|k| grid_point(r, k, m, prec)).collect()).collect();
    let diffs = |i: usize, k: usize| -> Vec<Complex> {
        // w_k/w_i at index difference d
        let ratio = Float::with_val(prec, &cfg.radii[k] / &cfg.radii[i]);
        (0..m).map(|d| grid_point(&ratio, d, m, prec)).collect()
    };
    let mut single = vec![vec![nm.c(1); m]; n];
    let mut pair = vec![vec![Vec::new(); n]; n];
    let (constant, det) = match kind {
        Integrand::Cor42 { t } => {
            let mut c = nm.c(1);
            for j in 0..n {
                let pre = Float::with_val(prec, (&sf[j]).pow(Float::with_val(prec, 0.5f64) - *t));
                c *= nm.c(pre) / nm.nonzero(nm.p(&nm.c(sf[j].clone()))?, "P(s) vanished")?;
                single[j] = pts[j].par_iter().map(|w| root_ratio(&nm, *t, &sf[j], w)).collect::<Result<_>>()?;
            }
            for i in 0..n {
                for k in i + 1..n {
                    pair[i][k] = diffs(i, k).par_iter().map(|u| pair_ratio(&nm, &sf[i], &sf[k], u)).collect::<Result<_>>()?;
                }
            }
            (c, false)
        }
        Integrand::Cor43 { q2, .. } | Integrand::BlochOkounkov { q2 } => {
            let (sign, t) = match kind {
                Integrand::Cor43 { t, .. } => (-1, Some(*t)),
                _ => (1, None),
            };
            let q2f = fl(prec, q2);
            let c = det_prefactor(&nm, sign, t, &sf, &q2f)?;
            if let Some(t) = t {
                for j in 0..n {
                    single[j] = pts[j].par_iter().map(|w| root_ratio(&nm, t, &sf[j], w)).collect::<Result<_>>()?;
                }
            }
            for i in 0..n {
                for k in 0..n {
                    pair[i][k] = if i == k {
                        vec![det_entry(&nm, sign, &q2f, &sf[i], &nm.c(1))?]
                    } else {
                        diffs(i, k).par_iter().map(|v| det_entry(&nm, sign, &q2f, &sf[i], v)).collect::<Result<_>>()?
                    };
                }
            }
            (c, true)
        }
    };
    Ok(Tables { m, constant, single, pair, det })
}

impl Tables {
    fn value(&self, idx: &[usize], prec: u32) -> Complex {
        let n = idx.len();
        let m = self.m;
        let d = |i: usize, k: usize| (idx[k] + m - idx[i]) % m;
        let mut acc = Complex::with_val(prec, 1);
        for (j, &k) in idx.iter().enumerate() {
            acc *= &self.single[j][k];
        }
        if self.det {
            let mat: Vec<Vec<Complex>> = (0..n)
                .map(|i| (0..n).map(|k| if i == k { self.pair[i][i][0].clone() } else { self.pair[i][k][d(i, k)].clone() }).collect())
                .collect();
            acc *= det_small(mat, prec);
        } else {
            for i in 0..n {
                for k in i + 1..n {
                    acc *= &self.pair[i][k][d(i, k)];
                }
            }
        }
        acc
    }

    fn average(&self, n: usize, prec: u32) -> Complex {
        let m = self.m;
        if n == 0 {
            return self.constant.clone();
        }
        let rows: Vec<Complex> = (0..m)
            .into_par_iter()
            .map(|k0| {
                let mut vals = Vec::new();
                let mut idx = vec![0usize; n];
                idx[0] = k0;
                loop {
                    vals.push(self.value(&idx, prec));
                    if !odometer(&mut idx[1..], m) {
                        break;
                    }
                }
                pairwise_sum(&vals, prec)
            })
            .collect();
        let total = pairwise_sum(&rows, prec);
        total * &self.constant / Float::with_val(prec, m.pow(n as u32) as f64)
    }
}

/// A converged (or not) quadrature value.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub value: Complex,
    pub m: usize,
    pub prec: u32,
    pub converged: bool,
    pub est_error: Float,
}

impl Extraction {
    pub fn to_json(&self) -> Value {
        let digits = (self.prec as f64 * std::f64::consts::LOG10_2) as usize;
        json!({
            "value_re": self.value.real().to_string_radix(10, Some(digits)),
            "value_im": self.value.imag().to_string_radix(10, Some(digits)),
            "M": self.m,
            "precision_bits": self.prec,
            "converged": self.converged,
            "est_error": self.est_error.to_f64(),
        })
    }
}

/// Extracts the constant term of an integrand, doubling M until two
/// successive values agree to 10^{−(digits+5)}.
pub fn extract(kind: &Integrand, s: &[Rational], cfg: &QuadratureConfig) -> Result<Extraction> {
    cfg.check_region(s)?;
    let n = s.len();
    let prec = cfg.prec;
    let tol = Float::with_val(prec, 10u32).pow(-(cfg.digits as i32 + 5));
    let mut m = cfg.m;
    let mut prev = build_tables(kind, s, cfg, m)?.average(n, prec);
    if n == 0 {
        return Ok(Extraction { value: prev, m, prec, converged: true, est_error: Float::new(prec) });
    }
    loop {
        if 2 * m > cfg.max_m {
            return Ok(Extraction { value: prev, m, prec, converged: false, est_error: Float::with_val(prec, Float::i_exp(1, 30)) });
        }
        m *= 2;
        let cur = build_tables(kind, s, cfg, m)?.average(n, prec);
        let err = abs(&Complex::with_val(prec, &cur - &prev));
        if err < tol {
            return Ok(Extraction { value: cur, m, prec, converged: true, est_error: err });
        }
        prev = cur;
    }
}

/// Like `extract`, but a non-converged run is an error.
pub fn extract_converged(kind: &Integrand, s: &[Rational], cfg: &QuadratureConfig) -> Result<Extraction> {
    let e = extract(kind, s, cfg)?;
    if !e.converged {
        return Err(Error::NonConvergence(format!("no agreement up to M = {}", e.m)));
    }
    Ok(e)
}

/// A rational Q-series (doubled exponents) evaluated at numeric Q.
pub fn eval_series_at(f: &Series<Rational>, q: &Rational, prec: u32) -> Complex {
    let x = Complex::with_val(prec, (Float::with_val(prec, q).sqrt(), 0));
    f.eval(&x, prec)
}

/// Number of decimal digits on which two values agree, from |a − b|.
pub fn agreement_digits(a: &Complex, b: &Complex) -> f64 {
    let prec = a.prec().0;
    let d = abs(&Complex::with_val(prec, a - b));
    if d.is_zero() {
        return f64::INFINITY;
    }
    -d.log10().to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::npoint::{brute_force_ft, SValue};

    fn r(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    const P: u32 = 128;

    #[test]
    fn torus_trivial_cases() {
        let radii = vec![Float::with_val(P, 1.5f64)];
        let one = torus_extract(|_| Ok(Complex::with_val(P, 1)), &radii, 8, P).unwrap();
        assert_eq!(one, Complex::with_val(P, 1));
        let lp = torus_extract(
            |w| Ok(Complex::with_val(P, &w[0] + 3u32) + Complex::with_val(P, w[0].recip_ref())),
            &radii,
            4,
            P,
        )
        .unwrap();
        assert!(agreement_digits(&lp, &Complex::with_val(P, 3)) > 30.0);
    }

    #[test]
    fn geometric_remainder_bound() {
        // 1/(1 − w/R) on |w| = c averages to 1/(1 − (c/R)^M)
        let (c, big_r, m) = (1.0f64, 2.0f64, 32usize);
        let radii = vec![Float::with_val(P, c)];
        let v = torus_extract(
            |w| {
                let x = Complex::with_val(P, &w[0] / big_r);
                Ok(Complex::with_val(P, 1u32 - x).recip())
            },
            &radii,
            m,
            P,
        )
        .unwrap();
        let bound = 2.0 * (c / big_r).powi(m as i32);
        let err = abs(&Complex::with_val(P, &v - 1u32)).to_f64();
        assert!(err < bound, "{err} vs {bound}");
    }

    #[test]
    fn theta_factors_against_series() {
        // P(z)·z^{−1/2} against the exact ϑ series at z = 4, Q = 1/10
        let q = r(1, 10);
        let nm = Numeric::new(&q, P);
        let arg = crate::theta::ThetaArg::scaled_root(1, &Rational::from(2), 0);
        let exact = crate::theta::vartheta(&arg, 120).map_coeffs(&(), |c| c.as_rational().unwrap());
        let want = eval_series_at(&exact, &q, P);
        let got = nm.vartheta(&nm.c(4), &nm.c(2)).unwrap();
        assert!(agreement_digits(&got, &want) > 30.0);
        let z = Complex::with_val(P, (0.3f64, -0.7f64));
        let t3 = nm.theta3(&z).unwrap();
        // Θ₃ at z and its product form agree numerically
        let mut prod = Complex::with_val(P, 1);
        let qf = Float::with_val(P, &q);
        for b in 1..200u32 {
            let qb = Float::with_val(P, (&qf).pow(b));
            let qh = Float::with_val(P, (&qf).pow(Float::with_val(P, b as f64 - 0.5)));
            prod *= Complex::with_val(P, (Float::with_val(P, 1u32 - &qb), 0))
                * (Complex::with_val(P, &z * &qh) + 1u32)
                * (Complex::with_val(P, z.recip_ref()) * &qh + 1u32);
        }
        assert!(agreement_digits(&t3, &prod) > 30.0);
    }

    #[test]
    fn fast_tables_match_pointwise() {
        let s = [r(4, 1), r(9, 4)];
        let q = r(1, 20);
        let mut cfg = QuadratureConfig::new(&q, &s, 96, 10).unwrap();
        cfg.m = 8;
        for kind in [Integrand::Cor42 { t: 3 }, Integrand::Cor43 { t: 3, q2: r(1, 1) }, Integrand::BlochOkounkov { q2: r(1, 2) }] {
            let fast = build_tables(&kind, &s, &cfg, 8).unwrap().average(2, 96);
            let slow = torus_extract(
                |w| match &kind {
                    Integrand::Cor42 { t } => eval_cor42(*t, &s, &q, w, 96),
                    Integrand::Cor43 { t, q2 } => eval_cor43(*t, &s, &q, q2, w, 96),
                    Integrand::BlochOkounkov { q2 } => eval_bo_determinant(&s, &q, q2, w, 96),
                },
                &cfg.radii,
                8,
                96,
            )
            .unwrap();
            assert!(agreement_digits(&fast, &slow) > 25.0, "{kind:?}");
        }
    }

    #[test]
    fn one_point_low_precision() {
        let s = [r(4, 1)];
        let q = r(1, 10);
        let cfg = QuadratureConfig::new(&q, &s, P, 15).unwrap();
        let exact = brute_force_ft(2, &[SValue::parse("4").unwrap()], 40).unwrap();
        let want = eval_series_at(&exact, &q, P);
        let a = extract_converged(&Integrand::Cor42 { t: 2 }, &s, &cfg).unwrap();
        assert!(agreement_digits(&a.value, &want) > 15.0, "{}", agreement_digits(&a.value, &want));
        let b = extract_converged(&Integrand::Cor43 { t: 2, q2: r(1, 1) }, &s, &cfg).unwrap();
        assert!(agreement_digits(&b.value, &want) > 15.0);
        assert!(a.value.imag().clone().abs() < 1e-15);
    }

    #[test]
    fn radii_respect_region() {
        let s = [r(4, 1), r(9, 4)];
        let cfg = QuadratureConfig::new(&r(1, 20), &s, 64, 10).unwrap();
        cfg.check_region(&s).unwrap();
        assert!(QuadratureConfig::new(&r(1, 2), &s, 64, 10).is_err());
    }
}
