//! One function per subcommand, each turning a validated `RunConfig` into an
//! `Output`.

use std::io::Write;
use std::time::Instant;

use rug::Rational;
use serde_json::{json, Value};

use super::emit::{series_rows, series_text, Output};
use super::{IntegrandArg, MethodArg, RunConfig, TargetArg, ZForm};
use crate::algebra::bivariate::BiSeries;
use crate::algebra::quad::QuadNum;
use crate::algebra::rational::parse_rational;
use crate::algebra::{Coeff, Series};
use crate::contour::{agreement_digits, eval_series_at, extract_converged, Integrand, QuadratureConfig};
use crate::error::{Error, Result};
use crate::npoint::{
    bloch_okounkov_f, brute_force_ft, closed_ft, closed_ft_r, correlation, correlation_expansion, qdeformed_z_product,
    qdeformed_z_sum, qdeformed_zn_sum, t_core_product, ClosedOptions, CoreProductExponent, Method, NPointResult,
    SValue,
};
use crate::partitions::enumerate_t_cores;
use crate::quasimod::{build_basis, check_2core_identity, lift_rational, membership_report, membership_solve, Membership};

pub fn execute(cfg: &RunConfig, err: &mut dyn Write) -> Result<Output> {
    match cfg.command.as_str() {
        "count-tcores" => count_tcores(cfg.t.unwrap_or(2), cfg.order),
        "npoint" => npoint(cfg),
        "zfunction" => zfunction(cfg),
        "correlation" => correlation_cmd(cfg),
        "quasimod-check" => quasimod_check(cfg),
        "contour-extract" => contour_extract(cfg),
        "verify" => super::verify::verify_command(cfg, err),
        other => Err(Error::Invalid(format!("unknown command {other}"))),
    }
}

fn coeff_at(s: &Series<Rational>, k: u32) -> Rational {
    s.coeff(2 * k as i64).unwrap_or_default()
}

pub fn count_tcores(t: u32, max: u32) -> Result<Output> {
    let counts: Vec<usize> = enumerate_t_cores(t, max).iter().map(|c| c.len()).collect();
    let with_t = t_core_product(t, CoreProductExponent::T, max);
    let with_n = t_core_product(t, CoreProductExponent::N, max);
    let mut rows = Vec::new();
    let mut table = Vec::new();
    let (mut all_t, mut all_n) = (true, true);
    for (k, &c) in counts.iter().enumerate() {
        let (pt, pn) = (coeff_at(&with_t, k as u32), coeff_at(&with_n, k as u32));
        let (mt, mn) = (pt == c, pn == c);
        all_t &= mt;
        all_n &= mn;
        rows.push(vec![k.to_string(), c.to_string(), pt.to_string(), pn.to_string(), mt.to_string(), mn.to_string()]);
        table.push(json!({"size": k, "count": c, "product_exp_t": pt.to_string(), "product_exp_n": pn.to_string(),
            "match_exp_t": mt, "match_exp_n": mn}));
    }
    let json = json!({
        "t": t,
        "max": max,
        "counts": counts,
        "rows": table,
        "match_exp_t": all_t,
        "match_exp_n": all_n,
    });
    let mut pretty = format!("t-cores for t = {t} up to size {max}\n{:>5} {:>8} {:>10} {:>10}\n", "size", "count", "exp t", "exp n");
    for r in &rows {
        pretty.push_str(&format!("{:>5} {:>8} {:>10} {:>10}\n", r[0], r[1], r[2], r[3]));
    }
    pretty.push_str(&format!("product with exponent t matches: {all_t}\nproduct with exponent n matches: {all_n}\n"));
    let header = ["size", "count", "product_exp_t", "product_exp_n", "match_exp_t", "match_exp_n"];
    Ok(Output::new(json, pretty).with_table(&header, rows).failed_if(!all_t))
}

fn npoint(cfg: &RunConfig) -> Result<Output> {
    let t = cfg.t.unwrap_or(2);
    let s = cfg.svalues()?;
    let q2 = parse_rational(cfg.q2.as_deref().unwrap_or("1"))?;
    let method = cfg.method.unwrap_or(MethodArg::Brute);
    if method == MethodArg::Contour {
        return npoint_contour(t, cfg, &s);
    }
    let start = Instant::now();
    let opts = ClosedOptions { all_tuples: cfg.all_tuples };
    let (series, m, q2o, r) = match method {
        MethodArg::Brute => (brute_force_ft(t, &s, cfg.order)?, Method::Brute, None, None),
        MethodArg::Closed => (closed_ft(t, &s, &q2, cfg.order, opts)?, Method::Closed, Some(q2), None),
        MethodArg::ClosedR => {
            let r = cfg.r.unwrap_or(1);
            (closed_ft_r(t, &s, r, cfg.order)?, Method::ClosedR, None, Some(r))
        }
        MethodArg::Contour => unreachable!(),
    };
    let res = NPointResult { method: m, t, s, q2: q2o, r, series, elapsed_ms: start.elapsed().as_millis() };
    let mut json = res.to_json();
    // wall time goes to the pretty form only, so exact runs are reproducible byte for byte
    json.as_object_mut().expect("object").remove("elapsed_ms");
    let pretty = format!("F_{t} ({} ms)\n{}", res.elapsed_ms, series_text(&res.series));
    Ok(Output::new(json, pretty).with_table(&["exp2", "coeff"], series_rows(&res.series)))
}

fn npoint_contour(t: u32, cfg: &RunConfig, s: &[SValue]) -> Result<Output> {
    let q = parse_rational(cfg.q.as_deref().unwrap_or("1/10"))?;
    let sr: Vec<Rational> = s.iter().map(|v| v.s.clone()).collect();
    let mut qc = QuadratureConfig::new(&q, &sr, cfg.precision_bits, cfg.digits)?;
    if let Some(m) = cfg.m {
        qc.m = m.next_power_of_two();
    }
    let ex = extract_converged(&Integrand::Cor42 { t }, &sr, &qc)?;
    let mut json = ex.to_json();
    json["method"] = json!(Method::Contour);
    json["t"] = json!(t);
    json["n"] = json!(s.len());
    json["s"] = json!(cfg.s);
    json["Q"] = json!(q.to_string());
    let pretty = format!("F_{t} at Q = {q}: {} (M = {})\n", json["value_re"].as_str().unwrap_or(""), ex.m);
    Ok(Output::new(json, pretty))
}

fn bi_rows(z: &BiSeries<QuadNum>) -> Vec<Vec<String>> {
    z.terms().map(|((a, b), c)| vec![a.to_string(), b.to_string(), c.to_string()]).collect()
}

fn power(var: &str, e2: i64) -> String {
    match e2 {
        0 => "1".into(),
        2 => var.into(),
        e if e % 2 == 0 => format!("{var}^{}", e / 2),
        e => format!("{var}^({e}/2)"),
    }
}

fn zfunction(cfg: &RunConfig) -> Result<Output> {
    let q = parse_rational(cfg.q.as_deref().unwrap_or("2"))?;
    let s = cfg.svalues()?;
    let form = cfg.form.unwrap_or(ZForm::Sum);
    let z = match (form, s.is_empty()) {
        (ZForm::Sum, true) => qdeformed_z_sum(&q, cfg.order)?,
        (ZForm::Product, true) => qdeformed_z_product(&q, cfg.order)?,
        (ZForm::Sum, false) => qdeformed_zn_sum(&q, &s, cfg.order)?,
        (ZForm::Product, false) => return Err(Error::Invalid("the product form exists only for n = 0".into())),
    };
    let json = json!({"q": q.to_string(), "n": s.len(), "form": form, "series": z.to_json()});
    let mut pretty = format!("Z at q = {q}, total degree {}\n", cfg.order);
    for ((a, b), c) in z.terms() {
        if !c.is_zero() {
            pretty.push_str(&format!("{:>10} {:>10}  {c}\n", power("Q", *a), power("Q1", *b)));
        }
    }
    Ok(Output::new(json, pretty).with_table(&["exp2", "exp2_q1", "coeff"], bi_rows(&z)))
}

fn label(l: &[u32]) -> String {
    l.iter().map(|x| format!("f{x}")).collect::<Vec<_>>().join(" ")
}

fn correlation_cmd(cfg: &RunConfig) -> Result<Output> {
    let t = cfg.t.unwrap_or(2);
    let table = correlation_expansion(t, &cfg.l, cfg.order)?;
    let c = correlation(&table, &cfg.l)?;
    let json = json!({"t": t, "l": cfg.l, "order": cfg.order, "series": c.to_json()});
    let pretty = format!("<{}> for t = {t}\n{}", label(&cfg.l), series_text(&c));
    Ok(Output::new(json, pretty).with_table(&["exp2", "coeff"], series_rows(&c)))
}

fn quasimod_check(cfg: &RunConfig) -> Result<Output> {
    let t = cfg.t.unwrap_or(2);
    let (fit, check) = (cfg.fit.unwrap_or(20), cfg.check.unwrap_or(30));
    let target = cfg.target.unwrap_or(TargetArg::Correlation);
    if target == TargetArg::Identity {
        let id = check_2core_identity(cfg.order, check)?;
        let json = json!({"target": "log theta identity", "z_order": cfg.order, "q_order": check,
            "holds": id.holds, "first_mismatch": id.first_mismatch});
        let pretty = format!("identity to z^{}, Q^{check}: {}\n", cfg.order, if id.holds { "holds" } else { "fails" });
        return Ok(Output::new(json, pretty).failed_if(!id.holds));
    }
    let weight = cfg.weight.unwrap_or_else(|| cfg.l.iter().sum());
    let (name, series) = match target {
        TargetArg::Correlation => {
            let table = correlation_expansion(t, &cfg.l, check)?;
            (format!("<{}>", label(&cfg.l)), correlation(&table, &cfg.l)?)
        }
        _ => {
            let terms = (0..).map(|n: i64| 6 * n * n).take_while(|&e| e <= 2 * check as i64).map(|e| (e, Rational::from(1)));
            ("sum Q^(3n^2)".to_string(), Series::from_terms(&(), terms, 2 * check as i64))
        }
    };
    let basis = build_basis(t, weight, check)?;
    let result = membership_solve(&lift_rational(&series, t), &basis, fit, check)?;
    let mut json = membership_report(&name, &basis, fit, check, &result);
    json["t"] = json!(t);
    let mut pretty = format!("{name} at t = {t}, weight {weight}: {}\n", result.status());
    if let Membership::Accept(c) = &result {
        for (i, x) in c.iter().enumerate() {
            if !x.is_zero() {
                pretty.push_str(&format!("  {}  {}\n", json["coeffs"][i].as_str().unwrap_or(""), basis.name(i)));
            }
        }
    }
    let rows: Vec<Vec<String>> = (0..basis.monomials.len())
        .map(|i| vec![basis.name(i), json["coeffs"].get(i).and_then(Value::as_str).unwrap_or("").to_string()])
        .collect();
    let failed = !matches!(result, Membership::Accept(_));
    Ok(Output::new(json, pretty).with_table(&["monomial", "coeff"], rows).failed_if(failed))
}

fn contour_extract(cfg: &RunConfig) -> Result<Output> {
    let t = cfg.t.unwrap_or(2);
    let q = parse_rational(cfg.q.as_deref().unwrap_or("1/10"))?;
    let q2 = parse_rational(cfg.q2.as_deref().unwrap_or("1"))?;
    let s: Vec<Rational> = cfg.s.iter().map(|x| parse_rational(x)).collect::<Result<_>>()?;
    let kind = match cfg.integrand.unwrap_or(IntegrandArg::Cor42) {
        IntegrandArg::Cor42 => Integrand::Cor42 { t },
        IntegrandArg::Cor43 => Integrand::Cor43 { t, q2 },
        IntegrandArg::Bo => Integrand::BlochOkounkov { q2 },
    };
    let mut qc = QuadratureConfig::new(&q, &s, cfg.precision_bits, cfg.digits)?;
    if let Some(m) = cfg.m {
        qc.m = m.next_power_of_two();
        qc.max_m = qc.max_m.max(qc.m);
    }
    let ex = extract_converged(&kind, &s, &qc)?;
    let mut json = ex.to_json();
    json["Q"] = json!(q.to_string());
    json["s"] = json!(cfg.s);
    let mut pretty = format!("value {} (M = {}, {} bits)\n", json["value_re"].as_str().unwrap_or(""), ex.m, ex.prec);
    let mut failed = false;
    if let Some(order) = cfg.compare_order {
        let sv: Vec<SValue> = s.iter().map(SValue::new).collect::<Result<_>>()?;
        let exact = match kind {
            Integrand::BlochOkounkov { .. } => bloch_okounkov_f(&sv, order)?,
            _ => brute_force_ft(t, &sv, order)?,
        };
        let digits = agreement_digits(&ex.value, &eval_series_at(&exact, &q, cfg.precision_bits));
        failed = digits < cfg.digits as f64;
        json["compare_order"] = json!(order);
        json["agreement_digits"] = json!(if digits.is_finite() { digits } else { f64::MAX });
        pretty.push_str(&format!("agrees with the series to Q^{order} in {digits:.1} digits\n"));
    }
    Ok(Output::new(json, pretty).failed_if(failed))
}
