//! Torus quadrature of the contour integrands against exact series.
//!
//! cargo run --release --example contour_oracle

use std::time::Instant;

use rug::Rational;
use tcore::contour::{agreement_digits, eval_series_at, extract_converged, Integrand, QuadratureConfig};
use tcore::npoint::{bloch_okounkov_f, brute_force_ft, SValue};

fn main() -> tcore::Result<()> {
    let prec = 256;
    let cases: Vec<(u32, Vec<&str>, Rational)> =
        vec![(2, vec!["4"], Rational::from((1, 10))), (3, vec!["4", "9/4"], Rational::from((1, 20)))];
    for (t, s, q) in cases {
        let sv: Vec<SValue> = s.iter().map(|x| SValue::parse(x)).collect::<tcore::Result<_>>()?;
        let sr: Vec<Rational> = sv.iter().map(|v| v.s.clone()).collect();
        let exact = eval_series_at(&brute_force_ft(t, &sv, 90)?, &q, prec);
        let cfg = QuadratureConfig::new(&q, &sr, prec, 20)?;
        for kind in [Integrand::Cor42 { t }, Integrand::Cor43 { t, q2: Rational::from(1) }] {
            let start = Instant::now();
            let e = extract_converged(&kind, &sr, &cfg)?;
            println!(
                "t={t} s={s:?} Q={q} {kind:?}: M={} digits={:.1} ({:.1?})",
                e.m,
                agreement_digits(&e.value, &exact),
                start.elapsed()
            );
        }
    }
    let s = SValue::parse("9/4")?;
    let q = Rational::from((1, 10));
    let exact = eval_series_at(&bloch_okounkov_f(std::slice::from_ref(&s), 50)?, &q, prec);
    let cfg = QuadratureConfig::new(&q, std::slice::from_ref(&s.s), prec, 20)?;
    let e = extract_converged(&Integrand::BlochOkounkov { q2: Rational::from(1) }, std::slice::from_ref(&s.s), &cfg)?;
    println!("all partitions s=9/4 Q=1/10: digits={:.1}", agreement_digits(&e.value, &exact));
    Ok(())
}
