//! Computes F_t by enumeration and by both closed theta-determinant forms.
//!
//! cargo run --release --example npoint_routes

use std::time::Instant;

use rug::Rational;
use tcore::npoint::{brute_force_ft, closed_ft, closed_ft_r, ClosedOptions, SValue};

fn main() -> tcore::Result<()> {
    let order = 6;
    for (t, s) in [(2u32, vec!["4"]), (3, vec!["4", "9/4"]), (4, vec!["9/4", "25/16", "4"])] {
        let sv: Vec<SValue> = s.iter().map(|x| SValue::parse(x)).collect::<tcore::Result<_>>()?;
        let start = Instant::now();
        let brute = brute_force_ft(t, &sv, order)?;
        let tb = start.elapsed();
        let start = Instant::now();
        let closed = closed_ft(t, &sv, &Rational::from((5, 3)), order, ClosedOptions::default())?;
        let tc = start.elapsed();
        let agree_r = sv.len() < 2 || closed_ft_r(t, &sv, 1, order)? == brute;
        println!("t = {t}, s = {s:?}: brute {tb:.1?}, closed {tc:.1?}, equal: {}, closed_r equal: {agree_r}", brute == closed);
        let head: Vec<String> = brute.terms().take(3).map(|(e, c)| format!("{c} Q^{}", e / 2)).collect();
        println!("  {} + ...", head.join(" + "));
    }
    Ok(())
}
