//! Expresses correlation functions of t-cores through Eisenstein-type series.
//!
//! cargo run --release --example quasimodularity

use tcore::npoint::{correlation, correlation_expansion};
use tcore::quasimod::{build_basis, check_2core_identity, lift_rational, membership_report, membership_solve};

fn main() -> tcore::Result<()> {
    let (fit, check) = (20, 30);
    for t in [2u32, 3] {
        for ls in [vec![2u32], vec![1, 1], vec![3], vec![2, 2], vec![4]] {
            let weight: u32 = ls.iter().sum();
            let table = correlation_expansion(t, &ls, check)?;
            let target = lift_rational(&correlation(&table, &ls)?, t);
            let basis = build_basis(t, weight, check)?;
            let r = membership_solve(&target, &basis, fit, check)?;
            let name = format!("t={t} <f{}>", ls.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" f"));
            let rep = membership_report(&name, &basis, fit, check, &r);
            println!("{name}: {} over {} monomials", rep["status"], basis.monomials.len());
        }
    }
    let id = check_2core_identity(8, 12)?;
    println!("level-2 log theta identity to z^8, Q^12: {}", if id.holds { "holds" } else { "fails" });
    Ok(())
}
