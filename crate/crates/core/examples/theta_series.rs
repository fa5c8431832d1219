//! Theta functions at roots of unity and Eisenstein series. Exponents of Q
//! are printed doubled, and x is the generator of the cyclotomic field.
//!
//! cargo run --release --example theta_series

use rug::Rational;
use tcore::algebra::CycloNum;
use tcore::theta::{eisenstein, level_series, theta3, theta3_product, vartheta, ThetaArg};

fn main() -> tcore::Result<()> {
    let trunc2 = 8;
    let z = CycloNum::scaled_root(6, &Rational::from(2), 1);
    println!("Theta3(2 xi_6) = {:?}", theta3(&z, trunc2).terms().map(|(e, c)| format!("[exp2 {e}] {c}")).collect::<Vec<_>>());
    println!("sum equals triple product: {}", theta3(&z, trunc2) == theta3_product(&z, trunc2));
    let x = ThetaArg::scaled_root(3, &Rational::from(1), 1);
    println!("vartheta(xi_3) = {:?}", vartheta(&x, trunc2).terms().map(|(e, c)| format!("[exp2 {e}] {c}")).collect::<Vec<_>>());
    println!("E_2 = {:?}", eisenstein(1, 5).terms().map(|(e, c)| format!("{c} Q^{}", e / 2)).collect::<Vec<_>>());
    let e = level_series(3, 1, 2, 4)?;
    println!("E^1_2 at t = 3: {:?}", e.terms().map(|(e, c)| format!("({c}) Q^{}", e / 2)).collect::<Vec<_>>());
    Ok(())
}
