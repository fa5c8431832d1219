//! The q-deformed partition function as a double sum and as a product.
//!
//! cargo run --release --example qdeformed_z

use rug::Rational;
use tcore::npoint::{qdeformed_z_product, qdeformed_z_sum, qdeformed_zn_sum, SValue};

fn main() -> tcore::Result<()> {
    for q in [Rational::from(2), Rational::from((3, 2))] {
        let sum = qdeformed_z_sum(&q, 6)?;
        let prod = qdeformed_z_product(&q, 6)?;
        println!("q = {q}: {} terms to total degree 6, sum = product: {}", sum.terms().count(), sum == prod);
    }
    let zn = qdeformed_zn_sum(&Rational::from(3), &[SValue::parse("4")?], 3)?;
    for ((a, b), c) in zn.terms() {
        println!("Q^{} Q1^{}: {c}", a / 2, b / 2);
    }
    Ok(())
}
