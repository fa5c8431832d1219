//! Correlation functions of t-cores from the z-expansion of F_t.
//!
//! cargo run --release --example correlation

use tcore::npoint::{correlation, correlation_expansion};

fn main() -> tcore::Result<()> {
    for t in [2u32, 3, 5] {
        let table = correlation_expansion(t, &[4], 8)?;
        for l in 1..=4u32 {
            let c = correlation(&table, &[l])?;
            let terms: Vec<String> = c.terms().map(|(e, v)| format!("{v} Q^{}", e / 2)).collect();
            println!("t = {t} <f{l}> = {}", if terms.is_empty() { "0".into() } else { terms.join(" + ") });
        }
    }
    let table = correlation_expansion(2, &[2, 2], 6)?;
    println!("t = 2 <f2 f2> = {:?}", correlation(&table, &[2, 2])?.terms().map(|(e, v)| format!("{v} Q^{}", e / 2)).collect::<Vec<_>>());
    Ok(())
}
