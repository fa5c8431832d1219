//! Counts t-cores by size and compares with the two product expansions.
//!
//! cargo run --release --example count_tcores

use tcore::npoint::{t_core_product, CoreProductExponent};
use tcore::partitions::enumerate_t_cores;

fn main() {
    let max = 30;
    for t in 2..=6u32 {
        let counts: Vec<usize> = enumerate_t_cores(t, max).iter().map(|c| c.len()).collect();
        let first_mismatch = |e| {
            let p = t_core_product(t, e, max);
            counts.iter().enumerate().find(|(k, &c)| p.coeff(2 * *k as i64).unwrap_or_default() != c).map(|(k, _)| k)
        };
        println!(
            "t = {t}: counts {:?}...; exponent t first mismatch {:?}, exponent n first mismatch {:?}",
            &counts[..10],
            first_mismatch(CoreProductExponent::T),
            first_mismatch(CoreProductExponent::N)
        );
    }
    let cores = enumerate_t_cores(3, 8);
    for (n, v) in cores.iter().enumerate() {
        let names: Vec<String> = v.iter().map(|p| p.to_string()).collect();
        println!("3-cores of size {n}: {}", names.join(" "));
    }
}
