//! Schur specializations and the topological vertex.
//!
//! cargo run --release --example topological_vertex

use rug::Rational;
use tcore::partitions::{partitions_of, Partition};
use tcore::symfunc::{dual_cauchy_product, dual_cauchy_sum, schur_hook_formula, topological_vertex, SpecPoint};

fn main() -> tcore::Result<()> {
    let q = Rational::from(2);
    let rho = SpecPoint::rho(&q)?;
    for lam in partitions_of(4) {
        println!("s_{lam}(q^rho) = {}  (hook formula agrees: {})", rho.schur(&lam)?, rho.schur(&lam)? == schur_hook_formula(&lam, &q)?);
    }
    let (a, b, c) = (Partition::new(vec![2])?, Partition::new(vec![1])?, Partition::new(vec![1, 1])?);
    let v = topological_vertex(&a, &b, &c, &q)?;
    println!("C_{{{a},{b},{c}}}(2) = {v}");
    println!("cyclic: {}", v == topological_vertex(&b, &c, &a, &q)? && v == topological_vertex(&c, &a, &b, &q)?);
    let lhs = dual_cauchy_sum(&a, &c, &q, 4)?;
    let rhs = dual_cauchy_product(&a, &c, &q, 4);
    for k in 0..=4 {
        println!("z^{k}: sum {}  product {}", lhs.coeff(k).unwrap(), rhs.coeff(k).unwrap());
    }
    Ok(())
}
