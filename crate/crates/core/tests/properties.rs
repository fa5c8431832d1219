//! Randomized invariants across the engines.

use proptest::prelude::*;
use proptest::sample::Index;
use rug::{Complex, Float, Rational};

use rug::ops::Pow;
use tcore::algebra::cyclo::{CycloNum, CycloTable};
use tcore::algebra::rational::totient;
use tcore::algebra::{Coeff, HalfExp, Series};
use tcore::cli::RunConfig;
use tcore::contour::{extract_converged, Integrand, QuadratureConfig};
use tcore::npoint::{brute_force_ft, closed_ft, closed_ft_cyclo, set_partitions, ClosedOptions, SValue};
use tcore::partitions::{partitions_of, CoreTest, Partition};
use tcore::quasimod::{build_basis, membership_solve, Membership};
use tcore::symfunc::{schur_hook_formula, topological_vertex, SpecPoint};
use tcore::theta::{jacobi_j, jacobi_j_product, theta3, theta3_product, ThetaArg};

const CONDUCTORS: [u32; 6] = [3, 4, 5, 6, 8, 12];
const S_POOL: [&str; 3] = ["4", "9/4", "25/16"];

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=7).prop_map(|(a, b)| Rational::from((a, b)))
}

fn cyclo_in(m: u32) -> impl Strategy<Value = CycloNum> {
    prop::collection::vec(rational(), totient(m) as usize)
        .prop_map(move |c| CycloNum::from_coeffs(m, c).expect("right length"))
}

fn cyclo_triple() -> impl Strategy<Value = (CycloNum, CycloNum, CycloNum)> {
    prop::sample::select(CONDUCTORS.to_vec()).prop_flat_map(|m| (cyclo_in(m), cyclo_in(m), cyclo_in(m)))
}

fn series_triple() -> impl Strategy<Value = (Series<Rational>, Series<Rational>, Series<Rational>)> {
    let one = |tr: i64| {
        prop::collection::vec((0..=tr, rational()), 0..8).prop_map(move |terms| Series::from_terms(&(), terms, tr))
    };
    (2i64..=12).prop_flat_map(move |tr| (one(tr), one(tr), one(tr)))
}

fn partition(max: u32) -> impl Strategy<Value = Partition> {
    (0..=max, any::<Index>()).prop_map(|(n, i)| {
        let all = partitions_of(n);
        all[i.index(all.len())].clone()
    })
}

fn svector(max_n: usize) -> impl Strategy<Value = Vec<SValue>> {
    prop::collection::vec(prop::sample::select(S_POOL.to_vec()), 1..=max_n)
        .prop_map(|v| v.iter().map(|x| SValue::parse(x).unwrap()).collect())
}

fn modulus(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cyclo_field_axioms((a, b, c) in cyclo_triple()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
        prop_assert_eq!(a.coeffs().len() as u32, totient(a.conductor()));
    }

    #[test]
    fn cyclo_embedding_is_multiplicative((a, b, _) in cyclo_triple()) {
        let p = 128;
        let (ea, eb) = (a.to_complex(p), b.to_complex(p));
        let diff = Complex::with_val(p, &a.mul(&b).to_complex(p) - Complex::with_val(p, &ea * &eb));
        // 2^{−p+8} for unit-sized operands, scaled by the operand sizes
        let scale = (Float::with_val(p, 1) + modulus(&ea)) * (Float::with_val(p, 1) + modulus(&eb));
        let tol = Float::with_val(p, Float::i_exp(1, 8 - p as i32)) * scale;
        prop_assert!(modulus(&diff) < tol);
    }

    #[test]
    fn series_ring_laws((a, b, c) in series_triple()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        let p = a.mul(&b);
        prop_assert!(p.terms().all(|(e, _)| e <= p.trunc()));
        prop_assert!(p.trunc() >= a.trunc().min(b.trunc()) || a.valuation() < 0 || b.valuation() < 0);
        // whatever lies beyond the operands' orders must not reach the product's reported order
        let bump = |x: &Series<Rational>| {
            let mut terms: Vec<(i64, Rational)> = x.terms().map(|(e, v)| (e, v.clone())).collect();
            terms.push((x.trunc() + 1, Rational::from(7)));
            Series::from_terms(&(), terms, x.trunc() + 1)
        };
        prop_assert_eq!(bump(&a).mul(&bump(&b)).truncate(p.trunc()), p);
    }

    #[test]
    fn cyclo_series_product_commutes(
        a in prop::collection::vec((0i64..=6, cyclo_in(12)), 0..5),
        b in prop::collection::vec((0i64..=6, cyclo_in(12)), 0..5),
    ) {
        let ctx = CycloTable::get(12);
        let (x, y) = (Series::from_terms(&ctx, a, 6), Series::from_terms(&ctx, b, 6));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
    }

    #[test]
    fn half_exponents_add_as_integers(a in -1000i64..1000, b in -1000i64..1000) {
        prop_assert_eq!((HalfExp(a) + HalfExp(b)).twice(), a + b);
        prop_assert_eq!(HalfExp::int(a).twice(), 2 * a);
    }

    #[test]
    fn partition_shape(nu in partition(20)) {
        prop_assert!(nu.parts().windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(nu.parts().iter().all(|&p| p > 0));
        prop_assert_eq!(nu.size(), nu.parts().iter().sum::<u32>());
        prop_assert_eq!(nu.conjugate().conjugate(), nu.clone());
        prop_assert_eq!(nu.conjugate().size(), nu.size());
    }

    #[test]
    fn maya_round_trip_and_hooks(nu in partition(14), margin in 0i64..4) {
        let w = nu.full_maya(margin);
        prop_assert_eq!(w.charge(), 0);
        prop_assert_eq!(w.to_partition().unwrap(), nu.clone());
        let mut hooks: Vec<u32> = nu.hook_lengths().into_iter().map(|(_, h)| h).collect();
        let mut gaps = w.one_zero_gaps();
        hooks.sort();
        gaps.sort();
        prop_assert_eq!(hooks, gaps);
        let sum: u64 = nu.hook_lengths().iter().map(|(_, h)| *h as u64).sum();
        prop_assert_eq!(sum, nu.n_statistic() + nu.conjugate().n_statistic() + nu.size() as u64);
    }

    #[test]
    fn core_tests_agree(nu in partition(18), t in 2u32..=5) {
        let a = nu.is_t_core(t, CoreTest::AllHooks);
        prop_assert_eq!(a, nu.is_t_core(t, CoreTest::HookEqualsT));
        prop_assert_eq!(a, nu.is_t_core(t, CoreTest::MayaPairs));
    }

    #[test]
    fn set_partitions_cover(n in 0usize..=6) {
        let all = set_partitions(n);
        let bell = [1, 1, 2, 5, 15, 52, 203];
        prop_assert_eq!(all.len(), bell[n]);
        for p in &all {
            let mut seen = 0u32;
            for (i, &b) in p.blocks.iter().enumerate() {
                prop_assert!(b != 0 && b & seen == 0);
                seen |= b;
                if i > 0 {
                    prop_assert!(p.blocks[i - 1].trailing_zeros() < b.trailing_zeros());
                }
            }
            prop_assert_eq!(seen, if n == 0 { 0 } else { (1u32 << n) - 1 });
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn hook_formula_matches_jacobi_trudi(lam in partition(8), q in prop::sample::select(vec![(2i64, 1i64), (3, 2), (5, 3)])) {
        let q = Rational::from(q);
        let rho = SpecPoint::rho(&q).unwrap();
        prop_assert_eq!(rho.schur(&lam).unwrap(), schur_hook_formula(&lam, &q).unwrap());
    }

    #[test]
    fn vertex_cyclic(a in partition(3), b in partition(3), c in partition(3)) {
        let q = Rational::from(2);
        let x = topological_vertex(&a, &b, &c, &q).unwrap();
        prop_assert_eq!(&x, &topological_vertex(&b, &c, &a, &q).unwrap());
        prop_assert_eq!(&x, &topological_vertex(&c, &a, &b, &q).unwrap());
    }

    #[test]
    fn theta_products(t in 2u32..=6, rho in prop::sample::select(vec![(1i64, 1i64), (2, 1), (3, 2), (-3, 2), (1, 3)]), c in -6i64..=6) {
        let rho = Rational::from(rho);
        let x = ThetaArg::scaled_root(t, &rho, c);
        prop_assert_eq!(x.sqrt_z.mul(&x.sqrt_z), x.z.clone());
        prop_assert_eq!(jacobi_j(&x.z, 20), jacobi_j_product(&x.z, 20));
        prop_assert_eq!(theta3(&x.z, 20), theta3_product(&x.z, 20));
    }

    #[test]
    fn closed_formula_is_rational_and_q2_free(t in 2u32..=4, s in svector(2), q2 in rational().prop_filter("nonzero", |x| *x != 0)) {
        let raw = closed_ft_cyclo(t, &s, &q2, 3, ClosedOptions::default()).unwrap();
        prop_assert!(raw.terms().all(|(_, c)| c.is_rational()));
        let f = closed_ft(t, &s, &q2, 3, ClosedOptions::default()).unwrap();
        prop_assert_eq!(f, brute_force_ft(t, &s, 3).unwrap());
    }

    #[test]
    fn config_round_trip(
        t in 2u32..=8,
        s in prop::collection::vec(prop::sample::select(S_POOL.to_vec()), 0..=3),
        order in 0u32..=20,
        seed in any::<u64>(),
        all_tuples in any::<bool>(),
    ) {
        let mut cfg: RunConfig = serde_json::from_value(serde_json::json!({"command": "npoint"})).unwrap();
        cfg.t = Some(t);
        cfg.s = s.iter().map(|x| x.to_string()).collect();
        cfg.order = order;
        cfg.seed = seed;
        cfg.all_tuples = all_tuples;
        cfg.q2 = Some("5/3".into());
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert!(cfg.validate().is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn membership_solutions_reproduce_target(coeffs in prop::collection::vec(-5i64..=5, 4)) {
        let b = build_basis(2, 2, 12).unwrap();
        let ctx = b.ctx();
        let mut target = Series::zero(&ctx, 24);
        for (i, &c) in coeffs.iter().enumerate() {
            let k = i * b.series.len() / coeffs.len();
            target = target.add(&b.series[k].scale(&CycloNum::rational(4, &Rational::from(c))));
        }
        match membership_solve(&target, &b, 8, 12).unwrap() {
            Membership::Accept(x) => {
                let mut back = Series::zero(&ctx, 24);
                for (i, c) in x.iter().enumerate() {
                    if !c.is_zero() {
                        prop_assert!(b.monomials[i].weight <= 2);
                        back = back.add(&b.series[i].scale(c));
                    }
                }
                prop_assert_eq!(back.truncate(24), target.truncate(24));
            }
            other => prop_assert!(false, "{:?}", other.status()),
        }
    }

    #[test]
    fn contour_precision_scaling(t in 2u32..=4, s in prop::sample::select(S_POOL.to_vec()), q in prop::sample::select(vec![(1i64, 10i64), (1, 20)])) {
        let q = Rational::from(q);
        let s = [SValue::parse(s).unwrap().s];
        let digits = 12;
        let lo = extract_converged(&Integrand::Cor42 { t }, &s, &QuadratureConfig::new(&q, &s, 96, digits).unwrap()).unwrap();
        let hi = extract_converged(&Integrand::Cor42 { t }, &s, &QuadratureConfig::new(&q, &s, 192, digits).unwrap()).unwrap();
        let tol = Float::with_val(192, 10u32).pow(-(digits as i32));
        let diff = Complex::with_val(192, &hi.value - &lo.value);
        prop_assert!(modulus(&diff) < tol);
        prop_assert!(Float::with_val(192, hi.value.imag().abs_ref()) < tol);
    }
}
