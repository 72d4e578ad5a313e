//! The graded ring `Λ^(m)(ε)` generated by the power sums `p_n`, `m ∤ n`.
//!
//! Elements live in the power-sum basis ([`PExpr`]); the generalized complete
//! functions `q_λ` appear only as coordinates ([`QExpr`]). [`ModularRing`]
//! fixes the parameter mode and caches `q_n`, `R_n`, `q_λ` and the change of
//! basis to `{q_μ : μ m-reduced}`.

mod linalg;
mod pexpr;
mod qexpr;
mod ring;

pub use linalg::{invert, mat_vec};
pub use pexpr::PExpr;
pub use qexpr::{QBasis, QExpr};
pub use ring::{truncated_exp, ModularRelationReport, ModularRing, ReducedBasis};

#[cfg(test)]
mod tests {
    use num::{BigInt, BigRational};
    use proptest::prelude::*;

    use super::*;
    use crate::partitions::{
        all_partitions, dominance_compare, enumerate, DominanceOrdering, Partition, PartitionClass,
    };
    use crate::scalars::{Cyc, CycRat, Params};

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn ring(m: usize) -> ModularRing {
        ModularRing::symbolic(m).unwrap()
    }

    fn p(r: &ModularRing, s: &str) -> PExpr {
        PExpr::p(r.field(), part(s)).unwrap()
    }

    #[test]
    fn power_sum_products() {
        let r = ring(3);
        assert_eq!(&p(&r, "1") * &p(&r, "2,1"), p(&r, "2,1,1"));
        assert_eq!(
            &(&p(&r, "1") + &p(&r, "2")) * &p(&r, "1"),
            &p(&r, "1,1") + &p(&r, "2,1")
        );
        let f = &p(&r, "4,2") + &p(&r, "1");
        assert_eq!(&PExpr::one(r.field()) * &f, f);
        let other = ring(2);
        assert!(f.checked_mul(&p(&other, "1")).is_err());
        assert!(PExpr::p(r.field(), part("3")).is_err());
    }

    #[test]
    fn derivative_examples() {
        let r = ring(2);
        assert_eq!(p(&r, "1,1").d_dp(1).unwrap(), p(&r, "1").scale(&r.params().int(2)));
        assert!(p(&r, "1,1").d_dp(3).unwrap().is_zero());
        let r3 = ring(3);
        assert_eq!(
            p(&r3, "2,1,1").d_dp(1).unwrap(),
            p(&r3, "2,1").scale(&r3.params().int(2))
        );
        assert!(p(&r, "1").d_dp(2).is_err());
    }

    #[test]
    fn q_expansion_examples() {
        let r = ring(2);
        let pr = r.params();
        let e1 = pr.epsilon(1).unwrap();
        let want = p(&r, "1,1").scale(&(&pr.int(2) * &(&e1 * &e1)).inv().unwrap());
        assert_eq!(r.q(2).unwrap(), want);
        assert_eq!(r.qprod(&part("2")).unwrap(), want);
        assert_eq!(
            r.qprod(&part("1,1")).unwrap(),
            p(&r, "1,1").scale(&(&e1 * &e1).inv().unwrap())
        );
        assert!(r.q(0).unwrap() == PExpr::one(r.field()));
        assert!(r.q_any(-3).unwrap().is_zero());
        assert_eq!(r.qprod(&Partition::empty()).unwrap(), PExpr::one(r.field()));

        let r3 = ring(3);
        let pr3 = r3.params();
        let (e1, e2) = (pr3.epsilon(1).unwrap(), pr3.epsilon(2).unwrap());
        let want = &p(&r3, "2").scale(&(&pr3.int(2) * &e2).inv().unwrap())
            + &p(&r3, "1,1").scale(&(&pr3.int(2) * &(&e1 * &e1)).inv().unwrap());
        assert_eq!(r3.q(2).unwrap(), want);
    }

    #[test]
    fn creation_coefficient_examples() {
        let r = ring(2);
        assert_eq!(r.r(0).unwrap(), PExpr::one(r.field()));
        assert_eq!(r.r(1).unwrap(), p(&r, "1").scale(&r.params().int(-2)));
        assert_eq!(r.r(2).unwrap(), p(&r, "1,1").scale(&r.params().int(2)));
    }

    #[test]
    fn scalar_product_examples() {
        let r = ring(2);
        let pr = r.params();
        let e1 = pr.epsilon(1).unwrap();
        assert_eq!(r.scalar_product(&p(&r, "1"), &p(&r, "1")).unwrap(), e1);
        assert_eq!(
            r.scalar_product(&p(&r, "1"), &p(&r, "1")).unwrap(),
            &pr.ratio(1, 2) * &(&pr.one() - &pr.q())
        );
        let r3 = ring(3);
        assert!(r3.scalar_product(&p(&r3, "1"), &p(&r3, "2")).unwrap().is_zero());
        for m in 2..=4 {
            let r = ring(m);
            let q1 = r.q(1).unwrap();
            assert_eq!(
                r.scalar_product(&q1, &q1).unwrap(),
                r.params().epsilon(1).unwrap().inv().unwrap()
            );
        }
    }

    fn exp_oracle(r: &ModularRing, max: usize, coeff: impl Fn(usize) -> CycRat) -> Vec<PExpr> {
        let series: Vec<PExpr> = (0..=max)
            .map(|k| {
                if k == 0 || k % r.m() == 0 {
                    PExpr::zero(r.field())
                } else {
                    PExpr::p(r.field(), Partition::row(k)).unwrap().scale(&coeff(k))
                }
            })
            .collect();
        truncated_exp(r.field(), &series, max)
    }

    #[test]
    fn q_matches_generating_function() {
        for (m, max) in [(2, 12), (3, 10), (4, 8)] {
            let r = ring(m);
            let pr = r.params();
            let coeffs = exp_oracle(&r, max, |k| {
                (&pr.int(k as i64) * &pr.epsilon(k).unwrap()).inv().unwrap()
            });
            for (n, want) in coeffs.iter().enumerate() {
                assert_eq!(&r.q(n).unwrap(), want, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn r_matches_creation_exponential() {
        for (m, max) in [(2, 12), (3, 10), (5, 7)] {
            let r = ring(m);
            let pr = r.params();
            let coeffs = exp_oracle(&r, max, |k| {
                let one_minus = &Cyc::one(r.field()) - &Cyc::xi_pow(r.field(), k as i64);
                pr.c_pow(k as i64)
                    .scale(&one_minus)
                    .scale_rational(&BigRational::new(1.into(), (k as i64).into()))
            });
            for (n, want) in coeffs.iter().enumerate() {
                assert_eq!(&r.r(n).unwrap(), want, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn logarithm_round_trip() {
        for m in [2, 3] {
            let r = ring(m);
            let pr = r.params();
            for n in (1..=10).filter(|n| n % m != 0) {
                let mut total = PExpr::zero(r.field());
                for lambda in all_partitions(n) {
                    let l = lambda.len();
                    let sign = if l % 2 == 1 { 1 } else { -1 };
                    let c = BigRational::new(
                        BigInt::from(sign) * BigInt::from(crate::partitions::factorial(l - 1)) * BigInt::from(n),
                        BigInt::from(lambda.mult_factorial()),
                    );
                    let coeff = pr.epsilon(n).unwrap().scale_rational(&c);
                    total.add_scaled(&r.qprod(&lambda).unwrap(), &coeff);
                }
                assert_eq!(total, PExpr::p(r.field(), Partition::row(n)).unwrap(), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn creation_convolution() {
        for m in [2, 3] {
            let r = ring(m);
            for n in 1..=10usize {
                let mut lhs = PExpr::zero(r.field());
                for i in 1..=n {
                    lhs = &lhs + &(&r.r(i).unwrap() * &r.q(n - i).unwrap());
                }
                let rhs = r.q(n).unwrap().scale(&r.params().q_pow_minus_one(n));
                assert_eq!(lhs, rhs, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn reduced_coordinates_examples() {
        let r = ring(2);
        let pr = r.params();
        let x = r.p_to_q_reduced(&r.qprod(&part("3,1")).unwrap()).unwrap();
        assert_eq!(x.terms().len(), 1);
        assert!(x.coeff(&part("3,1")).is_one());

        let x = r.p_to_q_reduced(&p(&r, "1")).unwrap();
        assert_eq!(x.coeff(&part("1")), pr.epsilon(1).unwrap());

        let x = r.p_to_q_reduced(&r.qprod(&part("1,1")).unwrap()).unwrap();
        assert_eq!(x.terms().len(), 1);
        assert_eq!(x.coeff(&part("2")), pr.int(2));

        assert!(r.p_to_q_reduced(&(&p(&r, "1") + &p(&r, "1,1"))).is_err());
        assert!(r.p_to_q_reduced(&PExpr::zero(r.field())).unwrap().is_zero());
    }

    #[test]
    fn reduced_coordinates_are_triangular() {
        for (m, max) in [(2, 8), (3, 6), (4, 5)] {
            let r = ring(m);
            for n in 1..=max {
                for lambda in all_partitions(n) {
                    let f = r.qprod(&lambda).unwrap();
                    let x = r.p_to_q_reduced(&f).unwrap();
                    for mu in x.terms().keys() {
                        let cmp = dominance_compare(mu, &lambda).unwrap();
                        assert!(
                            matches!(cmp, DominanceOrdering::Greater | DominanceOrdering::Equal),
                            "m={m} {lambda} has {mu}"
                        );
                    }
                    if lambda.is_reduced(m) {
                        assert!(x.coeff(&lambda).is_one());
                    }
                    assert_eq!(r.expand_q(&x).unwrap(), f);
                }
            }
        }
    }

    #[test]
    fn eval_mode_coordinates_round_trip() {
        let r = ModularRing::new(Params::eval_default(3).unwrap());
        for lambda in enumerate(6, PartitionClass::All, 3).unwrap() {
            let f = r.qprod(&lambda).unwrap();
            let x = r.p_to_q_reduced(&f).unwrap();
            assert_eq!(r.expand_q(&x).unwrap(), f);
        }
    }

    #[test]
    fn modular_relation_examples() {
        for (m, kmax) in [(2, 6), (3, 4), (4, 3)] {
            let r = ring(m);
            for k in 1..=kmax {
                let report = r.modular_relation_check(k).unwrap();
                assert!(report.holds(), "m={m} k={k}: {}", report.residual);
            }
        }
        // m = 2, k = 1: 2 q_2 - q_{(1,1)}.
        let r = ring(2);
        let rel = r.modular_relation_check(1).unwrap().relation;
        assert_eq!(rel.terms().len(), 2);
        assert_eq!(rel.coeff(&part("2")), r.params().int(2));
        assert_eq!(rel.coeff(&part("1,1")), r.params().int(-1));
    }

    #[test]
    fn json_shape() {
        let r = ring(2);
        let v = p(&r, "3,1").to_json();
        assert_eq!(v["m"], 2);
        assert_eq!(v["basis"], "p");
        assert_eq!(v["terms"][0]["partition"], serde_json::json!([3, 1]));
        let x = r.p_to_q_reduced(&p(&r, "1")).unwrap();
        assert_eq!(x.to_json()["basis"], "q_reduced");
    }

    fn build(r: &ModularRing, n: usize, spec: &[(usize, i64, i64)]) -> PExpr {
        let regs = enumerate(n, PartitionClass::Regular, r.m()).unwrap();
        let mut out = PExpr::zero(r.field());
        for &(i, c, qdeg) in spec {
            let coeff = &r.params().int(c) * &r.params().q_pow(qdeg as usize);
            out.add_scaled(&PExpr::p(r.field(), regs[i].clone()).unwrap(), &coeff);
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn annihilator_is_adjoint_to_multiplication(
            (m, n, k) in (2usize..=3, 1usize..=7).prop_flat_map(|(m, n)| {
                let ks: Vec<usize> = (1..=8 - n).filter(|k| k % m != 0).collect();
                (Just(m), Just(n), proptest::sample::select(ks))
            }),
            fs in proptest::collection::vec((0usize..64, -4i64..=4, 0i64..=2), 1..4),
            gs in proptest::collection::vec((0usize..64, -4i64..=4, 0i64..=2), 1..4),
        ) {
            let r = ring(m);
            let nf = enumerate(n, PartitionClass::Regular, m).unwrap().len();
            let ng = enumerate(n + k, PartitionClass::Regular, m).unwrap().len();
            let fs: Vec<_> = fs.into_iter().map(|(i, c, d)| (i % nf, c, d)).collect();
            let gs: Vec<_> = gs.into_iter().map(|(i, c, d)| (i % ng, c, d)).collect();
            let f = build(&r, n, &fs);
            let g = build(&r, n + k, &gs);
            let lhs = r.scalar_product(&r.h(-(k as i64), &f).unwrap(), &g).unwrap();
            let rhs = r.scalar_product(&f, &r.h(k as i64, &g).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
