//! The zero mode `X₀` of the vertex operator
//! `X(z) = exp(Σ z^n p_n (1-ξ^n) c^n / n) · exp(Σ z^{-n} h_n (1-ξ^n) / n)`.
//!
//! `X₀` is computed two independent ways: from its action on products of
//! `q_n` ([`x0_apply_series`]) and as the differential operator
//! `Σ_k R_k S_k` ([`x0_apply_diff`]). [`X0Matrix`] records `X₀` on
//! `{q_λ : λ m-reduced}`, where it is triangular in dominance order.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::newton::{d_mu, PowerMinusOne};
use crate::partitions::{dominance_compare, enumerate, DominanceOrdering, Partition, PartitionClass};
use crate::scalars::{Cyc, CycRat, Params};
use crate::symfunc::{ModularRing, PExpr, QBasis, QExpr};

/// `X₀ q_λ = Σ_{0 ≤ i_j ≤ λ_j} R_{Σi} a_{i_1} q_{λ_1-i_1} ⋯ a_{i_s} q_{λ_s-i_s}`
/// with `a_0 = 1`, `a_k = 1 - ξ`. Tuples with the same surviving values are
/// merged before any ring multiplication.
pub fn x0_apply_series(ring: &ModularRing, lambda: &Partition) -> Result<PExpr> {
    let field = ring.field();
    let mut out = PExpr::zero(field);
    for (nu, weight) in lowering_weights(ring.params(), lambda) {
        let k = lambda.weight() - nu.weight();
        let term = &ring.r(k)? * &ring.qprod(&nu)?;
        out.add_scaled(&term, &CycRat::from_cyc(weight));
    }
    Ok(out)
}

/// Groups tuples `0 ≤ i_j ≤ λ_j` by the positive values `λ_j - i_j`, summing
/// `(1-ξ)^{#{j : i_j > 0}}`.
fn lowering_weights(params: &Params, lambda: &Partition) -> HashMap<Partition, Cyc> {
    let field = params.field();
    let a = &Cyc::one(field) - &params.xi_pow(1);
    let powers: Vec<Cyc> = (0..=lambda.len())
        .map(|k| a.pow(k as i64).expect("nonnegative power"))
        .collect();
    let parts = lambda.parts();
    let mut steps = vec![0usize; parts.len()];
    let mut out: HashMap<Partition, Cyc> = HashMap::new();
    loop {
        let nu = Partition::new(parts.iter().zip(&steps).map(|(l, i)| l - i).collect());
        let lowered = steps.iter().filter(|&&i| i > 0).count();
        let slot = out.entry(nu).or_insert_with(|| Cyc::zero(field));
        *slot += &powers[lowered];
        let mut j = 0;
        loop {
            if j == parts.len() {
                return out;
            }
            if steps[j] < parts[j] {
                steps[j] += 1;
                break;
            }
            steps[j] = 0;
            j += 1;
        }
    }
}

/// The `z^{-k}` coefficient `S_k` of the annihilation exponential, written as
/// a polynomial in the commuting symbols `∂/∂p_n` (stored as `p_n`):
/// `S_k = Σ_{ρ ∈ P^(m)(k)} ∏_i (q^{ρ_i} - 1) c^{-ρ_i} / m(ρ)! · ∂_ρ`.
pub fn annihilation_symbol(params: &Params, k: usize) -> Result<PExpr> {
    let field = params.field();
    let mut out = PExpr::zero(field);
    for rho in enumerate(k, PartitionClass::Regular, params.m())? {
        let mut coeff = params.one();
        for &part in rho.parts() {
            coeff = &coeff * &(&params.q_pow_minus_one(part) * &params.c_pow(-(part as i64)));
        }
        let denom = CycRat::from_rational(field, num::BigRational::from_integer(rho.mult_factorial().into()));
        out.accumulate(rho, &coeff.checked_div(&denom)?);
    }
    Ok(out)
}

/// Applies a polynomial in `∂/∂p_n` (given as its symbol) to `f`.
pub fn apply_symbol(symbol: &PExpr, f: &PExpr) -> Result<PExpr> {
    let mut out = PExpr::zero(f.field());
    for (rho, c) in symbol.terms() {
        let mut g = f.clone();
        for &part in rho.parts() {
            if g.is_zero() {
                break;
            }
            g = g.d_dp(part)?;
        }
        out.add_scaled(&g, c);
    }
    Ok(out)
}

/// `X₀ f = Σ_{k=0}^{deg f} R_k S_k f` for homogeneous `f`.
pub fn x0_apply_diff(ring: &ModularRing, f: &PExpr) -> Result<PExpr> {
    let n = f.degree().ok_or(Error::NotHomogeneous)?;
    let mut out = PExpr::zero(ring.field());
    for k in 0..=n {
        let s = apply_symbol(&annihilation_symbol(ring.params(), k)?, f)?;
        if !s.is_zero() {
            out = &out + &(&ring.r(k)? * &s);
        }
    }
    Ok(out)
}

/// `X₀ q_λ` with `q_n` as free symbols, expanding `R_k = Σ_{κ⊢k} d_κ q_κ`
/// with `d_n = q^n - 1`.
pub fn x0_apply_free(params: &Params, lambda: &Partition) -> Result<QExpr> {
    let field = params.field();
    let d = PowerMinusOne(params.clone());
    let mut creation: HashMap<usize, QExpr> = HashMap::new();
    let mut out = QExpr::zero(field, QBasis::Plain);
    for (nu, weight) in lowering_weights(params, lambda) {
        let k = lambda.weight() - nu.weight();
        if let Entry::Vacant(slot) = creation.entry(k) {
            let mut r = QExpr::one(field);
            if k > 0 {
                r = QExpr::zero(field, QBasis::Plain);
                for kappa in crate::partitions::all_partitions(k) {
                    let c = d_mu(&kappa, &d, field)?;
                    r.add_term(kappa, &c)?;
                }
            }
            slot.insert(r);
        }
        let qnu = QExpr::monomial(field, QBasis::Plain, nu, CycRat::from_cyc(weight))?;
        out.add_scaled(&creation[&k].mul_free(&qnu), &CycRat::one(field))?;
    }
    Ok(out)
}

/// The main part `f_λ(q) = Σ_i (q^{λ_i} - 1) ξ^{i-1}` of the eigenvalue.
pub fn f_main(params: &Params, lambda: &Partition) -> CycRat {
    let mut acc = params.zero();
    for (i, &part) in lambda.parts().iter().enumerate() {
        acc = &acc + &params.q_pow_minus_one(part).scale(&params.xi_pow(i as i64));
    }
    acc
}

/// `c_λλ = 1 + (1 - ξ) Σ_i (q^{λ_i} - 1) ξ^{i-1}`.
pub fn eigenvalue_c(params: &Params, lambda: &Partition) -> CycRat {
    let one_minus_xi = &Cyc::one(params.field()) - &params.xi_pow(1);
    &params.one() + &f_main(params, lambda).scale(&one_minus_xi)
}

/// `m_i(λ) ≡ m_i(μ) (mod m)` for every `i`: exactly when `c_λλ = c_μμ`.
pub fn eigen_collision(lambda: &Partition, mu: &Partition, m: usize) -> bool {
    let (a, b) = (lambda.multiplicities(), mu.multiplicities());
    a.keys()
        .chain(b.keys())
        .all(|i| a.get(i).copied().unwrap_or(0) % m == b.get(i).copied().unwrap_or(0) % m)
}

/// In eval mode, fails if two m-reduced partitions of `n` have equal
/// eigenvalues at the evaluation point.
pub fn check_eval_separation(params: &Params, n: usize) -> Result<()> {
    if params.is_symbolic() {
        return Ok(());
    }
    let reduced = enumerate(n, PartitionClass::Reduced, params.m())?;
    let values: Vec<CycRat> = reduced.iter().map(|l| eigenvalue_c(params, l)).collect();
    for i in 0..reduced.len() {
        for j in i + 1..reduced.len() {
            if eigen_collision(&reduced[i], &reduced[j], params.m()) {
                return Err(Error::InvariantViolation(format!(
                    "distinct m-reduced partitions {} and {} share multiplicity residues",
                    reduced[i], reduced[j]
                )));
            }
            if values[i] == values[j] {
                return Err(Error::EigenvalueCollisionAtEvaluation {
                    lambda: reduced[i].clone(),
                    mu: reduced[j].clone(),
                });
            }
        }
    }
    Ok(())
}

/// `X₀` on `{q_λ : λ ∈ P_m(n)}`. Entry `(ν, λ)` is `c'_{λν}`, the
/// `q_ν`-coordinate of `X₀ q_λ`; rows and columns follow `order`.
#[derive(Clone, Debug)]
pub struct X0Matrix {
    pub m: usize,
    pub n: usize,
    pub params: Params,
    pub order: Vec<Partition>,
    pub entries: Vec<Vec<CycRat>>,
}

impl X0Matrix {
    /// Builds the matrix, asserting dominance triangularity and the diagonal.
    pub fn build(ring: &ModularRing, n: usize) -> Result<X0Matrix> {
        let params = ring.params();
        check_eval_separation(params, n)?;
        let basis = ring.reduced_basis(n)?;
        let order = basis.order().to_vec();
        let columns: Vec<QExpr> = order
            .par_iter()
            .map(|lambda| ring.p_to_q_reduced(&x0_apply_series(ring, lambda)?))
            .collect::<Result<_>>()?;
        let size = order.len();
        let mut entries = vec![vec![params.zero(); size]; size];
        for (col, x) in columns.iter().enumerate() {
            for (row, nu) in order.iter().enumerate() {
                entries[row][col] = x.coeff(nu);
            }
        }
        let matrix = X0Matrix {
            m: ring.m(),
            n,
            params: params.clone(),
            order,
            entries,
        };
        matrix.verify()?;
        Ok(matrix)
    }

    /// `c'_{λν}`.
    pub fn entry(&self, lambda: &Partition, nu: &Partition) -> Option<&CycRat> {
        let col = self.order.iter().position(|p| p == lambda)?;
        let row = self.order.iter().position(|p| p == nu)?;
        Some(&self.entries[row][col])
    }

    fn verify(&self) -> Result<()> {
        for (col, lambda) in self.order.iter().enumerate() {
            for (row, nu) in self.order.iter().enumerate() {
                let x = &self.entries[row][col];
                if row == col {
                    let want = eigenvalue_c(&self.params, lambda);
                    if *x != want {
                        return Err(Error::InvariantViolation(format!(
                            "X0 diagonal at {lambda} is {x}, expected {want}"
                        )));
                    }
                } else if !x.is_zero() && dominance_compare(nu, lambda)? != DominanceOrdering::Greater {
                    return Err(Error::InvariantViolation(format!(
                        "X0 q_{lambda} has coefficient {x} at q_{nu}, which does not dominate"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "m": self.m,
            "n": self.n,
            "order": self.order.iter().map(Partition::to_json).collect::<Vec<_>>(),
            "entries": self
                .entries
                .iter()
                .map(|row| row.iter().map(CycRat::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    /// CSV with a header row of column labels and one labelled row per `ν`.
    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Parse {
            input: "csv".into(),
            reason: e.to_string(),
        };
        let mut header = vec!["row".to_string()];
        header.extend(self.order.iter().map(Partition::to_string));
        writer.write_record(&header).map_err(csv_err)?;
        for (nu, row) in self.order.iter().zip(&self.entries) {
            let mut record = vec![nu.to_string()];
            record.extend(row.iter().map(CycRat::to_string));
            writer.write_record(&record).map_err(csv_err)?;
        }
        let bytes = writer.into_inner().map_err(|e| Error::Parse {
            input: "csv".into(),
            reason: e.to_string(),
        })?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::all_partitions;
    use crate::symfunc::truncated_exp;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn series_examples() {
        for m in 2..=4 {
            let ring = ModularRing::symbolic(m).unwrap();
            assert_eq!(
                x0_apply_series(&ring, &Partition::empty()).unwrap(),
                PExpr::one(ring.field())
            );
            let want = ring.q(1).unwrap().scale(&eigenvalue_c(ring.params(), &part("1")));
            assert_eq!(x0_apply_series(&ring, &part("1")).unwrap(), want);
        }
        let ring = ModularRing::symbolic(2).unwrap();
        let p = ring.params();
        let two_q_minus_one = &(&p.int(2) * &p.q()) - &p.one();
        assert_eq!(
            x0_apply_series(&ring, &part("1")).unwrap(),
            ring.q(1).unwrap().scale(&two_q_minus_one)
        );
    }

    #[test]
    fn annihilation_symbol_matches_exponential() {
        for (m, max) in [(2, 9), (3, 7), (4, 6)] {
            let params = Params::symbolic(m).unwrap();
            let field = params.field();
            let series: Vec<PExpr> = (0..=max)
                .map(|n| {
                    if n == 0 || n % m == 0 {
                        return PExpr::zero(field);
                    }
                    let one_minus = &Cyc::one(field) - &params.xi_pow(n as i64);
                    PExpr::p(field, Partition::row(n))
                        .unwrap()
                        .scale(&params.epsilon(n).unwrap().scale(&one_minus))
                })
                .collect();
            let want = truncated_exp(field, &series, max);
            for (k, w) in want.iter().enumerate() {
                assert_eq!(&annihilation_symbol(&params, k).unwrap(), w, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn diff_examples() {
        let ring = ModularRing::symbolic(2).unwrap();
        let one = PExpr::one(ring.field());
        assert_eq!(x0_apply_diff(&ring, &one).unwrap(), one);
        let q1 = ring.q(1).unwrap();
        assert_eq!(
            x0_apply_diff(&ring, &q1).unwrap(),
            x0_apply_series(&ring, &part("1")).unwrap()
        );
        let e1 = ring.params().epsilon(1).unwrap();
        let p11 = PExpr::p(ring.field(), part("1,1")).unwrap();
        let via_series = x0_apply_series(&ring, &part("1,1")).unwrap().scale(&(&e1 * &e1));
        assert_eq!(x0_apply_diff(&ring, &p11).unwrap(), via_series);
        let mixed = &q1 + &p11;
        assert!(matches!(x0_apply_diff(&ring, &mixed), Err(Error::NotHomogeneous)));
    }

    #[test]
    fn implementations_agree_small() {
        for (m, max) in [(2, 6), (3, 5)] {
            let ring = ModularRing::symbolic(m).unwrap();
            for n in 1..=max {
                for lambda in all_partitions(n) {
                    let a = x0_apply_series(&ring, &lambda).unwrap();
                    let b = x0_apply_diff(&ring, &ring.qprod(&lambda).unwrap()).unwrap();
                    assert_eq!(a, b, "m={m} {lambda}");
                }
            }
        }
    }

    #[test]
    fn free_expansion_is_raising_with_eigenvalue_leading_term() {
        for (m, max) in [(2, 7), (3, 6)] {
            let params = Params::symbolic(m).unwrap();
            for n in 1..=max {
                for lambda in all_partitions(n) {
                    let x = x0_apply_free(&params, &lambda).unwrap();
                    assert_eq!(x.coeff(&lambda), eigenvalue_c(&params, &lambda), "{lambda}");
                    for mu in x.terms().keys() {
                        assert!(mu.dominates(&lambda), "m={m} {lambda} -> {mu}");
                    }
                }
            }
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let p = Params::symbolic(2).unwrap();
        assert!(eigenvalue_c(&p, &Partition::empty()).is_one());
        let q = p.q();
        let want = &(&(&p.int(2) * &(&q * &q)) - &(&p.int(2) * &q)) + &p.one();
        assert_eq!(eigenvalue_c(&p, &part("2,1")), want);
        assert!(eigenvalue_c(&p, &part("2,2")).is_one());
        assert!(eigenvalue_c(&p, &part("1,1,1,1")).is_one());
        assert!(f_main(&p, &part("1,1")).is_zero());
        assert_eq!(f_main(&p, &part("2,1")), &p.q_pow_minus_one(2) - &p.q_pow_minus_one(1));
        let p3 = Params::symbolic(3).unwrap();
        assert_eq!(f_main(&p3, &part("1")), &p3.q() - &p3.one());
    }

    #[test]
    fn collision_examples() {
        assert!(eigen_collision(&part("2,2"), &part("1,1,1,1"), 2));
        assert!(!eigen_collision(&part("3,1"), &part("4"), 2));
        assert!(eigen_collision(&part("3,1"), &part("3,1"), 3));
        let p = Params::symbolic(2).unwrap();
        assert_ne!(eigenvalue_c(&p, &part("3,1")), eigenvalue_c(&p, &part("4")));
    }

    #[test]
    fn matrix_examples() {
        let ring = ModularRing::symbolic(2).unwrap();
        let p = ring.params();
        let mx = X0Matrix::build(&ring, 2).unwrap();
        assert_eq!(mx.order, vec![part("2")]);
        assert_eq!(mx.entries[0][0], &(&p.int(2) * &p.q_pow(2)) - &p.one());

        let mx = X0Matrix::build(&ring, 3).unwrap();
        assert_eq!(mx.order, vec![part("3"), part("2,1")]);
        assert!(mx.entries[1][0].is_zero());
        assert_eq!(mx.entries[0][0], &(&p.int(2) * &p.q_pow(3)) - &p.one());
        assert_eq!(mx.entries[1][1], eigenvalue_c(p, &part("2,1")));
        let json = mx.to_json();
        assert_eq!(json["order"], serde_json::json!([[3], [2, 1]]));
        assert!(mx.to_csv().unwrap().starts_with("row,(3),\"(2,1)\"\n"));

        for m in 2..=4 {
            let ring = ModularRing::symbolic(m).unwrap();
            let mx = X0Matrix::build(&ring, 1).unwrap();
            assert_eq!(mx.entries[0][0], eigenvalue_c(ring.params(), &part("1")));
        }
    }

    #[test]
    fn eval_separation_failure_is_reported() {
        // At q0 = 1 every eigenvalue collapses to 1.
        let field = crate::scalars::CyclotomicField::get(2).unwrap();
        let params = Params::eval(Cyc::from_int(&field, 1), Cyc::from_int(&field, -1)).unwrap();
        assert!(matches!(
            check_eval_separation(&params, 3),
            Err(Error::EigenvalueCollisionAtEvaluation { .. })
        ));
        assert!(check_eval_separation(&Params::eval_default(2).unwrap(), 8).is_ok());
    }
}
