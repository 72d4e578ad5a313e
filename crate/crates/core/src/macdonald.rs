//! Modular Macdonald functions `Q_λ`, `λ` m-reduced: the eigenvectors of `X₀`
//! of the form `q_λ + Σ_{μ > λ} C_{λμ} q_μ`.
//!
//! Also holds the `q = 0` specialization and an independent Schur
//! Q-function oracle for comparing against it when `m = 2`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operator::{eigenvalue_c, x0_apply_diff, x0_apply_series, X0Matrix};
use crate::partitions::Partition;
use crate::scalars::{Cyc, CycRat, CyclotomicField};
use crate::symfunc::{ModularRing, PExpr};

/// One function `Q_λ` with its coordinates in `{q_μ : μ ∈ P_m(|λ|)}`.
#[derive(Clone, Debug)]
pub struct ModularMacdonald {
    pub m: usize,
    pub lambda: Partition,
    /// `μ ↦ C_{λμ}`, nonzero entries only.
    pub q_coeffs: BTreeMap<Partition, CycRat>,
    pub p_form: PExpr,
    pub eigenvalue: CycRat,
}

impl ModularMacdonald {
    pub fn coeff(&self, mu: &Partition) -> CycRat {
        self.q_coeffs
            .get(mu)
            .cloned()
            .unwrap_or_else(|| CycRat::zero(self.p_form.field()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let q_coeffs: Vec<serde_json::Value> = self
            .q_coeffs
            .iter()
            .map(|(mu, c)| serde_json::json!({"partition": mu.to_json(), "coeff": c.to_json()}))
            .collect();
        serde_json::json!({
            "m": self.m,
            "lambda": self.lambda.to_json(),
            "eigenvalue": self.eigenvalue.to_json(),
            "q_coeffs": q_coeffs,
            "p_form": self.p_form.to_json(),
        })
    }
}

/// Whether `Σ_μ coeffs[μ] q_μ` is an eigenvector of `X₀` with the given
/// eigenvalue, checked with both implementations of `X₀`.
pub fn is_eigenvector(ring: &ModularRing, coeffs: &BTreeMap<Partition, CycRat>, eigenvalue: &CycRat) -> Result<bool> {
    let mut f = PExpr::zero(ring.field());
    let mut via_series = PExpr::zero(ring.field());
    for (mu, c) in coeffs {
        f.add_scaled(&ring.qprod(mu)?, c);
        via_series.add_scaled(&x0_apply_series(ring, mu)?, c);
    }
    let target = f.scale(eigenvalue);
    Ok(via_series == target && x0_apply_diff(ring, &f)? == target)
}

/// `Q_λ` from a prebuilt `X₀` matrix of degree `|λ|`, by
/// `C_{λν} = Σ_{ν > μ ≥ λ} C_{λμ} c'_{μν} / (c_λλ - c_νν)`, taking `ν` in
/// increasing dominance from `λ`.
pub fn solve_with_matrix(ring: &ModularRing, matrix: &X0Matrix, lambda: &Partition) -> Result<ModularMacdonald> {
    let m = ring.m();
    if !lambda.is_reduced(m) {
        return Err(Error::NotReduced(lambda.clone()));
    }
    if matrix.n != lambda.weight() {
        return Err(Error::WeightMismatch {
            left: matrix.n,
            right: lambda.weight(),
        });
    }
    let params = ring.params();
    let order = &matrix.order;
    let start = order
        .iter()
        .position(|p| p == lambda)
        .expect("every m-reduced partition appears in the order");
    let c_ll = eigenvalue_c(params, lambda);

    // coeffs[i] is C_{λ, order[i]}; only positions up to `start` can be nonzero.
    let mut coeffs: Vec<CycRat> = vec![params.zero(); order.len()];
    coeffs[start] = params.one();
    for v in (0..start).rev() {
        let mut sum = params.zero();
        for (u, c) in coeffs.iter().enumerate().take(start + 1).skip(v + 1) {
            let entry = &matrix.entries[v][u];
            if !c.is_zero() && !entry.is_zero() {
                sum = &sum + &(c * entry);
            }
        }
        if sum.is_zero() {
            continue;
        }
        let gap = &c_ll - &eigenvalue_c(params, &order[v]);
        if gap.is_zero() {
            return Err(Error::EigenvalueCollisionAtEvaluation {
                lambda: lambda.clone(),
                mu: order[v].clone(),
            });
        }
        coeffs[v] = sum.checked_div(&gap)?;
    }

    let mut q_coeffs = BTreeMap::new();
    let mut p_form = PExpr::zero(ring.field());
    for (mu, c) in order.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        if mu != lambda && !mu.dominates(lambda) {
            return Err(Error::InvariantViolation(format!(
                "Q_{lambda} has coefficient {c} at q_{mu}, which does not dominate"
            )));
        }
        p_form.add_scaled(&ring.qprod(mu)?, &c);
        q_coeffs.insert(mu.clone(), c);
    }
    if !is_eigenvector(ring, &q_coeffs, &c_ll)? {
        return Err(Error::InvariantViolation(format!(
            "Q_{lambda} = {p_form} is not an eigenvector of X0 with eigenvalue {c_ll}"
        )));
    }
    Ok(ModularMacdonald {
        m,
        lambda: lambda.clone(),
        q_coeffs,
        p_form,
        eigenvalue: c_ll,
    })
}

/// `Q_λ` for one m-reduced `λ`.
pub fn solve_q(ring: &ModularRing, lambda: &Partition) -> Result<ModularMacdonald> {
    if !lambda.is_reduced(ring.m()) {
        return Err(Error::NotReduced(lambda.clone()));
    }
    let matrix = X0Matrix::build(ring, lambda.weight())?;
    solve_with_matrix(ring, &matrix, lambda)
}

/// `Q_λ` for every `λ ∈ P_m(n)`, in the dominance linear extension.
pub fn all_q(ring: &ModularRing, n: usize) -> Result<Vec<ModularMacdonald>> {
    let matrix = X0Matrix::build(ring, n)?;
    matrix
        .order
        .par_iter()
        .map(|lambda| solve_with_matrix(ring, &matrix, lambda))
        .collect()
}

/// Gram matrix of `{Q_λ : λ ∈ P_m(n)}`; off-diagonal entries must vanish.
pub fn gram(ring: &ModularRing, n: usize) -> Result<Vec<Vec<CycRat>>> {
    gram_of(ring, &all_q(ring, n)?)
}

/// Gram matrix of already computed functions, with the orthogonality check.
pub fn gram_of(ring: &ModularRing, family: &[ModularMacdonald]) -> Result<Vec<Vec<CycRat>>> {
    let mut out = Vec::with_capacity(family.len());
    for a in family {
        let mut row = Vec::with_capacity(family.len());
        for b in family {
            let x = ring.scalar_product(&a.p_form, &b.p_form)?;
            if a.lambda != b.lambda && !x.is_zero() {
                return Err(Error::InvariantViolation(format!(
                    "<Q_{}, Q_{}> = {x} is not zero",
                    a.lambda, b.lambda
                )));
            }
            row.push(x);
        }
        out.push(row);
    }
    Ok(out)
}

/// Substitutes `q = 0` in the power-sum form of a symbolically computed `Q_λ`.
pub fn specialize_q0(ring: &ModularRing, q: &ModularMacdonald) -> Result<PExpr> {
    if !ring.params().is_symbolic() {
        return Err(Error::RequiresSymbolic);
    }
    q.p_form.evaluate(&Cyc::zero(ring.field()))
}

/// Classical Schur Q-function `Q_λ` (λ strict) in power sums with odd parts.
///
/// `Q_n` comes from `Σ Q_n z^n = exp(2 Σ_{r odd} p_r z^r / r)` through
/// `n Q_n = 2 Σ_{r odd} p_r Q_{n-r}`; two-row functions from
/// `Q_{(a,b)} = Q_a Q_b + 2 Σ_{i=1}^{b} (-1)^i Q_{a+i} Q_{b-i}`; longer `λ`
/// by the Pfaffian of the two-row functions, padding with a zero part.
pub fn schur_q_oracle(lambda: &Partition) -> Result<PExpr> {
    if !lambda.is_strict() {
        return Err(Error::NotStrict(lambda.clone()));
    }
    let field = CyclotomicField::get(2)?;
    let n = lambda.weight();
    let mut single: Vec<PExpr> = vec![PExpr::one(&field)];
    for k in 1..=n + lambda.parts().first().copied().unwrap_or(0) {
        let mut acc = PExpr::zero(&field);
        for r in (1..=k).step_by(2) {
            let pr = PExpr::p(&field, Partition::row(r))?;
            acc = &acc + &(&pr * &single[k - r]);
        }
        single.push(acc.scale(&CycRat::from_ratio(&field, 2, k as i64)));
    }
    let two_row = |a: usize, b: usize| -> PExpr {
        let mut acc = &single[a] * &single[b];
        for i in 1..=b {
            let sign = if i % 2 == 0 { 2 } else { -2 };
            acc.add_scaled(&(&single[a + i] * &single[b - i]), &CycRat::from_int(&field, sign));
        }
        acc
    };
    let mut parts = lambda.parts().to_vec();
    if parts.len() % 2 == 1 {
        parts.push(0);
    }
    Ok(pfaffian(&parts, &two_row, &field))
}

fn pfaffian(parts: &[usize], entry: &dyn Fn(usize, usize) -> PExpr, field: &std::sync::Arc<CyclotomicField>) -> PExpr {
    if parts.is_empty() {
        return PExpr::one(field);
    }
    let mut acc = PExpr::zero(field);
    for j in 1..parts.len() {
        let rest: Vec<usize> = parts
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != 0 && i != j)
            .map(|(_, &p)| p)
            .collect();
        let term = &entry(parts[0], parts[j]) * &pfaffian(&rest, entry, field);
        let sign = if j % 2 == 1 { 1 } else { -1 };
        acc.add_scaled(&term, &CycRat::from_int(field, sign));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{enumerate, PartitionClass};
    use crate::scalars::Params;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn small_examples() {
        for m in 2..=4 {
            let ring = ModularRing::symbolic(m).unwrap();
            let q1 = solve_q(&ring, &part("1")).unwrap();
            assert_eq!(q1.p_form, ring.q(1).unwrap());
            assert_eq!(q1.eigenvalue, eigenvalue_c(ring.params(), &part("1")));
        }
        let ring = ModularRing::symbolic(2).unwrap();
        assert_eq!(solve_q(&ring, &part("2")).unwrap().p_form, ring.q(2).unwrap());
        let q21 = solve_q(&ring, &part("2,1")).unwrap();
        assert!(q21.coeff(&part("2,1")).is_one());
        assert!(!q21.coeff(&part("3")).is_zero());
        assert_eq!(q21.q_coeffs.len(), 2);
        assert!(matches!(solve_q(&ring, &part("1,1")), Err(Error::NotReduced(_))));
        let json = q21.to_json();
        assert_eq!(json["lambda"], serde_json::json!([2, 1]));
    }

    #[test]
    fn family_sizes() {
        let r2 = ModularRing::symbolic(2).unwrap();
        let fam: Vec<Partition> = all_q(&r2, 3).unwrap().into_iter().map(|q| q.lambda).collect();
        assert_eq!(fam, vec![part("3"), part("2,1")]);
        let r3 = ModularRing::symbolic(3).unwrap();
        let fam: Vec<Partition> = all_q(&r3, 2).unwrap().into_iter().map(|q| q.lambda).collect();
        assert_eq!(fam, vec![part("2"), part("1,1")]);
        assert_eq!(all_q(&r2, 1).unwrap().len(), 1);
    }

    #[test]
    fn gram_is_diagonal_small() {
        for m in [2, 3] {
            let ring = ModularRing::symbolic(m).unwrap();
            for n in 1..=4 {
                gram(&ring, n).unwrap();
            }
        }
        let ring = ModularRing::symbolic(2).unwrap();
        let g = gram(&ring, 1).unwrap();
        let want = ring.params().epsilon(1).unwrap().inv().unwrap();
        assert_eq!(g, vec![vec![want]]);
    }

    #[test]
    fn specialization_examples() {
        let ring = ModularRing::symbolic(2).unwrap();
        let f = ring.field().clone();
        let p1 = PExpr::p(&f, part("1")).unwrap();
        let p11 = PExpr::p(&f, part("1,1")).unwrap();
        let q1 = specialize_q0(&ring, &solve_q(&ring, &part("1")).unwrap()).unwrap();
        assert_eq!(q1, p1.scale(&CycRat::from_int(&f, 2)));
        let q2 = specialize_q0(&ring, &solve_q(&ring, &part("2")).unwrap()).unwrap();
        assert_eq!(q2, p11.scale(&CycRat::from_int(&f, 2)));

        let r3 = ModularRing::symbolic(3).unwrap();
        let f3 = r3.field().clone();
        let q1 = specialize_q0(&r3, &solve_q(&r3, &part("1")).unwrap()).unwrap();
        let want = &Cyc::one(&f3) - &Cyc::xi_pow(&f3, -1);
        assert_eq!(q1, PExpr::p(&f3, part("1")).unwrap().scale_cyc(&want));

        let eval = ModularRing::new(Params::eval_default(2).unwrap());
        let q = solve_q(&eval, &part("1")).unwrap();
        assert!(matches!(specialize_q0(&eval, &q), Err(Error::RequiresSymbolic)));
    }

    #[test]
    fn oracle_examples() {
        let f = CyclotomicField::get(2).unwrap();
        let p = |s: &str| PExpr::p(&f, part(s)).unwrap();
        assert_eq!(
            schur_q_oracle(&part("1")).unwrap(),
            p("1").scale(&CycRat::from_int(&f, 2))
        );
        let q = |n: usize| schur_q_oracle(&Partition::row(n)).unwrap();
        assert_eq!(
            schur_q_oracle(&part("2,1")).unwrap(),
            &(&q(2) * &q(1)) - &q(3).scale(&CycRat::from_int(&f, 2))
        );
        assert!(schur_q_oracle(&part("2,2")).is_err());
        // Q_(2) = 2 p_1^2 and Q_(3) = (4/3) p_1^3 + (2/3) p_3.
        assert_eq!(q(2), p("1,1").scale(&CycRat::from_int(&f, 2)));
        assert_eq!(
            q(3),
            &p("1,1,1").scale(&CycRat::from_ratio(&f, 4, 3)) + &p("3").scale(&CycRat::from_ratio(&f, 2, 3))
        );
    }

    #[test]
    fn specializes_to_schur_q_small() {
        let ring = ModularRing::symbolic(2).unwrap();
        for n in 1..=6 {
            for q in all_q(&ring, n).unwrap() {
                let got = specialize_q0(&ring, &q).unwrap();
                assert_eq!(got, schur_q_oracle(&q.lambda).unwrap(), "{}", q.lambda);
            }
        }
    }

    #[test]
    fn perturbation_breaks_eigenvector() {
        let ring = ModularRing::symbolic(3).unwrap();
        for lambda in enumerate(4, PartitionClass::Reduced, 3).unwrap() {
            let q = solve_q(&ring, &lambda).unwrap();
            for nu in enumerate(4, PartitionClass::Reduced, 3).unwrap() {
                if nu == lambda || !nu.dominates(&lambda) {
                    continue;
                }
                let mut bent = q.q_coeffs.clone();
                let x = &q.coeff(&nu) + &ring.params().int(1);
                bent.insert(nu.clone(), x);
                assert!(!is_eigenvector(&ring, &bent, &q.eigenvalue).unwrap());
            }
        }
    }
}
