//! Exhaustive identity checks over parameter ranges, shared by the
//! `selfcheck` command and the acceptance tests.
//!
//! Each check returns a [`CheckResult`] instead of panicking so that a
//! report can list every outcome. The first counterexample is kept.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::macdonald::{all_q, gram_of, schur_q_oracle, specialize_q0};
use crate::newton::{
    check_newton, creation_by_recursion, creation_from_ring, d_mu, nl_brute, nl_closed_k, nl_closed_multiplicity,
    PowerMinusOne, Tabulated,
};
use crate::operator::{eigen_collision, eigenvalue_c, x0_apply_diff, x0_apply_free, x0_apply_series, X0Matrix};
use crate::partitions::{all_partitions, count_check, enumerate, Partition, PartitionClass};
use crate::scalars::Params;
use crate::symfunc::{ModularRing, PExpr};

/// Outcome of one family of checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub cases: usize,
    /// First counterexample, if any.
    pub failure: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "check": self.name,
            "cases": self.cases,
            "status": if self.passed() { "ok" } else { "fail" },
            "failure": self.failure,
        })
    }
}

/// Runs `case` over `items` in parallel and collects the first failure in
/// input order. An `Err` from a case counts as a failure.
fn run_cases<T: Sync>(
    name: impl Into<String>,
    items: &[T],
    case: impl Fn(&T) -> Result<Option<String>> + Sync,
) -> CheckResult {
    let outcomes: Vec<Option<String>> = items
        .par_iter()
        .map(|item| match case(item) {
            Ok(x) => x,
            Err(e) => Some(format!("error: {e}")),
        })
        .collect();
    CheckResult {
        name: name.into(),
        cases: items.len(),
        failure: outcomes.into_iter().flatten().next(),
    }
}

fn partitions_up_to(max_n: usize, min_n: usize) -> Vec<Partition> {
    (min_n..=max_n).flat_map(all_partitions).collect()
}

fn reduced(n: usize, m: usize) -> Vec<Partition> {
    enumerate(n, PartitionClass::Reduced, m).expect("valid modulus")
}

/// `|P^(m)(n)| = |P_m(n)|`.
pub fn equinumerosity(m: usize, max_n: usize) -> CheckResult {
    let ns: Vec<usize> = (0..=max_n).collect();
    run_cases(format!("equinumerosity m={m} n<={max_n}"), &ns, |&n| {
        let c = count_check(n, m)?;
        Ok((!c.equal).then(|| format!("n={n}: {} regular vs {} reduced", c.regular_count, c.reduced_count)))
    })
}

/// Both closed forms of `N_l(λ,ν)` equal the direct count, `|λ| ≤ max_n`.
pub fn nl_agreement(max_n: usize) -> CheckResult {
    let lambdas = partitions_up_to(max_n, 0);
    run_cases(format!("N_l closed forms |lambda|<={max_n}"), &lambdas, |lambda| {
        for nu in partitions_up_to(lambda.weight(), 0) {
            let brute = nl_brute(lambda, &nu);
            let (a, b) = (nl_closed_k(lambda, &nu), nl_closed_multiplicity(lambda, &nu));
            if a != brute || b != brute {
                return Ok(Some(format!(
                    "lambda={lambda} nu={nu}: count {brute}, k-form {a}, multiplicity form {b}"
                )));
            }
        }
        Ok(None)
    })
}

/// The generalized Newton identity for `d_n = q^n - 1` and for
/// `random_sequences` seeded random rational sequences.
pub fn newton_identity(params: &Params, max_n: usize, random_sequences: usize, seed: u64) -> CheckResult {
    let ring = ModularRing::new(params.clone());
    let lambdas = partitions_up_to(max_n, 1);
    let name = format!(
        "generalized Newton identity m={} {:?} |lambda|<={max_n} (q^n-1 and {random_sequences} random d)",
        params.m(),
        params.mode()
    );
    let mut sequences: Vec<Option<Tabulated>> = vec![None];
    sequences.extend((0..random_sequences).map(|i| Some(Tabulated::random(params.field(), max_n, seed + i as u64))));
    let creations: Vec<Result<Vec<PExpr>>> = sequences
        .iter()
        .map(|s| match s {
            None => creation_from_ring(&ring, max_n),
            Some(t) => creation_by_recursion(&ring, t, max_n),
        })
        .collect();
    let cases: Vec<(usize, &Partition)> = (0..sequences.len())
        .flat_map(|i| lambdas.iter().map(move |l| (i, l)))
        .collect();
    let instance = PowerMinusOne(params.clone());
    run_cases(name, &cases, |&(i, lambda)| {
        let creation = creations[i].as_ref().map_err(Clone::clone)?;
        let report = match &sequences[i] {
            None => check_newton(&ring, lambda, &instance, creation)?,
            Some(t) => check_newton(&ring, lambda, t, creation)?,
        };
        Ok((!report.ok()).then(|| format!("sequence #{i}: {}", report.to_json())))
    })
}

/// `R_n = Σ_{μ⊢n} d_μ q_μ` for `m ∤ n ≤ max_n`.
pub fn creation_expansion(m: usize, max_n: usize) -> Result<CheckResult> {
    let ring = ModularRing::symbolic(m)?;
    let d = PowerMinusOne(ring.params().clone());
    let ns: Vec<usize> = (1..=max_n).filter(|n| n % m != 0).collect();
    Ok(run_cases(format!("R_n expansion m={m} n<={max_n}"), &ns, |&n| {
        let mut rhs = PExpr::zero(ring.field());
        for mu in all_partitions(n) {
            rhs.add_scaled(&ring.qprod(&mu)?, &d_mu(&mu, &d, ring.field())?);
        }
        let delta = &ring.r(n)? - &rhs;
        Ok((!delta.is_zero()).then(|| format!("n={n}: residual {delta}")))
    }))
}

/// `Σ_{i≥1} R_i q_{n-i} = (q^n - 1) q_n`.
pub fn convolution(m: usize, max_n: usize) -> Result<CheckResult> {
    let ring = ModularRing::symbolic(m)?;
    let ns: Vec<usize> = (1..=max_n).collect();
    Ok(run_cases(format!("creation convolution m={m} n<={max_n}"), &ns, |&n| {
        let mut lhs = PExpr::zero(ring.field());
        for i in 1..=n {
            lhs = &lhs + &(&ring.r(i)? * &ring.q(n - i)?);
        }
        let delta = &lhs - &ring.q(n)?.scale(&ring.params().q_pow_minus_one(n));
        Ok((!delta.is_zero()).then(|| format!("n={n}: residual {delta}")))
    }))
}

/// The `z^{km}` coefficient of `∏_i Σ_n ξ^{in} q_n z^n` vanishes, `km ≤ max_weight`.
pub fn modular_relation(m: usize, max_weight: usize) -> Result<CheckResult> {
    let ring = ModularRing::symbolic(m)?;
    let ks: Vec<usize> = (1..=max_weight / m).collect();
    Ok(run_cases(
        format!("modular relation m={m} km<={max_weight}"),
        &ks,
        |&k| {
            let report = ring.modular_relation_check(k)?;
            Ok((!report.holds())
                .then(|| format!("k={k}: relation {} has residual {}", report.relation, report.residual)))
        },
    ))
}

/// The two implementations of `X₀` agree on every `q_λ`, `|λ| ≤ max_n`.
pub fn operator_agreement(m: usize, max_n: usize) -> Result<CheckResult> {
    let ring = ModularRing::symbolic(m)?;
    let lambdas = partitions_up_to(max_n, 0);
    Ok(run_cases(
        format!("X0 series = differential form m={m} |lambda|<={max_n}"),
        &lambdas,
        |lambda| {
            let a = x0_apply_series(&ring, lambda)?;
            let b = x0_apply_diff(&ring, &ring.qprod(lambda)?)?;
            let delta = &a - &b;
            Ok((!delta.is_zero()).then(|| format!("lambda={lambda}: residual {delta}")))
        },
    ))
}

/// `X₀` is triangular on the m-reduced basis with the predicted diagonal,
/// and on free symbols `q_λ` it raises with leading coefficient `c_λλ`.
pub fn triangularity(m: usize, max_n: usize) -> Result<CheckResult> {
    let ring = ModularRing::symbolic(m)?;
    let ns: Vec<usize> = (1..=max_n).collect();
    let matrices = run_cases(
        format!("X0 matrix triangular with eigenvalue diagonal m={m} n<={max_n}"),
        &ns,
        |&n| {
            X0Matrix::build(&ring, n)?;
            Ok(None)
        },
    );
    let lambdas = partitions_up_to(max_n, 1);
    let free = run_cases("free", &lambdas, |lambda| {
        let x = x0_apply_free(ring.params(), lambda)?;
        if x.coeff(lambda) != eigenvalue_c(ring.params(), lambda) {
            return Ok(Some(format!(
                "lambda={lambda}: leading coefficient {}",
                x.coeff(lambda)
            )));
        }
        Ok(x.terms()
            .keys()
            .find(|mu| !mu.dominates(lambda))
            .map(|mu| format!("lambda={lambda}: term q_{mu} does not dominate")))
    });
    Ok(CheckResult {
        name: matrices.name,
        cases: matrices.cases + free.cases,
        failure: matrices.failure.or(free.failure),
    })
}

/// `⟨X₀ f, g⟩ = ⟨f, X₀ g⟩` on `{q_λ : λ ∈ P_m(n)}`, `n ≤ max_n`.
pub fn self_adjoint(params: &Params, max_n: usize) -> CheckResult {
    let ring = ModularRing::new(params.clone());
    let pairs: Vec<(Partition, Partition)> = (1..=max_n)
        .flat_map(|n| {
            let ps = reduced(n, params.m());
            let mut out = Vec::new();
            for (i, a) in ps.iter().enumerate() {
                for b in &ps[i..] {
                    out.push((a.clone(), b.clone()));
                }
            }
            out
        })
        .collect();
    let name = format!("X0 self-adjoint m={} {:?} n<={max_n}", params.m(), params.mode());
    run_cases(name, &pairs, |(a, b)| {
        let (f, g) = (ring.qprod(a)?, ring.qprod(b)?);
        let lhs = ring.scalar_product(&x0_apply_diff(&ring, &f)?, &g)?;
        let rhs = ring.scalar_product(&f, &x0_apply_diff(&ring, &g)?)?;
        Ok((lhs != rhs).then(|| format!("q_{a}, q_{b}: {lhs} vs {rhs}")))
    })
}

/// Eigenvalues are pairwise distinct on `P_m(n)`, `n ≤ max_n`.
pub fn separation(m: usize, max_n: usize) -> Result<CheckResult> {
    let params = Params::symbolic(m)?;
    let ns: Vec<usize> = (1..=max_n).collect();
    Ok(run_cases(
        format!("eigenvalue separation on P_m m={m} n<={max_n}"),
        &ns,
        |&n| {
            let ps = reduced(n, m);
            let values: Vec<_> = ps.iter().map(|l| eigenvalue_c(&params, l)).collect();
            for i in 0..ps.len() {
                for j in i + 1..ps.len() {
                    if values[i] == values[j] {
                        return Ok(Some(format!("{} and {} share eigenvalue {}", ps[i], ps[j], values[i])));
                    }
                }
            }
            Ok(None)
        },
    ))
}

/// The multiplicity-residue predicate matches symbolic equality of
/// eigenvalues on `random_pairs` seeded pairs plus the family
/// `(1^k 2^{m+l})` vs `(1^{k+2m} 2^l)`.
pub fn collision_predicate(m: usize, random_pairs: usize, seed: u64) -> Result<CheckResult> {
    let params = Params::symbolic(m)?;
    let mut pairs: Vec<(Partition, Partition)> = Vec::new();
    for k in 0..=3 {
        for l in 0..=3 {
            pairs.push((
                Partition::from_multiplicities(&[(1, k), (2, m + l)]),
                Partition::from_multiplicities(&[(1, k + 2 * m), (2, l)]),
            ));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pools: Vec<Vec<Partition>> = (0..=12).map(all_partitions).collect();
    while pairs.len() < random_pairs + 16 {
        let n = rng.random_range(1..=12);
        let pool = &pools[n];
        let a = pool[rng.random_range(0..pool.len())].clone();
        // Bias towards shared residues so both outcomes occur.
        let b = if rng.random_bool(0.3) {
            let mut mults: Vec<(usize, usize)> = a.multiplicities().into_iter().collect();
            let i = rng.random_range(0..mults.len());
            mults[i].1 += m;
            Partition::from_multiplicities(&mults)
        } else {
            pool[rng.random_range(0..pool.len())].clone()
        };
        pairs.push((a, b));
    }
    Ok(run_cases(
        format!(
            "collision predicate matches eigenvalue equality m={m} ({} pairs)",
            pairs.len()
        ),
        &pairs,
        |(a, b)| {
            let predicted = eigen_collision(a, b, m);
            let actual = eigenvalue_c(&params, a) == eigenvalue_c(&params, b);
            Ok((predicted != actual).then(|| format!("{a} vs {b}: predicate {predicted}, equality {actual}")))
        },
    ))
}

/// `all_q(n)` is unitriangular, consists of eigenvectors (checked inside the
/// solve), and has a diagonal Gram matrix.
pub fn eigen_solve(params: &Params, max_n: usize) -> CheckResult {
    let ring = ModularRing::new(params.clone());
    let ns: Vec<usize> = (1..=max_n).collect();
    let name = format!(
        "eigen-solve and orthogonality m={} {:?} n<={max_n}",
        params.m(),
        params.mode()
    );
    run_cases(name, &ns, |&n| {
        let family = all_q(&ring, n)?;
        for q in &family {
            if !q.coeff(&q.lambda).is_one() {
                return Ok(Some(format!("Q_{} is not monic", q.lambda)));
            }
            if let Some(mu) = q.q_coeffs.keys().find(|mu| !mu.dominates(&q.lambda)) {
                return Ok(Some(format!("Q_{} involves q_{mu}", q.lambda)));
            }
        }
        gram_of(&ring, &family)?;
        Ok(None)
    })
}

/// For `m = 2`, `Q_λ` at `q = 0` is the Schur Q-function, strict `|λ| ≤ max_n`.
pub fn schur_q_specialization(max_n: usize) -> Result<CheckResult> {
    let ring = ModularRing::symbolic(2)?;
    let ns: Vec<usize> = (1..=max_n).collect();
    Ok(run_cases(
        format!("q=0 specialization equals Schur Q m=2 |lambda|<={max_n}"),
        &ns,
        |&n| {
            for q in all_q(&ring, n)? {
                let got = specialize_q0(&ring, &q)?;
                let want = schur_q_oracle(&q.lambda)?;
                if got != want {
                    return Ok(Some(format!("lambda={}: residual {}", q.lambda, &got - &want)));
                }
            }
            Ok(None)
        },
    ))
}

/// The suite run by `selfcheck` for one modulus, with degrees capped at `max_n`.
pub fn selfcheck(m: usize, max_n: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let symbolic = Params::symbolic(m)?;
    let eval = Params::eval_default(m)?;
    let mut out = vec![
        equinumerosity(m, max_n.max(1) * 3),
        nl_agreement(max_n),
        newton_identity(&symbolic, max_n, 3, seed),
        creation_expansion(m, max_n)?,
        convolution(m, max_n)?,
        modular_relation(m, max_n.max(m))?,
        operator_agreement(m, max_n)?,
        triangularity(m, max_n)?,
        self_adjoint(&symbolic, max_n),
        self_adjoint(&eval, max_n),
        separation(m, max_n)?,
        collision_predicate(m, 100, seed)?,
        eigen_solve(&symbolic, max_n),
        eigen_solve(&eval, max_n),
    ];
    if m == 2 {
        out.push(schur_q_specialization(max_n)?);
    }
    Ok(out)
}
