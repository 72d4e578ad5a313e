//! The generalized Newton identity.
//!
//! Given any sequence `d_n` and elements `R_n` with
//! `Σ_{i≥1} R_i q_{n-i} = d_n q_n`, the sum
//! `Σ_{i_1..i_s ≥ 1} R_{i_1+⋯+i_s} q_{λ_1-i_1} ⋯ q_{λ_s-i_s}` equals
//! `Σ_μ d_{λμ} q_μ` with `d_{λμ} = Σ_{ν ⊂' μ} N_l(λ,ν) d_{μ∖ν}`. This module
//! computes the coefficients in closed form and by brute force, over any
//! [`DSequence`].

use std::collections::HashMap;
use std::sync::Arc;

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::partitions::{all_partitions, dominance_compare, factorial, DominanceOrdering, Partition};
use crate::scalars::{CycRat, CyclotomicField, Params};
use crate::symfunc::{ModularRing, PExpr, QBasis, QExpr};

/// A sequence `n ↦ d_n` for `n ≥ 1`.
pub trait DSequence: Sync {
    fn d(&self, n: usize) -> CycRat;
}

impl<F: Fn(usize) -> CycRat + Sync> DSequence for F {
    fn d(&self, n: usize) -> CycRat {
        self(n)
    }
}

/// `d_n = q^n - 1`, the sequence attached to the vertex operator.
pub struct PowerMinusOne(pub Params);

impl DSequence for PowerMinusOne {
    fn d(&self, n: usize) -> CycRat {
        self.0.q_pow_minus_one(n)
    }
}

/// A finite table `d_1, d_2, ...`; indices past the end are an error in the caller.
#[derive(Clone, Debug)]
pub struct Tabulated(pub Vec<CycRat>);

impl Tabulated {
    /// Random rationals `a/b` with `|a| ≤ 20`, `1 ≤ b ≤ 9`, from a seeded stream.
    pub fn random(field: &Arc<CyclotomicField>, len: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..len)
            .map(|_| {
                let num: i64 = rng.random_range(-20..=20);
                let den: i64 = rng.random_range(1..=9);
                CycRat::from_rational(field, BigRational::new(num.into(), den.into()))
            })
            .collect();
        Tabulated(values)
    }
}

impl DSequence for Tabulated {
    fn d(&self, n: usize) -> CycRat {
        self.0[n - 1].clone()
    }
}

fn rational(field: &Arc<CyclotomicField>, num: BigInt, den: BigInt) -> CycRat {
    CycRat::from_rational(field, BigRational::new(num, den))
}

/// Applies the nonpositive-factor rule and the exact division by `m(ν)!`.
fn finish_count(factors: impl IntoIterator<Item = i64>, nu: &Partition, form: &str) -> u128 {
    let mut product: u128 = 1;
    for f in factors {
        if f <= 0 {
            return 0;
        }
        product = product.checked_mul(f as u128).expect("count overflow");
    }
    let denom: u128 = nu.mult_factorial().try_into().expect("small factorial");
    assert!(
        product.is_multiple_of(denom),
        "{form} product {product} for nu={nu} is not divisible by m(nu)! = {denom}"
    );
    product / denom
}

/// `N_l(λ,ν)` as `k_1(k_2-1)⋯(k_t-(t-1)) / m(ν)!` with `k_i = #{j : λ_j > ν_i}`.
pub fn nl_closed_k(lambda: &Partition, nu: &Partition) -> u128 {
    if nu.len() > lambda.len() {
        return 0;
    }
    let factors = nu.parts().iter().enumerate().map(|(i, &v)| {
        let k = lambda.parts().iter().filter(|&&l| l > v).count() as i64;
        k - i as i64
    });
    finish_count(factors, nu, "k-form")
}

/// `N_l(λ,ν)` as `∏_{i≥1} ∏_{k=1}^{m_i(ν)} (1 - k + Σ_{j>i} (m_j(λ) - m_j(ν))) / m(ν)!`.
pub fn nl_closed_multiplicity(lambda: &Partition, nu: &Partition) -> u128 {
    if nu.len() > lambda.len() {
        return 0;
    }
    let mut factors = Vec::new();
    for (&i, &count) in &nu.multiplicities() {
        let above: i64 = lambda.parts().iter().filter(|&&l| l > i).count() as i64
            - nu.parts().iter().filter(|&&v| v > i).count() as i64;
        factors.extend((1..=count as i64).map(|k| 1 - k + above));
    }
    finish_count(factors, nu, "multiplicity-form")
}

/// `N_l(λ,ν)` from the closed forms, which must agree.
pub fn nl_closed(lambda: &Partition, nu: &Partition) -> u128 {
    let a = nl_closed_k(lambda, nu);
    let b = nl_closed_multiplicity(lambda, nu);
    assert_eq!(a, b, "closed forms of N_l disagree at lambda={lambda}, nu={nu}");
    a
}

/// Calls `visit` with the multiset of positive values `λ_j - i_j` for every
/// tuple `1 ≤ i_j ≤ λ_j`.
fn for_each_lowering(lambda: &Partition, min_step: usize, mut visit: impl FnMut(&[usize], Partition)) {
    let parts = lambda.parts();
    let mut steps: Vec<usize> = vec![min_step; parts.len()];
    loop {
        let values: Vec<usize> = parts.iter().zip(&steps).map(|(l, i)| l - i).collect();
        visit(&steps, Partition::new(values));
        let mut j = 0;
        loop {
            if j == parts.len() {
                return;
            }
            if steps[j] < parts[j] {
                steps[j] += 1;
                break;
            }
            steps[j] = min_step;
            j += 1;
        }
    }
}

/// `N_l(λ,ν)` by direct count of tuples `1 ≤ i_j ≤ λ_j` whose positive values
/// `λ_j - i_j` form `ν`.
pub fn nl_brute(lambda: &Partition, nu: &Partition) -> u128 {
    let mut count = 0;
    for_each_lowering(lambda, 1, |_, rest| {
        if &rest == nu {
            count += 1;
        }
    });
    count
}

/// `d_μ = (-1)^{l-1} (l-1)!/m(μ)! Σ_k m_k(μ) d_k`, so that `R_n = Σ_{μ⊢n} d_μ q_μ`.
pub fn d_mu(mu: &Partition, d: &dyn DSequence, field: &Arc<CyclotomicField>) -> Result<CycRat> {
    if mu.is_empty() {
        return Err(Error::InvalidPartition(
            "d_mu is undefined for the empty partition".into(),
        ));
    }
    let l = mu.len();
    let sign = if l % 2 == 1 { 1 } else { -1 };
    let scale = rational(
        field,
        BigInt::from(sign) * BigInt::from(factorial(l - 1)),
        BigInt::from(mu.mult_factorial()),
    );
    let mut sum = CycRat::zero(field);
    for &part in mu.parts() {
        sum = &sum + &d.d(part);
    }
    Ok(&scale * &sum)
}

/// `d_{λμ} = Σ_{ν ⊂' μ, μ∖ν ≠ ∅} N_l(λ,ν) d_{μ∖ν}`.
pub fn d_lambda_mu(
    lambda: &Partition,
    mu: &Partition,
    d: &dyn DSequence,
    field: &Arc<CyclotomicField>,
) -> Result<CycRat> {
    if lambda.weight() != mu.weight() {
        return Err(Error::WeightMismatch {
            left: lambda.weight(),
            right: mu.weight(),
        });
    }
    if lambda.is_empty() {
        return Err(Error::InvalidPartition("lambda must be nonempty".into()));
    }
    let mut total = CycRat::zero(field);
    for nu in mu.sub_multisets() {
        if &nu == mu {
            continue;
        }
        let count = nl_closed(lambda, &nu);
        if count == 0 {
            continue;
        }
        let rest = mu.subtract(&nu)?;
        let term = d_mu(&rest, d, field)?;
        total = &total + &term.scale_rational(&BigRational::from_integer(count.into()));
    }
    Ok(total)
}

/// `R_1, ..., R_max` (index 0 holds `R_0 = 1`) from the ring's closed form.
pub fn creation_from_ring(ring: &ModularRing, max_n: usize) -> Result<Vec<PExpr>> {
    (0..=max_n).map(|n| ring.r(n)).collect()
}

/// `R_n = d_n q_n - Σ_{0<i<n} R_i q_{n-i}`, for an arbitrary sequence.
pub fn creation_by_recursion(ring: &ModularRing, d: &dyn DSequence, max_n: usize) -> Result<Vec<PExpr>> {
    let mut out = vec![PExpr::one(ring.field())];
    for n in 1..=max_n {
        let mut r = ring.q(n)?.scale(&d.d(n));
        for (i, ri) in out.iter().enumerate().skip(1) {
            r = &r - &(ri * &ring.q(n - i)?);
        }
        out.push(r);
    }
    Ok(out)
}

/// The same recursion with `q_n` as free symbols.
pub fn creation_free(field: &Arc<CyclotomicField>, d: &dyn DSequence, max_n: usize) -> Vec<QExpr> {
    let qsym = |n: usize| QExpr::monomial(field, QBasis::Plain, Partition::row(n), CycRat::one(field)).expect("plain");
    let minus_one = CycRat::from_int(field, -1);
    let mut out = vec![QExpr::one(field)];
    for n in 1..=max_n {
        let mut r = qsym(n).scale(&d.d(n));
        for (i, ri) in out.iter().enumerate().skip(1) {
            r.add_scaled(&ri.mul_free(&qsym(n - i)), &minus_one).expect("plain");
        }
        out.push(r);
    }
    out
}

/// Tuples `i_j ≥ 1` grouped by the surviving values `ν`, with multiplicities.
fn lowering_counts(lambda: &Partition) -> HashMap<Partition, u128> {
    let mut counts = HashMap::new();
    for_each_lowering(lambda, 1, |_, nu| *counts.entry(nu).or_insert(0) += 1);
    counts
}

/// `Σ_{i_j ≥ 1} R_{Σi} q_{λ_1-i_1} ⋯ q_{λ_s-i_s}` in power sums, summed tuple by tuple.
/// `creation[k]` must hold `R_k` for `k ≤ |λ|`.
pub fn newton_lhs(ring: &ModularRing, lambda: &Partition, creation: &[PExpr]) -> Result<PExpr> {
    let mut out = PExpr::zero(ring.field());
    for (nu, count) in lowering_counts(lambda) {
        let k = lambda.weight() - nu.weight();
        let c = CycRat::from_int(ring.field(), count as i64);
        out.add_scaled(&(&creation[k] * &ring.qprod(&nu)?), &c);
    }
    Ok(out)
}

/// The same sum with `R_k` and `q_n` as free symbols.
pub fn newton_lhs_free(field: &Arc<CyclotomicField>, lambda: &Partition, creation: &[QExpr]) -> QExpr {
    let mut out = QExpr::zero(field, QBasis::Plain);
    for (nu, count) in lowering_counts(lambda) {
        let k = lambda.weight() - nu.weight();
        let qnu = QExpr::monomial(field, QBasis::Plain, nu, CycRat::one(field)).expect("plain");
        out.add_scaled(&creation[k].mul_free(&qnu), &CycRat::from_int(field, count as i64))
            .expect("plain");
    }
    out
}

/// `Σ_{μ ⊢ |λ|} d_{λμ} q_μ` as free symbols.
pub fn newton_rhs_free(field: &Arc<CyclotomicField>, lambda: &Partition, d: &dyn DSequence) -> Result<QExpr> {
    let mut out = QExpr::zero(field, QBasis::Plain);
    for mu in all_partitions(lambda.weight()) {
        out.add_term(mu.clone(), &d_lambda_mu(lambda, &mu, d, field)?)?;
    }
    Ok(out)
}

/// `Σ_{μ ⊢ |λ|} d_{λμ} q_μ` in power sums.
pub fn newton_rhs(ring: &ModularRing, lambda: &Partition, d: &dyn DSequence) -> Result<PExpr> {
    ring.expand_q(&newton_rhs_free(ring.field(), lambda, d)?)
}

/// Result of checking the identity at one `λ`.
#[derive(Clone, Debug)]
pub struct NewtonReport {
    pub m: usize,
    pub lambda: Partition,
    /// `newton_lhs - newton_rhs` in power sums.
    pub delta: PExpr,
    /// The identity also holds with free symbols `q_n`, `R_n`.
    pub free_ok: bool,
    /// `d_{λμ} = 0` unless `μ ≥ λ`.
    pub triangular: bool,
    /// `d_{λλ} = (-1)^{s-1} d_{λ_s}`.
    pub leading_ok: bool,
}

impl NewtonReport {
    pub fn ok(&self) -> bool {
        self.delta.is_zero() && self.free_ok && self.triangular && self.leading_ok
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "identity": "traisesq",
            "m": self.m,
            "lambda": self.lambda.to_json(),
            "status": if self.ok() { "ok" } else { "fail" },
            "delta": self.delta.to_json(),
        })
    }
}

/// Checks the identity at `λ` for the sequence `d`, where `creation` holds
/// `R_0..R_{|λ|}` built from the same `d`.
pub fn check_newton(
    ring: &ModularRing,
    lambda: &Partition,
    d: &dyn DSequence,
    creation: &[PExpr],
) -> Result<NewtonReport> {
    let field = ring.field();
    let lhs = newton_lhs(ring, lambda, creation)?;
    let rhs_free = newton_rhs_free(field, lambda, d)?;
    let delta = &lhs - &ring.expand_q(&rhs_free)?;

    let free_creation = creation_free(field, d, lambda.weight());
    let free_ok = newton_lhs_free(field, lambda, &free_creation) == rhs_free;

    let triangular = rhs_free.terms().keys().all(|mu| {
        matches!(
            dominance_compare(mu, lambda),
            Ok(DominanceOrdering::Greater | DominanceOrdering::Equal)
        )
    });
    let s = lambda.len();
    let last = *lambda.parts().last().expect("nonempty");
    let expected = if s % 2 == 1 { d.d(last) } else { -&d.d(last) };
    let leading_ok = rhs_free.coeff(lambda) == expected;

    Ok(NewtonReport {
        m: ring.m(),
        lambda: lambda.clone(),
        delta,
        free_ok,
        triangular,
        leading_ok,
    })
}
