use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num::{BigInt, BigRational, One};

use super::linalg;
use super::pexpr::PExpr;
use super::qexpr::{QBasis, QExpr};
use crate::error::{Error, Result};
use crate::partitions::{dominance_linear_extension, enumerate, Partition, PartitionClass};
use crate::scalars::{Cyc, CycRat, CyclotomicField, Params};

/// The ring `Λ^(m)(ε)` at a fixed parameter mode, with caches for the
/// expansions that every other module reuses.
///
/// All caches are append-only behind `RwLock`s, so a ring can be shared
/// across threads.
pub struct ModularRing {
    params: Params,
    q_cache: RwLock<HashMap<usize, PExpr>>,
    r_cache: RwLock<HashMap<usize, PExpr>>,
    qprod_cache: RwLock<HashMap<Partition, PExpr>>,
    basis_cache: RwLock<HashMap<usize, Arc<ReducedBasis>>>,
}

/// Change of basis between `{p_ρ : ρ ∈ P^(m)(n)}` and `{q_μ : μ ∈ P_m(n)}`.
#[derive(Debug)]
pub struct ReducedBasis {
    n: usize,
    regular: Vec<Partition>,
    row_index: HashMap<Partition, usize>,
    order: Vec<Partition>,
    /// `inverse[j][i]` is the `q_{order[j]}` coordinate of `p_{regular[i]}`.
    inverse: Vec<Vec<CycRat>>,
}

impl ReducedBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The m-reduced partitions of `n`, dominance-greatest first.
    pub fn order(&self) -> &[Partition] {
        &self.order
    }

    /// The m-regular partitions of `n` in reverse-lexicographic order.
    pub fn regular(&self) -> &[Partition] {
        &self.regular
    }
}

/// Outcome of checking the vanishing of the `z^{km}` coefficient of
/// `∏_{i=1}^{m} Σ_n ξ^{in} q_n z^n`.
#[derive(Clone, Debug)]
pub struct ModularRelationReport {
    pub m: usize,
    pub k: usize,
    /// The coefficient as a combination of free symbols `q_λ`.
    pub relation: QExpr,
    /// The same coefficient expanded in power sums; zero when the relation holds.
    pub residual: PExpr,
    /// Coefficient of `q_{km}` is `m` and coefficient of `q_{(k^m)}` is
    /// `(-1)^{(m+1)k}`.
    pub extremes_ok: bool,
}

impl ModularRelationReport {
    pub fn holds(&self) -> bool {
        self.residual.is_zero() && self.extremes_ok
    }
}

impl ModularRing {
    pub fn new(params: Params) -> Self {
        ModularRing {
            params,
            q_cache: RwLock::default(),
            r_cache: RwLock::default(),
            qprod_cache: RwLock::default(),
            basis_cache: RwLock::default(),
        }
    }

    pub fn symbolic(m: usize) -> Result<Self> {
        Ok(ModularRing::new(Params::symbolic(m)?))
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        self.params.field()
    }

    pub fn m(&self) -> usize {
        self.params.m()
    }

    fn regular(&self, n: usize) -> Vec<Partition> {
        enumerate(n, PartitionClass::Regular, self.m()).expect("modulus validated by the field")
    }

    fn reduced(&self, n: usize) -> Vec<Partition> {
        enumerate(n, PartitionClass::Reduced, self.m()).expect("modulus validated by the field")
    }

    fn rational(&self, r: BigRational) -> CycRat {
        CycRat::from_rational(self.field(), r)
    }

    /// `q_n = Σ_{λ ∈ P^(m)(n)} p_λ / (z_λ ε_λ)`; `q_0 = 1`.
    pub fn q(&self, n: usize) -> Result<PExpr> {
        if let Some(hit) = self.q_cache.read().expect("cache lock").get(&n) {
            return Ok(hit.clone());
        }
        let mut out = PExpr::zero(self.field());
        for lambda in self.regular(n) {
            let eps = self.params.epsilon_partition(lambda.parts())?;
            let z = self.rational(BigRational::from_integer(BigInt::from(lambda.z())));
            out.accumulate(lambda, &(&z * &eps).inv()?);
        }
        self.q_cache.write().expect("cache lock").insert(n, out.clone());
        Ok(out)
    }

    /// Total accessor: `q_n` for `n ≥ 0` and zero for `n < 0`.
    pub fn q_any(&self, n: i64) -> Result<PExpr> {
        if n < 0 {
            Ok(PExpr::zero(self.field()))
        } else {
            self.q(n as usize)
        }
    }

    /// `q_λ = q_{λ_1} q_{λ_2} ⋯`.
    pub fn qprod(&self, lambda: &Partition) -> Result<PExpr> {
        if lambda.is_empty() {
            return Ok(PExpr::one(self.field()));
        }
        if lambda.len() == 1 {
            return self.q(lambda.parts()[0]);
        }
        if let Some(hit) = self.qprod_cache.read().expect("cache lock").get(lambda) {
            return Ok(hit.clone());
        }
        let last = *lambda.parts().last().expect("nonempty");
        let rest = lambda.remove_part(last).expect("part present");
        let out = &self.qprod(&rest)? * &self.q(last)?;
        self.qprod_cache
            .write()
            .expect("cache lock")
            .insert(lambda.clone(), out.clone());
        Ok(out)
    }

    /// `R_n = c^n Σ_{ρ ∈ P^(m)(n)} ∏_i (1 - ξ^{ρ_i}) p_ρ / z_ρ`, the
    /// coefficients of the creation exponential.
    pub fn r(&self, n: usize) -> Result<PExpr> {
        if let Some(hit) = self.r_cache.read().expect("cache lock").get(&n) {
            return Ok(hit.clone());
        }
        let field = self.field().clone();
        let cn = self.params.c_pow(n as i64);
        let mut out = PExpr::zero(&field);
        for rho in self.regular(n) {
            let mut coeff = Cyc::one(&field);
            for &part in rho.parts() {
                coeff = &coeff * &(&Cyc::one(&field) - &Cyc::xi_pow(&field, part as i64));
            }
            let z_inv = BigRational::new(BigInt::one(), BigInt::from(rho.z()));
            out.accumulate(rho, &cn.scale(&coeff.scale(&z_inv)));
        }
        self.r_cache.write().expect("cache lock").insert(n, out.clone());
        Ok(out)
    }

    /// `⟨f, g⟩ = Σ_λ f_λ g_λ z_λ ε_λ`.
    pub fn scalar_product(&self, f: &PExpr, g: &PExpr) -> Result<CycRat> {
        if f.m() != g.m() || f.m() != self.m() {
            return Err(Error::ModulusMismatch {
                left: f.m(),
                right: g.m(),
            });
        }
        let (small, large) = if f.len() <= g.len() { (f, g) } else { (g, f) };
        let mut acc = self.params.zero();
        for (lambda, a) in small.terms() {
            let Some(b) = large.terms().get(lambda) else {
                continue;
            };
            let z = self.rational(BigRational::from_integer(BigInt::from(lambda.z())));
            let eps = self.params.epsilon_partition(lambda.parts())?;
            acc = &acc + &(&(a * b) * &(&z * &eps));
        }
        Ok(acc)
    }

    /// `h_n`: for `n > 0` the annihilator `n ε_n ∂/∂p_n`, for `n < 0`
    /// multiplication by `p_{-n}`.
    pub fn h(&self, n: i64, f: &PExpr) -> Result<PExpr> {
        let k = n.unsigned_abs() as usize;
        if k == 0 || k.is_multiple_of(self.m()) {
            return Err(Error::DivisibleByModulus { n: k, m: self.m() });
        }
        if n < 0 {
            return Ok(f * &PExpr::p(self.field(), Partition::row(k))?);
        }
        let scale = &self.params.int(n) * &self.params.epsilon(k)?;
        Ok(f.d_dp(k)?.scale(&scale))
    }

    /// Expands a combination of `q_λ` symbols into power sums.
    pub fn expand_q(&self, x: &QExpr) -> Result<PExpr> {
        let mut out = PExpr::zero(self.field());
        for (lambda, c) in x.terms() {
            out.add_scaled(&self.qprod(lambda)?, c);
        }
        Ok(out)
    }

    /// The change-of-basis data for degree `n`, built on first use.
    ///
    /// A singular system would contradict the basis theorem for
    /// `{q_μ : μ ∈ P_m(n)}` and is reported as an invariant violation.
    pub fn reduced_basis(&self, n: usize) -> Result<Arc<ReducedBasis>> {
        if let Some(hit) = self.basis_cache.read().expect("cache lock").get(&n) {
            return Ok(hit.clone());
        }
        let regular = self.regular(n);
        let order = dominance_linear_extension(&self.reduced(n))?;
        if regular.len() != order.len() {
            return Err(Error::InvariantViolation(format!(
                "degree {n}: {} regular vs {} reduced partitions",
                regular.len(),
                order.len()
            )));
        }
        let row_index: HashMap<Partition, usize> = regular.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut matrix = vec![vec![self.params.zero(); order.len()]; regular.len()];
        for (j, mu) in order.iter().enumerate() {
            for (rho, c) in self.qprod(mu)?.terms() {
                matrix[row_index[rho]][j] = c.clone();
            }
        }
        let inverse = linalg::invert(&matrix)?.ok_or_else(|| {
            Error::InvariantViolation(format!(
                "q-basis over P_{}({n}) is singular in mode {:?}",
                self.m(),
                self.params.mode()
            ))
        })?;
        let basis = Arc::new(ReducedBasis {
            n,
            regular,
            row_index,
            order,
            inverse,
        });
        self.basis_cache.write().expect("cache lock").insert(n, basis.clone());
        Ok(basis)
    }

    /// Coordinates of a homogeneous `f` in the basis `{q_μ : μ ∈ P_m(n)}`.
    pub fn p_to_q_reduced(&self, f: &PExpr) -> Result<QExpr> {
        let n = f.degree().ok_or(Error::NotHomogeneous)?;
        let mut out = QExpr::zero(self.field(), QBasis::Reduced);
        if f.is_zero() {
            return Ok(out);
        }
        let basis = self.reduced_basis(n)?;
        let mut v = vec![self.params.zero(); basis.regular.len()];
        for (rho, c) in f.terms() {
            v[basis.row_index[rho]] = c.clone();
        }
        let x = linalg::mat_vec(&basis.inverse, &v);
        for (mu, c) in basis.order.iter().zip(x) {
            out.add_term(mu.clone(), &c)?;
        }
        Ok(out)
    }

    /// Checks that the `z^{km}` coefficient of `∏_{i=1}^{m} Σ_n ξ^{in} q_n z^n`
    /// vanishes in the ring.
    pub fn modular_relation_check(&self, k: usize) -> Result<ModularRelationReport> {
        if k == 0 {
            return Err(Error::InvalidPartition("k must be positive".into()));
        }
        let field = self.field().clone();
        let m = self.m();
        let top = k * m;
        // Coefficients of the running product by degree, as free q-symbols.
        let mut product: Vec<QExpr> = (0..=top)
            .map(|d| {
                if d == 0 {
                    QExpr::one(&field)
                } else {
                    QExpr::zero(&field, QBasis::Plain)
                }
            })
            .collect();
        for i in 1..=m {
            let mut next: Vec<QExpr> = (0..=top).map(|_| QExpr::zero(&field, QBasis::Plain)).collect();
            for (d, acc) in product.iter().enumerate() {
                for n in 0..=top - d {
                    let factor = QExpr::monomial(
                        &field,
                        QBasis::Plain,
                        Partition::row(n),
                        CycRat::from_cyc(Cyc::xi_pow(&field, (i * n) as i64)),
                    )?;
                    next[d + n].add_scaled(&acc.mul_free(&factor), &CycRat::one(&field))?;
                }
            }
            product = next;
        }
        let relation = product.pop().expect("degree km present");
        let residual = self.expand_q(&relation)?;
        let sign = if ((m + 1) * k).is_multiple_of(2) { 1 } else { -1 };
        let extremes_ok = relation.coeff(&Partition::row(top)) == CycRat::from_int(&field, m as i64)
            && relation.coeff(&Partition::rectangle(k, m)) == CycRat::from_int(&field, sign);
        Ok(ModularRelationReport {
            m,
            k,
            relation,
            residual,
            extremes_ok,
        })
    }
}

/// Degree-`≤ max_deg` part of `exp(Σ_k series[k])`, where `series[k]` is
/// homogeneous of degree `k` and `series[0]` is ignored. Computed directly as
/// `Σ_j A^j / j!` and returned as homogeneous components `0..=max_deg`.
pub fn truncated_exp(field: &Arc<CyclotomicField>, series: &[PExpr], max_deg: usize) -> Vec<PExpr> {
    let mut a = PExpr::zero(field);
    for s in series.iter().take(max_deg + 1).skip(1) {
        a = &a + s;
    }
    let truncate = |x: &PExpr| -> PExpr {
        let mut out = PExpr::zero(field);
        for (lambda, c) in x.terms() {
            if lambda.weight() <= max_deg {
                out.accumulate(lambda.clone(), c);
            }
        }
        out
    };
    let mut total = PExpr::one(field);
    let mut power = PExpr::one(field);
    for j in 1..=max_deg {
        power = truncate(&(&power * &a));
        let inv_fact = CycRat::from_ratio(field, 1, 1).scale_rational(&BigRational::new(
            BigInt::one(),
            BigInt::from(crate::partitions::factorial(j)),
        ));
        total = &total + &power.scale(&inv_fact);
    }
    (0..=max_deg).map(|d| total.component(d)).collect()
}
