use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::scalars::{Cyc, CycRat, CyclotomicField};

/// An element of the m-regular ring written in the power-sum basis:
/// a finitely supported map `λ ↦ coefficient of p_λ`, every key m-regular.
#[derive(Clone, PartialEq, Eq)]
pub struct PExpr {
    field: Arc<CyclotomicField>,
    terms: BTreeMap<Partition, CycRat>,
}

impl PExpr {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        PExpr {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        PExpr::monomial(Partition::empty(), CycRat::one(field))
    }

    /// `coeff · p_λ`. Panics if `λ` has a part divisible by `m`; use
    /// [`PExpr::try_monomial`] for untrusted input.
    pub fn monomial(lambda: Partition, coeff: CycRat) -> Self {
        PExpr::try_monomial(lambda, coeff).expect("power-sum index must be m-regular")
    }

    pub fn try_monomial(lambda: Partition, coeff: CycRat) -> Result<Self> {
        let field = coeff.field().clone();
        if !lambda.is_regular(field.m()) {
            return Err(Error::InvalidPartition(format!(
                "{lambda} has a part divisible by {}",
                field.m()
            )));
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(lambda, coeff);
        }
        Ok(PExpr { field, terms })
    }

    /// `p_λ` with coefficient 1.
    pub fn p(field: &Arc<CyclotomicField>, lambda: Partition) -> Result<Self> {
        PExpr::try_monomial(lambda, CycRat::one(field))
    }

    /// Builds an element from `(partition, coefficient)` pairs, summing repeats.
    pub fn from_terms(
        field: &Arc<CyclotomicField>,
        terms: impl IntoIterator<Item = (Partition, CycRat)>,
    ) -> Result<Self> {
        let mut out = PExpr::zero(field);
        for (lambda, c) in terms {
            out.add_term(lambda, &c)?;
        }
        Ok(out)
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.field.m()
    }

    pub fn terms(&self) -> &BTreeMap<Partition, CycRat> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, lambda: &Partition) -> CycRat {
        self.terms
            .get(lambda)
            .cloned()
            .unwrap_or_else(|| CycRat::zero(&self.field))
    }

    fn add_term(&mut self, lambda: Partition, c: &CycRat) -> Result<()> {
        if !lambda.is_regular(self.m()) {
            return Err(Error::InvalidPartition(format!(
                "{lambda} has a part divisible by {}",
                self.m()
            )));
        }
        self.accumulate(lambda, c);
        Ok(())
    }

    pub(crate) fn accumulate(&mut self, lambda: Partition, c: &CycRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(lambda) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Adds `c · other` into `self`.
    pub fn add_scaled(&mut self, other: &PExpr, c: &CycRat) {
        self.check_modulus(other);
        if c.is_zero() {
            return;
        }
        for (lambda, v) in &other.terms {
            let scaled = if c.is_one() { v.clone() } else { v * c };
            self.accumulate(lambda.clone(), &scaled);
        }
    }

    pub fn scale(&self, c: &CycRat) -> PExpr {
        if c.is_zero() {
            return PExpr::zero(&self.field);
        }
        if c.is_one() {
            return self.clone();
        }
        PExpr {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn scale_cyc(&self, c: &Cyc) -> PExpr {
        self.scale(&CycRat::from_cyc(c.clone()))
    }

    fn check_modulus(&self, other: &PExpr) {
        assert_eq!(self.m(), other.m(), "ring elements over different moduli");
    }

    /// Product in the power-sum basis, `p_λ p_μ = p_{λ∪μ}`, rejecting mixed moduli.
    pub fn checked_mul(&self, other: &PExpr) -> Result<PExpr> {
        if self.m() != other.m() {
            return Err(Error::ModulusMismatch {
                left: self.m(),
                right: other.m(),
            });
        }
        Ok(self * other)
    }

    /// The common weight of all terms; `None` for mixed degrees. The zero
    /// element reports `Some(0)`.
    pub fn degree(&self) -> Option<usize> {
        let mut weights = self.terms.keys().map(Partition::weight);
        match weights.next() {
            None => Some(0),
            Some(w) => weights.all(|x| x == w).then_some(w),
        }
    }

    /// The homogeneous component of degree `n`.
    pub fn component(&self, n: usize) -> PExpr {
        PExpr {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.weight() == n)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// `∂/∂p_n`, treating the power sums as free generators.
    pub fn d_dp(&self, n: usize) -> Result<PExpr> {
        if n == 0 || n.is_multiple_of(self.m()) {
            return Err(Error::DivisibleByModulus { n, m: self.m() });
        }
        let mut out = PExpr::zero(&self.field);
        for (lambda, c) in &self.terms {
            let mult = lambda.mult(n);
            if mult == 0 {
                continue;
            }
            let reduced = lambda.remove_part(n).expect("part present");
            let factor = CycRat::from_int(&self.field, mult as i64);
            out.accumulate(reduced, &(c * &factor));
        }
        Ok(out)
    }

    /// Maps every coefficient through `f`, dropping zeros. Errors carry the
    /// partition whose coefficient failed.
    pub fn try_map_coeffs(&self, mut f: impl FnMut(&CycRat) -> Result<CycRat>) -> Result<PExpr> {
        let mut out = PExpr::zero(&self.field);
        for (lambda, c) in &self.terms {
            let mapped = f(c).map_err(|e| match e {
                Error::PoleAtSpecialization { .. } => Error::PoleAtSpecialization {
                    partition: Some(lambda.clone()),
                },
                other => other,
            })?;
            out.accumulate(lambda.clone(), &mapped);
        }
        Ok(out)
    }

    /// Substitutes `q = q0` into every coefficient.
    pub fn evaluate(&self, q0: &Cyc) -> Result<PExpr> {
        self.try_map_coeffs(|c| Ok(CycRat::from_cyc(c.evaluate(q0)?)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        terms_json(self.m(), "p", &self.terms)
    }
}

/// Ring-element JSON: `{"m", "basis", "terms": [{"partition", "coeff"}]}`.
pub(crate) fn terms_json(m: usize, basis: &str, terms: &BTreeMap<Partition, CycRat>) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = terms
        .iter()
        .map(|(lambda, c)| serde_json::json!({"partition": lambda.to_json(), "coeff": c.to_json()}))
        .collect();
    serde_json::json!({"m": m, "basis": basis, "terms": terms})
}

impl fmt::Debug for PExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PExpr[m={}]({self})", self.m())
    }
}

impl fmt::Display for PExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (lambda, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{c}]*p{lambda}")?;
        }
        Ok(())
    }
}

impl Add<&PExpr> for &PExpr {
    type Output = PExpr;
    fn add(self, rhs: &PExpr) -> PExpr {
        let mut out = self.clone();
        out.add_scaled(rhs, &CycRat::one(&self.field));
        out
    }
}

impl Sub<&PExpr> for &PExpr {
    type Output = PExpr;
    fn sub(self, rhs: &PExpr) -> PExpr {
        let mut out = self.clone();
        out.add_scaled(rhs, &CycRat::from_int(&self.field, -1));
        out
    }
}

impl Neg for &PExpr {
    type Output = PExpr;
    fn neg(self) -> PExpr {
        PExpr {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

impl Mul<&PExpr> for &PExpr {
    type Output = PExpr;
    fn mul(self, rhs: &PExpr) -> PExpr {
        self.check_modulus(rhs);
        let mut out = PExpr::zero(&self.field);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.accumulate(a.union(b), &(x * y));
            }
        }
        out
    }
}

crate::scalars::forward_owned!(PExpr, Add::add, Sub::sub, Mul::mul);
