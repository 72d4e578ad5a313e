use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::scalars::{CycRat, CyclotomicField};

/// Which family of `q_λ` the coordinates refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QBasis {
    /// Formal symbols `q_λ` over arbitrary partitions. Multiplication is
    /// union of indices, i.e. the free commutative algebra on `q_1, q_2, ...`.
    Plain,
    /// Coordinates in the basis `{q_λ : λ m-reduced}`.
    Reduced,
}

impl QBasis {
    pub fn json_name(self) -> &'static str {
        match self {
            QBasis::Plain => "q",
            QBasis::Reduced => "q_reduced",
        }
    }
}

/// A linear combination of `q_λ` symbols.
#[derive(Clone, PartialEq, Eq)]
pub struct QExpr {
    field: Arc<CyclotomicField>,
    basis: QBasis,
    terms: BTreeMap<Partition, CycRat>,
}

impl QExpr {
    pub fn zero(field: &Arc<CyclotomicField>, basis: QBasis) -> Self {
        QExpr {
            field: field.clone(),
            basis,
            terms: BTreeMap::new(),
        }
    }

    /// `q_∅ = 1` in the plain flavor.
    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        QExpr::monomial(field, QBasis::Plain, Partition::empty(), CycRat::one(field))
            .expect("empty partition is reduced")
    }

    pub fn monomial(field: &Arc<CyclotomicField>, basis: QBasis, lambda: Partition, coeff: CycRat) -> Result<Self> {
        let mut out = QExpr::zero(field, basis);
        out.add_term(lambda, &coeff)?;
        Ok(out)
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.field.m()
    }

    pub fn basis(&self) -> QBasis {
        self.basis
    }

    pub fn terms(&self) -> &BTreeMap<Partition, CycRat> {
        &self.terms
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

    /// Adds `c · q_λ`. The reduced flavor rejects non-reduced `λ`.
    pub fn add_term(&mut self, lambda: Partition, c: &CycRat) -> Result<()> {
        if self.basis == QBasis::Reduced && !lambda.is_reduced(self.m()) {
            return Err(Error::NotReduced(lambda));
        }
        if c.is_zero() {
            return Ok(());
        }
        let entry = self.terms.entry(lambda).or_insert_with(|| CycRat::zero(&self.field));
        *entry = &*entry + c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &QExpr, c: &CycRat) -> Result<()> {
        for (lambda, v) in &other.terms {
            self.add_term(lambda.clone(), &(v * c))?;
        }
        Ok(())
    }

    pub fn scale(&self, c: &CycRat) -> QExpr {
        let mut out = QExpr::zero(&self.field, self.basis);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        out
    }

    pub fn sub(&self, other: &QExpr) -> Result<QExpr> {
        let mut out = self.clone();
        out.add_scaled(other, &CycRat::from_int(&self.field, -1))?;
        Ok(out)
    }

    /// Product in the free algebra: `q_λ q_μ = q_{λ∪μ}`. Only meaningful in
    /// the plain flavor, where the symbols are formally independent.
    pub fn mul_free(&self, other: &QExpr) -> QExpr {
        assert_eq!(self.basis, QBasis::Plain, "free product needs plain coordinates");
        assert_eq!(other.basis, QBasis::Plain, "free product needs plain coordinates");
        let mut out = QExpr::zero(&self.field, QBasis::Plain);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.union(b), &(x * y)).expect("plain flavor");
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        super::pexpr::terms_json(self.m(), self.basis.json_name(), &self.terms)
    }
}

impl fmt::Debug for QExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QExpr[m={}, {:?}]({self})", self.m(), self.basis)
    }
}

impl fmt::Display for QExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (lambda, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{c}]*q{lambda}")?;
        }
        Ok(())
    }
}
