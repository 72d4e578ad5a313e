use std::fmt;
use std::sync::Arc;

use super::cyclotomic::{Cyc, CyclotomicField};
use super::poly::CycPoly;
use super::ratfunc::CycRat;
use crate::error::{Error, Result};

/// How the parameters `q` and `c` enter the coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ParamMode {
    /// `q` stays a formal variable and `c = ξ_m^{-1}`.
    Symbolic,
    /// `q = q0` and `c = c0`, both nonzero elements of `Q(ξ_m)`.
    Eval { q0: Cyc, c0: Cyc },
}

impl fmt::Debug for ParamMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamMode::Symbolic => write!(f, "symbolic"),
            ParamMode::Eval { q0, c0 } => write!(f, "eval(q0={q0}, c0={c0})"),
        }
    }
}

/// The coefficient field together with a parameter mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Params {
    field: Arc<CyclotomicField>,
    mode: ParamMode,
}

impl std::hash::Hash for CyclotomicField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.m().hash(state);
    }
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.m() == other.m()
    }
}

impl Eq for CyclotomicField {}

impl Params {
    pub fn symbolic(m: usize) -> Result<Self> {
        Ok(Params {
            field: CyclotomicField::get(m)?,
            mode: ParamMode::Symbolic,
        })
    }

    /// Evaluation mode; `q0` and `c0` must be nonzero elements of `Q(ξ_m)`.
    pub fn eval(q0: Cyc, c0: Cyc) -> Result<Self> {
        if q0.m() != c0.m() {
            return Err(Error::ModulusMismatch {
                left: q0.m(),
                right: c0.m(),
            });
        }
        if q0.is_zero() || c0.is_zero() {
            return Err(Error::DegenerateParameter("q0 and c0 must be nonzero".into()));
        }
        Ok(Params {
            field: q0.field().clone(),
            mode: ParamMode::Eval { q0, c0 },
        })
    }

    /// The default evaluation point `q0 = 2`, `c0 = ξ_m^{-1}`.
    pub fn eval_default(m: usize) -> Result<Self> {
        let field = CyclotomicField::get(m)?;
        Params::eval(Cyc::from_int(&field, 2), Cyc::xi_pow(&field, -1))
    }

    pub fn m(&self) -> usize {
        self.field.m()
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn mode(&self) -> &ParamMode {
        &self.mode
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.mode, ParamMode::Symbolic)
    }

    pub fn zero(&self) -> CycRat {
        CycRat::zero(&self.field)
    }

    pub fn one(&self) -> CycRat {
        CycRat::one(&self.field)
    }

    pub fn int(&self, n: i64) -> CycRat {
        CycRat::from_int(&self.field, n)
    }

    pub fn ratio(&self, num: i64, den: i64) -> CycRat {
        CycRat::from_ratio(&self.field, num, den)
    }

    pub fn xi_pow(&self, k: i64) -> Cyc {
        Cyc::xi_pow(&self.field, k)
    }

    /// `q` as a scalar: the indeterminate, or `q0`.
    pub fn q(&self) -> CycRat {
        match &self.mode {
            ParamMode::Symbolic => CycRat::q(&self.field),
            ParamMode::Eval { q0, .. } => CycRat::from_cyc(q0.clone()),
        }
    }

    /// `c` as a scalar: `ξ_m^{-1}`, or `c0`.
    pub fn c(&self) -> CycRat {
        match &self.mode {
            ParamMode::Symbolic => CycRat::from_cyc(self.xi_pow(-1)),
            ParamMode::Eval { c0, .. } => CycRat::from_cyc(c0.clone()),
        }
    }

    /// `q^n` as a scalar.
    pub fn q_pow(&self, n: usize) -> CycRat {
        match &self.mode {
            ParamMode::Symbolic => CycRat::from_poly(CycPoly::monomial(Cyc::one(&self.field), n)),
            ParamMode::Eval { q0, .. } => CycRat::from_cyc(q0.pow(n as i64).expect("nonnegative power")),
        }
    }

    /// `c^k` for any integer `k`.
    pub fn c_pow(&self, k: i64) -> CycRat {
        self.c().pow(k).expect("c is nonzero")
    }

    /// `q^n - 1`, the coefficient sequence `d_n` attached to the vertex operator.
    pub fn q_pow_minus_one(&self, n: usize) -> CycRat {
        &self.q_pow(n) - &self.one()
    }

    /// `ε_n = (q^n - 1) / ((1 - ξ_m^n) c^n)` for `m ∤ n`.
    pub fn epsilon(&self, n: usize) -> Result<CycRat> {
        let m = self.m();
        if n == 0 || n.is_multiple_of(m) {
            return Err(Error::DivisibleByModulus { n, m });
        }
        let numer = self.q_pow_minus_one(n);
        if numer.is_zero() {
            return Err(Error::DegenerateParameter(format!(
                "q0^{n} = 1 makes epsilon_{n} vanish"
            )));
        }
        let one_minus_xi = &Cyc::one(&self.field) - &self.xi_pow(n as i64);
        let denom = self.c_pow(n as i64).scale(&one_minus_xi);
        numer.checked_div(&denom)
    }

    /// `ε_λ = ∏ ε_{λ_i}`; `ε_∅ = 1`.
    pub fn epsilon_partition(&self, parts: &[usize]) -> Result<CycRat> {
        parts
            .iter()
            .try_fold(self.one(), |acc, &p| Ok(&acc * &self.epsilon(p)?))
    }
}
