//! Dense univariate polynomials in `q` over `Q(ξ_m)`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::cyclotomic::{forward_owned, Cyc, CyclotomicField};

/// Coefficients ascend in powers of `q`; the zero polynomial has no
/// coefficients and every other polynomial has a nonzero leading coefficient.
#[derive(Clone)]
pub struct CycPoly {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Cyc>,
}

impl CycPoly {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        CycPoly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        CycPoly::constant(Cyc::one(field))
    }

    pub fn constant(c: Cyc) -> Self {
        let field = c.field().clone();
        CycPoly::from_coeffs(&field, vec![c])
    }

    /// The indeterminate `q`.
    pub fn q(field: &Arc<CyclotomicField>) -> Self {
        CycPoly::monomial(Cyc::one(field), 1)
    }

    /// `c·q^k`.
    pub fn monomial(c: Cyc, k: usize) -> Self {
        let field = c.field().clone();
        let mut coeffs = vec![Cyc::zero(&field); k];
        coeffs.push(c);
        CycPoly::from_coeffs(&field, coeffs)
    }

    pub fn from_coeffs(field: &Arc<CyclotomicField>, coeffs: Vec<Cyc>) -> Self {
        let mut p = CycPoly {
            field: field.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Cyc::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Cyc] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Cyc> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> Cyc {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Cyc::zero(&self.field))
    }

    pub fn scale(&self, c: &Cyc) -> Self {
        if c.is_zero() {
            return CycPoly::zero(&self.field);
        }
        CycPoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Divides by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) if !lc.is_one() => self.scale(&lc.inv().expect("leading coefficient is nonzero")),
            _ => self.clone(),
        }
    }

    /// Euclidean division: `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &CycPoly) -> (CycPoly, CycPoly) {
        let lead = divisor.leading().expect("polynomial division by zero");
        let lead_inv = if lead.is_one() {
            None
        } else {
            Some(lead.inv().expect("nonzero"))
        };
        let dlen = divisor.coeffs.len();
        let mut rem = self.coeffs.clone();
        if rem.len() < dlen {
            return (CycPoly::zero(&self.field), self.clone());
        }
        let mut quot = vec![Cyc::zero(&self.field); rem.len() - dlen + 1];
        while rem.len() >= dlen {
            let top = rem.pop().expect("nonempty");
            let shift = rem.len() + 1 - dlen;
            if !top.is_zero() {
                let factor = match &lead_inv {
                    Some(inv) => &top * inv,
                    None => top,
                };
                for (i, c) in divisor.coeffs[..dlen - 1].iter().enumerate() {
                    if !c.is_zero() {
                        rem[shift + i] = &rem[shift + i] - &(&factor * c);
                    }
                }
                quot[shift] = factor;
            }
        }
        (
            CycPoly::from_coeffs(&self.field, quot),
            CycPoly::from_coeffs(&self.field, rem),
        )
    }

    /// Exact quotient; debug builds check the remainder vanishes.
    pub fn exact_div(&self, divisor: &CycPoly) -> CycPoly {
        if divisor.is_one() {
            return self.clone();
        }
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &CycPoly) -> CycPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return CycPoly::one(&self.field);
        }
        let (mut a, mut b) = if self.coeffs.len() >= other.coeffs.len() {
            (self.monic(), other.monic())
        } else {
            (other.monic(), self.monic())
        };
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// Horner evaluation at `q = x`.
    pub fn eval(&self, x: &Cyc) -> Cyc {
        let mut acc = Cyc::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn pow(&self, k: usize) -> CycPoly {
        let mut acc = CycPoly::one(&self.field);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl PartialEq for CycPoly {
    fn eq(&self, other: &Self) -> bool {
        self.field.m() == other.field.m() && self.coeffs == other.coeffs
    }
}

impl Eq for CycPoly {}

impl Hash for CycPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.m().hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for CycPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycPoly({self})")
    }
}

impl fmt::Display for CycPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let rendered = c.to_string();
            let compound = rendered.contains(' ');
            let (negative, body) = match rendered.strip_prefix('-') {
                Some(rest) if !compound => (true, rest.to_string()),
                _ => (false, rendered),
            };
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let unit = body == "1";
            if k == 0 {
                if compound {
                    write!(f, "({body})")?;
                } else {
                    write!(f, "{body}")?;
                }
                continue;
            }
            if compound {
                write!(f, "({body})*")?;
            } else if !unit {
                write!(f, "{body}*")?;
            }
            if k == 1 {
                write!(f, "q")?;
            } else {
                write!(f, "q^{k}")?;
            }
        }
        Ok(())
    }
}

impl Add<&CycPoly> for &CycPoly {
    type Output = CycPoly;
    fn add(self, rhs: &CycPoly) -> CycPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (slot, c) in coeffs.iter_mut().zip(&short.coeffs) {
            *slot += c;
        }
        CycPoly::from_coeffs(&self.field, coeffs)
    }
}

impl Sub<&CycPoly> for &CycPoly {
    type Output = CycPoly;
    fn sub(self, rhs: &CycPoly) -> CycPoly {
        self + &(-rhs)
    }
}

impl Neg for &CycPoly {
    type Output = CycPoly;
    fn neg(self) -> CycPoly {
        CycPoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&CycPoly> for &CycPoly {
    type Output = CycPoly;
    fn mul(self, rhs: &CycPoly) -> CycPoly {
        if self.is_zero() || rhs.is_zero() {
            return CycPoly::zero(&self.field);
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        let mut coeffs = vec![Cyc::zero(&self.field); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += &(a * b);
                }
            }
        }
        CycPoly::from_coeffs(&self.field, coeffs)
    }
}

forward_owned!(CycPoly, Add::add, Sub::sub, Mul::mul);
