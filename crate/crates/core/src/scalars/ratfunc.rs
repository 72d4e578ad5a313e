//! Rational functions in `q` over `Q(ξ_m)` in canonical form.
//!
//! Canonical form: numerator and denominator coprime, denominator monic,
//! zero stored as `0/1`. Equality is therefore structural.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num::{BigRational, Zero};

use super::cyclotomic::{forward_owned, rational_to_string, Cyc, CyclotomicField};
use super::poly::CycPoly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycRat {
    num: CycPoly,
    den: CycPoly,
}

impl CycRat {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        CycRat {
            num: CycPoly::zero(field),
            den: CycPoly::one(field),
        }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        CycRat::from_cyc(Cyc::one(field))
    }

    pub fn from_cyc(c: Cyc) -> Self {
        let field = c.field().clone();
        CycRat {
            num: CycPoly::constant(c),
            den: CycPoly::one(&field),
        }
    }

    pub fn from_int(field: &Arc<CyclotomicField>, n: i64) -> Self {
        CycRat::from_cyc(Cyc::from_int(field, n))
    }

    pub fn from_ratio(field: &Arc<CyclotomicField>, num: i64, den: i64) -> Self {
        CycRat::from_cyc(Cyc::from_ratio(field, num, den))
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, r: BigRational) -> Self {
        CycRat::from_cyc(Cyc::from_rational(field, r))
    }

    pub fn from_poly(p: CycPoly) -> Self {
        let field = p.field().clone();
        CycRat {
            num: p,
            den: CycPoly::one(&field),
        }
    }

    /// `num/den` brought to canonical form.
    pub fn new(num: CycPoly, den: CycPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: CycPoly, den: CycPoly) -> Self {
        if num.is_zero() {
            return CycRat::zero(num.field());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        Self::normalize_leading(num, den)
    }

    fn normalize_leading(num: CycPoly, den: CycPoly) -> Self {
        let lc = den.leading().expect("nonzero denominator");
        if lc.is_one() {
            return CycRat { num, den };
        }
        let inv = lc.inv().expect("nonzero");
        CycRat {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    /// The indeterminate `q`.
    pub fn q(field: &Arc<CyclotomicField>) -> Self {
        CycRat::from_poly(CycPoly::q(field))
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        self.num.field()
    }

    pub fn numer(&self) -> &CycPoly {
        &self.num
    }

    pub fn denom(&self) -> &CycPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value does not depend on `q`.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    /// Polynomial in `q` (denominator 1).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The constant value, if the element does not depend on `q`.
    pub fn as_constant(&self) -> Option<Cyc> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    /// `deg num + deg den`, used to rank pivots.
    pub fn complexity(&self) -> usize {
        self.num.degree().unwrap_or(0) + self.den.degree().unwrap_or(0)
    }

    pub fn inv(&self) -> Result<CycRat> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize_leading(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &CycRat) -> Result<CycRat> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, c: &Cyc) -> CycRat {
        if c.is_zero() {
            return CycRat::zero(self.field());
        }
        CycRat {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn scale_rational(&self, r: &BigRational) -> CycRat {
        if r.is_zero() {
            return CycRat::zero(self.field());
        }
        self.scale(&Cyc::from_rational(self.field(), r.clone()))
    }

    pub fn pow(&self, k: i64) -> Result<CycRat> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        Ok(CycRat {
            num: base.num.pow(k.unsigned_abs() as usize),
            den: base.den.pow(k.unsigned_abs() as usize),
        })
    }

    /// Substitutes `q = q0`. Fails with `PoleAtSpecialization` when the
    /// canonical denominator vanishes there.
    pub fn evaluate(&self, q0: &Cyc) -> Result<Cyc> {
        let den = self.den.eval(q0);
        if den.is_zero() {
            return Err(Error::PoleAtSpecialization { partition: None });
        }
        self.num.eval(q0).checked_div(&den)
    }

    /// JSON form: `{"num": [[r, ...], ...], "den": [[r, ...], ...]}`, outer
    /// index the power of `q`, inner the power-basis coefficients of `ξ`.
    pub fn to_json(&self) -> serde_json::Value {
        let poly = |p: &CycPoly| -> serde_json::Value {
            p.coeffs()
                .iter()
                .map(|c| {
                    c.coeffs()
                        .iter()
                        .map(|r| serde_json::Value::String(rational_to_string(r)))
                        .collect::<Vec<_>>()
                        .into()
                })
                .collect::<Vec<serde_json::Value>>()
                .into()
        };
        serde_json::json!({ "num": poly(&self.num), "den": poly(&self.den) })
    }

    pub fn from_json(field: &Arc<CyclotomicField>, value: &serde_json::Value) -> Result<CycRat> {
        let bad = |reason: &str| Error::Parse {
            input: value.to_string(),
            reason: reason.to_string(),
        };
        let poly = |key: &str| -> Result<CycPoly> {
            let outer = value
                .get(key)
                .and_then(|v| v.as_array())
                .ok_or_else(|| bad(&format!("missing array {key:?}")))?;
            let coeffs = outer
                .iter()
                .map(|inner| {
                    let inner = inner.as_array().ok_or_else(|| bad("coefficient is not an array"))?;
                    if inner.len() != field.degree() {
                        return Err(bad("coefficient vector has the wrong length"));
                    }
                    let rs = inner
                        .iter()
                        .map(|r| {
                            r.as_str()
                                .and_then(super::cyclotomic::parse_rational)
                                .ok_or_else(|| bad("bad rational"))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Cyc::from_coeffs(field, rs))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CycPoly::from_coeffs(field, coeffs))
        };
        CycRat::new(poly("num")?, poly("den")?)
    }
}

impl fmt::Debug for CycRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycRat({self})")
    }
}

impl fmt::Display for CycRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Add<&CycRat> for &CycRat {
    type Output = CycRat;
    fn add(self, rhs: &CycRat) -> CycRat {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return CycRat {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
        }
        if self.den == rhs.den {
            return CycRat::canonical(&self.num + &rhs.num, self.den.clone());
        }
        // Henrici: with g = gcd(b, d), a/b + c/d = (a·d' + c·b')/(b'·d) and
        // only gcd(numerator, g) can remain.
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            if num.is_zero() {
                return CycRat::zero(self.field());
            }
            return CycRat {
                num,
                den: &self.den * &rhs.den,
            };
        }
        let b_red = self.den.exact_div(&g);
        let d_red = rhs.den.exact_div(&g);
        let num = &(&self.num * &d_red) + &(&rhs.num * &b_red);
        if num.is_zero() {
            return CycRat::zero(self.field());
        }
        let den = &b_red * &rhs.den;
        let h = num.gcd(&g);
        if h.is_one() {
            CycRat { num, den }
        } else {
            CycRat {
                num: num.exact_div(&h),
                den: den.exact_div(&h),
            }
        }
    }
}

impl Sub<&CycRat> for &CycRat {
    type Output = CycRat;
    fn sub(self, rhs: &CycRat) -> CycRat {
        self + &(-rhs)
    }
}

impl Neg for &CycRat {
    type Output = CycRat;
    fn neg(self) -> CycRat {
        CycRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul<&CycRat> for &CycRat {
    type Output = CycRat;
    fn mul(self, rhs: &CycRat) -> CycRat {
        if self.is_zero() || rhs.is_zero() {
            return CycRat::zero(self.field());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return CycRat {
                num: &self.num * &rhs.num,
                den: self.den.clone(),
            };
        }
        // Cross-cancel so the product is already reduced.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let num = &self.num.exact_div(&g1) * &rhs.num.exact_div(&g2);
        let den = &self.den.exact_div(&g2) * &rhs.den.exact_div(&g1);
        CycRat { num, den }
    }
}

impl Div<&CycRat> for &CycRat {
    type Output = CycRat;
    fn div(self, rhs: &CycRat) -> CycRat {
        self.checked_div(rhs).expect("division by zero")
    }
}

forward_owned!(CycRat, Add::add, Sub::sub, Mul::mul, Div::div);

impl std::iter::Sum<CycRat> for Option<CycRat> {
    fn sum<I: Iterator<Item = CycRat>>(iter: I) -> Self {
        iter.reduce(|a, b| &a + &b)
    }
}
