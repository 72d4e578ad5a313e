//! The cyclotomic field `Q(ξ_m) = Q[x]/Φ_m(x)`.
//!
//! Elements are coefficient vectors of length `φ(m)` over the power basis
//! `1, ξ, ..., ξ^{φ(m)-1}`. Reduction modulo `Φ_m` is done with a
//! precomputed table of `x^k mod Φ_m` for `φ(m) ≤ k < 2φ(m)`, and inverses
//! come from the extended Euclidean algorithm over `Q[x]`.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense polynomial over `Q`, ascending powers, trailing zeros trimmed.
type QPoly = Vec<BigRational>;

fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn qpoly_mul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn qpoly_sub(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let mut out: QPoly = (0..a.len().max(b.len()))
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

fn qpoly_divrem(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut rem: QPoly = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = b.last().unwrap().recip();
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let factor = rem.last().unwrap() * &lead_inv;
        for (i, c) in b.iter().enumerate() {
            rem[shift + i] -= &factor * c;
        }
        quot[shift] = factor;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

/// `Φ_m` by dividing `x^m - 1` by `Φ_d` for every proper divisor `d` of `m`.
fn cyclotomic_polynomial(m: usize, memo: &mut HashMap<usize, QPoly>) -> QPoly {
    if let Some(p) = memo.get(&m) {
        return p.clone();
    }
    let mut poly = vec![BigRational::zero(); m + 1];
    poly[0] = -BigRational::one();
    poly[m] = BigRational::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d, memo);
            let (q, r) = qpoly_divrem(&poly, &phi_d);
            debug_assert!(r.is_empty());
            poly = q;
        }
    }
    memo.insert(m, poly.clone());
    poly
}

/// Descriptor for `Q(ξ_m)`; shared by every element through an `Arc`.
#[derive(Debug)]
pub struct CyclotomicField {
    m: usize,
    degree: usize,
    /// Monic `Φ_m`, ascending.
    modulus: QPoly,
    /// `x^{degree + k} mod Φ_m` for `k < degree`.
    reductions: Vec<QPoly>,
    /// `ξ^k` for `0 ≤ k < m`, as dense vectors of length `degree`.
    xi_powers: Vec<Vec<BigRational>>,
}

fn field_cache() -> &'static Mutex<HashMap<usize, Arc<CyclotomicField>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CyclotomicField>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl CyclotomicField {
    /// The field for conductor `m ≥ 2`, built once per `m` and cached.
    pub fn get(m: usize) -> Result<Arc<CyclotomicField>> {
        if m < 2 {
            return Err(Error::InvalidModulus(m));
        }
        let mut cache = field_cache().lock().expect("field cache poisoned");
        if let Some(f) = cache.get(&m) {
            return Ok(f.clone());
        }
        let field = Arc::new(Self::build(m));
        cache.insert(m, field.clone());
        Ok(field)
    }

    fn build(m: usize) -> Self {
        let modulus = cyclotomic_polynomial(m, &mut HashMap::new());
        let degree = modulus.len() - 1;
        let reduce_full = |p: &[BigRational]| -> Vec<BigRational> {
            let (_, r) = qpoly_divrem(p, &modulus);
            let mut dense = r;
            dense.resize(degree, BigRational::zero());
            dense
        };
        let reductions = (0..degree)
            .map(|k| {
                let mut mono = vec![BigRational::zero(); degree + k + 1];
                mono[degree + k] = BigRational::one();
                reduce_full(&mono)
            })
            .collect();
        let xi_powers = (0..m)
            .map(|k| {
                let mut mono = vec![BigRational::zero(); k + 1];
                mono[k] = BigRational::one();
                reduce_full(&mono)
            })
            .collect();
        CyclotomicField {
            m,
            degree,
            modulus,
            reductions,
            xi_powers,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `φ(m)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of `Φ_m`, ascending.
    pub fn modulus(&self) -> &[BigRational] {
        &self.modulus
    }
}

/// An element of `Q(ξ_m)`.
#[derive(Clone)]
pub struct Cyc {
    field: Arc<CyclotomicField>,
    coeffs: Vec<BigRational>,
}

impl Cyc {
    pub fn zero(field: &Arc<CyclotomicField>) -> Cyc {
        Cyc {
            field: field.clone(),
            coeffs: vec![BigRational::zero(); field.degree],
        }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Cyc {
        Cyc::from_rational(field, BigRational::one())
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, r: BigRational) -> Cyc {
        let mut c = Cyc::zero(field);
        c.coeffs[0] = r;
        c
    }

    pub fn from_int(field: &Arc<CyclotomicField>, n: i64) -> Cyc {
        Cyc::from_rational(field, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(field: &Arc<CyclotomicField>, num: i64, den: i64) -> Cyc {
        Cyc::from_rational(field, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Builds an element from power-basis coefficients, reducing modulo
    /// `Φ_m` if more than `φ(m)` coefficients are supplied.
    pub fn from_coeffs(field: &Arc<CyclotomicField>, coeffs: Vec<BigRational>) -> Cyc {
        let mut out = Cyc::zero(field);
        for (k, c) in coeffs.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < field.degree {
                out.coeffs[k] += c;
            } else {
                out += &(Cyc::xi_pow(field, k as i64) * &Cyc::from_rational(field, c));
            }
        }
        out
    }

    /// `ξ_m^k` for any integer `k`.
    pub fn xi_pow(field: &Arc<CyclotomicField>, k: i64) -> Cyc {
        let idx = k.rem_euclid(field.m as i64) as usize;
        Cyc {
            field: field.clone(),
            coeffs: field.xi_powers[idx].clone(),
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.field.m
    }

    /// Power-basis coefficients, length `φ(m)`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    fn check_field(&self, other: &Cyc) {
        assert_eq!(
            self.field.m, other.field.m,
            "cyclotomic elements over different conductors"
        );
    }

    pub fn scale(&self, r: &BigRational) -> Cyc {
        Cyc {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm modulo `Φ_m`.
    pub fn inv(&self) -> Result<Cyc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Cyc::from_rational(&self.field, r.recip()));
        }
        let mut a: QPoly = self.field.modulus.clone();
        let mut b: QPoly = self.coeffs.clone();
        trim(&mut b);
        // Invariant: s_a * self ≡ a and s_b * self ≡ b (mod Φ_m).
        let mut s_a: QPoly = Vec::new();
        let mut s_b: QPoly = vec![BigRational::one()];
        while b.len() > 1 {
            let (q, r) = qpoly_divrem(&a, &b);
            let s_r = qpoly_sub(&s_a, &qpoly_mul(&q, &s_b));
            a = std::mem::replace(&mut b, r);
            s_a = std::mem::replace(&mut s_b, s_r);
        }
        // b is a nonzero constant since Φ_m is irreducible.
        let scale = b[0].recip();
        let coeffs: Vec<BigRational> = s_b.into_iter().map(|c| c * &scale).collect();
        Ok(Cyc::from_coeffs(&self.field, coeffs))
    }

    pub fn checked_div(&self, other: &Cyc) -> Result<Cyc> {
        Ok(self * &other.inv()?)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, k: i64) -> Result<Cyc> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Cyc::one(&self.field);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Parses literals such as `3`, `-1/2`, `xi`, `xi^2`, `1 - 2/3*xi^3`.
    pub fn parse(field: &Arc<CyclotomicField>, input: &str) -> Result<Cyc> {
        let err = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty literal"));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        let mut prev = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && prev != Some('^') {
                if !current.is_empty() {
                    terms.push((negative, std::mem::take(&mut current)));
                } else if prev.is_some() {
                    return Err(err("dangling sign"));
                }
                negative = ch == '-';
            } else {
                current.push(ch);
            }
            prev = Some(ch);
        }
        if current.is_empty() {
            return Err(err("dangling sign"));
        }
        terms.push((negative, current));

        let mut out = Cyc::zero(field);
        for (negative, term) in terms {
            let (coeff_str, power) = match term.find("xi") {
                Some(pos) => {
                    let head = term[..pos].trim_end_matches('*');
                    let tail = &term[pos + 2..];
                    let power: i64 = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .ok_or_else(|| err("expected ^ after xi"))?
                            .parse()
                            .map_err(|_| err("bad exponent"))?
                    };
                    (head, power)
                }
                None => (term.as_str(), 0),
            };
            let coeff = if coeff_str.is_empty() {
                BigRational::one()
            } else {
                parse_rational(coeff_str).ok_or_else(|| err("bad rational coefficient"))?
            };
            let coeff = if negative { -coeff } else { coeff };
            out += &Cyc::xi_pow(field, power).scale(&coeff);
        }
        Ok(out)
    }
}

/// Parses `a` or `a/b` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let num: BigInt = a.trim().parse().ok()?;
            let den: BigInt = b.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(BigRational::new(num, den))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Renders a rational as `a/b`, always with an explicit positive denominator.
pub fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        self.field.m == other.field.m && self.coeffs == other.coeffs
    }
}

impl Eq for Cyc {}

impl Hash for Cyc {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.m.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc[m={}]({})", self.field.m, self)
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let abs = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            first = false;
            match (k, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (_, true) => {}
                (_, false) => write!(f, "{abs}*")?,
            }
            match k {
                0 => {}
                1 => write!(f, "xi")?,
                _ => write!(f, "xi^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add<&Cyc> for &Cyc {
    type Output = Cyc;
    fn add(self, rhs: &Cyc) -> Cyc {
        self.check_field(rhs);
        Cyc {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl AddAssign<&Cyc> for Cyc {
    fn add_assign(&mut self, rhs: &Cyc) {
        self.check_field(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub<&Cyc> for &Cyc {
    type Output = Cyc;
    fn sub(self, rhs: &Cyc) -> Cyc {
        self.check_field(rhs);
        Cyc {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&Cyc> for &Cyc {
    type Output = Cyc;
    fn mul(self, rhs: &Cyc) -> Cyc {
        self.check_field(rhs);
        let d = self.field.degree;
        if d == 1 {
            return Cyc {
                field: self.field.clone(),
                coeffs: vec![&self.coeffs[0] * &rhs.coeffs[0]],
            };
        }
        let mut full = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    full[i + j] += a * b;
                }
            }
        }
        let mut coeffs: Vec<BigRational> = full[..d].to_vec();
        for (k, c) in full[d..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, r) in coeffs.iter_mut().zip(&self.field.reductions[k]) {
                if !r.is_zero() {
                    *slot += c * r;
                }
            }
        }
        Cyc {
            field: self.field.clone(),
            coeffs,
        }
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident :: $method:ident),*) => {
        $(
            impl $tr<$ty> for $ty {
                type Output = $ty;
                fn $method(self, rhs: $ty) -> $ty {
                    $tr::$method(&self, &rhs)
                }
            }
            impl $tr<&$ty> for $ty {
                type Output = $ty;
                fn $method(self, rhs: &$ty) -> $ty {
                    $tr::$method(&self, rhs)
                }
            }
        )*
        impl Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                -&self
            }
        }
    };
}
pub(crate) use forward_owned;

forward_owned!(Cyc, Add::add, Sub::sub, Mul::mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field(m: usize) -> Arc<CyclotomicField> {
        CyclotomicField::get(m).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        let coeffs = |m: usize| -> Vec<i64> {
            field(m)
                .modulus()
                .iter()
                .map(|c| c.to_integer().try_into().unwrap())
                .collect()
        };
        assert_eq!(coeffs(2), vec![1, 1]);
        assert_eq!(coeffs(3), vec![1, 1, 1]);
        assert_eq!(coeffs(4), vec![1, 0, 1]);
        assert_eq!(coeffs(6), vec![1, -1, 1]);
        assert_eq!(coeffs(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(field(5).degree(), 4);
        assert!(CyclotomicField::get(1).is_err());
    }

    #[test]
    fn arithmetic_examples() {
        let f2 = field(2);
        let xi = Cyc::xi_pow(&f2, 1);
        assert!((&xi * &xi).is_one());
        assert_eq!(xi, Cyc::from_int(&f2, -1));

        let f3 = field(3);
        let xi = Cyc::xi_pow(&f3, 1);
        let sum = &(&Cyc::one(&f3) + &xi) + &(&xi * &xi);
        assert!(sum.is_zero());

        let f4 = field(4);
        let xi = Cyc::xi_pow(&f4, 1);
        assert!(xi.checked_div(&xi).unwrap().is_one());
        assert!(matches!(xi.checked_div(&Cyc::zero(&f4)), Err(Error::DivisionByZero)));
    }

    #[test]
    fn xi_has_order_m() {
        for m in 2..=12 {
            let f = field(m);
            let xi = Cyc::xi_pow(&f, 1);
            assert!(xi.pow(m as i64).unwrap().is_one());
            for k in 1..m {
                assert!(!xi.pow(k as i64).unwrap().is_one(), "m={m} k={k}");
            }
            assert_eq!(xi.pow(-1).unwrap(), Cyc::xi_pow(&f, m as i64 - 1));
        }
    }

    #[test]
    fn root_of_unity_sums() {
        // Σ_{i=1}^m ξ^{in} is 0 unless m | n, in which case it is m.
        for m in 2..=6 {
            let f = field(m);
            for n in 1..=3 * m {
                let mut s = Cyc::zero(&f);
                for i in 1..=m {
                    s += &Cyc::xi_pow(&f, (i * n) as i64);
                }
                if n % m == 0 {
                    assert_eq!(s, Cyc::from_int(&f, m as i64));
                } else {
                    assert!(s.is_zero());
                }
            }
        }
    }

    #[test]
    fn parse_literals() {
        let f = field(3);
        assert_eq!(Cyc::parse(&f, "3").unwrap(), Cyc::from_int(&f, 3));
        assert_eq!(Cyc::parse(&f, "1/2").unwrap(), Cyc::from_ratio(&f, 1, 2));
        assert_eq!(Cyc::parse(&f, "xi^2").unwrap(), Cyc::xi_pow(&f, 2));
        assert_eq!(Cyc::parse(&f, "xi^-1").unwrap(), Cyc::xi_pow(&f, 2));
        assert!(Cyc::parse(&f, "1 + xi + xi^2").unwrap().is_zero());
        assert_eq!(
            Cyc::parse(&f, "-2/3*xi").unwrap(),
            Cyc::xi_pow(&f, 1).scale(&BigRational::new((-2).into(), 3.into()))
        );
        assert!(Cyc::parse(&f, "").is_err());
        assert!(Cyc::parse(&f, "1+").is_err());
        assert!(Cyc::parse(&f, "zz").is_err());
    }

    #[test]
    fn display_roundtrip() {
        let f = field(5);
        let x = Cyc::parse(&f, "1/2 - xi + 3*xi^3").unwrap();
        assert_eq!(x.to_string(), "1/2 - xi + 3*xi^3");
        assert_eq!(Cyc::parse(&f, &x.to_string()).unwrap(), x);
        assert_eq!(Cyc::zero(&f).to_string(), "0");
    }

    fn arb_cyc(m: usize) -> impl Strategy<Value = Cyc> {
        let d = field(m).degree();
        proptest::collection::vec((-6i64..=6, 1i64..=4), d).prop_map(move |cs| {
            let f = field(m);
            Cyc::from_coeffs(
                &f,
                cs.into_iter()
                    .map(|(a, b)| BigRational::new(a.into(), b.into()))
                    .collect(),
            )
        })
    }

    fn arb_triple(m: usize) -> impl Strategy<Value = (Cyc, Cyc, Cyc)> {
        (arb_cyc(m), arb_cyc(m), arb_cyc(m))
    }

    fn check_axioms(a: &Cyc, b: &Cyc, c: &Cyc) -> std::result::Result<(), TestCaseError> {
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(&(a + b) + c, a + &(b + c));
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert_eq!(a * b, b * a);
        if !a.is_zero() {
            prop_assert!((a * &a.inv().unwrap()).is_one());
        }
        prop_assert!((a - &a.clone()).is_zero());
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn field_axioms_m2((a, b, c) in arb_triple(2)) { check_axioms(&a, &b, &c)?; }
        #[test]
        fn field_axioms_m3((a, b, c) in arb_triple(3)) { check_axioms(&a, &b, &c)?; }
        #[test]
        fn field_axioms_m4((a, b, c) in arb_triple(4)) { check_axioms(&a, &b, &c)?; }
        #[test]
        fn field_axioms_m5((a, b, c) in arb_triple(5)) { check_axioms(&a, &b, &c)?; }
    }
}
