//! Integer partitions: the index set for every basis in the crate.
//!
//! A [`Partition`] is stored as its weakly decreasing list of positive parts.
//! Zero parts are never stored. The module provides enumeration of the three
//! families that matter here (all partitions, m-regular partitions, m-reduced
//! partitions), the dominance order, multiset union/difference, and the
//! centralizer constant `z_λ`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{BigUint, One};

use crate::error::{Error, Result};

/// A partition, stored as its weakly decreasing sequence of positive parts.
///
/// The derived ordering compares weight first and then the parts
/// lexicographically, so maps keyed by partitions iterate by degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    weight: usize,
    parts: Vec<usize>,
}

impl Partition {
    /// The empty partition of 0.
    pub fn empty() -> Self {
        Partition::default()
    }

    /// Builds a partition from arbitrary parts: zeros are dropped and the
    /// rest are sorted into decreasing order.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let weight = parts.iter().sum();
        Partition { weight, parts }
    }

    /// Builds a partition from parts that must already be positive and weakly
    /// decreasing.
    pub fn from_decreasing(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        let weight = parts.iter().sum();
        Ok(Partition { weight, parts })
    }

    /// Single-row partition `(n)`; empty when `n == 0`.
    pub fn row(n: usize) -> Self {
        Partition::new(vec![n])
    }

    /// The rectangle `(k^r)`.
    pub fn rectangle(k: usize, r: usize) -> Self {
        Partition::new(vec![k; r])
    }

    /// Builds `(1^{m_1} 2^{m_2} ...)` from `(part, multiplicity)` pairs.
    pub fn from_multiplicities(mults: &[(usize, usize)]) -> Self {
        let mut parts = Vec::new();
        for &(part, count) in mults {
            parts.extend(std::iter::repeat_n(part, count));
        }
        Partition::new(parts)
    }

    /// JSON form: an array of decreasing parts, `[]` for the empty partition.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(self.parts.clone())
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let bad = || Error::Parse {
            input: value.to_string(),
            reason: "expected an array of positive integers".into(),
        };
        let parts = value
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|v| v.as_u64().map(|x| x as usize).ok_or_else(bad))
            .collect::<Result<Vec<_>>>()?;
        Partition::from_decreasing(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `m_i(λ)`, the number of parts equal to `i`.
    pub fn mult(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.iter().filter(|&&p| p == i).count()
    }

    /// Multiplicities as `(part, count)` pairs in increasing part order.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for &p in &self.parts {
            *out.entry(p).or_insert(0) += 1;
        }
        out
    }

    /// No part is divisible by `m`.
    pub fn is_regular(&self, m: usize) -> bool {
        self.parts.iter().all(|&p| p % m != 0)
    }

    /// Every multiplicity is below `m`.
    pub fn is_reduced(&self, m: usize) -> bool {
        self.multiplicities().values().all(|&c| c < m)
    }

    /// All parts distinct.
    pub fn is_strict(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] > w[1])
    }

    /// `λ ∪ μ`: multiplicities add.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            if self.parts[i] >= other.parts[j] {
                parts.push(self.parts[i]);
                i += 1;
            } else {
                parts.push(other.parts[j]);
                j += 1;
            }
        }
        parts.extend_from_slice(&self.parts[i..]);
        parts.extend_from_slice(&other.parts[j..]);
        Partition {
            weight: self.weight + other.weight,
            parts,
        }
    }

    /// `μ ⊂' λ`: every multiplicity of `other` is at most the one in `self`.
    pub fn contains_multiset(&self, other: &Partition) -> bool {
        let mine = self.multiplicities();
        other
            .multiplicities()
            .iter()
            .all(|(p, c)| mine.get(p).copied().unwrap_or(0) >= *c)
    }

    /// `λ \ μ`: multiplicities subtract. Fails unless `μ ⊂' λ`.
    pub fn subtract(&self, other: &Partition) -> Result<Partition> {
        let mut remaining = self.multiplicities();
        for (p, c) in other.multiplicities() {
            match remaining.get_mut(&p) {
                Some(have) if *have >= c => *have -= c,
                _ => {
                    return Err(Error::NotSubPartition {
                        outer: self.clone(),
                        inner: other.clone(),
                    })
                }
            }
        }
        let pairs: Vec<(usize, usize)> = remaining.into_iter().collect();
        Ok(Partition::from_multiplicities(&pairs))
    }

    /// Removes one copy of part `n`, if present.
    pub fn remove_part(&self, n: usize) -> Option<Partition> {
        let pos = self.parts.iter().position(|&p| p == n)?;
        let mut parts = self.parts.clone();
        parts.remove(pos);
        Some(Partition {
            weight: self.weight - n,
            parts,
        })
    }

    /// `z_λ = ∏ i^{m_i} m_i!`.
    pub fn z(&self) -> BigUint {
        let mut out = BigUint::one();
        for (part, count) in self.multiplicities() {
            for k in 1..=count {
                out *= BigUint::from(part) * BigUint::from(k);
            }
        }
        out
    }

    /// `m(λ)! = ∏ m_i!`.
    pub fn mult_factorial(&self) -> BigUint {
        self.multiplicities().values().map(|&c| factorial(c)).product()
    }

    /// All sub-multisets `ν ⊂' λ`, each listed once.
    pub fn sub_multisets(&self) -> Vec<Partition> {
        let mults: Vec<(usize, usize)> = self.multiplicities().into_iter().collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; mults.len()];
        loop {
            let pairs: Vec<(usize, usize)> = mults.iter().zip(&choice).map(|(&(p, _), &c)| (p, c)).collect();
            out.push(Partition::from_multiplicities(&pairs));
            let mut idx = 0;
            loop {
                if idx == mults.len() {
                    return out;
                }
                if choice[idx] < mults[idx].1 {
                    choice[idx] += 1;
                    break;
                }
                choice[idx] = 0;
                idx += 1;
            }
        }
    }

    /// Partial sums of the parts, `λ_1, λ_1 + λ_2, ...`.
    fn partial_sums(&self, len: usize) -> Vec<usize> {
        let mut acc = 0;
        (0..len)
            .map(|i| {
                acc += self.parts.get(i).copied().unwrap_or(0);
                acc
            })
            .collect()
    }

    /// `self ≥ other` in dominance order (equal weights assumed).
    pub fn dominates(&self, other: &Partition) -> bool {
        matches!(
            dominance_compare(self, other),
            Ok(DominanceOrdering::Greater | DominanceOrdering::Equal)
        )
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    /// Parses comma-separated decreasing parts, e.g. `3,1`. The empty string
    /// and `()` denote the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        if trimmed.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = trimmed
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPartition(format!("bad part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::from_decreasing(parts)
    }
}

pub(crate) fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// Which family of partitions to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionClass {
    All,
    /// No part divisible by `m`.
    Regular,
    /// Every multiplicity below `m`.
    Reduced,
}

/// Partitions of `n` in the requested class, in reverse-lexicographic order.
pub fn enumerate(n: usize, class: PartitionClass, m: usize) -> Result<Vec<Partition>> {
    if m < 2 {
        return Err(Error::InvalidModulus(m));
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    generate(n, n, &mut current, &mut out);
    out.retain(|p| match class {
        PartitionClass::All => true,
        PartitionClass::Regular => p.is_regular(m),
        PartitionClass::Reduced => p.is_reduced(m),
    });
    Ok(out)
}

fn generate(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition {
            weight: current.iter().sum(),
            parts: current.clone(),
        });
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        current.push(part);
        generate(remaining - part, part, current, out);
        current.pop();
    }
}

/// All partitions of `n`.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    enumerate(n, PartitionClass::All, 2).expect("m = 2 is valid")
}

/// Sizes of the m-regular and m-reduced families of `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountCheck {
    pub regular_count: usize,
    pub reduced_count: usize,
    pub equal: bool,
}

pub fn count_check(n: usize, m: usize) -> Result<CountCheck> {
    let regular_count = enumerate(n, PartitionClass::Regular, m)?.len();
    let reduced_count = enumerate(n, PartitionClass::Reduced, m)?.len();
    Ok(CountCheck {
        regular_count,
        reduced_count,
        equal: regular_count == reduced_count,
    })
}

/// Result of comparing two partitions of the same weight in dominance order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DominanceOrdering {
    Less,
    Greater,
    Equal,
    Incomparable,
}

/// Compares `λ` and `μ` in dominance order, padding with zeros.
pub fn dominance_compare(lambda: &Partition, mu: &Partition) -> Result<DominanceOrdering> {
    if lambda.weight() != mu.weight() {
        return Err(Error::WeightMismatch {
            left: lambda.weight(),
            right: mu.weight(),
        });
    }
    if lambda == mu {
        return Ok(DominanceOrdering::Equal);
    }
    let len = lambda.len().max(mu.len());
    let (a, b) = (lambda.partial_sums(len), mu.partial_sums(len));
    let mut ge = true;
    let mut le = true;
    for (x, y) in a.iter().zip(&b) {
        match x.cmp(y) {
            Ordering::Less => ge = false,
            Ordering::Greater => le = false,
            Ordering::Equal => {}
        }
    }
    Ok(match (ge, le) {
        (true, _) => DominanceOrdering::Greater,
        (_, true) => DominanceOrdering::Less,
        _ => DominanceOrdering::Incomparable,
    })
}

/// Orders partitions of a common weight so that dominance-greater partitions
/// come first. Ties are broken reverse-lexicographically.
pub fn dominance_linear_extension(ps: &[Partition]) -> Result<Vec<Partition>> {
    if let Some(first) = ps.first() {
        if let Some(bad) = ps.iter().find(|p| p.weight() != first.weight()) {
            return Err(Error::WeightMismatch {
                left: first.weight(),
                right: bad.weight(),
            });
        }
    }
    let mut pending: Vec<Partition> = ps.to_vec();
    pending.sort_by(|a, b| b.parts.cmp(&a.parts));
    pending.dedup();

    // Stable Kahn sort: repeatedly take the first pending element that no
    // other pending element strictly dominates.
    let mut out = Vec::with_capacity(pending.len());
    while !pending.is_empty() {
        let idx = (0..pending.len())
            .find(|&i| {
                !pending.iter().enumerate().any(|(j, other)| {
                    j != i && dominance_compare(other, &pending[i]).ok() == Some(DominanceOrdering::Greater)
                })
            })
            .expect("dominance is acyclic");
        out.push(pending.remove(idx));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            enumerate(4, PartitionClass::Regular, 2).unwrap(),
            vec![p(&[3, 1]), p(&[1, 1, 1, 1])]
        );
        assert_eq!(
            enumerate(4, PartitionClass::Reduced, 2).unwrap(),
            vec![p(&[4]), p(&[3, 1])]
        );
        assert_eq!(enumerate(0, PartitionClass::All, 3).unwrap(), vec![Partition::empty()]);
        assert!(matches!(
            enumerate(3, PartitionClass::All, 1),
            Err(Error::InvalidModulus(1))
        ));
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=10).map(|n| all_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert_eq!(all_partitions(25).len(), 1958);
    }

    #[test]
    fn count_check_examples() {
        let c = count_check(3, 3).unwrap();
        assert_eq!((c.regular_count, c.reduced_count, c.equal), (2, 2, true));
        let c = count_check(4, 2).unwrap();
        assert_eq!((c.regular_count, c.reduced_count, c.equal), (2, 2, true));
        let c = count_check(0, 5).unwrap();
        assert_eq!((c.regular_count, c.reduced_count, c.equal), (1, 1, true));
    }

    #[test]
    fn dominance_examples() {
        use DominanceOrdering::*;
        assert_eq!(dominance_compare(&p(&[4]), &p(&[3, 1])).unwrap(), Greater);
        assert_eq!(
            dominance_compare(&p(&[3, 1, 1, 1]), &p(&[2, 2, 2])).unwrap(),
            Incomparable
        );
        assert_eq!(dominance_compare(&p(&[2, 2]), &p(&[2, 2])).unwrap(), Equal);
        assert_eq!(dominance_compare(&p(&[2, 1, 1]), &p(&[2, 2])).unwrap(), Less);
        assert!(dominance_compare(&p(&[2]), &p(&[2, 1])).is_err());
    }

    #[test]
    fn union_and_subtract() {
        assert_eq!(p(&[2, 1]).union(&p(&[1])), p(&[2, 1, 1]));
        assert_eq!(p(&[2, 2, 1]).subtract(&p(&[2, 1])).unwrap(), p(&[2]));
        assert!(matches!(
            p(&[2, 1]).subtract(&p(&[1, 1])),
            Err(Error::NotSubPartition { .. })
        ));
    }

    #[test]
    fn z_and_mult_factorial() {
        assert_eq!(p(&[3, 1]).z(), BigUint::from(3u32));
        assert_eq!(p(&[2, 2]).z(), BigUint::from(8u32));
        assert_eq!(p(&[1, 1, 1]).z(), BigUint::from(6u32));
        assert_eq!(p(&[2, 2, 2, 1, 1]).mult_factorial(), BigUint::from(12u32));
        assert_eq!(Partition::empty().z(), BigUint::one());
    }

    #[test]
    fn linear_extension_examples() {
        let ext = dominance_linear_extension(&all_partitions(4)).unwrap();
        assert_eq!(
            ext,
            vec![p(&[4]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])]
        );
        assert_eq!(
            dominance_linear_extension(&[p(&[2, 2]), p(&[4])]).unwrap(),
            vec![p(&[4]), p(&[2, 2])]
        );
        assert_eq!(
            dominance_linear_extension(&[Partition::empty()]).unwrap(),
            vec![Partition::empty()]
        );
        assert!(dominance_linear_extension(&[p(&[2]), p(&[1])]).is_err());
    }

    #[test]
    fn linear_extension_respects_dominance() {
        for n in 0..=12 {
            let ext = dominance_linear_extension(&all_partitions(n)).unwrap();
            for (i, a) in ext.iter().enumerate() {
                for b in &ext[i + 1..] {
                    assert_ne!(dominance_compare(a, b).unwrap(), DominanceOrdering::Less);
                }
            }
        }
    }

    #[test]
    fn row_and_rectangle_extremes() {
        // (km) is the top and (k^m) the bottom among partitions of km with at most m parts.
        for m in 2..=6 {
            for k in 1..=12 / m {
                let n = k * m;
                let short: Vec<Partition> = all_partitions(n).into_iter().filter(|p| p.len() <= m).collect();
                for mu in &short {
                    assert!(Partition::row(n).dominates(mu));
                    assert!(mu.dominates(&Partition::rectangle(k, m)));
                }
            }
        }
    }

    #[test]
    fn parse_partitions() {
        assert_eq!("3,1".parse::<Partition>().unwrap(), p(&[3, 1]));
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        assert!("1,3".parse::<Partition>().is_err());
        assert!("3,0".parse::<Partition>().is_err());
    }

    #[test]
    fn sub_multisets_of_small_partition() {
        let subs = p(&[2, 1, 1]).sub_multisets();
        assert_eq!(subs.len(), 6);
        assert!(subs.contains(&Partition::empty()));
        assert!(subs.contains(&p(&[2, 1, 1])));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_partition(max_weight: usize) -> impl Strategy<Value = Partition> {
            (0..=max_weight).prop_flat_map(|n| {
                let ps = all_partitions(n);
                (0..ps.len()).prop_map(move |i| ps[i].clone())
            })
        }

        proptest! {
            #[test]
            fn union_subtract_inverse(a in arb_partition(10), b in arb_partition(10)) {
                prop_assert_eq!(a.union(&b).subtract(&b).unwrap(), a);
            }

            #[test]
            fn dominance_is_a_partial_order(n in 1usize..=10, seed in any::<[usize; 3]>()) {
                let ps = all_partitions(n);
                let a = &ps[seed[0] % ps.len()];
                let b = &ps[seed[1] % ps.len()];
                let c = &ps[seed[2] % ps.len()];
                prop_assert!(a.dominates(a));
                if a.dominates(b) && b.dominates(a) {
                    prop_assert_eq!(a, b);
                }
                if a.dominates(b) && b.dominates(c) {
                    prop_assert!(a.dominates(c));
                }
            }

            #[test]
            fn mult_sums_to_weight(a in arb_partition(14)) {
                let total: usize = a.multiplicities().iter().map(|(p, c)| p * c).sum();
                prop_assert_eq!(total, a.weight());
            }
        }
    }
}
