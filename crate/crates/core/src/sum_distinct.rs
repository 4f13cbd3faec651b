//! Sum-distinct sets and lower bounds for their largest element.
//!
//! A set `{a₁ < … < aₙ}` of positive integers is sum-distinct when its `2ⁿ`
//! subset sums are pairwise different. Three lower bounds on `aₙ` are
//! compared here, all exactly:
//!
//! - Erdős–Moser: `max{2ⁿ/n, 2ⁿ/(4√n)}`
//! - Elkies: `2^{-n}·C(2n, n)`
//! - sinc bound: `σ_n·2^{n-1}` (strict), from the kernel-lattice product bound
//!   applied to `a`, whose nonzero kernel vectors all have max norm `≥ 2`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::exact_sigma::sigma_exact;
use crate::kernel_lattice::{Budget, LinearForm};
use crate::rational::{binomial, cmp_with_sqrt, pow2, to_f64};
use crate::{Error, Result};

/// Hard ceiling on the set size for the subset-sum check.
pub const MAX_ELEMENTS: usize = 30;
/// Default ceiling: `2^26` sums of 8 bytes, about 0.8 GB at peak.
pub const DEFAULT_MAX_ELEMENTS: usize = 26;
/// Largest table row.
pub const MAX_TABLE_N: u32 = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumDistinctSet {
    #[serde(serialize_with = "crate::cli::ser_display_vec")]
    elements: Vec<BigInt>,
}

impl SumDistinctSet {
    /// Validates that the elements are positive and strictly increasing.
    /// Sum-distinctness itself is checked by [`is_sum_distinct`].
    pub fn new(elements: Vec<BigInt>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::invalid("empty set"));
        }
        if !elements[0].is_positive() {
            return Err(Error::invalid("elements must be positive"));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("elements must be strictly increasing"));
        }
        Ok(SumDistinctSet { elements })
    }

    pub fn from_u64(elements: &[u64]) -> Result<Self> {
        Self::new(elements.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn elements(&self) -> &[BigInt] {
        &self.elements
    }

    pub fn n(&self) -> usize {
        self.elements.len()
    }

    pub fn largest(&self) -> &BigInt {
        self.elements.last().expect("nonempty")
    }
}

/// Two disjoint subsets with equal sums.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Collision {
    #[serde(serialize_with = "crate::cli::ser_display_vec")]
    pub left: Vec<BigInt>,
    #[serde(serialize_with = "crate::cli::ser_display_vec")]
    pub right: Vec<BigInt>,
}

impl fmt::Display for Collision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{{{}}}={{{}}}", join(&self.left), join(&self.right))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumDistinctCheck {
    pub sum_distinct: bool,
    pub witness: Option<Collision>,
}

trait SubsetSum: Copy + Ord + Add<Output = Self> + Sub<Output = Self> + Zero {
    fn from_big(x: &BigInt) -> Option<Self>;
}

impl SubsetSum for u64 {
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_u64()
    }
}

impl SubsetSum for u128 {
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_u128()
    }
}

/// All `2ⁿ` subset sums distinct?
///
/// Sums of growing prefixes are kept sorted; adding `aₖ` merges the list with
/// its shift by `aₖ`, and an equal pair during the merge is a collision. The
/// first collision therefore lies in the shortest non-sum-distinct prefix.
/// Only sums are stored; the two colliding subsets are recovered afterwards,
/// which is unambiguous because the preceding prefix is sum-distinct.
pub fn is_sum_distinct(s: &SumDistinctSet, max_elements: usize) -> Result<SumDistinctCheck> {
    let limit = max_elements.min(MAX_ELEMENTS);
    if s.n() > limit {
        return Err(Error::limit(format!(
            "{} elements exceed the subset-sum limit of {limit}",
            s.n()
        )));
    }
    let total: BigInt = s.elements.iter().sum();
    if total.to_u64().is_some() {
        check_with::<u64>(s)
    } else if total.to_u128().is_some() {
        check_with::<u128>(s)
    } else {
        Err(Error::limit("subset sums exceed 128 bits"))
    }
}

fn check_with<T: SubsetSum>(s: &SumDistinctSet) -> Result<SumDistinctCheck> {
    let elems: Vec<T> = s
        .elements
        .iter()
        .map(|e| T::from_big(e).expect("total fits, so each element fits"))
        .collect();
    let mut sums: Vec<T> = vec![T::zero()];
    for (k, &a) in elems.iter().enumerate() {
        let mut merged = Vec::with_capacity(sums.len() * 2);
        let (mut i, mut j) = (0, 0);
        while i < sums.len() || j < sums.len() {
            let shifted = (j < sums.len()).then(|| sums[j] + a);
            match (sums.get(i), shifted) {
                (Some(&x), Some(y)) if x == y => {
                    let witness = recover_collision(s, &elems[..k], x, y - a);
                    return Ok(SumDistinctCheck {
                        sum_distinct: false,
                        witness: Some(witness),
                    });
                }
                (Some(&x), Some(y)) if x < y => {
                    merged.push(x);
                    i += 1;
                }
                (Some(_), Some(y)) | (None, Some(y)) => {
                    merged.push(y);
                    j += 1;
                }
                (Some(&x), None) => {
                    merged.push(x);
                    i += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        sums = merged;
    }
    Ok(SumDistinctCheck {
        sum_distinct: true,
        witness: None,
    })
}

/// The prefix `elems` is sum-distinct; subset `A` sums to `old` and subset
/// `B` to `old - a_k`, so `A` and `B ∪ {a_k}` collide.
fn recover_collision<T: SubsetSum>(s: &SumDistinctSet, elems: &[T], old: T, shifted_from: T) -> Collision {
    let k = elems.len();
    let a_mask = find_subset(elems, old).expect("sum taken from the prefix list");
    let b_mask = find_subset(elems, shifted_from).expect("sum taken from the prefix list") | (1u64 << k);
    let common = a_mask & b_mask;
    let pick = |mask: u64| -> Vec<BigInt> {
        (0..=k)
            .filter(|i| (mask & !common) >> i & 1 == 1)
            .map(|i| s.elements[i].clone())
            .collect()
    };
    Collision {
        left: pick(a_mask),
        right: pick(b_mask),
    }
}

/// Bitmask of a subset of `elems` (ascending) with the given sum.
fn find_subset<T: SubsetSum>(elems: &[T], target: T) -> Option<u64> {
    // prefix[i] = a_0 + … + a_{i-1}
    let mut prefix = vec![T::zero()];
    for &e in elems {
        let last = *prefix.last().expect("nonempty");
        prefix.push(last + e);
    }
    fn go<T: SubsetSum>(elems: &[T], prefix: &[T], i: usize, rem: T, mask: u64) -> Option<u64> {
        if rem.is_zero() {
            return Some(mask);
        }
        if i == 0 || rem > prefix[i] {
            return None;
        }
        let e = elems[i - 1];
        if e <= rem {
            if let Some(m) = go(elems, prefix, i - 1, rem - e, mask | 1 << (i - 1)) {
                return Some(m);
            }
        }
        go(elems, prefix, i - 1, rem, mask)
    }
    go(elems, &prefix, elems.len(), target, 0)
}

/// `σ_n·2^{n-1}`; every sum-distinct set of size `n` has `aₙ` strictly above it.
pub fn lower_bound_new(n: u32) -> Result<BigRational> {
    Ok(sigma_exact(n)? * BigRational::from_integer(pow2(n - 1)))
}

/// `2^{-n}·C(2n, n)`.
pub fn lower_bound_elkies(n: u32) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    Ok(BigRational::new(binomial(2 * n, n), pow2(n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErdosMoserTerm {
    OverN,
    OverSqrtN,
    Equal,
}

/// `max{2ⁿ/n, 2ⁿ/(4√n)}` with the maximum decided exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErdosMoserBound {
    pub n: u32,
    /// `2ⁿ/n`
    #[serde(serialize_with = "crate::cli::ser_rational")]
    pub over_n: BigRational,
    /// `2ⁿ/4`, to be divided by `√n`.
    #[serde(serialize_with = "crate::cli::ser_rational")]
    pub over_sqrt_coefficient: BigRational,
    pub larger: ErdosMoserTerm,
}

impl ErdosMoserBound {
    /// Compares a non-negative rational with the bound, exactly.
    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        let n = BigInt::from(self.n);
        let by_n = q.cmp(&self.over_n);
        // c/√n = (c/n)·√n
        let per_n = &self.over_sqrt_coefficient / BigRational::from_integer(n.clone());
        let by_sqrt = cmp_with_sqrt(q, &per_n, &n);
        by_n.min(by_sqrt)
    }

    pub fn to_f64(&self) -> f64 {
        let a = to_f64(&self.over_n);
        let b = to_f64(&self.over_sqrt_coefficient) / f64::from(self.n).sqrt();
        a.max(b)
    }
}

pub fn lower_bound_erdos_moser(n: u32) -> Result<ErdosMoserBound> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    let two_n = BigRational::from_integer(pow2(n));
    let over_n = &two_n / BigRational::from_integer(n.into());
    let over_sqrt_coefficient = &two_n / BigRational::from_integer(4.into());
    // 2ⁿ/n vs 2ⁿ/(4√n)  ⟺  4√n vs n  ⟺  16n vs n²
    let larger = match (16 * u64::from(n)).cmp(&(u64::from(n) * u64::from(n))) {
        Ordering::Greater => ErdosMoserTerm::OverN,
        Ordering::Less => ErdosMoserTerm::OverSqrtN,
        Ordering::Equal => ErdosMoserTerm::Equal,
    };
    Ok(ErdosMoserBound {
        n,
        over_n,
        over_sqrt_coefficient,
        larger,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BestBound {
    New,
    Elkies,
    ErdosMoser,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsRow {
    pub n: u32,
    #[serde(serialize_with = "crate::cli::ser_rational")]
    pub sigma: BigRational,
    #[serde(serialize_with = "crate::cli::ser_rational")]
    pub new_bound: BigRational,
    /// Smallest `aₙ` allowed by the strict sinc bound.
    #[serde(serialize_with = "crate::cli::ser_display")]
    pub new_bound_integer: BigInt,
    #[serde(serialize_with = "crate::cli::ser_rational")]
    pub elkies: BigRational,
    pub erdos_moser: ErdosMoserBound,
    /// Largest of the three; ties go to the earlier variant.
    pub best: BestBound,
}

impl BoundsRow {
    pub fn new(n: u32) -> Result<Self> {
        let sigma = sigma_exact(n)?;
        let new_bound = &sigma * BigRational::from_integer(pow2(n - 1));
        let new_bound_integer = new_bound.floor().to_integer() + 1;
        let elkies = lower_bound_elkies(n)?;
        let erdos_moser = lower_bound_erdos_moser(n)?;
        let best = if new_bound >= elkies && erdos_moser.cmp_rational(&new_bound) != Ordering::Less {
            BestBound::New
        } else if erdos_moser.cmp_rational(&elkies) != Ordering::Less {
            BestBound::Elkies
        } else {
            BestBound::ErdosMoser
        };
        Ok(BoundsRow {
            n,
            sigma,
            new_bound,
            new_bound_integer,
            elkies,
            erdos_moser,
            best,
        })
    }

    /// Smallest `aₙ` allowed by the Elkies bound.
    pub fn elkies_integer(&self) -> BigInt {
        self.elkies.floor().to_integer() + 1
    }
}

/// Rows `n_from..=n_to`, computed in parallel and returned in order.
pub fn bounds_table(n_from: u32, n_to: u32) -> Result<Vec<BoundsRow>> {
    if n_from < 1 || n_from > n_to || n_to > MAX_TABLE_N {
        return Err(Error::invalid(format!(
            "need 1 <= from <= to <= {MAX_TABLE_N}, got {n_from}..{n_to}"
        )));
    }
    (n_from..=n_to).into_par_iter().map(BoundsRow::new).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SetCertificate {
    pub n: usize,
    #[serde(serialize_with = "crate::cli::ser_display")]
    pub largest: BigInt,
    #[serde(serialize_with = "crate::cli::ser_rational")]
    pub bound: BigRational,
    /// `aₙ > σ_n·2^{n-1}`
    pub bound_holds: bool,
    /// First successive minimum of the kernel lattice of `a`, when the
    /// enumeration fits the budget (`n ≥ 2` only).
    pub lambda1: Option<u64>,
}

impl SetCertificate {
    /// The bound holds and, where computed, `λ₁ ≥ 2`.
    pub fn passes(&self) -> bool {
        self.bound_holds && self.lambda1.is_none_or(|l| l >= 2)
    }
}

/// Checks the strict lower bound for a sum-distinct set and cross-checks
/// that the kernel lattice of `a` has no vector of max norm 1.
pub fn certify_set(s: &SumDistinctSet, budget: Budget) -> Result<SetCertificate> {
    let check = is_sum_distinct(s, DEFAULT_MAX_ELEMENTS)?;
    if !check.sum_distinct {
        let w = check.witness.expect("collision carries a witness");
        return Err(Error::invalid(format!("set is not sum-distinct: {w}")));
    }
    let n = s.n();
    let bound = lower_bound_new(n as u32)?;
    let bound_holds = BigRational::from_integer(s.largest().clone()) > bound;
    let lambda1 = if n >= 2 {
        let form = LinearForm::new(s.elements.clone())?;
        crate::kernel_lattice::first_minimum(&form, budget).ok()
    } else {
        None
    };
    Ok(SetCertificate {
        n,
        largest: s.largest().clone(),
        bound,
        bound_holds,
        lambda1,
    })
}

/// `{1, 2, 4, …, 2^{n-1}}`
pub fn powers_of_two(n: usize) -> SumDistinctSet {
    SumDistinctSet::new((0..n).map(|k| BigInt::one() << k).collect()).expect("valid set")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[u64]) -> SumDistinctSet {
        SumDistinctSet::from_u64(e).unwrap()
    }

    fn ints(e: &[u64]) -> Vec<BigInt> {
        e.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn validation() {
        assert!(SumDistinctSet::from_u64(&[3, 1, 2]).is_err());
        assert!(SumDistinctSet::from_u64(&[0, 1]).is_err());
        assert!(SumDistinctSet::from_u64(&[1, 1]).is_err());
        assert!(SumDistinctSet::from_u64(&[]).is_err());
    }

    #[test]
    fn checker_examples() {
        assert!(is_sum_distinct(&set(&[1, 2, 4, 8]), 30).unwrap().sum_distinct);
        let r = is_sum_distinct(&set(&[1, 2, 3]), 30).unwrap();
        assert!(!r.sum_distinct);
        let w = r.witness.unwrap();
        assert_eq!((w.left, w.right), (ints(&[1, 2]), ints(&[3])));
        let w = is_sum_distinct(&set(&[1, 2, 3, 5, 8]), 30).unwrap().witness.unwrap();
        assert_eq!(w.to_string(), "{1,2}={3}");
    }

    #[test]
    fn witness_removes_common_elements() {
        // {3,5,6}: 3+6 ≠ … ; first collision in {1,4,6,7}? 1+6 = 7
        let w = is_sum_distinct(&set(&[1, 4, 6, 7]), 30).unwrap().witness.unwrap();
        let l: BigInt = w.left.iter().sum();
        let r: BigInt = w.right.iter().sum();
        assert_eq!(l, r);
        assert!(w.left.iter().all(|x| !w.right.contains(x)));
    }

    #[test]
    fn size_limit() {
        assert!(matches!(
            is_sum_distinct(&powers_of_two(12), 10),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn large_elements_use_wide_sums() {
        let base: BigInt = BigInt::one() << 70;
        let s = SumDistinctSet::new(vec![base.clone(), &base * 2, &base * 4]).unwrap();
        assert!(is_sum_distinct(&s, 30).unwrap().sum_distinct);
        let s = SumDistinctSet::new(vec![base.clone(), &base * 2, &base * 3]).unwrap();
        assert!(!is_sum_distinct(&s, 30).unwrap().sum_distinct);
    }

    #[test]
    fn bound_values() {
        assert_eq!(lower_bound_new(1).unwrap(), rat(1, 1));
        assert_eq!(lower_bound_new(5).unwrap(), rat(115, 12));
        let nine = lower_bound_new(9).unwrap();
        assert!(nine > rat(115, 1) && nine < rat(116, 1));
        assert_eq!(lower_bound_elkies(9).unwrap(), rat(12155, 128));
        assert_eq!(lower_bound_elkies(1).unwrap(), rat(1, 1));
        let em = lower_bound_erdos_moser(4).unwrap();
        assert_eq!(em.over_n, rat(4, 1));
        assert_eq!(em.larger, ErdosMoserTerm::OverN);
        assert_eq!(em.cmp_rational(&rat(4, 1)), Ordering::Equal);
        assert_eq!(lower_bound_erdos_moser(16).unwrap().larger, ErdosMoserTerm::Equal);
        assert_eq!(lower_bound_erdos_moser(17).unwrap().larger, ErdosMoserTerm::OverSqrtN);
    }

    #[test]
    fn erdos_moser_sqrt_comparison() {
        // n = 25: 2^25/(4·5) is the larger term.
        let em = lower_bound_erdos_moser(25).unwrap();
        let value = rat(1 << 25, 20);
        assert_eq!(em.cmp_rational(&value), Ordering::Equal);
        assert_eq!(em.cmp_rational(&(value.clone() + rat(1, 1000))), Ordering::Greater);
        assert_eq!(em.cmp_rational(&rat(1 << 25, 25)), Ordering::Less);
    }

    #[test]
    fn row_nine() {
        let row = BoundsRow::new(9).unwrap();
        assert_eq!(row.new_bound_integer, BigInt::from(116));
        assert_eq!(row.elkies_integer(), BigInt::from(95));
        assert_eq!(row.best, BestBound::New);
    }

    #[test]
    fn table_range_checks() {
        assert!(bounds_table(2, 1).is_err());
        assert!(bounds_table(0, 3).is_err());
        assert!(bounds_table(1, 2001).is_err());
        let rows = bounds_table(10, 20).unwrap();
        assert_eq!(rows.len(), 11);
        assert!(rows.iter().all(|r| r.new_bound > r.elkies));
    }

    #[test]
    fn certify_examples() {
        let c = certify_set(&set(&[1, 2, 4, 8]), Budget::default()).unwrap();
        assert!(c.bound_holds);
        assert_eq!(c.bound, rat(16, 3));
        let c = certify_set(&set(&[6, 9, 11, 12, 13]), Budget::default()).unwrap();
        assert!(c.passes());
        assert!(c.lambda1.unwrap() >= 2);
        assert!(certify_set(&set(&[1, 2, 3]), Budget::default()).is_err());
    }

    #[test]
    fn six_element_set() {
        let s = set(&[20, 31, 37, 40, 42, 43]);
        let check = is_sum_distinct(&s, 30).unwrap();
        if check.sum_distinct {
            assert!(certify_set(&s, Budget::default()).unwrap().passes());
        } else {
            assert!(certify_set(&s, Budget::default()).is_err());
        }
    }
}
