//! The kernel lattice `Λ = {x ∈ ℤⁿ : a·x = 0}` of a linear form and its
//! successive minima in the maximum norm.
//!
//! After dividing `a` by its content, `Λ` has rank `n - 1` and covolume
//! `|a|`, so any basis `B` satisfies `det(B·Bᵀ) = Σaᵢ²`. For `n ≥ 5` the
//! product of the max-norm successive minima is below `‖a‖_∞ / σ_n`; the
//! solvers here produce witnesses and check that bound exactly.

mod brute;
mod enumerate;
pub mod linalg;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

pub use brute::{brute_force_minima, minima_from_shells, Shell, MAX_BOX_POINTS};
pub use enumerate::Budget;

use crate::exact_sigma::{known_siegel_constant, sigma_exact};
use crate::{Error, Result};
use enumerate::ShellSearch;
use linalg::{gram_determinant, lll_reduce, IndependentSet};

/// Integer coefficient vector `a` of `L(x) = a·x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearForm {
    #[serde(serialize_with = "crate::cli::ser_display_vec")]
    coeffs: Vec<BigInt>,
    #[serde(serialize_with = "crate::cli::ser_display")]
    max_norm: BigInt,
    #[serde(serialize_with = "crate::cli::ser_display")]
    euclidean_norm_sq: BigInt,
    #[serde(serialize_with = "crate::cli::ser_display")]
    gcd: BigInt,
}

impl LinearForm {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::invalid(format!(
                "a linear form needs at least 2 coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::invalid("linear form must be nonzero"));
        }
        let max_norm = coeffs.iter().map(Signed::abs).max().expect("nonempty");
        let euclidean_norm_sq = coeffs.iter().map(|c| c * c).sum();
        let gcd = coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        Ok(LinearForm {
            coeffs,
            max_norm,
            euclidean_norm_sq,
            gcd,
        })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn max_norm(&self) -> &BigInt {
        &self.max_norm
    }

    pub fn euclidean_norm_sq(&self) -> &BigInt {
        &self.euclidean_norm_sq
    }

    pub fn gcd(&self) -> &BigInt {
        &self.gcd
    }

    pub fn is_normalized(&self) -> bool {
        self.gcd.is_one()
    }

    /// `a·x` in exact arithmetic.
    pub fn eval(&self, x: &[i64]) -> BigInt {
        assert_eq!(x.len(), self.n(), "dimension mismatch");
        self.coeffs.iter().zip(x).map(|(c, &v)| c * v).sum()
    }

    pub(crate) fn coeffs_i64(&self) -> Result<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| {
                c.to_i64()
                    .ok_or_else(|| Error::limit("coefficients exceed the 64-bit enumeration range"))
            })
            .collect()
    }
}

/// Divides `a` by the gcd of its entries. Idempotent.
pub fn normalize(a: &LinearForm) -> LinearForm {
    if a.is_normalized() {
        return a.clone();
    }
    LinearForm::new(a.coeffs.iter().map(|c| c / &a.gcd).collect()).expect("nonzero form stays nonzero")
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelBasis {
    /// The normalized form.
    pub form: LinearForm,
    #[serde(serialize_with = "crate::cli::ser_display_matrix")]
    pub basis: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "crate::cli::ser_display")]
    pub gram_det: BigInt,
}

impl KernelBasis {
    /// Every basis vector lies in the kernel and `det(B·Bᵀ) = Σaᵢ²`.
    pub fn is_certified(&self) -> bool {
        self.basis.len() + 1 == self.form.n()
            && self
                .basis
                .iter()
                .all(|b| linalg::dot(b, &self.form.coeffs).is_zero())
            && self.gram_det == self.form.euclidean_norm_sq
    }
}

/// An LLL-reduced integer basis of `Λ`.
///
/// Euclidean column operations reduce `a` to a single nonzero entry while
/// tracking a unimodular `U`; the columns of `U` away from that entry span
/// the kernel.
pub fn kernel_basis(a: &LinearForm) -> KernelBasis {
    let form = normalize(a);
    let n = form.n();
    let mut v: Vec<BigInt> = form.coeffs.clone();
    // Columns of U, stored as vectors.
    let mut cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&i| !v[i].is_zero()).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let p = *nonzero
            .iter()
            .min_by(|&&i, &&j| v[i].abs().cmp(&v[j].abs()))
            .expect("nonempty");
        for &j in &nonzero {
            if j == p {
                continue;
            }
            let q = &v[j] / &v[p];
            if q.is_zero() {
                continue;
            }
            v[j] = &v[j] - &q * &v[p];
            let cp = cols[p].clone();
            for (x, y) in cols[j].iter_mut().zip(&cp) {
                *x -= &q * y;
            }
        }
    }
    let pivot = (0..n).find(|&i| !v[i].is_zero()).expect("nonzero form");
    let mut basis: Vec<Vec<BigInt>> = cols
        .into_iter()
        .enumerate()
        .filter(|&(j, _)| j != pivot)
        .map(|(_, c)| c)
        .collect();
    lll_reduce(&mut basis);
    let gram_det = gram_determinant(&basis);
    KernelBasis { form, basis, gram_det }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimaMethod {
    EnumerationExact,
    ReductionHeuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    ReduceThenRefine,
    Enumerate,
}

/// Successive minima (or, for the heuristic, witness norms) with witnesses
/// and the bound check.
#[derive(Debug, Clone, Serialize)]
pub struct MinimaCertificate {
    /// The normalized form.
    pub form: LinearForm,
    /// Max norms of the witnesses, non-decreasing. Exact successive minima
    /// when `method` is `EnumerationExact`.
    pub lambdas: Vec<u64>,
    pub witnesses: Vec<Vec<i64>>,
    #[serde(serialize_with = "crate::cli::ser_display")]
    pub product: BigInt,
    /// `‖a‖_∞ / σ_n` for the normalized form.
    #[serde(serialize_with = "crate::cli::ser_rational")]
    pub bound: BigRational,
    /// `c_n ‖a‖_∞` for `n ≤ 4`, where the exact Siegel constant is known.
    #[serde(serialize_with = "crate::cli::ser_opt_rational")]
    pub siegel_bound: Option<BigRational>,
    pub method: MinimaMethod,
    /// `n ≥ 5`: `product < bound`. `n ≤ 4`: `product ≤ siegel_bound`.
    pub certified: bool,
}

impl MinimaCertificate {
    fn assemble(form: LinearForm, mut witnesses: Vec<Vec<i64>>, method: MinimaMethod) -> Result<Self> {
        witnesses.sort_by_key(|w| max_norm(w));
        let lambdas: Vec<u64> = witnesses.iter().map(|w| max_norm(w)).collect();
        let product: BigInt = lambdas.iter().map(|&l| BigInt::from(l)).product();
        let n = form.n() as u32;
        let max = BigRational::from_integer(form.max_norm.clone());
        let bound = &max / sigma_exact(n)?;
        let siegel_bound = known_siegel_constant(n).map(|c| c * &max);
        let product_q = BigRational::from_integer(product.clone());
        let certified = match &siegel_bound {
            Some(c) => product_q <= *c,
            None => product_q < bound,
        };
        Ok(MinimaCertificate {
            form,
            lambdas,
            witnesses,
            product,
            bound,
            siegel_bound,
            method,
            certified,
        })
    }

    /// Re-checks every structural invariant: kernel membership, norms,
    /// ordering, independence and the product.
    pub fn is_consistent(&self) -> bool {
        let n = self.form.n();
        let mut independent = IndependentSet::new();
        self.witnesses.len() + 1 == n
            && self.lambdas.len() + 1 == n
            && self.witnesses.iter().all(|w| w.len() == n && self.form.eval(w).is_zero())
            && self.witnesses.iter().zip(&self.lambdas).all(|(w, &l)| max_norm(w) == l)
            && self.lambdas.windows(2).all(|p| p[0] <= p[1])
            && self.witnesses.iter().all(|w| independent.try_insert(w))
            && self.product == self.lambdas.iter().map(|&l| BigInt::from(l)).product::<BigInt>()
    }
}

pub fn max_norm(x: &[i64]) -> u64 {
    x.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
}

/// Exact max-norm successive minima by shell enumeration.
///
/// Coordinates where `a` vanishes contribute unit vectors (minimum 1) and are
/// split off first; the remaining form is enumerated shell by shell. Within
/// a shell, candidates are taken in lexicographic order among vectors whose
/// leading nonzero entry is positive, and kept when they raise the rank.
pub fn successive_minima(a: &LinearForm, budget: Budget) -> Result<MinimaCertificate> {
    let form = normalize(a);
    let n = form.n();
    let coeffs = form.coeffs_i64()?;
    let support: Vec<usize> = (0..n).filter(|&i| coeffs[i] != 0).collect();
    let mut witnesses: Vec<Vec<i64>> = (0..n)
        .filter(|&i| coeffs[i] == 0)
        .map(|i| unit(n, i))
        .collect();

    if support.len() > 1 {
        let sub: Vec<i64> = support.iter().map(|&i| coeffs[i]).collect();
        let embed = |v: &[i64]| {
            let mut full = vec![0i64; n];
            for (&i, &x) in support.iter().zip(v) {
                full[i] = x;
            }
            full
        };
        let target = sub.len() - 1;
        let mut search = ShellSearch::new(&sub);
        let mut independent = IndependentSet::new();
        let mut found = Vec::with_capacity(target);
        let mut radius = 1u64;
        while found.len() < target {
            if radius > budget.max_radius {
                return Err(exhausted(a, format!("shell radius exceeded {}", budget.max_radius)));
            }
            let shell = match search.shell(radius, budget.max_nodes) {
                Ok(s) => s,
                Err(Error::ResourceLimit { what, .. }) => return Err(exhausted(a, what)),
                Err(e) => return Err(e),
            };
            for v in shell {
                if found.len() == target {
                    break;
                }
                if independent.try_insert(&v) {
                    found.push(v);
                }
            }
            radius += 1;
        }
        witnesses.extend(found.iter().map(|v| embed(v)));
    }
    MinimaCertificate::assemble(form, witnesses, MinimaMethod::EnumerationExact)
}

/// `λ₁` alone: the radius of the first nonempty shell.
pub fn first_minimum(a: &LinearForm, budget: Budget) -> Result<u64> {
    let coeffs = normalize(a).coeffs_i64()?;
    if coeffs.contains(&0) {
        return Ok(1);
    }
    let mut search = ShellSearch::new(&coeffs);
    for radius in 1..=budget.max_radius {
        if !search.shell(radius, budget.max_nodes)?.is_empty() {
            return Ok(radius);
        }
    }
    Err(Error::limit(format!("shell radius exceeded {}", budget.max_radius)))
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0i64; n];
    e[i] = 1;
    e
}

/// Resource-limit error carrying the reduced-basis upper bounds.
fn exhausted(a: &LinearForm, what: String) -> Error {
    let best = reduced_certificate(a).ok().map(|mut c| {
        c.certified = false;
        Box::new(c)
    });
    Error::ResourceLimit { what, best }
}

fn reduced_certificate(a: &LinearForm) -> Result<MinimaCertificate> {
    let kb = kernel_basis(a);
    let witnesses = kb
        .basis
        .iter()
        .map(|b| {
            b.iter()
                .map(|x| x.to_i64().ok_or_else(|| Error::limit("reduced basis entry exceeds 64 bits")))
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    MinimaCertificate::assemble(kb.form, witnesses, MinimaMethod::ReductionHeuristic)
}

/// `n - 1` independent small kernel vectors.
///
/// `ReduceThenRefine` takes the LLL-reduced kernel basis and keeps it if it
/// already meets the bound, falling back to exact enumeration otherwise.
pub fn small_solutions(a: &LinearForm, strategy: Strategy, budget: Budget) -> Result<MinimaCertificate> {
    if strategy == Strategy::ReduceThenRefine {
        if let Ok(cert) = reduced_certificate(a) {
            if cert.certified {
                return Ok(cert);
            }
        }
    }
    successive_minima(a, budget)
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem1Report {
    pub n: usize,
    pub lambdas: Vec<u64>,
    #[serde(serialize_with = "crate::cli::ser_display")]
    pub product: BigInt,
    #[serde(serialize_with = "crate::cli::ser_rational")]
    pub bound: BigRational,
    /// `product < ‖a‖_∞/σ_n`
    pub strict: bool,
    #[serde(serialize_with = "crate::cli::ser_opt_rational")]
    pub siegel_bound: Option<BigRational>,
    /// `product ≤ c_n‖a‖_∞` when `c_n` is known.
    pub within_siegel: Option<bool>,
}

/// Exact minima product against `‖a‖_∞/σ_n`. The strict inequality is only
/// claimed for `n ≥ 5`; smaller `n` are reported against `c_n` as well.
pub fn verify_theorem1(a: &LinearForm, budget: Budget) -> Result<Theorem1Report> {
    let cert = successive_minima(a, budget)?;
    let product = BigRational::from_integer(cert.product.clone());
    let strict = product.cmp(&cert.bound) == Ordering::Less;
    let within_siegel = cert.siegel_bound.as_ref().map(|c| product <= *c);
    Ok(Theorem1Report {
        n: cert.form.n(),
        lambdas: cert.lambdas,
        product: cert.product,
        bound: cert.bound,
        strict,
        siegel_bound: cert.siegel_bound,
        within_siegel,
    })
}

/// Uniform random form with entries in `[-max_abs, max_abs]`, not all zero.
pub fn random_form<R: Rng>(n: usize, max_abs: i64, rng: &mut R) -> LinearForm {
    loop {
        let coeffs: Vec<i64> = (0..n).map(|_| rng.random_range(-max_abs..=max_abs)).collect();
        if let Ok(f) = LinearForm::from_i64(&coeffs) {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use super::Strategy;

    fn form(c: &[i64]) -> LinearForm {
        LinearForm::from_i64(c).unwrap()
    }

    #[test]
    fn form_validation() {
        assert!(LinearForm::from_i64(&[0, 0]).is_err());
        assert!(LinearForm::from_i64(&[3]).is_err());
        let f = form(&[0, -3, 0, 9]);
        assert_eq!(f.max_norm(), &BigInt::from(9));
        assert_eq!(f.euclidean_norm_sq(), &BigInt::from(90));
        assert_eq!(f.gcd(), &BigInt::from(3));
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize(&form(&[2, 4, 6])), form(&[1, 2, 3]));
        assert_eq!(normalize(&form(&[1, 1, 1, 1, 1])), form(&[1, 1, 1, 1, 1]));
        assert_eq!(normalize(&form(&[0, -3, 0, 9])), form(&[0, -1, 0, 3]));
        let once = normalize(&form(&[6, -4, 10]));
        assert_eq!(normalize(&once), once);
    }

    #[test]
    fn kernel_basis_examples() {
        let kb = kernel_basis(&form(&[1, 1, 1]));
        assert_eq!(kb.basis.len(), 2);
        assert_eq!(kb.gram_det, BigInt::from(3));
        assert!(kb.is_certified());

        let kb = kernel_basis(&form(&[1, 0, 0]));
        assert_eq!(kb.gram_det, BigInt::one());
        assert!(kb.is_certified());

        let kb = kernel_basis(&form(&[2, 3]));
        assert_eq!(kb.basis.len(), 1);
        let b: Vec<i64> = kb.basis[0].iter().map(|x| x.to_i64().unwrap()).collect();
        assert!(b == vec![3, -2] || b == vec![-3, 2]);
        assert_eq!(kb.gram_det, BigInt::from(13));
    }

    #[test]
    fn minima_all_ones() {
        let cert = successive_minima(&form(&[1, 1, 1, 1, 1]), Budget::default()).unwrap();
        assert_eq!(cert.lambdas, vec![1, 1, 1, 1]);
        assert_eq!(cert.product, BigInt::one());
        assert_eq!(cert.bound, BigRational::new(192.into(), 115.into()));
        assert!(cert.certified);
        assert!(cert.is_consistent());
    }

    #[test]
    fn minima_two_three() {
        let cert = successive_minima(&form(&[2, 3]), Budget::default()).unwrap();
        assert_eq!(cert.lambdas, vec![3]);
        assert_eq!(cert.witnesses, vec![vec![3, -2]]);
        assert_eq!(cert.siegel_bound, Some(BigRational::from_integer(3.into())));
        assert!(cert.certified);
    }

    #[test]
    fn coordinate_kernel() {
        let cert = small_solutions(&form(&[1, 0, 0, 0, 0]), Strategy::Enumerate, Budget::default()).unwrap();
        assert_eq!(
            cert.witnesses,
            vec![
                vec![0, 1, 0, 0, 0],
                vec![0, 0, 1, 0, 0],
                vec![0, 0, 0, 1, 0],
                vec![0, 0, 0, 0, 1]
            ]
        );
        assert_eq!(cert.product, BigInt::one());
    }

    #[test]
    fn mixed_zero_coefficients() {
        let cert = successive_minima(&form(&[50, 0, 0, 1]), Budget::default()).unwrap();
        assert_eq!(cert.lambdas, vec![1, 1, 50]);
        assert_eq!(cert.witnesses[2], vec![1, 0, 0, -50]);
        assert!(cert.is_consistent());
    }

    #[test]
    fn fibonacci_form_is_certified() {
        let a = form(&[34, 21, 13, 8, 5, 3, 2, 1]);
        for strategy in [Strategy::Enumerate, Strategy::ReduceThenRefine] {
            let cert = small_solutions(&a, strategy, Budget::default()).unwrap();
            assert!(cert.certified && cert.is_consistent(), "{strategy:?}");
        }
    }

    #[test]
    fn budget_exhaustion_reports_upper_bounds() {
        let tight = Budget {
            max_nodes: 5,
            ..Budget::default()
        };
        match successive_minima(&form(&[17, 29, 41, 3, 7]), tight) {
            Err(Error::ResourceLimit { best: Some(best), .. }) => {
                assert!(!best.certified);
                assert_eq!(best.method, MinimaMethod::ReductionHeuristic);
                assert!(best.is_consistent());
            }
            other => panic!("expected resource limit, got {other:?}"),
        }
    }

    #[test]
    fn first_minimum_examples() {
        assert_eq!(first_minimum(&form(&[2, 3]), Budget::default()).unwrap(), 3);
        assert_eq!(first_minimum(&form(&[1, 2, 4, 8]), Budget::default()).unwrap(), 2);
        assert_eq!(first_minimum(&form(&[5, 0, 7]), Budget::default()).unwrap(), 1);
    }

    #[test]
    fn theorem1_small_cases() {
        let r = verify_theorem1(&form(&[1, 1, 1, 1, 1]), Budget::default()).unwrap();
        assert!(r.strict);
        let r = verify_theorem1(&form(&[1, 1]), Budget::default()).unwrap();
        assert_eq!(r.product, BigInt::one());
        assert_eq!(r.within_siegel, Some(true));
        assert!(!r.strict);
    }

    #[test]
    fn oversized_coefficients_are_a_resource_limit() {
        let big = LinearForm::new(vec![BigInt::from(1) << 80, BigInt::from(3)]).unwrap();
        assert!(matches!(
            successive_minima(&big, Budget::default()),
            Err(Error::ResourceLimit { .. })
        ));
        // The basis construction itself has no size limit.
        assert!(kernel_basis(&big).is_certified());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gram_certificate_holds(c in proptest::collection::vec(-60i64..=60, 2..7)) {
            prop_assume!(c.iter().any(|&x| x != 0));
            prop_assert!(kernel_basis(&form(&c)).is_certified());
        }

        #[test]
        fn scaling_leaves_minima_unchanged(c in proptest::collection::vec(-12i64..=12, 3..5), k in 2i64..6) {
            prop_assume!(c.iter().any(|&x| x != 0));
            let scaled: Vec<i64> = c.iter().map(|x| x * k).collect();
            let a = successive_minima(&form(&c), Budget::default()).unwrap();
            let b = successive_minima(&form(&scaled), Budget::default()).unwrap();
            prop_assert_eq!(a.lambdas, b.lambdas);
            prop_assert_eq!(a.witnesses, b.witnesses);
        }
    }
}
