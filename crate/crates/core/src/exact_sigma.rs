//! The sinc constants `σ_n = (2/π)∫₀^∞ (sin t / t)ⁿ dt`.
//!
//! `σ_n` is rational for every `n` and equals
//!
//! ```text
//! σ_n = n / (2^{n-1} n!) · Σ_{0 ≤ r < n/2} (-1)^r C(n, r) (n - 2r)^{n-1}
//! ```
//!
//! The alternating terms are huge (thousands of digits at `n = 1000`) and
//! cancel almost completely, so the sum is formed in exact integer arithmetic
//! and only reduced at the end.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::quadrature::{sinc_product_integral, SincIntegral};
use crate::rational::{factorial, pow2, to_f64};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaValue {
    pub n: u32,
    #[serde(serialize_with = "crate::cli::ser_rational")]
    pub exact: BigRational,
    pub float64: f64,
}

impl SigmaValue {
    pub fn new(n: u32) -> Result<Self> {
        let exact = sigma_exact(n)?;
        Ok(SigmaValue {
            n,
            float64: to_f64(&exact),
            exact,
        })
    }
}

/// Exact `σ_n` for `n ≥ 1`. `σ_1 = 1` by the closed form.
pub fn sigma_exact(n: u32) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::invalid("sigma is defined for n >= 1"));
    }
    let mut sum = BigInt::zero();
    let mut binom = BigInt::one();
    // r ranges over 0 ≤ r < n/2, i.e. 2r < n.
    let mut r = 0u32;
    while 2 * r < n {
        let base = BigInt::from(n - 2 * r);
        let term = &binom * Pow::pow(&base, n - 1);
        if r % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        binom = binom * (n - r) / (r + 1);
        r += 1;
    }
    let numer = sum * n;
    let denom = pow2(n - 1) * factorial(n);
    Ok(BigRational::new(numer, denom))
}

/// `σ_1, …, σ_{n_max}` computed in parallel; entry `k` holds `σ_{k+1}`.
pub fn sigma_table(n_max: u32) -> Vec<BigRational> {
    (1..=n_max)
        .into_par_iter()
        .map(|n| sigma_exact(n).expect("n >= 1"))
        .collect()
}

/// `(2/π)∫₀^∞ (sin t / t)ⁿ dt` by quadrature, for `n ≥ 2`.
///
/// The returned estimate's `error` is already scaled by `2/π`.
pub fn sigma_quadrature(n: u32, tol: f64) -> Result<QuadratureEstimate> {
    if n < 2 {
        return Err(Error::invalid(
            "quadrature needs n >= 2; the n = 1 integral converges only conditionally",
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let scale = std::f64::consts::FRAC_2_PI;
    let weights = vec![1.0; n as usize];
    let raw = sinc_product_integral(&weights, tol / scale)?;
    Ok(QuadratureEstimate::scaled(raw, scale))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub error: f64,
    pub truncation: f64,
    /// The `(2/π)T^{1-n}/(n-1)` envelope bound on the tail beyond the
    /// truncation point, whether or not the tail was evaluated.
    pub tail_bound: f64,
}

impl QuadratureEstimate {
    fn scaled(raw: SincIntegral, scale: f64) -> Self {
        QuadratureEstimate {
            value: raw.value * scale,
            error: raw.error * scale,
            truncation: raw.truncation,
            tail_bound: raw.envelope_bound * scale,
        }
    }
}

/// Leading-order asymptotic `σ_n ≈ √(6/(πn))`.
pub fn sigma_asymptotic(n: u32) -> f64 {
    (6.0 / (std::f64::consts::PI * f64::from(n))).sqrt()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotonicityReport {
    pub holds: bool,
    pub first_failure: Option<u32>,
    /// Number of consecutive pairs examined.
    pub checked: u32,
}

/// Checks `0 < σ_{n+1} < σ_n ≤ 1` exactly for every `2 ≤ n < n_max`.
pub fn verify_sigma_monotonicity(n_max: u32) -> MonotonicityReport {
    if n_max <= 2 {
        return MonotonicityReport {
            holds: true,
            first_failure: None,
            checked: 0,
        };
    }
    let table = sigma_table(n_max);
    let one = BigRational::one();
    let first_failure = (2..n_max).find(|&n| {
        let cur = &table[(n - 1) as usize];
        let next = &table[n as usize];
        !(next.is_positive() && next < cur && cur <= &one)
    });
    MonotonicityReport {
        holds: first_failure.is_none(),
        first_failure,
        checked: n_max - 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SqrtComparison {
    SigmaBoundBetter,
    SqrtBoundBetter,
    Equal,
}

/// Upper bounds for the Siegel constant `c_n` in the maximum norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CnBound {
    pub n: u32,
    /// Exactly known values: `c_2 = 1`, `c_3 = 4/3`, `c_4 = 27/19`.
    #[serde(serialize_with = "crate::cli::ser_opt_rational")]
    pub known_exact: Option<BigRational>,
    #[serde(serialize_with = "crate::cli::ser_rational")]
    pub sigma_inverse: BigRational,
    /// How `1/σ_n` compares with the classical `√n`.
    pub sqrt_n_comparison: SqrtComparison,
}

pub fn known_siegel_constant(n: u32) -> Option<BigRational> {
    let (p, q) = match n {
        2 => (1, 1),
        3 => (4, 3),
        4 => (27, 19),
        _ => return None,
    };
    Some(BigRational::new(p.into(), q.into()))
}

pub fn cn_bound(n: u32) -> Result<CnBound> {
    if n < 2 {
        return Err(Error::invalid("c_n is defined for n >= 2"));
    }
    let sigma = sigma_exact(n)?;
    Ok(cn_bound_from_sigma(n, &sigma))
}

pub(crate) fn cn_bound_from_sigma(n: u32, sigma: &BigRational) -> CnBound {
    // 1/σ < √n  ⟺  n·σ² > 1
    let scaled = sigma * sigma * BigRational::from_integer(n.into());
    let sqrt_n_comparison = match scaled.cmp(&BigRational::one()) {
        Ordering::Greater => SqrtComparison::SigmaBoundBetter,
        Ordering::Less => SqrtComparison::SqrtBoundBetter,
        Ordering::Equal => SqrtComparison::Equal,
    };
    CnBound {
        n,
        known_exact: known_siegel_constant(n),
        sigma_inverse: sigma.recip(),
        sqrt_n_comparison,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn spot_values() {
        assert_eq!(sigma_exact(1).unwrap(), rat(1, 1));
        assert_eq!(sigma_exact(2).unwrap(), rat(1, 1));
        assert_eq!(sigma_exact(3).unwrap(), rat(3, 4));
        assert_eq!(sigma_exact(4).unwrap(), rat(2, 3));
        assert_eq!(sigma_exact(5).unwrap(), rat(115, 192));
    }

    #[test]
    fn zero_is_rejected() {
        assert!(matches!(sigma_exact(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for n in 2..=20 {
            let exact = to_f64(&sigma_exact(n).unwrap());
            let q = sigma_quadrature(n, 1e-10).unwrap();
            assert!((q.value - exact).abs() <= 1e-9, "n={n}: {} vs {exact}", q.value);
        }
    }

    #[test]
    fn quadrature_examples() {
        let two = sigma_quadrature(2, 1e-10).unwrap();
        assert!((two.value - 1.0).abs() <= 1e-10);
        let nine = sigma_quadrature(9, 1e-10).unwrap();
        assert!(115.0 < 256.0 * nine.value && 256.0 * nine.value < 116.0);
        let six = sigma_quadrature(6, 1e-8).unwrap();
        assert!((six.value - to_f64(&sigma_exact(6).unwrap())).abs() <= 1e-8);
    }

    #[test]
    fn quadrature_rejects_bad_input() {
        assert!(sigma_quadrature(1, 1e-6).is_err());
        assert!(sigma_quadrature(3, 0.0).is_err());
        assert!(sigma_quadrature(3, -1.0).is_err());
    }

    #[test]
    fn tail_bound_is_reported() {
        let q = sigma_quadrature(9, 1e-10).unwrap();
        let expected = std::f64::consts::FRAC_2_PI * q.truncation.powi(-8) / 8.0;
        assert!((q.tail_bound - expected).abs() <= 1e-12 * expected.max(1e-300));
        assert!(q.tail_bound <= 1e-10);
    }

    #[test]
    fn float_export_rounds_to_nearest() {
        let v = SigmaValue::new(5).unwrap();
        assert_eq!(v.float64, 115.0 / 192.0);
    }

    #[test]
    fn asymptotic_formula() {
        assert!((sigma_asymptotic(1000) - 0.0437019).abs() < 1e-7);
        assert!((sigma_asymptotic(1) - 1.381_976_597_885_341_9).abs() < 1e-12);
    }

    #[test]
    fn monotonicity_small_ranges() {
        assert!(verify_sigma_monotonicity(2).holds);
        let r = verify_sigma_monotonicity(5);
        assert!(r.holds);
        assert_eq!(r.checked, 3);
        assert!(verify_sigma_monotonicity(200).holds);
    }

    #[test]
    fn cn_bounds() {
        let b2 = cn_bound(2).unwrap();
        assert_eq!(b2.known_exact, Some(rat(1, 1)));
        assert_eq!(b2.sigma_inverse, rat(1, 1));
        let b4 = cn_bound(4).unwrap();
        assert_eq!(b4.known_exact, Some(rat(27, 19)));
        let b5 = cn_bound(5).unwrap();
        assert_eq!(b5.known_exact, None);
        assert_eq!(b5.sigma_inverse, rat(192, 115));
        assert_eq!(b5.sqrt_n_comparison, SqrtComparison::SigmaBoundBetter);
        // 5·(115/192)² = 66125/36864
        assert_eq!(sigma_exact(5).unwrap().pow(2) * rat(5, 1), rat(66125, 36864));
        assert!(cn_bound(1).is_err());
    }

    #[test]
    fn sigma_bound_beats_sqrt_n_on_a_sample() {
        for n in [5u32, 6, 17, 100, 250] {
            assert_eq!(cn_bound(n).unwrap().sqrt_n_comparison, SqrtComparison::SigmaBoundBetter);
        }
    }
}
