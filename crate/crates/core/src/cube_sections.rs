//! Central hyperplane sections of the cube `C = [-1, 1]ⁿ` and the distance
//! function of its intersection body.
//!
//! For a unit vector `s` with nonzero components,
//! `vol_{n-1}(s^⊥ ∩ C) = (2ⁿ/π) ∫₀^∞ ∏ sin(sᵢt)/(sᵢt) dt`.
//! Zero components are stripped first: the section is then a prism over the
//! section of the lower-dimensional cube, with one factor 2 per removed
//! coordinate.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::exact_sigma::{sigma_exact, sigma_quadrature};
use crate::quadrature::sinc_product_integral;
use crate::rational::{pow2, to_f64};
use crate::{Error, Result};

/// Components below this fraction of the largest one are treated as zero.
pub const TINY_COMPONENT: f64 = 1e-9;

/// Default Monte Carlo slab half-width.
pub const DEFAULT_SLAB: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Direction {
    coords: Vec<f64>,
    euclidean_norm: f64,
    max_norm: f64,
    zero_mask: Vec<usize>,
}

impl Direction {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::invalid(format!(
                "a direction needs at least 2 components, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("direction has non-finite components"));
        }
        let max_norm = coords.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if max_norm == 0.0 {
            return Err(Error::invalid("direction must be nonzero"));
        }
        let euclidean_norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        let zero_mask = coords
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() < TINY_COMPONENT * max_norm)
            .map(|(i, _)| i)
            .collect();
        Ok(Direction {
            coords,
            euclidean_norm,
            max_norm,
            zero_mask,
        })
    }

    /// The vertex direction `(1, …, 1)`.
    pub fn vertex(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.euclidean_norm
    }

    pub fn max_norm(&self) -> f64 {
        self.max_norm
    }

    /// Indices whose components are zero or below the tiny-component threshold.
    pub fn zero_mask(&self) -> &[usize] {
        &self.zero_mask
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.coords.iter().map(|c| c * factor).collect())
    }

    /// Absolute values of the retained components, scaled to unit length.
    fn unit_weights(&self) -> Vec<f64> {
        let kept: Vec<f64> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.zero_mask.contains(i))
            .map(|(_, c)| c.abs())
            .collect();
        let norm = kept.iter().map(|c| c * c).sum::<f64>().sqrt();
        kept.into_iter().map(|c| c / norm).collect()
    }

    /// Sum of the components dropped by the threshold (not exact zeros),
    /// relative to the Euclidean norm.
    fn dropped_mass(&self) -> f64 {
        self.zero_mask.iter().map(|&i| self.coords[i].abs()).sum::<f64>() / self.euclidean_norm
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeMethod {
    Quadrature,
    MonteCarlo,
    VertexIdentity,
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionVolume {
    pub direction: Direction,
    pub value: f64,
    pub method: VolumeMethod,
    pub error_estimate: f64,
}

/// `vol_{n-1}(s^⊥ ∩ C)` by sinc-product quadrature, to absolute accuracy `tol`.
///
/// Components dropped by [`TINY_COMPONENT`] add a first-order estimate
/// `2ⁿ√n·Σ|δᵢ|/|s|` of the induced error to `error_estimate`; that term is
/// not included in the `tol` guarantee.
pub fn section_volume(s: &Direction, tol: f64) -> Result<SectionVolume> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let n = s.dim();
    let removed = s.zero_mask().len() as i32;
    let weights = s.unit_weights();
    let kept = weights.len() as i32;
    let prism = 2f64.powi(removed);
    let (value, error) = if kept == 1 {
        (2f64.powi(n as i32 - 1), 0.0)
    } else {
        let scale = prism * 2f64.powi(kept) / std::f64::consts::PI;
        let integral = sinc_product_integral(&weights, tol / scale)?;
        (scale * integral.value, scale * integral.error)
    };
    let threshold_error = 2f64.powi(n as i32) * (n as f64).sqrt() * s.dropped_mass();
    Ok(SectionVolume {
        direction: s.clone(),
        value,
        method: VolumeMethod::Quadrature,
        error_estimate: error + threshold_error,
    })
}

/// `2^{n-1}√n·σ_n`, stored as the exact coefficient `2^{n-1}σ_n` and the
/// radicand `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexSection {
    #[serde(serialize_with = "crate::cli::ser_rational")]
    pub coefficient: BigRational,
    pub radical: u32,
}

impl VertexSection {
    pub fn to_f64(&self) -> f64 {
        to_f64(&self.coefficient) * f64::from(self.radical).sqrt()
    }

    pub fn to_section_volume(&self) -> Result<SectionVolume> {
        Ok(SectionVolume {
            direction: Direction::vertex(self.radical as usize)?,
            value: self.to_f64(),
            method: VolumeMethod::VertexIdentity,
            error_estimate: 4.0 * f64::EPSILON * self.to_f64(),
        })
    }
}

pub fn vertex_section_volume(n: u32) -> Result<VertexSection> {
    if n < 2 {
        return Err(Error::invalid("vertex sections need n >= 2"));
    }
    let coefficient = sigma_exact(n)? * BigRational::from_integer(pow2(n - 1));
    Ok(VertexSection { coefficient, radical: n })
}

/// Monte Carlo estimate of the section volume from the fraction of uniform
/// points of `C` inside the slab `|s·x|/|s| ≤ ε`. The error estimate is three
/// binomial standard deviations; the slab bias is `O(ε²)` by symmetry.
pub fn section_volume_mc(s: &Direction, samples: u64, slab_half_width: f64, seed: u64) -> Result<SectionVolume> {
    if samples < 10_000 {
        return Err(Error::invalid(format!("need at least 10^4 samples, got {samples}")));
    }
    let eps = slab_half_width;
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::invalid(format!("slab half-width must lie in (0, 0.5), got {eps}")));
    }
    let n = s.dim();
    let unit: Vec<f64> = s.coords().iter().map(|c| c / s.euclidean_norm()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..samples {
        let dot: f64 = unit.iter().map(|u| u * rng.random_range(-1.0..=1.0)).sum();
        if dot.abs() <= eps {
            hits += 1;
        }
    }
    let total = samples as f64;
    let p = hits as f64 / total;
    // Smoothed proportion keeps the spread nonzero when there are no hits.
    let p_var = (hits as f64 + 1.0) / (total + 2.0);
    let cube = 2f64.powi(n as i32);
    let sd = (p_var * (1.0 - p_var) / total).sqrt();
    Ok(SectionVolume {
        direction: s.clone(),
        value: cube * p / (2.0 * eps),
        method: VolumeMethod::MonteCarlo,
        error_estimate: 3.0 * cube * sd / (2.0 * eps),
    })
}

/// Distance function of the intersection body `IC`: `|x| / vol(x^⊥ ∩ C)`.
/// Returns the value and a propagated error estimate.
pub fn intersection_body_distance_with_error(x: &Direction, tol: f64) -> Result<(f64, f64)> {
    let vol = section_volume(x, tol)?;
    let value = x.euclidean_norm() / vol.value;
    let error = value * vol.error_estimate / vol.value;
    Ok((value, error))
}

pub fn intersection_body_distance(x: &Direction, tol: f64) -> Result<f64> {
    intersection_body_distance_with_error(x, tol).map(|(v, _)| v)
}

/// Volume tolerance used when evaluating distance functions in the checks.
const CHECK_VOLUME_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct Lemma3Report {
    pub lhs: f64,
    #[serde(serialize_with = "crate::cli::ser_rational")]
    pub rhs: BigRational,
    pub rhs_float: f64,
    pub holds_within_tol: bool,
}

/// `f_{IC}(x/‖x‖_∞)` against `1/(σ_n 2^{n-1})`.
pub fn verify_lemma3(x: &Direction, tol: f64) -> Result<Lemma3Report> {
    let rhs = lemma3_rhs(x.dim() as u32)?;
    verify_lemma3_against(x, tol, &rhs)
}

pub(crate) fn lemma3_rhs(n: u32) -> Result<BigRational> {
    Ok(vertex_section_volume(n)?.coefficient.recip())
}

pub(crate) fn verify_lemma3_against(x: &Direction, tol: f64, rhs: &BigRational) -> Result<Lemma3Report> {
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let on_cube = x.scaled(1.0 / x.max_norm())?;
    let lhs = intersection_body_distance(&on_cube, CHECK_VOLUME_TOL)?;
    let rhs_float = to_f64(rhs);
    Ok(Lemma3Report {
        lhs,
        rhs: rhs.clone(),
        rhs_float,
        holds_within_tol: lhs <= rhs_float + tol,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SincInequalityReport {
    /// `‖s‖_∞ ∫₀^∞ ∏ sinc(sᵢt) dt`
    pub lhs: f64,
    /// `∫₀^∞ sincⁿ(t) dt`
    pub rhs: f64,
    pub holds_within_tol: bool,
}

/// `‖s‖_∞ ∫ ∏ sinc(sᵢt) dt ≥ ∫ sincⁿ t dt` for a unit vector `s`, both sides
/// by quadrature.
pub fn verify_sinc_inequality(s: &Direction, tol: f64) -> Result<SincInequalityReport> {
    if (s.euclidean_norm() - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!(
            "expected a unit vector, |s| = {}",
            s.euclidean_norm()
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let n = s.dim() as u32;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let weights: Vec<f64> = s
        .coords()
        .iter()
        .enumerate()
        .filter(|(i, _)| !s.zero_mask().contains(i))
        .map(|(_, c)| c.abs())
        .collect();
    let integral = sinc_product_integral(&weights, tol / 4.0)?.value;
    let lhs = s.max_norm() * integral;
    let rhs = half_pi * sigma_quadrature(n, tol / 4.0)?.value;
    Ok(SincInequalityReport {
        lhs,
        rhs,
        holds_within_tol: lhs >= rhs - tol,
    })
}

/// Uniformly distributed direction on the unit sphere.
pub fn random_direction<R: Rng>(n: usize, rng: &mut R) -> Direction {
    loop {
        let coords: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = coords.iter().map(|c: &f64| c * c).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return Direction::new(coords.into_iter().map(|c| c / norm).collect())
                .expect("nonzero finite direction");
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvexityProbe {
    pub trials: usize,
    pub worst: f64,
    pub holds: bool,
}

/// Midpoints of random pairs on the unit sphere of `f_{IC}` must satisfy
/// `f ≤ 1 + 1e-6` if `IC` is convex.
pub fn convexity_probe(n: usize, trials: usize, seed: u64) -> Result<ConvexityProbe> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let x = random_direction(n, &mut rng);
        let y = random_direction(n, &mut rng);
        let fx = intersection_body_distance(&x, CHECK_VOLUME_TOL)?;
        let fy = intersection_body_distance(&y, CHECK_VOLUME_TOL)?;
        let mid: Vec<f64> = x
            .coords()
            .iter()
            .zip(y.coords())
            .map(|(a, b)| 0.5 * (a / fx + b / fy))
            .collect();
        let value = match Direction::new(mid) {
            Ok(m) => intersection_body_distance(&m, CHECK_VOLUME_TOL)?,
            // Antipodal pair: the midpoint is the origin, f = 0.
            Err(_) => 0.0,
        };
        worst = worst.max(value);
    }
    Ok(ConvexityProbe {
        trials,
        worst,
        holds: worst <= 1.0 + 1e-6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dir(c: &[f64]) -> Direction {
        Direction::new(c.to_vec()).unwrap()
    }

    #[test]
    fn direction_validation() {
        assert!(Direction::new(vec![0.0, 0.0]).is_err());
        assert!(Direction::new(vec![1.0]).is_err());
        assert!(Direction::new(vec![f64::NAN, 1.0]).is_err());
        let d = dir(&[3.0, -4.0, 0.0]);
        assert_eq!(d.euclidean_norm(), 5.0);
        assert_eq!(d.max_norm(), 4.0);
        assert_eq!(d.zero_mask(), &[2]);
        assert_eq!(dir(&[1.0, 1e-12]).zero_mask(), &[1]);
    }

    #[test]
    fn axis_and_diagonal_sections_of_the_square() {
        let axis = section_volume(&dir(&[1.0, 0.0]), 1e-9).unwrap();
        assert!((axis.value - 2.0).abs() < 1e-12);
        let diag = section_volume(&dir(&[1.0, 1.0]), 1e-9).unwrap();
        assert!((diag.value - 2.0 * 2f64.sqrt()).abs() < 1e-9, "{}", diag.value);
    }

    #[test]
    fn regular_hexagon() {
        let v = section_volume(&dir(&[1.0, 1.0, 1.0]), 1e-9).unwrap();
        assert!((v.value - 3.0 * 3f64.sqrt()).abs() < 1e-9, "{}", v.value);
    }

    #[test]
    fn vertex_identity_values() {
        let two = vertex_section_volume(2).unwrap();
        assert_eq!(two.coefficient, BigRational::from_integer(2.into()));
        let three = vertex_section_volume(3).unwrap();
        assert_eq!(three.coefficient, BigRational::from_integer(3.into()));
        assert!((three.to_f64() - 3.0 * 3f64.sqrt()).abs() < 1e-12);
        let nine = vertex_section_volume(9).unwrap();
        assert!((nine.to_f64() - 347.9).abs() < 0.1, "{}", nine.to_f64());
        assert!(vertex_section_volume(1).is_err());
    }

    #[test]
    fn prism_reduction() {
        let full = section_volume(&dir(&[0.3, 0.0, 0.9, 0.4]), 1e-9).unwrap();
        let reduced = section_volume(&dir(&[0.3, 0.9, 0.4]), 1e-9).unwrap();
        assert!((full.value - 2.0 * reduced.value).abs() <= 2e-9);
    }

    #[test]
    fn symmetric_under_permutation_and_sign() {
        let a = section_volume(&dir(&[0.2, -0.5, 0.7, 0.1]), 1e-9).unwrap();
        let b = section_volume(&dir(&[0.7, 0.1, 0.2, 0.5]), 1e-9).unwrap();
        assert!((a.value - b.value).abs() <= 2e-9);
    }

    #[test]
    fn distance_function_examples() {
        let v5 = intersection_body_distance(&Direction::vertex(5).unwrap(), 1e-10).unwrap();
        assert!((v5 - 12.0 / 115.0).abs() < 1e-9, "{v5}");
        let axis = intersection_body_distance(&dir(&[1.0, 0.0]), 1e-10).unwrap();
        assert!((axis - 0.5).abs() < 1e-12);
        let twos = intersection_body_distance(&dir(&[2.0, 2.0, 2.0]), 1e-10).unwrap();
        assert!((twos - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn homogeneity() {
        let x = dir(&[0.3, -1.2, 0.8, 0.05]);
        let base = intersection_body_distance(&x, 1e-11).unwrap();
        for lambda in [2.0, 10.0, 0.5] {
            let scaled = intersection_body_distance(&x.scaled(lambda).unwrap(), 1e-11 * lambda.max(1.0)).unwrap();
            assert!((scaled - lambda * base).abs() <= 1e-9 * lambda * base);
        }
    }

    #[test]
    fn lemma3_equality_cases() {
        for n in 2..=8 {
            let r = verify_lemma3(&Direction::vertex(n).unwrap(), 1e-8).unwrap();
            assert!((r.lhs - r.rhs_float).abs() < 1e-8, "n={n}");
        }
        let r = verify_lemma3(&dir(&[0.3, -0.9]), 1e-8).unwrap();
        assert!((r.lhs - r.rhs_float).abs() < 1e-8);
    }

    #[test]
    fn lemma3_strict_off_vertex() {
        let r = verify_lemma3(&dir(&[1.0, 0.5, 0.5, 0.5, 0.5]), 1e-6).unwrap();
        assert!(r.holds_within_tol);
        assert!(r.lhs < r.rhs_float - 1e-4, "{} vs {}", r.lhs, r.rhs_float);
    }

    #[test]
    fn sinc_inequality_cases() {
        let n = 6usize;
        let v = Direction::new(vec![1.0 / (n as f64).sqrt(); n]).unwrap();
        let r = verify_sinc_inequality(&v, 1e-9).unwrap();
        assert!((r.lhs - r.rhs).abs() < 1e-8);
        let s = Direction::new(vec![0.6, -0.8]).unwrap();
        let r = verify_sinc_inequality(&s, 1e-9).unwrap();
        assert!((r.lhs - r.rhs).abs() < 1e-8);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = verify_sinc_inequality(&random_direction(6, &mut rng), 1e-8).unwrap();
        assert!(r.holds_within_tol && r.lhs > r.rhs);
        assert!(verify_sinc_inequality(&dir(&[1.0, 1.0]), 1e-8).is_err());
    }

    #[test]
    fn monte_carlo_axis_case() {
        let mc = section_volume_mc(&dir(&[1.0, 0.0]), 100_000, 0.01, 1).unwrap();
        assert!((mc.value - 2.0).abs() <= mc.error_estimate, "{:?}", mc);
        assert!(section_volume_mc(&dir(&[1.0, 0.0]), 100_000, 0.0, 1).is_err());
        assert!(section_volume_mc(&dir(&[1.0, 0.0]), 100, 0.01, 1).is_err());
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let d = dir(&[1.0, 2.0, 3.0]);
        let a = section_volume_mc(&d, 20_000, 0.01, 9).unwrap();
        let b = section_volume_mc(&d, 20_000, 0.01, 9).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn convexity_probe_small() {
        let p = convexity_probe(3, 50, 11).unwrap();
        assert!(p.holds, "{:?}", p);
    }
}
