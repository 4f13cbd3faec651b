//! Numerical evaluation of `∫₀^∞ ∏ sin(wᵢt)/(wᵢt) dt` for positive weights.
//!
//! The integral is split at a truncation point `T`. On `[0, T]` the integrand
//! is entire, so globally adaptive Gauss–Kronrod (7/15) on panels of about
//! half an oscillation period converges quickly. The tail `[T, ∞)` is handled
//! in one of two ways:
//!
//! - **Envelope**: dropped, with the analytic bound
//!   `∫_T^∞ ∏ 1/(wᵢt) dt = T^{1-n} / ((n-1)∏wᵢ)` (valid once `T ≥ 1/min wᵢ`).
//!   Used when that bound falls below the tail budget at a moderate `T`.
//! - **Exponential integral**: `∏ sin(wᵢt)` is expanded into a finite sum of
//!   exponentials `e^{iωt}`, and each `∫_T^∞ e^{iωt} t^{-n} dt` equals
//!   `T^{1-n} Eₙ(-iωT)`. Used for slowly decaying products (few factors,
//!   tight tolerances), where the envelope would need `T` in the billions.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest number of half-periods integrated in envelope mode.
const MAX_ENVELOPE_HALF_PERIODS: f64 = 4000.0;
/// Cap on the truncation point in exponential-integral mode, in half-periods.
const MAX_TAIL_HALF_PERIODS: f64 = 20_000.0;
const MAX_PANELS: usize = 200_000;
/// Relative accuracy assumed for each `Eₙ` evaluation and the summation.
const TAIL_ROUNDING: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMode {
    Envelope,
    ExponentialIntegral,
}

#[derive(Debug, Clone, Copy)]
pub struct SincIntegral {
    pub value: f64,
    /// Estimated absolute error: quadrature estimate plus tail error.
    pub error: f64,
    pub truncation: f64,
    /// `T^{1-n}/((n-1)∏wᵢ)`, the envelope bound on the dropped tail.
    pub envelope_bound: f64,
    pub mode: TailMode,
}

/// `sinc(x) = sin(x)/x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

/// Equal weights collapsed into (weight, multiplicity) pairs.
#[derive(Debug, Clone)]
struct Factors {
    groups: Vec<(f64, i32)>,
    n: usize,
    sum: f64,
    product: f64,
}

impl Factors {
    fn new(weights: &[f64]) -> Self {
        let mut sorted = weights.to_vec();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
        let mut groups: Vec<(f64, i32)> = Vec::new();
        for w in sorted {
            match groups.last_mut() {
                Some((v, m)) if *v == w => *m += 1,
                _ => groups.push((w, 1)),
            }
        }
        Factors {
            n: weights.len(),
            sum: weights.iter().sum(),
            product: weights.iter().product(),
            groups,
        }
    }

    fn min(&self) -> f64 {
        self.groups.last().map(|g| g.0).unwrap_or(0.0)
    }

    fn eval(&self, t: f64) -> f64 {
        self.groups
            .iter()
            .map(|&(w, m)| sinc(w * t).powi(m))
            .product()
    }

    /// Frequencies and integer coefficients of `∏ sin(wᵢt) = (2i)^{-n} Σ c e^{iωt}`.
    fn exponentials(&self) -> Vec<(f64, f64)> {
        let mut terms = vec![(0.0f64, 1.0f64)];
        for &(w, m) in &self.groups {
            let mut binom = 1.0;
            let mut next = Vec::with_capacity(terms.len() * (m as usize + 1));
            for k in 0..=m {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let freq = f64::from(m - 2 * k) * w;
                for &(f, c) in &terms {
                    next.push((f + freq, c * sign * binom));
                }
                binom = binom * f64::from(m - k) / f64::from(k + 1);
            }
            terms = next;
        }
        terms
    }
}

/// `∫₀^∞ ∏ sin(wᵢt)/(wᵢt) dt` to absolute accuracy `tol`.
///
/// Weights must be positive and finite. A single weight gives the
/// conditionally convergent Dirichlet integral `π/(2w)`, returned in closed
/// form.
pub fn sinc_product_integral(weights: &[f64], tol: f64) -> Result<SincIntegral> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    if weights.is_empty() {
        return Err(Error::invalid("empty weight vector"));
    }
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
        return Err(Error::invalid(format!("weights must be positive, got {w}")));
    }
    let factors = Factors::new(weights);
    let n = factors.n;
    if n == 1 {
        return Ok(SincIntegral {
            value: std::f64::consts::FRAC_PI_2 / weights[0],
            error: 0.0,
            truncation: f64::INFINITY,
            envelope_bound: 0.0,
            mode: TailMode::ExponentialIntegral,
        });
    }
    let exponent = (n - 1) as f64;
    let half_period = std::f64::consts::PI / factors.sum;
    let envelope = |t: f64| t.powf(-exponent) / (exponent * factors.product);

    // Smallest T for which the envelope bound meets half the budget.
    let t_env = (1.0 / factors.min()).max((2.0 / (tol * exponent * factors.product)).powf(1.0 / exponent));
    let (truncation, mode) = if t_env <= MAX_ENVELOPE_HALF_PERIODS * half_period {
        (t_env, TailMode::Envelope)
    } else {
        // Large enough that the cancelling tail terms stay well below tol.
        let t_cancel = (32.0 * TAIL_ROUNDING / (tol * exponent * factors.product)).powf(1.0 / exponent);
        let t = t_cancel.max(32.0 * half_period).min(MAX_TAIL_HALF_PERIODS * half_period);
        (t, TailMode::ExponentialIntegral)
    };

    let body = adaptive_gk15(|t| factors.eval(t), truncation, half_period, tol / 2.0)?;
    let bound = envelope(truncation);
    let (tail, tail_error) = match mode {
        TailMode::Envelope => (0.0, bound),
        TailMode::ExponentialIntegral => {
            let tail = exponential_tail(&factors, truncation);
            (tail, 8.0 * TAIL_ROUNDING * bound + f64::EPSILON * tail.abs())
        }
    };
    let error = body.1 + tail_error;
    if error > tol {
        return Err(Error::Convergence {
            achieved: error,
            requested: tol,
        });
    }
    Ok(SincIntegral {
        value: body.0 + tail,
        error,
        truncation,
        envelope_bound: bound,
        mode,
    })
}

/// `∫_T^∞ ∏ sin(wᵢt)/(wᵢt) dt` via the exponential-integral expansion.
fn exponential_tail(factors: &Factors, t: f64) -> f64 {
    let n = factors.n as u32;
    let scale = t.powi(1 - n as i32);
    let mut sum = Complex64::new(0.0, 0.0);
    for (freq, coeff) in factors.exponentials() {
        if coeff == 0.0 {
            continue;
        }
        sum += coeff * expint_n(n, Complex64::new(0.0, -freq * t));
    }
    // (2i)^{-n} = 2^{-n} i^{-n}
    let i_pow = match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    let total = sum * i_pow * 0.5f64.powi(n as i32) * scale;
    total.re / factors.product
}

/// Generalized exponential integral `Eₙ(z) = ∫₁^∞ e^{-zu} u^{-n} du` for
/// integer `n ≥ 1` and `Re z ≥ 0`, `z ≠ 0` when `n = 1`.
pub fn expint_n(n: u32, z: Complex64) -> Complex64 {
    assert!(n >= 1);
    let nm1 = n - 1;
    if z.norm() == 0.0 {
        assert!(n > 1, "E_1 diverges at 0");
        return Complex64::new(1.0 / f64::from(nm1), 0.0);
    }
    if z.norm() > 2.0 {
        // Continued fraction, modified Lentz.
        let tiny = 1e-300;
        let mut b = z + f64::from(n);
        let mut c = Complex64::new(1.0 / tiny, 0.0);
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..100_000u32 {
            let an = -f64::from(i) * f64::from(nm1 + i);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).norm() < 1e-16 {
                break;
            }
        }
        h * (-z).exp()
    } else {
        let mut ans = if nm1 != 0 {
            Complex64::new(1.0 / f64::from(nm1), 0.0)
        } else {
            -z.ln() - EULER_GAMMA
        };
        let mut fact = Complex64::new(1.0, 0.0);
        for i in 1..1000u32 {
            fact *= -z / f64::from(i);
            let del = if i != nm1 {
                -fact / (f64::from(i) - f64::from(nm1))
            } else {
                let psi = -EULER_GAMMA + (1..=nm1).map(|k| 1.0 / f64::from(k)).sum::<f64>();
                fact * (-z.ln() + psi)
            };
            ans += del;
            if i > nm1 && del.norm() < ans.norm() * 1e-17 {
                break;
            }
        }
        ans
    }
}

// Gauss–Kronrod 7/15 abscissae and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel; returns (integral, |Kronrod − Gauss|).
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive GK15 on `[0, upper]`, starting from panels of width
/// `initial_width`. Bisects the worst panel until the summed error estimate
/// drops to `tol`. Returns (integral, error estimate).
pub fn adaptive_gk15<F: Fn(f64) -> f64>(f: F, upper: f64, initial_width: f64, tol: f64) -> Result<(f64, f64)> {
    let count = ((upper / initial_width).ceil() as usize).clamp(1, MAX_PANELS / 2);
    let width = upper / count as f64;
    let mut heap = BinaryHeap::with_capacity(2 * count);
    let mut total_error = 0.0;
    for k in 0..count {
        let a = k as f64 * width;
        let b = if k + 1 == count { upper } else { a + width };
        let (value, error) = gk15(&f, a, b);
        total_error += error;
        heap.push(Panel { a, b, value, error });
    }
    while total_error > tol {
        if heap.len() >= MAX_PANELS {
            return Err(Error::Convergence {
                achieved: total_error,
                requested: tol,
            });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = gk15(&f, worst.a, mid);
        let (rv, re) = gk15(&f, mid, worst.b);
        total_error += le + re - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Panel { a: mid, b: worst.b, value: rv, error: re });
    }
    // Sum small panels first.
    let mut panels = heap.into_vec();
    panels.sort_by(|x, y| x.value.abs().total_cmp(&y.value.abs()));
    let value = panels.iter().map(|p| p.value).sum();
    let error = panels.iter().map(|p| p.error).sum();
    Ok((value, error))
}
