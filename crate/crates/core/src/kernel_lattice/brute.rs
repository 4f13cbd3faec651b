//! Exhaustive scan of the box `‖x‖_∞ ≤ radius`; ground truth for the
//! shell enumeration.

use num_bigint::BigInt;
use serde::Serialize;

use super::linalg::rank;
use super::LinearForm;
use crate::{Error, Result};

/// Largest number of box points the scan will visit.
pub const MAX_BOX_POINTS: u64 = 2_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Shell {
    pub norm: u64,
    /// Every kernel vector of this max norm, both signs, sorted.
    pub vectors: Vec<Vec<i64>>,
}

/// All `x` with `‖x‖_∞ ≤ radius` and `a·x = 0`, grouped into shells
/// `1..=radius` (empty shells included).
pub fn brute_force_minima(a: &LinearForm, radius: u64) -> Result<Vec<Shell>> {
    let n = a.n();
    let side = 2 * radius + 1;
    let points = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(side));
    match points {
        Some(p) if p <= MAX_BOX_POINTS => {}
        _ => {
            return Err(Error::limit(format!(
                "box of radius {radius} in dimension {n} exceeds {MAX_BOX_POINTS} points"
            )))
        }
    }
    let coeffs = a.coeffs_i64()?;
    let r = radius as i64;
    let mut shells: Vec<Shell> = (1..=radius)
        .map(|norm| Shell {
            norm,
            vectors: Vec::new(),
        })
        .collect();
    let mut x = vec![-r; n];
    loop {
        let dot: i128 = coeffs.iter().zip(&x).map(|(&c, &v)| i128::from(c) * i128::from(v)).sum();
        if dot == 0 {
            let norm = x.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
            if norm > 0 {
                shells[(norm - 1) as usize].vectors.push(x.clone());
            }
        }
        // odometer
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(shells);
            }
            i -= 1;
            if x[i] < r {
                x[i] += 1;
                break;
            }
            x[i] = -r;
        }
    }
}

/// Successive minima read off the scanned shells: `λᵢ` is the first norm at
/// which the vectors found so far span dimension `i`. `None` if the scan
/// radius was too small to reach full rank `n - 1`.
pub fn minima_from_shells(shells: &[Shell], n: usize) -> Option<Vec<u64>> {
    let target = n.checked_sub(1)?;
    let mut lambdas = Vec::with_capacity(target);
    let mut seen: Vec<Vec<BigInt>> = Vec::new();
    let mut current = 0;
    for shell in shells {
        seen.extend(
            shell
                .vectors
                .iter()
                .map(|v| v.iter().map(|&x| BigInt::from(x)).collect()),
        );
        let r = rank(&seen);
        while current < r.min(target) {
            lambdas.push(shell.norm);
            current += 1;
        }
        if current == target {
            return Some(lambdas);
        }
    }
    if target == 0 {
        Some(lambdas)
    } else {
        None
    }
}
