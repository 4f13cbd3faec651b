//! Shell enumeration of kernel vectors in the maximum norm.

use crate::{Error, Result};

/// Limits on exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Search-tree nodes visited across all shells.
    pub max_nodes: u64,
    /// Largest shell radius tried.
    pub max_radius: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 500_000_000,
            max_radius: 1_000_000,
        }
    }
}

/// Enumerates `x ∈ ℤᵐ` with `a·x = 0` and `‖x‖_∞ = radius` for a form with
/// all coefficients nonzero.
///
/// One coordinate (the largest `|aᵢ|`) is solved for; the others are visited
/// depth first in decreasing `|aᵢ|` order, pruning partial sums that the
/// remaining coordinates can no longer cancel.
pub(crate) struct ShellSearch<'a> {
    coeffs: &'a [i64],
    pivot: usize,
    order: Vec<usize>,
    pub nodes: u64,
}

impl<'a> ShellSearch<'a> {
    pub fn new(coeffs: &'a [i64]) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c != 0));
        let pivot = (0..coeffs.len())
            .max_by_key(|&i| (coeffs[i].unsigned_abs(), std::cmp::Reverse(i)))
            .expect("nonempty form");
        let mut order: Vec<usize> = (0..coeffs.len()).filter(|&i| i != pivot).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(coeffs[i].unsigned_abs()), i));
        ShellSearch {
            coeffs,
            pivot,
            order,
            nodes: 0,
        }
    }

    /// Vectors of the given shell with positive leading nonzero entry, sorted
    /// lexicographically.
    pub fn shell(&mut self, radius: u64, node_limit: u64) -> Result<Vec<Vec<i64>>> {
        let r = i64::try_from(radius).map_err(|_| Error::limit("radius overflow"))?;
        let m = self.coeffs.len();
        // capacity[k] = largest |Σ| the coordinates order[k..] and the pivot can cancel
        let mut capacity = vec![0i128; self.order.len() + 1];
        let pivot_cap = i128::from(r) * i128::from(self.coeffs[self.pivot].unsigned_abs() as i64);
        capacity[self.order.len()] = pivot_cap;
        for k in (0..self.order.len()).rev() {
            capacity[k] = capacity[k + 1] + i128::from(r) * i128::from(self.coeffs[self.order[k]].abs());
        }
        let mut x = vec![0i64; m];
        let mut found = Vec::new();
        self.descend(0, 0, 0, r, &capacity, &mut x, &mut found, node_limit)?;
        found.sort();
        Ok(found)
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &mut self,
        depth: usize,
        partial: i128,
        max_abs: i64,
        r: i64,
        capacity: &[i128],
        x: &mut [i64],
        found: &mut Vec<Vec<i64>>,
        node_limit: u64,
    ) -> Result<()> {
        self.nodes += 1;
        if self.nodes > node_limit {
            return Err(Error::limit(format!("enumeration exceeded {node_limit} nodes")));
        }
        if partial.abs() > capacity[depth] {
            return Ok(());
        }
        if depth == self.order.len() {
            let a_p = i128::from(self.coeffs[self.pivot]);
            if partial % a_p != 0 {
                return Ok(());
            }
            let xp = -partial / a_p;
            if xp.abs() > i128::from(r) {
                return Ok(());
            }
            let xp = xp as i64;
            if max_abs.max(xp.abs()) != r {
                return Ok(());
            }
            x[self.pivot] = xp;
            if x.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0) {
                found.push(x.to_vec());
            }
            x[self.pivot] = 0;
            return Ok(());
        }
        let idx = self.order[depth];
        let c = i128::from(self.coeffs[idx]);
        for v in -r..=r {
            x[idx] = v;
            self.descend(
                depth + 1,
                partial + c * i128::from(v),
                max_abs.max(v.abs()),
                r,
                capacity,
                x,
                found,
                node_limit,
            )?;
        }
        x[idx] = 0;
        Ok(())
    }
}
