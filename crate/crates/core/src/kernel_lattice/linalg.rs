//! Exact integer linear algebra for small lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Incrementally built set of linearly independent integer vectors.
///
/// Keeps a fraction-free echelon form of the accepted vectors; each row is
/// divided by its content so entries stay small.
#[derive(Debug, Clone, Default)]
pub struct IndependentSet {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl IndependentSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of the vectors already present.
    pub fn try_insert(&mut self, v: &[i64]) -> bool {
        let mut w: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        for (pivot, row) in &self.rows {
            if w[*pivot].is_zero() {
                continue;
            }
            let scale_w = row[*pivot].clone();
            let scale_r = w[*pivot].clone();
            for (wi, ri) in w.iter_mut().zip(row) {
                *wi = &*wi * &scale_w - ri * &scale_r;
            }
            make_primitive(&mut w);
        }
        match w.iter().position(|x| !x.is_zero()) {
            Some(pivot) => {
                self.rows.push((pivot, w));
                true
            }
            None => false,
        }
    }
}

fn make_primitive(w: &mut [BigInt]) {
    let g = w.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in w.iter_mut() {
            *x /= &g;
        }
    }
}

/// Rank of an integer matrix (rows are vectors) by Bareiss elimination.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    bareiss(&mut m).0
}

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn determinant(matrix: &[Vec<BigInt>]) -> BigInt {
    let size = matrix.len();
    if size == 0 {
        return BigInt::one();
    }
    assert!(matrix.iter().all(|r| r.len() == size), "matrix must be square");
    let mut m = matrix.to_vec();
    let (rank, sign) = bareiss(&mut m);
    if rank < size {
        BigInt::zero()
    } else {
        sign * &m[size - 1][size - 1]
    }
}

/// Fraction-free elimination in place; returns the rank and the sign of the
/// row permutation. For a full-rank square matrix the last pivot is the
/// determinant up to that sign.
fn bareiss(m: &mut [Vec<BigInt>]) -> (usize, i32) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut sign = 1;
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&m[i][j] * &m[r][c] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    (r, sign)
}

/// `det(B·Bᵀ)` for a basis given as rows.
pub fn gram_determinant(basis: &[Vec<BigInt>]) -> BigInt {
    let gram: Vec<Vec<BigInt>> = basis
        .iter()
        .map(|u| basis.iter().map(|v| dot(u, v)).collect())
        .collect();
    determinant(&gram)
}

pub fn dot(u: &[BigInt], v: &[BigInt]) -> BigInt {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn dot_q(u: &[BigRational], v: &[BigRational]) -> BigRational {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn round(q: &BigRational) -> BigInt {
    (q + BigRational::new(1.into(), 2.into())).floor().to_integer()
}

/// LLL reduction (δ = 3/4) in exact rational arithmetic. Meant for the small
/// dimensions used here; Gram–Schmidt data is recomputed after each swap.
pub fn lll_reduce(basis: &mut [Vec<BigInt>]) {
    let m = basis.len();
    if m < 2 {
        return;
    }
    let delta = BigRational::new(3.into(), 4.into());
    let (mut mu, mut norms) = gram_schmidt(basis);
    let mut k = 1;
    while k < m {
        for j in (0..k).rev() {
            let q = round(&mu[k][j]);
            if q.is_zero() {
                continue;
            }
            let bj = basis[j].clone();
            for (x, y) in basis[k].iter_mut().zip(&bj) {
                *x -= &q * y;
            }
            let qq = BigRational::from_integer(q);
            for i in 0..j {
                let t = &qq * &mu[j][i];
                mu[k][i] -= t;
            }
            mu[k][j] -= &qq;
        }
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            (mu, norms) = gram_schmidt(basis);
            k = (k - 1).max(1);
        }
    }
}

fn gram_schmidt(basis: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let m = basis.len();
    let rows: Vec<Vec<BigRational>> = basis
        .iter()
        .map(|b| b.iter().cloned().map(BigRational::from_integer).collect())
        .collect();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut norms: Vec<BigRational> = Vec::with_capacity(m);
    let mut mu = vec![vec![BigRational::zero(); m]; m];
    for i in 0..m {
        let mut v = rows[i].clone();
        for j in 0..i {
            let coeff = dot_q(&rows[i], &star[j]) / &norms[j];
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= &coeff * y;
            }
            mu[i][j] = coeff;
        }
        let norm = dot_q(&v, &v);
        debug_assert!(norm.is_positive(), "basis must be linearly independent");
        norms.push(norm);
        star.push(v);
    }
    (mu, norms)
}
