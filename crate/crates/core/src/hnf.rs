//! Row Hermite normal form over ℤ and the integer linear algebra built on it.
//!
//! Matrices are row-major `Vec<Vec<BigInt>>`; a row vector `x` solves
//! `x·M = v` when `v` lies in the row lattice of `M`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

/// `H = U·M` with `U` unimodular and `H` in row Hermite form: the first `rank`
/// rows are nonzero with strictly increasing pivot columns and positive
/// pivots, entries above each pivot are reduced into `[0, pivot)`, and the
/// remaining rows are zero.
#[derive(Debug, Clone)]
pub struct Hermite {
    pub h: Matrix,
    pub u: Matrix,
    pub pivots: Vec<usize>,
}

impl Hermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// `row_i -= q·row_j`, in both `h` and `u`.
fn sub_row(h: &mut Matrix, u: &mut Matrix, i: usize, j: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for m in [h, u] {
        let (src, dst) = if i < j {
            let (a, b) = m.split_at_mut(j);
            (&b[0], &mut a[i])
        } else {
            let (a, b) = m.split_at_mut(i);
            (&a[j], &mut b[0])
        };
        for (d, s) in dst.iter_mut().zip(src) {
            *d -= q * s;
        }
    }
}

pub fn hermite(m: &Matrix, ncols: usize) -> Hermite {
    let rows = m.len();
    let mut h = m.clone();
    let mut u = identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows {
            break;
        }
        // Euclid on the column below row r until a single nonzero entry remains.
        loop {
            let best = (r..rows)
                .filter(|&i| !h[i][col].is_zero())
                .min_by(|&a, &b| h[a][col].abs().cmp(&h[b][col].abs()));
            let Some(best) = best else { break };
            h.swap(r, best);
            u.swap(r, best);
            let mut done = true;
            for i in r + 1..rows {
                if !h[i][col].is_zero() {
                    let q = h[i][col].div_floor(&h[r][col]);
                    sub_row(&mut h, &mut u, i, r, &q);
                    if !h[i][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[r][col].is_zero() {
            continue;
        }
        if h[r][col].is_negative() {
            for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = h[i][col].div_floor(&h[r][col]);
            sub_row(&mut h, &mut u, i, r, &q);
        }
        pivots.push(col);
        r += 1;
    }
    Hermite { h, u, pivots }
}

pub fn rank(m: &Matrix, ncols: usize) -> usize {
    hermite(m, ncols).rank()
}

/// Solution of `x·M = v`, if one exists over ℤ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub x: Vec<BigInt>,
    /// The rows of `M` are independent, so `x` is the only solution.
    pub unique: bool,
}

pub fn solve_left(m: &Matrix, v: &[BigInt]) -> Option<Solution> {
    let ncols = v.len();
    let hf = hermite(m, ncols);
    solve_with(&hf, m.len(), v)
}

/// Same as `solve_left` with a precomputed Hermite form of `M` (`rows` rows).
pub fn solve_with(hf: &Hermite, rows: usize, v: &[BigInt]) -> Option<Solution> {
    let mut rest = v.to_vec();
    let mut y = vec![BigInt::zero(); hf.rank()];
    for (i, &col) in hf.pivots.iter().enumerate() {
        let (q, r) = rest[col].div_rem(&hf.h[i][col]);
        if !r.is_zero() {
            return None;
        }
        for (d, s) in rest.iter_mut().zip(&hf.h[i]) {
            *d -= &q * s;
        }
        y[i] = q;
    }
    if rest.iter().any(|c| !c.is_zero()) {
        return None;
    }
    let mut x = vec![BigInt::zero(); rows];
    for (yi, urow) in y.iter().zip(&hf.u) {
        for (xj, uij) in x.iter_mut().zip(urow) {
            *xj += yi * uij;
        }
    }
    Some(Solution {
        x,
        unique: hf.rank() == rows,
    })
}

/// A basis of the integer left kernel `{x : x·M = 0}`.
pub fn left_kernel(m: &Matrix, ncols: usize) -> Matrix {
    let hf = hermite(m, ncols);
    hf.u[hf.rank()..].to_vec()
}

pub fn mul_row(x: &[BigInt], m: &Matrix, ncols: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); ncols];
    for (xi, row) in x.iter().zip(m) {
        if xi.is_zero() {
            continue;
        }
        for (o, a) in out.iter_mut().zip(row) {
            *o += xi * a;
        }
    }
    out
}

pub fn from_i64(rows: &[&[i64]]) -> Matrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}
