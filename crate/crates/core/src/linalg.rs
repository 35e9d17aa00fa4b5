//! Dense linear algebra over [`Scalar`] fields, numeric rank by SVD, and
//! integer Hermite normal forms.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::scalar::{Real, Scalar};

/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOLERANCE: f64 = 1e-10;

fn pivot_row<S: Scalar>(m: &[Vec<S>], start: usize, col: usize) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (r, row) in m.iter().enumerate().skip(start) {
        if row[col].is_zero() {
            continue;
        }
        let mag = row[col].magnitude();
        if best.map_or(true, |(_, b)| mag > b) {
            best = Some((r, mag));
        }
        if S::EXACT {
            break;
        }
    }
    best.map(|(r, _)| r)
}

/// Reduced row-echelon form and pivot columns.
pub fn rref<S: Scalar>(rows: &[Vec<S>]) -> (Vec<Vec<S>>, Vec<usize>) {
    let mut m: Vec<Vec<S>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let scale = m
        .iter()
        .flatten()
        .fold(S::zero(), |acc, x| if x.magnitude() > acc.magnitude() { x.clone() } else { acc });
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = pivot_row(&m, r, c) else { continue };
        if m[p][c].is_negligible(&scale) {
            for row in m.iter_mut().skip(r) {
                row[c] = S::zero();
            }
            continue;
        }
        m.swap(r, p);
        let inv = S::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let v = m[r][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - v;
                }
                m[i][c] = S::zero();
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank_by_elimination<S: Scalar>(rows: &[Vec<S>]) -> usize {
    rref(rows).1.len()
}

pub fn is_rref<S: Scalar>(rows: &[Vec<S>]) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero_row = false;
    for (i, row) in rows.iter().enumerate() {
        match row.iter().position(|x| !x.is_zero()) {
            None => seen_zero_row = true,
            Some(p) => {
                if seen_zero_row || last_pivot.map_or(false, |l| p <= l) || !row[p].is_one() {
                    return false;
                }
                if rows.iter().enumerate().any(|(k, other)| k != i && !other[p].is_zero()) {
                    return false;
                }
                last_pivot = Some(p);
            }
        }
    }
    true
}

/// Basis of the right kernel `{v : rows·v = 0}`.
pub fn nullspace<S: Scalar>(rows: &[Vec<S>], ncols: usize) -> Vec<Vec<S>> {
    if rows.is_empty() {
        return (0..ncols)
            .map(|i| (0..ncols).map(|j| if i == j { S::one() } else { S::zero() }).collect())
            .collect();
    }
    let (m, pivots) = rref(rows);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![S::zero(); ncols];
        v[free] = S::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `a·x = b`, returning one solution if the system is consistent.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let aug: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (m, pivots) = rref(&aug);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![S::zero(); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = m[r][ncols].clone();
    }
    Some(x)
}

pub fn mat_vec<S: Scalar>(a: &[Vec<S>], v: &[S]) -> Vec<S> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone()))
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    let ncols = a.first().map_or(0, |r| r.len());
    (0..ncols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Singular values of a real matrix by one-sided Jacobi rotations, descending.
pub fn singular_values<R: Real>(a: &[Vec<R>]) -> Vec<R> {
    let mut cols = transpose(a);
    let n = cols.len();
    let eps = R::epsilon();
    let dot = |u: &[R], v: &[R]| u.iter().zip(v).fold(R::zero(), |acc, (x, y)| acc + x.clone() * y.clone());
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma.is_zero() || gamma.abs() <= eps.clone() * (alpha.clone() * beta.clone()).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (gamma * R::from_i64(2));
                let sign = if zeta < R::zero() { -R::one() } else { R::one() };
                let t = sign / (zeta.abs() + (R::one() + zeta.clone() * zeta).sqrt());
                let c = R::one() / (R::one() + t.clone() * t.clone()).sqrt();
                let s = c.clone() * t;
                for k in 0..cols[p].len() {
                    let x = cols[p][k].clone();
                    let y = cols[q][k].clone();
                    cols[p][k] = c.clone() * x.clone() - s.clone() * y.clone();
                    cols[q][k] = s.clone() * x + c.clone() * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<R> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

/// Numeric rank of a complex matrix: singular values of the realified matrix
/// `[[Re, -Im], [Im, Re]]` relative to the largest, then halved.
pub fn numeric_rank<R: Real>(rows: &[Vec<Complex<R>>], rel_tol: &R) -> usize {
    numeric_rank_scaled(rows, rel_tol, &R::zero())
}

/// As [`numeric_rank`], with singular values measured against
/// `max(σ_max, scale)` so that a matrix of pure rounding noise has rank 0.
pub fn numeric_rank_scaled<R: Real>(rows: &[Vec<Complex<R>>], rel_tol: &R, scale: &R) -> usize {
    let (r, c) = (rows.len(), rows.first().map_or(0, |x| x.len()));
    if r == 0 || c == 0 {
        return 0;
    }
    let mut real = vec![vec![R::zero(); 2 * c]; 2 * r];
    for i in 0..r {
        for j in 0..c {
            let z = &rows[i][j];
            real[i][j] = z.re.clone();
            real[i][j + c] = -z.im.clone();
            real[i + r][j] = z.im.clone();
            real[i + r][j + c] = z.re.clone();
        }
    }
    let sv = singular_values(&real);
    let Some(top) = sv.first().cloned() else { return 0 };
    if top.is_zero() {
        return 0;
    }
    let cut = top.max_of(scale.clone()) * rel_tol.clone();
    sv.iter().filter(|s| **s > cut).count() / 2
}

/// Row-style Hermite normal form of an integer matrix; zero rows are dropped.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            // Move the smallest nonzero entry of column c (rows r..) into row r.
            let mut best: Option<usize> = None;
            for i in r..m.len() {
                if !m[i][c].is_zero() && best.map_or(true, |b| m[i][c].abs() < m[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap(r, b);
            let mut done = true;
            for i in (r + 1)..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let f = m[i][c].div_floor(&m[r][c]);
                for j in 0..ncols {
                    let v = &f * &m[r][j];
                    m[i][j] -= v;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let f = m[i][c].div_floor(&m[r][c]);
                if !f.is_zero() {
                    for j in 0..ncols {
                        let v = &f * &m[r][j];
                        m[i][j] -= v;
                    }
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|x| !x.is_zero()));
    m
}

pub fn identity<S: Scalar>(n: usize) -> Vec<Vec<S>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect()
}
