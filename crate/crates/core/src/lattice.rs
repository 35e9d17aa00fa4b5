//! Exact integral LLL reduction and integer-relation search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::mpf::{with_precision, Mpf};
use crate::scalar::Real;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    // d > 0
    let two = BigInt::from(2);
    (n * &two + d).div_floor(&(d * &two))
}

/// LLL-reduces linearly independent integer rows (δ = 3/4), using only
/// integer arithmetic.
pub fn lll_reduce(basis: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = basis.len();
    let mut b: Vec<Vec<BigInt>> = basis.to_vec();
    if n <= 1 {
        return b;
    }
    // 1-based indices as in the textbook formulation.
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::from(1);
    d[1] = dot(&b[0], &b[0]);
    let mut k = 2;
    let mut kmax = 1;

    fn red(k: usize, l: usize, b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt]) {
        let two_l: BigInt = &lam[k][l] * 2;
        if two_l.abs() > d[l] {
            let q = round_div(&lam[k][l], &d[l]);
            let bl = b[l - 1].clone();
            for (x, y) in b[k - 1].iter_mut().zip(&bl) {
                *x -= &q * y;
            }
            lam[k][l] = &lam[k][l] - &q * &d[l];
            for i in 1..l {
                let v = &q * &lam[l][i];
                lam[k][i] -= v;
            }
        }
    }

    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&b[k - 1], &b[j - 1]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    d[k] = u;
                }
            }
            assert!(!d[k].is_zero(), "LLL input rows must be linearly independent");
        }
        red(k, k - 1, &mut b, &mut lam, &d);
        let lhs = BigInt::from(4) * &d[k] * &d[k - 2];
        let rhs = BigInt::from(3) * &d[k - 1] * &d[k - 1] - BigInt::from(4) * &lam[k][k - 1] * &lam[k][k - 1];
        if lhs < rhs {
            b.swap(k - 1, k - 2);
            for j in 1..k - 1 {
                let t = lam[k][j].clone();
                lam[k][j] = lam[k - 1][j].clone();
                lam[k - 1][j] = t;
            }
            let l = lam[k][k - 1].clone();
            let bb = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
            for i in (k + 1)..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
                lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k];
            }
            d[k - 1] = bb;
            k = if k > 2 { k - 1 } else { 2 };
        } else {
            for l in (1..k - 1).rev() {
                red(k, l, &mut b, &mut lam, &d);
            }
            k += 1;
        }
    }
    b
}

/// Integer vectors `a` with `Σ_i a_i·x_i = 0` in every coordinate, where
/// `x_i` are real vectors given at the working precision. Each returned
/// relation has entries bounded by `bound` and residual below
/// `2^{−bits/2}` relative to the input scale.
pub fn integer_relations(x: &[Vec<Mpf>], bound: u64) -> Vec<Vec<BigInt>> {
    let k = x.len();
    if k == 0 {
        return Vec::new();
    }
    let dims = x[0].len();
    let bits = x[0].first().map_or(crate::mpf::working_precision(), |v| v.precision());
    with_precision(bits, || {
        let scale = Mpf::pow2((bits / 2) as i64);
        let mut basis = Vec::with_capacity(k);
        for (i, xi) in x.iter().enumerate() {
            let mut row: Vec<BigInt> = (0..k).map(|j| BigInt::from((i == j) as i64)).collect();
            for v in xi {
                row.push((v.clone() * scale.clone()).round_to_bigint());
            }
            basis.push(row);
        }
        let reduced = lll_reduce(&basis);
        let magnitude = x
            .iter()
            .flatten()
            .fold(Mpf::from_i64(1), |acc, v| acc.max_of(<Mpf as Real>::abs(v)));
        let cutoff = magnitude * Mpf::pow2(-((bits / 2) as i64)) * Mpf::from_i64(k as i64 + 1);
        let mut out = Vec::new();
        for row in reduced {
            let a = &row[..k];
            if a.iter().all(|c| c.is_zero()) {
                continue;
            }
            if a.iter().any(|c| c.abs().to_u64().map_or(true, |v| v > bound)) {
                continue;
            }
            let ok = (0..dims).all(|t| {
                let s = a.iter().zip(x).fold(Mpf::from_i64(0), |acc, (c, xi)| {
                    acc + Mpf::from_bigint(c) * xi[t].clone()
                });
                <Mpf as Real>::abs(&s) < cutoff
            });
            if ok {
                out.push(a.to_vec());
            }
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn lll_finds_short_basis() {
        let b = vec![bi(&[1, 1, 1]), bi(&[-1, 0, 2]), bi(&[3, 5, 6])];
        let r = lll_reduce(&b);
        let norms: Vec<i64> = r.iter().map(|v| dot(v, v).to_i64().unwrap()).collect();
        assert!(norms[0] <= 3);
        // Same lattice: determinant preserved up to sign.
        assert_eq!(
            crate::linalg::hermite_normal_form(&r),
            crate::linalg::hermite_normal_form(&b)
        );
    }

    #[test]
    fn relation_among_logs() {
        with_precision(256, || {
            let l2 = <Mpf as Real>::ln(&Mpf::from_i64(2));
            let l3 = <Mpf as Real>::ln(&Mpf::from_i64(3));
            let l6 = <Mpf as Real>::ln(&Mpf::from_i64(6));
            let rel = integer_relations(&[vec![l2], vec![l3], vec![l6]], 100);
            assert_eq!(rel.len(), 1);
            let r = &rel[0];
            let sign = if r[2].is_negative() { -1 } else { 1 };
            assert_eq!(r.iter().map(|c| c * sign).collect::<Vec<_>>(), bi(&[-1, -1, 1]));
        });
    }
}
