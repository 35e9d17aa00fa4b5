//! Simultaneous polynomial root finding (Aberth–Ehrlich).

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{ComplexExt, GaussRat, Real, Scalar};

const MAX_ITERATIONS: usize = 2000;

fn horner<R: Real>(c: &[Complex<R>], z: &Complex<R>) -> (Complex<R>, Complex<R>) {
    let zero = Complex::new(R::zero(), R::zero());
    let mut p = zero.clone();
    let mut dp = zero;
    for a in c.iter().rev() {
        dp = dp * z.clone() + p.clone();
        p = p * z.clone() + a.clone();
    }
    (p, dp)
}

/// All roots of a polynomial with simple roots, sorted by real then
/// imaginary part. Multiple roots converge slowly and are refused.
pub fn simple_roots<R: Real>(p: &Poly<Complex<R>>) -> Result<Vec<Complex<R>>> {
    let Some(deg) = p.degree() else {
        return Err(Error::InvalidInput("the zero polynomial has no isolated roots".into()));
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let c: Vec<Complex<R>> = p.monic().coeffs().to_vec();
    // Cauchy bound on the root moduli.
    let bound = c[..deg].iter().fold(R::zero(), |acc, a| acc.max_of(ComplexExt::abs(a))) + R::one();
    let radius = bound / R::from_i64(2);
    let mut z: Vec<Complex<R>> = (0..deg)
        .map(|k| {
            let th = R::two_pi() * R::from_i64(k as i64) / R::from_i64(deg as i64) + R::from_f64(0.4);
            <Complex<R> as ComplexExt<R>>::polar(&radius, &th)
        })
        .collect();
    let eps = R::epsilon() * R::from_i64(1 << 10);
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut biggest = R::zero();
        for k in 0..deg {
            let (v, dv) = horner(&c, &z[k]);
            if v.is_zero() {
                continue;
            }
            let ratio = v / dv;
            let mut sum = Complex::new(R::zero(), R::zero());
            for (j, zj) in z.iter().enumerate() {
                if j != k {
                    sum = sum + Complex::new(R::one(), R::zero()) / (z[k].clone() - zj.clone());
                }
            }
            let w = ratio.clone() / (Complex::new(R::one(), R::zero()) - ratio * sum);
            let scale = ComplexExt::abs(&z[k]).max_of(R::one());
            biggest = biggest.max_of(ComplexExt::abs(&w) / scale);
            z[k] = z[k].clone() - w;
        }
        if biggest < eps {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ToleranceNotMet { tol: eps.to_f64(), estimate: f64::NAN });
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = horner(&c, zk);
            if dv.is_zero() {
                break;
            }
            *zk = zk.clone() - v / dv;
        }
    }
    z.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(z)
}

/// Roots of an exact squarefree polynomial at the working precision.
pub fn exact_simple_roots<R: Real>(p: &Poly<GaussRat>) -> Result<Vec<Complex<R>>> {
    simple_roots(&p.map(|a| a.to_complex::<R>()))
}
