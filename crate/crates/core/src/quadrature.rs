//! Adaptive Gauss–Legendre quadrature along resolved paths.

use std::cell::RefCell;
use std::collections::HashMap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::mpf::{with_precision, Mpf};
use crate::path::ResolvedPath;
use crate::scalar::{ComplexExt, Real};

const NODES: usize = 16;
/// Subintervals allowed per piece before giving up.
const MAX_INTERVALS: usize = 1 << 14;

thread_local! {
    static RULES: RefCell<HashMap<usize, Vec<(Mpf, Mpf)>>> = RefCell::new(HashMap::new());
}

/// Nodes and weights on `[0, 1]` computed by Newton iteration on `P_16`.
fn rule_mpf(bits: usize) -> Vec<(Mpf, Mpf)> {
    if let Some(r) = RULES.with(|c| c.borrow().get(&bits).cloned()) {
        return r;
    }
    let rule = with_precision(bits + 32, || {
        let n = NODES as i64;
        let one = Mpf::from_i64(1);
        let two = Mpf::from_i64(2);
        let pi = <Mpf as Real>::pi();
        let eps = <Mpf as Real>::epsilon() * Mpf::from_i64(64);
        let mut out = Vec::with_capacity(NODES);
        for i in 1..=n {
            // Chebyshev-like starting guess for the i-th root.
            let guess = ((Mpf::from_i64(4 * i - 1) * pi.clone()) / Mpf::from_i64(4 * n + 2)).cos();
            let mut x = guess;
            let mut dp = one.clone();
            for _ in 0..100 {
                let mut p0 = one.clone();
                let mut p1 = x.clone();
                for k in 2..=n {
                    let kk = Mpf::from_i64(k);
                    let p2 = ((Mpf::from_i64(2 * k - 1) * x.clone() * p1.clone()) - (Mpf::from_i64(k - 1) * p0.clone())) / kk;
                    p0 = p1;
                    p1 = p2;
                }
                dp = Mpf::from_i64(n) * (x.clone() * p1.clone() - p0) / (x.clone() * x.clone() - one.clone());
                let dx = p1 / dp.clone();
                x = x - dx.clone();
                if dx.abs() < eps {
                    break;
                }
            }
            let w = two.clone() / ((one.clone() - x.clone() * x.clone()) * dp.clone() * dp);
            // Map from [-1, 1] to [0, 1].
            out.push(((one.clone() + x) / two.clone(), w / two.clone()));
        }
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        out
    });
    RULES.with(|c| c.borrow_mut().insert(bits, rule.clone()));
    rule
}

fn rule<R: Real>() -> Vec<(R, R)> {
    let bits = R::precision_bits().max(64);
    rule_mpf(bits).iter().map(|(x, w)| (R::from_mpf(x), R::from_mpf(w))).collect()
}

fn gauss<R: Real, F>(f: &F, rule: &[(R, R)], t0: &R, t1: &R) -> Result<Complex<R>>
where
    F: Fn(&R) -> Result<Complex<R>>,
{
    let h = t1.clone() - t0.clone();
    let mut acc = Complex::new(R::zero(), R::zero());
    for (x, w) in rule {
        let t = t0.clone() + h.clone() * x.clone();
        acc = acc + f(&t)?.scale_by(w);
    }
    Ok(acc.scale_by(&h))
}

/// Integrates `g` over `[0, 1]` to absolute error `tol` by bisection with a
/// fixed left-to-right evaluation and summation order.
pub fn integrate_unit<R: Real, F>(g: F, tol: &R) -> Result<Complex<R>>
where
    F: Fn(&R) -> Result<Complex<R>>,
{
    let rule = rule::<R>();
    let two = R::from_i64(2);
    let mut total = Complex::new(R::zero(), R::zero());
    let mut worst = R::zero();
    let mut stack = vec![(R::zero(), R::one(), gauss(&g, &rule, &R::zero(), &R::one())?)];
    let mut intervals = 0usize;
    while let Some((a, b, whole)) = stack.pop() {
        intervals += 1;
        let mid = (a.clone() + b.clone()) / two.clone();
        let left = gauss(&g, &rule, &a, &mid)?;
        let right = gauss(&g, &rule, &mid, &b)?;
        let refined = left.clone() + right.clone();
        let err = ComplexExt::abs(&(refined.clone() - whole));
        let local_tol = tol.clone() * (b.clone() - a.clone());
        if err <= local_tol || intervals >= MAX_INTERVALS {
            if err > local_tol {
                worst = worst.max_of(err);
                return Err(Error::ToleranceNotMet { tol: tol.to_f64(), estimate: worst.to_f64() });
            }
            total = total + refined;
            continue;
        }
        // Right half pushed first so the left half is processed first.
        stack.push((mid.clone(), b, right));
        stack.push((a, mid, left));
    }
    Ok(total)
}

/// `∫_γ f(z) dz` along every piece of the path, with the tolerance shared
/// equally between pieces.
pub fn integrate_path<R: Real, F>(f: F, path: &ResolvedPath<R>, tol: &R) -> Result<Complex<R>>
where
    F: Fn(&Complex<R>) -> Result<Complex<R>>,
{
    let per_piece = tol.clone() / R::from_i64(path.pieces.len().max(1) as i64);
    let mut total = Complex::new(R::zero(), R::zero());
    for piece in &path.pieces {
        let g = |t: &R| -> Result<Complex<R>> { Ok(f(&piece.point(t))? * piece.velocity(t)) };
        total = total + integrate_unit(g, &per_piece)?;
    }
    Ok(total)
}
