//! Seeded generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use mero_core::mpf::Mpf;
use mero_core::path::IntegrationPath;
use mero_core::periods::{closed_form_integral, closed_form_period, default_path, quadrature_period};
use mero_core::poly::Poly;
use mero_core::ratfunc::RationalFunction;
use mero_core::varieties::cover::{pullback_by_cover, BasePoint, CoverSpec};
use mero_core::varieties::dlog::dlog_differential;
use mero_core::varieties::dlog::rational_map;
use mero_core::varieties::linear::LinearVarietySpec;
use mero_core::scalar::{gq, ComplexExt, Real, Scalar};
use mero_core::strata::{residues, validate_signature, DiffConfig, Normalization};
use mero_core::{BigComplex, ExactConfig, GaussianRational, Rational};
use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn g(re: Rational, im: Rational) -> GaussianRational {
    Complex::new(re, im)
}

/// A point of the grid `(Z + Z i)/4` in the box `|re|, |im| ≤ 3`.
pub fn grid_point(rng: &mut ChaCha8Rng) -> GaussianRational {
    g(q(rng.gen_range(-12..=12), 4), q(rng.gen_range(-12..=12), 4))
}

fn far_from(z: &GaussianRational, others: &[GaussianRational], d: f64) -> bool {
    others.iter().all(|o| {
        let w = z.clone() - o.clone();
        let n2 = w.re.clone() * w.re.clone() + w.im.clone() * w.im.clone();
        num_traits::ToPrimitive::to_f64(&n2).unwrap() >= d * d
    })
}

/// Random exact configuration of signature `mu`, with marked points at
/// mutual distance at least 1/2. Canonical mode fixes `x_0 = 0`, `y_0 = 1`.
pub fn random_config(rng: &mut ChaCha8Rng, mu: &[i64], canonical: bool) -> ExactConfig {
    let sig = validate_signature(mu).unwrap();
    let (nz, np) = (sig.num_zeros(), sig.num_finite_poles());
    loop {
        let mut pts: Vec<GaussianRational> = Vec::new();
        if canonical {
            pts.push(gq(0, 1));
        }
        while pts.len() < nz + np {
            if canonical && pts.len() == nz {
                if !far_from(&gq(1, 1), &pts, 0.5) {
                    break;
                }
                pts.push(gq(1, 1));
                continue;
            }
            let z = grid_point(rng);
            if far_from(&z, &pts, 0.5) {
                pts.push(z);
            }
        }
        if pts.len() < nz + np {
            continue;
        }
        let mut lambda = grid_point(rng);
        if lambda.is_zero() {
            lambda = gq(1, 1);
        }
        let norm = if canonical { Normalization::Canonical } else { Normalization::Free };
        let poles = pts.split_off(nz);
        if let Ok(c) = DiffConfig::new(sig.clone(), lambda, pts, poles, norm) {
            return c;
        }
    }
}

// Polynomials as ascending coefficient vectors over Q(i).

pub fn pmul(a: &[GaussianRational], b: &[GaussianRational]) -> Vec<GaussianRational> {
    let mut out = vec![GaussianRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

pub fn pfrom_roots(roots: &[(GaussianRational, usize)]) -> Vec<GaussianRational> {
    let mut p = vec![GaussianRational::one()];
    for (r, e) in roots {
        for _ in 0..*e {
            p = pmul(&p, &[-r.clone(), GaussianRational::one()]);
        }
    }
    p
}

fn orders(cfg: &ExactConfig) -> (Vec<usize>, Vec<usize>) {
    (cfg.signature.zero_orders(), cfg.signature.pole_orders())
}

/// `R_j = λ ∏ (y_j − x_i)^{e_i} / ∏_{k≠j} (y_j − y_k)^{e_k}` at a simple pole.
pub fn residue_by_limit(cfg: &ExactConfig, j: usize) -> GaussianRational {
    let (ez, ep) = orders(cfg);
    assert_eq!(ep[j], 1);
    let y = cfg.poles[j].clone();
    let mut v = cfg.lambda.clone();
    for (x, &e) in cfg.zeros.iter().zip(&ez) {
        for _ in 0..e {
            v = v * (y.clone() - x.clone());
        }
    }
    for (k, (yk, &e)) in cfg.poles.iter().zip(&ep).enumerate() {
        if k != j {
            for _ in 0..e {
                v = v / (y.clone() - yk.clone());
            }
        }
    }
    v
}

/// Gauss–Jordan elimination over Q(i) for a square nonsingular system.
pub fn solve_square(mut a: Vec<Vec<GaussianRational>>, mut b: Vec<GaussianRational>) -> Vec<GaussianRational> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("nonsingular system");
        a.swap(c, p);
        b.swap(c, p);
        let inv = GaussianRational::one() / a[c][c].clone();
        for x in a[c].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        b[c] = b[c].clone() * inv;
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..n {
                    let v = a[c][k].clone() * f.clone();
                    a[r][k] = a[r][k].clone() - v;
                }
                b[r] = b[r].clone() - b[c].clone() * f;
            }
        }
    }
    b
}

/// All finite residues from the identity
/// `N = P·D + Σ_k Σ_j a_kj D/(z − y_k)^j`, solved as a linear system in the
/// coefficients of `P` and the `a_kj`.
pub fn residues_by_linear_solve(cfg: &ExactConfig) -> Vec<GaussianRational> {
    let (ez, ep) = orders(cfg);
    let zf: Vec<_> = cfg.zeros.iter().cloned().zip(ez).collect();
    let pf: Vec<_> = cfg.poles.iter().cloned().zip(ep.clone()).collect();
    let num: Vec<GaussianRational> = pfrom_roots(&zf).into_iter().map(|c| c * cfg.lambda.clone()).collect();
    let den = pfrom_roots(&pf);
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    let np = if dn >= dd { dn - dd + 1 } else { 0 };
    let mut columns: Vec<Vec<GaussianRational>> = Vec::new();
    for i in 0..np {
        let mut mono = vec![GaussianRational::zero(); i + 1];
        mono[i] = GaussianRational::one();
        columns.push(pmul(&mono, &den));
    }
    let mut index = Vec::new();
    for (k, &e) in ep.iter().enumerate() {
        for j in 1..=e {
            let mut rest: Vec<_> = pf.clone();
            rest[k].1 -= j;
            columns.push(pfrom_roots(&rest));
            index.push((k, j));
        }
    }
    let size = if np > 0 { dn + 1 } else { dd };
    let n = columns.len();
    assert_eq!(n, size, "square system");
    let a: Vec<Vec<GaussianRational>> = (0..size)
        .map(|r| columns.iter().map(|c| c.get(r).cloned().unwrap_or_else(GaussianRational::zero)).collect())
        .collect();
    let b: Vec<GaussianRational> = (0..size).map(|r| num.get(r).cloned().unwrap_or_else(GaussianRational::zero)).collect();
    let x = solve_square(a, b);
    let mut res = vec![GaussianRational::zero(); ep.len()];
    for (v, &(k, j)) in x[np..].iter().zip(&index) {
        if j == 1 {
            res[k] = v.clone();
        }
    }
    res
}

/// `−[z^{−1}]` of the Laurent expansion at `∞`, via power-series division of
/// the reversed numerator and denominator.
pub fn residue_at_infinity_by_series(cfg: &ExactConfig) -> GaussianRational {
    let (ez, ep) = orders(cfg);
    let zf: Vec<_> = cfg.zeros.iter().cloned().zip(ez).collect();
    let pf: Vec<_> = cfg.poles.iter().cloned().zip(ep).collect();
    let num: Vec<GaussianRational> = pfrom_roots(&zf).into_iter().map(|c| c * cfg.lambda.clone()).collect();
    let den = pfrom_roots(&pf);
    let (dn, dd) = (num.len() as i64 - 1, den.len() as i64 - 1);
    // N/D = t^{dd − dn} · Nr(t)/Dr(t) with t = 1/z; we need the t^1 term.
    let s = 1 + dn - dd;
    if s < 0 {
        return GaussianRational::zero();
    }
    let nr: Vec<_> = num.iter().rev().cloned().collect();
    let dr: Vec<_> = den.iter().rev().cloned().collect();
    let mut series: Vec<GaussianRational> = Vec::new();
    for i in 0..=(s as usize) {
        let mut c = nr.get(i).cloned().unwrap_or_else(GaussianRational::zero);
        for k in 1..=i {
            if let Some(d) = dr.get(k) {
                c = c - d.clone() * series[i - k].clone();
            }
        }
        series.push(c / dr[0].clone());
    }
    -series[s as usize].clone()
}

pub fn mpf_c(re: f64, im: f64) -> BigComplex {
    Complex::new(Mpf::from_f64(re), Mpf::from_f64(im))
}

/// `∫_0^1 z(z − 1)/(z − 2)² dz = 2 − 3 ln 2`, from the antiderivative
/// `z + 3 ln(z − 2) − 2/(z − 2)`.
pub fn antiderivative_value() -> Mpf {
    Mpf::from_i64(2) - Mpf::from_i64(3) * <Mpf as Real>::ln(&Mpf::from_i64(2))
}

/// A canonical point of `St(1, 1, −1, −1, −1, −1)` on the residue variety
/// `R_j = q_j R_0`: with `r_j = R_j/λ`, matching coefficients in
/// `z(z − x_1) = Σ r_j ∏_{k≠j}(z − y_k)` gives
/// `y_2 = −q_2 y_1/(y_1 + q_1)` and `x_1 = Σ_j r_j Σ_{k≠j} y_k`.
pub fn residue_variety_point(y1: &GaussianRational, q1: &Rational, q2: &Rational, lambda: &GaussianRational) -> Option<ExactConfig> {
    let qq1 = g(q1.clone(), Rational::zero());
    let qq2 = g(q2.clone(), Rational::zero());
    if (y1.clone() + qq1.clone()).is_zero() {
        return None;
    }
    let one = gq(1, 1);
    let y2 = -(qq2.clone() * y1.clone()) / (y1.clone() + qq1.clone());
    let r0 = one.clone() / (one.clone() + qq1.clone() + qq2.clone());
    let x1 = r0.clone() * (y1.clone() + y2.clone())
        + r0.clone() * qq1 * (one.clone() + y2.clone())
        + r0 * qq2 * (one.clone() + y1.clone());
    let sig = validate_signature(&[1, 1, -1, -1, -1, -1]).unwrap();
    DiffConfig::new(sig, lambda.clone(), vec![gq(0, 1), x1], vec![one, y1.clone(), y2], Normalization::Canonical).ok()
}

/// `∏_j w_1j^{e_j}` for `w_1j = (y_j − x_1)/y_j`.
pub fn monomial(cfg: &ExactConfig, e: &[i64]) -> GaussianRational {
    let x1 = cfg.zeros[1].clone();
    cfg.poles.iter().zip(e).fold(gq(1, 1), |acc, (y, &k)| {
        let w = (y.clone() - x1.clone()) / y.clone();
        let mut p = gq(1, 1);
        for _ in 0..k.unsigned_abs() {
            p = p * w.clone();
        }
        if k < 0 {
            acc / p
        } else {
            acc * p
        }
    })
}

/// `d` with `exp(−2πi d) = c`: `d = i·Log(c)/(2π)`, rounded to an exact
/// rational pair far below the working tolerance.
pub fn turns_for(c: &GaussianRational) -> GaussianRational {
    let cz: BigComplex = Complex::new(Mpf::from_rational(&c.re), Mpf::from_rational(&c.im));
    let l = ComplexExt::ln(&cz);
    let tp = <Mpf as Real>::two_pi();
    let re = -(l.im / tp.clone());
    let im = l.re / tp;
    g(mero_core::scalar::mpf_to_rational(&re), mero_core::scalar::mpf_to_rational(&im))
}

/// A point of `Z_H` for the row `c = (1)`, `d = (d_0, 0, 0)` together with
/// its spec, or `None` when the sampled `y_1` is degenerate.
pub fn zh_member(y1: &GaussianRational, q1: i64, q2: i64) -> Option<(ExactConfig, LinearVarietySpec)> {
    let cfg = residue_variety_point(y1, &q(q1, 1), &q(q2, 1), &gq(1, 1))?;
    let c = monomial(&cfg, &[1, q1, q2]);
    if c.is_zero() {
        return None;
    }
    let spec = LinearVarietySpec::new(
        vec![vec![q(1, 1)]],
        vec![vec![turns_for(&c), gq(0, 1), gq(0, 1)]],
        vec![q(q1, 1), q(q2, 1)],
    )
    .ok()?;
    Some((cfg, spec))
}

pub fn random_y1(r: &mut ChaCha8Rng) -> GaussianRational {
    g(q(r.gen_range(-12..=12), 4), q(r.gen_range(1..=12), 4))
}

pub fn square_cover() -> CoverSpec {
    CoverSpec::new(Poly::new(vec![gq(0, 1), gq(0, 1), gq(1, 1)]), Poly::new(vec![gq(1, 1)])).unwrap()
}

/// `λ(z − x)/(z(z − y))`: a simple pole at the branch value `0` of `u²`.
pub fn random_cover_base(r: &mut ChaCha8Rng) -> ExactConfig {
    let sig = validate_signature(&[1, -1, -1, -1]).unwrap();
    loop {
        let x = grid_point(r);
        let y = grid_point(r);
        let lambda = g(q(r.gen_range(1..=6), 2), q(r.gen_range(-4..=4), 2));
        if x.is_zero() || y.is_zero() || x == y {
            continue;
        }
        if let Ok(cfg) = DiffConfig::new(sig.clone(), lambda, vec![x], vec![gq(0, 1), y], Normalization::Free) {
            return cfg;
        }
    }
}

/// `∫_γ f*ω` against `∫_{f∘γ} ω`, with `f∘γ` sampled finely.
pub fn pullback_gap(base: &ExactConfig, cover: &CoverSpec, a: &BigComplex, b: &BigComplex) -> f64 {
    let pb = pullback_by_cover::<Mpf>(base, cover).unwrap();
    let up = closed_form_integral(&pb.config, &IntegrationPath::new(vec![a.clone(), b.clone()])).unwrap();
    let num = cover.map.numerator().map(|c| c.to_complex::<Mpf>());
    let den = cover.map.denominator().map(|c| c.to_complex::<Mpf>());
    let steps = 400;
    let image: Vec<BigComplex> = (0..=steps)
        .map(|s| {
            let t = Mpf::from_i64(s) / Mpf::from_i64(steps);
            let u = a.clone() + (b.clone() - a.clone()).scale_by(&t);
            num.eval(&u) / den.eval(&u)
        })
        .collect();
    let down = closed_form_integral(base, &IntegrationPath::new(image)).unwrap();
    ComplexExt::abs(&(up - down)).to_f64()
}

/// A random map of degree at most five with its zeros and poles as built.
pub fn random_map(r: &mut ChaCha8Rng) -> (Vec<(GaussianRational, usize)>, Vec<(GaussianRational, usize)>, GaussianRational) {
    loop {
        let mut used: Vec<GaussianRational> = Vec::new();
        let mut side = |budget: usize, r: &mut ChaCha8Rng| {
            let mut left = r.gen_range(0..=budget);
            let mut roots = Vec::new();
            while left > 0 {
                let p = grid_point(r);
                if used.contains(&p) {
                    continue;
                }
                let k = r.gen_range(1..=left);
                used.push(p.clone());
                roots.push((p, k));
                left -= k;
            }
            roots
        };
        let zeros = side(5, r);
        let poles = side(5, r);
        if zeros.is_empty() && poles.is_empty() {
            continue;
        }
        let c = g(q(r.gen_range(1..=5), 1), q(r.gen_range(-3..=3), 2));
        return (zeros, poles, c);
    }
}

pub fn map_from(zeros: &[(GaussianRational, usize)], poles: &[(GaussianRational, usize)], c: &GaussianRational) -> RationalFunction<GaussianRational> {
    let num: Vec<_> = pfrom_roots(zeros).into_iter().map(|a| a * c.clone()).collect();
    rational_map(num, pfrom_roots(poles)).unwrap()
}

/// `log_2 |f(c + h) − f(c)| / |f(c + h/2) − f(c)|`, rounded.
pub fn numeric_local_degree(eval: &dyn Fn(&BigComplex) -> BigComplex, c: &BigComplex) -> usize {
    let h = mpf_c(1e-7, 3e-8);
    let f0 = eval(c);
    let d1 = ComplexExt::abs(&(eval(&(c.clone() + h.clone())) - f0.clone()));
    let d2 = ComplexExt::abs(&(eval(&(c.clone() + h.scale_by(&Mpf::from_f64(0.5)))) - f0));
    (d1 / d2).to_f64().log2().round() as usize
}

pub fn example_family(alpha: GaussianRational, lambda: GaussianRational) -> ExactConfig {
    let sig = validate_signature(&[1, 1, -1, -1, -1, -1]).unwrap();
    DiffConfig::new(sig, lambda, vec![gq(1, 1), gq(-1, 1)], vec![gq(0, 1), alpha.clone(), -alpha], Normalization::Free).unwrap()
}

pub fn max_oracle_gap(cfg: &ExactConfig) -> f64 {
    let tol = Mpf::from_f64(1e-12);
    (1..cfg.zeros.len())
        .map(|j| {
            let path = default_path::<_, Mpf>(cfg, j);
            let c = closed_form_period(cfg, j, &path).unwrap();
            let q = quadrature_period(cfg, &path, &tol).unwrap();
            ComplexExt::abs(&(c - q)).to_f64()
        })
        .fold(0.0, f64::max)
}

/// `x_0 → p → (loop around y_k) → p → x_j` against the same path without
/// the loop, where `p = y_k + 1/5`.
pub fn branch_shift(cfg: &ExactConfig, j: usize, k: usize) -> BigComplex {
    let x0: BigComplex = cfg.zeros[0].to_complex();
    let xj: BigComplex = cfg.zeros[j].to_complex();
    let y: BigComplex = cfg.poles[k].to_complex();
    let radius = Mpf::from_f64(0.2);
    let p = y.clone() + Complex::new(radius.clone(), Mpf::from_i64(0));
    let plain = IntegrationPath::new(vec![x0.clone(), p.clone(), xj.clone()]);
    let mut pts = vec![x0, p.clone()];
    for s in 1..32 {
        let th = <Mpf as Real>::two_pi() * Mpf::from_i64(s) / Mpf::from_i64(32);
        pts.push(y.clone() + <BigComplex as ComplexExt<Mpf>>::polar(&radius, &th));
    }
    pts.push(p);
    pts.push(xj);
    let looped = IntegrationPath::new(pts);
    closed_form_period(cfg, j, &looped).unwrap() - closed_form_period(cfg, j, &plain).unwrap()
}

pub fn random_alpha(r: &mut rand_chacha::ChaCha8Rng) -> GaussianRational {
    loop {
        let a = g(q(r.gen_range(-40..=40), r.gen_range(1..=9)), q(0, 1));
        let bad = [0, 1, -1].iter().any(|&v| a == gq(v, 1));
        if !bad {
            return a;
        }
    }
}

/// Exact residues of `u²`-pullbacks: `e·R` over a pole or `∞` with
/// ramification `e`, and two equal residues over the unramified pole `y_1`.
pub fn check_cover_residues(base: &ExactConfig) -> Result<(), String> {
    let res = residues(base).map_err(|e| e.to_string())?;
    let pb = pullback_by_cover::<Mpf>(base, &square_cover()).map_err(|e| e.to_string())?;
    for (grp, over) in pb.groups.iter().zip(&pb.over) {
        let want = match over {
            BasePoint::Pole(k) => res.finite[*k].clone(),
            BasePoint::Infinity => res.at_infinity.clone(),
            BasePoint::Zero(_) => continue,
        };
        if grp.exact_residue != Some(gq(grp.local_degree as i64, 1) * want) {
            return Err(format!("residue over {over:?}"));
        }
    }
    let unram = pb.over.iter().position(|o| *o == BasePoint::Pole(1)).ok_or("no group over y_1")?;
    if pb.points[unram].len() != 2 || pb.groups[unram].local_degree != 1 {
        return Err("unramified pole does not have two simple preimages".into());
    }
    if pb.groups[unram].exact_residue != Some(res.finite[1].clone()) {
        return Err("residues over the unramified pole differ from R_1".into());
    }
    Ok(())
}

/// `d log f` against the zeros and poles `f` was built from, and critical
/// orders against a numerical local degree.
pub fn check_dlog(zeros: &[(GaussianRational, usize)], poles: &[(GaussianRational, usize)], c: &GaussianRational) -> Result<(), String> {
    let f = map_from(zeros, poles, c);
    let lg = dlog_differential::<Mpf>(&f).map_err(|e| e.to_string())?;
    for (roots, sign) in [(zeros, 1i64), (poles, -1i64)] {
        for (a, k) in roots {
            let gi = lg
                .groups
                .iter()
                .position(|grp| grp.factor.as_ref().map_or(false, |p| p.eval(a).is_zero()))
                .ok_or("marked root not found")?;
            let want = sign * *k as i64;
            if lg.f_orders[gi] != want || lg.groups[gi].exact_residue != Some(gq(want, 1)) {
                return Err(format!("residue at {a:?} is not {want}"));
            }
        }
    }
    let deg_n: usize = zeros.iter().map(|z| z.1).sum();
    let deg_d: usize = poles.iter().map(|z| z.1).sum();
    let inf_order = deg_d as i64 - deg_n as i64;
    let inf = lg.groups.len() - 1;
    if lg.f_orders[inf] != inf_order {
        return Err("order of f at infinity".into());
    }
    if inf_order != 0 && lg.groups[inf].exact_residue != Some(gq(inf_order, 1)) {
        return Err("residue at infinity".into());
    }
    let num = f.numerator().map(|x| x.to_complex::<Mpf>());
    let den = f.denominator().map(|x| x.to_complex::<Mpf>());
    let finite = |z: &BigComplex| num.eval(z) / den.eval(z);
    let at_inf = |t: &BigComplex| {
        let z = BigComplex::new(Mpf::from_i64(1), Mpf::from_i64(0)) / t.clone();
        num.eval(&z) / den.eval(&z)
    };
    for (gi, grp) in lg.groups.iter().enumerate() {
        if lg.f_orders[gi] != 0 {
            continue;
        }
        let want = if grp.is_infinity() {
            numeric_local_degree(&at_inf, &mpf_c(1e-30, 0.0))
        } else {
            numeric_local_degree(&finite, &lg.points[gi][0])
        };
        if grp.local_degree != want || grp.order != want as i64 - 1 {
            return Err(format!("group {gi}: local degree {} order {}, oracle {want}", grp.local_degree, grp.order));
        }
    }
    Ok(())
}
