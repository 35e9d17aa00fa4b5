//! Numerical bi-algebraicity test: compares `dim S` with the rank of the
//! twisted period map `A` on `S × V`.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{nullspace, numeric_rank, numeric_rank_scaled, solve, transpose, RANK_TOLERANCE};
use crate::mpf::{with_precision, Mpf};
use crate::periods::{canonical_parameters, default_step, finite_difference_jacobian, with_canonical_parameters};
use crate::scalar::{ComplexExt, GaussRat, Real, Scalar};
use crate::strata::{residues, DiffConfig};
use crate::torus::{
    apply_t_r, detect_multiplicative_relations, embed, log_point, twisted_period_map, AffineLattice, TorusPoint,
};
use crate::varieties::cover::{pullback_by_cover, BasePoint, CoverSpec, Pullback};

/// Precision at which sample points for relation detection are computed,
/// comfortably above the 512 bits used by the detection itself.
const DETECTION_BITS: usize = 640;

/// A parametrized algebraic family `S` inside a stratum.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// The whole stratum around a canonical configuration.
    FullStratum { base: DiffConfig<GaussRat> },
    /// The fiber of the residue map through a canonical configuration of a
    /// simple-pole stratum.
    ResidueFiber { base: DiffConfig<GaussRat> },
    /// Pullbacks along `cover` of the base configurations obtained by moving
    /// `λ` and every marked point that is not a branch value.
    Cover { base: DiffConfig<GaussRat>, cover: CoverSpec },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankTestOptions {
    pub samples: usize,
    pub seed: u64,
    /// Exponent bound for relation detection when `V` is not supplied.
    pub relation_bound: u64,
}

impl Default for RankTestOptions {
    fn default() -> Self {
        RankTestOptions { samples: 4, seed: 0, relation_bound: 12 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleRanks {
    pub dim_s: usize,
    pub dim_asv: usize,
    pub fib: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankVerdict {
    pub dim_s: usize,
    pub dim_asv: usize,
    pub fib: usize,
    /// `"bi-algebraic-consistent"` iff `dim_asv == dim_s`.
    pub verdict: String,
    /// Set when `V` was found by relation detection.
    pub heuristic: bool,
    /// `fib ≤ dim A(S×V)` and `dim S ≤ dim A(S×V)` at every sample.
    pub inequalities_hold: bool,
    pub per_sample: Vec<SampleRanks>,
    pub lattice: AffineLattice,
}

type C = Complex<Mpf>;

struct Sample {
    config: DiffConfig<C>,
    /// Rows: canonical parameters; columns: tangent directions of `S`.
    tangent: Vec<Vec<C>>,
}

fn perturb(rng: &mut ChaCha8Rng, z: &GaussRat) -> GaussRat {
    let mut step = || BigRational::new(rng.gen_range(-8i64..=8).into(), 64.into());
    Complex::new(z.re.clone() + step(), z.im.clone() + step())
}

/// Exact perturbation of the free canonical parameters, retried until the
/// marked points stay distinct.
fn perturbed_canonical(base: &DiffConfig<GaussRat>, rng: &mut ChaCha8Rng) -> Result<DiffConfig<GaussRat>> {
    for _ in 0..100 {
        let mut p = canonical_parameters(base);
        for z in p.iter_mut() {
            *z = perturb(rng, z);
        }
        if p[0].is_zero() {
            continue;
        }
        let c = with_canonical_parameters(base, &p);
        if let Ok(c) = DiffConfig::new(c.signature.clone(), c.lambda, c.zeros, c.poles, c.normalization) {
            return Ok(c);
        }
    }
    Err(Error::DegenerateConfig("could not perturb the base configuration".into()))
}

fn simple_pole_residues(cfg: &DiffConfig<C>) -> (Vec<C>, Vec<Vec<C>>) {
    let orders = cfg.signature.zero_orders();
    let m = cfg.zeros.len() - 1;
    let np = cfg.poles.len();
    let one = C::new(Mpf::from_i64(1), Mpf::from_i64(0));
    let mut r = Vec::with_capacity(np);
    let mut jac = Vec::with_capacity(np);
    for j in 0..np {
        let yj = cfg.poles[j].clone();
        let mut v = cfg.lambda.clone();
        for (x, &e) in cfg.zeros.iter().zip(&orders) {
            for _ in 0..e {
                v = v * (yj.clone() - x.clone());
            }
        }
        for (k, y) in cfg.poles.iter().enumerate() {
            if k != j {
                v = v / (yj.clone() - y.clone());
            }
        }
        let mut row = vec![v.clone() / cfg.lambda.clone()];
        for i in 1..=m {
            let e = C::new(Mpf::from_i64(orders[i] as i64), Mpf::from_i64(0));
            row.push(-(v.clone() * e) / (yj.clone() - cfg.zeros[i].clone()));
        }
        for k in 1..np {
            if k == j {
                let mut s = C::new(Mpf::from_i64(0), Mpf::from_i64(0));
                for (x, &e) in cfg.zeros.iter().zip(&orders) {
                    s = s + C::new(Mpf::from_i64(e as i64), Mpf::from_i64(0)) / (yj.clone() - x.clone());
                }
                for (l, y) in cfg.poles.iter().enumerate() {
                    if l != j {
                        s = s - one.clone() / (yj.clone() - y.clone());
                    }
                }
                row.push(v.clone() * s);
            } else {
                row.push(v.clone() / (yj.clone() - cfg.poles[k].clone()));
            }
        }
        r.push(v);
        jac.push(row);
    }
    (r, jac)
}

/// Gauss–Newton projection onto `R = target` along minimum-norm steps.
fn project_to_fiber(cfg: &DiffConfig<C>, target: &[C]) -> Result<DiffConfig<C>> {
    let mut p = canonical_parameters(cfg);
    let scale = target.iter().fold(Mpf::from_i64(1), |acc, t| acc.max_of(ComplexExt::abs(t)));
    let tol = Mpf::epsilon() * Mpf::from_i64(1 << 12) * scale;
    for _ in 0..60 {
        let c = with_canonical_parameters(cfg, &p);
        let (r, jac) = simple_pole_residues(&c);
        let resid: Vec<C> = r.iter().zip(target).map(|(a, b)| a.clone() - b.clone()).collect();
        let norm = resid.iter().fold(Mpf::from_i64(0), |acc, v| acc.max_of(ComplexExt::abs(v)));
        if norm <= tol {
            return Ok(c);
        }
        let jh: Vec<Vec<C>> = transpose(&jac).iter().map(|row| row.iter().map(|v| v.conj()).collect()).collect();
        let jjh: Vec<Vec<C>> = jac
            .iter()
            .map(|a| (0..jac.len()).map(|b| a.iter().zip(&jh).fold(C::zero(), |acc, (x, hrow)| acc + x.clone() * hrow[b].clone())).collect())
            .collect();
        let y = solve(&jjh, &resid).ok_or_else(|| Error::DegenerateConfig("residue map is singular".into()))?;
        for (pi, hrow) in p.iter_mut().zip(&jh) {
            let d = hrow.iter().zip(&y).fold(C::zero(), |acc, (h, yy)| acc + h.clone() * yy.clone());
            *pi = pi.clone() - d;
        }
    }
    Err(Error::ToleranceNotMet { tol: tol.to_f64(), estimate: f64::NAN })
}

fn identity_columns(k: usize) -> Vec<Vec<C>> {
    (0..k)
        .map(|i| (0..k).map(|j| if i == j { C::one_c() } else { C::zero() }).collect())
        .collect()
}

trait OneC {
    fn one_c() -> Self;
}

impl OneC for C {
    fn one_c() -> Self {
        C::new(Mpf::from_i64(1), Mpf::from_i64(0))
    }
}

struct CoverState {
    pullback: Pullback<Mpf>,
    base: DiffConfig<C>,
    /// `(is_zero, index)` of every base point that moves with the family.
    moving: Vec<(bool, usize)>,
}

impl CoverState {
    fn config_at(&self, cover: &CoverSpec, t: &[C]) -> Result<DiffConfig<C>> {
        let mut b = self.base.clone();
        b.lambda = t[0].clone();
        for (&(is_zero, i), v) in self.moving.iter().zip(&t[1..]) {
            if is_zero {
                b.zeros[i] = v.clone();
            } else {
                b.poles[i] = v.clone();
            }
        }
        self.pullback.follow(cover, &b)?.canonicalize()
    }

    fn params(&self) -> Vec<C> {
        let mut t = vec![self.base.lambda.clone()];
        for &(is_zero, i) in &self.moving {
            t.push(if is_zero { self.base.zeros[i].clone() } else { self.base.poles[i].clone() });
        }
        t
    }
}

fn moving_points(pb: &Pullback<Mpf>, base: &DiffConfig<GaussRat>) -> Vec<(bool, usize)> {
    let fixed = |bp: &BasePoint| {
        pb.groups
            .iter()
            .zip(&pb.over)
            .any(|(g, o)| o == bp && (g.local_degree > 1 || g.is_infinity()))
    };
    let mut out = Vec::new();
    for i in 0..base.zeros.len() {
        if !fixed(&BasePoint::Zero(i)) {
            out.push((true, i));
        }
    }
    for j in 0..base.poles.len() {
        if !fixed(&BasePoint::Pole(j)) {
            out.push((false, j));
        }
    }
    out
}

fn perturb_cover_base(base: &DiffConfig<GaussRat>, moving: &[(bool, usize)], rng: &mut ChaCha8Rng) -> Result<DiffConfig<GaussRat>> {
    for _ in 0..100 {
        let mut b = base.clone();
        b.lambda = perturb(rng, &b.lambda);
        for &(is_zero, i) in moving {
            if is_zero {
                b.zeros[i] = perturb(rng, &b.zeros[i]);
            } else {
                b.poles[i] = perturb(rng, &b.poles[i]);
            }
        }
        if b.lambda.is_zero() {
            continue;
        }
        if let Ok(c) = DiffConfig::new(b.signature.clone(), b.lambda, b.zeros, b.poles, b.normalization) {
            return Ok(c);
        }
    }
    Err(Error::DegenerateConfig("could not perturb the base configuration".into()))
}

fn draw_samples(family: &Family, opts: &RankTestOptions) -> Result<Vec<Sample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::with_capacity(opts.samples);
    for _ in 0..opts.samples {
        let s = match family {
            Family::FullStratum { base } => {
                if !base.is_canonical() {
                    return Err(Error::NotCanonical("family base must be canonical".into()));
                }
                let c = perturbed_canonical(base, &mut rng)?.to_numeric::<Mpf>();
                let k = canonical_parameters(&c).len();
                Sample { config: c, tangent: identity_columns(k) }
            }
            Family::ResidueFiber { base } => {
                if !base.signature.is_simple_pole() {
                    return Err(Error::NotSimplePole);
                }
                if !base.is_canonical() {
                    return Err(Error::NotCanonical("family base must be canonical".into()));
                }
                let target: Vec<C> = residues(base)?.finite.iter().map(|r| r.to_complex()).collect();
                let start = perturbed_canonical(base, &mut rng)?.to_numeric::<Mpf>();
                let c = project_to_fiber(&start, &target)?;
                let (_, jac) = simple_pole_residues(&c);
                let k = jac[0].len();
                let ns = nullspace(&jac, k);
                let tangent = if ns.is_empty() { vec![Vec::new(); k] } else { transpose(&ns) };
                Sample { config: c, tangent }
            }
            Family::Cover { base, cover } => {
                let reference = pullback_by_cover::<Mpf>(base, cover)?;
                let moving = moving_points(&reference, base);
                let b = perturb_cover_base(base, &moving, &mut rng)?;
                // Following the reference keeps the labelling of the fibers
                // consistent across samples.
                let state = CoverState { pullback: reference, base: b.to_numeric(), moving };
                let t = state.params();
                let config = state.config_at(cover, &t)?;
                let f = |tt: &[C]| -> Result<Vec<C>> { Ok(canonical_parameters(&state.config_at(cover, tt)?)) };
                let (tangent, _) = finite_difference_jacobian(f, &t, &default_step::<Mpf>())?;
                Sample { config, tangent }
            }
        };
        out.push(s);
    }
    Ok(out)
}

fn mat_mul(a: &[Vec<C>], b: &[Vec<C>]) -> Vec<Vec<C>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..cols).map(|j| row.iter().zip(b).fold(C::zero(), |acc, (x, brow)| acc + x.clone() * brow[j].clone())).collect())
        .collect()
}

fn ranks_at_sample(s: &Sample, v: &AffineLattice) -> Result<SampleRanks> {
    let tol = Mpf::from_f64(RANK_TOLERANCE);
    let cfg = &s.config;
    let m = cfg.signature.m();
    let np = cfg.poles.len();
    let v0 = log_point::<C, Mpf>(&embed(cfg)?);
    let p = canonical_parameters(cfg);
    let a_of = |q: &[C]| -> Result<Vec<C>> { twisted_period_map(&with_canonical_parameters(cfg, q), &v0) };
    let (jp, _) = finite_difference_jacobian(a_of, &p, &default_step::<Mpf>())?;
    let mut full = mat_mul(&jp, &s.tangent);
    let r: Vec<C> = residues(cfg)?.finite;
    let tpi = <C as ComplexExt<Mpf>>::two_pi_i();
    let mut fib_rows = Vec::new();
    for b in &v.basis {
        let bs: Vec<C> = b.iter().map(|x| C::new(Mpf::from_bigint(x), Mpf::from_i64(0))).collect();
        let tr = apply_t_r(&r, &bs);
        for (i, row) in full.iter_mut().enumerate() {
            row.push(if i < m { tpi.clone() * tr[i].clone() } else { C::zero() });
        }
        fib_rows.push(tr);
    }
    let _ = np;
    let dim_s = numeric_rank(&s.tangent, &tol);
    let dim_asv = numeric_rank(&full, &tol);
    // Exact cancellations in `T_R` leave rounding noise, so measure against
    // the size of the residues times the lattice entries.
    let r_scale = r.iter().fold(Mpf::from_i64(0), |acc, x| acc.max_of(ComplexExt::abs(x)));
    let b_scale = v.basis.iter().flatten().fold(Mpf::from_i64(1), |acc, x| acc.max_of(Mpf::from_bigint(x).abs()));
    let fib = if fib_rows.is_empty() { 0 } else { numeric_rank_scaled(&fib_rows, &tol, &(r_scale * b_scale)) };
    Ok(SampleRanks { dim_s, dim_asv, fib })
}

fn torus_points(samples: &[Sample]) -> Result<Vec<TorusPoint<C>>> {
    samples.iter().map(|s| embed(&s.config)).collect()
}

/// Estimates `dim S` and `dim A(S × V)` as maximal Jacobian ranks over seeded
/// samples, at 256 and at 512 bits. When `v` is `None`, `V` is the
/// annihilator of the multiplicative relations detected on the samples.
pub fn bialgebraicity_rank_test(family: &Family, v: Option<&AffineLattice>, opts: &RankTestOptions) -> Result<RankVerdict> {
    if opts.samples == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let (lattice, heuristic) = match v {
        Some(l) => (l.clone(), false),
        None => {
            let points = with_precision(DETECTION_BITS, || draw_samples(family, opts).and_then(|s| torus_points(&s)))?;
            let k = points[0].flat().len();
            let rels = detect_multiplicative_relations(&points, opts.relation_bound)?;
            (AffineLattice::annihilator_of(k, &rels.basis), true)
        }
    };
    let run = |bits: usize| -> Result<Vec<SampleRanks>> {
        with_precision(bits, || {
            let samples = draw_samples(family, opts)?;
            let k = samples[0].config.signature.m() * samples[0].config.poles.len();
            if lattice.k != k {
                return Err(Error::ShapeMismatch(format!("V lives in dimension {}, the torus in {k}", lattice.k)));
            }
            samples.iter().map(|s| ranks_at_sample(s, &lattice)).collect()
        })
    };
    let low = run(256)?;
    let high = run(512)?;
    if low != high {
        return Err(Error::RankUnstable(format!("ranks {low:?} at 256 bits but {high:?} at 512 bits")));
    }
    let dim_s = high.iter().map(|s| s.dim_s).max().unwrap_or(0);
    let dim_asv = high.iter().map(|s| s.dim_asv).max().unwrap_or(0);
    let fib = high.iter().map(|s| s.fib).max().unwrap_or(0);
    let inequalities_hold = high.iter().all(|s| s.fib <= s.dim_asv && s.dim_s <= s.dim_asv);
    let verdict = if dim_asv == dim_s { "bi-algebraic-consistent" } else { "not-bi-algebraic" };
    Ok(RankVerdict {
        dim_s,
        dim_asv,
        fib,
        verdict: verdict.to_string(),
        heuristic,
        inequalities_hold,
        per_sample: high,
        lattice,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::scalar::gq;
    use crate::strata::{validate_signature, Normalization};

    #[test]
    fn full_stratum_has_full_rank() {
        let sig = validate_signature(&[1, 1, -1, -1, -2]).unwrap();
        let base = DiffConfig::new(sig, gq(1, 1), vec![gq(0, 1), gq(3, 1)], vec![gq(1, 1), gq(-2, 1)], Normalization::Canonical)
            .unwrap();
        let fam = Family::FullStratum { base };
        let v = bialgebraicity_rank_test(&fam, Some(&AffineLattice::full(2)), &RankTestOptions { samples: 2, ..Default::default() })
            .unwrap();
        assert_eq!((v.dim_s, v.dim_asv), (3, 3));
        assert_eq!(v.verdict, "bi-algebraic-consistent");
    }

    #[test]
    fn covering_surface() {
        let sig = validate_signature(&[1, -1, -1, -1]).unwrap();
        let base = DiffConfig::new(sig, gq(1, 1), vec![gq(3, 1)], vec![gq(0, 1), gq(2, 1)], Normalization::Free).unwrap();
        let cover = CoverSpec::new(Poly::new(vec![gq(0, 1), gq(0, 1), gq(1, 1)]), Poly::one()).unwrap();
        let v = bialgebraicity_rank_test(&Family::Cover { base, cover }, None, &RankTestOptions::default()).unwrap();
        assert_eq!(v.dim_s, 2);
        assert_eq!(v.fib, 0);
        assert_eq!(v.dim_asv, 2);
        assert!(v.heuristic && v.inequalities_hold);
    }

    #[test]
    fn residue_fiber_is_affine() {
        let sig = validate_signature(&[1, 1, -1, -1, -1, -1]).unwrap();
        let base = DiffConfig::new(
            sig,
            gq(1, 1),
            vec![gq(0, 1), gq(5, 2)],
            vec![gq(1, 1), gq(-3, 1), Complex::new(BigRational::new(1.into(), 2.into()), BigRational::new(2.into(), 1.into()))],
            Normalization::Canonical,
        )
        .unwrap();
        let v = bialgebraicity_rank_test(&Family::ResidueFiber { base }, None, &RankTestOptions::default()).unwrap();
        assert_eq!(v.dim_s, 1);
        assert_eq!(v.dim_asv, v.dim_s);
        assert!(v.inequalities_hold);
    }
}
