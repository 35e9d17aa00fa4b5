//! Integration paths: polylines with automatic semicircular detours around
//! singularities, and logarithms continued along them.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{ComplexExt, Real};

/// Points closer than this to a singularity are treated as hitting it.
pub const GUARD_RADIUS: f64 = 1e-6;

/// Which side of a singularity lying on a segment the path passes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DetourPolicy {
    /// Half-turn counterclockwise around the singularity.
    #[default]
    Ccw,
    /// Half-turn clockwise around the singularity.
    Cw,
    /// Refuse paths that come within the guard radius.
    Forbid,
}

/// A polyline from the first to the last waypoint.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegrationPath<R> {
    pub waypoints: Vec<Complex<R>>,
    pub detour: DetourPolicy,
}

/// A smooth piece of a resolved path.
#[derive(Clone, Debug, PartialEq)]
pub enum Piece<R> {
    Segment { from: Complex<R>, to: Complex<R> },
    /// `center + radius·e^{i(theta0 + t·sweep)}`, `t ∈ [0, 1]`.
    Arc { center: Complex<R>, radius: R, theta0: R, sweep: R },
}

impl<R: Real> Piece<R> {
    pub fn point(&self, t: &R) -> Complex<R> {
        match self {
            Piece::Segment { from, to } => from.clone() + (to.clone() - from.clone()).scale_by(t),
            Piece::Arc { center, radius, theta0, sweep } => {
                let th = theta0.clone() + sweep.clone() * t.clone();
                center.clone() + <Complex<R> as ComplexExt<R>>::polar(radius, &th)
            }
        }
    }

    /// `dγ/dt`.
    pub fn velocity(&self, t: &R) -> Complex<R> {
        match self {
            Piece::Segment { from, to } => to.clone() - from.clone(),
            Piece::Arc { radius, theta0, sweep, .. } => {
                let th = theta0.clone() + sweep.clone() * t.clone();
                let r = radius.clone() * sweep.clone();
                Complex::new(-(r.clone() * th.sin()), r * th.cos())
            }
        }
    }

    pub fn start(&self) -> Complex<R> {
        self.point(&R::zero())
    }

    pub fn end(&self) -> Complex<R> {
        self.point(&R::one())
    }

    pub fn length(&self) -> R {
        match self {
            Piece::Segment { from, to } => ComplexExt::abs(&(to.clone() - from.clone())),
            Piece::Arc { radius, sweep, .. } => radius.clone() * sweep.abs(),
        }
    }
}

/// A path after detours have been inserted.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolvedPath<R> {
    pub pieces: Vec<Piece<R>>,
}

impl<R: Real> ResolvedPath<R> {
    pub fn start(&self) -> Option<Complex<R>> {
        self.pieces.first().map(|p| p.start())
    }

    pub fn end(&self) -> Option<Complex<R>> {
        self.pieces.last().map(|p| p.end())
    }
}

fn dist_to_segment<R: Real>(p: &Complex<R>, a: &Complex<R>, b: &Complex<R>) -> (R, R) {
    let d = b.clone() - a.clone();
    let len2 = d.norm_sq();
    let w = p.clone() - a.clone();
    let t = (w.re.clone() * d.re.clone() + w.im.clone() * d.im.clone()) / len2;
    let tc = t.clone().max_of(R::zero()).min_of(R::one());
    let q = a.clone() + d.scale_by(&tc);
    (ComplexExt::abs(&(p.clone() - q)), t)
}

fn fmt_point<R: Real>(z: &Complex<R>) -> String {
    format!("{:.6e}{:+.6e}i", z.re.to_f64(), z.im.to_f64())
}

impl<R: Real> IntegrationPath<R> {
    pub fn new(waypoints: Vec<Complex<R>>) -> Self {
        IntegrationPath { waypoints, detour: DetourPolicy::Ccw }
    }

    pub fn with_detour(mut self, detour: DetourPolicy) -> Self {
        self.detour = detour;
        self
    }

    pub fn straight(from: Complex<R>, to: Complex<R>) -> Self {
        Self::new(vec![from, to])
    }

    /// Replaces every segment passing within the guard radius of a
    /// singularity by a segment, a half-circle around it, and a segment.
    /// The half-circle radius is half the distance from that singularity to
    /// the nearest other singularity or segment endpoint.
    pub fn resolve(&self, singularities: &[Complex<R>]) -> Result<ResolvedPath<R>> {
        let guard = R::from_f64(GUARD_RADIUS);
        if self.waypoints.len() < 2 {
            return Err(Error::InvalidInput("a path needs at least two waypoints".into()));
        }
        for w in &self.waypoints {
            if let Some(s) = singularities.iter().find(|s| ComplexExt::abs(&(w.clone() - (*s).clone())) < guard) {
                return Err(Error::PathThroughSingularity(fmt_point(s)));
            }
        }
        let mut pieces = Vec::new();
        for pair in self.waypoints.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if ComplexExt::abs(&(b.clone() - a.clone())).is_zero() {
                return Err(Error::InvalidInput("consecutive waypoints coincide".into()));
            }
            let mut hits: Vec<(R, Complex<R>)> = singularities
                .iter()
                .filter_map(|s| {
                    let (d, t) = dist_to_segment(s, a, b);
                    (d < guard && t > R::zero() && t < R::one()).then(|| (t, s.clone()))
                })
                .collect();
            if hits.is_empty() {
                pieces.push(Piece::Segment { from: a.clone(), to: b.clone() });
                continue;
            }
            if self.detour == DetourPolicy::Forbid {
                return Err(Error::PathThroughSingularity(fmt_point(&hits[0].1)));
            }
            hits.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
            let dir = {
                let d = b.clone() - a.clone();
                let n = ComplexExt::abs(&d);
                Complex::new(d.re / n.clone(), d.im / n)
            };
            let theta_back = ComplexExt::arg(&(-dir.clone()));
            let sweep = match self.detour {
                DetourPolicy::Cw => -R::pi(),
                _ => R::pi(),
            };
            let mut cursor = a.clone();
            for (_, s) in &hits {
                let mut r = ComplexExt::abs(&(s.clone() - a.clone()))
                    .min_of(ComplexExt::abs(&(s.clone() - b.clone())));
                for other in singularities {
                    let d = ComplexExt::abs(&(other.clone() - s.clone()));
                    if !d.is_zero() {
                        r = r.min_of(d);
                    }
                }
                let r = r / R::from_i64(2);
                let entry = s.clone() - dir.scale_by(&r);
                let exit = s.clone() + dir.scale_by(&r);
                pieces.push(Piece::Segment { from: cursor.clone(), to: entry });
                pieces.push(Piece::Arc {
                    center: s.clone(),
                    radius: r,
                    theta0: theta_back.clone(),
                    sweep: sweep.clone(),
                });
                cursor = exit;
            }
            pieces.push(Piece::Segment { from: cursor, to: b.clone() });
        }
        Ok(ResolvedPath { pieces })
    }
}

/// `log(z_end − a) − log(z_start − a)` continued along the path.
pub fn tracked_log<R: Real>(a: &Complex<R>, path: &ResolvedPath<R>) -> Result<Complex<R>> {
    let guard = R::from_f64(GUARD_RADIUS);
    let mut total = Complex::new(R::zero(), R::zero());
    for piece in &path.pieces {
        match piece {
            Piece::Segment { from, to } => {
                let (d, _) = dist_to_segment(a, from, to);
                if d < guard {
                    return Err(Error::PathThroughSingularity(fmt_point(a)));
                }
                total = total + ((to.clone() - a.clone()) / (from.clone() - a.clone())).ln();
            }
            Piece::Arc { center, radius, theta0, sweep } => {
                let off = ComplexExt::abs(&(center.clone() - a.clone()));
                if off < guard {
                    total = total + Complex::new(R::zero(), sweep.clone());
                    continue;
                }
                if (off.clone() - radius.clone()).abs() < guard {
                    return Err(Error::PathThroughSingularity(fmt_point(a)));
                }
                // Quarter turns keep each increment's argument inside (−π, π)
                // as long as `a` is outside the circle or at its center.
                let parts = 4usize.max((sweep.abs() / (R::pi() / R::from_i64(2))).to_f64().ceil() as usize);
                let step = sweep.clone() / R::from_i64(parts as i64);
                let mut prev = center.clone() + <Complex<R> as ComplexExt<R>>::polar(radius, theta0);
                for k in 1..=parts {
                    let th = theta0.clone() + step.clone() * R::from_i64(k as i64);
                    let next = center.clone() + <Complex<R> as ComplexExt<R>>::polar(radius, &th);
                    total = total + ((next.clone() - a.clone()) / (prev - a.clone())).ln();
                    prev = next;
                }
            }
        }
    }
    Ok(total)
}

/// Integer `k` with `tracked_log = Log(end − a) − Log(start − a) + 2πik`.
pub fn winding_offset<R: Real>(a: &Complex<R>, path: &ResolvedPath<R>, tracked: &Complex<R>) -> i64 {
    let (Some(s), Some(e)) = (path.start(), path.end()) else { return 0 };
    let principal = (e - a.clone()).ln() - (s - a.clone()).ln();
    let k = (tracked.im.clone() - principal.im) / R::two_pi();
    k.round_to_bigint().try_into().unwrap_or(0)
}
