//! Classical moduli of planar normed spaces: the modulus of convexity and its
//! characteristic, the James constant, the Lindenstrauss modulus of
//! smoothness and its derivative at zero, and the rectangular constant.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::estimate::ConstantEstimate;
use crate::optim::{bisect_boundary, log_grid, maximize_on_log_grid};
use crate::orthogonality::{singer_direction, OrthTolerance};
use crate::pairs::{require_grid, require_s_points, sup_birkhoff, sup_free, PairW};
use crate::planar::{self, Point2};
use crate::spaces::Space;

/// Slack of the constraint `||x - y|| >= eps`.
const FEAS_TOL: f64 = 1e-12;
const ANGLE_TOL: f64 = 1e-13;
/// Resolution of the bisections on `eps`.
const EPS_RESOLUTION: f64 = 1e-4;
/// Slack of the predicate `delta(eps) <= 1 - eps/2` defining the James constant.
const JAMES_SLACK: f64 = 1e-6;
/// Radius range of the rectangular constant search.
pub const S_RANGE: (f64, f64) = (1e-3, 1e3);
pub(crate) const S_TOL: f64 = 1e-10;

/// Step sizes of the derivative estimate of the smoothness modulus.
pub const RHO_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// The unit vector `y` closest to `x` (on the given side) with `||x - y|| >= eps`.
/// Distances from `x` grow monotonically as `y` turns away from `x`, so the
/// feasible directions on each half-turn form an interval ending at `-x`.
fn delta_partner(space: &Space, x: Point2, tx: f64, eps: f64, side: f64) -> (f64, Point2) {
    let at = |phi: f64| space.sphere_point(tx + side * phi);
    let far = |phi: f64| space.norm2(planar::sub(x, at(phi))) >= eps - FEAS_TOL;
    let phi = bisect_boundary(far, PI, 0.0, ANGLE_TOL);
    (tx + side * phi, at(phi))
}

fn mid_score(space: &Space, x: Point2, y: Point2) -> f64 {
    space.norm2(planar::scale(planar::add(x, y), 0.5)) - 1.0
}

/// Modulus of convexity `inf{1 - ||(x+y)/2|| : x, y in S_X, ||x - y|| >= eps}`.
///
/// Every grid pair satisfying the constraint is a candidate, as is, for every
/// grid direction `x`, the closest feasible `y` on each side (the infimum for
/// fixed `x` sits on the constraint boundary). Refinement moves `x` and
/// re-projects `y`.
pub fn delta(space: &Space, eps: f64, n_grid: usize) -> Result<ConstantEstimate> {
    space.require_planar()?;
    if !(0.0..=2.0).contains(&eps) {
        return Err(Error::param("eps", format!("{eps} is not in [0, 2]")));
    }
    require_grid(n_grid)?;
    let objective = |x: Point2, y: Point2| {
        if space.norm2(planar::sub(x, y)) >= eps - FEAS_TOL {
            Some((mid_score(space, x, y), 0.0))
        } else {
            None
        }
    };
    let projection = |tx: f64, side: f64| {
        let x = space.sphere_point(tx);
        let (ty, y) = delta_partner(space, x, tx, eps, side);
        let w = PairW {
            tu: tx,
            tv: ty,
            u: x,
            v: y,
            param: 0.0,
            side,
            sigma: 0.0,
        };
        Some((mid_score(space, x, y), w))
    };
    let found = sup_free(space, n_grid, 0, &objective, Some(&projection))
        .ok_or_else(|| Error::Domain("no feasible pair".into()))?;
    let value = (-found.best.score).clamp(0.0, 1.0);
    Ok(ConstantEstimate::inf(value, n_grid, found.refined))
}

/// Largest `e` in `[0, 2]` with `pred(e)`, for a predicate that holds on an
/// initial interval containing 0.
fn sup_of_interval<P: FnMut(f64) -> Result<bool>>(mut pred: P) -> Result<f64> {
    if pred(2.0)? {
        return Ok(2.0);
    }
    let (mut lo, mut hi) = (0.0, 2.0);
    while hi - lo > EPS_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if pred(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Characteristic of convexity `sup{eps : delta(eps) = 0}`, with "= 0" read as
/// `<= zero_tol`.
pub fn eps0(space: &Space, n_grid: usize, zero_tol: f64) -> Result<ConstantEstimate> {
    require_grid(n_grid)?;
    if !(zero_tol > 0.0 && zero_tol <= 1e-3) {
        return Err(Error::param(
            "zero_tol",
            format!("{zero_tol} is not in (0, 1e-3]"),
        ));
    }
    let value = sup_of_interval(|e| Ok(delta(space, e, n_grid)?.value() <= zero_tol))?;
    Ok(ConstantEstimate::sup(value, n_grid, false))
}

/// James constant `sup{min(||x+y||, ||x-y||) : x, y in S_X}`.
///
/// For fixed `x` the minimum of the two distances is largest where they
/// cross, i.e. at the Singer partner of `x`; those partners are searched in
/// addition to the grid pairs.
pub fn james_direct(space: &Space, n_grid: usize) -> Result<ConstantEstimate> {
    space.require_planar()?;
    require_grid(n_grid)?;
    let score = |x: Point2, y: Point2| {
        space
            .norm2(planar::add(x, y))
            .min(space.norm2(planar::sub(x, y)))
    };
    let objective = |x: Point2, y: Point2| Some((score(x, y), 0.0));
    let projection = |tx: f64, side: f64| {
        let x = space.sphere_point(tx);
        let ty = singer_direction(space, x, side);
        let y = space.sphere_point(ty);
        let w = PairW {
            tu: tx,
            tv: ty,
            u: x,
            v: y,
            param: 0.0,
            side,
            sigma: 0.0,
        };
        Some((score(x, y), w))
    };
    let found = sup_free(space, n_grid, 0, &objective, Some(&projection))
        .ok_or_else(|| Error::Domain("empty search".into()))?;
    Ok(ConstantEstimate::sup(
        found.best.score,
        n_grid,
        found.refined,
    ))
}

/// James constant as `sup{eps in (0, 2) : delta(eps) <= 1 - eps/2}`, an
/// estimator independent of [`james_direct`].
pub fn james_via_delta(space: &Space, n_grid: usize) -> Result<ConstantEstimate> {
    require_grid(n_grid)?;
    let value =
        sup_of_interval(|e| Ok(delta(space, e, n_grid)?.value() <= 1.0 - e / 2.0 + JAMES_SLACK))?;
    Ok(ConstantEstimate::sup(value, n_grid, false))
}

/// Size of the extra `x` grid of [`rho`]: the objective varies on the scale
/// `t` near corners of the unit sphere, so `x` is sampled at spacing below `t/8`.
fn fine_grid_for(t: f64) -> usize {
    if t == 0.0 {
        return 0;
    }
    let needed = (16.0 * PI / t).min(FINE_GRID_MAX as f64).ceil() as usize;
    needed.next_power_of_two()
}

const FINE_GRID_MAX: usize = 1 << 16;

/// Lindenstrauss modulus `sup{(||x+ty|| + ||x-ty||)/2 - 1 : x, y in S_X}`.
pub fn rho(space: &Space, t: f64, n_grid: usize) -> Result<ConstantEstimate> {
    space.require_planar()?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::param(
            "t",
            format!("{t} is not a finite number >= 0"),
        ));
    }
    require_grid(n_grid)?;
    let objective = |x: Point2, y: Point2| {
        let plus = space.norm2(planar::combine(1.0, x, t, y));
        let minus = space.norm2(planar::combine(1.0, x, -t, y));
        Some((0.5 * (plus + minus) - 1.0, 0.0))
    };
    let found = sup_free(
        space,
        n_grid,
        fine_grid_for(t),
        &objective,
        None::<&fn(f64, f64) -> Option<(f64, PairW)>>,
    )
    .ok_or_else(|| Error::Domain("empty search".into()))?;
    Ok(ConstantEstimate::sup(
        found.best.score,
        n_grid,
        found.refined,
    ))
}

/// `lim rho(t)/t` as `t -> 0+`, by Richardson extrapolation of `rho(t)/t`
/// at the three [`RHO_STEPS`] (which halve successively).
pub fn rho_prime0(space: &Space, n_grid: usize) -> Result<ConstantEstimate> {
    let mut r = [0.0; 3];
    let mut refined = false;
    for (k, &t) in RHO_STEPS.iter().enumerate() {
        let e = rho(space, t, n_grid)?;
        r[k] = e.value() / t;
        refined |= e.refined();
    }
    let value = (8.0 * r[2] - 6.0 * r[1] + r[0]) / 3.0;
    Ok(ConstantEstimate::sup(value, n_grid, refined))
}

/// Rectangular constant: `sup (1 + s)/||u - s v||` over Birkhoff pairs
/// `u ⊥_B v` of unit vectors and radius ratios `s` in [`S_RANGE`].
pub fn rect_constant(space: &Space, n_grid: usize, s_points: usize) -> Result<ConstantEstimate> {
    space.require_planar()?;
    require_grid(n_grid)?;
    require_s_points(s_points)?;
    let grid = log_grid(S_RANGE.0, S_RANGE.1, s_points);
    let objective = |u: Point2, v: Point2| {
        let (s, value) = maximize_on_log_grid(
            |s| {
                let d = space.norm2(planar::combine(1.0, u, -s, v));
                if d < 1e-12 {
                    f64::NEG_INFINITY
                } else {
                    (1.0 + s) / d
                }
            },
            &grid,
            S_TOL,
        );
        value.is_finite().then_some((value, s))
    };
    let found = sup_birkhoff(space, n_grid, &OrthTolerance::default(), &objective)
        .ok_or_else(|| Error::Domain("no Birkhoff pair found".into()))?;
    Ok(ConstantEstimate::sup(
        found.best.score,
        n_grid,
        found.refined,
    ))
}
