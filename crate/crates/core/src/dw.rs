//! The generalized Dunkl–Williams constants and their companions.
//!
//! For weights `(alpha, beta)` the constant is the supremum of
//! `(alpha ||x|| + beta ||y||) / ||x - y|| * a[x, y]` over nonzero `x != y`,
//! where `a[x, y]` is the angular distance. Two parameterizations are used:
//!
//! * t-form: `||u + v|| / min_t ||((1 - beta t)/alpha) u + t v||` over unit
//!   vectors `u, v` and `t` in `[0, 1/beta]`;
//! * direct form: `x = u`, `y = s v` with unit `u, v` and a radius ratio `s`,
//!   giving `(alpha + beta s)/||u - s v|| * ||u - v||`.
//!
//! The constrained variants restrict `(x, y)` to Birkhoff, Singer or
//! isosceles orthogonal pairs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::ConstantEstimate;
use crate::moduli::{S_RANGE, S_TOL};
use crate::optim::{golden_min_closed, log_grid, maximize_on_log_grid};
use crate::orthogonality::{
    angular_distance, isosceles_direction, singer_direction, OrthTolerance,
};
use crate::pairs::{require_grid, require_s_points, sup_birkhoff, sup_free, sup_projected, PairW};
use crate::planar::{self, Point2};
use crate::search::Found;
use crate::spaces::{Space, UnitVector, Vector};

/// Resolution of the inner minimization, in units of `1/beta`.
const T_TOL: f64 = 1e-10;
/// Pairs with `||u + v||` below this are skipped by the t-form.
const SUM_FLOOR: f64 = 1e-9;
/// `x = y` exclusion in the direct form.
const DIFF_FLOOR: f64 = 1e-12;

/// The weights `(alpha, beta)`, both positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeights")]
pub struct Weights {
    alpha: f64,
    beta: f64,
}

#[derive(Deserialize)]
struct RawWeights {
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawWeights> for Weights {
    type Error = Error;
    fn try_from(raw: RawWeights) -> Result<Self> {
        Weights::new(raw.alpha, raw.beta)
    }
}

impl Weights {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        for (name, w) in [("alpha", alpha), ("beta", beta)] {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::param(
                    name,
                    format!("{w} is not a finite positive number"),
                ));
            }
        }
        Ok(Weights { alpha, beta })
    }

    /// `(1, 1)`: the classical constant.
    pub fn unit() -> Self {
        Weights {
            alpha: 1.0,
            beta: 1.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sum(&self) -> f64 {
        self.alpha + self.beta
    }
}

/// Parameterization the estimate was computed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    TForm,
    Direct,
}

/// The objective a [`DwResult`] maximizes, for re-evaluation at its witness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Objective {
    /// `||u + v|| / ||((1 - beta t)/alpha) u + t v||`.
    TForm { alpha: f64, beta: f64 },
    /// `(alpha + beta s)/||u - s v|| * ||u - v||`.
    Direct { alpha: f64, beta: f64 },
    /// `max{1, s}/||u - s v|| * ||u - v||`.
    MaxNorm,
}

impl Objective {
    fn t_form(w: Weights) -> Self {
        Objective::TForm {
            alpha: w.alpha,
            beta: w.beta,
        }
    }

    fn direct(w: Weights) -> Self {
        Objective::Direct {
            alpha: w.alpha,
            beta: w.beta,
        }
    }

    pub fn method(&self) -> Method {
        match self {
            Objective::TForm { .. } => Method::TForm,
            _ => Method::Direct,
        }
    }

    /// The objective at the unit vectors `u, v` and parameter `t` or `s`.
    /// Excluded points (`u + v = 0` in the t-form, `u = s v` in the direct
    /// form) evaluate to `-inf`.
    pub fn eval(&self, space: &Space, u: &UnitVector, v: &UnitVector, param: f64) -> f64 {
        self.eval2(space, u.point(), v.point(), param)
    }

    #[inline]
    pub(crate) fn eval2(&self, space: &Space, u: Point2, v: Point2, param: f64) -> f64 {
        match *self {
            Objective::TForm { alpha, beta } => {
                let num = space.norm2(planar::add(u, v));
                if num < SUM_FLOOR {
                    return f64::NEG_INFINITY;
                }
                num / t_denominator(space, alpha, beta, u, v, param)
            }
            Objective::Direct { alpha, beta } => {
                direct_value(space, alpha + beta * param, u, v, param)
            }
            Objective::MaxNorm => direct_value(space, param.max(1.0), u, v, param),
        }
    }
}

#[inline]
fn t_denominator(space: &Space, alpha: f64, beta: f64, u: Point2, v: Point2, t: f64) -> f64 {
    space.norm2(planar::combine((1.0 - beta * t) / alpha, u, t, v))
}

#[inline]
fn direct_value(space: &Space, numerator: f64, u: Point2, v: Point2, s: f64) -> f64 {
    let d = space.norm2(planar::combine(1.0, u, -s, v));
    if d < DIFF_FLOOR {
        return f64::NEG_INFINITY;
    }
    numerator / d * space.norm2(planar::sub(u, v))
}

/// A located pair `(u, v)` and the inner parameter (`t` in the t-form, the
/// radius ratio `s` in the direct form).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub u: UnitVector,
    pub v: UnitVector,
    pub t_or_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DwResult {
    pub estimate: ConstantEstimate,
    pub witness: Witness,
    pub method: Method,
    pub objective: Objective,
}

impl DwResult {
    fn from_found(found: Found<PairW>, n_grid: usize, objective: Objective) -> Self {
        let w = found.best.witness;
        DwResult {
            estimate: ConstantEstimate::sup(found.best.score, n_grid, found.refined),
            witness: Witness {
                u: UnitVector::from_point_unchecked(w.u),
                v: UnitVector::from_point_unchecked(w.v),
                t_or_s: w.param,
            },
            method: objective.method(),
            objective,
        }
    }

    pub fn value(&self) -> f64 {
        self.estimate.value()
    }

    /// The objective recomputed at the witness.
    pub fn reevaluate(&self, space: &Space) -> f64 {
        self.objective
            .eval(space, &self.witness.u, &self.witness.v, self.witness.t_or_s)
    }
}

/// The defining ratio `(alpha ||x|| + beta ||y||)/||x - y|| * a[x, y]`.
pub fn dw_objective(space: &Space, w: Weights, x: &Vector, y: &Vector) -> Result<f64> {
    let a = angular_distance(space, x, y)?;
    let diff: Vec<f64> = x
        .coords()
        .iter()
        .zip(y.coords())
        .map(|(p, q)| p - q)
        .collect();
    let d = space.norm(&Vector::new(diff)?)?;
    if d == 0.0 {
        return Err(Error::Domain("x and y must differ".into()));
    }
    Ok((w.alpha * space.norm(x)? + w.beta * space.norm(y)?) / d * a)
}

/// Inner minimization of the t-form over `[0, 1/beta]`: `(ratio, t)`.
fn t_inner(space: &Space, w: Weights, u: Point2, v: Point2) -> Option<(f64, f64)> {
    let num = space.norm2(planar::add(u, v));
    if num < SUM_FLOOR {
        return None;
    }
    let (tau, _) = golden_min_closed(
        |tau| t_denominator(space, w.alpha, w.beta, u, v, tau / w.beta),
        0.0,
        1.0,
        T_TOL,
    );
    let t = tau / w.beta;
    Some((num / t_denominator(space, w.alpha, w.beta, u, v, t), t))
}

/// Inner maximization of a direct-form objective over the radius grid: `(value, s)`.
fn s_inner(
    objective: Objective,
    space: &Space,
    grid: &[f64],
    u: Point2,
    v: Point2,
) -> Option<(f64, f64)> {
    let (s, value) = maximize_on_log_grid(|s| objective.eval2(space, u, v, s), grid, S_TOL);
    value.is_finite().then_some((value, s))
}

fn radius_grid(s_points: usize) -> Vec<f64> {
    log_grid(S_RANGE.0, S_RANGE.1, s_points)
}

type Projection = fn(f64, f64) -> Option<(f64, PairW)>;

fn no_projection() -> Option<&'static Projection> {
    None
}

fn finish(found: Option<Found<PairW>>, n_grid: usize, objective: Objective) -> Result<DwResult> {
    found
        .map(|f| DwResult::from_found(f, n_grid, objective))
        .ok_or_else(|| Error::Domain("the search produced no admissible pair".into()))
}

/// `DW(X, alpha, beta)` in the t-form over all pairs of unit vectors.
pub fn dw_general(space: &Space, w: Weights, n_grid: usize) -> Result<DwResult> {
    space.require_planar()?;
    require_grid(n_grid)?;
    let objective = |u: Point2, v: Point2| t_inner(space, w, u, v);
    let found = sup_free(space, n_grid, 0, &objective, no_projection());
    finish(found, n_grid, Objective::t_form(w))
}

/// `DW(X, alpha, beta)` in the direct form, `x = u`, `y = s v`.
pub fn dw_direct(space: &Space, w: Weights, n_grid: usize, s_points: usize) -> Result<DwResult> {
    space.require_planar()?;
    require_grid(n_grid)?;
    require_s_points(s_points)?;
    let grid = radius_grid(s_points);
    let obj = Objective::direct(w);
    let objective = |u: Point2, v: Point2| s_inner(obj, space, &grid, u, v);
    let found = sup_free(space, n_grid, 0, &objective, no_projection());
    finish(found, n_grid, obj)
}

/// `DW_B(X, alpha, beta)` in the t-form over Birkhoff pairs `u ⊥_B v`.
pub fn dw_b(space: &Space, w: Weights, n_grid: usize) -> Result<DwResult> {
    space.require_planar()?;
    require_grid(n_grid)?;
    let objective = |u: Point2, v: Point2| t_inner(space, w, u, v);
    let found = sup_birkhoff(space, n_grid, &OrthTolerance::default(), &objective);
    finish(found, n_grid, Objective::t_form(w))
}

/// `DW_B(X, alpha, beta)` in the direct form over `x ⊥_B y`.
pub fn dw_b_direct(space: &Space, w: Weights, n_grid: usize, s_points: usize) -> Result<DwResult> {
    space.require_planar()?;
    require_grid(n_grid)?;
    require_s_points(s_points)?;
    let grid = radius_grid(s_points);
    let obj = Objective::direct(w);
    let objective = |u: Point2, v: Point2| s_inner(obj, space, &grid, u, v);
    let found = sup_birkhoff(space, n_grid, &OrthTolerance::default(), &objective);
    finish(found, n_grid, obj)
}

/// `DW_S(X)`: the classical objective over Singer orthogonal pairs. Singer
/// orthogonality only depends on directions; the partner of `u` on each side
/// is located by bisection in the angle.
pub fn dw_s(space: &Space, n_grid: usize, s_points: usize) -> Result<DwResult> {
    space.require_planar()?;
    require_grid(n_grid)?;
    require_s_points(s_points)?;
    let grid = radius_grid(s_points);
    let obj = Objective::direct(Weights::unit());
    let projection = |tu: f64, side: f64| {
        let u = space.sphere_point(tu);
        let tv = singer_direction(space, u, side);
        let v = space.sphere_point(tv);
        s_inner(obj, space, &grid, u, v).map(|(score, s)| {
            let w = PairW {
                tu,
                tv,
                u,
                v,
                param: s,
                side,
                sigma: 0.0,
            };
            (score, w)
        })
    };
    finish(sup_projected(n_grid, &projection), n_grid, obj)
}

/// `DW_I(X)`: the classical objective over isosceles orthogonal pairs
/// `u ⊥_I s v`. For each direction `u`, side and radius `s` the feasible
/// direction `v` is located by bisection in the angle; the radius is then
/// optimized over the log grid.
pub fn dw_i(space: &Space, n_grid: usize, s_points: usize) -> Result<DwResult> {
    space.require_planar()?;
    require_grid(n_grid)?;
    require_s_points(s_points)?;
    let grid = radius_grid(s_points);
    let obj = Objective::direct(Weights::unit());
    let projection = |tu: f64, side: f64| {
        let u = space.sphere_point(tu);
        let at = |s: f64| {
            let tv = isosceles_direction(space, u, s, side);
            (tv, space.sphere_point(tv))
        };
        let (s, score) = maximize_on_log_grid(
            |s| {
                let (_, v) = at(s);
                obj.eval2(space, u, v, s)
            },
            &grid,
            S_TOL,
        );
        if !score.is_finite() {
            return None;
        }
        let (tv, v) = at(s);
        let w = PairW {
            tu,
            tv,
            u,
            v,
            param: s,
            side,
            sigma: 0.0,
        };
        Some((obj.eval2(space, u, v, s), w))
    };
    finish(sup_projected(n_grid, &projection), n_grid, obj)
}

/// `MS_B(X)`: `max{||x||, ||y||}/||x - y|| * a[x, y]` over `x ⊥_B y`.
pub fn ms_b(space: &Space, n_grid: usize, s_points: usize) -> Result<DwResult> {
    space.require_planar()?;
    require_grid(n_grid)?;
    require_s_points(s_points)?;
    let grid = radius_grid(s_points);
    let objective = |u: Point2, v: Point2| s_inner(Objective::MaxNorm, space, &grid, u, v);
    let found = sup_birkhoff(space, n_grid, &OrthTolerance::default(), &objective);
    finish(found, n_grid, Objective::MaxNorm)
}

/// `Psi_inf(X)`: the objective of [`ms_b`] without the orthogonality constraint.
pub fn psi_inf(space: &Space, n_grid: usize, s_points: usize) -> Result<DwResult> {
    space.require_planar()?;
    require_grid(n_grid)?;
    require_s_points(s_points)?;
    let grid = radius_grid(s_points);
    let objective = |u: Point2, v: Point2| s_inner(Objective::MaxNorm, space, &grid, u, v);
    let found = sup_free(space, n_grid, 0, &objective, no_projection());
    finish(found, n_grid, Objective::MaxNorm)
}
