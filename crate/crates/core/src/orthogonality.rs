//! Birkhoff, isosceles and Singer orthogonality, angular distance, and the
//! planar partner searches the constrained constants are built on.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::optim::{bisect_boundary, golden_max, golden_min, log_grid};
use crate::planar::{self, Point2};
use crate::spaces::{Space, UnitVector, Vector};

/// Arcs of Birkhoff partners narrower than this are treated as one direction.
/// Smooth norms produce spurious arcs of width ~sqrt(rel_tol) around the
/// single partner.
pub(crate) const NARROW_ARC: f64 = 1e-3;

/// Scan resolution used to bracket the Birkhoff partner arc.
const ARC_SCAN: usize = 64;

const ANGLE_TOL: f64 = 1e-12;

/// Floating-point semantics of the orthogonality predicates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthTolerance {
    rel_tol: f64,
    lambda_tol: f64,
}

impl Default for OrthTolerance {
    fn default() -> Self {
        OrthTolerance {
            rel_tol: 1e-9,
            lambda_tol: 1e-12,
        }
    }
}

impl OrthTolerance {
    pub fn new(rel_tol: f64, lambda_tol: f64) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1e-2) {
            return Err(Error::param(
                "rel_tol",
                format!("{rel_tol} is not in (0, 1e-2)"),
            ));
        }
        if !(lambda_tol > 0.0 && lambda_tol.is_finite()) {
            return Err(Error::param(
                "lambda_tol",
                format!("{lambda_tol} is not > 0"),
            ));
        }
        Ok(OrthTolerance {
            rel_tol,
            lambda_tol,
        })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn lambda_tol(&self) -> f64 {
        self.lambda_tol
    }
}

fn same_dim(x: &Vector, y: &Vector) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            actual: y.dim(),
        });
    }
    Ok(())
}

/// `a x + b y`.
fn combine(a: f64, x: &Vector, b: f64, y: &Vector) -> Vector {
    let coords = x
        .coords()
        .iter()
        .zip(y.coords())
        .map(|(xi, yi)| a * xi + b * yi)
        .collect();
    Vector::new(coords).expect("finite combination of finite vectors")
}

fn nonzero_norm(space: &Space, x: &Vector, what: &str) -> Result<f64> {
    let n = space.norm(x)?;
    if n == 0.0 {
        return Err(Error::Domain(format!("{what} must be nonzero")));
    }
    Ok(n)
}

/// Angular distance `|| x/||x|| - y/||y|| ||`, in `[0, 2]`.
pub fn angular_distance(space: &Space, x: &Vector, y: &Vector) -> Result<f64> {
    same_dim(x, y)?;
    let nx = nonzero_norm(space, x, "x")?;
    let ny = nonzero_norm(space, y, "y")?;
    space.norm(&combine(1.0 / nx, x, -1.0 / ny, y))
}

/// Minimizer and minimum of the convex map `lambda -> ||x + lambda y||`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineMin {
    pub lambda: f64,
    pub value: f64,
}

/// Minimizes `||x + lambda y||` by golden section on `[-L, L]`,
/// `L = 2||x||/||y|| + 1`; outside that bracket the norm exceeds `||x||`.
pub fn min_along_line(
    space: &Space,
    x: &Vector,
    y: &Vector,
    tol: &OrthTolerance,
) -> Result<LineMin> {
    same_dim(x, y)?;
    let ny = nonzero_norm(space, y, "y")?;
    let nx = space.norm(x)?;
    let bracket = 2.0 * nx / ny + 1.0;
    let (lambda, value) = match (x.as_point(), y.as_point()) {
        (Some(xp), Some(yp)) if space.dim() == 2 => golden_min(
            |l| space.norm2(planar::combine(1.0, xp, l, yp)),
            -bracket,
            bracket,
            tol.lambda_tol,
        ),
        _ => golden_min(
            |l| {
                space
                    .norm(&combine(1.0, x, l, y))
                    .expect("dimension checked")
            },
            -bracket,
            bracket,
            tol.lambda_tol,
        ),
    };
    Ok(LineMin { lambda, value })
}

/// `x` is Birkhoff orthogonal to `y`: `||x + lambda y|| >= ||x||` for all real
/// `lambda`, up to the relative tolerance.
pub fn is_birkhoff(space: &Space, x: &Vector, y: &Vector, tol: &OrthTolerance) -> Result<bool> {
    let nx = nonzero_norm(space, x, "x")?;
    let m = min_along_line(space, x, y, tol)?;
    Ok(m.value >= nx * (1.0 - tol.rel_tol))
}

/// `||x + y|| = ||x - y||` up to `rel_tol (||x|| + ||y||)`.
pub fn is_isosceles(space: &Space, x: &Vector, y: &Vector, tol: &OrthTolerance) -> Result<bool> {
    same_dim(x, y)?;
    let plus = space.norm(&combine(1.0, x, 1.0, y))?;
    let minus = space.norm(&combine(1.0, x, -1.0, y))?;
    let scale = space.norm(x)? + space.norm(y)?;
    Ok((plus - minus).abs() <= tol.rel_tol * scale)
}

/// Singer orthogonality: `||x|| ||y|| = 0`, or the normalized difference and
/// normalized sum have equal norms.
pub fn is_singer(space: &Space, x: &Vector, y: &Vector, tol: &OrthTolerance) -> Result<bool> {
    same_dim(x, y)?;
    let nx = space.norm(x)?;
    let ny = space.norm(y)?;
    if nx * ny == 0.0 {
        return Ok(true);
    }
    let minus = space.norm(&combine(1.0 / nx, x, -1.0 / ny, y))?;
    let plus = space.norm(&combine(1.0 / nx, x, 1.0 / ny, y))?;
    Ok((minus - plus).abs() <= tol.rel_tol)
}

#[inline]
pub(crate) fn line_min2(space: &Space, x: Point2, y: Point2, lambda_tol: f64) -> f64 {
    let bracket = 2.0 * space.norm2(x) / space.norm2(y) + 1.0;
    golden_min(
        |l| space.norm2(planar::combine(1.0, x, l, y)),
        -bracket,
        bracket,
        lambda_tol,
    )
    .1
}

#[inline]
pub(crate) fn is_birkhoff2(space: &Space, x: Point2, y: Point2, tol: &OrthTolerance) -> bool {
    line_min2(space, x, y, tol.lambda_tol) >= space.norm2(x) * (1.0 - tol.rel_tol)
}

/// The directions `v` with `u` Birkhoff orthogonal to `v`, as an arc of
/// Euclidean angles inside `(theta_u, theta_u + pi)`; the antipodal arc holds
/// the negated partners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct BirkhoffArc {
    pub start: f64,
    pub end: f64,
    /// Angle maximizing `min_lambda ||u + lambda v||`.
    pub peak: f64,
}

impl BirkhoffArc {
    pub fn width(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_narrow(&self) -> bool {
        self.width() < NARROW_ARC
    }

    /// Angle at relative position `sigma` in `[0, 1]`; narrow arcs collapse to the peak.
    pub fn at(&self, sigma: f64) -> f64 {
        if self.is_narrow() {
            self.peak
        } else {
            self.start + sigma.clamp(0.0, 1.0) * self.width()
        }
    }

    /// Relative position of `theta` (already reduced to the arc's half-turn).
    pub fn sigma_of(&self, theta: f64) -> f64 {
        if self.is_narrow() {
            0.5
        } else {
            ((theta - self.start) / self.width()).clamp(0.0, 1.0)
        }
    }

    pub fn contains(&self, theta: f64, margin: f64) -> bool {
        theta >= self.start - margin && theta <= self.end + margin
    }
}

/// Locates the Birkhoff partner arc of the unit vector `u`.
///
/// `g(theta) = min_lambda ||u + lambda v(theta)||` is quasi-concave on the
/// half-turn `(theta_u, theta_u + pi)` (its superlevel sets are the directions
/// of lines missing a convex set that avoids the origin) and peaks at `||u||`
/// exactly on the partner arc. The peak is bracketed by a coarse scan and
/// golden section; the arc ends are found by bisection.
pub(crate) fn birkhoff_arc(space: &Space, u: Point2, tol: &OrthTolerance) -> BirkhoffArc {
    let theta_u = planar::angle_of(u);
    let threshold = space.norm2(u) * (1.0 - tol.rel_tol);
    let g = |theta: f64| line_min2(space, u, space.sphere_point(theta), tol.lambda_tol);
    let scan_angle = |k: usize| theta_u + PI * (k as f64 / ARC_SCAN as f64);

    let mut best_k = 1;
    let mut best_g = f64::NEG_INFINITY;
    for k in 1..ARC_SCAN {
        let v = g(scan_angle(k));
        if v > best_g {
            best_g = v;
            best_k = k;
        }
    }
    let (mut peak, mut peak_g) = (scan_angle(best_k), best_g);
    let (lo, hi) = (scan_angle(best_k - 1), scan_angle(best_k + 1));
    let (t, v) = golden_max(g, lo, hi, ANGLE_TOL);
    if v > peak_g {
        peak = t;
        peak_g = v;
    }
    if peak_g < threshold {
        // Numerically unresolved arc: report the best direction found.
        return BirkhoffArc {
            start: peak,
            end: peak,
            peak,
        };
    }
    let feasible = |theta: f64| g(theta) >= threshold;
    let start = bisect_boundary(feasible, peak, theta_u, ANGLE_TOL);
    let end = bisect_boundary(feasible, peak, theta_u + PI, ANGLE_TOL);
    if end - start < NARROW_ARC {
        // The flat top of g pins the peak only to ~sqrt(machine eps); the
        // band ends sit where g has slope and are located far more precisely.
        peak = 0.5 * (start + end);
    }
    BirkhoffArc { start, end, peak }
}

/// Unit vectors `v` with `u` Birkhoff orthogonal to `v`.
///
/// Grid directions of `sphere_grid(n_scan)` passing [`is_birkhoff`] are kept;
/// the ends of the partner arc are added after polishing by bisection (a
/// narrow arc contributes a single direction). The result is closed under
/// negation and sorted by angle.
pub fn birkhoff_partners(
    space: &Space,
    u: &UnitVector,
    n_scan: usize,
    tol: &OrthTolerance,
) -> Result<Vec<UnitVector>> {
    space.require_planar()?;
    if n_scan < 32 {
        return Err(Error::param(
            "n_scan",
            format!("{n_scan} is below the minimum 32"),
        ));
    }
    let up = u.point();
    let arc = birkhoff_arc(space, up, tol);
    let theta_u = planar::angle_of(up);

    let mut grid_hits: Vec<(f64, Point2)> = Vec::new();
    for (k, v) in space.grid_points(n_scan).into_iter().enumerate() {
        let theta = planar::wrap_from(planar::grid_angle(k, n_scan), theta_u);
        let reduced = if theta > theta_u + PI {
            theta - PI
        } else {
            theta
        };
        if arc.contains(reduced, 1e-9) && is_birkhoff2(space, up, v, tol) {
            grid_hits.push((reduced, v));
        }
    }

    let mut found: Vec<Point2> = Vec::new();
    if arc.is_narrow() {
        let closest = grid_hits
            .iter()
            .min_by(|a, b| (a.0 - arc.peak).abs().total_cmp(&(b.0 - arc.peak).abs()));
        match closest {
            Some(&(_, v)) => found.push(v),
            None => found.push(space.sphere_point(arc.peak)),
        }
    } else {
        found.extend(grid_hits.iter().map(|h| h.1));
        found.push(space.sphere_point(arc.start));
        found.push(space.sphere_point(arc.end));
    }
    let negated: Vec<Point2> = found.iter().map(|v| [-v[0], -v[1]]).collect();
    found.extend(negated);

    let mut keyed: Vec<(f64, Point2)> = found
        .into_iter()
        .map(|v| (planar::angle_of(v), v))
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    keyed.dedup_by(|b, a| (b.0 - a.0).abs() < 1e-9);
    Ok(keyed
        .into_iter()
        .map(|(_, v)| UnitVector::from_point_unchecked(v))
        .collect())
}

/// Radii `s` in `(1e-6, s_max]` with `u` isosceles orthogonal to `s v`.
///
/// Roots of `h(s) = ||u + s v|| - ||u - s v||` are located by sign changes on
/// a 1024-point log grid and polished by bisection to `1e-10`. Grid points
/// where `h` vanishes are roots themselves; when `h` vanishes on the whole
/// grid the grid is returned.
pub fn isosceles_radii(
    space: &Space,
    u: &UnitVector,
    v: &UnitVector,
    s_max: f64,
) -> Result<Vec<f64>> {
    space.require_planar()?;
    if !(s_max > 1e-6 && s_max.is_finite()) {
        return Err(Error::param(
            "s_max",
            format!("{s_max} is not in (1e-6, inf)"),
        ));
    }
    Ok(isosceles_radii2(space, u.point(), v.point(), s_max))
}

pub(crate) const RADII_POINTS: usize = 1024;
const RADII_MIN: f64 = 1e-6;

pub(crate) fn isosceles_radii2(space: &Space, u: Point2, v: Point2, s_max: f64) -> Vec<f64> {
    let h = |s: f64| {
        space.norm2(planar::combine(1.0, u, s, v)) - space.norm2(planar::combine(1.0, u, -s, v))
    };
    let is_zero = |s: f64, hs: f64| hs.abs() <= 1e-12 * (1.0 + s);
    let grid: Vec<f64> = log_grid(RADII_MIN, s_max, RADII_POINTS + 1)
        .into_iter()
        .skip(1)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&s| h(s)).collect();
    if grid.iter().zip(&values).all(|(&s, &hs)| is_zero(s, hs)) {
        return grid;
    }
    let mut roots = Vec::new();
    for k in 0..grid.len() {
        if is_zero(grid[k], values[k]) {
            roots.push(grid[k]);
            continue;
        }
        if k > 0
            && !is_zero(grid[k - 1], values[k - 1])
            && values[k - 1].signum() != values[k].signum()
        {
            let sign = values[k - 1].signum();
            let (mut lo, mut hi) = (grid[k - 1], grid[k]);
            while hi - lo > 1e-10 {
                let mid = 0.5 * (lo + hi);
                if h(mid).signum() == sign {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
    }
    roots
}

/// The direction `theta` on the half-turn after `theta_u` (side `+1`) or
/// before it (side `-1`) at which `u` is isosceles orthogonal to `s v(theta)`.
/// `||u + s v|| - ||u - s v||` is non-increasing along the half-turn, so
/// bisection applies.
pub(crate) fn isosceles_direction(space: &Space, u: Point2, s: f64, side: f64) -> f64 {
    let theta_u = planar::angle_of(u);
    let positive = |theta: f64| {
        let v = space.sphere_point(theta);
        space.norm2(planar::combine(1.0, u, s, v)) >= space.norm2(planar::combine(1.0, u, -s, v))
    };
    bisect_boundary(positive, theta_u, theta_u + side * PI, ANGLE_TOL)
}

/// The Singer partner direction of `u` on the given side; see
/// [`isosceles_direction`] (Singer orthogonality of unit vectors is isosceles
/// orthogonality at `s = 1`).
pub(crate) fn singer_direction(space: &Space, u: Point2, side: f64) -> f64 {
    isosceles_direction(space, u, 1.0, side)
}
