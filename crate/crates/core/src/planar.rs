//! Small fixed-size vector helpers for the planar hot paths.

use std::f64::consts::TAU;

pub type Point2 = [f64; 2];

#[inline]
pub fn add(a: Point2, b: Point2) -> Point2 {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn sub(a: Point2, b: Point2) -> Point2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn scale(a: Point2, c: f64) -> Point2 {
    [c * a[0], c * a[1]]
}

/// `a * x + b * y`.
#[inline]
pub fn combine(a: f64, x: Point2, b: f64, y: Point2) -> Point2 {
    [a * x[0] + b * y[0], a * x[1] + b * y[1]]
}

#[inline]
pub fn cross(a: Point2, b: Point2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Euclidean direction at angle `theta`.
#[inline]
pub fn direction(theta: f64) -> Point2 {
    let (s, c) = theta.sin_cos();
    [c, s]
}

/// Angle of the `k`-th of `n` equally spaced grid directions.
#[inline]
pub fn grid_angle(k: usize, n: usize) -> f64 {
    TAU * (k as f64 / n as f64)
}

/// Grid direction with axis directions snapped to exact values.
pub fn grid_direction(k: usize, n: usize) -> Point2 {
    if (4 * k).is_multiple_of(n) {
        match (4 * k / n) % 4 {
            0 => [1.0, 0.0],
            1 => [0.0, 1.0],
            2 => [-1.0, 0.0],
            _ => [0.0, -1.0],
        }
    } else {
        direction(grid_angle(k, n))
    }
}

/// Euclidean polar angle of `p` in `[0, 2 pi)`.
pub fn angle_of(p: Point2) -> f64 {
    let a = p[1].atan2(p[0]);
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

/// Reduces `a` into `[base, base + 2 pi)`.
pub fn wrap_from(a: f64, base: f64) -> f64 {
    base + (a - base).rem_euclid(TAU)
}

/// Counter-clockwise convex hull without collinear points (monotone chain).
pub fn convex_hull(points: &mut [Point2]) -> Vec<Point2> {
    points.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut hull: Vec<Point2> = Vec::with_capacity(points.len() + 1);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2>> = if pass == 0 {
            Box::new(points.iter())
        } else {
            Box::new(points.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if cross(sub(b, a), sub(p, a)) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let mut pts = vec![
            [1.0, 0.0],
            [0.0, 1.0],
            [-1.0, 0.0],
            [0.0, -1.0],
            [0.0, 0.0],
            [0.5, 0.5],
            [0.2, 0.1],
        ];
        let hull = convex_hull(&mut pts);
        assert_eq!(hull.len(), 4);
        for p in [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]] {
            assert!(hull.contains(&p));
        }
        // Counter-clockwise orientation.
        let area: f64 = (0..4).map(|i| cross(hull[i], hull[(i + 1) % 4])).sum();
        assert!(area > 0.0);
    }

    #[test]
    fn grid_direction_snaps_axes() {
        assert_eq!(grid_direction(0, 8), [1.0, 0.0]);
        assert_eq!(grid_direction(2, 8), [0.0, 1.0]);
        assert_eq!(grid_direction(6, 8), [0.0, -1.0]);
        let d = grid_direction(1, 8);
        assert!((d[0] - d[1]).abs() < 1e-15);
    }

    #[test]
    fn wrap_from_reduces_into_window() {
        let a = wrap_from(-0.5, 1.0);
        assert!((1.0..1.0 + TAU).contains(&a));
        assert!((a - (TAU - 0.5)).abs() < 1e-15);
    }
}
