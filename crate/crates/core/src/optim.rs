//! Derivative-free one-dimensional and local search primitives.
//!
//! Everything here works on non-smooth objectives: norms of affine families
//! are convex but typically have kinks (l_inf, polygons, X_mu corners).

const INV_PHI: f64 = 0.618_033_988_749_894_8;
const MAX_ITERS: usize = 400;

/// Golden-section minimization of a unimodal `f` on `[lo, hi]` until the
/// bracket is shorter than `tol`. Returns the best evaluated point and its
/// value, so the value is reproducible by re-evaluating `f` there.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    let mut iters = 0;
    while b - a > tol && iters < MAX_ITERS {
        iters += 1;
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    best
}

/// [`golden_min`] on the closed interval: the endpoints are candidates too.
pub fn golden_min_closed<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let f_lo = f(lo);
    let f_hi = f(hi);
    let mut best = golden_min(&mut f, lo, hi, tol);
    if f_lo <= best.1 {
        best = (lo, f_lo);
    }
    if f_hi < best.1 {
        best = (hi, f_hi);
    }
    best
}

/// Golden-section maximization; see [`golden_min`].
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_min(|x| -f(x), lo, hi, tol);
    (x, -v)
}

/// Bisection for the boundary of an interval-shaped feasible set: `inside`
/// satisfies `pred`, `outside` does not. Returns the last feasible point,
/// within `tol` of the boundary.
pub fn bisect_boundary<P: FnMut(f64) -> bool>(
    mut pred: P,
    inside: f64,
    outside: f64,
    tol: f64,
) -> f64 {
    let (mut good, mut bad) = (inside, outside);
    let mut iters = 0;
    while (bad - good).abs() > tol && iters < MAX_ITERS {
        iters += 1;
        let mid = 0.5 * (good + bad);
        if pred(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

/// `n` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let (l, h) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| match k {
            0 => lo,
            _ if k == n - 1 => hi,
            _ => (l + (h - l) * k as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

/// Maximizes `f` over a log grid, then refines by golden section (in log
/// coordinates) on the bracket around the best grid point. Returns the best
/// evaluated `(s, f(s))`, never worse than the grid maximum. `f` may return
/// `NEG_INFINITY` for excluded points.
pub fn maximize_on_log_grid<F: FnMut(f64) -> f64>(mut f: F, grid: &[f64], tol: f64) -> (f64, f64) {
    let mut best = (grid[0], f64::NEG_INFINITY);
    let mut best_k = 0;
    for (k, &s) in grid.iter().enumerate() {
        let v = f(s);
        if v > best.1 {
            best = (s, v);
            best_k = k;
        }
    }
    if !best.1.is_finite() {
        return best;
    }
    let lo = grid[best_k.saturating_sub(1)].ln();
    let hi = grid[(best_k + 1).min(grid.len() - 1)].ln();
    if hi > lo {
        let (ls, v) = golden_max(|l| f(l.exp()), lo, hi, tol);
        if v > best.1 {
            best = (ls.exp(), v);
        }
    }
    best
}

/// Coordinate pattern search (maximization) with step halving.
///
/// Starting from `x0` with known value `v0` and payload `p0`, tries `+/- step`
/// along each coordinate and along the diagonals of each coordinate pair,
/// accepting strict improvements, and halves all steps once no move improves.
/// `f` returns `None` for infeasible points.
pub fn pattern_search<P, F>(
    x0: &[f64],
    v0: f64,
    p0: P,
    steps: &[f64],
    halvings: u32,
    max_moves: usize,
    mut f: F,
) -> (Vec<f64>, f64, P)
where
    F: FnMut(&[f64]) -> Option<(f64, P)>,
{
    let dim = x0.len();
    let mut moves: Vec<Vec<f64>> = Vec::new();
    for k in 0..dim {
        for dir in [1.0, -1.0] {
            let mut m = vec![0.0; dim];
            m[k] = dir;
            moves.push(m);
        }
    }
    for k in 0..dim {
        for l in k + 1..dim {
            for (a, b) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut m = vec![0.0; dim];
                m[k] = a;
                m[l] = b;
                moves.push(m);
            }
        }
    }
    let mut x = x0.to_vec();
    let mut best = v0;
    let mut payload = p0;
    let mut step = steps.to_vec();
    let mut cand = x.clone();
    for _ in 0..=halvings {
        for _ in 0..max_moves {
            let mut improved = false;
            for m in &moves {
                for k in 0..dim {
                    cand[k] = x[k] + m[k] * step[k];
                }
                if let Some((v, p)) = f(&cand) {
                    if v > best {
                        best = v;
                        payload = p;
                        x.copy_from_slice(&cand);
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        step.iter_mut().for_each(|s| *s *= 0.5);
    }
    (x, best, payload)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_kinked_minimum() {
        let (x, v) = golden_min(|x| (x - 0.3).abs() + 1.0, -3.0, 3.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-11);
        assert!((v - 1.0).abs() < 1e-11);
    }

    #[test]
    fn golden_closed_prefers_endpoint() {
        let (x, v) = golden_min_closed(|x| x, 0.0, 1.0, 1e-10);
        assert_eq!((x, v), (0.0, 0.0));
    }

    #[test]
    fn golden_max_smooth() {
        let (x, v) = golden_max(|x| -(x - 2.0) * (x - 2.0), 0.0, 5.0, 1e-10);
        assert!((x - 2.0).abs() < 1e-6);
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn bisection_locates_threshold() {
        let b = bisect_boundary(|x| x <= 0.75, 0.0, 1.0, 1e-12);
        assert!(b <= 0.75 && 0.75 - b < 1e-12);
    }

    #[test]
    fn log_grid_endpoints_exact() {
        let g = log_grid(1e-3, 1e3, 7);
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[6], 1e3);
        assert!((g[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn log_grid_maximizer_refines_between_points() {
        let g = log_grid(1e-3, 1e3, 16);
        let (s, v) = maximize_on_log_grid(|s| -(s.ln() - 0.7f64.ln()).abs(), &g, 1e-12);
        assert!((s - 0.7).abs() < 1e-9);
        assert!(v > -1e-9);
    }

    #[test]
    fn pattern_search_climbs_ridge() {
        let f = |x: &[f64]| Some((-(x[0] - 1.0).abs() - 2.0 * (x[1] + 0.5).abs(), ()));
        let (x, v, _) = pattern_search(
            &[0.0, 0.0],
            f(&[0.0, 0.0]).unwrap().0,
            (),
            &[0.3, 0.3],
            40,
            100,
            f,
        );
        assert!((x[0] - 1.0).abs() < 1e-9 && (x[1] + 0.5).abs() < 1e-9);
        assert!(v > -1e-8);
    }
}
