//! Independent oracles: norms written out by hand, an exact Birkhoff test via
//! subdifferentials, and exhaustive searches without local refinement.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use banach_core::{Space, SpaceSpec};

pub mod properties;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Plane {
    L1,
    L2,
    LInf,
    XMu(f64),
    Hexagon,
}

const SQRT3: f64 = 1.732_050_807_568_877_2;

impl Plane {
    /// The five spaces of the verification battery.
    pub const BATTERY: [Plane; 5] = [
        Plane::L2,
        Plane::L1,
        Plane::LInf,
        Plane::XMu(1.2),
        Plane::Hexagon,
    ];

    pub fn space(&self) -> Space {
        match *self {
            Plane::L1 => Space::l1(),
            Plane::L2 => Space::l2(),
            Plane::LInf => Space::linf(),
            Plane::XMu(mu) => Space::xmu(mu).unwrap(),
            Plane::Hexagon => Space::hexagon(),
        }
    }

    pub fn spec(&self) -> SpaceSpec {
        self.space().spec().clone()
    }

    pub fn name(&self) -> String {
        match self {
            Plane::L1 => "l1".into(),
            Plane::L2 => "l2".into(),
            Plane::LInf => "linf".into(),
            Plane::XMu(mu) => format!("X_{mu}"),
            Plane::Hexagon => "hexagon".into(),
        }
    }

    /// Linear functionals whose maximum is the norm (polyhedral planes only).
    fn functionals(&self) -> Option<Vec<[f64; 2]>> {
        match self {
            Plane::L1 => Some(vec![[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]]),
            Plane::LInf => Some(vec![[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]),
            Plane::Hexagon => Some(
                (0..6)
                    .map(|k| {
                        let phi = PI / 6.0 + k as f64 * PI / 3.0;
                        [2.0 / SQRT3 * phi.cos(), 2.0 / SQRT3 * phi.sin()]
                    })
                    .collect(),
            ),
            _ => None,
        }
    }

    pub fn norm(&self, x: f64, y: f64) -> f64 {
        match *self {
            Plane::L2 => (x * x + y * y).sqrt(),
            Plane::XMu(mu) => (x * x + y * y).sqrt().max(mu * x.abs().max(y.abs())),
            _ => self
                .functionals()
                .unwrap()
                .iter()
                .map(|a| a[0] * x + a[1] * y)
                .fold(f64::MIN, f64::max),
        }
    }

    pub fn unit(&self, theta: f64) -> [f64; 2] {
        let (s, c) = theta.sin_cos();
        let n = self.norm(c, s);
        [c / n, s / n]
    }

    /// Gradients of the norm's pieces active at `x`; their convex hull is the
    /// subdifferential.
    fn active_gradients(&self, x: [f64; 2]) -> Vec<[f64; 2]> {
        match *self {
            Plane::L2 => {
                let e = (x[0] * x[0] + x[1] * x[1]).sqrt();
                vec![[x[0] / e, x[1] / e]]
            }
            Plane::XMu(mu) => {
                let e = (x[0] * x[0] + x[1] * x[1]).sqrt();
                let m = mu * x[0].abs().max(x[1].abs());
                let mut grads = Vec::new();
                if e >= m - 1e-12 * e {
                    grads.push([x[0] / e, x[1] / e]);
                }
                if m >= e - 1e-12 * e {
                    if x[0].abs() >= x[1].abs() - 1e-12 {
                        grads.push([mu * x[0].signum(), 0.0]);
                    }
                    if x[1].abs() >= x[0].abs() - 1e-12 {
                        grads.push([0.0, mu * x[1].signum()]);
                    }
                }
                grads
            }
            _ => {
                let nx = self.norm(x[0], x[1]);
                self.functionals()
                    .unwrap()
                    .into_iter()
                    .filter(|a| a[0] * x[0] + a[1] * x[1] >= nx - 1e-12)
                    .collect()
            }
        }
    }

    /// Points of the unit sphere where the norm is not differentiable.
    pub fn corners(&self) -> Vec<[f64; 2]> {
        match *self {
            Plane::L2 => Vec::new(),
            Plane::L1 => vec![[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]],
            Plane::LInf => vec![[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]],
            Plane::Hexagon => (0..6).map(|k| self.unit(k as f64 * PI / 3.0)).collect(),
            Plane::XMu(mu) => {
                let (a, b) = (1.0 / mu, (1.0 - 1.0 / (mu * mu)).sqrt());
                let mut out = Vec::new();
                for (x, y) in [(a, b), (b, a)] {
                    for (sx, sy) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
                        out.push([sx * x, sy * y]);
                    }
                }
                out
            }
        }
    }

    /// `n` equally spaced sphere points followed by the corners.
    pub fn sphere_with_corners(&self, n: usize) -> Vec<[f64; 2]> {
        let mut pts: Vec<[f64; 2]> = (0..n)
            .map(|k| self.unit(TAU * k as f64 / n as f64))
            .collect();
        pts.extend(self.corners());
        pts
    }

    /// Exact Birkhoff test `x ⊥_B y`: some norming functional of `x`
    /// vanishes on `y`, i.e. `0` lies in `{f(y) : f in the subdifferential}`.
    pub fn birkhoff(&self, x: [f64; 2], y: [f64; 2]) -> bool {
        straddles(&self.active_gradients(x), y, 1e-12)
    }

    /// Unit Birkhoff partners of `u` built from the subdifferential: the
    /// tangent directions at smooth points, and `k` samples of the cone
    /// between the two one-sided tangents at a corner (with negatives).
    pub fn partners(&self, u: [f64; 2], k: usize) -> Vec<[f64; 2]> {
        let perp = |g: [f64; 2]| [-g[1], g[0]];
        let grads = self.active_gradients(u);
        let mut dirs = Vec::new();
        match grads.as_slice() {
            [g] => dirs.push(perp(*g)),
            [g1, g2] => {
                let mut p1 = perp(*g1);
                if g2[0] * p1[0] + g2[1] * p1[1] < 0.0 {
                    p1 = [-p1[0], -p1[1]];
                }
                let mut p2 = perp(*g2);
                if g1[0] * p2[0] + g1[1] * p2[1] > 0.0 {
                    p2 = [-p2[0], -p2[1]];
                }
                for i in 0..=k {
                    let l = i as f64 / k as f64;
                    dirs.push([(1.0 - l) * p1[0] + l * p2[0], (1.0 - l) * p1[1] + l * p2[1]]);
                }
            }
            other => panic!("{} active pieces at {u:?}", other.len()),
        }
        let mut out = Vec::new();
        for d in dirs {
            let n = self.norm(d[0], d[1]);
            out.push([d[0] / n, d[1] / n]);
            out.push([-d[0] / n, -d[1] / n]);
        }
        out
    }
}

fn straddles(fs: &[[f64; 2]], y: [f64; 2], tol: f64) -> bool {
    let vals: Vec<f64> = fs.iter().map(|a| a[0] * y[0] + a[1] * y[1]).collect();
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    lo <= tol && hi >= -tol
}

/// `n` log-spaced radii in `[lo, hi]`.
pub fn radii(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

/// `(alpha ||x|| + beta ||y||)/||x - y|| * a[x, y]` for `x = u`, `y = s v`.
pub fn dw_ratio(p: Plane, a: f64, b: f64, u: [f64; 2], v: [f64; 2], s: f64) -> f64 {
    let d = p.norm(u[0] - s * v[0], u[1] - s * v[1]);
    if d < 1e-12 {
        return f64::NEG_INFINITY;
    }
    (a + b * s) / d * p.norm(u[0] - v[0], u[1] - v[1])
}

/// Exhaustive sup of the DW ratio over `n` directions squared and the radii.
pub fn brute_dw(p: Plane, a: f64, b: f64, n: usize, rs: &[f64]) -> f64 {
    let pts: Vec<[f64; 2]> = (0..n).map(|k| p.unit(TAU * k as f64 / n as f64)).collect();
    let mut best = f64::NEG_INFINITY;
    for &u in &pts {
        for &v in &pts {
            for &s in rs {
                best = best.max(dw_ratio(p, a, b, u, v, s));
            }
        }
    }
    best
}

/// Exhaustive sup of the DW ratio over exact Birkhoff pairs `u ⊥_B s v`,
/// with `u` on `n` directions and the corners.
pub fn brute_dw_birkhoff(p: Plane, a: f64, b: f64, n: usize, rs: &[f64]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for u in p.sphere_with_corners(n) {
        for v in p.partners(u, 64) {
            for &s in rs {
                best = best.max(dw_ratio(p, a, b, u, v, s));
            }
        }
    }
    best
}

/// Exhaustive `min over lambda` of `||x + lambda y||` on a dense sample.
pub fn sampled_line_min(p: Plane, x: [f64; 2], y: [f64; 2], lambdas: &[f64]) -> f64 {
    lambdas
        .iter()
        .map(|l| p.norm(x[0] + l * y[0], x[1] + l * y[1]))
        .fold(f64::INFINITY, f64::min)
}

/// Exhaustive Lindenstrauss modulus over `n` directions squared.
pub fn brute_rho(p: Plane, t: f64, n: usize) -> f64 {
    let pts: Vec<[f64; 2]> = (0..n).map(|k| p.unit(TAU * k as f64 / n as f64)).collect();
    let mut best = f64::NEG_INFINITY;
    for &x in &pts {
        for &y in &pts {
            let v = 0.5
                * (p.norm(x[0] + t * y[0], x[1] + t * y[1])
                    + p.norm(x[0] - t * y[0], x[1] - t * y[1]))
                - 1.0;
            best = best.max(v);
        }
    }
    best
}

/// Exhaustive James constant over `n` directions squared.
pub fn brute_james(p: Plane, n: usize) -> f64 {
    let pts: Vec<[f64; 2]> = (0..n).map(|k| p.unit(TAU * k as f64 / n as f64)).collect();
    let mut best = f64::NEG_INFINITY;
    for &x in &pts {
        for &y in &pts {
            let v = p
                .norm(x[0] + y[0], x[1] + y[1])
                .min(p.norm(x[0] - y[0], x[1] - y[1]));
            best = best.max(v);
        }
    }
    best
}

/// Unit directions `v` (on a scan of `m` angles, polished by bisection) with
/// `||u - v|| = ||u + v||`, i.e. the Singer partners of the unit vector `u`.
pub fn singer_partners(p: Plane, u: [f64; 2], m: usize) -> Vec<[f64; 2]> {
    let h = |theta: f64| {
        let v = p.unit(theta);
        p.norm(u[0] - v[0], u[1] - v[1]) - p.norm(u[0] + v[0], u[1] + v[1])
    };
    let mut out = Vec::new();
    for k in 0..m {
        let (mut a, mut b) = (TAU * k as f64 / m as f64, TAU * (k + 1) as f64 / m as f64);
        let (ha, hb) = (h(a), h(b));
        if ha == 0.0 {
            out.push(p.unit(a));
            continue;
        }
        if ha.signum() == hb.signum() {
            continue;
        }
        for _ in 0..60 {
            let mid = 0.5 * (a + b);
            if h(mid).signum() == ha.signum() {
                a = mid;
            } else {
                b = mid;
            }
        }
        out.push(p.unit(0.5 * (a + b)));
    }
    out
}

/// Exhaustive DW ratio with `alpha = beta = 1` over Singer pairs.
pub fn brute_dw_singer(p: Plane, n: usize, m: usize, rs: &[f64]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for k in 0..n {
        let u = p.unit(TAU * (k as f64 + 0.5) / n as f64);
        for v in singer_partners(p, u, m) {
            for &s in rs {
                best = best.max(dw_ratio(p, 1.0, 1.0, u, v, s));
            }
        }
    }
    best
}

/// Exhaustive rectangular constant over exact Birkhoff pairs, with `u` on `n`
/// directions and the corners.
pub fn brute_rect(p: Plane, n: usize, rs: &[f64]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for u in p.sphere_with_corners(n) {
        for v in p.partners(u, 64) {
            for &s in rs {
                best = best.max((1.0 + s) / p.norm(u[0] - s * v[0], u[1] - s * v[1]));
            }
        }
    }
    best
}

/// Exhaustive modulus of convexity over `n` directions squared.
pub fn brute_delta(p: Plane, eps: f64, n: usize) -> f64 {
    let pts: Vec<[f64; 2]> = (0..n).map(|k| p.unit(TAU * k as f64 / n as f64)).collect();
    let mut best = f64::INFINITY;
    for &x in &pts {
        for &y in &pts {
            if p.norm(x[0] - y[0], x[1] - y[1]) >= eps {
                best = best.min(1.0 - 0.5 * p.norm(x[0] + y[0], x[1] + y[1]));
            }
        }
    }
    best
}
