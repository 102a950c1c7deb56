//! Property suites shared by the standalone property tests and the acceptance
//! gate. Each suite returns the number of cases run or the first failure.

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use banach_core::{
    birkhoff_partners, delta, dw_b, dw_direct, dw_general, is_birkhoff, james_direct, ms_b,
    psi_inf, rho, Exponent, OrthTolerance, Space, SpaceSpec, Vector, Weights,
};

use super::Plane;

pub const CASES: u32 = 1000;
pub const TRIANGLE_CASES: u32 = 10_000;

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<u32, String> {
    runner(cases)
        .run(&strategy, test)
        .map(|_| cases)
        .map_err(|e| e.to_string())
}

fn battery() -> impl Strategy<Value = Plane> {
    prop::sample::select(Plane::BATTERY.to_vec())
}

/// Battery spaces plus random `X_mu` planes.
fn plane() -> impl Strategy<Value = Plane> {
    prop_oneof![battery(), (1.0f64..1.5).prop_map(Plane::XMu)]
}

fn coord() -> impl Strategy<Value = f64> {
    -10.0f64..10.0
}

fn point() -> impl Strategy<Value = [f64; 2]> {
    (coord(), coord()).prop_map(|(a, b)| [a, b])
}

fn weights() -> impl Strategy<Value = Weights> {
    (0.2f64..4.0, 0.2f64..4.0).prop_map(|(a, b)| Weights::new(a, b).unwrap())
}

fn vec2(p: [f64; 2]) -> Vector {
    Vector::xy(p[0], p[1])
}

fn close(a: f64, b: f64, tol: f64, what: &str) -> Result<(), TestCaseError> {
    if (a - b).abs() <= tol {
        Ok(())
    } else {
        Err(TestCaseError::fail(format!(
            "{what}: {a} vs {b} (tol {tol})"
        )))
    }
}

/// Homogeneity, triangle inequality, symmetry, agreement with the hand-written
/// norms, and the `X_mu` nesting, on every battery space and a random `l_p`.
pub fn norm_axioms() -> Result<u32, String> {
    let strategy = (
        point(),
        point(),
        prop::sample::select(vec![-2.0, -0.5, 3.0]),
        1.0f64..8.0,
        1.0f64..2.0,
    );
    run(TRIANGLE_CASES, strategy, |(x, y, c, p, mu)| {
        let lp = Space::new(SpaceSpec::Lp {
            p: Exponent::Finite(p),
            dim: 2,
        })
        .unwrap();
        let mut spaces: Vec<(Space, Option<Plane>)> = Plane::BATTERY
            .iter()
            .map(|pl| (pl.space(), Some(*pl)))
            .collect();
        spaces.push((lp, None));
        for (space, oracle) in &spaces {
            let n = |q: [f64; 2]| space.norm2(q);
            let nx = n(x);
            close(
                n([c * x[0], c * x[1]]),
                c.abs() * nx,
                1e-12 * (1.0 + nx) * c.abs().max(1.0),
                "homogeneity",
            )?;
            prop_assert!(
                n([x[0] + y[0], x[1] + y[1]]) <= nx + n(y) + 1e-12,
                "triangle"
            );
            prop_assert_eq!(n([-x[0], -x[1]]), nx);
            close(
                space.norm(&vec2(x)).unwrap(),
                nx,
                0.0,
                "vector and point evaluation",
            )?;
            if let Some(pl) = oracle {
                close(
                    nx,
                    pl.norm(x[0], x[1]),
                    1e-12 * (1.0 + nx),
                    "hand-written norm",
                )?;
            }
        }
        let xmu = Space::xmu(mu).unwrap();
        let e = Plane::L2.norm(x[0], x[1]);
        let m = xmu.norm2(x);
        prop_assert!(e <= m + 1e-12 && m <= mu * e + 1e-12, "nesting");
        Ok(())
    })
}

/// `x ⊥_B y` iff `c x ⊥_B d y`, for random pairs and for partners returned by
/// the partner search.
pub fn birkhoff_homogeneity() -> Result<u32, String> {
    let tol = OrthTolerance::default();
    let scales = prop::sample::select(vec![0.5, 3.0]);
    let strategy = (
        battery(),
        point(),
        point(),
        any::<bool>(),
        scales.clone(),
        scales,
    );
    run(CASES, strategy, |(pl, x, y, use_partner, c, d)| {
        prop_assume!(x != [0.0, 0.0] && y != [0.0, 0.0]);
        let space = pl.space();
        let y = if use_partner {
            let u = space.unit_vector(&vec2(x)).unwrap();
            let partners = birkhoff_partners(&space, &u, 64, &tol).unwrap();
            let v = partners[partners.len() / 2].point();
            [v[0] * 2.5, v[1] * 2.5]
        } else {
            y
        };
        let base = is_birkhoff(&space, &vec2(x), &vec2(y), &tol).unwrap();
        let scaled = is_birkhoff(
            &space,
            &vec2([c * x[0], c * x[1]]),
            &vec2([d * y[0], d * y[1]]),
            &tol,
        )
        .unwrap();
        prop_assert_eq!(base, scaled);
        if use_partner {
            prop_assert!(base, "partner not orthogonal");
        }
        Ok(())
    })
}

#[derive(Debug, Clone, Copy)]
enum Cheap {
    Delta(f64),
    Rho(f64),
    James,
    Dw(Weights),
    DwB(Weights),
}

fn cheap_estimate(space: &Space, which: Cheap, n: usize) -> (f64, bool) {
    match which {
        Cheap::Delta(eps) => (delta(space, eps, n).unwrap().value(), false),
        Cheap::Rho(t) => (rho(space, t, n).unwrap().value(), true),
        Cheap::James => (james_direct(space, n).unwrap().value(), true),
        Cheap::Dw(w) => (dw_general(space, w, n).unwrap().value(), true),
        Cheap::DwB(w) => (dw_b(space, w, n).unwrap().value(), true),
    }
}

/// Doubling the grid from 64 to 128 never lowers a sup-estimate and never
/// raises an inf-estimate.
pub fn grid_monotonicity() -> Result<u32, String> {
    let which = prop_oneof![
        (0.0f64..2.0).prop_map(Cheap::Delta),
        (0.01f64..2.0).prop_map(Cheap::Rho),
        Just(Cheap::James),
        weights().prop_map(Cheap::Dw),
        weights().prop_map(Cheap::DwB),
    ];
    run(CASES, (plane(), which), |(pl, which)| {
        let space = pl.space();
        let (coarse, is_sup) = cheap_estimate(&space, which, 64);
        let (fine, _) = cheap_estimate(&space, which, 128);
        if is_sup {
            prop_assert!(
                fine >= coarse - 1e-12,
                "{which:?} on {}: {coarse} -> {fine}",
                pl.name()
            );
        } else {
            prop_assert!(
                fine <= coarse + 1e-12,
                "{which:?} on {}: {coarse} -> {fine}",
                pl.name()
            );
        }
        Ok(())
    })
}

/// The objective recomputed at the reported witness equals the estimate.
pub fn witness_reproducibility() -> Result<u32, String> {
    let strategy = (plane(), weights(), 0usize..5);
    run(CASES, strategy, |(pl, w, k)| {
        let space = pl.space();
        let r = match k {
            0 => dw_general(&space, w, 64),
            1 => dw_b(&space, w, 64),
            2 => dw_direct(&space, w, 64, 64),
            3 => ms_b(&space, 64, 64),
            _ => psi_inf(&space, 64, 64),
        }
        .unwrap();
        close(
            r.reevaluate(&space),
            r.value(),
            1e-9,
            &format!("estimator {k} on {}", pl.name()),
        )
    })
}

/// `DW(c alpha, c beta) = c DW(alpha, beta)` to relative `1e-9`, and likewise
/// for `DW_B`.
pub fn weight_scaling() -> Result<u32, String> {
    let strategy = (plane(), weights(), 0.25f64..4.0, any::<bool>());
    run(CASES, strategy, |(pl, w, c, birkhoff)| {
        let space = pl.space();
        let cw = Weights::new(c * w.alpha(), c * w.beta()).unwrap();
        let est = |w| {
            if birkhoff {
                dw_b(&space, w, 64)
            } else {
                dw_general(&space, w, 64)
            }
            .unwrap()
            .value()
        };
        let what = if birkhoff { "DW_B" } else { "DW" };
        let (scaled, expected) = (est(cw), c * est(w));
        close(
            scaled,
            expected,
            1e-9 * expected.max(1.0),
            &format!("{what} scaling on {} by {c} at {w:?}", pl.name()),
        )
    })
}

pub type Suite = (&'static str, fn() -> Result<u32, String>);

pub const SUITES: [Suite; 5] = [
    ("norm-axioms", norm_axioms),
    ("birkhoff-homogeneity", birkhoff_homogeneity),
    ("grid-refinement-monotonicity", grid_monotonicity),
    ("witness-reproducibility", witness_reproducibility),
    ("weight-scaling-linearity", weight_scaling),
];
