//! Sup-searches over pairs of unit vectors of a planar space.
//!
//! Three pair families are supported:
//! * free pairs `(u, v)` from the sphere grid, refined over both angles;
//! * projected pairs, where `v` (and possibly an inner parameter) is a
//!   function of `u` and a side, refined over the angle of `u` alone;
//! * Birkhoff pairs `u ⊥_B v`, refined over the angle of `u` and the relative
//!   position of `v` on the partner arc of `u`.
//!
//! All searches maximize a score returned by an objective callback together
//! with an inner parameter (`t`, `s`, ...) that is stored in the witness.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::optim::pattern_search;
use crate::orthogonality::{birkhoff_arc, is_birkhoff2, OrthTolerance};
use crate::planar::{self, Point2};
use crate::search::{search, Cand, Found, LevelBest, Levels, MIN_LEVEL};
use crate::spaces::Space;

pub(crate) const HALVINGS: u32 = 12;
pub(crate) const MAX_MOVES: usize = 64;

/// A located pair with its inner parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PairW {
    pub tu: f64,
    pub tv: f64,
    pub u: Point2,
    pub v: Point2,
    pub param: f64,
    /// Half-turn of `v` relative to `u` (projected pairs) or partner arc
    /// orientation (Birkhoff pairs): `+1` or `-1`.
    pub side: f64,
    /// Relative position on the partner arc (Birkhoff pairs).
    pub sigma: f64,
}

impl PairW {
    fn key(&self) -> [f64; 2] {
        [self.tu.rem_euclid(TAU), self.tv.rem_euclid(TAU)]
    }

    fn cand(self, score: f64) -> Cand<PairW> {
        Cand {
            score,
            key: self.key(),
            witness: self,
        }
    }
}

pub(crate) fn require_grid(n: usize) -> Result<()> {
    if n < MIN_LEVEL {
        return Err(Error::param(
            "n_grid",
            format!("{n} is below the minimum {MIN_LEVEL}"),
        ));
    }
    Ok(())
}

pub(crate) fn require_s_points(s_points: usize) -> Result<()> {
    if s_points < 64 {
        return Err(Error::param(
            "s_points",
            format!("{s_points} is below the minimum 64"),
        ));
    }
    Ok(())
}

fn side_of(tu: f64, tv: f64) -> f64 {
    let d = (tv - tu).rem_euclid(TAU);
    if d > 0.0 && d <= PI {
        1.0
    } else {
        -1.0
    }
}

/// Projection of a direction `u` (given by its angle) to a full candidate on
/// one side: returns `(score, witness)`.
pub(crate) trait Projection: Fn(f64, f64) -> Option<(f64, PairW)> + Sync {}
impl<T: Fn(f64, f64) -> Option<(f64, PairW)> + Sync> Projection for T {}

/// Objective on a pair of unit vectors: `(score, inner parameter)`.
pub(crate) trait PairObjective: Fn(Point2, Point2) -> Option<(f64, f64)> + Sync {}
impl<T: Fn(Point2, Point2) -> Option<(f64, f64)> + Sync> PairObjective for T {}

fn refine_projected<P: Projection>(proj: &P, start: &Cand<PairW>, m: usize) -> Option<Cand<PairW>> {
    let w = start.witness;
    let side = side_of(w.tu, w.tv);
    let mut best = *start;
    if let Some((s, pw)) = proj(w.tu, side) {
        let c = pw.cand(s);
        if c.score > best.score {
            best = c;
        }
    }
    let (_, score, witness) = pattern_search(
        &[best.witness.tu],
        best.score,
        best.witness,
        &[TAU / m as f64],
        HALVINGS,
        MAX_MOVES,
        |x| proj(x[0], side),
    );
    Some(witness.cand(score))
}

/// Sup over all grid pairs of `objective`, optionally adding the projected
/// candidates of every grid direction. With a projection, refinement runs
/// along it; otherwise over both angles.
///
/// `fine_u > 0` adds the directions `u` of a grid of that size (independent
/// of `n`), each paired with every direction `v` of the main grid; this
/// resolves features of the objective much narrower than the main grid.
pub(crate) fn sup_free<F, P>(
    space: &Space,
    n: usize,
    fine_u: usize,
    objective: &F,
    projection: Option<&P>,
) -> Option<Found<PairW>>
where
    F: PairObjective,
    P: Projection,
{
    let pts = space.grid_points(n);
    let fine = space.grid_points(fine_u);
    let row = |i: usize, lv: &Levels, acc: &mut LevelBest<PairW>| {
        if i >= n {
            let k = i - n;
            let (tu, u) = (planar::grid_angle(k, fine_u), fine[k]);
            for (j, &v) in pts.iter().enumerate() {
                if let Some((score, param)) = objective(u, v) {
                    let w = PairW {
                        tu,
                        tv: planar::grid_angle(j, n),
                        u,
                        v,
                        param,
                        side: 0.0,
                        sigma: 0.0,
                    };
                    acc.offer(lv.of(j), w.cand(score));
                }
            }
            return;
        }
        let (tu, u) = (planar::grid_angle(i, n), pts[i]);
        for (j, &v) in pts.iter().enumerate() {
            if let Some((score, param)) = objective(u, v) {
                let w = PairW {
                    tu,
                    tv: planar::grid_angle(j, n),
                    u,
                    v,
                    param,
                    side: 0.0,
                    sigma: 0.0,
                };
                acc.offer(lv.of_pair(i, j), w.cand(score));
            }
        }
        if let Some(proj) = projection {
            for side in [1.0, -1.0] {
                if let Some((score, w)) = proj(tu, side) {
                    acc.offer(lv.of(i), w.cand(score));
                }
            }
        }
    };
    let refine = |start: &Cand<PairW>, m: usize| match projection {
        Some(proj) => refine_projected(proj, start, m),
        None => {
            let w = start.witness;
            let step = TAU / m as f64;
            let (_, score, witness) = pattern_search(
                &[w.tu, w.tv],
                start.score,
                w,
                &[step, step],
                HALVINGS,
                MAX_MOVES,
                |x| {
                    let (u, v) = (space.sphere_point(x[0]), space.sphere_point(x[1]));
                    objective(u, v).map(|(s, param)| {
                        (
                            s,
                            PairW {
                                tu: x[0],
                                tv: x[1],
                                u,
                                v,
                                param,
                                side: 0.0,
                                sigma: 0.0,
                            },
                        )
                    })
                },
            );
            Some(witness.cand(score))
        }
    };
    search(n, n + fine_u, row, refine)
}

/// Sup over projected pairs only: one candidate per grid direction and side.
pub(crate) fn sup_projected<P: Projection>(n: usize, projection: &P) -> Option<Found<PairW>> {
    let row = |i: usize, lv: &Levels, acc: &mut LevelBest<PairW>| {
        let tu = planar::grid_angle(i, n);
        for side in [1.0, -1.0] {
            if let Some((score, w)) = projection(tu, side) {
                acc.offer(lv.of(i), w.cand(score));
            }
        }
    };
    search(n, n, row, |start, m| refine_projected(projection, start, m))
}

/// Sup of `objective` over Birkhoff pairs `u ⊥_B v`: for every grid direction
/// `u`, the grid directions on its partner arc (and the negated arc) that pass
/// the Birkhoff test, plus the arc ends and peak. A narrow arc (a single
/// partner up to tolerance) contributes its peak only.
pub(crate) fn sup_birkhoff<F: PairObjective>(
    space: &Space,
    n: usize,
    tol: &OrthTolerance,
    objective: &F,
) -> Option<Found<PairW>> {
    let pts = space.grid_points(n);
    let step = TAU / n as f64;
    let row = |i: usize, lv: &Levels, acc: &mut LevelBest<PairW>| {
        let (tu, u) = (planar::grid_angle(i, n), pts[i]);
        let arc = birkhoff_arc(space, u, tol);
        for side in [1.0, -1.0] {
            let shift = if side > 0.0 { 0.0 } else { PI };
            let mut offer = |level: usize, tv: f64, v: Point2, reduced: f64| {
                if let Some((score, param)) = objective(u, v) {
                    let w = PairW {
                        tu,
                        tv,
                        u,
                        v,
                        param,
                        side,
                        sigma: arc.sigma_of(reduced),
                    };
                    acc.offer(level, w.cand(score));
                }
            };
            if arc.is_narrow() {
                let v = planar::scale(space.sphere_point(arc.peak), side);
                offer(lv.of(i), arc.peak + shift, v, arc.peak);
                continue;
            }
            let k_lo = ((arc.start + shift - tu - 1e-9) / step).ceil() as i64;
            let k_hi = ((arc.end + shift - tu + 1e-9) / step).floor() as i64;
            for k in k_lo..=k_hi {
                let j = (i as i64 + k).rem_euclid(n as i64) as usize;
                let v = pts[j];
                if is_birkhoff2(space, u, v, tol) {
                    let tv = planar::grid_angle(j, n);
                    let reduced = tu + (tv - tu).rem_euclid(TAU) - shift;
                    offer(lv.of_pair(i, j), tv, v, reduced);
                }
            }
            for theta in [arc.start, arc.peak, arc.end] {
                let v = planar::scale(space.sphere_point(theta), side);
                offer(lv.of(i), theta + shift, v, theta);
            }
        }
    };
    let refine = |start: &Cand<PairW>, m: usize| {
        let w = start.witness;
        let side = w.side;
        let arc0 = birkhoff_arc(space, space.sphere_point(w.tu), tol);
        let s_step = if arc0.is_narrow() {
            0.0
        } else {
            (TAU / m as f64 / arc0.width()).min(0.25)
        };
        let (_, score, witness) = pattern_search(
            &[w.tu, w.sigma],
            start.score,
            w,
            &[TAU / m as f64, s_step],
            HALVINGS,
            MAX_MOVES,
            |x| {
                if !(0.0..=1.0).contains(&x[1]) {
                    return None;
                }
                let u = space.sphere_point(x[0]);
                let arc = birkhoff_arc(space, u, tol);
                let theta = arc.at(x[1]);
                let v = planar::scale(space.sphere_point(theta), side);
                let shift = if side > 0.0 { 0.0 } else { PI };
                objective(u, v).map(|(s, param)| {
                    (
                        s,
                        PairW {
                            tu: x[0],
                            tv: theta + shift,
                            u,
                            v,
                            param,
                            side,
                            sigma: x[1],
                        },
                    )
                })
            },
        );
        Some(witness.cand(score))
    };
    search(n, n, row, refine)
}
