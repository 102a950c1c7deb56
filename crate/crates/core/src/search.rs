//! Grid scan with multi-level local refinement.
//!
//! A grid of size `n` is scanned row by row. Every candidate is tagged with
//! the coarsest nested subgrid (`n`, `n/2`, `n/4`, ... down to 64 points) it
//! belongs to, and the best candidate of every subgrid is refined with a step
//! tied to that subgrid. The candidate sets of the grid of size `n` are
//! exactly those of the `n/2` grid plus new ones, and refinement depends only
//! on its start and step, so doubling the grid can never lower the result.
//!
//! Everything is a maximization of `score`; infimum estimates negate.

use std::cmp::Ordering;

use rayon::prelude::*;

/// Smallest subgrid that receives its own refinement.
pub const MIN_LEVEL: usize = 64;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Cand<W> {
    pub score: f64,
    /// Tie-break key, compared lexicographically (smaller wins).
    pub key: [f64; 2],
    pub witness: W,
}

impl<W> Cand<W> {
    fn beats(&self, other: &Cand<W>) -> bool {
        match self.score.total_cmp(&other.score) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => {
                let k = self.key[0]
                    .total_cmp(&other.key[0])
                    .then(self.key[1].total_cmp(&other.key[1]));
                k == Ordering::Less
            }
        }
    }
}

/// Subgrid sizes of a grid of size `n`, finest first.
#[derive(Debug, Clone)]
pub(crate) struct Levels {
    sizes: Vec<usize>,
}

impl Levels {
    pub fn new(n: usize) -> Self {
        let mut sizes = vec![n];
        let mut m = n;
        while m.is_multiple_of(2) && m / 2 >= MIN_LEVEL {
            m /= 2;
            sizes.push(m);
        }
        Levels { sizes }
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn size(&self, level: usize) -> usize {
        self.sizes[level]
    }

    /// Coarsest level whose subgrid contains grid index `i`.
    #[inline]
    pub fn of(&self, i: usize) -> usize {
        if i == 0 {
            self.sizes.len() - 1
        } else {
            (i.trailing_zeros() as usize).min(self.sizes.len() - 1)
        }
    }

    /// Coarsest level containing both indices.
    #[inline]
    pub fn of_pair(&self, i: usize, j: usize) -> usize {
        self.of(i).min(self.of(j))
    }
}

/// Best candidate per level; slot `l` is the best among candidates whose level is `>= l`.
#[derive(Debug, Clone)]
pub(crate) struct LevelBest<W> {
    slots: Vec<Option<Cand<W>>>,
}

impl<W: Clone> LevelBest<W> {
    pub fn new(levels: usize) -> Self {
        LevelBest {
            slots: vec![None; levels],
        }
    }

    #[inline]
    pub fn offer(&mut self, level: usize, cand: Cand<W>) {
        if !cand.score.is_finite() {
            return;
        }
        let level = level.min(self.slots.len() - 1);
        // Slots are ordered: slot l is at least as good as slot l + 1.
        for l in (0..=level).rev() {
            match &self.slots[l] {
                Some(cur) if !cand.beats(cur) => break,
                _ => self.slots[l] = Some(cand.clone()),
            }
        }
    }

    fn merge(mut self, other: LevelBest<W>) -> Self {
        for (mine, theirs) in self.slots.iter_mut().zip(other.slots) {
            if let Some(t) = theirs {
                match mine {
                    Some(m) if !t.beats(m) => {}
                    _ => *mine = Some(t),
                }
            }
        }
        self
    }
}

/// Outcome of [`search`].
#[derive(Debug, Clone)]
pub(crate) struct Found<W> {
    pub best: Cand<W>,
    /// The refinement strictly improved on the best grid candidate.
    pub refined: bool,
}

/// Scans rows `0..rows` with `row` (in parallel) on a grid of size `n`, then
/// refines the best candidate of every level with `refine(start, level_size)`.
/// Rows past `n` may hold extra candidates; their level must only depend on
/// indices into the grid of size `n`. Returns `None` when no row produced a
/// finite candidate.
pub(crate) fn search<W, Row, Refine>(
    n: usize,
    rows: usize,
    row: Row,
    refine: Refine,
) -> Option<Found<W>>
where
    W: Clone + Send + Sync,
    Row: Fn(usize, &Levels, &mut LevelBest<W>) + Sync,
    Refine: Fn(&Cand<W>, usize) -> Option<Cand<W>> + Sync,
{
    let levels = Levels::new(n);
    let nl = levels.len();
    let bests = (0..rows)
        .into_par_iter()
        .fold(
            || LevelBest::new(nl),
            |mut acc, i| {
                row(i, &levels, &mut acc);
                acc
            },
        )
        .reduce(|| LevelBest::new(nl), LevelBest::merge);

    let grid_best = bests.slots[0].clone()?;
    let starts: Vec<(usize, Cand<W>)> = bests
        .slots
        .iter()
        .enumerate()
        .filter_map(|(l, c)| c.clone().map(|c| (levels.size(l), c)))
        .collect();
    let refined: Vec<Cand<W>> = starts
        .par_iter()
        .filter_map(|(m, start)| refine(start, *m))
        .collect();

    let mut best = grid_best.clone();
    for r in refined {
        if r.score.is_finite() && r.beats(&best) {
            best = r;
        }
    }
    let improved = best.score > grid_best.score;
    Some(Found {
        best,
        refined: improved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels_follow_halving() {
        let l = Levels::new(1024);
        assert_eq!(l.len(), 5);
        assert_eq!(l.size(4), 64);
        assert_eq!(l.of(0), 4);
        assert_eq!(l.of(3), 0);
        assert_eq!(l.of(4), 2);
        assert_eq!(l.of_pair(16, 6), 1);
        assert_eq!(Levels::new(100).len(), 1);
        assert_eq!(Levels::new(200).len(), 2);
    }

    #[test]
    fn level_best_keeps_ordered_slots() {
        let mut b = LevelBest::new(3);
        let c = |s: f64| Cand {
            score: s,
            key: [0.0, 0.0],
            witness: (),
        };
        b.offer(0, c(5.0));
        b.offer(2, c(3.0));
        b.offer(1, c(4.0));
        let scores: Vec<f64> = b.slots.iter().map(|s| s.unwrap().score).collect();
        assert_eq!(scores, vec![5.0, 4.0, 3.0]);
    }

    #[test]
    fn ties_break_on_smaller_key() {
        let a = Cand {
            score: 1.0,
            key: [0.1, 0.5],
            witness: 'a',
        };
        let b = Cand {
            score: 1.0,
            key: [0.1, 0.2],
            witness: 'b',
        };
        assert!(b.beats(&a));
        assert!(!a.beats(&b));
    }

    #[test]
    fn search_result_is_monotone_in_grid_doubling() {
        // A bumpy 1-D objective sampled on nested grids.
        let f = |x: f64| (7.0 * x).sin() + 0.3 * (31.0 * x).cos();
        let run = |n: usize| {
            search(
                n,
                n,
                |i, lv: &Levels, acc: &mut LevelBest<f64>| {
                    let x = i as f64 / n as f64;
                    acc.offer(
                        lv.of(i),
                        Cand {
                            score: f(x),
                            key: [x, 0.0],
                            witness: x,
                        },
                    );
                },
                |c, m| {
                    let x = c.witness + 0.25 / m as f64;
                    Some(Cand {
                        score: f(x),
                        key: [x, 0.0],
                        witness: x,
                    })
                },
            )
            .unwrap()
            .best
            .score
        };
        let mut prev = run(64);
        for n in [128, 256, 512, 1024] {
            let cur = run(n);
            assert!(cur >= prev);
            prev = cur;
        }
    }
}
