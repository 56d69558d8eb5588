//! Exact computation of the dispersion of a point set: the supremum volume
//! over empty axis-parallel boxes.
//!
//! The supremum over all of `[x, y)` reduces to a maximum over open boxes
//! whose endpoints lie on the candidate grid (the point coordinates plus 0
//! and 1 on each axis): any empty half-open box expands axis by axis to a
//! grid-delimited open-empty box of no smaller volume, and every open-empty
//! grid box of volume `v` yields empty half-open boxes of volume arbitrarily
//! close to `v`. Witnesses are therefore reported in `Open` semantics with
//! the exact supremum volume.
//!
//! Two implementations are provided: [`dispersion_bruteforce`] enumerates
//! every grid box and serves as the oracle, while [`dispersion_exact`] walks
//! the same space with bound pruning and point filtering and returns the
//! identical value and witness.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{volume_of, AxisBox, BoxSemantics, PointSet};

/// Default cap on the number of candidate boxes the brute-force solver will
/// enumerate before refusing.
pub const DEFAULT_BRUTE_BOX_CAP: u128 = 1_000_000_000;

/// Which search produced a [`DispersionResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveMethod {
    Brute,
    Pruned,
}

/// The dispersion value together with a maximizing empty box.
///
/// The witness is an open box containing no point of the input set, and
/// `witness.volume() == value` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionResult {
    pub value: f64,
    pub witness: AxisBox,
    pub method: SolveMethod,
}

/// Per-axis sorted, deduplicated candidate coordinates:
/// `{0} ∪ {p(i) : p ∈ T} ∪ {1}`.
pub fn candidate_grid(t: &PointSet) -> Vec<Vec<f64>> {
    let d = t.dim();
    let mut grid = Vec::with_capacity(d);
    for axis in 0..d {
        let mut values: Vec<f64> = Vec::with_capacity(t.len() + 2);
        values.push(0.0);
        values.push(1.0);
        values.extend(t.iter().map(|p| p.coord(axis)));
        values.sort_by(f64::total_cmp);
        values.dedup();
        grid.push(values);
    }
    grid
}

/// True iff no point of `t` lies in `b` under the box's semantics.
pub fn is_empty(b: &AxisBox, t: &PointSet) -> Result<bool> {
    if b.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            found: b.dim(),
        });
    }
    Ok(!t.iter().any(|p| b.contains_coords(p.coords())))
}

/// Candidate ordering: larger volume first, then lexicographically smallest
/// `lo`, then lexicographically smallest `hi`. Ties are compared on exact
/// `f64` values; coordinates never contain NaN.
fn better_candidate(vol: f64, lo: &[f64], hi: &[f64], best: &(f64, Vec<f64>, Vec<f64>)) -> bool {
    if vol != best.0 {
        return vol > best.0;
    }
    match lex_cmp(lo, &best.1) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => lex_cmp(hi, &best.2) == std::cmp::Ordering::Less,
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

/// Number of candidate boxes the brute-force enumeration would visit.
fn brute_box_count(grid: &[Vec<f64>]) -> u128 {
    grid.iter()
        .map(|g| {
            let m = g.len() as u128;
            m * (m - 1) / 2
        })
        .product()
}

/// Exhaustive enumeration of all grid boxes, with the default capacity cap.
pub fn dispersion_bruteforce(t: &PointSet) -> Result<DispersionResult> {
    dispersion_bruteforce_capped(t, Some(DEFAULT_BRUTE_BOX_CAP))
}

/// Exhaustive enumeration with an explicit capacity cap (`None` disables
/// the guard entirely).
pub fn dispersion_bruteforce_capped(t: &PointSet, cap: Option<u128>) -> Result<DispersionResult> {
    let grid = candidate_grid(t);
    let d = t.dim();
    let boxes = brute_box_count(&grid);
    if let Some(cap) = cap {
        if boxes > cap {
            return Err(Error::CapacityExceeded { boxes, cap });
        }
    }

    // Per-axis list of (lo, hi) index pairs into the grid.
    let pairs: Vec<Vec<(usize, usize)>> = grid
        .iter()
        .map(|g| {
            let mut v = Vec::new();
            for i in 0..g.len() {
                for j in (i + 1)..g.len() {
                    v.push((i, j));
                }
            }
            v
        })
        .collect();

    let mut best: (f64, Vec<f64>, Vec<f64>) = (-1.0, vec![], vec![]);
    let mut choice = vec![0usize; d];
    let mut lo = vec![0.0; d];
    let mut hi = vec![0.0; d];

    'outer: loop {
        for axis in 0..d {
            let (i, j) = pairs[axis][choice[axis]];
            lo[axis] = grid[axis][i];
            hi[axis] = grid[axis][j];
        }
        let empty = !t.iter().any(|p| {
            let c = p.coords();
            (0..d).all(|i| lo[i] < c[i] && c[i] < hi[i])
        });
        if empty {
            let vol = volume_of(&lo, &hi);
            if better_candidate(vol, &lo, &hi, &best) {
                best = (vol, lo.clone(), hi.clone());
            }
        }
        // Odometer increment over the per-axis pair choices.
        let mut axis = d;
        loop {
            if axis == 0 {
                break 'outer;
            }
            axis -= 1;
            choice[axis] += 1;
            if choice[axis] < pairs[axis].len() {
                break;
            }
            choice[axis] = 0;
        }
    }

    let witness = AxisBox::new(best.1, best.2, BoxSemantics::Open)?;
    Ok(DispersionResult {
        value: best.0,
        witness,
        method: SolveMethod::Brute,
    })
}

/// Pruned depth-first search over the same candidate space as
/// [`dispersion_bruteforce`]; returns the identical value and witness.
///
/// Axes are processed most-constrained first (descending number of distinct
/// point coordinates). Two prunings apply: a branch is cut when the partial
/// volume cannot beat the incumbent, and the set of points still strictly
/// inside the partial box shrinks with depth so emptiness checks get
/// cheaper. On the final axis the maximal empty intervals are exactly the
/// gaps between consecutive surviving coordinates, which are scanned
/// directly.
pub fn dispersion_exact(t: &PointSet) -> DispersionResult {
    let d = t.dim();
    let grid = candidate_grid(t);

    // Most-constrained axis first; ties by ascending axis index.
    let distinct: Vec<usize> = (0..d)
        .map(|axis| {
            let mut coords: Vec<f64> = t.iter().map(|p| p.coord(axis)).collect();
            coords.sort_by(f64::total_cmp);
            coords.dedup();
            coords.len()
        })
        .collect();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| distinct[b].cmp(&distinct[a]).then(a.cmp(&b)));

    // Point coordinates stored axis-major for the filtering loops.
    let n = t.len();
    let mut coords_by_axis = vec![vec![0.0f64; n]; d];
    for (pi, p) in t.iter().enumerate() {
        for (axis, column) in coords_by_axis.iter_mut().enumerate() {
            column[pi] = p.coord(axis);
        }
    }

    // Per-axis pairs sorted by descending extent so large boxes are found
    // early and the bound pruning bites.
    let pairs: Vec<Vec<(f64, f64)>> = (0..d)
        .map(|axis| {
            let g = &grid[axis];
            let mut v: Vec<(f64, f64)> = Vec::new();
            for i in 0..g.len() {
                for j in (i + 1)..g.len() {
                    v.push((g[i], g[j]));
                }
            }
            v.sort_by(|a, b| {
                (b.1 - b.0)
                    .total_cmp(&(a.1 - a.0))
                    .then(a.0.total_cmp(&b.0))
                    .then(a.1.total_cmp(&b.1))
            });
            v
        })
        .collect();

    let mut search = PrunedSearch {
        d,
        order: &order,
        pairs: &pairs,
        coords_by_axis: &coords_by_axis,
        lo: vec![0.0; d],
        hi: vec![1.0; d],
        alive_stack: vec![Vec::new(); d + 1],
        best: (-1.0, vec![], vec![]),
    };
    search.alive_stack[0] = (0..n as u32).collect();
    search.descend(0, 1.0);

    let best = std::mem::take(&mut search.best);
    let witness = AxisBox::new(best.1, best.2, BoxSemantics::Open)
        .expect("search produced a well-formed witness");
    DispersionResult {
        value: best.0,
        witness,
        method: SolveMethod::Pruned,
    }
}

struct PrunedSearch<'a> {
    d: usize,
    order: &'a [usize],
    pairs: &'a [Vec<(f64, f64)>],
    coords_by_axis: &'a [Vec<f64>],
    lo: Vec<f64>,
    hi: Vec<f64>,
    alive_stack: Vec<Vec<u32>>,
    best: (f64, Vec<f64>, Vec<f64>),
}

/// Slack applied to the pruning bound so that rounding of partial products
/// taken in a different axis order can never cut a true maximizer.
const PRUNE_SLACK: f64 = 1.0 + 1e-12;

impl PrunedSearch<'_> {
    /// Offers the box currently held in `lo`/`hi` as a candidate.
    fn offer(&mut self) {
        let vol = volume_of(&self.lo, &self.hi);
        if better_candidate(vol, &self.lo, &self.hi, &self.best) {
            self.best = (vol, self.lo.clone(), self.hi.clone());
        }
    }

    fn descend(&mut self, depth: usize, partial: f64) {
        let axis = self.order[depth];

        if depth == self.d - 1 {
            // Final axis: scan the gaps between consecutive surviving
            // coordinates (with 0 and 1 as sentinels).
            let mut cuts: Vec<f64> = vec![0.0, 1.0];
            for &pi in &self.alive_stack[depth] {
                cuts.push(self.coords_by_axis[axis][pi as usize]);
            }
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            for w in cuts.windows(2) {
                if w[0] < w[1] {
                    self.lo[axis] = w[0];
                    self.hi[axis] = w[1];
                    self.offer();
                }
            }
            self.lo[axis] = 0.0;
            self.hi[axis] = 1.0;
            return;
        }

        let alive = std::mem::take(&mut self.alive_stack[depth]);
        let mut next_alive = std::mem::take(&mut self.alive_stack[depth + 1]);

        for pi in 0..self.pairs[axis].len() {
            let (lo, hi) = self.pairs[axis][pi];
            let extent = hi - lo;
            let bound = partial * extent;
            // Pairs are sorted by descending extent: once the bound cannot
            // reach the incumbent, no later pair on this axis can either.
            if bound * PRUNE_SLACK < self.best.0 {
                break;
            }
            next_alive.clear();
            for &p in &alive {
                let c = self.coords_by_axis[axis][p as usize];
                if lo < c && c < hi {
                    next_alive.push(p);
                }
            }
            self.lo[axis] = lo;
            self.hi[axis] = hi;
            if next_alive.is_empty() {
                // Every completion is admissible; the unique best one takes
                // the full (0, 1) extent on all remaining axes.
                for &rest in &self.order[depth + 1..] {
                    self.lo[rest] = 0.0;
                    self.hi[rest] = 1.0;
                }
                self.offer();
            } else {
                self.alive_stack[depth + 1] = std::mem::take(&mut next_alive);
                self.descend(depth + 1, bound);
                next_alive = std::mem::take(&mut self.alive_stack[depth + 1]);
            }
        }
        self.lo[axis] = 0.0;
        self.hi[axis] = 1.0;
        self.alive_stack[depth] = alive;
        self.alive_stack[depth + 1] = next_alive;
    }
}
