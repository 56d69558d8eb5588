//! Constructive empty-box certificates.
//!
//! [`guaranteed_box`] produces, for any point set in `[0,1]^d` with `d >= 2`,
//! an open empty box whose volume is at least
//! `(l+1) / (4 (n + l + 1))` with `l = floor(log2 d)`, which in turn is at
//! least `log2(d) / (4 (n + log2 d))`. The construction is fully
//! deterministic and the returned certificate records every step of the
//! derivation: the slab that was selected, the half-space bit patterns of
//! its points, and which pigeonhole branch produced the box.
//!
//! The pieces are usable on their own: [`select_sparse_slab`] finds a slab
//! of the cube containing few points, and [`pigeonhole_box`] turns at most
//! `l` points in high dimension (`d >= 2^l - 1`) into an empty box of
//! volume at least 1/4.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{AxisBox, BoxSemantics, PointSet};
use crate::solver::is_empty;

/// Indicator of the upper half of `[0, 1]`: 0 for `x <= 1/2`, 1 for
/// `x > 1/2`. The midpoint maps to 0.
pub fn half_indicator(x: f64) -> Result<u8> {
    if !(0.0..=1.0).contains(&x) || x.is_nan() {
        return Err(Error::CoordinateOutOfRange { axis: 0, value: x });
    }
    Ok(if x <= 0.5 { 0 } else { 1 })
}

/// Row `m` is the vector of [`half_indicator`] bits of point `m`, one bit
/// per axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfPatternMatrix {
    dim: usize,
    rows: Vec<Vec<u8>>,
}

impl HalfPatternMatrix {
    fn empty(dim: usize) -> Self {
        Self { dim, rows: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// The bits of column `axis`, one per point.
    pub fn column(&self, axis: usize) -> Vec<u8> {
        self.rows.iter().map(|r| r[axis]).collect()
    }
}

/// Builds the half-space pattern matrix of a nonempty point set.
pub fn pattern_matrix(t: &PointSet) -> Result<HalfPatternMatrix> {
    if t.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let rows = t
        .iter()
        .map(|p| p.coords().iter().map(|&c| half_indicator(c)).collect())
        .collect::<Result<Vec<Vec<u8>>>>()?;
    Ok(HalfPatternMatrix { dim: t.dim(), rows })
}

/// Which pigeonhole branch produced the certified box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessBranch {
    /// All points lie in the lower half along `axis`; the box takes the
    /// upper half there (volume 1/2).
    AllZeroColumn { axis: usize },
    /// All points lie in the upper half along `axis`; the box takes the
    /// lower half there (volume 1/2).
    AllOneColumn { axis: usize },
    /// Axes `i` and `j` carry identical patterns; the box takes opposite
    /// halves on them (volume 1/4).
    MatchedPair { i: usize, j: usize },
    /// The selected slab contains no points, so the box is the whole slab.
    EmptySlab,
    /// One-dimensional input; the box is the largest gap between
    /// consecutive points.
    GapSearch,
}

/// An empty box plus the derivation that proves its volume guarantee.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessCertificate {
    /// The certified empty box, in `Open` semantics.
    pub empty_box: AxisBox,
    /// The volume the derivation guarantees; `empty_box.volume()` is at
    /// least this.
    pub guaranteed_volume: f64,
    /// `floor(log2 d)` (0 when `d = 1`).
    pub ell: usize,
    /// Index of the selected slab along axis 0, if slab decomposition was
    /// used.
    pub slab_index: Option<usize>,
    /// Number of slabs in the decomposition (`k + 1`; 1 when no
    /// decomposition took place).
    pub slab_count: usize,
    /// The branch that produced the box.
    pub branch: WitnessBranch,
    /// Half-space patterns of the points handed to the pigeonhole step
    /// (empty for the `EmptySlab` and `GapSearch` branches).
    pub patterns: HalfPatternMatrix,
}

/// For at most `l` points in dimension `d >= 2^l - 1`, returns an empty open
/// box of volume 1/2 (a constant pattern column exists) or 1/4 (two axes
/// share their pattern).
///
/// Columns are scanned in ascending order and the half-cube branches are
/// preferred; the pair branch picks the first `(i, j)` with `i < j` in
/// lexicographic order.
pub fn pigeonhole_box(t: &PointSet) -> Result<WitnessCertificate> {
    let ell = t.len();
    if ell == 0 {
        return Err(Error::EmptyPointSet);
    }
    let d = t.dim();
    let required = if ell >= 64 {
        usize::MAX
    } else {
        ((1u128 << ell) - 1).min(usize::MAX as u128) as usize
    };
    if d < required {
        return Err(Error::DimensionTooSmall {
            dim: d,
            min: required,
        });
    }
    let patterns = pattern_matrix(t)?;

    let mut lo = vec![0.0; d];
    let mut hi = vec![1.0; d];

    let mut branch = None;
    for axis in 0..d {
        let col = patterns.column(axis);
        if col.iter().all(|&b| b == 0) {
            lo[axis] = 0.5;
            branch = Some(WitnessBranch::AllZeroColumn { axis });
            break;
        }
        if col.iter().all(|&b| b == 1) {
            hi[axis] = 0.5;
            branch = Some(WitnessBranch::AllOneColumn { axis });
            break;
        }
    }

    let branch = match branch {
        Some(b) => b,
        None => {
            // No constant column; with d >= 2^l - 1 columns and only
            // 2^l - 2 remaining patterns, two columns must coincide.
            let mut found = None;
            'scan: for i in 0..d {
                for j in (i + 1)..d {
                    if patterns.column(i) == patterns.column(j) {
                        found = Some((i, j));
                        break 'scan;
                    }
                }
            }
            let (i, j) = found.ok_or_else(|| {
                Error::InternalInvariant("no matching pattern columns despite pigeonhole".into())
            })?;
            hi[i] = 0.5;
            lo[j] = 0.5;
            WitnessBranch::MatchedPair { i, j }
        }
    };

    let empty_box = AxisBox::new(lo, hi, BoxSemantics::Open)?;
    let guaranteed_volume = empty_box.volume();
    debug_assert!(guaranteed_volume == 0.5 || guaranteed_volume == 0.25);
    Ok(WitnessCertificate {
        empty_box,
        guaranteed_volume,
        ell,
        slab_index: None,
        slab_count: 1,
        branch,
        patterns,
    })
}

/// Slab of `[0, 1)` that coordinate `x` falls into when the interval is
/// split into `count` half-open slabs of equal width. `x = 1` goes to the
/// last slab.
fn slab_of(x: f64, count: usize) -> usize {
    ((x * count as f64) as usize).min(count - 1)
}

/// Splits the cube along axis 0 into `slab_count` equal half-open slabs and
/// returns the smallest index of a slab containing at most `capacity`
/// points.
///
/// Requires `slab_count * (capacity + 1) > n`, which makes such a slab
/// exist by pigeonhole.
pub fn select_sparse_slab(t: &PointSet, slab_count: usize, capacity: usize) -> Result<usize> {
    if slab_count == 0 {
        return Err(Error::InvalidParameter(
            "slab_count must be positive".into(),
        ));
    }
    if slab_count * (capacity + 1) <= t.len() {
        return Err(Error::InvalidParameter(format!(
            "pigeonhole needs slab_count * (capacity + 1) > n, got {} * {} <= {}",
            slab_count,
            capacity + 1,
            t.len()
        )));
    }
    let mut counts = vec![0usize; slab_count];
    for p in t.iter() {
        counts[slab_of(p.coord(0), slab_count)] += 1;
    }
    counts.iter().position(|&c| c <= capacity).ok_or_else(|| {
        Error::InternalInvariant("no slab within capacity despite pigeonhole".into())
    })
}

/// Largest gap between consecutive coordinates of a one-dimensional set,
/// with 0 and 1 as sentinels. Ties take the leftmost gap.
fn largest_gap_1d(t: &PointSet) -> (f64, f64) {
    let mut cuts: Vec<f64> = vec![0.0, 1.0];
    cuts.extend(t.iter().map(|p| p.coord(0)));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut best = (0.0, cuts[0], cuts[1]);
    for w in cuts.windows(2) {
        let len = w[1] - w[0];
        if len > best.0 {
            best = (len, w[0], w[1]);
        }
    }
    (best.1, best.2)
}

/// Produces an empty open box meeting the `log2(d) / (4 (n + log2 d))`
/// volume guarantee, together with the full derivation.
///
/// For `d >= 2` the pipeline is: split the cube along axis 0 into
/// `k + 1 = floor(n / (l+1)) + 1` equal slabs, pick a slab holding at most
/// `l = floor(log2 d)` points, rescale that slab to the unit cube, apply
/// [`pigeonhole_box`] to the rescaled points, and map the box back into the
/// slab. Emptiness of the final box is re-checked in original coordinates
/// and is authoritative. `d = 1` falls back to the largest gap directly.
pub fn guaranteed_box(t: &PointSet) -> Result<WitnessCertificate> {
    let d = t.dim();
    let n = t.len();

    if d == 1 {
        let (lo, hi) = largest_gap_1d(t);
        let empty_box = AxisBox::open(vec![lo], vec![hi])?;
        debug_assert!(is_empty(&empty_box, t)?);
        return Ok(WitnessCertificate {
            empty_box,
            guaranteed_volume: 1.0 / (n as f64 + 1.0),
            ell: 0,
            slab_index: None,
            slab_count: 1,
            branch: WitnessBranch::GapSearch,
            patterns: HalfPatternMatrix::empty(1),
        });
    }

    let ell = d.ilog2() as usize;
    let k = n / (ell + 1);
    let slab_count = k + 1;
    let slab = select_sparse_slab(t, slab_count, ell)?;

    // Rescale the slab's points to the unit cube along axis 0.
    let scale = slab_count as f64;
    let shift = slab as f64;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for p in t.iter() {
        if slab_of(p.coord(0), slab_count) == slab {
            let mut row = p.coords().to_vec();
            row[0] = (row[0] * scale - shift).clamp(0.0, 1.0);
            rows.push(row);
        }
    }
    debug_assert!(rows.len() <= ell);

    // Pigeonhole on the rescaled points; an empty slab certifies the whole
    // slab directly.
    let (inner_box, pigeonhole_volume, branch, patterns) = if rows.is_empty() {
        (
            AxisBox::unit(d, BoxSemantics::Open),
            1.0,
            WitnessBranch::EmptySlab,
            HalfPatternMatrix::empty(d),
        )
    } else {
        let inner = PointSet::from_rows(d, &rows)?;
        let cert = pigeonhole_box(&inner)?;
        (
            cert.empty_box,
            cert.guaranteed_volume,
            cert.branch,
            cert.patterns,
        )
    };

    // Map the box back into the slab along axis 0. The endpoints are the
    // exact thresholds of the forward rescaling x -> x * scale - shift, so
    // that exclusion in original coordinates provably agrees with the
    // rescaled pattern argument: every point whose rescaled value falls
    // outside the open inner interval lands outside the mapped interval,
    // even when rounding shifted its slab assignment or its half-space bit.
    let mut lo = inner_box.lo().to_vec();
    let mut hi = inner_box.hi().to_vec();
    lo[0] = greatest_at_or_below(lo[0], scale, shift);
    hi[0] = least_at_or_above(hi[0], scale, shift);

    let guaranteed_volume = pigeonhole_volume / scale;

    // Rounding can leave the mapped box a few ulps short of the guaranteed
    // volume when the bound is exactly attained. Widening along axis 0
    // restores the inequality; widening can only re-admit points sitting
    // within ulps of the boundary, so emptiness is re-checked afterwards
    // and the widening falls back to the other side if the first breaks it.
    let widened = widen_to_volume(&lo, &hi, guaranteed_volume, t, true)
        .or_else(|_| widen_to_volume(&lo, &hi, guaranteed_volume, t, false))?;
    let (lo, hi) = widened;

    let empty_box = AxisBox::new(lo, hi, BoxSemantics::Open)?;
    if !is_empty(&empty_box, t)? {
        return Err(Error::InternalInvariant(
            "constructed witness box contains a point".into(),
        ));
    }

    Ok(WitnessCertificate {
        empty_box,
        guaranteed_volume,
        ell,
        slab_index: Some(slab),
        slab_count,
        branch,
        patterns,
    })
}

/// The forward rescaling applied to slab points, in the exact operation
/// order used above. Monotone nondecreasing in `x`.
fn forward(x: f64, scale: f64, shift: f64) -> f64 {
    x * scale - shift
}

/// Largest `x` in `[0, 1]` with `forward(x) <= bound`, by bisection on the
/// bit representation (non-negative floats order like their bits).
fn greatest_at_or_below(bound: f64, scale: f64, shift: f64) -> f64 {
    debug_assert!(forward(0.0, scale, shift) <= bound);
    if forward(1.0, scale, shift) <= bound {
        return 1.0;
    }
    let mut lo_bits = 0u64;
    let mut hi_bits = 1.0f64.to_bits();
    while hi_bits - lo_bits > 1 {
        let mid = lo_bits + (hi_bits - lo_bits) / 2;
        if forward(f64::from_bits(mid), scale, shift) <= bound {
            lo_bits = mid;
        } else {
            hi_bits = mid;
        }
    }
    f64::from_bits(lo_bits)
}

/// Smallest `x` in `[0, 1]` with `forward(x) >= bound`.
fn least_at_or_above(bound: f64, scale: f64, shift: f64) -> f64 {
    debug_assert!(forward(1.0, scale, shift) >= bound);
    if forward(0.0, scale, shift) >= bound {
        return 0.0;
    }
    let mut lo_bits = 0u64;
    let mut hi_bits = 1.0f64.to_bits();
    while hi_bits - lo_bits > 1 {
        let mid = lo_bits + (hi_bits - lo_bits) / 2;
        if forward(f64::from_bits(mid), scale, shift) < bound {
            lo_bits = mid;
        } else {
            hi_bits = mid;
        }
    }
    f64::from_bits(hi_bits)
}

/// Widens the box along axis 0, one ulp at a time on the preferred side,
/// until its volume reaches `target`; fails if the widened box stops being
/// empty.
fn widen_to_volume(
    lo0: &[f64],
    hi0: &[f64],
    target: f64,
    t: &PointSet,
    prefer_hi: bool,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut lo = lo0.to_vec();
    let mut hi = hi0.to_vec();
    let mut bumps = 0;
    while crate::geometry::volume_of(&lo, &hi) < target {
        // Try the preferred side first; order matters, the calls mutate.
        let bumped = match prefer_hi {
            true => bump_hi(&mut hi) || bump_lo(&mut lo),
            false => bump_lo(&mut lo) || bump_hi(&mut hi),
        };
        if !bumped {
            return Err(Error::InternalInvariant(
                "cannot widen witness box to its guaranteed volume".into(),
            ));
        }
        bumps += 1;
        if bumps > 1000 {
            return Err(Error::InternalInvariant(
                "witness box volume still short after widening".into(),
            ));
        }
    }
    let probe = AxisBox::new(lo.clone(), hi.clone(), BoxSemantics::Open)?;
    if !is_empty(&probe, t)? {
        return Err(Error::InternalInvariant(
            "widened witness box contains a point".into(),
        ));
    }
    Ok((lo, hi))
}

fn bump_hi(hi: &mut [f64]) -> bool {
    let up = next_up(hi[0]);
    if up <= 1.0 {
        hi[0] = up;
        true
    } else {
        false
    }
}

fn bump_lo(lo: &mut [f64]) -> bool {
    let down = next_down(lo[0]);
    if down >= 0.0 {
        lo[0] = down;
        true
    } else {
        false
    }
}

fn next_up(x: f64) -> f64 {
    if x == 0.0 {
        f64::from_bits(1)
    } else if x > 0.0 {
        f64::from_bits(x.to_bits() + 1)
    } else {
        f64::from_bits(x.to_bits() - 1)
    }
}

fn next_down(x: f64) -> f64 {
    if x == 0.0 {
        -f64::from_bits(1)
    } else if x > 0.0 {
        f64::from_bits(x.to_bits() - 1)
    } else {
        f64::from_bits(x.to_bits() + 1)
    }
}

/// The lower bound `(l+1) / (4 (n + l + 1))` certified by
/// [`guaranteed_box`] for `l = floor(log2 d)`.
pub fn certified_floor(n: usize, d: usize) -> f64 {
    debug_assert!(d >= 2);
    let ell = d.ilog2() as f64;
    (ell + 1.0) / (4.0 * (n as f64 + ell + 1.0))
}
