//! Core geometric types: points in the unit cube, axis-parallel boxes, and
//! dyadic intervals/boxes, together with volume, containment, and
//! dyadic-rounding operations.
//!
//! Boxes carry explicit boundary semantics. `HalfOpen` is the lattice of
//! boxes `[lo, hi)`; `Open` is the open box `prod (lo_i, hi_i)` and is the
//! representation used for supremum-valued results: an empty open box of
//! volume `v` certifies that half-open boxes of volume arbitrarily close to
//! `v` are empty.
//!
//! All coordinates are `f64` and all comparisons are exact. Candidate box
//! boundaries in this crate are always point coordinates or 0/1, so equality
//! is meaningful and no epsilon tolerance is used anywhere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deepest dyadic refinement considered per axis. Beyond this the interval
/// length drops below the granularity of `f64` in [0, 1].
pub const MAX_DYADIC_DEPTH: u32 = 60;

/// Boundary semantics of an [`AxisBox`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoxSemantics {
    /// `[lo, hi)` on every axis.
    HalfOpen,
    /// `(lo, hi)` on every axis.
    Open,
}

/// A point in `[0, 1]^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    /// Validates that every coordinate lies in `[0, 1]` and `d >= 1`.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionTooSmall { dim: 0, min: 1 });
        }
        for (axis, &c) in coords.iter().enumerate() {
            if !(0.0..=1.0).contains(&c) || c.is_nan() {
                return Err(Error::CoordinateOutOfRange { axis, value: c });
            }
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coord(&self, axis: usize) -> f64 {
        self.coords[axis]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// A finite multiset of points sharing one dimension. The empty set is
/// allowed (its dispersion is 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionTooSmall { dim: 0, min: 1 });
        }
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        Ok(Self { dim, points })
    }

    /// Builds a point set from raw coordinate rows.
    pub fn from_rows(dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let points = rows
            .iter()
            .map(|r| Point::new(r.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }
}

/// An axis-parallel box in `[0, 1]^d` with explicit boundary semantics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
    semantics: BoxSemantics,
}

impl AxisBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, semantics: BoxSemantics) -> Result<Self> {
        if lo.is_empty() {
            return Err(Error::DimensionTooSmall { dim: 0, min: 1 });
        }
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        for axis in 0..lo.len() {
            let (l, h) = (lo[axis], hi[axis]);
            if !(0.0..=1.0).contains(&l)
                || !(0.0..=1.0).contains(&h)
                || l > h
                || l.is_nan()
                || h.is_nan()
            {
                return Err(Error::InvalidBox { axis, lo: l, hi: h });
            }
        }
        Ok(Self { lo, hi, semantics })
    }

    pub fn half_open(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        Self::new(lo, hi, BoxSemantics::HalfOpen)
    }

    pub fn open(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        Self::new(lo, hi, BoxSemantics::Open)
    }

    /// The whole unit cube `[0,1)^d` or `(0,1)^d`.
    pub fn unit(dim: usize, semantics: BoxSemantics) -> Self {
        Self {
            lo: vec![0.0; dim],
            hi: vec![1.0; dim],
            semantics,
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn semantics(&self) -> BoxSemantics {
        self.semantics
    }

    /// Same bounds under different semantics.
    pub fn with_semantics(&self, semantics: BoxSemantics) -> Self {
        Self {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            semantics,
        }
    }

    /// Product of the side lengths. The semantics flag does not change the
    /// value; degenerate boxes have volume 0.
    pub fn volume(&self) -> f64 {
        volume_of(&self.lo, &self.hi)
    }

    /// Membership test under the box's semantics.
    ///
    /// `HalfOpen` includes the lower face, `Open` excludes both faces.
    pub fn contains(&self, p: &Point) -> Result<bool> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: p.dim(),
            });
        }
        Ok(self.contains_coords(p.coords()))
    }

    /// Containment for a raw coordinate slice of matching length.
    pub(crate) fn contains_coords(&self, c: &[f64]) -> bool {
        match self.semantics {
            BoxSemantics::HalfOpen => {
                (0..self.dim()).all(|i| self.lo[i] <= c[i] && c[i] < self.hi[i])
            }
            BoxSemantics::Open => (0..self.dim()).all(|i| self.lo[i] < c[i] && c[i] < self.hi[i]),
        }
    }
}

/// Volume of the box spanned by `lo` and `hi`, multiplying side lengths in
/// ascending axis order. Every volume reported by this crate goes through
/// this one function so results are reproducible bit for bit.
pub(crate) fn volume_of(lo: &[f64], hi: &[f64]) -> f64 {
    let mut v = 1.0;
    for i in 0..lo.len() {
        v *= hi[i] - lo[i];
    }
    v
}

/// The dyadic interval `[a 2^-k, (a+1) 2^-k)`, encoded as the pair `(a, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicInterval {
    a: u64,
    k: u32,
}

impl DyadicInterval {
    pub fn new(a: u64, k: u32) -> Result<Self> {
        if k > MAX_DYADIC_DEPTH || (k < 64 && a >= 1u64 << k) {
            return Err(Error::InvalidDyadicIndex { a, k });
        }
        Ok(Self { a, k })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Left endpoint `a 2^-k`, exact in `f64` for `k <= 60`.
    pub fn lo(&self) -> f64 {
        self.a as f64 * (-(self.k as f64)).exp2()
    }

    /// Right endpoint `(a+1) 2^-k`.
    pub fn hi(&self) -> f64 {
        (self.a + 1) as f64 * (-(self.k as f64)).exp2()
    }

    /// Exactly `2^-k`.
    pub fn len(&self) -> f64 {
        (-(self.k as f64)).exp2()
    }

    /// Half-open membership `lo <= x < hi`.
    pub fn contains(&self, x: f64) -> bool {
        self.lo() <= x && x < self.hi()
    }
}

/// A Cartesian product of dyadic intervals; its volume is an exact power
/// of 1/2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicBox {
    intervals: Vec<DyadicInterval>,
}

impl DyadicBox {
    pub fn new(intervals: Vec<DyadicInterval>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::DimensionTooSmall { dim: 0, min: 1 });
        }
        Ok(Self { intervals })
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[DyadicInterval] {
        &self.intervals
    }

    /// `2^-(k_1 + ... + k_d)`, exactly.
    pub fn volume(&self) -> f64 {
        let total: u64 = self.intervals.iter().map(|iv| iv.k as u64).sum();
        (-(total as f64)).exp2()
    }

    /// The same region as a half-open [`AxisBox`].
    pub fn to_axis_box(&self) -> AxisBox {
        let lo = self.intervals.iter().map(|iv| iv.lo()).collect();
        let hi = self.intervals.iter().map(|iv| iv.hi()).collect();
        AxisBox {
            lo,
            hi,
            semantics: BoxSemantics::HalfOpen,
        }
    }

    /// Half-open membership on every axis.
    pub fn contains_coords(&self, c: &[f64]) -> bool {
        self.intervals.iter().zip(c).all(|(iv, &x)| iv.contains(x))
    }
}

/// A maximal-length dyadic interval contained in `[x, y)`.
///
/// The result always has length at least `(y - x) / 4`. Among the
/// maximal-length candidates the one with the smallest `a` is returned, and
/// the refinement depth is capped at [`MAX_DYADIC_DEPTH`].
pub fn largest_dyadic_subinterval(x: f64, y: f64) -> Result<DyadicInterval> {
    if !(0.0 <= x && x < y && y <= 1.0) || x.is_nan() || y.is_nan() {
        return Err(Error::InvalidInterval { x, y });
    }
    for k in 0..=MAX_DYADIC_DEPTH {
        // Scaling by 2^k is exact, so ceil/floor below are exact as well.
        let scale = (k as f64).exp2();
        let xs = x * scale;
        let ys = y * scale;
        let a = xs.ceil() as u64;
        let ys_floor = ys.floor() as u64;
        // [a 2^-k, (a+1) 2^-k) fits inside [x, y) iff a >= xs and a + 1 <= ys.
        if ys_floor > a {
            return DyadicInterval::new(a, k);
        }
    }
    Err(Error::InvalidInterval { x, y })
}

/// Applies [`largest_dyadic_subinterval`] on every axis of a nondegenerate
/// box. The resulting dyadic box has volume at least `4^-d` times the
/// volume of the input.
pub fn largest_dyadic_subbox(b: &AxisBox) -> Result<DyadicBox> {
    let mut intervals = Vec::with_capacity(b.dim());
    for axis in 0..b.dim() {
        if b.lo()[axis] >= b.hi()[axis] {
            return Err(Error::DegenerateAxis { axis });
        }
        intervals.push(largest_dyadic_subinterval(b.lo()[axis], b.hi()[axis])?);
    }
    DyadicBox::new(intervals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn volume_of_unit_cube_is_one() {
        for d in 1..=6 {
            let b = AxisBox::unit(d, BoxSemantics::HalfOpen);
            assert_eq!(b.volume(), 1.0);
        }
    }

    #[test]
    fn volume_of_open_quarter_box() {
        let b = AxisBox::open(vec![0.0, 0.5], vec![0.5, 1.0]).unwrap();
        assert_eq!(b.volume(), 0.25);
    }

    #[test]
    fn volume_of_degenerate_box_is_zero() {
        let b = AxisBox::half_open(vec![0.3, 0.0], vec![0.3, 1.0]).unwrap();
        assert_eq!(b.volume(), 0.0);
    }

    #[test]
    fn volume_ignores_semantics() {
        let lo = vec![0.1, 0.2, 0.3];
        let hi = vec![0.9, 0.8, 0.7];
        let a = AxisBox::half_open(lo.clone(), hi.clone()).unwrap();
        let b = AxisBox::open(lo, hi).unwrap();
        assert_eq!(a.volume(), b.volume());
    }

    #[test]
    fn containment_boundary_cases() {
        let cube = AxisBox::unit(2, BoxSemantics::HalfOpen);
        let origin = Point::new(vec![0.0, 0.0]).unwrap();
        assert!(cube.contains(&origin).unwrap());

        let b = AxisBox::half_open(vec![0.0], vec![0.5]).unwrap();
        let p = Point::new(vec![0.5]).unwrap();
        assert!(!b.contains(&p).unwrap());

        let b = AxisBox::open(vec![0.25], vec![0.75]).unwrap();
        let p = Point::new(vec![0.25]).unwrap();
        assert!(!b.contains(&p).unwrap());
    }

    #[test]
    fn open_containment_implies_half_open_containment() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let lo: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..0.5)).collect();
            let hi: Vec<f64> = lo.iter().map(|l| rng.random_range(*l..1.0)).collect();
            let open = AxisBox::open(lo.clone(), hi.clone()).unwrap();
            let half = AxisBox::half_open(lo, hi).unwrap();
            let p = Point::new((0..3).map(|_| rng.random_range(0.0..1.0)).collect()).unwrap();
            if open.contains(&p).unwrap() {
                assert!(half.contains(&p).unwrap());
            }
        }
    }

    #[test]
    fn contains_rejects_dimension_mismatch() {
        let b = AxisBox::unit(2, BoxSemantics::Open);
        let p = Point::new(vec![0.5]).unwrap();
        assert!(matches!(
            b.contains(&p),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn point_rejects_out_of_range_coordinates() {
        assert!(matches!(
            Point::new(vec![0.5, 1.5]),
            Err(Error::CoordinateOutOfRange { axis: 1, .. })
        ));
        assert!(matches!(
            Point::new(vec![-0.1]),
            Err(Error::CoordinateOutOfRange { axis: 0, .. })
        ));
    }

    #[test]
    fn dyadic_subinterval_whole_interval() {
        let iv = largest_dyadic_subinterval(0.0, 1.0).unwrap();
        assert_eq!((iv.a(), iv.k()), (0, 0));
        assert_eq!(iv.len(), 1.0);
    }

    #[test]
    fn dyadic_subinterval_half() {
        let iv = largest_dyadic_subinterval(0.5, 1.0).unwrap();
        assert_eq!((iv.a(), iv.k()), (1, 1));
        assert_eq!(iv.len(), 0.5);
    }

    /// Exhaustive reference search over all dyadic intervals up to a depth.
    fn dyadic_oracle(x: f64, y: f64, max_k: u32) -> (u64, u32) {
        let mut best: Option<(u64, u32)> = None;
        for k in 0..=max_k {
            let scale = (k as f64).exp2();
            for a in 0..(1u64 << k) {
                let lo = a as f64 / scale;
                let hi = (a + 1) as f64 / scale;
                if lo >= x && hi <= y {
                    // First hit at the shallowest depth wins; within a depth,
                    // smaller a comes first.
                    if best.is_none() {
                        best = Some((a, k));
                    }
                }
            }
            if best.is_some() {
                break;
            }
        }
        best.expect("oracle found no dyadic subinterval")
    }

    #[test]
    fn dyadic_subinterval_matches_exhaustive_oracle() {
        let iv = largest_dyadic_subinterval(0.3, 0.6).unwrap();
        assert_eq!((iv.a(), iv.k()), (3, 3));
        assert_eq!(iv.lo(), 0.375);
        assert_eq!(iv.hi(), 0.5);
        assert_eq!(dyadic_oracle(0.3, 0.6, 20), (3, 3));

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let x: f64 = rng.random_range(0.0..0.9);
            let y: f64 = rng.random_range((x + 0.01)..1.0);
            let iv = largest_dyadic_subinterval(x, y).unwrap();
            assert_eq!((iv.a(), iv.k()), dyadic_oracle(x, y, 12));
        }
    }

    #[test]
    fn dyadic_subinterval_rejects_empty_interval() {
        assert!(largest_dyadic_subinterval(0.5, 0.5).is_err());
        assert!(largest_dyadic_subinterval(0.7, 0.2).is_err());
    }

    #[test]
    fn dyadic_subinterval_quarter_guarantee_fuzz() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100_000 {
            let a: f64 = rng.random_range(0.0..1.0);
            let b: f64 = rng.random_range(0.0..1.0);
            let (x, y) = if a < b { (a, b) } else { (b, a) };
            if x == y {
                continue;
            }
            let iv = largest_dyadic_subinterval(x, y).unwrap();
            assert!(iv.lo() >= x && iv.hi() <= y, "not contained: [{x}, {y})");
            assert!(
                iv.len() >= (y - x) / 4.0,
                "length {} below quarter of {} for [{x}, {y})",
                iv.len(),
                y - x
            );
        }
    }

    #[test]
    fn dyadic_subbox_whole_cube() {
        let b = AxisBox::unit(3, BoxSemantics::HalfOpen);
        let db = largest_dyadic_subbox(&b).unwrap();
        assert_eq!(db.volume(), 1.0);
    }

    #[test]
    fn dyadic_subbox_per_axis_example() {
        let b = AxisBox::half_open(vec![0.3, 0.0], vec![0.6, 1.0]).unwrap();
        let db = largest_dyadic_subbox(&b).unwrap();
        assert_eq!(db.intervals()[0].lo(), 0.375);
        assert_eq!(db.intervals()[0].hi(), 0.5);
        assert_eq!((db.intervals()[1].a(), db.intervals()[1].k()), (0, 0));
        assert_eq!(db.volume(), 0.125);
    }

    #[test]
    fn dyadic_subbox_rejects_degenerate_axis() {
        let b = AxisBox::half_open(vec![0.2, 0.4], vec![0.8, 0.4]).unwrap();
        assert!(matches!(
            largest_dyadic_subbox(&b),
            Err(Error::DegenerateAxis { axis: 1 })
        ));
    }

    #[test]
    fn dyadic_subbox_volume_factor_fuzz() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..5000 {
            let d = rng.random_range(1..=8);
            let mut lo = Vec::with_capacity(d);
            let mut hi = Vec::with_capacity(d);
            for _ in 0..d {
                let a: f64 = rng.random_range(0.0..0.99);
                let b: f64 = rng.random_range((a + 1e-6)..1.0);
                lo.push(a);
                hi.push(b);
            }
            let b = AxisBox::half_open(lo, hi).unwrap();
            let db = largest_dyadic_subbox(&b).unwrap();
            let factor = 4.0f64.powi(-(d as i32));
            assert!(
                db.volume() >= factor * b.volume(),
                "dyadic box volume {} below 4^-{d} * {}",
                db.volume(),
                b.volume()
            );
            let axis_box = db.to_axis_box();
            for i in 0..d {
                assert!(axis_box.lo()[i] >= b.lo()[i]);
                assert!(axis_box.hi()[i] <= b.hi()[i]);
            }
        }
    }

    #[test]
    fn dyadic_interval_validation() {
        assert!(DyadicInterval::new(4, 2).is_err());
        assert!(DyadicInterval::new(3, 2).is_ok());
        assert!(DyadicInterval::new(0, 61).is_err());
    }
}
