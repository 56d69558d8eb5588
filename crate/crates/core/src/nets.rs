//! Structured low-dispersion point sets in base 2 and exhaustive
//! verification of the net property.
//!
//! A `(t, m, d)`-net in base 2 is a set of `2^m` points such that every
//! dyadic box of volume `2^(t-m)` contains exactly `2^t` of them.
//! [`verify_net_parameter`] measures the smallest `t` for which a given set
//! satisfies this, and [`net_dispersion_bound`] turns the parameter into a
//! dispersion bound of `2^(t - m + 2d)`.
//!
//! Generators: [`van_der_corput`] (the base-2 radical inverse),
//! [`hammersley`], and arbitrary [`digital_net`]s given binary generating
//! matrices, which can also be loaded from a simple text format.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{DyadicBox, DyadicInterval, Point, PointSet};

/// Largest supported `m` for [`van_der_corput`].
pub const MAX_VDC_M: u32 = 20;
/// Largest supported `m` for [`hammersley`].
pub const MAX_HAMMERSLEY_M: u32 = 16;

/// The base-2 radical inverse of the low `m` bits of `i`.
fn radical_inverse(i: u64, m: u32) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let rev = i.reverse_bits() >> (64 - m);
    rev as f64 * (-(m as f64)).exp2()
}

/// The van der Corput set: `2^m` points in one dimension, point `i` being
/// the bit reversal of `i` about the radix point.
pub fn van_der_corput(m: u32) -> Result<PointSet> {
    if m > MAX_VDC_M {
        return Err(Error::InvalidParameter(format!(
            "van der Corput m = {m} out of range 0..={MAX_VDC_M}"
        )));
    }
    let n = 1u64 << m;
    let points = (0..n)
        .map(|i| Point::new(vec![radical_inverse(i, m)]))
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(1, points)
}

/// The Hammersley set: `2^m` points in two dimensions, point `i` being
/// `(i / 2^m, radical inverse of i)`.
pub fn hammersley(m: u32) -> Result<PointSet> {
    if m > MAX_HAMMERSLEY_M {
        return Err(Error::InvalidParameter(format!(
            "Hammersley m = {m} out of range 0..={MAX_HAMMERSLEY_M}"
        )));
    }
    let n = 1u64 << m;
    let scale = (-(m as f64)).exp2();
    let points = (0..n)
        .map(|i| Point::new(vec![i as f64 * scale, radical_inverse(i, m)]))
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(2, points)
}

/// `d` binary `m x m` matrices generating a digital net over GF(2).
///
/// Row `r` of matrix `j` is stored as a bitmask over the columns; column `c`
/// multiplies bit `c` of the point index (least significant first).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratingMatrices {
    dim: usize,
    m: u32,
    /// `rows[j][r]` is the bitmask of row `r` of matrix `j`.
    rows: Vec<Vec<u64>>,
}

impl GeneratingMatrices {
    pub fn new(dim: usize, m: u32, rows: Vec<Vec<u64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::MatrixFormat("need at least one matrix".into()));
        }
        if m == 0 || m > 52 {
            return Err(Error::MatrixFormat(format!("m = {m} out of range 1..=52")));
        }
        if rows.len() != dim {
            return Err(Error::MatrixFormat(format!(
                "expected {dim} matrices, got {}",
                rows.len()
            )));
        }
        let mask = (1u64 << m) - 1;
        for (j, mat) in rows.iter().enumerate() {
            if mat.len() != m as usize {
                return Err(Error::MatrixFormat(format!(
                    "matrix {j} has {} rows, expected {m}",
                    mat.len()
                )));
            }
            for &row in mat {
                if row & !mask != 0 {
                    return Err(Error::MatrixFormat(format!(
                        "matrix {j} has entries beyond column {m}"
                    )));
                }
            }
        }
        Ok(Self { dim, m, rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// The identity matrix in every coordinate (each coordinate is the
    /// radical inverse of the index).
    pub fn identity(dim: usize, m: u32) -> Result<Self> {
        let mat: Vec<u64> = (0..m as usize).map(|r| 1u64 << r).collect();
        Self::new(dim, m, vec![mat; dim])
    }

    /// The pair generating the Hammersley set: the anti-diagonal reflection
    /// for `i / 2^m` and the identity for the radical inverse.
    pub fn hammersley_pair(m: u32) -> Result<Self> {
        let ident: Vec<u64> = (0..m as usize).map(|r| 1u64 << r).collect();
        let anti: Vec<u64> = (0..m as usize)
            .map(|r| 1u64 << (m as usize - 1 - r))
            .collect();
        Self::new(2, m, vec![anti, ident])
    }

    /// Three-dimensional net from the reflection, the identity, and the
    /// upper-triangular Pascal matrix modulo 2.
    pub fn pascal_triple(m: u32) -> Result<Self> {
        let ident: Vec<u64> = (0..m as usize).map(|r| 1u64 << r).collect();
        let anti: Vec<u64> = (0..m as usize)
            .map(|r| 1u64 << (m as usize - 1 - r))
            .collect();
        let mut pascal = vec![0u64; m as usize];
        for (r, row) in pascal.iter_mut().enumerate() {
            for c in r..m as usize {
                if binomial_is_odd(c as u64, r as u64) {
                    *row |= 1 << c;
                }
            }
        }
        Self::new(3, m, vec![anti, ident, pascal])
    }

    /// Parses the text format: line 1 is `d m`, followed by `d` blocks of
    /// `m` lines of `m` characters over `{0, 1}`, blocks separated by blank
    /// lines.
    pub fn parse(input: &str) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::MatrixFormat("missing header line".into()))?;
        let mut it = header.split_whitespace();
        let dim: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MatrixFormat("header must be 'd m'".into()))?;
        let m: u32 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MatrixFormat("header must be 'd m'".into()))?;
        if it.next().is_some() {
            return Err(Error::MatrixFormat("trailing tokens in header".into()));
        }
        let mut matrices: Vec<Vec<u64>> = Vec::new();
        let mut current: Vec<u64> = Vec::new();
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                if !current.is_empty() {
                    matrices.push(std::mem::take(&mut current));
                }
                continue;
            }
            if line.len() != m as usize {
                return Err(Error::MatrixFormat(format!(
                    "row '{line}' has {} characters, expected {m}",
                    line.len()
                )));
            }
            let mut row = 0u64;
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => row |= 1 << c,
                    _ => {
                        return Err(Error::MatrixFormat(format!(
                            "invalid character '{ch}' in matrix row"
                        )))
                    }
                }
            }
            current.push(row);
            if current.len() == m as usize {
                matrices.push(std::mem::take(&mut current));
            }
        }
        if !current.is_empty() {
            return Err(Error::MatrixFormat(
                "incomplete trailing matrix block".into(),
            ));
        }
        Self::new(dim, m, matrices)
    }

    /// Renders the same text format accepted by [`GeneratingMatrices::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.dim, self.m);
        for (j, mat) in self.rows.iter().enumerate() {
            if j > 0 {
                out.push('\n');
            }
            for &row in mat {
                for c in 0..self.m as usize {
                    out.push(if row >> c & 1 == 1 { '1' } else { '0' });
                }
                out.push('\n');
            }
        }
        out
    }
}

fn binomial_is_odd(n: u64, k: u64) -> bool {
    // Lucas in base 2: C(n, k) is odd iff k's bits are a subset of n's.
    n & k == k
}

/// The digital net generated by `g`: point `i` has, in coordinate `j`, the
/// binary digits `M_j · b mod 2` where `b` is the bit vector of `i` (least
/// significant first).
pub fn digital_net(g: &GeneratingMatrices) -> Result<PointSet> {
    let m = g.m;
    let n = 1u64 << m;
    let scale = (-(m as f64)).exp2();
    let mut points = Vec::with_capacity(n as usize);
    for i in 0..n {
        let mut coords = Vec::with_capacity(g.dim);
        for mat in &g.rows {
            let mut digits = 0u64; // digit r has weight 2^-(r+1)
            for (r, &row) in mat.iter().enumerate() {
                let bit = (row & i).count_ones() & 1;
                digits |= ((bit as u64) & 1) << (m as usize - 1 - r);
            }
            coords.push(digits as f64 * scale);
        }
        points.push(Point::new(coords)?);
    }
    PointSet::new(g.dim, points)
}

/// Result of an exhaustive net-property check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetCheckReport {
    pub m: u32,
    pub dim: usize,
    /// Smallest `t` for which every dyadic box of volume `2^(t-m)` contains
    /// exactly `2^t` points.
    pub t_star: u32,
    /// Number of dyadic boxes inspected across all levels.
    pub boxes_checked: u64,
    /// The first failing box (in enumeration order) at level `t_star - 1`,
    /// when `t_star > 0`.
    pub failure_example: Option<DyadicBox>,
}

/// Exhaustively verifies the `(t, m, d)`-net property for `t = 0, 1, ...`
/// and reports the smallest `t` that holds.
///
/// For each `t`, all shape vectors `(k_1, ..., k_d)` summing to `m - t` are
/// enumerated in colexicographic order, and within a shape the boxes in
/// row-major digit order (last axis fastest). Membership is half-open, so
/// points with a coordinate equal to 1 would make every level fail; they
/// are rejected up front.
pub fn verify_net_parameter(t: &PointSet, m: u32) -> Result<NetCheckReport> {
    let n = t.len();
    if m > 52 || n != 1usize << m {
        return Err(Error::NotPowerOfTwo { n });
    }
    for p in t.iter() {
        for &c in p.coords() {
            if c >= 1.0 {
                return Err(Error::InvalidParameter(
                    "point with a coordinate equal to 1 lies in no dyadic box".into(),
                ));
            }
        }
    }
    let d = t.dim();
    let mut boxes_checked = 0u64;
    let mut last_failure: Option<DyadicBox> = None;

    for level in 0..=m {
        let expected = 1u64 << level;
        let mut level_ok = true;
        'shapes: for shape in shapes_colex(m - level, d) {
            let cells = 1usize << (m - level);
            let mut counts = vec![0u64; cells];
            for p in t.iter() {
                let mut id = 0usize;
                for (axis, &k) in shape.iter().enumerate() {
                    let digit = (p.coord(axis) * (k as f64).exp2()) as usize;
                    id = (id << k) | digit;
                }
                counts[id] += 1;
            }
            for (id, &count) in counts.iter().enumerate() {
                boxes_checked += 1;
                if count != expected {
                    last_failure = Some(box_from_cell(&shape, id));
                    level_ok = false;
                    break 'shapes;
                }
            }
        }
        if level_ok {
            return Ok(NetCheckReport {
                m,
                dim: d,
                t_star: level,
                boxes_checked,
                failure_example: last_failure,
            });
        }
    }
    Err(Error::InternalInvariant(
        "net check failed even at t = m".into(),
    ))
}

/// All compositions of `total` into `d` non-negative parts, in
/// colexicographic order: the first shape puts all weight on axis 0, the
/// last puts it all on the final axis.
fn shapes_colex(total: u32, d: usize) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, axis: usize, buf: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if axis == 0 {
            buf[0] = remaining;
            out.push(buf.clone());
            return;
        }
        for k in 0..=remaining {
            buf[axis] = k;
            rec(remaining - k, axis - 1, buf, out);
        }
    }
    let mut out = Vec::new();
    let mut buf = vec![0u32; d];
    rec(total, d - 1, &mut buf, &mut out);
    out
}

/// Reconstructs the dyadic box of a row-major cell id for a given shape.
fn box_from_cell(shape: &[u32], id: usize) -> DyadicBox {
    let mut digits = vec![0u64; shape.len()];
    let mut rest = id;
    for (axis, &k) in shape.iter().enumerate().rev() {
        digits[axis] = (rest & ((1usize << k) - 1)) as u64;
        rest >>= k;
    }
    let intervals = shape
        .iter()
        .zip(&digits)
        .map(|(&k, &a)| DyadicInterval::new(a, k).expect("digit in range"))
        .collect();
    DyadicBox::new(intervals).expect("d >= 1")
}

/// The dispersion bound `2^(t - m + 2d)` implied by the net property,
/// clamped to 1 (a volume bound above 1 is vacuous).
pub fn net_dispersion_bound(t: u32, m: u32, d: usize) -> Result<f64> {
    if t > m {
        return Err(Error::InvalidParameter(format!(
            "net parameter t = {t} exceeds m = {m}"
        )));
    }
    let exponent = t as f64 - m as f64 + 2.0 * d as f64;
    Ok(exponent.exp2().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{AxisBox, BoxSemantics};
    use crate::solver::{dispersion_exact, is_empty};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn coords_1d(t: &PointSet) -> Vec<f64> {
        t.iter().map(|p| p.coord(0)).collect()
    }

    #[test]
    fn van_der_corput_small_cases() {
        assert_eq!(coords_1d(&van_der_corput(1).unwrap()), vec![0.0, 0.5]);
        assert_eq!(
            coords_1d(&van_der_corput(2).unwrap()),
            vec![0.0, 0.5, 0.25, 0.75]
        );
        let m3 = van_der_corput(3).unwrap();
        assert_eq!(m3.points()[5].coord(0), 0.625);
        assert!(van_der_corput(MAX_VDC_M + 1).is_err());
    }

    #[test]
    fn hammersley_small_cases() {
        let m2 = hammersley(2).unwrap();
        let rows: Vec<Vec<f64>> = m2.iter().map(|p| p.coords().to_vec()).collect();
        assert_eq!(
            rows,
            vec![
                vec![0.0, 0.0],
                vec![0.25, 0.5],
                vec![0.5, 0.25],
                vec![0.75, 0.75]
            ]
        );
        let m0 = hammersley(0).unwrap();
        assert_eq!(m0.len(), 1);
        assert_eq!(m0.points()[0].coords(), &[0.0, 0.0]);
        assert!(hammersley(MAX_HAMMERSLEY_M + 1).is_err());
    }

    #[test]
    fn identity_net_reproduces_van_der_corput() {
        for m in 1..=4 {
            let g = GeneratingMatrices::identity(1, m).unwrap();
            let net = digital_net(&g).unwrap();
            assert_eq!(coords_1d(&net), coords_1d(&van_der_corput(m).unwrap()));
        }
    }

    #[test]
    fn hammersley_pair_reproduces_hammersley() {
        for m in 1..=6 {
            let g = GeneratingMatrices::hammersley_pair(m).unwrap();
            let net = digital_net(&g).unwrap();
            let reference = hammersley(m).unwrap();
            let mut a: Vec<Vec<f64>> = net.iter().map(|p| p.coords().to_vec()).collect();
            let mut b: Vec<Vec<f64>> = reference.iter().map(|p| p.coords().to_vec()).collect();
            a.sort_by(|x, y| x.partial_cmp(y).unwrap());
            b.sort_by(|x, y| x.partial_cmp(y).unwrap());
            assert_eq!(a, b, "m = {m}");
        }
    }

    #[test]
    fn degenerate_all_zero_matrix() {
        let g = GeneratingMatrices::new(1, 1, vec![vec![0]]).unwrap();
        let net = digital_net(&g).unwrap();
        assert_eq!(coords_1d(&net), vec![0.0, 0.0]);
        let report = verify_net_parameter(&net, 1).unwrap();
        assert_eq!(report.t_star, 1);
        assert!(report.failure_example.is_some());
    }

    #[test]
    fn verify_hammersley_and_vdc_are_zero_nets() {
        for m in 0..=10 {
            let report = verify_net_parameter(&hammersley(m).unwrap(), m).unwrap();
            assert_eq!(report.t_star, 0, "hammersley m = {m}");
            assert!(report.failure_example.is_none());
            let report = verify_net_parameter(&van_der_corput(m).unwrap(), m).unwrap();
            assert_eq!(report.t_star, 0, "van der Corput m = {m}");
        }
    }

    #[test]
    fn verify_duplicated_point_degenerate_net() {
        let t = PointSet::from_rows(1, &[vec![0.3], vec![0.3]]).unwrap();
        let report = verify_net_parameter(&t, 1).unwrap();
        assert_eq!(report.t_star, 1);
        let failure = report.failure_example.unwrap();
        assert_eq!(failure.intervals()[0].k(), 1);
    }

    /// With every coordinate identical the marginals stay perfect but any
    /// shape splitting two axes fails, so the parameter degrades to m - 1.
    #[test]
    fn verify_fully_correlated_net_degrades() {
        for m in 1..=5 {
            let g = GeneratingMatrices::identity(2, m).unwrap();
            let net = digital_net(&g).unwrap();
            let report = verify_net_parameter(&net, m).unwrap();
            assert_eq!(report.t_star, m.saturating_sub(1), "m = {m}");
        }
        let g = GeneratingMatrices::identity(3, 4).unwrap();
        let net = digital_net(&g).unwrap();
        assert_eq!(verify_net_parameter(&net, 4).unwrap().t_star, 3);
    }

    #[test]
    fn verify_rejects_wrong_cardinality() {
        let t = PointSet::from_rows(1, &[vec![0.1], vec![0.2], vec![0.3]]).unwrap();
        assert!(matches!(
            verify_net_parameter(&t, 2),
            Err(Error::NotPowerOfTwo { n: 3 })
        ));
    }

    #[test]
    fn verify_rejects_coordinate_one() {
        let t = PointSet::from_rows(1, &[vec![0.0], vec![1.0]]).unwrap();
        assert!(verify_net_parameter(&t, 1).is_err());
    }

    #[test]
    fn pascal_triple_is_a_zero_net() {
        for m in 2..=5 {
            let g = GeneratingMatrices::pascal_triple(m).unwrap();
            let net = digital_net(&g).unwrap();
            let report = verify_net_parameter(&net, m).unwrap();
            assert_eq!(report.t_star, 0, "m = {m}");
        }
    }

    #[test]
    fn matrix_text_round_trip() {
        let g = GeneratingMatrices::pascal_triple(4).unwrap();
        let text = g.to_text();
        let parsed = GeneratingMatrices::parse(&text).unwrap();
        assert_eq!(parsed, g);
    }

    #[test]
    fn matrix_parse_rejects_malformed_input() {
        assert!(GeneratingMatrices::parse("").is_err());
        assert!(GeneratingMatrices::parse("1 2\n10\n1").is_err());
        assert!(GeneratingMatrices::parse("1 2\n10\n12\n").is_err());
        assert!(GeneratingMatrices::parse("2 2\n10\n01\n").is_err());
    }

    #[test]
    fn net_bound_values() {
        assert_eq!(net_dispersion_bound(0, 8, 2).unwrap(), 0.0625);
        assert_eq!(net_dispersion_bound(0, 4, 2).unwrap(), 1.0);
        assert!(net_dispersion_bound(5, 4, 2).is_err());
        // t = 5d with 2^m <= n < 2^(m+1) gives 2^(7d - m) <= 2^(7d + 1) / n.
        for d in 1..=3usize {
            let t = 5 * d as u32;
            let m = t + 3;
            let bound = net_dispersion_bound(t, m, d).unwrap();
            let expected = ((7 * d) as f64 - m as f64).exp2().min(1.0);
            assert_eq!(bound, expected);
            for n in (1u64 << m)..(1u64 << (m + 1)) {
                assert!(expected <= ((7 * d + 1) as f64).exp2() / n as f64);
            }
        }
    }

    #[test]
    fn net_parameter_bounds_true_dispersion() {
        for m in 1..=8 {
            let net = van_der_corput(m).unwrap();
            let t_star = verify_net_parameter(&net, m).unwrap().t_star;
            let value = dispersion_exact(&net).value;
            assert!(value <= net_dispersion_bound(t_star, m, 1).unwrap());
        }
        for m in 1..=6 {
            let net = hammersley(m).unwrap();
            let t_star = verify_net_parameter(&net, m).unwrap().t_star;
            let value = dispersion_exact(&net).value;
            assert!(value <= net_dispersion_bound(t_star, m, 2).unwrap());
        }
    }

    /// Any box of volume at least 4^d 2^(t-m) contains a dyadic box of
    /// volume at least 2^(t-m) and therefore a net point.
    #[test]
    fn large_boxes_always_contain_a_net_point() {
        let m = 8;
        let net = hammersley(m).unwrap();
        assert_eq!(verify_net_parameter(&net, m).unwrap().t_star, 0);
        let threshold = 16.0 * (-(m as f64)).exp2(); // 4^d 2^(t-m), d = 2, t = 0
        let mut rng = ChaCha8Rng::seed_from_u64(321);
        let mut hits = 0;
        while hits < 500 {
            let lo: Vec<f64> = (0..2).map(|_| rng.random_range(0.0..0.7)).collect();
            let hi: Vec<f64> = lo.iter().map(|l| rng.random_range(*l..1.0)).collect();
            let b = AxisBox::half_open(lo, hi).unwrap();
            if b.volume() < threshold {
                continue;
            }
            hits += 1;
            let dyadic = crate::geometry::largest_dyadic_subbox(&b).unwrap();
            assert!(dyadic.volume() >= b.volume() / 16.0);
            assert!(dyadic.volume() >= (-(m as f64)).exp2());
            assert!(!is_empty(&b, &net).unwrap(), "box {:?} is empty", b);
            assert!(!is_empty(
                &dyadic.to_axis_box().with_semantics(BoxSemantics::HalfOpen),
                &net
            )
            .unwrap());
        }
    }

    #[test]
    fn shapes_enumerate_in_colex_order() {
        let shapes = shapes_colex(2, 2);
        assert_eq!(shapes, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let shapes = shapes_colex(3, 3);
        assert_eq!(shapes.len(), 10);
        assert_eq!(shapes[0], vec![3, 0, 0]);
        assert_eq!(shapes[9], vec![0, 0, 3]);
    }
}
