//! Planar helpers shared by the intersection scanner and the sampled-curve
//! tools: sampled curves, segment intersection, and a uniform-grid spatial
//! hash over polyline segments.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::{Error, Result};

/// A curve sampled at strictly increasing parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve {
    pub t: Vec<f64>,
    pub z: Vec<Complex64>,
}

impl SampledCurve {
    pub fn new(t: Vec<f64>, z: Vec<Complex64>) -> Result<Self> {
        if t.len() != z.len() {
            return Err(Error::InvalidArgument(format!("{} parameters but {} points", t.len(), z.len())));
        }
        if t.len() < 2 {
            return Err(Error::InsufficientSamples(format!("{} samples; need at least 2", t.len())));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("sample parameters must be strictly increasing".into()));
        }
        Ok(SampledCurve { t, z })
    }

    /// Samples `f` at `n + 1` equally spaced parameters in `[lo, hi]`.
    pub fn from_fn(f: impl Fn(f64) -> Complex64, lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(hi > lo) || n == 0 {
            return Err(Error::InvalidArgument(format!("bad sampling window [{lo}, {hi}] with {n} steps")));
        }
        let t: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
        let z = t.iter().map(|&x| f(x)).collect();
        Self::new(t, z)
    }

    /// Like [`SampledCurve::from_fn`], with the parameters in `extra` (those
    /// inside the window) added to the grid.
    pub fn from_fn_including(
        f: impl Fn(f64) -> Complex64,
        lo: f64,
        hi: f64,
        n: usize,
        extra: &[f64],
    ) -> Result<Self> {
        if !(hi > lo) || n == 0 {
            return Err(Error::InvalidArgument(format!("bad sampling window [{lo}, {hi}] with {n} steps")));
        }
        let mut t: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
        t.extend(extra.iter().copied().filter(|x| (lo..=hi).contains(x)));
        t.sort_by(f64::total_cmp);
        t.dedup();
        let z = t.iter().map(|&x| f(x)).collect();
        Self::new(t, z)
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Number of polyline segments.
    pub fn segments(&self) -> usize {
        self.t.len() - 1
    }

    /// Point and parameter at fraction `s ∈ [0, 1]` along segment `i`.
    pub fn lerp(&self, i: usize, s: f64) -> (f64, Complex64) {
        (self.t[i] + s * (self.t[i + 1] - self.t[i]), self.z[i] + (self.z[i + 1] - self.z[i]) * s)
    }

    /// Linear interpolation of the image at parameter `t` (clamped).
    pub fn at(&self, t: f64) -> Complex64 {
        let i = match self.t.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(i) => return self.z[i],
            Err(i) => i.clamp(1, self.t.len() - 1) - 1,
        };
        let s = ((t - self.t[i]) / (self.t[i + 1] - self.t[i])).clamp(0.0, 1.0);
        self.lerp(i, s).1
    }

    /// Restriction to samples with parameter in `[lo, hi]`.
    pub fn restrict(&self, lo: f64, hi: f64) -> Result<Self> {
        let (t, z): (Vec<f64>, Vec<Complex64>) =
            self.t.iter().zip(&self.z).filter(|(t, _)| **t >= lo && **t <= hi).map(|(t, z)| (*t, *z)).unzip();
        Self::new(t, z)
    }
}

/// Intersection of segments p0p1 and q0q1 as fractions `(s, u)` along each.
/// Parallel (including collinear) segments report no intersection.
pub fn segment_intersection(p0: Complex64, p1: Complex64, q0: Complex64, q1: Complex64) -> Option<(f64, f64)> {
    let r = p1 - p0;
    let d = q1 - q0;
    let cross = |a: Complex64, b: Complex64| a.re * b.im - a.im * b.re;
    let denom = cross(r, d);
    if denom == 0.0 || !denom.is_finite() {
        return None;
    }
    let w = q0 - p0;
    let s = cross(w, d) / denom;
    let u = cross(w, r) / denom;
    ((0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&u)).then_some((s, u))
}

/// Distance from `p` to segment ab and the closest fraction along it.
pub fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> (f64, f64) {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    let s = if len2 == 0.0 { 0.0 } else { (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0) };
    ((a + ab * s - p).norm(), s)
}

/// Segments whose bounding box covers more cells than this are kept in a
/// fallback list returned by every query.
const MAX_CELLS_PER_SEGMENT: i64 = 4096;

/// Uniform grid of square cells, each listing the segments whose bounding
/// box touches it.
#[derive(Debug, Clone)]
pub struct SegmentGrid {
    cell: f64,
    cells: HashMap<(i64, i64), Vec<usize>>,
    oversized: Vec<(usize, Complex64, Complex64)>,
}

impl SegmentGrid {
    pub fn new(cell: f64) -> Self {
        assert!(cell > 0.0 && cell.is_finite(), "grid cell must be positive");
        SegmentGrid { cell, cells: HashMap::new(), oversized: Vec::new() }
    }

    /// Grid over all segments of `curve`.
    pub fn for_curve(curve: &SampledCurve, cell: f64) -> Self {
        let mut g = Self::new(cell);
        for i in 0..curve.segments() {
            g.insert(i, curve.z[i], curve.z[i + 1]);
        }
        g
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    fn key(&self, x: f64) -> i64 {
        (x / self.cell).floor() as i64
    }

    pub fn insert(&mut self, id: usize, a: Complex64, b: Complex64) {
        let (x0, x1) = (self.key(a.re.min(b.re)), self.key(a.re.max(b.re)));
        let (y0, y1) = (self.key(a.im.min(b.im)), self.key(a.im.max(b.im)));
        let span = (x1.saturating_sub(x0) + 1).saturating_mul(y1.saturating_sub(y0) + 1);
        if span > MAX_CELLS_PER_SEGMENT {
            self.oversized.push((id, a, b));
            return;
        }
        for x in x0..=x1 {
            for y in y0..=y1 {
                self.cells.entry((x, y)).or_default().push(id);
            }
        }
    }

    /// Segments too long to bucket; callers pairing segments cell by cell
    /// must test these against everything.
    pub fn oversized(&self) -> impl Iterator<Item = usize> + '_ {
        self.oversized.iter().map(|o| o.0)
    }

    /// Occupied cells with their segment lists.
    pub fn cells(&self) -> impl Iterator<Item = (&(i64, i64), &Vec<usize>)> {
        self.cells.iter()
    }

    /// Segment ids whose cells meet the disc of `radius` around `p`
    /// (a superset of the segments within that distance), deduplicated.
    pub fn near(&self, p: Complex64, radius: f64) -> Vec<usize> {
        let (x0, x1) = (self.key(p.re - radius), self.key(p.re + radius));
        let (y0, y1) = (self.key(p.im - radius), self.key(p.im + radius));
        let mut out: Vec<usize> = self
            .oversized
            .iter()
            .filter(|(_, a, b)| point_segment_distance(p, *a, *b).0 <= radius)
            .map(|o| o.0)
            .collect();
        let span = (x1.saturating_sub(x0) + 1).saturating_mul(y1.saturating_sub(y0) + 1);
        if span as usize > 4 * self.cells.len() {
            // Query larger than the occupied set: scan the occupied cells.
            for (&(x, y), v) in &self.cells {
                if (x0..=x1).contains(&x) && (y0..=y1).contains(&y) {
                    out.extend_from_slice(v);
                }
            }
        } else {
            for x in x0..=x1 {
                for y in y0..=y1 {
                    if let Some(v) = self.cells.get(&(x, y)) {
                        out.extend_from_slice(v);
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Closest point of the polyline to `p` among segments passing `filter`,
/// searched within `radius`: `(distance, parameter, segment)`.
pub fn nearest_on_curve(
    curve: &SampledCurve,
    grid: &SegmentGrid,
    p: Complex64,
    radius: f64,
    filter: impl Fn(usize) -> bool,
) -> Option<(f64, f64, usize)> {
    let mut best: Option<(f64, f64, usize)> = None;
    for i in grid.near(p, radius) {
        if !filter(i) {
            continue;
        }
        let (d, s) = point_segment_distance(p, curve.z[i], curve.z[i + 1]);
        if d <= radius && best.is_none_or(|b| d < b.0) {
            best = Some((d, curve.lerp(i, s).0, i));
        }
    }
    best
}

/// max over `points` of the distance to the polyline of `curve`, with
/// segments bucketed at `cell`. Points farther than `cap` contribute `cap`
/// (so the result is `min(true distance, cap)`).
pub fn directed_distance(points: &[Complex64], curve: &SampledCurve, grid: &SegmentGrid, cap: f64) -> f64 {
    points
        .iter()
        .map(|&p| nearest_on_curve(curve, grid, p, cap, |_| true).map_or(cap, |b| b.0))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn crossing_segments_intersect() {
        let (s, u) = segment_intersection(c(0.0, 0.0), c(2.0, 0.0), c(1.5, -1.0), c(1.5, 1.0)).unwrap();
        assert!((s - 0.75).abs() < 1e-15 && (u - 0.5).abs() < 1e-15);
        assert!(segment_intersection(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(1.0, 1.0)).is_none());
        assert!(segment_intersection(c(0.0, 0.0), c(1.0, 0.0), c(2.0, -1.0), c(2.0, 1.0)).is_none());
    }

    #[test]
    fn distance_to_segment() {
        let (d, s) = point_segment_distance(c(0.5, 2.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!((d - 2.0).abs() < 1e-15 && (s - 0.5).abs() < 1e-15);
        let (d, s) = point_segment_distance(c(-3.0, 4.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!((d - 5.0).abs() < 1e-15 && s == 0.0);
    }

    #[test]
    fn grid_finds_nearby_segments() {
        let curve = SampledCurve::from_fn(|t| Complex64::from_polar(1.0, t), 0.0, 6.0, 600).unwrap();
        let grid = SegmentGrid::for_curve(&curve, 0.05);
        let (d, t, _) = nearest_on_curve(&curve, &grid, c(0.0, 1.1), 0.2, |_| true).unwrap();
        assert!((d - 0.1).abs() < 1e-4);
        assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-3);
        assert!(nearest_on_curve(&curve, &grid, c(0.0, 0.0), 0.5, |_| true).is_none());
    }

    #[test]
    fn long_segments_stay_queryable() {
        let mut g = SegmentGrid::new(1e-9);
        g.insert(0, c(-1.0, 0.0), c(1.0, 1.0));
        g.insert(1, c(0.0, 0.0), c(1e-9, 1e-9));
        assert_eq!(g.near(c(0.0, 0.5), 0.01), vec![0]);
        assert_eq!(g.near(c(0.0, 0.0), 1e-10), vec![1]);
        assert_eq!(g.oversized().collect::<Vec<_>>(), vec![0]);
        assert_eq!(g.near(c(0.0, 0.0), 10.0), vec![0, 1]);
    }

    #[test]
    fn interpolation_and_validation() {
        let curve = SampledCurve::new(vec![0.0, 1.0, 3.0], vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 2.0)]).unwrap();
        assert_eq!(curve.at(2.0), c(1.0, 1.0));
        assert_eq!(curve.at(-1.0), c(0.0, 0.0));
        assert!(SampledCurve::new(vec![0.0, 0.0], vec![c(0.0, 0.0); 2]).is_err());
        assert!(matches!(SampledCurve::new(vec![0.0], vec![c(0.0, 0.0)]), Err(Error::InsufficientSamples(_))));
    }
}
