//! Self-intersections of the curve f(t) = ζ(½ + it).
//!
//! The scanner samples the curve with a bounded arclength step, buckets the
//! polyline segments in a uniform grid over ℂ, intersects segment pairs that
//! share a cell, and refines each crossing by two-dimensional Newton on
//! f(a) − f(b) = 0. Every pair of zeros of f is a self-intersection at 0;
//! those pairs are reported like any other and kept apart in the
//! multiplicity histogram.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{point_segment_distance, segment_intersection, SegmentGrid};
use crate::theta;
use crate::zeta::{self, scan_curve, EvalConfig};
use crate::{Error, Result};

/// Largest accepted |f(a) − f(b)| for a refined pair.
pub const REFINE_TOL: f64 = 1e-10;
/// Minimum |b − a| of a pair.
pub const SEPARATION_TOL: f64 = 1e-3;
/// Default z-space radius for merging pairs into one multiplicity record.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Evaluation error target during refinement.
pub const REFINE_ERR_TARGET: f64 = 1e-11;
/// Below this |f′| on both branches the Newton system is treated as singular.
pub const JACOBIAN_TOL: f64 = 1e-6;
/// Refined pairs closer than this in both coordinates are one pair.
const DEDUP_TOL: f64 = 1e-7;
/// Distinct preimages in a multiplicity record differ by more than this.
const ORDINATE_MERGE_TOL: f64 = 1e-7;
/// Candidate segments closer than this many samples are not paired.
const MIN_INDEX_GAP: usize = 4;
/// Non-crossing segments closer than this fraction of a cell seed Newton.
const NEAR_MISS_FRACTION: f64 = 0.25;
const MAX_NEWTON: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntersectionPair {
    pub a: f64,
    pub b: f64,
    pub z: Complex64,
    pub residual: f64,
    pub newton_iters: usize,
    /// Scan window that produced the pair.
    pub window: (f64, f64),
    /// Evaluation error bounds at a and b.
    pub err_a: f64,
    pub err_b: f64,
}

/// The configuration used for refinement: Euler–Maclaurin with a target of
/// at most [`REFINE_ERR_TARGET`].
pub fn refine_config(cfg: &EvalConfig) -> EvalConfig {
    EvalConfig {
        target_abs_err: cfg.target_abs_err.min(REFINE_ERR_TARGET),
        rs_switch_t: cfg.rs_switch_t.max(1e4),
        ..*cfg
    }
}

/// Newton refinement of a seed (a0, b0) to a pair with
/// |f(a) − f(b)| ≤ [`REFINE_TOL`]. The order of the seed does not matter.
pub fn refine_pair(a0: f64, b0: f64, cfg: &EvalConfig) -> Result<IntersectionPair> {
    let (mut a, mut b) = (a0.min(b0), a0.max(b0));
    if !(b - a > SEPARATION_TOL) {
        return Err(Error::CollapsedPair { t: a });
    }
    let rcfg = refine_config(cfg);
    rcfg.validate()?;
    let eval = |t: f64| zeta::value_and_derivative(t, &rcfg);
    let (mut fa, mut dfa) = eval(a)?;
    let (mut fb, mut dfb) = eval(b)?;
    let mut r = fa.value - fb.value;
    if r.norm() >= 0.1 {
        return Err(Error::InvalidArgument(format!("seed ({a0}, {b0}) too far from a crossing: |f(a) - f(b)| = {:e}", r.norm())));
    }
    for iter in 1..=MAX_NEWTON {
        if dfa.norm() < JACOBIAN_TOL && dfb.norm() < JACOBIAN_TOL {
            return Err(Error::ZeroJacobian { a, b });
        }
        // J = [[Re f'(a), -Re f'(b)], [Im f'(a), -Im f'(b)]]
        let det = dfb.re * dfa.im - dfa.re * dfb.im;
        if det.abs() <= 1e-14 * dfa.norm() * dfb.norm() {
            return Err(Error::NewtonDivergence { a0, b0 });
        }
        let mut da = (r.re * dfb.im - dfb.re * r.im) / det;
        let mut db = (dfa.im * r.re - dfa.re * r.im) / det;
        let len = da.hypot(db);
        if len > 0.1 {
            da *= 0.1 / len;
            db *= 0.1 / len;
        }
        // Backtrack until the residual does not grow.
        let mut lambda = 1.0;
        let next = loop {
            let (na, nb) = (a + lambda * da, b + lambda * db);
            let (ea, eda) = eval(na)?;
            let (eb, edb) = eval(nb)?;
            let nr = ea.value - eb.value;
            if nr.norm() <= r.norm() || lambda < 1.0 / 64.0 {
                break (na, nb, ea, eda, eb, edb, nr);
            }
            lambda *= 0.5;
        };
        let step = lambda * da.abs().max(db.abs());
        (a, b, fa, dfa, fb, dfb, r) = next;
        if !(b - a > SEPARATION_TOL) {
            return Err(Error::CollapsedPair { t: a });
        }
        if step <= 4.0 * f64::EPSILON * b.abs().max(1.0) || r.norm() <= 1e-15 {
            return finish(a, b, fa.value, fb.value, fa.err, fb.err, iter, a0, b0);
        }
    }
    if r.norm() <= REFINE_TOL {
        return finish(a, b, fa.value, fb.value, fa.err, fb.err, MAX_NEWTON, a0, b0);
    }
    Err(Error::NewtonDivergence { a0, b0 })
}

#[allow(clippy::too_many_arguments)]
fn finish(
    a: f64,
    b: f64,
    fa: Complex64,
    fb: Complex64,
    err_a: f64,
    err_b: f64,
    iters: usize,
    a0: f64,
    b0: f64,
) -> Result<IntersectionPair> {
    let residual = (fa - fb).norm();
    if residual > REFINE_TOL {
        return Err(Error::NewtonDivergence { a0, b0 });
    }
    let (lo, hi) = (a0.min(b0), a0.max(b0));
    Ok(IntersectionPair { a, b, z: 0.5 * (fa + fb), residual, newton_iters: iters, window: (lo, hi), err_a, err_b })
}

/// Zero of f within `radius` of `t`, by sign changes of Hardy's Z.
fn nearby_zero(t: f64, radius: f64, cfg: &EvalConfig) -> Option<f64> {
    let zeros = theta::bracket_zeros(t - radius, t + radius, radius / 16.0, cfg).ok()?;
    zeros.into_iter().min_by(|x, y| (x - t).abs().total_cmp(&(y - t).abs()))
}

/// Closest approach of two non-crossing segments, if within `tol`.
/// Chords can pass each other where the arcs cross, e.g. when the
/// crossing sits on a sample point; such pairs are handed to Newton too.
fn near_miss(p0: Complex64, p1: Complex64, q0: Complex64, q1: Complex64, tol: f64) -> Option<(f64, f64)> {
    let (d0, u0) = point_segment_distance(p0, q0, q1);
    let (d1, u1) = point_segment_distance(p1, q0, q1);
    let (d2, s2) = point_segment_distance(q0, p0, p1);
    let (d3, s3) = point_segment_distance(q1, p0, p1);
    let best = [(d0, 0.0, u0), (d1, 1.0, u1), (d2, s2, 0.0), (d3, s3, 1.0)]
        .into_iter()
        .min_by(|x, y| x.0.total_cmp(&y.0))?;
    (best.0 <= tol).then_some((best.1, best.2))
}

/// Fallback for a singular Newton system: f′ vanishes on the line only at
/// zeros of f, so both ends are pinned to nearby zeros.
fn zero_pair(a: f64, b: f64, window: (f64, f64), cfg: &EvalConfig) -> Result<IntersectionPair> {
    let rcfg = refine_config(cfg);
    let za = nearby_zero(a, 0.05, &rcfg).ok_or(Error::ZeroJacobian { a, b })?;
    let zb = nearby_zero(b, 0.05, &rcfg).ok_or(Error::ZeroJacobian { a, b })?;
    if !((zb - za).abs() > SEPARATION_TOL) {
        return Err(Error::CollapsedPair { t: za });
    }
    let fa = zeta::zeta_critical(za, &rcfg)?;
    let fb = zeta::zeta_critical(zb, &rcfg)?;
    let mut p = finish(za.min(zb), za.max(zb), fa.value, fb.value, fa.err, fb.err, 0, window.0, window.1)?;
    p.window = window;
    Ok(p)
}

/// Counters describing one scan.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ScanStats {
    pub samples: usize,
    pub candidates: usize,
    pub refined: usize,
    pub diverged: usize,
    pub collapsed: usize,
    pub zero_jacobian: usize,
    pub duplicates: usize,
}

/// [`find_intersections_with_stats`] without the counters.
pub fn find_intersections(t_lo: f64, t_hi: f64, cfg: &EvalConfig, grid_cell: f64) -> Result<Vec<IntersectionPair>> {
    find_intersections_with_stats(t_lo, t_hi, cfg, grid_cell).map(|r| r.0)
}

/// Self-intersection pairs with a, b in [t_lo, t_hi], sorted by (a, b).
/// The curve is sampled with arclength step `grid_cell`, which is also the
/// side of the grid cells.
pub fn find_intersections_with_stats(
    t_lo: f64,
    t_hi: f64,
    cfg: &EvalConfig,
    grid_cell: f64,
) -> Result<(Vec<IntersectionPair>, ScanStats)> {
    if !(t_lo < t_hi) {
        return Err(Error::InvalidArgument(format!("empty window [{t_lo}, {t_hi}]")));
    }
    if !(grid_cell > 0.0 && grid_cell.is_finite()) {
        return Err(Error::InvalidArgument(format!("grid_cell must be positive, got {grid_cell}")));
    }
    let samples = scan_curve(t_lo, t_hi, grid_cell, cfg)?;
    let mut stats = ScanStats { samples: samples.len(), ..ScanStats::default() };
    let z: Vec<Complex64> = samples.iter().map(|s| s.value).collect();
    let t: Vec<f64> = samples.iter().map(|s| s.t).collect();

    let mut grid = SegmentGrid::new(grid_cell);
    for i in 0..z.len() - 1 {
        grid.insert(i, z[i], z[i + 1]);
    }
    let mut pairs: HashSet<(usize, usize)> = HashSet::new();
    let oversized: Vec<usize> = grid.oversized().collect();
    for (_, ids) in grid.cells() {
        for (k, &i) in ids.iter().enumerate() {
            for &j in &ids[k + 1..] {
                pairs.insert((i.min(j), i.max(j)));
            }
            for &j in &oversized {
                pairs.insert((i.min(j), i.max(j)));
            }
        }
    }
    let mut seeds: Vec<(f64, f64)> = pairs
        .into_iter()
        .filter(|(i, j)| j - i >= MIN_INDEX_GAP)
        .filter_map(|(i, j)| {
            let (s, u) = segment_intersection(z[i], z[i + 1], z[j], z[j + 1])
                .or_else(|| near_miss(z[i], z[i + 1], z[j], z[j + 1], NEAR_MISS_FRACTION * grid_cell))?;
            Some((t[i] + s * (t[i + 1] - t[i]), t[j] + u * (t[j + 1] - t[j])))
        })
        .collect();
    seeds.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    stats.candidates = seeds.len();

    let window = (t_lo, t_hi);
    let results: Vec<Result<IntersectionPair>> = seeds
        .par_iter()
        .map(|&(a0, b0)| match refine_pair(a0, b0, cfg) {
            Err(Error::ZeroJacobian { a, b }) => zero_pair(a, b, window, cfg).map_err(|_| Error::ZeroJacobian { a, b }),
            other => other.map(|mut p| {
                p.window = window;
                p
            }),
        })
        .collect();
    let mut found = Vec::new();
    for r in results {
        match r {
            Ok(p) if p.a >= t_lo && p.b <= t_hi => found.push(p),
            Ok(_) => {}
            Err(Error::CollapsedPair { .. }) => stats.collapsed += 1,
            Err(Error::ZeroJacobian { .. }) => stats.zero_jacobian += 1,
            Err(Error::NewtonDivergence { .. }) | Err(Error::InvalidArgument(_)) => stats.diverged += 1,
            Err(e) => return Err(e),
        }
    }
    stats.refined = found.len();
    let pairs = dedup_pairs(found);
    stats.duplicates = stats.refined - pairs.len();
    Ok((pairs, stats))
}

/// Sorts by (a, b) and merges pairs within [`DEDUP_TOL`] in both
/// coordinates, keeping the smaller residual.
pub fn dedup_pairs(mut pairs: Vec<IntersectionPair>) -> Vec<IntersectionPair> {
    pairs.sort_by(|x, y| x.a.total_cmp(&y.a).then(x.b.total_cmp(&y.b)));
    let mut out: Vec<IntersectionPair> = Vec::with_capacity(pairs.len());
    for p in pairs {
        // Pairs sorted by a: scan back over the ones with a close enough.
        let dup = out
            .iter_mut()
            .rev()
            .take_while(|q| p.a - q.a <= DEDUP_TOL)
            .find(|q| (q.b - p.b).abs() <= DEDUP_TOL);
        match dup {
            Some(q) => {
                if p.residual < q.residual {
                    *q = p;
                }
            }
            None => out.push(p),
        }
    }
    out.sort_by(|x, y| x.a.total_cmp(&y.a).then(x.b.total_cmp(&y.b)));
    out
}

/// All ordinates t with f(t) = z found among the pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplicityRecord {
    pub z: Complex64,
    pub preimages: Vec<f64>,
    pub count: usize,
    /// count ≥ 3: a candidate counterexample to "at most two solutions".
    pub flagged: bool,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    /// Records for nonzero values, ordered by their first preimage.
    pub records: Vec<MultiplicityRecord>,
    /// The value z = 0, whose preimages are the zeros of f.
    pub zero_value: Option<MultiplicityRecord>,
    /// Number of flagged records (nonzero values only).
    pub flagged: usize,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Groups pairs whose values lie within `cluster_tol` (transitively) and
/// lists the distinct preimages of each value.
pub fn multiplicity_histogram(pairs: &[IntersectionPair], cluster_tol: f64) -> Histogram {
    let key = |z: Complex64| ((z.re / cluster_tol).floor() as i64, (z.im / cluster_tol).floor() as i64);
    let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, p) in pairs.iter().enumerate() {
        cells.entry(key(p.z)).or_default().push(i);
    }
    let mut parent: Vec<usize> = (0..pairs.len()).collect();
    for (i, p) in pairs.iter().enumerate() {
        let (kx, ky) = key(p.z);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for &j in cells.get(&(kx + dx, ky + dy)).map(Vec::as_slice).unwrap_or(&[]) {
                    if j > i && (pairs[j].z - p.z).norm() <= cluster_tol {
                        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..pairs.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut records = Vec::new();
    let mut zero_value = None;
    for members in groups.into_values() {
        let mut ts: Vec<f64> = members.iter().flat_map(|&i| [pairs[i].a, pairs[i].b]).collect();
        ts.sort_by(f64::total_cmp);
        let mut pre: Vec<f64> = Vec::with_capacity(ts.len());
        for t in ts {
            if pre.last().is_none_or(|&l| t - l > ORDINATE_MERGE_TOL) {
                pre.push(t);
            }
        }
        let z = members.iter().map(|&i| pairs[i].z).sum::<Complex64>() / members.len() as f64;
        let max_residual = members.iter().map(|&i| pairs[i].residual).fold(0.0, f64::max);
        let count = pre.len();
        let rec = MultiplicityRecord { z, preimages: pre, count, flagged: count >= 3, max_residual };
        if z.norm() <= cluster_tol {
            zero_value = Some(MultiplicityRecord { flagged: false, ..rec });
        } else {
            records.push(rec);
        }
    }
    records.sort_by(|x, y| x.preimages[0].total_cmp(&y.preimages[0]));
    let flagged = records.iter().filter(|r| r.flagged).count();
    Histogram { records, zero_value, flagged }
}

pub const PAIR_CSV_HEADER: &str = "a,b,re_z,im_z,residual,window_lo,window_hi";

pub fn write_pairs_csv<W: Write>(mut w: W, pairs: &[IntersectionPair]) -> std::io::Result<()> {
    writeln!(w, "{PAIR_CSV_HEADER}")?;
    for p in pairs {
        writeln!(w, "{},{},{},{},{},{},{}", p.a, p.b, p.z.re, p.z.im, p.residual, p.window.0, p.window.1)?;
    }
    Ok(())
}

/// Reads the pair CSV; every data row must have the seven header columns.
pub fn read_pairs_csv<R: BufRead>(r: R) -> Result<Vec<IntersectionPair>> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty pair file".into()))??;
    if header.trim() != PAIR_CSV_HEADER {
        return Err(Error::Parse(format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let v = line
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::Parse(format!("row {}: {e}", n + 2)))?;
        if v.len() != 7 {
            return Err(Error::Parse(format!("row {}: expected 7 columns, got {}", n + 2, v.len())));
        }
        out.push(IntersectionPair {
            a: v[0],
            b: v[1],
            z: Complex64::new(v[2], v[3]),
            residual: v[4],
            newton_iters: 0,
            window: (v[5], v[6]),
            err_a: f64::NAN,
            err_b: f64::NAN,
        });
    }
    Ok(out)
}

/// A point where |f′| is tiny.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuspectPoint {
    pub t: f64,
    pub abs_f_prime: f64,
    pub abs_f: f64,
    /// |f| is small too, as it must be when f′ vanishes on the line.
    pub consistent: bool,
}

/// Check of the injectivity argument around one zero ρ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroCheck {
    pub ordinate: f64,
    /// Interval around ρ containing no other zero.
    pub interval: (f64, f64),
    /// |ρ| > Θ, so g is decreasing near ρ.
    pub beyond_theta: bool,
    /// g′ < 0 on the interval.
    pub g_decreasing: bool,
    /// max |g(t) − g(ρ)| on the interval; must be < 1.
    pub g_spread: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InjectivityReport {
    pub window: (f64, f64),
    pub zeros: Vec<ZeroCheck>,
    pub suspect_points: Vec<SuspectPoint>,
    pub passed: bool,
}

/// |f′| threshold for suspect points.
pub const SMALL_DERIVATIVE: f64 = 1e-6;
/// |f| below which a suspect point counts as sitting on a zero.
const SMALL_VALUE: f64 = 1e-5;
/// Grid for the |f′| scan and the zero bracketing.
const INJECTIVITY_STEP: f64 = 0.01;

/// Local injectivity diagnostics on [t_lo, t_hi]: (i) points where
/// |f′| < 1e-6 and whether f vanishes there as well; (ii) for every zero ρ,
/// an interval free of other zeros on which g is decreasing with
/// |g(t) − g(ρ)| < 1, which makes f injective there.
pub fn verify_local_injectivity(t_lo: f64, t_hi: f64, cfg: &EvalConfig) -> Result<InjectivityReport> {
    if !(t_lo < t_hi) || !t_lo.is_finite() || !t_hi.is_finite() {
        return Err(Error::InvalidArgument(format!("bad window [{t_lo}, {t_hi}]")));
    }
    let rcfg = refine_config(cfg);
    let n = ((t_hi - t_lo) / INJECTIVITY_STEP).ceil() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| (t_lo + INJECTIVITY_STEP * i as f64).min(t_hi)).collect();
    let dabs = |t: f64| zeta::zeta_prime_critical(t, &rcfg).map(|s| s.value.norm());
    let d: Vec<f64> = grid.par_iter().map(|&t| dabs(t)).collect::<Result<Vec<f64>>>()?;

    let mut suspect_points = Vec::new();
    for i in 0..d.len() {
        let left = if i == 0 { f64::INFINITY } else { d[i - 1] };
        let right = if i + 1 == d.len() { f64::INFINITY } else { d[i + 1] };
        if d[i] > left || d[i] > right {
            continue;
        }
        // Golden-section refinement of the local minimum of |f'|.
        let (mut lo, mut hi) = (grid[i.saturating_sub(1)], grid[(i + 1).min(grid.len() - 1)]);
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let x1 = hi - phi * (hi - lo);
            let x2 = lo + phi * (hi - lo);
            if dabs(x1)? < dabs(x2)? {
                hi = x2;
            } else {
                lo = x1;
            }
        }
        let t = 0.5 * (lo + hi);
        let m = dabs(t)?;
        if m < SMALL_DERIVATIVE {
            let abs_f = zeta::zeta_critical(t, &rcfg)?.value.norm();
            suspect_points.push(SuspectPoint { t, abs_f_prime: m, abs_f, consistent: abs_f < SMALL_VALUE });
        }
    }

    let zeros = theta::bracket_zeros(t_lo, t_hi, INJECTIVITY_STEP / 10.0, &rcfg)?;
    let big_theta = theta::find_theta_root()?;
    let mut checks = Vec::with_capacity(zeros.len());
    for (k, &rho) in zeros.iter().enumerate() {
        let prev = if k > 0 { zeros[k - 1] } else { f64::NEG_INFINITY };
        let next = zeros.get(k + 1).copied().unwrap_or(f64::INFINITY);
        let mut r = (0.5 * (rho - prev).min(next - rho)).min(0.5);
        let g0 = theta::g(rho);
        while (theta::g(rho - r) - g0).abs().max((theta::g(rho + r) - g0).abs()) >= 1.0 {
            r *= 0.5;
        }
        let interval = (rho - r, rho + r);
        let beyond_theta = rho.abs() - r > big_theta;
        let g_decreasing = theta::check_monotone_g(interval.0, interval.1, (r / 50.0).min(0.01));
        // g is monotone on the interval, so the spread is attained at an end.
        let g_spread = (theta::g(interval.0) - g0).abs().max((theta::g(interval.1) - g0).abs());
        checks.push(ZeroCheck {
            ordinate: rho,
            interval,
            beyond_theta,
            g_decreasing,
            g_spread,
            passed: beyond_theta && g_decreasing && g_spread < 1.0,
        });
    }
    let passed = checks.iter().all(|c| c.passed) && suspect_points.iter().all(|s| s.consistent);
    Ok(InjectivityReport { window: (t_lo, t_hi), zeros: checks, suspect_points, passed })
}

/// Whether the pair is a crossing at the origin, i.e. a pair of zeros.
pub fn is_zero_pair(p: &IntersectionPair, tol: f64) -> bool {
    p.z.norm() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: f64, b: f64, z: Complex64) -> IntersectionPair {
        IntersectionPair { a, b, z, residual: 0.0, newton_iters: 0, window: (0.0, 1.0), err_a: 0.0, err_b: 0.0 }
    }

    #[test]
    fn collapsed_seed_is_rejected() {
        let cfg = EvalConfig::default();
        assert!(matches!(refine_pair(30.0 + 1e-9, 30.0, &cfg), Err(Error::CollapsedPair { .. })));
    }

    #[test]
    fn histogram_merges_transitively() {
        let z = Complex64::new(0.3, -0.2);
        let w = Complex64::new(1.0, 1.0);
        let pairs = [pair(1.0, 2.0, z), pair(2.0, 3.0, z + 1e-10), pair(5.0, 6.0, w)];
        let h = multiplicity_histogram(&pairs, CLUSTER_TOL);
        assert_eq!(h.records.len(), 2);
        assert_eq!(h.records[0].preimages, vec![1.0, 2.0, 3.0]);
        assert!(h.records[0].flagged);
        assert_eq!(h.records[1].count, 2);
        assert_eq!(h.flagged, 1);
        assert!(h.zero_value.is_none());
    }

    #[test]
    fn zero_value_kept_apart() {
        let pairs = [pair(14.13, 21.02, Complex64::new(1e-12, 0.0)), pair(21.02, 25.01, Complex64::new(0.0, -1e-12))];
        let h = multiplicity_histogram(&pairs, CLUSTER_TOL);
        assert!(h.records.is_empty());
        let zv = h.zero_value.unwrap();
        assert_eq!(zv.count, 3);
        assert!(!zv.flagged);
        assert_eq!(h.flagged, 0);
    }

    #[test]
    fn dedup_merges_close_pairs() {
        let z = Complex64::new(0.5, 0.5);
        let mut p2 = pair(1.0 + 1e-9, 2.0 - 1e-9, z);
        p2.residual = 1e-12;
        let mut p1 = pair(1.0, 2.0, z);
        p1.residual = 1e-11;
        let out = dedup_pairs(vec![p1, pair(1.5, 2.5, z), p2]);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].residual, 1e-12);
    }

    #[test]
    fn csv_round_trip() {
        let pairs = vec![pair(1.25, 2.5, Complex64::new(0.1, -0.2))];
        let mut buf = Vec::new();
        write_pairs_csv(&mut buf, &pairs).unwrap();
        let back = read_pairs_csv(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(back[0].a, 1.25);
        assert_eq!(back[0].z, Complex64::new(0.1, -0.2));
        assert!(read_pairs_csv(std::io::Cursor::new("x,y\n")).is_err());
    }
}
