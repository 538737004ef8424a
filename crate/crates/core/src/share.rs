//! Shared arcs of analytic curves near zero.
//!
//! For analytic `F(z) = a_m z^m + …` and `G(z) = b_n z^n + …` the curves
//! `t ↦ F(t)`, `t ↦ G(t)` (t real) share an arc through 0 exactly when a
//! real-analytic change of parameter links them. With `ℓ = lcm(m, n)`,
//! `m1 = ℓ/m`, `n1 = ℓ/n` and `a_m = 1` after scaling:
//!
//! ```text
//! F1(z) = F(z^m1) = z^ℓ (1 + F2(z)),   F3(z) = z (1 + F2(z))^{1/ℓ}
//! G1(z) = G(z^n1) = (c z)^ℓ (1 + G2(z)), G3(z) = c z (1 + G2(z))^{1/ℓ}
//! ```
//!
//! so `F3^ℓ = F1`, `G3^ℓ = G1`, and the transition map `H = F3⁻¹ ∘ G3`
//! satisfies `F(H(t)^m1) = G(t^n1)`. The arcs coincide iff H has real
//! coefficients, possibly after the parameter flip `G(z) → G(-z)`; they can
//! only coincide near 0 in both directions when m1 and n1 are odd.

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::fixed::Fixed;
use crate::geometry::{nearest_on_curve, SampledCurve, SegmentGrid};
use crate::rational::{nth_root_exact, ratio_to_f64, recip, GaussRational};
use crate::scalar::FixedComplex;
use crate::series::{PowerSeries, Series};
use crate::{Error, Result};

/// Truncation order used when none is given.
pub const DEFAULT_TRUNC_ORDER: usize = 32;
/// Relative size of Im h_k below which an approximate H counts as real.
pub const REAL_TOL_REL: f64 = 1e-20;
/// Above [`REAL_TOL_REL`] but below this, realness is undecided.
pub const INCONCLUSIVE_TOL_REL: f64 = 1e-8;
/// Extra bits carried beyond the requested precision in approximate mode.
const GUARD_BITS: u32 = 64;
/// Finest scale 2^-k used by [`sample_rough_agreement`].
pub const MAX_SCALE_EXPONENT: i32 = 12;

/// Valuations and leading-coefficient data of a pair (F, G).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizedPair {
    pub m: usize,
    pub n: usize,
    pub ell: usize,
    pub m1: usize,
    pub n1: usize,
    /// b_n / a_m (a positive rational).
    #[serde(skip)]
    pub ratio: BigRational,
    /// (b_n / a_m)^{1/ℓ}.
    pub c_n: f64,
    /// `c_n` when it is rational.
    #[serde(skip)]
    pub c_n_exact: Option<BigRational>,
}

fn leading(s: &PowerSeries) -> Result<(usize, GaussRational)> {
    if !s.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let v = s.valuation().ok_or(Error::ZeroSeries)?;
    Ok((v, s.coeff(v).clone()))
}

/// Valuations `m, n`, `ℓ = lcm(m, n)`, `m1 = ℓ/m`, `n1 = ℓ/n` and
/// `c_n = (b_n/a_m)^{1/ℓ}`; the leading ratio must be a positive real.
pub fn normalize(f: &PowerSeries, g: &PowerSeries) -> Result<NormalizedPair> {
    let (m, am) = leading(f)?;
    let (n, bn) = leading(g)?;
    let ratio = bn.div(&am).expect("leading coefficient is nonzero");
    if !ratio.is_real() {
        return Err(Error::NonRealLeadingRatio);
    }
    if ratio.re.is_negative() {
        return Err(Error::NegativeLeadingRatio);
    }
    let ell = m.lcm(&n);
    let c_n_exact = nth_root_exact(&ratio.re, ell as u32);
    let c_n = ratio_to_f64(&ratio.re).powf(1.0 / ell as f64);
    Ok(NormalizedPair { m, n, ell, m1: ell / m, n1: ell / n, ratio: ratio.re, c_n, c_n_exact })
}

/// Largest order to which `H` is determined by the known coefficients.
pub fn max_order(f: &PowerSeries, g: &PowerSeries) -> Result<usize> {
    let (m, _) = leading(f)?;
    let (n, _) = leading(g)?;
    let ell = m.lcm(&n);
    let avail = |t: usize, k: usize| ((t + 1) * k).saturating_sub(ell);
    Ok(avail(f.trunc_order(), ell / m).min(avail(g.trunc_order(), ell / n)))
}

/// A series that is either exact or carried in fixed point.
#[derive(Clone, Debug, PartialEq)]
pub enum AnySeries {
    Exact(Series<GaussRational>),
    Approx(Series<FixedComplex>),
}

impl AnySeries {
    pub fn trunc_order(&self) -> usize {
        match self {
            AnySeries::Exact(s) => s.trunc_order(),
            AnySeries::Approx(s) => s.trunc_order(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, AnySeries::Exact(_))
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        match self {
            AnySeries::Exact(s) => s.to_c64(),
            AnySeries::Approx(s) => s.to_c64(),
        }
    }

    fn precision(&self) -> Option<u32> {
        match self {
            AnySeries::Exact(_) => None,
            AnySeries::Approx(s) => Some(s.coeff(0).bits()),
        }
    }

    fn to_approx(&self, bits: u32) -> Series<FixedComplex> {
        match self {
            AnySeries::Exact(s) => s.map(|c| FixedComplex::from_gauss(c, bits)),
            AnySeries::Approx(s) => s.clone(),
        }
    }

    fn truncate(&self, order: usize) -> Result<Self> {
        Ok(match self {
            AnySeries::Exact(s) => AnySeries::Exact(s.truncate(order)?),
            AnySeries::Approx(s) => AnySeries::Approx(s.truncate(order)?),
        })
    }

    /// Decimal (approximate) or rational (exact) rendering of the real parts.
    fn real_parts_text(&self) -> Vec<String> {
        match self {
            AnySeries::Exact(s) => s.coeffs().iter().map(|c| c.re.to_string()).collect(),
            AnySeries::Approx(s) => s.coeffs().iter().map(|c| c.re.to_decimal(30)).collect(),
        }
    }
}

/// The branch maps F3, G3.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchMaps {
    pub f3: AnySeries,
    pub g3: AnySeries,
}

/// `(P)^{1/ℓ}` for `P(0) = 1`.
fn root_of_unit_series(p: &PowerSeries, ell: usize) -> Result<PowerSeries> {
    let mut a = p.clone();
    a.set_coeff(0, GaussRational::zero());
    a.one_plus_pow(&recip(ell as i64))
}

fn check_power_identity(root: &PowerSeries, ell: usize, scale: &BigRational, target: &PowerSeries) -> Result<()> {
    let pow = root.powi(ell).scale_rational(scale);
    let k = pow.trunc_order().min(target.trunc_order());
    if pow.coeffs()[..=k] != target.coeffs()[..=k] {
        return Err(Error::InvalidArgument(format!("branch map fails the ℓ-th power identity (ℓ = {ell})")));
    }
    Ok(())
}

/// F3 and G3 to degree `order`. Exact unless `c_n` is irrational, in which
/// case both are returned in fixed point with `precision_bits` (+ guard).
/// The identities `F3^ℓ = F1` and `G3^ℓ = G1` are checked exactly.
pub fn branch_maps(
    f: &PowerSeries,
    g: &PowerSeries,
    np: &NormalizedPair,
    order: usize,
    precision_bits: u32,
) -> Result<BranchMaps> {
    let ell = np.ell;
    let available = max_order(f, g)?;
    if order > available || order == 0 {
        return Err(Error::TruncationExhausted { needed: order, available });
    }
    let am_inv = f.coeff(np.m).inv().ok_or(Error::ZeroSeries)?;
    // F1, G1 are needed to degree order + ℓ - 1.
    let deg = order + ell - 1;
    let f1 = f.scale(&am_inv).substitute_power(np.m1).truncate(deg)?;
    let g1 = g.scale(&am_inv).substitute_power(np.n1).truncate(deg)?;

    let f3 = root_of_unit_series(&f1.shift_down(ell)?, ell)?.shift_up();
    let inv_ratio = np.ratio.recip();
    let w3 = root_of_unit_series(&g1.shift_down(ell)?.scale_rational(&inv_ratio), ell)?.shift_up();
    let one = BigRational::from_integer(1.into());
    check_power_identity(&f3, ell, &one, &f1)?;
    check_power_identity(&w3, ell, &np.ratio, &g1)?;

    Ok(match &np.c_n_exact {
        Some(c) => BranchMaps { f3: AnySeries::Exact(f3), g3: AnySeries::Exact(w3.scale_rational(c)) },
        None => {
            let bits = precision_bits + GUARD_BITS;
            let c = Fixed::from_rational(&np.ratio, bits).nth_root(ell as u32).ok_or(Error::NegativeLeadingRatio)?;
            let c = FixedComplex::new(c, Fixed::zero(bits));
            BranchMaps {
                f3: AnySeries::Approx(f3.map(|x| FixedComplex::from_gauss(x, bits))),
                g3: AnySeries::Approx(w3.map(|x| FixedComplex::from_gauss(x, bits)).scale(&c)),
            }
        }
    })
}

/// `H = F3⁻¹ ∘ G3` to degree `order`.
pub fn transition_map(f3: &AnySeries, g3: &AnySeries, order: usize) -> Result<AnySeries> {
    let available = f3.trunc_order().min(g3.trunc_order());
    if order > available {
        return Err(Error::TruncationExhausted { needed: order, available });
    }
    let f3 = f3.truncate(order)?;
    let g3 = g3.truncate(order)?;
    Ok(match (&f3, &g3) {
        (AnySeries::Exact(a), AnySeries::Exact(b)) => AnySeries::Exact(a.reversion()?.compose(b)?),
        _ => {
            let bits = f3.precision().or(g3.precision()).expect("one side is approximate");
            AnySeries::Approx(f3.to_approx(bits).reversion()?.compose(&g3.to_approx(bits))?)
        }
    })
}

/// How close the coefficients of H are to real.
#[derive(Clone, Debug, PartialEq)]
pub enum Realness {
    Real,
    /// Within [`INCONCLUSIVE_TOL_REL`] but not [`REAL_TOL_REL`].
    NearlyReal { max_rel: f64 },
    /// First degree with a clearly non-real coefficient.
    NotReal { degree: usize, rel: f64 },
}

/// Realness of H's coefficients: exact comparison for exact series;
/// otherwise `|Im h_k|` relative to `max(1, max_{j≤k} |h_j|^{k/j})`, which
/// tracks the geometric growth of the coefficients.
pub fn realness(h: &AnySeries) -> Realness {
    let c = h.to_c64();
    let mut scale = 1.0f64;
    let mut max_rel = 0.0f64;
    for k in 1..c.len() {
        for (j, cj) in c.iter().enumerate().take(k + 1).skip(1) {
            scale = scale.max(cj.norm().powf(k as f64 / j as f64));
        }
        let rel = c[k].im.abs() / scale;
        let exact_nonreal = matches!(h, AnySeries::Exact(s) if !s.coeff(k).is_real());
        if exact_nonreal || (!h.is_exact() && rel > INCONCLUSIVE_TOL_REL) {
            return Realness::NotReal { degree: k, rel };
        }
        max_rel = max_rel.max(rel);
    }
    if h.is_exact() || max_rel <= REAL_TOL_REL {
        Realness::Real
    } else {
        Realness::NearlyReal { max_rel }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ShareKind {
    Share,
    BounceBackF,
    BounceBackG,
    NoRoughAgreement,
    Inconclusive,
}

/// Parameter relation behind a `Share` verdict:
/// `F(flip_f · H(t)^m1) = G(flip_g · t^n1)` for small real t.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub flip_f: f64,
    pub flip_g: f64,
    pub m1: usize,
    pub n1: usize,
    /// Real coefficients of H.
    pub h: Vec<f64>,
}

impl Witness {
    pub fn h_at(&self, t: f64) -> f64 {
        self.h.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    /// Parameters (u, v) with F(u) = G(v) up to truncation.
    pub fn pair(&self, t: f64) -> (f64, f64) {
        (self.flip_f * self.h_at(t).powi(self.m1 as i32), self.flip_g * t.powi(self.n1 as i32))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShareVerdict {
    pub kind: ShareKind,
    #[serde(rename = "H_coeffs")]
    pub h_coeffs: Option<Vec<String>>,
    pub diagnostics: String,
    #[serde(skip)]
    pub witness: Option<Witness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShareOptions {
    /// Degree to which H is computed and checked.
    pub order: usize,
    /// Working precision when an irrational ℓ-th root appears.
    pub precision_bits: u32,
}

impl Default for ShareOptions {
    fn default() -> Self {
        ShareOptions { order: 16, precision_bits: 128 }
    }
}

enum Agreement {
    Real { flip_g: f64, h: AnySeries, np: NormalizedPair },
    Nearly { max_rel: f64 },
    None { reason: String },
}

/// Degree of the first, cheap pass of [`staged_transition`].
const FIRST_PASS_ORDER: usize = 4;

/// H to degree `order` with its realness. H is first computed to a low
/// degree; its coefficients there equal those of the full computation, so a
/// non-real coefficient already settles the question.
fn staged_transition(
    f: &PowerSeries,
    g: &PowerSeries,
    np: &NormalizedPair,
    order: usize,
    precision_bits: u32,
) -> Result<(AnySeries, Realness)> {
    if order > FIRST_PASS_ORDER {
        let bm = branch_maps(f, g, np, FIRST_PASS_ORDER, precision_bits)?;
        let h = transition_map(&bm.f3, &bm.g3, FIRST_PASS_ORDER)?;
        if let r @ Realness::NotReal { .. } = realness(&h) {
            return Ok((h, r));
        }
    }
    let bm = branch_maps(f, g, np, order, precision_bits)?;
    let h = transition_map(&bm.f3, &bm.g3, order)?;
    let r = realness(&h);
    Ok((h, r))
}

fn reflect_if(s: &PowerSeries, flip: f64) -> PowerSeries {
    if flip < 0.0 {
        s.reflect()
    } else {
        s.clone()
    }
}

/// Looks for a real transition map for (F, G) and (F, G(-z)). The flips
/// (F(-z), G(±z)) give H(t) ↦ -H(-t) when m1, n1 are odd, so they add
/// nothing in the cases where a shared arc is possible.
fn find_agreement(f: &PowerSeries, g: &PowerSeries, opts: &ShareOptions) -> Result<Agreement> {
    let mut reasons = Vec::new();
    let mut nearly: Option<f64> = None;
    for flip_g in [1.0, -1.0] {
        let gf = reflect_if(g, flip_g);
        let np = match normalize(f, &gf) {
            Ok(np) => np,
            Err(Error::NonRealLeadingRatio) => return Ok(Agreement::None { reason: "b_n/a_m is not real".into() }),
            Err(Error::NegativeLeadingRatio) => {
                reasons.push(format!("flip {flip_g:+}: negative leading ratio"));
                continue;
            }
            Err(e) => return Err(e),
        };
        let (h, verdict) = staged_transition(f, &gf, &np, opts.order, opts.precision_bits)?;
        match verdict {
            Realness::Real => return Ok(Agreement::Real { flip_g, h, np }),
            Realness::NearlyReal { max_rel } => {
                nearly = Some(nearly.map_or(max_rel, |x: f64| x.min(max_rel)));
                reasons.push(format!("flip {flip_g:+}: H nearly real (max rel. imaginary part {max_rel:.1e})"));
            }
            Realness::NotReal { degree, rel } => {
                reasons.push(format!("flip {flip_g:+}: H has a non-real coefficient at degree {degree} (rel. {rel:.1e})"))
            }
        }
    }
    Ok(match nearly {
        Some(max_rel) => Agreement::Nearly { max_rel },
        None => Agreement::None { reason: reasons.join("; ") },
    })
}

/// Whether the curve of `s` bounces back at zero, i.e. s(I⁺) = s(I⁻):
/// the pair (s(z), s(-z)) must admit a real transition map.
fn bounce_back(s: &PowerSeries, opts: &ShareOptions) -> Result<Option<bool>> {
    let (m, _) = leading(s)?;
    if m % 2 == 1 {
        return Ok(Some(false));
    }
    let r = s.reflect();
    let order = opts.order.min(max_order(s, &r)?);
    if order == 0 {
        return Ok(None);
    }
    let np = normalize(s, &r)?;
    Ok(match staged_transition(s, &r, &np, order, opts.precision_bits)?.1 {
        Realness::Real => Some(true),
        Realness::NearlyReal { .. } => None,
        Realness::NotReal { .. } => Some(false),
    })
}

/// [`decide_share_with`] at the default precision.
pub fn decide_share(f: &PowerSeries, g: &PowerSeries, order: usize) -> Result<ShareVerdict> {
    decide_share_with(f, g, &ShareOptions { order, ..ShareOptions::default() })
}

/// Verdict for the pair (F, G): parity first (even m1 or n1 rules out a
/// two-sided shared arc), then a search for a real transition map.
pub fn decide_share_with(f: &PowerSeries, g: &PowerSeries, opts: &ShareOptions) -> Result<ShareVerdict> {
    let (m, _) = leading(f)?;
    let (n, _) = leading(g)?;
    if opts.order == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    let ell = m.lcm(&n);
    let (m1, n1) = (ell / m, ell / n);
    let mut diag = vec![format!("m={m}, n={n}, ell={ell}, m1={m1}, n1={n1}")];
    for (name, s) in [("F", f), ("G", g)] {
        match bounce_back(s, opts) {
            Ok(Some(true)) => diag.push(format!("the curve of {name} bounces back at zero")),
            Ok(Some(false)) => {}
            Ok(None) => diag.push(format!("bounce-back of {name} undetermined at this order")),
            Err(e) => diag.push(format!("bounce-back of {name} not checked: {e}")),
        }
    }

    let parity = if m1 % 2 == 0 {
        Some((ShareKind::BounceBackF, "m1", "G"))
    } else if n1 % 2 == 0 {
        Some((ShareKind::BounceBackG, "n1", "F"))
    } else {
        None
    };
    if let Some((kind, which, other)) = parity {
        diag.push(format!(
            "{which} is even: a rough agreement would force the curve of {other} to bounce back at zero; \
             the verdict is labelled by the side carrying the even exponent"
        ));
        match find_agreement(f, g, opts) {
            Ok(Agreement::Real { .. }) => {
                diag.push("a real transition map exists (the curves agree on one side of zero)".into())
            }
            Ok(_) => diag.push("no real transition map at this order".into()),
            Err(e) => diag.push(format!("transition map not computed: {e}")),
        }
        return Ok(ShareVerdict { kind, h_coeffs: None, diagnostics: diag.join("; "), witness: None });
    }

    match find_agreement(f, g, opts)? {
        Agreement::Real { flip_g, h, np } => {
            if flip_g < 0.0 {
                diag.push("shared arc found after reversing the parameter of G".into());
            }
            diag.push(format!(
                "H real to order {} ({}), H'(0) = c_n = {:.6e}",
                opts.order,
                if h.is_exact() { "exact" } else { "fixed point" },
                np.c_n
            ));
            let witness = Witness { flip_f: 1.0, flip_g, m1, n1, h: h.to_c64().iter().map(|c| c.re).collect() };
            Ok(ShareVerdict {
                kind: ShareKind::Share,
                h_coeffs: Some(h.real_parts_text()),
                diagnostics: diag.join("; "),
                witness: Some(witness),
            })
        }
        Agreement::Nearly { max_rel } => {
            diag.push(format!("H is real only to relative {max_rel:.1e}; precision insufficient to decide"));
            Ok(ShareVerdict { kind: ShareKind::Inconclusive, h_coeffs: None, diagnostics: diag.join("; "), witness: None })
        }
        Agreement::None { reason } => {
            diag.push(reason);
            Ok(ShareVerdict {
                kind: ShareKind::NoRoughAgreement,
                h_coeffs: None,
                diagnostics: diag.join("; "),
                witness: None,
            })
        }
    }
}

/// Sampling test for agreement of image arcs near zero. For each scale
/// `2^-k` (k = 1..=12) every sample `F(u)` with `2^-k-1 < |u| ≤ 2^-k` must
/// lie within relative distance `tol` of the sampled polyline of G, i.e. the
/// directed Hausdorff distance from F(annulus) to G, relative to the scale
/// of the annulus image, is at most `tol`. G should be sampled on a larger
/// parameter range than F so that the matching arc is present.
pub fn sample_rough_agreement(f: &SampledCurve, g: &SampledCurve, tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let mut populated = 0;
    for k in 1..=MAX_SCALE_EXPONENT {
        let hi = 2f64.powi(-k);
        let pts: Vec<Complex64> = f
            .t
            .iter()
            .zip(&f.z)
            .filter(|(u, fu)| u.abs() > 0.5 * hi && u.abs() <= hi && fu.norm() > 0.0)
            .map(|(_, fu)| *fu)
            .collect();
        if pts.is_empty() {
            continue;
        }
        populated += 1;
        // Only G segments near the image scale of this annulus can match.
        let rmax = pts.iter().map(|p| p.norm()).fold(0.0, f64::max);
        let rmin = pts.iter().map(|p| p.norm()).fold(f64::INFINITY, f64::min);
        let mut grid = SegmentGrid::new(rmax / 64.0);
        for i in 0..g.segments() {
            let (r0, r1) = (g.z[i].norm(), g.z[i + 1].norm());
            // A segment inside the disc of radius rmin (1 - tol) is too far.
            if r0.min(r1) <= 4.0 * rmax && r0.max(r1) >= 0.5 * (1.0 - tol).max(0.0) * rmin {
                grid.insert(i, g.z[i], g.z[i + 1]);
            }
        }
        let all_matched = pts.iter().all(|p| nearest_on_curve(g, &grid, *p, tol * p.norm(), |_| true).is_some());
        if !all_matched {
            return Ok(false);
        }
    }
    if populated < 3 {
        return Err(Error::InsufficientSamples(format!("only {populated} of the scales 2^-1..2^-12 hold samples")));
    }
    Ok(true)
}
