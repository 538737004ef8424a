//! Acceptance suite: one PASS/FAIL line per criterion, each with its
//! runtime budget. Runs without the libtest harness so the lines always
//! appear; the process exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zsc_core::geometry::SampledCurve;
use zsc_core::loops::{circle, fundamental_domain, wobbly_circle};
use zsc_core::rational::GaussRational;
use zsc_core::selfcross::{self, IntersectionPair};
use zsc_core::series::PowerSeries;
use zsc_core::share::{decide_share_with, sample_rough_agreement, ShareKind, ShareOptions};
use zsc_core::theta;
use zsc_core::zeta::{self, zeta_critical};
use zsc_core::{EvalConfig, Method};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("theta root", Duration::from_secs(1), theta_root),
        ("first zero", Duration::from_secs(5), first_zero),
        ("argument identity", Duration::from_secs(60), argument_identity),
        ("monotonicity of g", Duration::from_secs(10), monotonicity),
        ("intersections on [0, 500]", Duration::from_secs(600), intersections),
        ("isolation of pairs", Duration::from_secs(600), isolation),
        ("series oracle equivalence", Duration::from_secs(60), series_oracle),
        ("loop fundamental domain", Duration::from_secs(10), loop_domain),
        ("EM vs RS agreement", Duration::from_secs(10), cross_method),
    ];
    let mut failures = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| outcome(false, "panicked"));
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let ok = result.passed && in_time;
        if !ok {
            failures += 1;
        }
        println!(
            "{} {name}: {} [{:.2} s, budget {} s{}]",
            if ok { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", over budget" }
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}

fn theta_root() -> Outcome {
    let root = theta::find_theta_root().unwrap();
    outcome((6.2888..=6.2908).contains(&root), format!("Θ = {root:.12}, g'(Θ) = {:.1e}", theta::g_prime(root)))
}

fn first_zero() -> Outcome {
    let zeros = theta::bracket_zeros(0.01, 20.0, 0.05, &EvalConfig::certified()).unwrap();
    match zeros.first() {
        Some(&z) => outcome((14.1337..=14.1357).contains(&z), format!("first zero at {z:.12}")),
        None => outcome(false, "no zero bracketed on (0, 20]"),
    }
}

fn argument_identity() -> Outcome {
    let cfg = EvalConfig::certified();
    let zeros = theta::bracket_zeros(0.01, 501.0, 0.01, &cfg).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut worst: f64 = 0.0;
    let mut tested = 0;
    while tested < 200 {
        let t: f64 = rng.gen_range(0.5..500.0);
        if zeros.iter().any(|z| (z - t).abs() < 1e-2) {
            continue;
        }
        let n = zeros.iter().filter(|&&z| z < t).count() as f64;
        let phase = theta::vartheta(t, &cfg).unwrap().vartheta;
        worst = worst.max((phase - PI * (n - 1.0) - theta::g(t)).abs());
        tested += 1;
    }
    outcome(worst <= 1e-6, format!("{tested} ordinates, max |ϑ - π(N-1) - g| = {worst:.2e} (tol 1e-6)"))
}

fn monotonicity() -> Outcome {
    let root = theta::find_theta_root().unwrap();
    let monotone = theta::check_monotone_g(root + 1e-6, 1000.0, 0.01);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let worst = (0..1000).map(|_| theta::g_double_prime(rng.gen_range(0.0..1000.0))).fold(f64::NEG_INFINITY, f64::max);
    outcome(monotone && worst < 0.0, format!("g' < 0 on (Θ, 1000]: {monotone}; max g'' over 1000 samples = {worst:.3e}"))
}

fn cached_scan(cell: f64) -> &'static [IntersectionPair] {
    use std::sync::OnceLock;
    static COARSE: OnceLock<Vec<IntersectionPair>> = OnceLock::new();
    static FINE: OnceLock<Vec<IntersectionPair>> = OnceLock::new();
    let slot = if cell == 0.05 { &COARSE } else { &FINE };
    slot.get_or_init(|| selfcross::find_intersections(0.0, 500.0, &EvalConfig::default(), cell).unwrap())
}

fn matched(p: &IntersectionPair, set: &[IntersectionPair]) -> bool {
    let i = set.partition_point(|q| q.a < p.a - 1e-8);
    set[i..].iter().take_while(|q| q.a <= p.a + 1e-8).any(|q| (q.b - p.b).abs() <= 1e-8)
}

fn intersections() -> Outcome {
    let coarse = cached_scan(0.05);
    let fine = cached_scan(0.025);
    let worst = coarse.iter().map(|p| p.residual).fold(0.0, f64::max);
    let h = selfcross::multiplicity_histogram(coarse, selfcross::CLUSTER_TOL);
    let zero_count = h.zero_value.as_ref().map_or(0, |z| z.count);
    let lost = coarse.iter().filter(|p| !matched(p, fine)).count();
    let gained = fine.iter().filter(|p| !matched(p, coarse)).count();
    let allowed = 2.max(coarse.len() / 100);
    let passed = !coarse.is_empty() && worst <= 1e-10 && h.flagged == 0 && lost + gained <= allowed;
    outcome(
        passed,
        format!(
            "{} pairs ({} off the origin, {} zeros), max residual {worst:.1e}, {} values with ≥3 preimages; \
             halving the cell: {lost} lost, {gained} gained (allowed {allowed})",
            coarse.len(),
            coarse.iter().filter(|p| p.z.norm() > selfcross::CLUSTER_TOL).count(),
            zero_count,
            h.flagged
        ),
    )
}

/// Finitely many pairs per window, each an isolated transversal solution:
/// distinct pairs are separated, the Jacobian of (a, b) ↦ f(a) - f(b) is
/// nonsingular, and perturbed seeds return to the same pair.
fn isolation() -> Outcome {
    let pairs = cached_scan(0.05);
    let cfg = EvalConfig::certified();
    let mut min_sep = f64::INFINITY;
    for (i, p) in pairs.iter().enumerate() {
        for q in pairs[i + 1..].iter().take_while(|q| q.a - p.a < 1e-3) {
            min_sep = min_sep.min((q.a - p.a).hypot(q.b - p.b));
        }
    }
    let nonzero: Vec<&IntersectionPair> = pairs.iter().filter(|p| p.z.norm() > selfcross::CLUSTER_TOL).collect();
    let mut min_det = f64::INFINITY;
    for p in &nonzero {
        let da = zeta::zeta_prime_critical(p.a, &cfg).unwrap().value;
        let db = zeta::zeta_prime_critical(p.b, &cfg).unwrap().value;
        // |det J| = |Im(conj(f'(a)) f'(b))| = |f'(a)||f'(b)| |sin(angle)|
        min_det = min_det.min((da.conj() * db).im.abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut returned = 0;
    let trials = 100.min(nonzero.len());
    for _ in 0..trials {
        let p = nonzero[rng.gen_range(0..nonzero.len())];
        let (da, db) = (rng.gen_range(-1e-3..1e-3), rng.gen_range(-1e-3..1e-3));
        if let Ok(q) = selfcross::refine_pair(p.a + da, p.b + db, &cfg) {
            if (q.a - p.a).abs() < 1e-8 && (q.b - p.b).abs() < 1e-8 {
                returned += 1;
            }
        }
    }
    let passed = !pairs.is_empty() && min_sep > 1e-6 && min_det > 1e-8 && returned == trials;
    outcome(
        passed,
        format!(
            "{} pairs in [0, 500]; min separation {min_sep:.2e}; min |det J| over {} crossings off the origin {min_det:.2e}; \
             {returned}/{trials} perturbed seeds return",
            pairs.len(),
            nonzero.len()
        ),
    )
}

// ---- series oracle ----

const TRUNC: usize = 32;
const ORACLE_TOL: f64 = 1e-4;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn series(coeffs: Vec<GaussRational>) -> PowerSeries {
    let mut c = coeffs;
    c.resize(TRUNC + 1, GaussRational::zero());
    PowerSeries::new(c)
}

fn random_gauss(rng: &mut ChaCha8Rng, nonzero: bool) -> GaussRational {
    loop {
        let re = q(rng.gen_range(-6..=6), 2);
        let im = q(rng.gen_range(-6..=6), 2);
        let z = GaussRational::new(re, im);
        if !nonzero || !z.is_zero() {
            return z;
        }
    }
}

/// Polynomial with valuation `m`, four further random terms, and leading
/// coefficient `lead` if given.
fn random_curve(rng: &mut ChaCha8Rng, m: usize, lead: Option<GaussRational>) -> PowerSeries {
    let mut c = vec![GaussRational::zero(); m + 5];
    c[m] = lead.unwrap_or_else(|| random_gauss(rng, true));
    for coeff in c.iter_mut().skip(m + 1) {
        *coeff = random_gauss(rng, false);
    }
    series(c)
}

/// Real reparametrization K(z) = k1 (z + c2 z^2 + c3 z^3) with |c2|, |c3| ≤ 1/32,
/// so K' > 0 on the sampled range [-2, 2] and K covers [-1/2, 1/2].
fn random_reparam(rng: &mut ChaCha8Rng) -> PowerSeries {
    let k1 = [q(1, 2), q(1, 1), q(3, 2), q(2, 1)][rng.gen_range(0..4)].clone();
    let k1 = if rng.gen_bool(0.5) { -k1 } else { k1 };
    let c2 = q(rng.gen_range(-2..=2), 64);
    let c3 = q(rng.gen_range(-2..=2), 64);
    series(vec![
        GaussRational::zero(),
        GaussRational::real(k1.clone()),
        GaussRational::real(&k1 * c2),
        GaussRational::real(k1 * c3),
    ])
}

fn valuation(s: &PowerSeries) -> usize {
    s.coeffs().iter().position(|c| !c.is_zero()).unwrap()
}

fn sampled(s: &PowerSeries) -> SampledCurve {
    // Geometric in |t| from 2^-16 to 2, 2000 points per octave, both signs.
    let per_octave = 2000;
    let n = 17 * per_octave;
    let pos: Vec<f64> = (0..=n).map(|i| 2f64.powf(-16.0 + i as f64 / per_octave as f64)).collect();
    let t: Vec<f64> = pos.iter().rev().map(|x| -x).chain(pos.iter().copied()).collect();
    let c = s.to_c64();
    let z = t.iter().map(|&x| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * x + a)).collect();
    SampledCurve::new(t, z).unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum PairType {
    Sharing,
    NearMiss,
    Generic,
    Parity,
}

fn random_pair(rng: &mut ChaCha8Rng, kind: PairType) -> (PowerSeries, PowerSeries) {
    match kind {
        PairType::Sharing => {
            let m = rng.gen_range(1..=4);
            let f = random_curve(rng, m, None);
            let g = f.compose(&random_reparam(rng)).unwrap();
            (f, g)
        }
        PairType::NearMiss => {
            let m = rng.gen_range(1..=4);
            let f = random_curve(rng, m, None);
            let mut g = f.compose(&random_reparam(rng)).unwrap();
            // A normal displacement i·a_m·ε·z^j, invisible to leading order.
            let j = m + rng.gen_range(1..=2);
            let eps = GaussRational::new(q(0, 1), q(1, 4));
            let bump = f.coeffs()[m].mul(&eps);
            let cj = g.coeffs()[j].add(&bump);
            g.set_coeff(j, cj);
            (f, g)
        }
        PairType::Generic => {
            let (m, n) = [(1, 1), (2, 2), (3, 3), (4, 4), (1, 3), (3, 1)][rng.gen_range(0..6)];
            let f = random_curve(rng, m, None);
            // Half the time align the leading coefficients so the first
            // term agrees.
            let lead = (m == n && rng.gen_bool(0.5)).then(|| f.coeffs()[m].scale(&q(rng.gen_range(1..=4), 2)));
            let g = random_curve(rng, n, lead);
            (f, g)
        }
        PairType::Parity => {
            let (m, n) = [(1, 2), (2, 1), (2, 3), (3, 2), (1, 4), (4, 1), (2, 4), (4, 2), (3, 4), (4, 3)]
                [rng.gen_range(0..10)];
            let f = random_curve(rng, m, None);
            if n == 2 * m && rng.gen_bool(0.5) {
                // G = F(k z^2) traces one side of F's arc.
                let k = series(vec![GaussRational::zero(), GaussRational::zero(), GaussRational::real(q(rng.gen_range(1..=3), 2))]);
                return (f.clone(), f.compose(&k).unwrap());
            }
            (f, random_curve(rng, n, None))
        }
    }
}

fn series_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let kinds = [(PairType::Sharing, 30), (PairType::NearMiss, 25), (PairType::Generic, 25), (PairType::Parity, 20)];
    let opts = ShareOptions { order: 16, precision_bits: 128 };
    let mut mismatches = Vec::new();
    let mut shares = 0;
    let mut oracle_true = 0;
    let mut parity_cases = 0;
    let mut total = 0;
    for (kind, count) in kinds {
        for _ in 0..count {
            total += 1;
            let (f, g) = random_pair(&mut rng, kind);
            let (m, n) = (valuation(&f), valuation(&g));
            assert!(m <= 4 && n <= 4);
            let ell = num_integer::lcm(m, n);
            let parity = (ell / m) % 2 == 0 || (ell / n) % 2 == 0;
            let verdict = match decide_share_with(&f, &g, &opts) {
                Ok(v) => v,
                Err(e) => {
                    mismatches.push(format!("#{total} {kind:?}: error {e}"));
                    continue;
                }
            };
            let bounce = matches!(verdict.kind, ShareKind::BounceBackF | ShareKind::BounceBackG);
            if bounce != parity {
                mismatches.push(format!("#{total} {kind:?} (m={m}, n={n}): verdict {:?}, parity {parity}", verdict.kind));
            }
            if parity {
                parity_cases += 1;
                continue;
            }
            let (fs, gs) = (sampled(&f), sampled(&g));
            let oracle = sample_rough_agreement(&fs, &gs, ORACLE_TOL).unwrap()
                && sample_rough_agreement(&gs, &fs, ORACLE_TOL).unwrap();
            let share = verdict.kind == ShareKind::Share;
            shares += share as usize;
            oracle_true += oracle as usize;
            if share != oracle {
                mismatches.push(format!("#{total} {kind:?} (m={m}, n={n}): verdict {:?}, oracle {oracle}", verdict.kind));
            }
        }
    }
    let detail = format!(
        "{total} pairs: {shares} Share verdicts, oracle agreement on {oracle_true}, {parity_cases} parity cases; {} mismatches{}",
        mismatches.len(),
        if mismatches.is_empty() { String::new() } else { format!(" ({})", mismatches.join("; ")) }
    );
    outcome(mismatches.is_empty() && total == 100, detail)
}

fn loop_domain() -> Outcome {
    let two_pi = 2.0 * PI;
    let c = SampledCurve::from_fn_including(circle, -10.0, 10.0, 400_000, &[0.0, two_pi]).unwrap();
    let rc = fundamental_domain(&c, 0.0, two_pi, 1e-9).unwrap();
    let w = SampledCurve::from_fn_including(wobbly_circle, -10.0, 10.0, 200_000, &[0.0, two_pi]).unwrap();
    let rw = fundamental_domain(&w, 0.0, two_pi, 1e-6).unwrap();
    let ok = |r: &zsc_core::loops::FundamentalDomainReport| r.passed && r.every_sample_represented && r.distinct_inequivalent;
    outcome(
        ok(&rc) && ok(&rw),
        format!(
            "circle: passed {} (Hausdorff {:.1e}, tol 1e-9); wobbly circle: passed {} (Hausdorff {:.1e}, tol 1e-6)",
            rc.passed, rc.hausdorff, rw.passed, rw.hausdorff
        ),
    )
}

fn cross_method() -> Outcome {
    let em = EvalConfig::certified();
    let rs = EvalConfig { rs_switch_t: 30.0, ..EvalConfig::default() };
    let mut worst_ratio: f64 = 0.0;
    let mut worst_diff: f64 = 0.0;
    let mut methods_ok = true;
    for i in 0..500 {
        let t = 40.0 + 20.0 * i as f64 / 499.0;
        let a = zeta_critical(t, &em).unwrap();
        let b = zeta_critical(t, &rs).unwrap();
        methods_ok &= a.method == Method::EulerMaclaurin && b.method == Method::RiemannSiegel;
        let diff = (a.value - b.value).norm();
        worst_diff = worst_diff.max(diff);
        worst_ratio = worst_ratio.max(diff / (a.err + b.err));
    }
    outcome(
        methods_ok && worst_ratio <= 1.0,
        format!("500 points on [40, 60]: max |EM - RS| = {worst_diff:.2e}, max ratio to combined error bound {worst_ratio:.3}"),
    )
}
