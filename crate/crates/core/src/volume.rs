//! Volume asymptotics of twisted sublevel sets of toric psh functions:
//! the exponent-2 lower bound probed numerically.
//!
//! For phi with pieces (c_i, d_i), q with generators w_k, lambda > 0 and
//! a polydisc of radius delta, the measured quantity is
//!   Vol(r) = (2 pi)^n * integral of e^{2 sum(t)} over
//!            T(r) = { t <= log(delta)*1 :
//!                     lambda * max_i(<c_i,t>+d_i) - max_k <w_k,t> < log r }.
//! The angular factor integrates out exactly; only the log-radius region
//! is integrated. Dims 1-2 use deterministic quadrature (dim 1 is exact
//! piecewise integration); dims up to 4 use seeded Monte Carlo.
//!
//! Monte Carlo design: substituting x = log(delta)*1 - t >= 0 and
//! splitting x = s*u with u on the probability simplex, each stratum
//! (choice of k) constrains s to a closed-form interval along the ray,
//! so the union over strata is computed exactly per sampled direction
//! and only the direction u is random. The s-integral of s^{n-1} e^{-2s}
//! is closed-form. This keeps every sample unbiased for the exact union
//! and the variance growth as r -> 0 merely polylogarithmic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CoreError, CoreResult};
use crate::ideal::MonomialIdeal;
use crate::kiselman::{singularity_exponent, ToricPsh};
use crate::rational::{Extended, Rational};

const TAU: f64 = 2.0 * std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum VolumeMethod {
    Quadrature,
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VolumeEstimate {
    pub value: f64,
    /// standard error for Monte Carlo estimates; None for quadrature
    pub std_error: Option<f64>,
}

/// integral of e^{2t} dt over (a, b], a may be -inf
fn int_e2t(a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let hi = (2.0 * b).exp();
    let lo = if a.is_finite() { (2.0 * a).exp() } else { 0.0 };
    (hi - lo) / 2.0
}

/// integral of e^{2t} dt over { t <= upper : max_i(p_i.0 t + p_i.1)
///                              - max_k(w_k.0 t + w_k.1) < log_r },
/// computed exactly from the piecewise-affine breakpoint structure.
fn sublevel_1d(pieces: &[(f64, f64)], wpieces: &[(f64, f64)], log_r: f64, upper: f64) -> f64 {
    let mut brks: Vec<f64> = Vec::new();
    for list in [pieces, wpieces] {
        for (i, &(a1, b1)) in list.iter().enumerate() {
            for &(a2, b2) in &list[i + 1..] {
                if (a1 - a2).abs() > 1e-13 {
                    let t = (b2 - b1) / (a1 - a2);
                    if t < upper {
                        brks.push(t);
                    }
                }
            }
        }
    }
    brks.sort_by(f64::total_cmp);
    brks.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + a.abs()));
    brks.push(upper);

    let active = |list: &[(f64, f64)], t: f64| -> (f64, f64) {
        let mut best = list[0];
        for &(a, b) in &list[1..] {
            if a * t + b > best.0 * t + best.1 {
                best = (a, b);
            }
        }
        best
    };

    let mut total = 0.0;
    let mut left = f64::NEG_INFINITY;
    for &right in &brks {
        if right <= left {
            continue;
        }
        let rep = if left.is_finite() {
            0.5 * (left + right)
        } else {
            right - 1.0 - right.abs()
        };
        let (pa, pb) = active(pieces, rep);
        let (wa, wb) = active(wpieces, rep);
        let slope = pa - wa;
        let icpt = pb - wb;
        total += if slope.abs() < 1e-13 {
            if icpt < log_r {
                int_e2t(left, right)
            } else {
                0.0
            }
        } else if slope > 0.0 {
            int_e2t(left, right.min((log_r - icpt) / slope))
        } else {
            int_e2t(left.max((log_r - icpt) / slope), right)
        };
        left = right;
    }
    total
}

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    debug_assert!(panels % 2 == 0 && panels >= 2);
    let h = (b - a) / panels as f64;
    let mut sum = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * i as f64);
    }
    sum * h / 3.0
}

fn adaptive_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let refined = left + right;
    if depth == 0 || (refined - whole).abs() <= 15.0 * tol {
        refined + (refined - whole) / 15.0
    } else {
        adaptive_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + adaptive_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Adaptive Simpson over [a, b], seeded on `seeds` initial panels so
/// narrow features (the integrand is only piecewise smooth) are not
/// missed, refining each panel until the local error estimate is below
/// its share of `tol`.
fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, seeds: usize, tol: f64) -> f64 {
    let h = (b - a) / seeds as f64;
    let mut total = 0.0;
    for i in 0..seeds {
        let (x0, x1) = (a + h * i as f64, a + h * (i + 1) as f64);
        let m = 0.5 * (x0 + x1);
        let (f0, fm, f1) = (f(x0), f(m), f(x1));
        let whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += adaptive_step(&f, x0, x1, f0, fm, f1, whole, tol / seeds as f64, 48);
    }
    total
}

struct Setup {
    dim: usize,
    /// pieces scaled by lambda: (lambda*c_i, lambda*d_i)
    lam_pieces: Vec<(Vec<f64>, f64)>,
    /// generators of q
    ws: Vec<Vec<f64>>,
    log_r: f64,
    log_delta: f64,
}

fn setup(
    phi: &ToricPsh,
    q: &MonomialIdeal,
    lambda: &Rational,
    r: f64,
    delta: f64,
) -> CoreResult<Setup> {
    let n = phi.dim();
    if q.dim() != n {
        return Err(CoreError::DimensionMismatch(n, q.dim()));
    }
    if q.is_zero() {
        return Err(CoreError::ZeroIdeal);
    }
    if n > 4 {
        return Err(CoreError::Unsupported(
            "volume experiment limited to dimension <= 4".into(),
        ));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(CoreError::InvalidInput("radius r must lie in (0,1)".into()));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(CoreError::InvalidInput(
            "polydisc radius delta must lie in (0,1]".into(),
        ));
    }
    if !lambda.is_positive() {
        return Err(CoreError::InvalidInput("lambda must be positive".into()));
    }
    let lf = lambda.to_f64();
    Ok(Setup {
        dim: n,
        lam_pieces: phi
            .pieces()
            .iter()
            .map(|(c, d)| {
                (
                    c.to_f64s().iter().map(|x| lf * x).collect(),
                    lf * d.to_f64(),
                )
            })
            .collect(),
        ws: q.generators().iter().map(|w| w.to_f64s()).collect(),
        log_r: r.ln(),
        log_delta: delta.ln(),
    })
}

/// Vol(r) for dims 1-2 by deterministic quadrature (exact piecewise
/// integration in dim 1; Simpson over the outer coordinate in dim 2 with
/// the inner coordinate integrated exactly).
fn quadrature_volume(s: &Setup) -> f64 {
    match s.dim {
        1 => {
            let pieces: Vec<(f64, f64)> =
                s.lam_pieces.iter().map(|(c, d)| (c[0], *d)).collect();
            let wp: Vec<(f64, f64)> = s.ws.iter().map(|w| (w[0], 0.0)).collect();
            TAU * sublevel_1d(&pieces, &wp, s.log_r, s.log_delta)
        }
        2 => {
            let l = s.log_delta;
            let depth = 3.0 * s.log_r.abs() + 40.0;
            let inner = |t1: f64| {
                let pieces: Vec<(f64, f64)> = s
                    .lam_pieces
                    .iter()
                    .map(|(c, d)| (c[1], c[0] * t1 + d))
                    .collect();
                let wp: Vec<(f64, f64)> = s.ws.iter().map(|w| (w[1], w[0] * t1)).collect();
                (2.0 * t1).exp() * sublevel_1d(&pieces, &wp, s.log_r, l)
            };
            // rough scale first, then refine; the inner integral is only
            // piecewise smooth in t1 (jumps when its feasible set empties)
            let rough = simpson(&inner, l - depth, l, 2048).abs();
            let tol = 1e-9 * rough.max(f64::MIN_POSITIVE);
            TAU * TAU * adaptive_simpson(inner, l - depth, l, 256, tol)
        }
        _ => unreachable!("quadrature limited to dims 1-2"),
    }
}

/// antiderivative A(s) with d/ds[-A] = s^m e^{-2s}: the tail integral
/// over (s, inf) is A(s); A(inf) = 0
fn tail_sm_e2s(m: usize, s: f64) -> f64 {
    // integral_s^inf x^m e^{-2x} dx = e^{-2s} * P_m(s)
    // P_0 = 1/2; P_m = s^m/2 + (m/2) P_{m-1}
    let mut p = 0.5;
    for k in 1..=m {
        p = s.powi(k as i32) / 2.0 + (k as f64) / 2.0 * p;
    }
    (-2.0 * s).exp() * p
}

/// In x-coordinates (x = log(delta)*1 - t), stratum k is
/// { x >= 0 : <w_k - lambda c_i, x> < rhs_{ki} for all i }. Along the
/// ray x = s*u the feasible s form an interval.
struct Stratum {
    rows: Vec<(Vec<f64>, f64)>,
}

fn strata(s: &Setup) -> Vec<Stratum> {
    let l = s.log_delta;
    s.ws
        .iter()
        .map(|w| {
            let wsum: f64 = w.iter().sum();
            let rows = s
                .lam_pieces
                .iter()
                .map(|(c, d)| {
                    let csum: f64 = c.iter().sum();
                    let coeffs: Vec<f64> =
                        w.iter().zip(c).map(|(wj, cj)| wj - cj).collect();
                    let rhs = s.log_r - d - l * (csum - wsum);
                    (coeffs, rhs)
                })
                .collect();
            Stratum { rows }
        })
        .collect()
}

impl Stratum {
    /// feasible s-interval along direction u, intersected with [0, inf)
    fn ray_interval(&self, u: &[f64]) -> Option<(f64, f64)> {
        let mut lo = 0.0f64;
        let mut hi = f64::INFINITY;
        for (coeffs, rhs) in &self.rows {
            let a: f64 = coeffs.iter().zip(u).map(|(c, uj)| c * uj).sum();
            if a.abs() < 1e-15 {
                if *rhs <= 0.0 {
                    return None;
                }
            } else if a > 0.0 {
                hi = hi.min(rhs / a);
            } else {
                lo = lo.max(rhs / a);
            }
        }
        if lo < hi {
            Some((lo, hi))
        } else {
            None
        }
    }
}

fn merge_intervals(mut iv: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(iv.len());
    for (lo, hi) in iv {
        match out.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|k| k as f64).product::<f64>().max(1.0)
}

/// Seeded Monte Carlo over ray directions; the radial integral is exact
/// per sample. Work is split into 64 fixed chunks with independent
/// deterministic streams combined in fixed order, so the result does not
/// depend on how chunks are scheduled.
fn monte_carlo_volume(s: &Setup, samples: u64, seed: u64, threads: usize) -> VolumeEstimate {
    let n = s.dim;
    let strat = strata(s);
    let chunks: u64 = 64;
    let per_chunk = samples.div_ceil(chunks);
    let total = per_chunk * chunks;

    let chunk_sums = |chunk: u64| -> (f64, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(chunk + 1)),
        );
        let mut sum = 0.0f64;
        let mut sumsq = 0.0f64;
        for _ in 0..per_chunk {
            // u ~ uniform on the simplex (normalized unit exponentials)
            let mut e: Vec<f64> = (0..n)
                .map(|_| -(1.0 - rng.gen::<f64>()).ln())
                .collect();
            let tot: f64 = e.iter().sum();
            for v in &mut e {
                *v /= tot;
            }
            let ivs: Vec<(f64, f64)> = strat
                .iter()
                .filter_map(|k| k.ray_interval(&e))
                .collect();
            let mut val = 0.0;
            for (lo, hi) in merge_intervals(ivs) {
                val += tail_sm_e2s(n - 1, lo)
                    - if hi.is_finite() {
                        tail_sm_e2s(n - 1, hi)
                    } else {
                        0.0
                    };
            }
            sum += val;
            sumsq += val * val;
        }
        (sum, sumsq)
    };

    let (sum, sumsq) = if threads > 1 {
        let results = std::sync::Mutex::new(vec![(0.0, 0.0); chunks as usize]);
        std::thread::scope(|scope| {
            for t in 0..threads {
                let results = &results;
                let chunk_sums = &chunk_sums;
                scope.spawn(move || {
                    let mut c = t as u64;
                    while c < chunks {
                        let r = chunk_sums(c);
                        results.lock().unwrap()[c as usize] = r;
                        c += threads as u64;
                    }
                });
            }
        });
        let results = results.into_inner().unwrap();
        results
            .iter()
            .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y))
    } else {
        (0..chunks)
            .map(chunk_sums)
            .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y))
    };

    let nn = total as f64;
    let mean = sum / nn;
    let var = ((sumsq / nn) - mean * mean).max(0.0) / nn;
    let scale = TAU.powi(n as i32) * (2.0 * (n as f64) * s.log_delta).exp()
        / factorial(n - 1);
    VolumeEstimate {
        value: scale * mean,
        std_error: Some(scale * var.sqrt()),
    }
}

pub fn sublevel_volume(
    phi: &ToricPsh,
    q: &MonomialIdeal,
    lambda: &Rational,
    r: f64,
    delta: f64,
    method: &VolumeMethod,
    threads: usize,
) -> CoreResult<VolumeEstimate> {
    let s = setup(phi, q, lambda, r, delta)?;
    match method {
        VolumeMethod::Quadrature => {
            if s.dim > 2 {
                return Err(CoreError::Unsupported(
                    "deterministic quadrature limited to dims 1-2; use Monte Carlo".into(),
                ));
            }
            Ok(VolumeEstimate {
                value: quadrature_volume(&s),
                std_error: None,
            })
        }
        VolumeMethod::MonteCarlo { samples, seed } => {
            if s.dim == 1 {
                // dim 1 is exactly integrable; no reason to sample
                return Ok(VolumeEstimate {
                    value: quadrature_volume(&s),
                    std_error: None,
                });
            }
            Ok(monte_carlo_volume(&s, *samples, *seed, threads.max(1)))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VolumeProfile {
    pub lambda: Rational,
    pub delta: f64,
    pub method: VolumeMethod,
    pub rs: Vec<f64>,
    pub volumes: Vec<f64>,
    pub std_errors: Vec<Option<f64>>,
    pub slope: f64,
    pub slope_std_error: f64,
}

impl VolumeProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,volume,log_r,log_volume\n");
        for (r, v) in self.rs.iter().zip(&self.volumes) {
            out.push_str(&format!("{r},{v},{},{}\n", r.ln(), v.ln()));
        }
        out
    }
}

/// 20 logarithmic points in [1e-6, 1e-2], decreasing.
pub fn default_r_grid() -> Vec<f64> {
    let (hi, lo) = (1e-2f64.ln(), 1e-6f64.ln());
    (0..20)
        .map(|i| (hi + (lo - hi) * i as f64 / 19.0).exp())
        .collect()
}

/// Least-squares slope of log Vol against log r.
///
/// With no override, lambda is pinned to the singularity exponent of
/// (phi, q) — the critical normalization where the expected slope is 2.
/// An override runs the same fit as a diagnostic at a different
/// normalization.
pub fn slope_fit(
    phi: &ToricPsh,
    q: &MonomialIdeal,
    delta: f64,
    rs: &[f64],
    method: &VolumeMethod,
    lambda_override: Option<Rational>,
    threads: usize,
) -> CoreResult<VolumeProfile> {
    let lambda = match lambda_override {
        Some(l) => l,
        None => match singularity_exponent(phi, q)?.value {
            Extended::Finite(l) if l.is_positive() => l,
            other => {
                return Err(CoreError::InvalidInput(format!(
                    "singularity exponent {other} is not a positive rational; \
                     supply an explicit lambda"
                )))
            }
        },
    };
    if rs.len() < 2 {
        return Err(CoreError::InvalidInput("degenerate r-grid".into()));
    }
    let mut volumes = Vec::with_capacity(rs.len());
    let mut std_errors = Vec::with_capacity(rs.len());
    for (i, &r) in rs.iter().enumerate() {
        // decorrelate the per-point streams deterministically
        let m = match method {
            VolumeMethod::MonteCarlo { samples, seed } => VolumeMethod::MonteCarlo {
                samples: *samples,
                seed: seed.wrapping_add(1000 * i as u64),
            },
            VolumeMethod::Quadrature => VolumeMethod::Quadrature,
        };
        let est = sublevel_volume(phi, q, &lambda, r, delta, &m, threads)?;
        if !(est.value > 0.0) {
            return Err(CoreError::InvalidInput(format!(
                "vanishing volume at r = {r}; grid too deep for this function"
            )));
        }
        volumes.push(est.value);
        std_errors.push(est.std_error);
    }
    // volumes must not increase as r decreases (up to sampling noise)
    for i in 1..rs.len() {
        let (r0, r1) = (rs[i - 1], rs[i]);
        if r1 < r0 {
            let tol = 3.0
                * (std_errors[i - 1].unwrap_or(0.0) + std_errors[i].unwrap_or(0.0))
                + 1e-9 * volumes[i - 1];
            if volumes[i] > volumes[i - 1] + tol {
                return Err(CoreError::InvalidInput(format!(
                    "volume increased from r={r0} to r={r1}"
                )));
            }
        }
    }
    let xs: Vec<f64> = rs.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = volumes.iter().map(|v| v.ln()).collect();
    let nf = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / nf;
    let ybar = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(CoreError::InvalidInput("degenerate r-grid".into()));
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    let dof = (xs.len().max(3) - 2) as f64;
    let slope_std_error = (ss_res / dof / sxx).sqrt();
    Ok(VolumeProfile {
        lambda,
        delta,
        method: *method,
        rs: rs.to_vec(),
        volumes,
        std_errors,
        slope,
        slope_std_error,
    })
}
