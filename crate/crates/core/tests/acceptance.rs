//! Acceptance battery: one test per criterion, each printing a single
//! pass/fail line. Run with `--nocapture` to see the lines.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use newton_lct::corpus::corpus;
use newton_lct::exponent::ExponentVector;
use newton_lct::kiselman::{demailly_sequence, kiselman_number, p102_battery};
use newton_lct::lct::{jumping, lct, lct_dual};
use newton_lct::rational::{rat, Extended, Rational};
use newton_lct::sequences::{arn_sandwich_check, controlled_growth_check, v_of_graded, GradedSequence};
use newton_lct::valuation::MonomialValuation;
use newton_lct::volume::{default_r_grid, slope_fit, VolumeMethod};
use newton_lct::witness::self_computation_test;
use newton_lct::MonomialIdeal;

fn report(n: u32, name: &str, ok: bool) {
    println!("criterion {n} ({name}): {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} ({name}) failed");
}

fn random_ideal(rng: &mut ChaCha8Rng, dim: usize, max_gens: usize, max_exp: i64) -> MonomialIdeal {
    let gens = rng.gen_range(1..=max_gens);
    let rows: Vec<Vec<i64>> = (0..gens)
        .map(|_| loop {
            let r: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..=max_exp)).collect();
            if r.iter().any(|&x| x > 0) {
                break r;
            }
        })
        .collect();
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    MonomialIdeal::from_integer_rows(dim, &refs).unwrap()
}

fn sample_valuations(rng: &mut ChaCha8Rng, dim: usize, count: usize) -> Vec<MonomialValuation> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let w: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..4)).collect();
        if let Ok(v) = MonomialValuation::from_integers(&w) {
            out.push(v);
        }
    }
    out
}

/// Criterion-1 corpus: 500 random monomial ideals, dims 1-4, <= 8
/// generators, exponents <= 10, fixed seed.
fn criterion1_corpus() -> Vec<MonomialIdeal> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..500)
        .map(|i| random_ideal(&mut rng, 1 + (i % 4), 8, 10))
        .collect()
}

#[test]
fn criterion_01_lp_duality_oracle() {
    let start = Instant::now();
    let ok = criterion1_corpus().iter().all(|a| {
        let primal = lct(a).unwrap().value;
        let dual = lct_dual(a).unwrap();
        primal == dual
    });
    let in_time = start.elapsed().as_secs_f64() < 30.0;
    report(1, "lp duality oracle on 500 random ideals", ok && in_time);
}

/// Brute-force minimum of sum(alpha) over the grid alpha in [0,1]^n with
/// denominators 60, subject to <u, alpha> >= 1 for every generator u.
/// Integer arithmetic: alpha_i = p_i/60, constraints sum(u_i p_i) >= 60.
fn grid_min_sum(dim: usize, gens: &[Vec<i64>]) -> Rational {
    let mut best: i64 = 60 * dim as i64; // alpha = (1,...,1) is feasible here
    let mut p = vec![0i64; dim];
    loop {
        let sum: i64 = p.iter().sum();
        if sum < best {
            let feasible = gens
                .iter()
                .all(|u| u.iter().zip(&p).map(|(a, b)| a * b).sum::<i64>() >= 60);
            if feasible {
                best = sum;
            }
        }
        // odometer over {0,...,60}^dim
        let mut k = 0;
        loop {
            if k == dim {
                return Rational::new(best, 60);
            }
            p[k] += 1;
            if p[k] <= 60 {
                break;
            }
            p[k] = 0;
            k += 1;
        }
    }
}

fn degree_monomials(dim: usize, k: i64) -> Vec<Vec<i64>> {
    if dim == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for first in 0..=k {
        for mut rest in degree_monomials(dim - 1, k - first) {
            let mut row = vec![first];
            row.append(&mut rest);
            out.push(row);
        }
    }
    out
}

#[test]
fn criterion_02_closed_form_thresholds() {
    let mut ok = true;
    for a in 1..=6i64 {
        for b in 1..=6i64 {
            let ideal = MonomialIdeal::from_integer_rows(2, &[&[a, 0], &[0, b]]).unwrap();
            let expected = rat(1, a) + rat(1, b);
            let via_lp = lct(&ideal).unwrap().value;
            let via_grid = grid_min_sum(2, &[vec![a, 0], vec![0, b]]);
            ok &= via_lp == Extended::finite(expected.clone()) && via_grid == expected;
        }
    }
    for n in 1..=4usize {
        for k in 1..=5i64 {
            let gens = degree_monomials(n, k);
            let refs: Vec<&[i64]> = gens.iter().map(Vec::as_slice).collect();
            let ideal = MonomialIdeal::from_integer_rows(n, &refs).unwrap();
            let expected = rat(n as i64, k);
            let via_lp = lct(&ideal).unwrap().value;
            let via_grid = grid_min_sum(n, &gens);
            ok &= via_lp == Extended::finite(expected.clone()) && via_grid == expected;
        }
    }
    report(2, "closed-form thresholds with grid oracle", ok);
}

#[test]
fn criterion_03_jumping_consistency() {
    let mut ok = criterion1_corpus().iter().all(|a| {
        let unit = MonomialIdeal::unit(a.dim());
        jumping(a, &unit).unwrap().value == lct(a).unwrap().value
    });
    let a = MonomialIdeal::from_integer_rows(2, &[&[1, 0], &[0, 1]]).unwrap();
    let q = MonomialIdeal::from_integer_rows(2, &[&[1, 0]]).unwrap();
    ok &= jumping(&a, &q).unwrap().value == Extended::finite(rat(3, 1));
    report(3, "jumping numbers extend lct", ok);
}

#[test]
fn criterion_04_fekete_convergence() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let j_max = 64u64;
    let mut ok = true;
    for _ in 0..20 {
        let dim = rng.gen_range(2..=3);
        let beta: Vec<i64> = (0..dim).map(|_| rng.gen_range(1..=5)).collect();
        let seq = GradedSequence::valuation_family(
            ExponentVector::from_integers(&beta).unwrap(),
            Rational::one(),
        )
        .unwrap();
        let v = &sample_valuations(&mut rng, dim, 1)[0];
        let bounds = v_of_graded(v, &seq, j_max).unwrap();
        let exact = bounds.exact.clone().unwrap();
        let max_w = v
            .weights()
            .entries()
            .iter()
            .cloned()
            .reduce(Rational::max)
            .unwrap();
        let slack = rat(2, 1) * max_w / Rational::from_integer(j_max as i64);
        ok &= bounds.upper >= exact && &bounds.upper - &exact <= slack;
    }
    report(4, "fekete convergence rate for valuation families", ok);
}

#[test]
fn criterion_05_controlled_growth_and_sandwich() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ok = true;
    for entry in corpus() {
        let dim = entry.phi.dim();
        let seq = demailly_sequence(&entry.phi).unwrap();
        let vals = sample_valuations(&mut rng, dim, 20);
        let growth = controlled_growth_check(&seq, &vals, 16).unwrap();
        let sandwich = arn_sandwich_check(&seq, &MonomialIdeal::unit(dim), 16).unwrap();
        ok &= growth.passed() && sandwich.passed();
    }
    report(5, "controlled growth and arnold sandwich over corpus", ok);
}

#[test]
fn criterion_06_witness_self_computation() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut ok = true;
    for _ in 0..25 {
        let dim = rng.gen_range(1..=4);
        let beta = loop {
            let w: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..=6)).collect();
            if let Ok(v) = MonomialValuation::from_integers(&w) {
                break v;
            }
        };
        ok &= self_computation_test(&beta).unwrap().passed();
    }
    report(6, "witness self-computation on random weights", ok);
}

#[test]
fn criterion_07_identity_battery_on_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut ok = true;
    for entry in corpus() {
        let dim = entry.phi.dim();
        let vals = sample_valuations(&mut rng, dim, 8);
        let r = p102_battery(&entry.phi, &MonomialIdeal::unit(dim), &vals, 12).unwrap();
        ok &= r.passed();
    }
    report(7, "exponent/limit identity battery on corpus", ok);
}

#[test]
fn criterion_08_kiselman_limit_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let entries = corpus();
    let mut ok = true;
    for _ in 0..100 {
        let entry = &entries[rng.gen_range(0..entries.len())];
        let dim = entry.phi.dim();
        let alpha = loop {
            let w: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..=5)).collect();
            if let Ok(v) = MonomialValuation::from_integers(&w) {
                break v;
            }
        };
        let e = kiselman_number(&entry.phi, &alpha).unwrap();
        ok &= (e.direct_value.to_f64() - e.limit_estimate).abs() <= 1e-6;
    }
    report(8, "kiselman deep-sample limit agreement", ok);
}

#[test]
fn criterion_09_volume_slope() {
    let start = Instant::now();
    let threads = std::thread::available_parallelism().map_or(1, |p| p.get());
    let grid = default_r_grid();
    let mut ok = true;
    for entry in corpus() {
        let dim = entry.phi.dim();
        let unit = MonomialIdeal::unit(dim);
        let method = if entry.quadrature_ready {
            VolumeMethod::Quadrature
        } else if entry.monte_carlo_ready && dim == 3 {
            VolumeMethod::MonteCarlo { samples: 10_000_000, seed: 0 }
        } else {
            continue;
        };
        let p = slope_fit(&entry.phi, &unit, 0.5, &grid, &method, None, threads).unwrap();
        let in_band = (1.85..=2.15).contains(&p.slope);
        // the same fit at lambda/2 must sit at a strictly larger slope
        // (halving the normalization doubles the decay rate)
        let half = &p.lambda * &rat(1, 2);
        let ph = slope_fit(&entry.phi, &unit, 0.5, &grid, &method, Some(half), threads).unwrap();
        let separated = ph.slope > p.slope + 0.5;
        if !(in_band && separated) {
            println!(
                "  volume slope failure on {}: slope {} (half-lambda {})",
                entry.name, p.slope, ph.slope
            );
            ok = false;
        }
    }
    let in_time = start.elapsed().as_secs_f64() < 300.0;
    report(9, "volume slope at the critical normalization", ok && in_time);
}

#[test]
fn criterion_10_selftest_determinism() {
    let bin = env!("CARGO_BIN_EXE_newton-lct");
    let run = || {
        let out = std::process::Command::new(bin)
            .arg("selftest")
            .output()
            .expect("selftest runs");
        assert!(out.status.success(), "selftest exited nonzero");
        out.stdout
    };
    let first = run();
    let second = run();
    report(10, "byte-identical selftest documents", first == second);
}
