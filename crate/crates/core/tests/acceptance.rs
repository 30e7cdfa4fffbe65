//! Acceptance suite. Prints one `PASS` or `FAIL` line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use oia_core::assignment::{brute_force_assignment, hungarian_rectangular, CostMatrix};
use oia_core::channel::draw_cscg_matrix;
use oia_core::complexity::{psi_max_snr_up, psi_min_inr_up, psi_oia_up, psi_oia_us};
use oia_core::grassmann::{chordal_table, pair_projector_eigs, principal_angles, spread_approx, spread_exact, sum_projectors};
use oia_core::harness::{emit_csv, run_sweep, ExperimentSpec, ResultRow, SweepKind};
use oia_core::schemes::{interference_covariance, post_processor, run_scheme, leakage, sum_rate};
use oia_core::seeding::derive_seed;
use oia_core::{generate_channels, ComplexMatrix, Framework, NetworkConfig, PowerLevel, Scheme, SchemeId, Seed};
use rand::Rng;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn within(elapsed: Duration, limit: u64) -> bool {
    elapsed <= Duration::from_secs(limit)
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut r = rng(101);
    let mut worst = 0.0f64;
    for m in 1..=6 {
        for _ in 0..1000 {
            let a = random_generator(&mut r, 2 * m, m);
            let b = random_generator(&mut r, 2 * m, m);
            let spectrum = jacobi_eigenvalues(&sum_projectors(&[a.clone(), b.clone()]).unwrap());
            // cos^2 of the principal angles: eigenvalues of (A^H B)(A^H B)^H.
            let c = a.basis().adjoint() * b.basis();
            let cos: Vec<f64> = jacobi_eigenvalues(&(&c * c.adjoint())).iter().map(|v| v.clamp(0.0, 1.0).sqrt()).collect();
            let mut expected: Vec<f64> = cos.iter().flat_map(|c| [1.0 + c, 1.0 - c]).collect();
            expected.sort_by(|x, y| y.total_cmp(x));
            let mut from_angles = pair_projector_eigs(&principal_angles(&a, &b).unwrap());
            from_angles.sort_by(|x, y| y.total_cmp(x));
            for ((s, e), f) in spectrum.iter().zip(&expected).zip(&from_angles) {
                worst = worst.max((s - e).abs()).max((s - f).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(worst <= 1e-8 && within(elapsed, 10), format!("max deviation {worst:.2e}, {elapsed:.1?}"))
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let mut r = rng(202);
    let mut violations = 0;
    let mut worst_margin = f64::INFINITY;
    for l in 2..=6 {
        for m in 1..=4 {
            for _ in 0..1000 {
                let list: Vec<_> = (0..l).map(|_| random_generator(&mut r, 2 * m, m)).collect();
                let exact = spread_exact(&list).unwrap().value();
                let approx = spread_approx(&list).unwrap().value();
                let table = chordal_table(&list).unwrap();
                let per_j = table.iter().map(|row| row.iter().sum::<f64>()).fold(f64::INFINITY, f64::min);
                let max_j = table.iter().map(|row| row.iter().sum::<f64>()).fold(f64::NEG_INFINITY, f64::max);
                if exact > approx + 1e-10 || exact > per_j + 1e-10 || exact > max_j + 1e-10 {
                    violations += 1;
                }
                worst_margin = worst_margin.min(per_j - exact);
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        violations == 0 && within(elapsed, 30),
        format!("{violations} violations in 20000 tuples, min slack {worst_margin:.2e}, {elapsed:.1?}"),
    )
}

fn criterion_3() -> Verdict {
    let mut r = rng(303);
    let (mut worst_f, mut worst_leak) = (0.0f64, 0.0f64);
    for m in 1..=6 {
        for l in 2..=6 {
            for _ in 0..20 {
                let base = draw_cscg_matrix(2 * m, m, &mut r);
                let channels: Vec<ComplexMatrix> = (0..l).map(|_| &base * draw_cscg_matrix(m, m, &mut r)).collect();
                let gens: Vec<_> =
                    channels.iter().map(|h| oia_core::grassmann::orthonormalize(h).unwrap()).collect();
                worst_f = worst_f
                    .max(spread_exact(&gens).unwrap().value().abs())
                    .max(spread_approx(&gens).unwrap().value().abs());
                let mut rx = vec![draw_cscg_matrix(2 * m, m, &mut r)];
                rx.extend(channels);
                let b = interference_covariance(&rx, 0);
                let u = post_processor(&b, m).unwrap();
                worst_leak = worst_leak.max(leakage(&u, &b).abs());
            }
        }
    }
    verdict(worst_f <= 1e-10 && worst_leak < 1e-9, format!("max |f| {worst_f:.2e}, max leakage {worst_leak:.2e}"))
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let mut r = rng(404);
    let mut mismatches = 0;
    for _ in 0..500 {
        let k = r.random_range(1..=4);
        let n = r.random_range(k..=8);
        let costs: Vec<Vec<f64>> = (0..n).map(|_| (0..k).map(|_| r.random::<f64>() * 10.0).collect()).collect();
        let c = CostMatrix::from_rows(&costs).unwrap();
        let hungarian = hungarian_rectangular(&c).unwrap();
        let oracle = exhaustive_min(&costs);
        let achieved: f64 = hungarian.pairing.users().iter().enumerate().map(|(col, &row)| costs[row][col]).sum();
        let brute = if n <= 10 && k <= 5 { brute_force_assignment(&c).ok() } else { None };
        if achieved != oracle || brute.map(|b| b.pairing != hungarian.pairing).unwrap_or(false) {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    verdict(mismatches == 0 && within(elapsed, 10), format!("{mismatches} mismatches in 500 instances, {elapsed:.1?}"))
}

fn criterion_5() -> Verdict {
    let mut r = rng(505);
    let mut worst = 0.0f64;
    let mut zero_ok = true;
    for i in 0..200u64 {
        let k = r.random_range(2..=4);
        let m = r.random_range(1..=4);
        let framework = if i % 2 == 0 { Framework::UserPairing } else { Framework::UserSelection };
        let n = k * r.random_range(1..=3);
        let cs = generate_channels(&NetworkConfig::user_pairing(k, m, n).unwrap(), Seed(derive_seed(5, &[i])))
            .unwrap()
            .reframe(framework)
            .unwrap();
        let scheme = Scheme::ALL[(i as usize / 2) % 3];
        let snr = r.random_range(-10.0..30.0);
        let p = PowerLevel::from_snr_db(snr).unwrap();
        let out = run_scheme(SchemeId::new(scheme, framework), &cs, p).unwrap();
        let reference = reference_sum_rate(&cs, &out.pairing, &out.post_processors, p.linear());
        worst = worst.max((out.sum_rate - reference).abs() / reference.abs().max(f64::MIN_POSITIVE));
        let zero = sum_rate(&cs, &out.pairing, &out.post_processors, PowerLevel::new(0.0).unwrap()).unwrap();
        zero_ok &= zero == 0.0;
    }
    verdict(worst <= 1e-9 && zero_ok, format!("max relative gap {worst:.2e}, P=0 exact zero: {zero_ok}"))
}

fn criterion_6() -> Verdict {
    let golden = [
        ("psi_oia_up(3,30,6)", psi_oia_up(3, 30, 6).value(), 174_960),
        ("psi_min_inr_up(3,30,6)", psi_min_inr_up(3, 30, 6).value(), 2_498_040),
        ("psi_max_snr_up(3,30,6)", psi_max_snr_up(3, 30, 6).value(), 2_485_080),
        ("psi_oia_us(3,10,6)", psi_oia_us(3, 10, 6).value(), 138_240),
    ];
    let wrong: Vec<String> =
        golden.iter().filter(|g| g.1 != g.2).map(|g| format!("{} = {} (want {})", g.0, g.1, g.2)).collect();
    let mut dominance_failures = 0;
    for (k, n_r) in [(3u64, 6u64), (4, 12)] {
        for n in k..=200 {
            let oia = psi_oia_up(k, n, n_r).value();
            if oia >= psi_min_inr_up(k, n, n_r).value() || oia >= psi_max_snr_up(k, n, n_r).value() {
                dominance_failures += 1;
            }
        }
    }
    verdict(
        wrong.is_empty() && dominance_failures == 0,
        format!("golden mismatches {wrong:?}, dominance failures {dominance_failures}"),
    )
}

fn mean_of(rows: &[ResultRow], scheme: Scheme, framework: Framework, snr: f64) -> (f64, f64) {
    let row = rows
        .iter()
        .find(|r| r.scheme == scheme && r.framework == framework && r.snr_db == Some(snr))
        .expect("row present");
    (row.mean_sum_rate.unwrap(), row.stderr_sum_rate.unwrap())
}

/// `Some(true)` if `a` exceeds `b` beyond two combined standard errors,
/// `None` for a tie, `Some(false)` for a resolved reversal.
fn compare(a: (f64, f64), b: (f64, f64)) -> Option<bool> {
    let slack = 2.0 * (a.1 * a.1 + b.1 * b.1).sqrt();
    if a.0 - b.0 > slack {
        Some(true)
    } else if b.0 - a.0 > slack {
        Some(false)
    } else {
        None
    }
}

fn describe(label: &str, outcome: Option<bool>) -> String {
    match outcome {
        Some(true) => format!("{label}: resolved"),
        None => format!("{label}: tie"),
        Some(false) => format!("{label}: REVERSED"),
    }
}

fn criterion_7() -> Verdict {
    let start = Instant::now();
    let (k, m, n, trials, seed) = (4, 6, 40, 1000, 7);
    let snrs = [10.0, 20.0];
    let schemes: Vec<SchemeId> = [Framework::UserSelection, Framework::UserPairing]
        .into_iter()
        .flat_map(|f| Scheme::ALL.into_iter().map(move |s| SchemeId::new(s, f)))
        .collect();
    let spec = ExperimentSpec {
        kind: SweepKind::SumRateVsSnr,
        schemes: schemes.clone(),
        transmitters: k,
        antennas: vec![m],
        users: vec![n],
        snr_db: snrs.to_vec(),
        trials,
        seed,
    };
    let rows = run_sweep(&spec).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for (g, &snr) in snrs.iter().enumerate() {
        let p = PowerLevel::from_snr_db(snr).unwrap();
        let mut r = rng(derive_seed(seed, &[g as u64, u64::MAX]));
        let baseline: Vec<f64> = (0..trials as u64)
            .map(|t| {
                let cfg = NetworkConfig::user_pairing(k, m, n).unwrap();
                let cs = generate_channels(&cfg, Seed(derive_seed(seed, &[g as u64, t]))).unwrap();
                random_baseline_rate(&cs, p, &mut r)
            })
            .collect();
        let random = mean_stderr(&baseline);
        let min_inr = mean_of(&rows, Scheme::MinInr, Framework::UserPairing, snr);
        let oia_up = mean_of(&rows, Scheme::Oia, Framework::UserPairing, snr);
        let oia_us = mean_of(&rows, Scheme::Oia, Framework::UserSelection, snr);
        for (label, a, b) in [
            ("MIN-INR-UP >= OIA-UP", min_inr, oia_up),
            ("OIA-UP >= random", oia_up, random),
            ("OIA-UP >= OIA-US", oia_up, oia_us),
        ] {
            let c = compare(a, b);
            ok &= c != Some(false);
            notes.push(format!("{snr} dB {}", describe(label, c)));
        }
    }
    for id in &schemes {
        let low = mean_of(&rows, id.scheme, id.framework, snrs[0]).0;
        let high = mean_of(&rows, id.scheme, id.framework, snrs[1]).0;
        if !(high > low) {
            ok = false;
            notes.push(format!("{id} not increasing ({low} -> {high})"));
        }
    }
    let elapsed = start.elapsed();
    ok &= within(elapsed, 300);
    verdict(ok, format!("{}; {elapsed:.1?}", notes.join("; ")))
}

fn criterion_8() -> Verdict {
    let specs = [
        ExperimentSpec {
            kind: SweepKind::SumRateVsUsers,
            schemes: vec![
                SchemeId::new(Scheme::Oia, Framework::UserSelection),
                SchemeId::new(Scheme::Oia, Framework::UserPairing),
                SchemeId::new(Scheme::MaxSnr, Framework::UserPairing),
            ],
            transmitters: 3,
            antennas: vec![2],
            users: vec![6, 12, 24],
            snr_db: vec![10.0],
            trials: 60,
            seed: 99,
        },
        ExperimentSpec {
            kind: SweepKind::SumRateVsAntennas,
            schemes: vec![SchemeId::new(Scheme::MinInr, Framework::UserPairing)],
            transmitters: 3,
            antennas: vec![1, 2, 3],
            users: vec![9],
            snr_db: vec![0.0, 20.0],
            trials: 30,
            seed: 1,
        },
    ];
    let available = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).max(4);
    let mut identical = true;
    for spec in &specs {
        let render = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let mut out = Vec::new();
            pool.install(|| emit_csv(&run_sweep(spec).unwrap(), &mut out)).unwrap();
            out
        };
        let reference = render(1);
        for threads in [1, 2, 3, available] {
            identical &= render(threads) == reference;
        }
    }
    verdict(identical, format!("worker counts 1, 2, 3, {available}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("1 two-subspace spectrum", criterion_1),
        ("2 spread bound", criterion_2),
        ("3 perfect alignment", criterion_3),
        ("4 assignment optimality", criterion_4),
        ("5 sum-rate dual evaluation", criterion_5),
        ("6 flop model", criterion_6),
        ("7 statistical orderings", criterion_7),
        ("8 determinism", criterion_8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let v = std::panic::catch_unwind(run).unwrap_or_else(|_| verdict(false, "panicked"));
        println!("{} criterion {name}: {}", if v.ok { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.ok);
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
