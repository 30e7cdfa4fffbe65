//! Self-checks that pair each core routine with an independent route to the
//! same quantity.

use num_complex::Complex64;
use rand::Rng;

use crate::assignment::{brute_force_assignment, hungarian_rectangular, CostMatrix};
use crate::channel::{draw_cscg_matrix, generate_channels, NetworkConfig, PowerLevel, Seed};
use crate::complexity::{psi_max_snr_up, psi_min_inr_up, psi_oia_up, psi_oia_us};
use crate::error::Result;
use crate::grassmann::{
    chordal_distance_sq, pair_projector_eigs, orthonormalize, principal_angles, spread_approx, spread_exact, sum_projectors,
    GeneratorMatrix,
};
use crate::linalg::{gram_sum, hermitian_eigs, ComplexMatrix};
use crate::schemes::{interference_covariance, leakage, post_processor, run_scheme, Scheme, SchemeId};
use crate::seeding::{derive_seed, stream};
use crate::Framework;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub checks: Vec<CheckOutcome>,
}

impl ValidationReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().map(|c| c.failed).sum()
    }

    pub fn all_passed(&self) -> bool {
        self.failures() == 0
    }
}

struct Tally {
    name: &'static str,
    passed: usize,
    failed: usize,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self { name, passed: 0, failed: 0 }
    }

    fn record(&mut self, ok: Result<bool>) {
        match ok {
            Ok(true) => self.passed += 1,
            _ => self.failed += 1,
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome { name: self.name, passed: self.passed, failed: self.failed }
    }
}

fn random_generator<R: Rng>(rng: &mut R, m: usize) -> Result<GeneratorMatrix> {
    orthonormalize(&draw_cscg_matrix(2 * m, m, rng))
}

/// Runs every check with `samples` random instances each.
pub fn run_validation(samples: usize, seed: u64) -> ValidationReport {
    let checks = vec![
        two_subspace_spectrum(samples, derive_seed(seed, &[1])),
        spread_bound(samples, derive_seed(seed, &[2])),
        perfect_alignment(samples, derive_seed(seed, &[3])),
        assignment(samples, derive_seed(seed, &[4])),
        sum_rate_dual(samples, derive_seed(seed, &[5])),
        flop_model(),
    ];
    ValidationReport { checks }
}

/// Projector-sum spectrum of two subspaces vs. the principal-angle formula.
fn two_subspace_spectrum(samples: usize, seed: u64) -> CheckOutcome {
    let mut tally = Tally::new("two-subspace-spectrum");
    for m in 1..=6usize {
        let mut rng = stream(seed, &[m as u64]);
        for _ in 0..samples {
            tally.record((|| {
                let a = random_generator(&mut rng, m)?;
                let b = random_generator(&mut rng, m)?;
                let eig = hermitian_eigs(&sum_projectors(&[a.clone(), b.clone()])?)?;
                let closed = pair_projector_eigs(&principal_angles(&a, &b)?);
                Ok(eig.iter().zip(&closed).all(|(x, y)| (x - y).abs() <= 1e-8))
            })());
        }
    }
    tally.finish()
}

/// Exact spread never exceeds the spread around any member.
fn spread_bound(samples: usize, seed: u64) -> CheckOutcome {
    let mut tally = Tally::new("spread-bound");
    for l in 2..=6usize {
        for m in 1..=4usize {
            let mut rng = stream(seed, &[l as u64, m as u64]);
            for _ in 0..samples {
                tally.record((|| {
                    let list = (0..l).map(|_| random_generator(&mut rng, m)).collect::<Result<Vec<_>>>()?;
                    let exact = spread_exact(&list)?.value();
                    let approx = spread_approx(&list)?.value();
                    let mut ok = exact <= approx + 1e-10;
                    for j in 0..l {
                        let mut around_j = 0.0;
                        for h in &list {
                            around_j += chordal_distance_sq(&list[j], h)?;
                        }
                        ok &= exact <= around_j + 1e-10;
                    }
                    Ok(ok)
                })());
            }
        }
    }
    tally.finish()
}

/// Interferers confined to one `M`-dimensional subspace give zero spread and
/// zero leakage.
fn perfect_alignment(samples: usize, seed: u64) -> CheckOutcome {
    let mut tally = Tally::new("perfect-alignment");
    let mut rng = stream(seed, &[]);
    for i in 0..samples {
        let m = 1 + i % 4;
        let k = 3 + i % 3;
        tally.record((|| {
            let base = draw_cscg_matrix(2 * m, m, &mut rng);
            let mut channels = vec![draw_cscg_matrix(2 * m, m, &mut rng)];
            for _ in 1..k {
                channels.push(&base * draw_cscg_matrix(m, m, &mut rng));
            }
            let interferers = channels[1..].iter().map(orthonormalize).collect::<Result<Vec<_>>>()?;
            let exact = spread_exact(&interferers)?.value();
            let approx = spread_approx(&interferers)?.value();
            let b = interference_covariance(&channels, 0);
            let u = post_processor(&b, m)?;
            Ok(exact <= 1e-10 && approx <= 1e-10 && leakage(&u, &b).abs() < 1e-9)
        })());
    }
    tally.finish()
}

fn assignment(samples: usize, seed: u64) -> CheckOutcome {
    let mut tally = Tally::new("assignment-vs-brute-force");
    let mut rng = stream(seed, &[]);
    for _ in 0..samples {
        let k = rng.random_range(1..=4usize);
        let n = rng.random_range(k..=8usize);
        let values = (0..n * k).map(|_| rng.random::<f64>()).collect();
        tally.record((|| {
            let c = CostMatrix::new(n, k, values)?;
            Ok(hungarian_rectangular(&c)?.objective == brute_force_assignment(&c)?.objective)
        })());
    }
    tally.finish()
}

/// Complex determinant by Gaussian elimination with partial pivoting,
/// returned as `log2 |det|`.
fn log2_abs_det_lu(mut a: ComplexMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm())).unwrap_or(col);
        a.swap_rows(col, pivot);
        let p = a[(col, col)];
        acc += p.norm().log2();
        for row in col + 1..n {
            let factor = a[(row, col)] / p;
            for c in col..n {
                let v = a[(col, c)];
                a[(row, c)] -= factor * v;
            }
        }
    }
    acc
}

/// Sum-rate recomputed from projected covariances with an LU determinant.
fn sum_rate_dual(samples: usize, seed: u64) -> CheckOutcome {
    let mut tally = Tally::new("sum-rate-dual");
    let cfg = NetworkConfig::user_pairing(3, 2, 6).expect("static config");
    let id = SchemeId::new(Scheme::Oia, Framework::UserPairing);
    for i in 0..samples {
        tally.record((|| {
            let cs = generate_channels(&cfg, Seed(derive_seed(seed, &[i as u64])))?;
            let power = PowerLevel::new(10.0)?;
            let out = run_scheme(id, &cs, power)?;
            let zero = run_scheme(id, &cs, PowerLevel::new(0.0)?)?;
            let scale = Complex64::new(power.per_stream(2), 0.0);
            let mut reference = 0.0;
            for (k, (&user, u)) in out.pairing.users().iter().zip(&out.post_processors).enumerate() {
                let rx = cs.receiver(user);
                let u = u.matrix();
                let all = u.adjoint() * gram_sum(4, rx) * u;
                let interf = u.adjoint() * interference_covariance(rx, k) * u;
                let eye = ComplexMatrix::identity(2, 2);
                reference += log2_abs_det_lu(&eye + all * scale) - log2_abs_det_lu(&eye + interf * scale);
            }
            let rel = (out.sum_rate - reference).abs() / reference.abs().max(1e-300);
            Ok(rel <= 1e-9 && zero.sum_rate == 0.0)
        })());
    }
    tally.finish()
}

fn flop_model() -> CheckOutcome {
    let mut tally = Tally::new("flop-model");
    tally.record(Ok(psi_oia_up(3, 30, 6).value() == 174_960));
    tally.record(Ok(psi_min_inr_up(3, 30, 6).value() == 2_498_040));
    tally.record(Ok(psi_max_snr_up(3, 30, 6).value() == 2_485_080));
    tally.record(Ok(psi_oia_us(3, 10, 6).value() == 138_240));
    for (k, n_r) in [(3u64, 6u64), (4, 12)] {
        let dominated = (10..=200).all(|n| {
            let oia = psi_oia_up(k, n, n_r);
            oia < psi_min_inr_up(k, n, n_r) && oia < psi_max_snr_up(k, n, n_r)
        });
        tally.record(Ok(dominated));
    }
    tally.finish()
}
