//! Test-only oracles. Nothing here calls into the eigensolver, determinant
//! or assignment code under test.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use oia_core::channel::draw_cscg_matrix;
use oia_core::grassmann::{orthonormalize, GeneratorMatrix};
use oia_core::schemes::{interference_covariance, post_processor, sum_rate, PostProcessor};
use oia_core::{ChannelSet, ComplexMatrix, Framework, Pairing, PowerLevel};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_generator<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> GeneratorMatrix {
    orthonormalize(&draw_cscg_matrix(rows, cols, rng)).unwrap()
}

/// Random unitary from the Gram-Schmidt factor of a Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    random_generator(rng, n, n).into_inner()
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let a = draw_cscg_matrix(n, n, rng);
    (&a + a.adjoint()).scale(0.5)
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations on its real
/// symmetric embedding `[[Re, -Im], [Im, Re]]`, whose spectrum repeats each
/// Hermitian eigenvalue twice. Sorted descending.
pub fn jacobi_eigenvalues(b: &ComplexMatrix) -> Vec<f64> {
    let n = b.nrows();
    let dim = 2 * n;
    let mut a = vec![vec![0.0f64; dim]; dim];
    for i in 0..n {
        for j in 0..n {
            let z = b[(i, j)];
            let (re, im) = ((z.re + b[(j, i)].re) / 2.0, (z.im - b[(j, i)].im) / 2.0);
            a[i][j] = re;
            a[i + n][j + n] = re;
            a[i][j + n] = -im;
            a[i + n][j] = im;
        }
    }
    let total: f64 = a.iter().flatten().map(|x| x * x).sum();
    for _sweep in 0..100 {
        let off: f64 = (0..dim).flat_map(|i| (0..dim).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off <= 1e-30 * total.max(1e-300) {
            break;
        }
        for p in 0..dim {
            for q in p + 1..dim {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..dim {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..dim {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut doubled: Vec<f64> = (0..dim).map(|i| a[i][i]).collect();
    doubled.sort_by(|x, y| y.total_cmp(x));
    doubled.into_iter().step_by(2).collect()
}

/// `log2 |det A|` via Gaussian elimination with partial pivoting.
pub fn log2_abs_det(a: &ComplexMatrix) -> f64 {
    let n = a.nrows();
    let mut m: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| a[(i, j)]).collect()).collect();
    let mut acc = 0.0;
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm())).unwrap();
        m.swap(col, piv);
        let p = m[col][col];
        acc += p.norm().log2();
        for row in col + 1..n {
            let f = m[row][col] / p;
            for c in col..n {
                let v = m[col][c];
                m[row][c] -= f * v;
            }
        }
    }
    acc
}

/// Sum-rate evaluated independently: project the full covariance
/// first, then take LU determinants.
pub fn reference_sum_rate(cs: &ChannelSet, pairing: &Pairing, post: &[PostProcessor], power: f64) -> f64 {
    let m = cs.config().antennas;
    let scale = Complex64::new(power / m as f64, 0.0);
    let eye = ComplexMatrix::identity(m, m);
    let mut total = 0.0;
    for (k, (&user, u)) in pairing.users().iter().zip(post).enumerate() {
        let rx = cs.receiver(user);
        let u = u.matrix();
        let mut all = ComplexMatrix::zeros(2 * m, 2 * m);
        let mut interf = ComplexMatrix::zeros(2 * m, 2 * m);
        for (l, h) in rx.iter().enumerate() {
            let cov = h * h.adjoint();
            if l != k {
                interf += &cov;
            }
            all += cov;
        }
        let qa = u.adjoint() * all * u;
        let qi = u.adjoint() * interf * u;
        total += log2_abs_det(&(&eye + qa * scale)) - log2_abs_det(&(&eye + qi * scale));
    }
    total
}

/// Exhaustive minimum over injective maps, in lexicographic order.
pub fn enumerate_assignments(rows: usize, cols: usize) -> Vec<Vec<usize>> {
    fn go(rows: usize, cols: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == cols {
            out.push(cur.clone());
            return;
        }
        for n in 0..rows {
            if !cur.contains(&n) {
                cur.push(n);
                go(rows, cols, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(rows, cols, &mut Vec::new(), &mut out);
    out
}

pub fn exhaustive_min(costs: &[Vec<f64>]) -> f64 {
    let (rows, cols) = (costs.len(), costs[0].len());
    enumerate_assignments(rows, cols)
        .iter()
        .map(|p| p.iter().enumerate().map(|(k, &n)| costs[n][k]).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

/// Uniformly random receivers (one per cell, or a random injective pairing)
/// with leakage-minimising filters. Lower anchor for ordering checks.
pub fn random_baseline_rate<R: Rng>(cs: &ChannelSet, power: PowerLevel, rng: &mut R) -> f64 {
    let cfg = cs.config();
    let k = cfg.transmitters;
    let users: Vec<usize> = match cfg.framework {
        Framework::UserSelection => {
            let s = cfg.group_size().unwrap();
            (0..k).map(|cell| cs.cell_user(cell, rng.random_range(0..s))).collect()
        }
        Framework::UserPairing => {
            let mut all: Vec<usize> = (0..cfg.users).collect();
            all.shuffle(rng);
            all.truncate(k);
            all
        }
    };
    let pairing = Pairing::new(users, cfg.users).unwrap();
    let post: Vec<PostProcessor> = pairing
        .users()
        .iter()
        .enumerate()
        .map(|(tx, &u)| post_processor(&interference_covariance(cs.receiver(u), tx), cfg.antennas).unwrap())
        .collect();
    sum_rate(cs, &pairing, &post, power).unwrap()
}

pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn frob(m: &DMatrix<Complex64>) -> f64 {
    m.norm()
}
