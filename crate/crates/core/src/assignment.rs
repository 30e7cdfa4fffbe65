//! Rectangular linear assignment: pick one distinct receiver for every
//! transmitter so that the summed cost is minimal.
//!
//! [`hungarian_rectangular`] runs the shortest-augmenting-path form of the
//! Hungarian method directly on the `N × K` matrix (one augmentation per
//! transmitter, `O(K²N)`), without padding to a square problem.
//! [`brute_force_assignment`] enumerates every injective map and serves as
//! the reference.
//!
//! Both solvers apply the same tie rule: among pairings whose objective is
//! within `1e-12·max(1, |optimum|)` of the optimum, return the
//! lexicographically smallest `(n_1*, …, n_K*)`.

use crate::error::{Error, Result};

/// `N × K` matrix of finite costs; row = receiver, column = transmitter.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl CostMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{} values", rows * cols),
                found: format!("{} values", values.len()),
            });
        }
        if cols == 0 || rows < cols {
            return Err(Error::InfeasibleAssignment { users: rows, transmitters: cols });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteCost { row: i / cols, col: i % cols });
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch {
                expected: format!("rows of length {cols}"),
                found: "ragged rows".into(),
            });
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    /// Objective of `pairing`, summed in transmitter order.
    pub fn objective(&self, pairing: &Pairing) -> f64 {
        pairing.users().iter().enumerate().map(|(k, &n)| self.get(n, k)).sum()
    }
}

/// Transmitter `k` is served by receiver `users()[k]`; receivers are distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pairing(Vec<usize>);

impl Pairing {
    /// Checks injectivity and that every receiver index is below `receivers`.
    pub fn new(users: Vec<usize>, receivers: usize) -> Result<Self> {
        let mut seen = vec![false; receivers];
        for &n in &users {
            if n >= receivers {
                return Err(Error::InvalidConfig(format!("receiver {n} out of range (N = {receivers})")));
            }
            if std::mem::replace(&mut seen[n], true) {
                return Err(Error::InvalidConfig(format!("receiver {n} paired twice")));
            }
        }
        Ok(Self(users))
    }

    pub fn users(&self) -> &[usize] {
        &self.0
    }

    pub fn transmitters(&self) -> usize {
        self.0.len()
    }

    /// The `N × K` 0/1 pairing matrix.
    pub fn to_matrix(&self, receivers: usize) -> Vec<Vec<u8>> {
        let mut p = vec![vec![0u8; self.0.len()]; receivers];
        for (k, &n) in self.0.iter().enumerate() {
            p[n][k] = 1;
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentResult {
    pub pairing: Pairing,
    pub objective: f64,
}

fn tie_tolerance(optimum: f64) -> f64 {
    1e-12 * optimum.abs().max(1.0)
}

/// Minimum-cost assignment of `txs` to distinct members of `users`.
///
/// Returns the optimum and, for each entry of `txs`, the chosen user.
/// Requires `users.len() >= txs.len()`.
fn solve_subproblem(c: &CostMatrix, txs: &[usize], users: &[usize]) -> (f64, Vec<usize>) {
    let n = txs.len();
    let m = users.len();
    if n == 0 {
        return (0.0, Vec::new());
    }
    debug_assert!(m >= n);
    let cost = |i: usize, j: usize| c.get(users[j - 1], txs[i - 1]);
    // 1-based potentials; column 0 is the virtual start.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut chosen = vec![0usize; n];
    for j in 1..=m {
        if owner[j] != 0 {
            chosen[owner[j] - 1] = users[j - 1];
        }
    }
    let value = chosen.iter().enumerate().map(|(i, &user)| c.get(user, txs[i])).sum();
    (value, chosen)
}

/// Exact minimum of `Σ P_{i,j} f_{i,j}` over pairings with every column used
/// once and every row at most once.
pub fn hungarian_rectangular(c: &CostMatrix) -> Result<AssignmentResult> {
    let k = c.cols();
    let all_txs: Vec<usize> = (0..k).collect();
    let all_users: Vec<usize> = (0..c.rows()).collect();
    let (best, first) = solve_subproblem(c, &all_txs, &all_users);
    let tol = tie_tolerance(best);

    // Fix transmitters in order to the smallest receiver that still admits
    // an optimal completion.
    let mut chosen = Vec::with_capacity(k);
    let mut free = all_users;
    let mut fixed_sum = 0.0;
    for tx in 0..k {
        let rest_txs = &all_txs[tx + 1..];
        let mut picked = None;
        for (pos, &user) in free.iter().enumerate() {
            let mut remaining = free.clone();
            remaining.remove(pos);
            let (rest, _) = solve_subproblem(c, rest_txs, &remaining);
            if fixed_sum + c.get(user, tx) + rest <= best + tol {
                picked = Some(pos);
                break;
            }
        }
        // Rounding can in principle reject every candidate; fall back to the
        // unrefined optimum in that case.
        let Some(pos) = picked else {
            let pairing = Pairing(first);
            let objective = c.objective(&pairing);
            return Ok(AssignmentResult { pairing, objective });
        };
        let user = free.remove(pos);
        fixed_sum += c.get(user, tx);
        chosen.push(user);
    }
    let pairing = Pairing(chosen);
    let objective = c.objective(&pairing);
    Ok(AssignmentResult { pairing, objective })
}

/// Exhaustive search over all `N!/(N−K)!` injective maps. Limited to
/// `N <= 10`, `K <= 5`.
pub fn brute_force_assignment(c: &CostMatrix) -> Result<AssignmentResult> {
    if c.rows() > 10 || c.cols() > 5 {
        return Err(Error::TooLarge { rows: c.rows(), cols: c.cols() });
    }
    let mut all = Vec::new();
    let mut current = Vec::with_capacity(c.cols());
    let mut used = vec![false; c.rows()];
    enumerate(c, &mut current, &mut used, &mut all);
    let best = all.iter().map(|(obj, _)| *obj).fold(f64::INFINITY, f64::min);
    let tol = tie_tolerance(best);
    // `all` is generated in lexicographic order.
    let (objective, users) = all
        .into_iter()
        .find(|(obj, _)| *obj <= best + tol)
        .expect("at least one pairing exists when N >= K");
    Ok(AssignmentResult { pairing: Pairing(users), objective })
}

fn enumerate(c: &CostMatrix, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(f64, Vec<usize>)>) {
    if current.len() == c.cols() {
        let obj = current.iter().enumerate().map(|(k, &n)| c.get(n, k)).sum();
        out.push((obj, current.clone()));
        return;
    }
    for n in 0..c.rows() {
        if !used[n] {
            used[n] = true;
            current.push(n);
            enumerate(c, current, used, out);
            current.pop();
            used[n] = false;
        }
    }
}
