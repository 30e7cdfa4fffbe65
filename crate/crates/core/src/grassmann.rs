//! Points on the Grassmann manifold and the alignment measures built on them.
//!
//! A subspace is carried around as a [`GeneratorMatrix`]: an `N × M` matrix
//! with orthonormal columns. Everything here depends on the subspace only,
//! never on the particular generator, so results are invariant under
//! `A → A·U` for unitary `U`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, shape_str, ComplexMatrix, HermitianEigen};

/// Orthonormality tolerance, `‖A^H A − I‖_F`.
pub const ORTHONORMAL_TOLERANCE: f64 = 1e-10;
/// Minimum ratio of smallest to largest singular value for a full-rank input.
pub const RANK_RATIO: f64 = 1e-9;
/// Eigenvalue gap below which the subspace mean is reported as non-unique.
pub const DEGENERATE_GAP: f64 = 1e-10;

/// Orthonormal basis of an `M`-dimensional subspace of `C^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix(ComplexMatrix);

impl GeneratorMatrix {
    /// Wraps `basis` after checking `basis^H basis = I` within
    /// [`ORTHONORMAL_TOLERANCE`].
    pub fn from_orthonormal(basis: ComplexMatrix) -> Result<Self> {
        linalg::ensure_finite(&basis)?;
        if basis.ncols() == 0 || basis.nrows() < basis.ncols() {
            return Err(Error::ShapeMismatch {
                expected: "tall matrix with at least one column".into(),
                found: shape_str(basis.nrows(), basis.ncols()),
            });
        }
        let gram = basis.adjoint() * &basis;
        let err = (gram - ComplexMatrix::identity(basis.ncols(), basis.ncols())).norm();
        if err > ORTHONORMAL_TOLERANCE {
            return Err(Error::ShapeMismatch {
                expected: "orthonormal columns".into(),
                found: format!("‖A^H A − I‖ = {err:.3e}"),
            });
        }
        Ok(Self(basis))
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }

    /// Subspace dimension `M`.
    pub fn dim(&self) -> usize {
        self.0.ncols()
    }

    /// Ambient dimension `N`.
    pub fn ambient(&self) -> usize {
        self.0.nrows()
    }

    /// Orthogonal projector `A A^H`.
    pub fn projector(&self) -> ComplexMatrix {
        &self.0 * self.0.adjoint()
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.0.shape() != other.0.shape() {
            return Err(Error::ShapeMismatch {
                expected: shape_str(self.0.nrows(), self.0.ncols()),
                found: shape_str(other.0.nrows(), other.0.ncols()),
            });
        }
        Ok(())
    }
}

/// Principal angles in radians, nondecreasing, each in `[0, π/2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalAngles(Vec<f64>);

impl PrincipalAngles {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::InvalidAngles("no angles".into()));
        }
        if angles.iter().any(|a| !(0.0..=FRAC_PI_2).contains(a)) {
            return Err(Error::InvalidAngles("angle outside [0, π/2]".into()));
        }
        if angles.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidAngles("angles not sorted ascending".into()));
        }
        Ok(Self(angles))
    }

    pub fn angles(&self) -> &[f64] {
        &self.0
    }

    /// `Σ sin²θ_m`, the squared chordal distance.
    pub fn chordal_distance_sq(&self) -> f64 {
        self.0.iter().map(|t| t.sin().powi(2)).sum()
    }
}

/// Spread of a set of subspaces around their mean (or an upper bound on it).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SpreadValue(f64);

impl SpreadValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<SpreadValue> for f64 {
    fn from(s: SpreadValue) -> f64 {
        s.0
    }
}

/// Gram-Schmidt orthonormalisation (classical, with one reorthogonalisation
/// pass per column).
///
/// The rank test runs on the triangular factor `R`, whose singular values
/// are those of `a`.
pub fn orthonormalize(a: &ComplexMatrix) -> Result<GeneratorMatrix> {
    linalg::ensure_finite(a)?;
    let (rows, cols) = a.shape();
    if cols == 0 || rows < cols {
        return Err(Error::ShapeMismatch {
            expected: "tall matrix with at least one column".into(),
            found: shape_str(rows, cols),
        });
    }
    let mut q = ComplexMatrix::zeros(rows, cols);
    let mut r = ComplexMatrix::zeros(cols, cols);
    for j in 0..cols {
        let mut v = a.column(j).into_owned();
        for _pass in 0..2 {
            for i in 0..j {
                let qi = q.column(i);
                let proj: Complex64 = qi.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
                r[(i, j)] += proj;
                v.axpy(-proj, &qi, Complex64::new(1.0, 0.0));
            }
        }
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::RankDeficient { ratio: 0.0 });
        }
        r[(j, j)] = Complex64::new(norm, 0.0);
        q.set_column(j, &v.unscale(norm));
    }
    let sv = r.singular_values();
    let (min, max) = sv.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    let ratio = min / max;
    if !(ratio > RANK_RATIO) {
        return Err(Error::RankDeficient { ratio });
    }
    Ok(GeneratorMatrix(q))
}

/// True when `a` passes the rank precondition of [`orthonormalize`].
pub fn has_full_column_rank(a: &ComplexMatrix) -> bool {
    orthonormalize(a).is_ok()
}

/// Squared chordal distance `M − ‖A^H B‖_F²`, clamped to `[0, M]`.
pub fn chordal_distance_sq(a: &GeneratorMatrix, b: &GeneratorMatrix) -> Result<f64> {
    a.check_same_shape(b)?;
    Ok(chordal_unchecked(a, b))
}

fn chordal_unchecked(a: &GeneratorMatrix, b: &GeneratorMatrix) -> f64 {
    let m = a.dim() as f64;
    let overlap = (a.0.adjoint() * &b.0).norm_squared();
    (m - overlap).clamp(0.0, m)
}

/// Principal angles between two subspaces of equal dimension.
///
/// Cosines are the singular values of `A^H B`, clamped to `[0, 1]` before
/// `acos`.
pub fn principal_angles(a: &GeneratorMatrix, b: &GeneratorMatrix) -> Result<PrincipalAngles> {
    a.check_same_shape(b)?;
    let cross = a.0.adjoint() * &b.0;
    let mut cosines: Vec<f64> = cross.singular_values().iter().map(|s| s.clamp(0.0, 1.0)).collect();
    cosines.sort_by(|x, y| y.total_cmp(x));
    PrincipalAngles::new(cosines.into_iter().map(f64::acos).collect())
}

fn check_list(list: &[GeneratorMatrix]) -> Result<&GeneratorMatrix> {
    let first = list.first().ok_or(Error::EmptyList)?;
    for g in &list[1..] {
        first.check_same_shape(g)?;
    }
    Ok(first)
}

/// `Σ_l Ĥ_l Ĥ_l^H`.
pub fn sum_projectors(list: &[GeneratorMatrix]) -> Result<ComplexMatrix> {
    let first = check_list(list)?;
    Ok(linalg::gram_sum(first.ambient(), list.iter().map(|g| &g.0)))
}

/// Grassmannian mean: the `M`-dimensional subspace minimising the summed
/// squared chordal distance to every member of `list`.
#[derive(Debug, Clone)]
pub struct SubspaceMean {
    pub mean: GeneratorMatrix,
    /// Descending eigenvalues of the projector sum.
    pub eigenvalues: Vec<f64>,
    /// Set when `λ_M − λ_{M+1}` is below [`DEGENERATE_GAP`]; the minimiser is
    /// then not unique and `mean` is one of them.
    pub degenerate: bool,
}

impl SubspaceMean {
    /// `Σ_l d_c²(F, Ĥ_l)` at the optimum: `L·M − Σ_{m≤M} λ_m`.
    pub fn objective(&self, count: usize) -> f64 {
        let m = self.mean.dim();
        let top: f64 = self.eigenvalues[..m].iter().sum();
        (count as f64 * m as f64 - top).max(0.0)
    }
}

pub fn subspace_mean(list: &[GeneratorMatrix]) -> Result<SubspaceMean> {
    let first = check_list(list)?;
    let m = first.dim();
    let eig = HermitianEigen::new(&sum_projectors(list)?)?;
    let degenerate = eig
        .values
        .get(m)
        .is_some_and(|&next| eig.values[m - 1] - next < DEGENERATE_GAP);
    let mean = GeneratorMatrix(eig.leading(m));
    Ok(SubspaceMean { mean, eigenvalues: eig.values, degenerate })
}

/// Exact spread `L·M − Σ_{m=1}^{M} λ_m(Σ_l Ĥ_l Ĥ_l^H)`.
///
/// Zero exactly when every subspace coincides.
pub fn spread_exact(list: &[GeneratorMatrix]) -> Result<SpreadValue> {
    let first = check_list(list)?;
    let m = first.dim();
    let eig = linalg::hermitian_eigs(&sum_projectors(list)?)?;
    let top: f64 = eig[..m].iter().sum();
    Ok(SpreadValue((list.len() as f64 * m as f64 - top).max(0.0)))
}

/// Pairwise squared chordal distances, symmetric with a zero diagonal.
pub fn chordal_table(list: &[GeneratorMatrix]) -> Result<Vec<Vec<f64>>> {
    check_list(list)?;
    let n = list.len();
    let mut table = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = chordal_unchecked(&list[i], &list[j]);
            table[i][j] = d;
            table[j][i] = d;
        }
    }
    Ok(table)
}

/// `min_{j ∈ members} Σ_{l ∈ members} table[j][l]`.
///
/// Self-terms contribute zero. Panics on an empty `members`.
pub fn spread_approx_from_table(table: &[Vec<f64>], members: &[usize]) -> f64 {
    assert!(!members.is_empty(), "spread over an empty set");
    members
        .iter()
        .map(|&j| members.iter().map(|&l| table[j][l]).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

/// Cheap upper bound on [`spread_exact`]: the spread around the member
/// closest to the mean, `min_j Σ_l d_c²(Ĥ_j, Ĥ_l)`.
pub fn spread_approx(list: &[GeneratorMatrix]) -> Result<SpreadValue> {
    let table = chordal_table(list)?;
    let members: Vec<usize> = (0..list.len()).collect();
    Ok(SpreadValue(spread_approx_from_table(&table, &members)))
}

/// Closed-form spectrum of `Ĥ_1Ĥ_1^H + Ĥ_2Ĥ_2^H` from the principal angles
/// between the two subspaces: `1 + cosθ_m` then `1 − cosθ_m`, descending.
pub fn pair_projector_eigs(angles: &PrincipalAngles) -> Vec<f64> {
    let cos: Vec<f64> = angles.0.iter().map(|t| t.cos()).collect();
    cos.iter()
        .map(|c| 1.0 + c)
        .chain(cos.iter().rev().map(|c| 1.0 - c))
        .collect()
}
