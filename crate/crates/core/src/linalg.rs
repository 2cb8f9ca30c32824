//! Small dense complex linear algebra: SVD-based null spaces and column
//! spaces, orthonormal subspaces and principal angles.
//!
//! Matrices are held as `nalgebra` matrices; the decompositions themselves
//! run in `faer`.

use faer::Mat;
use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Default relative singular-value threshold for rank decisions.
pub const RANK_TOL: f64 = 1e-10;

/// Singular values closer than this factor to the threshold are flagged.
const NEAR_THRESHOLD_FACTOR: f64 = 1e3;

/// A linear subspace of `ℂ^n` held as an orthonormal column basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: CMatrix,
    tol: f64,
}

/// Outcome of a rank decision together with the spectrum it was based on.
#[derive(Clone, Debug)]
pub struct RankDecision {
    pub subspace: Subspace,
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    /// Some singular value lies within a factor 1e3 of the threshold.
    pub near_threshold: bool,
}

fn to_faer(m: &CMatrix) -> Mat<Complex64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

struct Decomposition {
    u: CMatrix,
    sigma: Vec<f64>,
    v: CMatrix,
}

/// Full SVD `m = U Σ V^H`, singular values in decreasing order.
fn svd(m: &CMatrix) -> Decomposition {
    let svd = to_faer(m).svd().expect("SVD converges on finite input");
    let (u, s, v) = (svd.U(), svd.S().column_vector(), svd.V());
    Decomposition {
        u: CMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)]),
        sigma: (0..s.nrows()).map(|i| s[i].re).collect(),
        v: CMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)]),
    }
}

/// Eigenvalues of a Hermitian matrix (only the lower triangle is read).
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return vec![];
    }
    to_faer(m)
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .expect("eigensolver converges on finite input")
}

fn padded_square_rows(m: &CMatrix) -> CMatrix {
    if m.nrows() >= m.ncols() {
        m.clone()
    } else {
        let mut p = CMatrix::zeros(m.ncols(), m.ncols());
        p.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(m);
        p
    }
}

fn decide(sigma: &[f64], tol: f64) -> (f64, bool) {
    let smax = sigma.iter().copied().fold(0.0, f64::max);
    let threshold = tol * smax;
    let near = smax > 0.0
        && sigma.iter().any(|&s| {
            s > threshold / NEAR_THRESHOLD_FACTOR && s < threshold * NEAR_THRESHOLD_FACTOR
        });
    (threshold, near)
}

/// `{x : m x = 0}`, singular values at or below `tol·σ_max` count as zero.
pub fn null_space(m: &CMatrix, tol: f64) -> RankDecision {
    let n = m.ncols();
    if n == 0 {
        return RankDecision {
            subspace: Subspace::zero(0, tol),
            singular_values: vec![],
            threshold: 0.0,
            near_threshold: false,
        };
    }
    let a = padded_square_rows(m);
    let Decomposition { sigma, v, .. } = svd(&a);
    let (threshold, near) = decide(&sigma, tol);
    let cols: Vec<_> = (0..sigma.len())
        .filter(|&i| sigma[i] <= threshold)
        .map(|i| v.column(i).into_owned())
        .collect();
    let basis = if cols.is_empty() { CMatrix::zeros(n, 0) } else { CMatrix::from_columns(&cols) };
    RankDecision {
        subspace: Subspace { basis, tol },
        singular_values: sigma,
        threshold,
        near_threshold: near,
    }
}

/// Range of `m`, singular values above `tol·σ_max` count as nonzero.
pub fn column_space(m: &CMatrix, tol: f64) -> RankDecision {
    let rows = m.nrows();
    if m.ncols() == 0 || rows == 0 {
        return RankDecision {
            subspace: Subspace::zero(rows, tol),
            singular_values: vec![],
            threshold: 0.0,
            near_threshold: false,
        };
    }
    let Decomposition { u, sigma, .. } = svd(m);
    let (threshold, near) = decide(&sigma, tol);
    let cols: Vec<_> = (0..sigma.len())
        .filter(|&i| sigma[i] > threshold && sigma[i] > 0.0)
        .map(|i| u.column(i).into_owned())
        .collect();
    let basis = if cols.is_empty() { CMatrix::zeros(rows, 0) } else { CMatrix::from_columns(&cols) };
    RankDecision {
        subspace: Subspace { basis, tol },
        singular_values: sigma,
        threshold,
        near_threshold: near,
    }
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    to_faer(m)
        .singular_values()
        .expect("SVD converges on finite input")
        .into_iter()
        .fold(0.0, f64::max)
}

impl Subspace {
    pub fn zero(ambient: usize, tol: f64) -> Self {
        Self { basis: CMatrix::zeros(ambient, 0), tol }
    }

    pub fn full(ambient: usize, tol: f64) -> Self {
        Self { basis: CMatrix::identity(ambient, ambient), tol }
    }

    /// Orthonormalises the span of the columns of `m`.
    pub fn span(m: &CMatrix, tol: f64) -> Self {
        column_space(m, tol).subspace
    }

    /// Span of the given vectors.
    pub fn span_of(ambient: usize, vectors: &[Vec<Complex64>], tol: f64) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient, tol);
        }
        let m = CMatrix::from_fn(ambient, vectors.len(), |i, j| vectors[j][i]);
        Self::span(&m, tol)
    }

    /// Span of standard basis vectors `e_i`.
    pub fn coordinate(ambient: usize, indices: &[usize], tol: f64) -> Self {
        let mut basis = CMatrix::zeros(ambient, indices.len());
        for (j, &i) in indices.iter().enumerate() {
            basis[(i, j)] = Complex64::new(1.0, 0.0);
        }
        Self { basis, tol }
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Deviation of the basis from orthonormality, `‖B^H B − I‖_max`.
    pub fn orthonormality_residual(&self) -> f64 {
        let g = self.basis.adjoint() * &self.basis;
        let k = self.dim();
        (g - CMatrix::identity(k, k)).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// `‖v − P v‖₂ / ‖v‖₂` (zero for the zero vector).
    pub fn distance_to(&self, v: &[Complex64]) -> f64 {
        let v = nalgebra::DVector::from_column_slice(v);
        let norm = v.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let proj = &self.basis * (self.basis.adjoint() * &v);
        (v - proj).norm() / norm
    }

    /// Largest principal angle to `other`; `π/2` when dimensions differ.
    pub fn max_principal_angle(&self, other: &Subspace) -> f64 {
        assert_eq!(self.ambient(), other.ambient(), "subspaces live in different spaces");
        if self.dim() != other.dim() {
            return std::f64::consts::FRAC_PI_2;
        }
        if self.dim() == 0 {
            return 0.0;
        }
        // sin θ_max = ‖(I − P_B) A‖₂ for orthonormal A, B of equal dimension
        let residual = &self.basis - &other.basis * (other.basis.adjoint() * &self.basis);
        spectral_norm(&residual).min(1.0).asin()
    }

    /// Same dimension and largest principal angle at most `tol`.
    pub fn equals(&self, other: &Subspace, tol: f64) -> (bool, f64) {
        let angle = self.max_principal_angle(other);
        (self.dim() == other.dim() && angle <= tol, angle)
    }

    /// `{diag(w) x : x ∈ self}` for a unimodular weight `w`.
    pub fn pointwise_multiply(&self, weights: &[Complex64]) -> Subspace {
        let mut basis = self.basis.clone();
        for (i, w) in weights.iter().enumerate() {
            for j in 0..basis.ncols() {
                basis[(i, j)] *= *w;
            }
        }
        // unimodular weights keep the basis orthonormal; re-orthonormalise
        // anyway so non-unimodular weights are handled too
        if weights.iter().all(|w| (w.norm() - 1.0).abs() < 1e-14) {
            Subspace { basis, tol: self.tol }
        } else {
            Subspace::span(&basis, self.tol)
        }
    }

    /// Annihilator under the bilinear pairing `⟨f, φ⟩ = Σ f(g) φ(g)`.
    pub fn bilinear_annihilator(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient(), self.tol);
        }
        null_space(&self.basis.transpose(), self.tol).subspace
    }

    /// The basis columns as plain vectors.
    pub fn vectors(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim()).map(|j| self.basis.column(j).iter().copied().collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn null_space_of_rank_one() {
        let m = CMatrix::from_row_slice(3, 3, &[c(1.0, 0.0); 9]);
        let ns = null_space(&m, RANK_TOL);
        assert_eq!(ns.subspace.dim(), 2);
        assert!(ns.subspace.orthonormality_residual() < 1e-12);
        let image = &m * ns.subspace.basis();
        assert!(image.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let m = CMatrix::from_row_slice(1, 3, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]);
        assert_eq!(null_space(&m, RANK_TOL).subspace.dim(), 2);
        assert_eq!(null_space(&CMatrix::zeros(2, 2), RANK_TOL).subspace.dim(), 2);
    }

    #[test]
    fn equality_is_basis_independent() {
        let a = Subspace::span_of(3, &[vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]], RANK_TOL);
        let b = Subspace::span_of(3, &[vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)]], RANK_TOL);
        let (eq, angle) = a.equals(&b, 1e-12);
        assert!(eq, "angle {angle}");
        let (eq, _) = a.equals(&a, 0.0);
        assert!(eq);
    }

    #[test]
    fn constants_differ_from_antiperiodic_functions() {
        let ones = Subspace::span_of(4, &[vec![c(1.0, 0.0); 4]], RANK_TOL);
        let anti = Subspace::span_of(
            4,
            &[
                vec![c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
            ],
            RANK_TOL,
        );
        let (eq, angle) = ones.equals(&anti, 1e-8);
        assert!(!eq);
        assert_eq!(angle, std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn principal_angle_of_tilted_lines() {
        let theta: f64 = 0.3;
        let a = Subspace::span_of(2, &[vec![c(1.0, 0.0), c(0.0, 0.0)]], RANK_TOL);
        let b = Subspace::span_of(2, &[vec![c(theta.cos(), 0.0), c(theta.sin(), 0.0)]], RANK_TOL);
        assert!((a.max_principal_angle(&b) - theta).abs() < 1e-12);
    }

    #[test]
    fn bilinear_annihilator_uses_no_conjugation() {
        // span{(1, i)} is annihilated bilinearly by (1, i): 1·1 + i·i = 0
        let s = Subspace::span_of(2, &[vec![c(1.0, 0.0), c(0.0, 1.0)]], RANK_TOL);
        let ann = s.bilinear_annihilator();
        assert_eq!(ann.dim(), 1);
        assert!(ann.distance_to(&[c(1.0, 0.0), c(0.0, 1.0)]) < 1e-12);
    }
}
