//! Dense real-matrix kernels used by every other module: symmetric
//! pseudo-inverse, orthonormalization, orthogonal projectors, vectorized
//! (Kronecker) linear-matrix-equation solves, and the rank/tolerance policy.
//!
//! Everything here is a pure function of its inputs; all values are plain
//! owned matrices that are safe to share across threads.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::ops::Deref;

use crate::error::{Error, Result};

/// Dense real matrix in double precision.
pub type Matrix = DMatrix<f64>;

/// Relative tolerances used for rank decisions, residual acceptance and
/// symmetry checks. All thresholds are relative: a rank cut is
/// `rank_tol * max |eigenvalue or singular value|`, a residual passes at
/// `resid_tol * (1 + norm of the data)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    /// Spectral cut for rank decisions.
    pub rank_tol: f64,
    /// Acceptance threshold for equation residuals.
    pub resid_tol: f64,
    /// Maximum relative asymmetry accepted when constructing a [`SymMatrix`].
    pub sym_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            rank_tol: 1e-10,
            resid_tol: 1e-8,
            sym_tol: 1e-10,
        }
    }
}

impl TolerancePolicy {
    /// Builds a policy, rejecting thresholds outside (0, 1).
    pub fn new(rank_tol: f64, resid_tol: f64, sym_tol: f64) -> Result<Self> {
        let policy = TolerancePolicy {
            rank_tol,
            resid_tol,
            sym_tol,
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("rank_tol", self.rank_tol),
            ("resid_tol", self.resid_tol),
            ("sym_tol", self.sym_tol),
        ] {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::InvalidInput(format!(
                    "tolerance {name} = {value} must lie strictly between 0 and 1"
                )));
            }
        }
        Ok(())
    }

    /// Residual acceptance threshold relative to the scale of `data_norm`.
    pub fn resid_cut(&self, data_norm: f64) -> f64 {
        self.resid_tol * (1.0 + data_norm)
    }

    /// Spectral rank cut relative to the largest magnitude `max_mag`.
    pub fn rank_cut(&self, max_mag: f64) -> f64 {
        self.rank_tol * max_mag
    }
}

/// Rejects matrices containing NaN or infinite entries.
pub fn require_finite(name: &str, m: &Matrix) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "matrix {name} contains non-finite entries"
        )))
    }
}

/// Symmetric matrix stored in explicitly symmetrized form `(M + M')/2`.
///
/// Construction fails if the input is not symmetric within `sym_tol`
/// (relative to its Frobenius norm) or has non-finite entries, so a value
/// of this type always satisfies `m == m.transpose()` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    inner: Matrix,
}

impl SymMatrix {
    /// Checked constructor: requires `||M - M'|| <= sym_tol * (1 + ||M||)`,
    /// then stores `(M + M')/2`.
    pub fn new(m: Matrix, tol: &TolerancePolicy) -> Result<Self> {
        require_finite("symmetric candidate", &m)?;
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidInput(format!(
                "symmetric matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let asym = (&m - m.transpose()).norm();
        if asym > tol.sym_tol * (1.0 + m.norm()) {
            return Err(Error::InvalidInput(format!(
                "matrix is not symmetric: ||M - M'|| = {asym:.3e}"
            )));
        }
        Ok(Self::project(m))
    }

    /// Projects an arbitrary square matrix onto the symmetric subspace,
    /// storing `(M + M')/2` without a symmetry check. Used for results of
    /// expressions that are symmetric in exact arithmetic.
    pub fn symmetrized(m: Matrix) -> Result<Self> {
        require_finite("symmetric candidate", &m)?;
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidInput(format!(
                "symmetric matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self::project(m))
    }

    fn project(m: Matrix) -> Self {
        let sym = (&m + m.transpose()) * 0.5;
        SymMatrix { inner: sym }
    }

    pub fn zeros(order: usize) -> Self {
        SymMatrix {
            inner: Matrix::zeros(order, order),
        }
    }

    pub fn identity(order: usize) -> Self {
        SymMatrix {
            inner: Matrix::identity(order, order),
        }
    }

    pub fn order(&self) -> usize {
        self.inner.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix {
        self.inner
    }
}

impl Deref for SymMatrix {
    type Target = Matrix;

    fn deref(&self) -> &Matrix {
        &self.inner
    }
}

impl AsRef<Matrix> for SymMatrix {
    fn as_ref(&self) -> &Matrix {
        &self.inner
    }
}

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted by
/// decreasing magnitude. The columns of `vectors` are orthonormal.
pub(crate) struct SortedSymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

pub(crate) fn sorted_sym_eigen(m: &SymMatrix) -> SortedSymEigen {
    let n = m.order();
    if n == 0 {
        return SortedSymEigen {
            values: Vec::new(),
            vectors: Matrix::zeros(0, 0),
        };
    }
    let eig = m.matrix().clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .abs()
            .partial_cmp(&eig.eigenvalues[i].abs())
            .unwrap()
    });
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Matrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).clone_owned())
            .collect::<Vec<_>>(),
    );
    SortedSymEigen { values, vectors }
}

/// Moore-Penrose pseudo-inverse of a symmetric matrix via its
/// eigendecomposition. Eigenvalues with `|lambda| <= rank_tol * max
/// |lambda|` are treated as zero; the result satisfies the four Penrose
/// identities to within the residual tolerance.
pub fn sym_pinv(m: &SymMatrix, tol: &TolerancePolicy) -> SymMatrix {
    sym_pinv_with_scale(m, 0.0, tol)
}

/// [`sym_pinv`] with an external scale for the rank decision: eigenvalues
/// under `rank_tol * max(scale, max |lambda|)` are treated as zero. Needed
/// when `m` is a projection of a larger matrix and may consist entirely of
/// rounding noise relative to that matrix's norm.
pub fn sym_pinv_with_scale(m: &SymMatrix, scale: f64, tol: &TolerancePolicy) -> SymMatrix {
    let n = m.order();
    if n == 0 {
        return SymMatrix::zeros(0);
    }
    let eig = sorted_sym_eigen(m);
    let max_mag = eig.values.first().map_or(0.0, |v| v.abs());
    let cut = tol.rank_cut(max_mag.max(scale));
    let inv_values = DVector::from_iterator(
        n,
        eig.values
            .iter()
            .map(|&v| if v.abs() <= cut { 0.0 } else { 1.0 / v }),
    );
    let scaled = &eig.vectors * Matrix::from_diagonal(&inv_values);
    SymMatrix::project(scaled * eig.vectors.transpose())
}

/// Orthonormal basis of the kernel of a symmetric matrix: eigenvectors
/// whose eigenvalue magnitude falls below the rank cut. Returns an `n x d`
/// matrix with orthonormal columns (`d` may be zero).
pub fn sym_kernel_basis(m: &SymMatrix, tol: &TolerancePolicy) -> Matrix {
    let n = m.order();
    if n == 0 {
        return Matrix::zeros(0, 0);
    }
    let eig = sorted_sym_eigen(m);
    let max_mag = eig.values.first().map_or(0.0, |v| v.abs());
    let cut = tol.rank_cut(max_mag);
    let kernel_cols: Vec<_> = (0..n)
        .filter(|&i| eig.values[i].abs() <= cut)
        .map(|i| eig.vectors.column(i).clone_owned())
        .collect();
    if kernel_cols.is_empty() {
        Matrix::zeros(n, 0)
    } else {
        Matrix::from_columns(&kernel_cols)
    }
}

/// Orthonormal basis of the range of a symmetric matrix (the complement of
/// [`sym_kernel_basis`] in the same eigendecomposition).
pub fn sym_range_basis(m: &SymMatrix, tol: &TolerancePolicy) -> Matrix {
    let n = m.order();
    if n == 0 {
        return Matrix::zeros(0, 0);
    }
    let eig = sorted_sym_eigen(m);
    let max_mag = eig.values.first().map_or(0.0, |v| v.abs());
    let cut = tol.rank_cut(max_mag);
    let range_cols: Vec<_> = (0..n)
        .filter(|&i| eig.values[i].abs() > cut)
        .map(|i| eig.vectors.column(i).clone_owned())
        .collect();
    if range_cols.is_empty() {
        Matrix::zeros(n, 0)
    } else {
        Matrix::from_columns(&range_cols)
    }
}

/// Orthonormal basis of the column space of `v`, computed from a singular
/// value decomposition. The number of columns equals the numerical rank of
/// `v` under the rank tolerance.
pub fn orthonormal_basis(v: &Matrix, tol: &TolerancePolicy) -> Result<Matrix> {
    require_finite("span matrix", v)?;
    let n = v.nrows();
    if v.ncols() == 0 || n == 0 {
        return Ok(Matrix::zeros(n, 0));
    }
    let svd = v.clone().svd(true, false);
    let u = svd.u.expect("SVD with u requested");
    let max_sv = svd.singular_values.max();
    let cut = tol.rank_cut(max_sv);
    let rank = svd.singular_values.iter().filter(|&&s| s > cut).count();
    if rank == 0 {
        return Ok(Matrix::zeros(n, 0));
    }
    Ok(u.columns(0, rank).clone_owned())
}

/// Orthogonal projector `S S'` onto the column space of a matrix with
/// orthonormal columns. Idempotent and symmetric; its trace equals the
/// column count of `S`.
pub fn projector(s: &Matrix, tol: &TolerancePolicy) -> Result<SymMatrix> {
    require_finite("basis matrix", s)?;
    let k = s.ncols();
    let gram = s.transpose() * s;
    let defect = (&gram - Matrix::identity(k, k)).norm();
    if defect > tol.resid_cut(1.0) {
        return Err(Error::InvalidInput(format!(
            "columns are not orthonormal: ||S'S - I|| = {defect:.3e}"
        )));
    }
    SymMatrix::symmetrized(s * s.transpose())
}

/// Dimension of the space of symmetric `n x n` matrices.
pub(crate) fn sym_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Coordinates of a symmetric matrix in the orthonormal basis
/// `{E_ii} ∪ {(E_ij + E_ji)/sqrt(2), i < j}`. The map is an isometry
/// between the Frobenius and Euclidean norms.
pub(crate) fn svec(m: &Matrix) -> DVector<f64> {
    let n = m.nrows();
    let mut out = DVector::zeros(sym_dim(n));
    let mut k = 0;
    let sqrt2 = std::f64::consts::SQRT_2;
    for i in 0..n {
        for j in i..n {
            out[k] = if i == j {
                m[(i, i)]
            } else {
                sqrt2 * 0.5 * (m[(i, j)] + m[(j, i)])
            };
            k += 1;
        }
    }
    out
}

/// Inverse of [`svec`].
pub(crate) fn unsvec(v: &DVector<f64>, n: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    let mut k = 0;
    let inv_sqrt2 = 1.0 / std::f64::consts::SQRT_2;
    for i in 0..n {
        for j in i..n {
            if i == j {
                m[(i, i)] = v[k];
            } else {
                m[(i, j)] = v[k] * inv_sqrt2;
                m[(j, i)] = v[k] * inv_sqrt2;
            }
            k += 1;
        }
    }
    m
}

/// Column-major vectorization.
pub(crate) fn vec_of(m: &Matrix) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

/// Least-squares solve of `a x = b` with explicit kernel extraction.
///
/// Returns the minimum-norm least-squares solution, an orthonormal basis
/// of the null space of `a` (as columns), and the residual norm
/// `||a x - b||`. Rank decisions use the relative rank cut.
pub(crate) struct LeastSquares {
    pub solution: DVector<f64>,
    pub kernel: Vec<DVector<f64>>,
    pub residual_norm: f64,
}

pub(crate) fn lstsq_with_kernel(
    a: &Matrix,
    b: &DVector<f64>,
    tol: &TolerancePolicy,
) -> LeastSquares {
    let cols = a.ncols();
    if cols == 0 {
        return LeastSquares {
            solution: DVector::zeros(0),
            kernel: Vec::new(),
            residual_norm: b.norm(),
        };
    }
    // Pad with zero rows so the thin SVD still spans the full domain; the
    // null space of a wide operator is otherwise truncated.
    let rows = a.nrows();
    let padded;
    let a_work = if rows < cols {
        let mut p = Matrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(a);
        padded = p;
        &padded
    } else {
        a
    };
    let mut b_work = DVector::zeros(a_work.nrows());
    b_work.rows_mut(0, rows).copy_from(b);

    let svd = a_work.clone().svd(true, true);
    let u = svd.u.as_ref().expect("SVD with u requested");
    let v_t = svd.v_t.as_ref().expect("SVD with v_t requested");
    let max_sv = svd.singular_values.max();
    let cut = tol.rank_cut(max_sv);
    let rank = svd.singular_values.iter().filter(|&&s| s > cut).count();

    let mut solution = DVector::zeros(cols);
    for i in 0..rank {
        let coeff = u.column(i).dot(&b_work) / svd.singular_values[i];
        solution += v_t.row(i).transpose() * coeff;
    }
    let kernel = (rank..cols).map(|i| v_t.row(i).transpose()).collect();
    let residual_norm = (a * &solution - b).norm();
    LeastSquares {
        solution,
        kernel,
        residual_norm,
    }
}

/// Orthonormal basis of the null space of an arbitrary matrix, as columns,
/// with an external scale for the rank cut. The scale matters when `m` is
/// a product (e.g. a power of `A - lambda I`) that may vanish in exact
/// arithmetic and consist entirely of rounding noise relative to the
/// factors' norms.
pub(crate) fn null_space_with_scale(m: &Matrix, scale: f64, tol: &TolerancePolicy) -> Matrix {
    let (rows, cols) = (m.nrows(), m.ncols());
    if cols == 0 {
        return Matrix::zeros(0, 0);
    }
    if rows == 0 {
        return Matrix::identity(cols, cols);
    }
    let padded;
    let m_work = if rows < cols {
        let mut p = Matrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        padded = p;
        &padded
    } else {
        m
    };
    let svd = m_work.clone().svd(false, true);
    let v_t = svd.v_t.expect("SVD with v_t requested");
    let max_sv = svd.singular_values.max();
    let cut = tol.rank_cut(max_sv.max(scale));
    let rank = svd.singular_values.iter().filter(|&&s| s > cut).count();
    let dim = cols - rank;
    if dim == 0 {
        return Matrix::zeros(cols, 0);
    }
    v_t.rows(rank, dim).transpose()
}

/// One term `coeff * L * X * R'` of a linear operator acting on matrices.
#[derive(Clone, Debug)]
pub struct OperatorTerm {
    pub coeff: f64,
    pub left: Matrix,
    pub right: Matrix,
}

/// Domain of a matrix-valued linear operator: all `rows x cols` matrices,
/// or the symmetric matrices of a given order.
#[derive(Clone, Debug)]
pub enum OperatorDomain {
    Full { rows: usize, cols: usize },
    Symmetric { order: usize },
}

/// Linear operator on matrices, `X -> sum_k coeff_k * L_k X R_k'`,
/// solvable through Kronecker vectorization.
#[derive(Clone, Debug)]
pub struct MatrixOperator {
    pub terms: Vec<OperatorTerm>,
    pub domain: OperatorDomain,
}

/// Outcome of a vectorized linear-matrix-equation solve.
#[derive(Clone, Debug)]
pub enum SolveOutcome {
    /// The system has exactly one solution.
    Unique(Matrix),
    /// The solution set is `particular + span(kernel_basis)`.
    Affine {
        particular: Matrix,
        kernel_basis: Vec<Matrix>,
    },
    /// No solution; the least-squares residual norm is reported.
    Inconsistent { residual_norm: f64 },
}

impl MatrixOperator {
    /// Stein operator `X -> A X A' - X` restricted to symmetric `X`.
    pub fn stein(a: &Matrix) -> Self {
        let n = a.nrows();
        MatrixOperator {
            terms: vec![
                OperatorTerm {
                    coeff: 1.0,
                    left: a.clone(),
                    right: a.clone(),
                },
                OperatorTerm {
                    coeff: -1.0,
                    left: Matrix::identity(n, n),
                    right: Matrix::identity(n, n),
                },
            ],
            domain: OperatorDomain::Symmetric { order: n },
        }
    }

    /// Stein-type operator `X -> M1 X M2' - X` on general matrices of shape
    /// `M1.ncols() x M2.ncols()`.
    pub fn stein_cross(m1: &Matrix, m2: &Matrix) -> Self {
        let rows = m1.ncols();
        let cols = m2.ncols();
        MatrixOperator {
            terms: vec![
                OperatorTerm {
                    coeff: 1.0,
                    left: m1.clone(),
                    right: m2.clone(),
                },
                OperatorTerm {
                    coeff: -1.0,
                    left: Matrix::identity(rows, rows),
                    right: Matrix::identity(cols, cols),
                },
            ],
            domain: OperatorDomain::Full { rows, cols },
        }
    }

    /// Shape of matrices in the operator's domain.
    pub fn domain_shape(&self) -> (usize, usize) {
        match self.domain {
            OperatorDomain::Full { rows, cols } => (rows, cols),
            OperatorDomain::Symmetric { order } => (order, order),
        }
    }

    /// Shape of the operator's output.
    pub fn output_shape(&self) -> Result<(usize, usize)> {
        let term = self
            .terms
            .first()
            .ok_or_else(|| Error::InvalidInput("operator has no terms".into()))?;
        Ok((term.left.nrows(), term.right.nrows()))
    }

    fn validate(&self) -> Result<()> {
        let (dr, dc) = self.domain_shape();
        let (or, oc) = self.output_shape()?;
        for term in &self.terms {
            require_finite("operator term", &term.left)?;
            require_finite("operator term", &term.right)?;
            if term.left.ncols() != dr || term.right.ncols() != dc {
                return Err(Error::InvalidInput(format!(
                    "operator term expects a {}x{} argument, domain is {dr}x{dc}",
                    term.left.ncols(),
                    term.right.ncols()
                )));
            }
            if term.left.nrows() != or || term.right.nrows() != oc {
                return Err(Error::InvalidInput(
                    "operator terms have mismatched output shapes".into(),
                ));
            }
        }
        Ok(())
    }

    /// Applies the operator to a concrete matrix.
    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        self.validate()?;
        let (dr, dc) = self.domain_shape();
        if x.nrows() != dr || x.ncols() != dc {
            return Err(Error::InvalidInput(format!(
                "operator argument must be {dr}x{dc}, got {}x{}",
                x.nrows(),
                x.ncols()
            )));
        }
        let (or, oc) = self.output_shape()?;
        let mut out = Matrix::zeros(or, oc);
        for term in &self.terms {
            out += (&term.left * x * term.right.transpose()) * term.coeff;
        }
        Ok(out)
    }

    /// Assembles the vectorized operator matrix. Rows run over the
    /// column-major vectorization of the output; columns over the domain
    /// coordinates (full vectorization, or the orthonormal symmetric
    /// coordinates for a symmetric domain).
    fn assemble(&self) -> Result<Matrix> {
        self.validate()?;
        let (or, oc) = self.output_shape()?;
        match self.domain {
            OperatorDomain::Full { rows, cols } => {
                // vec(L X R') = (R kron L) vec(X) in column-major layout.
                let mut op = Matrix::zeros(or * oc, rows * cols);
                for term in &self.terms {
                    op += term.right.kronecker(&term.left) * term.coeff;
                }
                Ok(op)
            }
            OperatorDomain::Symmetric { order } => {
                let mut op = Matrix::zeros(or * oc, sym_dim(order));
                let mut col = 0;
                let sqrt_half = std::f64::consts::FRAC_1_SQRT_2;
                for i in 0..order {
                    for j in i..order {
                        let mut e = Matrix::zeros(order, order);
                        if i == j {
                            e[(i, i)] = 1.0;
                        } else {
                            e[(i, j)] = sqrt_half;
                            e[(j, i)] = sqrt_half;
                        }
                        let image = self.apply(&e)?;
                        op.set_column(col, &vec_of(&image));
                        col += 1;
                    }
                }
                Ok(op)
            }
        }
    }

    fn coords_to_matrix(&self, coords: &DVector<f64>) -> Matrix {
        match self.domain {
            OperatorDomain::Full { rows, cols } => {
                Matrix::from_column_slice(rows, cols, coords.as_slice())
            }
            OperatorDomain::Symmetric { order } => unsvec(coords, order),
        }
    }
}

/// Solves the linear matrix equation `op(X) = rhs` by vectorization.
///
/// Solvability is classified by the least-squares residual against
/// `resid_tol * (1 + ||rhs||)`; the kernel basis comes from the null space
/// of the vectorized operator under the rank cut. Kernel elements are
/// normalized to unit Frobenius norm.
pub fn solve_vectorized(
    op: &MatrixOperator,
    rhs: &Matrix,
    tol: &TolerancePolicy,
) -> Result<SolveOutcome> {
    require_finite("right-hand side", rhs)?;
    let (or, oc) = op.output_shape()?;
    if rhs.nrows() != or || rhs.ncols() != oc {
        return Err(Error::InvalidInput(format!(
            "right-hand side must be {or}x{oc}, got {}x{}",
            rhs.nrows(),
            rhs.ncols()
        )));
    }
    let assembled = op.assemble()?;
    let b = vec_of(rhs);
    let ls = lstsq_with_kernel(&assembled, &b, tol);
    if ls.residual_norm > tol.resid_cut(rhs.norm()) {
        return Ok(SolveOutcome::Inconsistent {
            residual_norm: ls.residual_norm,
        });
    }
    let particular = op.coords_to_matrix(&ls.solution);
    if ls.kernel.is_empty() {
        Ok(SolveOutcome::Unique(particular))
    } else {
        let kernel_basis = ls
            .kernel
            .iter()
            .map(|v| {
                let m = op.coords_to_matrix(v);
                let norm = m.norm();
                m / norm
            })
            .collect();
        Ok(SolveOutcome::Affine {
            particular,
            kernel_basis,
        })
    }
}
