//! Spectral analysis of the dynamics matrix: eigenvalue clustering,
//! reciprocal-pair (unmixing) detection, reachability, and enumeration of
//! invariant subspaces with orthonormal bases.

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    null_space_with_scale, orthonormal_basis, require_finite, Matrix, SymMatrix, TolerancePolicy,
};

/// Relative tolerance for merging computed eigenvalues into one cluster.
/// Defective eigenvalues of a k-fold Jordan block split by roughly
/// eps^(1/k) under rounding, so this must sit well above sqrt(eps).
const EIGEN_CLUSTER_REL_TOL: f64 = 1e-5;

/// Relative tolerance on |lambda_i * lambda_j - 1| for reciprocal-pair
/// detection, applied to cluster representatives.
const RECIPROCAL_REL_TOL: f64 = 1e-8;

/// One distinct eigenvalue (cluster representative) with its algebraic
/// multiplicity. Complex eigenvalues appear together with their conjugates.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EigenvalueClass {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

impl EigenvalueClass {
    pub fn value(&self) -> Complex<f64> {
        Complex::new(self.re, self.im)
    }
}

/// Result of [`analyze_spectrum`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Distinct eigenvalues with algebraic multiplicities.
    pub eigenvalues: Vec<EigenvalueClass>,
    /// Index pairs `(i, j)`, `i <= j`, into `eigenvalues` with
    /// `lambda_i * lambda_j = 1` (within tolerance). A self-pair `(i, i)`
    /// marks `lambda = +-1`.
    pub reciprocal_pairs: Vec<(usize, usize)>,
    /// True iff `reciprocal_pairs` is empty.
    pub is_unmixed: bool,
    /// True iff no eigenvalue magnitude falls under the rank cut.
    pub is_nonsingular: bool,
    /// True iff there is at most one reciprocal pair and, when present,
    /// both eigenvalues involved are simple.
    pub theorem4_applies: bool,
}

fn cluster_eigenvalues(raw: &[Complex<f64>]) -> Vec<(Complex<f64>, usize)> {
    let n = raw.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = 1.0 + raw[i].norm().max(raw[j].norm());
            if (raw[i] - raw[j]).norm() <= EIGEN_CLUSTER_REL_TOL * scale {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut clusters: Vec<(Complex<f64>, usize)> = Vec::new();
    let mut root_slot = std::collections::HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        let slot = *root_slot.entry(r).or_insert_with(|| {
            clusters.push((Complex::new(0.0, 0.0), 0));
            clusters.len() - 1
        });
        clusters[slot].0 += raw[i];
        clusters[slot].1 += 1;
    }
    for (sum, count) in clusters.iter_mut() {
        *sum /= *count as f64;
        // Means of conjugate-closed clusters are real up to rounding.
        let scale = 1.0 + sum.norm();
        if sum.im.abs() <= EIGEN_CLUSTER_REL_TOL * scale {
            sum.im = 0.0;
        }
    }
    clusters.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .expect("finite eigenvalues")
    });
    clusters
}

/// Computes eigenvalues (via a real Schur decomposition), detects
/// reciprocal pairs, and decides the unmixing and Theorem-4 flags.
pub fn analyze_spectrum(a: &Matrix, tol: &TolerancePolicy) -> Result<SpectrumReport> {
    require_finite("A", a)?;
    if a.nrows() != a.ncols() {
        return Err(Error::InvalidInput(format!(
            "spectral analysis requires a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let raw: Vec<Complex<f64>> = a.complex_eigenvalues().iter().copied().collect();
    let clusters = cluster_eigenvalues(&raw);
    let eigenvalues: Vec<EigenvalueClass> = clusters
        .iter()
        .map(|(v, m)| EigenvalueClass {
            re: v.re,
            im: v.im,
            multiplicity: *m,
        })
        .collect();

    let mut reciprocal_pairs = Vec::new();
    for i in 0..eigenvalues.len() {
        for j in i..eigenvalues.len() {
            let product = eigenvalues[i].value() * eigenvalues[j].value();
            if (product - Complex::new(1.0, 0.0)).norm()
                <= RECIPROCAL_REL_TOL * (1.0 + product.norm())
            {
                reciprocal_pairs.push((i, j));
            }
        }
    }

    let max_mag = raw.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let min_mag = raw.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    let is_nonsingular = if raw.is_empty() {
        true
    } else {
        min_mag > tol.rank_cut(max_mag)
    };

    let is_unmixed = reciprocal_pairs.is_empty();
    let theorem4_applies = match reciprocal_pairs.as_slice() {
        [] => true,
        [(i, j)] => eigenvalues[*i].multiplicity == 1 && eigenvalues[*j].multiplicity == 1,
        _ => false,
    };

    Ok(SpectrumReport {
        eigenvalues,
        reciprocal_pairs,
        is_unmixed,
        is_nonsingular,
        theorem4_applies,
    })
}

/// A subspace of R^n held as an orthonormal basis (possibly zero columns).
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    /// The zero subspace of R^n.
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(ambient_dim, 0),
        }
    }

    /// The full space R^n.
    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim, ambient_dim),
        }
    }

    /// Builds a subspace from an arbitrary spanning set by
    /// orthonormalization; the dimension is the numerical rank of `span`.
    pub fn from_span(span: &Matrix, tol: &TolerancePolicy) -> Result<Self> {
        let basis = orthonormal_basis(span, tol)?;
        Ok(Subspace {
            ambient_dim: span.nrows(),
            basis,
        })
    }

    /// Wraps a matrix whose columns are already orthonormal.
    pub fn from_orthonormal(basis: Matrix, tol: &TolerancePolicy) -> Result<Self> {
        require_finite("basis", &basis)?;
        let k = basis.ncols();
        let defect = (basis.transpose() * &basis - Matrix::identity(k, k)).norm();
        if defect > tol.resid_cut(1.0) {
            return Err(Error::InvalidInput(format!(
                "basis columns are not orthonormal: ||S'S - I|| = {defect:.3e}"
            )));
        }
        Ok(Subspace {
            ambient_dim: basis.nrows(),
            basis,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Orthogonal projector `S S'` onto this subspace.
    pub fn projector(&self) -> SymMatrix {
        SymMatrix::symmetrized(&self.basis * self.basis.transpose())
            .expect("orthonormal basis is finite")
    }

    /// Frobenius distance between the projectors of two subspaces; zero iff
    /// the subspaces coincide.
    pub fn projector_distance(&self, other: &Subspace) -> f64 {
        (self.projector().matrix() - other.projector().matrix()).norm()
    }
}

/// True iff `(I - SS') A S` vanishes within tolerance, i.e. `A` maps the
/// subspace into itself.
pub fn check_invariant(a: &Matrix, s: &Subspace, tol: &TolerancePolicy) -> Result<bool> {
    require_finite("A", a)?;
    if a.nrows() != a.ncols() || a.nrows() != s.ambient_dim() {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch: A is {}x{}, subspace ambient dimension is {}",
            a.nrows(),
            a.ncols(),
            s.ambient_dim()
        )));
    }
    if s.dim() == 0 {
        return Ok(true);
    }
    let image = a * s.basis();
    let residual = &image - s.basis() * (s.basis().transpose() * &image);
    Ok(residual.norm() <= tol.resid_cut(a.norm()))
}

/// Whether an enumerated lattice provably contains every invariant
/// subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Completeness {
    /// The matrix is non-derogatory and the finite lattice is complete.
    Complete,
    /// Only user-supplied subspaces (plus the trivial ones) are listed.
    UserSuppliedOnly,
}

/// A finite collection of invariant subspaces, always containing `{0}`
/// and R^n.
#[derive(Clone, Debug)]
pub struct InvariantLattice {
    pub subspaces: Vec<Subspace>,
    pub completeness: Completeness,
}

impl InvariantLattice {
    /// The two trivial subspaces only, flagged as incomplete.
    pub fn trivial(ambient_dim: usize) -> Self {
        InvariantLattice {
            subspaces: vec![Subspace::zero(ambient_dim), Subspace::full(ambient_dim)],
            completeness: Completeness::UserSuppliedOnly,
        }
    }

    /// Builds a lattice from user-supplied subspaces, each verified
    /// A-invariant, with the trivial subspaces added and duplicates
    /// removed.
    pub fn from_user_subspaces(
        a: &Matrix,
        supplied: Vec<Subspace>,
        tol: &TolerancePolicy,
    ) -> Result<Self> {
        let n = a.nrows();
        let mut subspaces = vec![Subspace::zero(n), Subspace::full(n)];
        for s in supplied {
            if !check_invariant(a, &s, tol)? {
                return Err(Error::PreconditionViolated(format!(
                    "supplied subspace of dimension {} is not A-invariant",
                    s.dim()
                )));
            }
            if subspaces
                .iter()
                .all(|existing| existing.projector_distance(&s) > tol.resid_cut(1.0))
            {
                subspaces.push(s);
            }
        }
        subspaces.sort_by_key(Subspace::dim);
        Ok(InvariantLattice {
            subspaces,
            completeness: Completeness::UserSuppliedOnly,
        })
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }
}

/// One spectral atom for enumeration: a real eigenvalue, or a complex
/// conjugate pair fused into a single real atom of even dimension.
struct SpectralAtom {
    /// Chain-prefix bases: `prefixes[j]` spans the kernel of the j-th power
    /// of the atom's characteristic factor (dimension `j * step`).
    prefixes: Vec<Matrix>,
    /// 1 for a real eigenvalue, 2 for a complex pair.
    step: usize,
    multiplicity: usize,
}

fn atom_prefixes(
    a: &Matrix,
    factor: &Matrix,
    step: usize,
    mult: usize,
    tol: &TolerancePolicy,
) -> Option<SpectralAtom> {
    let n = a.nrows();
    let mut power = Matrix::identity(n, n);
    let mut prefixes = Vec::with_capacity(mult + 1);
    prefixes.push(Matrix::zeros(n, 0));
    // Rank decisions on the powers are taken relative to the factor's
    // scale: a power that vanishes in exact arithmetic (Cayley-Hamilton)
    // is rounding noise, not a full-rank matrix.
    let factor_scale = 1.0 + factor.norm();
    for j in 1..=mult {
        power = &power * factor;
        let kernel = null_space_with_scale(&power, factor_scale.powi(j as i32), tol);
        if kernel.ncols() != j * step {
            // Geometric multiplicity above one, or clustering mismatch:
            // the lattice is not a finite chain product.
            return None;
        }
        prefixes.push(kernel);
    }
    Some(SpectralAtom {
        prefixes,
        step,
        multiplicity: mult,
    })
}

/// Enumerates all invariant subspaces of a nonsingular, non-derogatory
/// matrix as direct sums of Jordan-chain prefixes, one prefix per distinct
/// eigenvalue, with complex-conjugate pairs handled jointly so every basis
/// is real. Falls back to the trivial lattice (flagged
/// `UserSuppliedOnly`) whenever completeness cannot be certified.
pub fn enumerate_invariant_subspaces(
    a: &Matrix,
    tol: &TolerancePolicy,
) -> Result<InvariantLattice> {
    require_finite("A", a)?;
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::InvalidInput(format!(
            "enumeration requires a square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    let spectrum = analyze_spectrum(a, tol)?;
    if !spectrum.is_nonsingular {
        return Err(Error::InvalidInput(
            "invariant-subspace enumeration requires a nonsingular matrix".into(),
        ));
    }

    // Fuse conjugate classes into real atoms.
    let mut atoms: Vec<SpectralAtom> = Vec::new();
    let identity = Matrix::identity(n, n);
    let mut covered = 0usize;
    let mut ok = true;
    for class in &spectrum.eigenvalues {
        if class.im < 0.0 {
            continue; // handled jointly with the conjugate
        }
        let atom = if class.im == 0.0 {
            let factor = a - &identity * class.re;
            atom_prefixes(a, &factor, 1, class.multiplicity, tol)
        } else {
            // Real quadratic factor of the conjugate pair.
            let norm_sq = class.re * class.re + class.im * class.im;
            let factor = a * a - a * (2.0 * class.re) + &identity * norm_sq;
            atom_prefixes(a, &factor, 2, class.multiplicity, tol)
        };
        match atom {
            Some(atom) => {
                covered += atom.step * atom.multiplicity;
                atoms.push(atom);
            }
            None => {
                ok = false;
                break;
            }
        }
    }
    if !ok || covered != n {
        return Ok(InvariantLattice::trivial(n));
    }

    // Cartesian product of prefix levels across atoms.
    let mut members: Vec<Subspace> = Vec::new();
    let mut levels = vec![0usize; atoms.len()];
    loop {
        let total: usize = levels
            .iter()
            .zip(&atoms)
            .map(|(&l, atom)| l * atom.step)
            .sum();
        let subspace = if total == 0 {
            Subspace::zero(n)
        } else {
            let cols: Vec<Matrix> = levels
                .iter()
                .zip(&atoms)
                .filter(|(&l, _)| l > 0)
                .map(|(&l, atom)| atom.prefixes[l].clone())
                .collect();
            let mut stacked = Matrix::zeros(n, total);
            let mut offset = 0;
            for c in &cols {
                stacked.view_mut((0, offset), (n, c.ncols())).copy_from(c);
                offset += c.ncols();
            }
            let s = Subspace::from_span(&stacked, tol)?;
            if s.dim() != total {
                return Ok(InvariantLattice::trivial(n));
            }
            s
        };
        if !check_invariant(a, &subspace, tol)? {
            return Ok(InvariantLattice::trivial(n));
        }
        members.push(subspace);

        // Advance the mixed-radix counter.
        let mut i = 0;
        loop {
            if i == atoms.len() {
                members.sort_by_key(Subspace::dim);
                return Ok(InvariantLattice {
                    subspaces: members,
                    completeness: Completeness::Complete,
                });
            }
            if levels[i] < atoms[i].multiplicity {
                levels[i] += 1;
                break;
            }
            levels[i] = 0;
            i += 1;
        }
    }
}

/// Reachability of `(A, B)`: full row rank of the controllability matrix
/// `[B, AB, ..., A^(n-1) B]` under the rank tolerance.
pub fn is_reachable(a: &Matrix, b: &Matrix, tol: &TolerancePolicy) -> Result<bool> {
    require_finite("A", a)?;
    require_finite("B", b)?;
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch: A is {}x{}, B is {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let m = b.ncols();
    if n == 0 {
        return Ok(true);
    }
    if m == 0 {
        return Ok(false);
    }
    let mut ctrb = Matrix::zeros(n, n * m);
    let mut block = b.clone();
    for k in 0..n {
        ctrb.view_mut((0, k * m), (n, m)).copy_from(&block);
        block = a * &block;
    }
    let svd = ctrb.svd(false, false);
    let max_sv = svd.singular_values.max();
    let cut = tol.rank_cut(max_sv);
    let rank = svd.singular_values.iter().filter(|&&s| s > cut).count();
    Ok(rank == n)
}
