//! C ABI for the hare-core library.
//!
//! All functions are `extern "C"` with opaque handles and status codes so
//! other languages can bind without knowing the Rust layouts. Matrices
//! cross the boundary as row-major `double` buffers of length `n * n`
//! (or `n * m` for `B`).
//!
//! Handle lifetimes: every `*_new`/`*_solve`/`*_enumerate`/`*_classify`
//! function that yields a handle has a matching `*_free`; handles are
//! independent of the problem handle that produced them and may outlive
//! it.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use hare_core::io::matrix_rows;
use hare_core::{
    classify_solution, default_delta_samples, enumerate_families, enumerate_invariant_subspaces,
    hare_residual, solve_stein_set, theorem4_guarantee, Classification, Completeness, Error,
    FamilySolution, HareProblem, Matrix, SpectrumReport, SteinSolutionSet, SymMatrix,
    TolerancePolicy,
};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HareStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    SingularInput = 3,
    PreconditionViolated = 4,
    IndefiniteInnerTerm = 5,
    NumericalBreakdown = 6,
    NoSteinSolution = 7,
    BufferSize = 8,
    IndexOutOfRange = 9,
    WrongVerdict = 10,
    Internal = 11,
}

/// Classification verdict for a candidate solution.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HareVerdict {
    InFamily = 0,
    Spurious = 1,
    NotASolution = 2,
}

/// Tolerance overrides; pass NULL for the defaults (1e-10, 1e-8, 1e-10).
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct HareTolerances {
    pub rank_tol: f64,
    pub resid_tol: f64,
    pub sym_tol: f64,
}

/// Opaque problem handle.
pub struct HareProblemHandle {
    problem: HareProblem,
}

/// Opaque spectrum-report handle.
pub struct HareSpectrumHandle {
    report: SpectrumReport,
}

/// Opaque Stein solution-set handle.
pub struct HareSteinHandle {
    set: SteinSolutionSet,
}

/// Opaque family-enumeration handle.
pub struct HareFamiliesHandle {
    solutions: Vec<FamilySolution>,
    lattice_complete: bool,
}

/// Opaque classification handle.
pub struct HareClassificationHandle {
    verdict: HareVerdict,
    witness: Option<Matrix>,
    kernel_dim: Option<usize>,
    residual: Option<Matrix>,
    residual_norm: f64,
}

fn status_of(err: &Error) -> HareStatus {
    match err {
        Error::InvalidInput(_) => HareStatus::InvalidInput,
        Error::SingularInput(_) => HareStatus::SingularInput,
        Error::PreconditionViolated(_) => HareStatus::PreconditionViolated,
        Error::IndefiniteInnerTerm { .. } => HareStatus::IndefiniteInnerTerm,
        Error::NumericalBreakdown(_) => HareStatus::NumericalBreakdown,
        Error::NoSteinSolution => HareStatus::NoSteinSolution,
    }
}

/// Human-readable description of a status code (static storage).
#[no_mangle]
pub extern "C" fn hare_status_message(status: HareStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        HareStatus::Ok => b"ok\0",
        HareStatus::NullPointer => b"null pointer argument\0",
        HareStatus::InvalidInput => b"invalid input\0",
        HareStatus::SingularInput => b"singular input\0",
        HareStatus::PreconditionViolated => b"precondition violated\0",
        HareStatus::IndefiniteInnerTerm => b"R + B'QB is singular\0",
        HareStatus::NumericalBreakdown => b"numerical breakdown\0",
        HareStatus::NoSteinSolution => b"the Stein equation has no solution\0",
        HareStatus::BufferSize => b"output buffer has the wrong length\0",
        HareStatus::IndexOutOfRange => b"index out of range\0",
        HareStatus::WrongVerdict => b"field not available for this verdict\0",
        HareStatus::Internal => b"internal error\0",
    };
    msg.as_ptr() as *const c_char
}

/// Library version string (static storage).
#[no_mangle]
pub extern "C" fn hare_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

unsafe fn slice_matrix(ptr: *const f64, rows: usize, cols: usize) -> Option<Matrix> {
    if ptr.is_null() {
        return None;
    }
    let data = std::slice::from_raw_parts(ptr, rows * cols);
    Some(Matrix::from_row_slice(rows, cols, data))
}

fn copy_out(m: &Matrix, buf: *mut f64, len: usize) -> HareStatus {
    if buf.is_null() {
        return HareStatus::NullPointer;
    }
    if len != m.nrows() * m.ncols() {
        return HareStatus::BufferSize;
    }
    let rows = matrix_rows(m);
    let out = unsafe { std::slice::from_raw_parts_mut(buf, len) };
    for (i, row) in rows.iter().enumerate() {
        for (j, value) in row.iter().enumerate() {
            out[i * m.ncols() + j] = *value;
        }
    }
    HareStatus::Ok
}

fn guarded<F: FnOnce() -> HareStatus>(f: F) -> HareStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => HareStatus::Internal,
    }
}

/// Creates a problem from row-major `A` (`n x n`), `B` (`n x m`), and
/// optionally `R` (`m x m`, NULL for the identity) and tolerance
/// overrides (NULL for defaults). On success writes a handle that must be
/// released with [`hare_problem_free`].
///
/// # Safety
/// `a` must point to `n * n` readable doubles and `b` to `n * m`; `r`,
/// when non-NULL, to `m * m`. `out` must be a valid writable location.
#[no_mangle]
pub unsafe extern "C" fn hare_problem_new(
    a: *const f64,
    n: usize,
    b: *const f64,
    m: usize,
    r: *const f64,
    tolerances: *const HareTolerances,
    out: *mut *mut HareProblemHandle,
) -> HareStatus {
    if out.is_null() {
        return HareStatus::NullPointer;
    }
    guarded(|| {
        let Some(a) = slice_matrix(a, n, n) else {
            return HareStatus::NullPointer;
        };
        let Some(b) = slice_matrix(b, n, m) else {
            return HareStatus::NullPointer;
        };
        let tol = if tolerances.is_null() {
            TolerancePolicy::default()
        } else {
            let t = *tolerances;
            match TolerancePolicy::new(t.rank_tol, t.resid_tol, t.sym_tol) {
                Ok(tol) => tol,
                Err(e) => return status_of(&e),
            }
        };
        let r = if r.is_null() {
            SymMatrix::identity(m)
        } else {
            let raw = slice_matrix(r, m, m).expect("checked non-null");
            match SymMatrix::new(raw, &tol) {
                Ok(r) => r,
                Err(e) => return status_of(&e),
            }
        };
        match HareProblem::new(a, b, r, tol) {
            Ok(problem) => {
                *out = Box::into_raw(Box::new(HareProblemHandle { problem }));
                HareStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a problem handle. NULL is ignored.
///
/// # Safety
/// `handle` must be NULL or a pointer returned by [`hare_problem_new`]
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn hare_problem_free(handle: *mut HareProblemHandle) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// State dimension `n`, or 0 for NULL.
///
/// # Safety
/// `handle` must be NULL or a live problem handle.
#[no_mangle]
pub unsafe extern "C" fn hare_problem_state_dim(handle: *const HareProblemHandle) -> usize {
    handle.as_ref().map_or(0, |h| h.problem.dim())
}

/// Input dimension `m`, or 0 for NULL.
///
/// # Safety
/// `handle` must be NULL or a live problem handle.
#[no_mangle]
pub unsafe extern "C" fn hare_problem_input_dim(handle: *const HareProblemHandle) -> usize {
    handle.as_ref().map_or(0, |h| h.problem.input_dim())
}

/// Whether `(A, B)` is a reachable pair.
///
/// # Safety
/// `handle` must be a live problem handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hare_problem_is_reachable(
    handle: *const HareProblemHandle,
    out: *mut bool,
) -> HareStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return HareStatus::NullPointer;
    };
    *out = h.problem.reachable();
    HareStatus::Ok
}

/// Whether the enumerated families provably cover all solutions.
///
/// # Safety
/// `handle` must be a live problem handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hare_problem_theorem4_guarantee(
    handle: *const HareProblemHandle,
    out: *mut bool,
) -> HareStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return HareStatus::NullPointer;
    };
    guarded(|| {
        *out = theorem4_guarantee(&h.problem);
        HareStatus::Ok
    })
}

/// Copies the spectrum analysis out of the problem into its own handle.
///
/// # Safety
/// `handle` must be a live problem handle; `out` must be writable. The
/// result must be released with [`hare_spectrum_free`].
#[no_mangle]
pub unsafe extern "C" fn hare_spectrum_new(
    handle: *const HareProblemHandle,
    out: *mut *mut HareSpectrumHandle,
) -> HareStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return HareStatus::NullPointer;
    };
    *out = Box::into_raw(Box::new(HareSpectrumHandle {
        report: h.problem.spectrum().clone(),
    }));
    HareStatus::Ok
}

/// # Safety
/// `handle` must be NULL or a live spectrum handle, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn hare_spectrum_free(handle: *mut HareSpectrumHandle) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of distinct eigenvalues.
///
/// # Safety
/// `handle` must be NULL or a live spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn hare_spectrum_eigenvalue_count(
    handle: *const HareSpectrumHandle,
) -> usize {
    handle.as_ref().map_or(0, |h| h.report.eigenvalues.len())
}

/// Eigenvalue `index` as (re, im, algebraic multiplicity).
///
/// # Safety
/// `handle` must be a live spectrum handle; output pointers writable.
#[no_mangle]
pub unsafe extern "C" fn hare_spectrum_eigenvalue(
    handle: *const HareSpectrumHandle,
    index: usize,
    re: *mut f64,
    im: *mut f64,
    multiplicity: *mut usize,
) -> HareStatus {
    let Some(h) = handle.as_ref() else {
        return HareStatus::NullPointer;
    };
    if re.is_null() || im.is_null() || multiplicity.is_null() {
        return HareStatus::NullPointer;
    }
    let Some(class) = h.report.eigenvalues.get(index) else {
        return HareStatus::IndexOutOfRange;
    };
    *re = class.re;
    *im = class.im;
    *multiplicity = class.multiplicity;
    HareStatus::Ok
}

/// Number of reciprocal eigenvalue pairs.
///
/// # Safety
/// `handle` must be NULL or a live spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn hare_spectrum_reciprocal_pair_count(
    handle: *const HareSpectrumHandle,
) -> usize {
    handle
        .as_ref()
        .map_or(0, |h| h.report.reciprocal_pairs.len())
}

/// Reciprocal pair `index` as indices into the eigenvalue list.
///
/// # Safety
/// `handle` must be a live spectrum handle; output pointers writable.
#[no_mangle]
pub unsafe extern "C" fn hare_spectrum_reciprocal_pair(
    handle: *const HareSpectrumHandle,
    index: usize,
    first: *mut usize,
    second: *mut usize,
) -> HareStatus {
    let Some(h) = handle.as_ref() else {
        return HareStatus::NullPointer;
    };
    if first.is_null() || second.is_null() {
        return HareStatus::NullPointer;
    }
    let Some(&(i, j)) = h.report.reciprocal_pairs.get(index) else {
        return HareStatus::IndexOutOfRange;
    };
    *first = i;
    *second = j;
    HareStatus::Ok
}

/// Unmixing flag: true iff there are no reciprocal pairs.
///
/// # Safety
/// `handle` must be a live spectrum handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hare_spectrum_is_unmixed(
    handle: *const HareSpectrumHandle,
    out: *mut bool,
) -> HareStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return HareStatus::NullPointer;
    };
    *out = h.report.is_unmixed;
    HareStatus::Ok
}

/// # Safety
/// `handle` must be a live spectrum handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hare_spectrum_is_nonsingular(
    handle: *const HareSpectrumHandle,
    out: *mut bool,
) -> HareStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return HareStatus::NullPointer;
    };
    *out = h.report.is_nonsingular;
    HareStatus::Ok
}

/// # Safety
/// `handle` must be a live spectrum handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hare_spectrum_theorem4_applies(
    handle: *const HareSpectrumHandle,
    out: *mut bool,
) -> HareStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return HareStatus::NullPointer;
    };
    *out = h.report.theorem4_applies;
    HareStatus::Ok
}

/// Solves the Stein equation. The handle reports inconsistency through
/// [`hare_stein_exists`]; solving itself only fails on invalid handles.
///
/// # Safety
/// `handle` must be a live problem handle; `out` writable. The result
/// must be released with [`hare_stein_free`].
#[no_mangle]
pub unsafe extern "C" fn hare_stein_solve(
    handle: *const HareProblemHandle,
    out: *mut *mut HareSteinHandle,
) -> HareStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return HareStatus::NullPointer;
    };
    guarded(|| {
        let set = solve_stein_set(&h.problem, h.problem.tolerances());
        *out = Box::into_raw(Box::new(HareSteinHandle { set }));
        HareStatus::Ok
    })
}

/// # Safety
/// `handle` must be NULL or a live Stein handle, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn hare_stein_free(handle: *mut HareSteinHandle) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// # Safety
/// `handle` must be NULL or a live Stein handle.
#[no_mangle]
pub unsafe extern "C" fn hare_stein_exists(handle: *const HareSteinHandle) -> bool {
    handle.as_ref().is_some_and(|h| h.set.exists)
}

/// Dimension of the homogeneous kernel `{D = D' : A D A' = D}`.
///
/// # Safety
/// `handle` must be NULL or a live Stein handle.
#[no_mangle]
pub unsafe extern "C" fn hare_stein_kernel_dim(handle: *const HareSteinHandle) -> usize {
    handle.as_ref().map_or(0, |h| h.set.kernel_dim())
}

/// Copies the particular solution `P0` into a row-major buffer of length
/// `n * n`.
///
/// # Safety
/// `handle` must be a live Stein handle; `buf` must point to `len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hare_stein_particular(
    handle: *const HareSteinHandle,
    buf: *mut f64,
    len: usize,
) -> HareStatus {
    let Some(h) = handle.as_ref() else {
        return HareStatus::NullPointer;
    };
    if !h.set.exists {
        return HareStatus::NoSteinSolution;
    }
    copy_out(h.set.particular.matrix(), buf, len)
}

/// Copies kernel basis element `index` (unit Frobenius norm) into a
/// row-major buffer of length `n * n`.
///
/// # Safety
/// `handle` must be a live Stein handle; `buf` must point to `len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hare_stein_kernel_element(
    handle: *const HareSteinHandle,
    index: usize,
    buf: *mut f64,
    len: usize,
) -> HareStatus {
    let Some(h) = handle.as_ref() else {
        return HareStatus::NullPointer;
    };
    let Some(delta) = h.set.delta_basis.get(index) else {
        return HareStatus::IndexOutOfRange;
    };
    copy_out(delta.matrix(), buf, len)
}

/// Enumerates the solution families: `random_samples` seeded random
/// kernel-coefficient draws on top of the deterministic zero and signed
/// unit vectors.
///
/// # Safety
/// `handle` must be a live problem handle; `out` writable. The result
/// must be released with [`hare_families_free`].
#[no_mangle]
pub unsafe extern "C" fn hare_families_enumerate(
    handle: *const HareProblemHandle,
    random_samples: usize,
    seed: u64,
    out: *mut *mut HareFamiliesHandle,
) -> HareStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return HareStatus::NullPointer;
    };
    guarded(|| {
        let tol = *h.problem.tolerances();
        let set = solve_stein_set(&h.problem, &tol);
        if !set.exists {
            return HareStatus::NoSteinSolution;
        }
        let lattice = match enumerate_invariant_subspaces(h.problem.a(), &tol) {
            Ok(lattice) => lattice,
            Err(e) => return status_of(&e),
        };
        let samples = default_delta_samples(set.kernel_dim(), random_samples, seed);
        match enumerate_families(&h.problem, &set, &lattice, &samples, &tol) {
            Ok(solutions) => {
                *out = Box::into_raw(Box::new(HareFamiliesHandle {
                    solutions,
                    lattice_complete: lattice.completeness == Completeness::Complete,
                }));
                HareStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `handle` must be NULL or a live families handle, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn hare_families_free(handle: *mut HareFamiliesHandle) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// # Safety
/// `handle` must be NULL or a live families handle.
#[no_mangle]
pub unsafe extern "C" fn hare_families_count(handle: *const HareFamiliesHandle) -> usize {
    handle.as_ref().map_or(0, |h| h.solutions.len())
}

/// Whether the invariant-subspace lattice was enumerated completely
/// (false means only the trivial subspaces were available).
///
/// # Safety
/// `handle` must be NULL or a live families handle.
#[no_mangle]
pub unsafe extern "C" fn hare_families_lattice_complete(handle: *const HareFamiliesHandle) -> bool {
    handle.as_ref().is_some_and(|h| h.lattice_complete)
}

/// Copies solution `index` into a row-major buffer of length `n * n`.
///
/// # Safety
/// `handle` must be a live families handle; `buf` must point to `len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hare_families_solution(
    handle: *const HareFamiliesHandle,
    index: usize,
    buf: *mut f64,
    len: usize,
) -> HareStatus {
    let Some(h) = handle.as_ref() else {
        return HareStatus::NullPointer;
    };
    let Some(solution) = h.solutions.get(index) else {
        return HareStatus::IndexOutOfRange;
    };
    copy_out(solution.q.matrix(), buf, len)
}

/// Kernel dimension of solution `index`.
///
/// # Safety
/// `handle` must be a live families handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hare_families_kernel_dim(
    handle: *const HareFamiliesHandle,
    index: usize,
    out: *mut usize,
) -> HareStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return HareStatus::NullPointer;
    };
    let Some(solution) = h.solutions.get(index) else {
        return HareStatus::IndexOutOfRange;
    };
    *out = solution.subspace.dim();
    HareStatus::Ok
}

/// Achieved Riccati residual norm of solution `index`.
///
/// # Safety
/// `handle` must be a live families handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hare_families_residual_norm(
    handle: *const HareFamiliesHandle,
    index: usize,
    out: *mut f64,
) -> HareStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return HareStatus::NullPointer;
    };
    let Some(solution) = h.solutions.get(index) else {
        return HareStatus::IndexOutOfRange;
    };
    *out = solution.residual_norm;
    HareStatus::Ok
}

/// Classifies a row-major symmetric candidate `q` (`n * n` doubles).
///
/// # Safety
/// `handle` must be a live problem handle; `q` must point to `n * n`
/// readable doubles; `out` writable. The result must be released with
/// [`hare_classification_free`].
#[no_mangle]
pub unsafe extern "C" fn hare_classify(
    handle: *const HareProblemHandle,
    q: *const f64,
    out: *mut *mut HareClassificationHandle,
) -> HareStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return HareStatus::NullPointer;
    };
    guarded(|| {
        let n = h.problem.dim();
        let Some(q_raw) = slice_matrix(q, n, n) else {
            return HareStatus::NullPointer;
        };
        let tol = *h.problem.tolerances();
        let q = match SymMatrix::new(q_raw, &tol) {
            Ok(q) => q,
            Err(e) => return status_of(&e),
        };
        let result = match classify_solution(&h.problem, &q, &tol) {
            Ok(result) => result,
            Err(e) => return status_of(&e),
        };
        let boxed = match result {
            Classification::InFamily { witness, subspace } => HareClassificationHandle {
                verdict: HareVerdict::InFamily,
                kernel_dim: Some(subspace.dim()),
                witness: Some(witness.into_matrix()),
                residual: None,
                residual_norm: 0.0,
            },
            Classification::Spurious {
                extension_residual,
                residual_norm,
            } => HareClassificationHandle {
                verdict: HareVerdict::Spurious,
                kernel_dim: None,
                witness: None,
                residual: Some(extension_residual.into_matrix()),
                residual_norm,
            },
            Classification::NotASolution { hare_residual_norm } => HareClassificationHandle {
                verdict: HareVerdict::NotASolution,
                kernel_dim: None,
                witness: None,
                residual: None,
                residual_norm: hare_residual_norm,
            },
        };
        *out = Box::into_raw(Box::new(boxed));
        HareStatus::Ok
    })
}

/// # Safety
/// `handle` must be NULL or a live classification handle, freed at most
/// once.
#[no_mangle]
pub unsafe extern "C" fn hare_classification_free(handle: *mut HareClassificationHandle) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Verdict of a classification; NULL maps to `NotASolution`.
///
/// # Safety
/// `handle` must be NULL or a live classification handle.
#[no_mangle]
pub unsafe extern "C" fn hare_classification_verdict(
    handle: *const HareClassificationHandle,
) -> HareVerdict {
    handle
        .as_ref()
        .map_or(HareVerdict::NotASolution, |h| h.verdict)
}

/// Kernel dimension of the candidate, available for in-family verdicts.
///
/// # Safety
/// `handle` must be a live classification handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hare_classification_kernel_dim(
    handle: *const HareClassificationHandle,
    out: *mut usize,
) -> HareStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return HareStatus::NullPointer;
    };
    match h.kernel_dim {
        Some(dim) => {
            *out = dim;
            HareStatus::Ok
        }
        None => HareStatus::WrongVerdict,
    }
}

/// Copies the witnessing Stein solution (in-family verdicts only) into a
/// row-major `n * n` buffer.
///
/// # Safety
/// `handle` must be a live classification handle; `buf` must point to
/// `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hare_classification_witness(
    handle: *const HareClassificationHandle,
    buf: *mut f64,
    len: usize,
) -> HareStatus {
    let Some(h) = handle.as_ref() else {
        return HareStatus::NullPointer;
    };
    match &h.witness {
        Some(witness) => copy_out(witness, buf, len),
        None => HareStatus::WrongVerdict,
    }
}

/// Copies the extension-inconsistency residual (spurious verdicts only)
/// into a row-major `n * n` buffer.
///
/// # Safety
/// `handle` must be a live classification handle; `buf` must point to
/// `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hare_classification_residual(
    handle: *const HareClassificationHandle,
    buf: *mut f64,
    len: usize,
) -> HareStatus {
    let Some(h) = handle.as_ref() else {
        return HareStatus::NullPointer;
    };
    match &h.residual {
        Some(residual) => copy_out(residual, buf, len),
        None => HareStatus::WrongVerdict,
    }
}

/// Residual norm attached to the verdict: the extension inconsistency for
/// spurious candidates, the equation residual for non-solutions, zero for
/// in-family verdicts.
///
/// # Safety
/// `handle` must be a live classification handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hare_classification_residual_norm(
    handle: *const HareClassificationHandle,
    out: *mut f64,
) -> HareStatus {
    let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
        return HareStatus::NullPointer;
    };
    *out = h.residual_norm;
    HareStatus::Ok
}

/// Evaluates the Riccati residual norm of a row-major symmetric candidate
/// and whether it passes the acceptance threshold. A singular `R + B'QB`
/// reports an infinite residual with `is_solution = false`.
///
/// # Safety
/// `handle` must be a live problem handle; `q` must point to `n * n`
/// readable doubles; output pointers writable.
#[no_mangle]
pub unsafe extern "C" fn hare_verify(
    handle: *const HareProblemHandle,
    q: *const f64,
    out_residual_norm: *mut f64,
    out_is_solution: *mut bool,
) -> HareStatus {
    let Some(h) = handle.as_ref() else {
        return HareStatus::NullPointer;
    };
    if out_residual_norm.is_null() || out_is_solution.is_null() {
        return HareStatus::NullPointer;
    }
    guarded(|| {
        let n = h.problem.dim();
        let Some(q_raw) = slice_matrix(q, n, n) else {
            return HareStatus::NullPointer;
        };
        let tol = *h.problem.tolerances();
        let q = match SymMatrix::new(q_raw, &tol) {
            Ok(q) => q,
            Err(e) => return status_of(&e),
        };
        match hare_residual(&h.problem, &q) {
            Ok((_, norm)) => {
                *out_residual_norm = norm;
                *out_is_solution = norm <= tol.resid_cut(q.norm());
                HareStatus::Ok
            }
            Err(Error::IndefiniteInnerTerm { .. }) => {
                *out_residual_norm = f64::INFINITY;
                *out_is_solution = false;
                HareStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}
