//! Thin safe wrappers over the LAPACK routines the kernel relies on.

use std::sync::Once;

use nalgebra::{DMatrix, DVector};

use super::mat::C64;

extern "C" {
    fn openblas_set_num_threads(num_threads: std::ffi::c_int);
}

static SINGLE_THREADED: Once = Once::new();

/// Parallelism lives in the sample loops; BLAS stays on the calling thread
/// so results do not depend on scheduling.
fn init() {
    SINGLE_THREADED.call_once(|| unsafe { openblas_set_num_threads(1) });
}

/// Relative Frobenius error above which a factorization is rejected.
const RECONSTRUCTION_CHECK: f64 = 1e-11;

/// Thin SVD `m = U diag(s) Vᴴ` by `zgesvd`: returns `(s, U, Vᴴ)` with `s`
/// nonincreasing, or `None` if LAPACK fails or the factors do not
/// reconstruct `m`.
pub(crate) fn svd(m: &DMatrix<C64>) -> Option<(Vec<f64>, DMatrix<C64>, DMatrix<C64>)> {
    init();
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    let (mi, ni, ki) = (rows as i32, cols as i32, k as i32);
    let zero = C64::new(0.0, 0.0);
    let mut a: Vec<C64> = m.as_slice().to_vec();
    let mut s = vec![0.0; k];
    let mut u = vec![zero; rows * k];
    let mut vt = vec![zero; k * cols];
    let mut rwork = vec![0.0; 5 * k];
    let mut info = 0;
    let mut query = [zero];
    unsafe {
        lapack::zgesvd(
            b'S', b'S', mi, ni, &mut a, mi, &mut s, &mut u, mi, &mut vt, ki, &mut query, -1,
            &mut rwork, &mut info,
        );
    }
    if info != 0 {
        return None;
    }
    let lwork = (query[0].re as usize).max(1);
    let mut work = vec![zero; lwork];
    unsafe {
        lapack::zgesvd(
            b'S', b'S', mi, ni, &mut a, mi, &mut s, &mut u, mi, &mut vt, ki, &mut work,
            lwork as i32, &mut rwork, &mut info,
        );
    }
    if info != 0 {
        return None;
    }
    let u = DMatrix::from_column_slice(rows, k, &u);
    let vt = DMatrix::from_column_slice(k, cols, &vt);
    let rebuilt = &u * DMatrix::from_diagonal(&DVector::from_iterator(
        k,
        s.iter().map(|&v| C64::new(v, 0.0)),
    )) * &vt;
    if (rebuilt - m).norm() > RECONSTRUCTION_CHECK * m.norm().max(f64::MIN_POSITIVE) {
        return None;
    }
    Some((s, u, vt))
}

/// Eigendecomposition of a Hermitian matrix by `zheevd`: returns the
/// eigenvalues in ascending order and the matching orthonormal eigenvectors
/// as columns. Only the lower triangle of `m` is read.
pub(crate) fn hermitian_eigen(m: &DMatrix<C64>) -> Option<(Vec<f64>, DMatrix<C64>)> {
    init();
    let n = m.nrows();
    if n != m.ncols() {
        return None;
    }
    let ni = n as i32;
    let zero = C64::new(0.0, 0.0);
    let mut a: Vec<C64> = m.as_slice().to_vec();
    let mut w = vec![0.0; n];
    let mut info = 0;
    let mut work_q = [zero];
    let mut rwork_q = [0.0];
    let mut iwork_q = [0];
    unsafe {
        lapack::zheevd(
            b'V', b'L', ni, &mut a, ni, &mut w, &mut work_q, -1, &mut rwork_q, -1, &mut iwork_q,
            -1, &mut info,
        );
    }
    if info != 0 {
        return None;
    }
    let lwork = (work_q[0].re as usize).max(1);
    let lrwork = (rwork_q[0] as usize).max(1);
    let liwork = (iwork_q[0] as usize).max(1);
    let mut work = vec![zero; lwork];
    let mut rwork = vec![0.0; lrwork];
    let mut iwork = vec![0; liwork];
    unsafe {
        lapack::zheevd(
            b'V', b'L', ni, &mut a, ni, &mut w, &mut work, lwork as i32, &mut rwork,
            lrwork as i32, &mut iwork, liwork as i32, &mut info,
        );
    }
    if info != 0 {
        return None;
    }
    let v = DMatrix::from_column_slice(n, n, &a);
    let rebuilt = &v
        * DMatrix::from_diagonal(&DVector::from_iterator(n, w.iter().map(|&x| C64::new(x, 0.0))))
        * v.adjoint();
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    if (rebuilt - &herm).norm() > RECONSTRUCTION_CHECK * herm.norm().max(f64::MIN_POSITIVE) {
        return None;
    }
    Some((w, v))
}
