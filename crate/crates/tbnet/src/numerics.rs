//! Dense complex linear algebra substrate: LU solves, general (non-Hermitian)
//! eigendecomposition, Sylvester equations, polynomial roots, and fixed-step
//! propagation of linear ODE systems.
//!
//! Factorizations and eigendecompositions are delegated to LAPACK
//! (zgesv/zgecon/zgeev via the system OpenBLAS); everything downstream of them
//! lives here. All operations are pure functions of their inputs.

use crate::error::{Error, Result};
use ndarray::{Array1, Array2};

pub type C64 = num_complex::Complex64;
/// Dense complex matrix, row-major.
pub type CMatrix = Array2<C64>;
pub type CVector = Array1<C64>;

/// Default residual tolerance for linear solves: ||Ax - b|| <= tol*(||A||*||x|| + ||b||).
pub const SOLVE_TOL: f64 = 1e-10;
/// Documented eigendecomposition residual bound: ||A v - w v|| <= tol * ||A|| * ||v||.
pub const EIG_TOL: f64 = 1e-9;
/// Reciprocal-condition floor; below it a solve reports `SingularMatrix`.
/// Equivalently, condition estimates above ~1e14 are rejected.
pub const RCOND_FLOOR: f64 = 1e-14;
/// Cap on dt*||H||_inf for the fixed-step integrator. The classical RK4
/// stability interval on the imaginary axis is |lambda*dt| < 2*sqrt(2);
/// the cap keeps a margin below it.
pub const RK4_STABILITY_CAP: f64 = 2.5;
/// Relative gap under which two spectra are treated as overlapping.
pub const SPECTRA_GAP_TOL: f64 = 1e-10;

pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Eigenvalues and right eigenvectors of a general complex matrix.
///
/// `values[k]` pairs with column `k` of `right_vectors`; pairs are sorted by
/// real part, then imaginary part, so spectra are stable across runs.
/// Residuals satisfy ||A v_k - w_k v_k|| <= [`EIG_TOL`] * ||A|| * ||v_k||.
#[derive(Debug, Clone)]
pub struct EigResult {
    pub values: CVector,
    pub right_vectors: CMatrix,
}

/// Uniformly sampled propagation history; `states[k]` is the state at `times[k]`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<CVector>,
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Infinity norm (max row sum of magnitudes).
pub fn norm_inf(a: &CMatrix) -> f64 {
    a.rows()
        .into_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum())
        .fold(0.0, f64::max)
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn ensure_finite_mat(a: &CMatrix, context: &'static str) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(context))
    }
}

fn ensure_finite_vec(v: &CVector, context: &'static str) -> Result<()> {
    if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(context))
    }
}

fn require_square(a: &CMatrix, context: &str) -> Result<usize> {
    let (r, c) = a.dim();
    if r != c || r == 0 {
        return Err(Error::DimensionMismatch(format!(
            "{context}: expected a nonempty square matrix, got {r}x{c}"
        )));
    }
    Ok(r)
}

fn to_col_major(a: &CMatrix) -> Vec<C64> {
    let (rows, cols) = a.dim();
    let mut v = Vec::with_capacity(rows * cols);
    for j in 0..cols {
        for i in 0..rows {
            v.push(a[(i, j)]);
        }
    }
    v
}

/// LU-factorize `a` (column-major, in place) and solve for `nrhs` right-hand
/// sides stored column-major in `b`. Checks the reciprocal condition number.
fn lu_solve_col_major(a: &mut [C64], n: usize, b: &mut [C64], nrhs: usize) -> Result<()> {
    let ni = n as i32;
    // 1-norm of A before factorization, for zgecon.
    let anorm = unsafe { lapack::zlange(b'1', ni, ni, a, ni, &mut []) };
    let mut ipiv = vec![0i32; n];
    let mut info = 0i32;
    unsafe {
        lapack::zgesv(ni, nrhs as i32, a, ni, &mut ipiv, b, ni, &mut info);
    }
    if info > 0 {
        return Err(Error::SingularMatrix { rcond: 0.0 });
    }
    assert!(info == 0, "zgesv: illegal argument {}", -info);
    let mut rcond = 0.0;
    let mut work = vec![ZERO; 2 * n];
    let mut rwork = vec![0.0f64; 2 * n];
    unsafe {
        lapack::zgecon(b'1', ni, a, ni, anorm, &mut rcond, &mut work, &mut rwork, &mut info);
    }
    assert!(info == 0, "zgecon: illegal argument {}", -info);
    if rcond < RCOND_FLOOR {
        return Err(Error::SingularMatrix { rcond });
    }
    Ok(())
}

/// Solve A x = b for a square, numerically nonsingular A.
///
/// Satisfies ||A x - b|| <= [`SOLVE_TOL`] * (||A|| ||x|| + ||b||) for matrices
/// passing the condition check.
pub fn solve_linear(a: &CMatrix, b: &CVector) -> Result<CVector> {
    let n = require_square(a, "solve_linear")?;
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "solve_linear: rhs length {} vs matrix order {n}",
            b.len()
        )));
    }
    ensure_finite_mat(a, "solve_linear matrix")?;
    ensure_finite_vec(b, "solve_linear rhs")?;
    let mut af = to_col_major(a);
    let mut bf: Vec<C64> = b.to_vec();
    lu_solve_col_major(&mut af, n, &mut bf, 1)?;
    Ok(CVector::from_vec(bf))
}

/// Solve A X = B column by column (B is n x k).
pub fn solve_linear_multi(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let n = require_square(a, "solve_linear_multi")?;
    let (br, bc) = b.dim();
    if br != n {
        return Err(Error::DimensionMismatch(format!(
            "solve_linear_multi: rhs has {br} rows vs matrix order {n}"
        )));
    }
    ensure_finite_mat(a, "solve_linear_multi matrix")?;
    ensure_finite_mat(b, "solve_linear_multi rhs")?;
    let mut af = to_col_major(a);
    let mut bf = to_col_major(b);
    lu_solve_col_major(&mut af, n, &mut bf, bc)?;
    let mut x = CMatrix::zeros((n, bc));
    for j in 0..bc {
        for i in 0..n {
            x[(i, j)] = bf[i + j * n];
        }
    }
    Ok(x)
}

/// Full eigendecomposition of a general complex matrix (LAPACK zgeev).
pub fn eig_dense(a: &CMatrix) -> Result<EigResult> {
    let n = require_square(a, "eig_dense")?;
    ensure_finite_mat(a, "eig_dense matrix")?;
    let ni = n as i32;
    let mut af = to_col_major(a);
    let mut w = vec![ZERO; n];
    let mut vl = vec![ZERO; 1];
    let mut vr = vec![ZERO; n * n];
    let mut rwork = vec![0.0f64; 2 * n];
    let mut info = 0i32;
    // Workspace query, then the real call.
    let mut query = [ZERO; 1];
    unsafe {
        lapack::zgeev(
            b'N', b'V', ni, &mut af, ni, &mut w, &mut vl, 1, &mut vr, ni, &mut query, -1,
            &mut rwork, &mut info,
        );
    }
    assert!(info == 0, "zgeev workspace query: illegal argument {}", -info);
    let lwork = query[0].re as i32;
    let mut work = vec![ZERO; lwork.max(1) as usize];
    unsafe {
        lapack::zgeev(
            b'N', b'V', ni, &mut af, ni, &mut w, &mut vl, 1, &mut vr, ni, &mut work, lwork,
            &mut rwork, &mut info,
        );
    }
    if info > 0 {
        return Err(Error::ConvergenceFailure { info });
    }
    assert!(info == 0, "zgeev: illegal argument {}", -info);

    // Stable ordering: by real part, then imaginary part.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        w[i].re
            .total_cmp(&w[j].re)
            .then(w[i].im.total_cmp(&w[j].im))
    });
    let values = CVector::from_iter(order.iter().map(|&k| w[k]));
    let mut right_vectors = CMatrix::zeros((n, n));
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            right_vectors[(i, col)] = vr[i + k * n];
        }
    }
    Ok(EigResult { values, right_vectors })
}

/// Solve the Sylvester equation A X - X B = C with A (m x m), B (n x n), C (m x n).
///
/// Solved exactly (up to LU round-off) through the Kronecker linear system
/// (I (x) A - B^T (x) I) vec(X) = vec(C). Requires the spectra of A and B to be
/// disjoint; the smallest eigenvalue gap is checked first.
pub fn solve_sylvester(a: &CMatrix, b: &CMatrix, c: &CMatrix) -> Result<CMatrix> {
    let m = require_square(a, "solve_sylvester A")?;
    let n = require_square(b, "solve_sylvester B")?;
    if c.dim() != (m, n) {
        return Err(Error::DimensionMismatch(format!(
            "solve_sylvester: C is {:?}, expected ({m}, {n})",
            c.dim()
        )));
    }
    ensure_finite_mat(c, "solve_sylvester C")?;
    let ea = eig_dense(a)?;
    let eb = eig_dense(b)?;
    let mut gap = f64::INFINITY;
    for la in ea.values.iter() {
        for lb in eb.values.iter() {
            gap = gap.min((la - lb).norm());
        }
    }
    let scale = norm_inf(a).max(norm_inf(b)).max(1.0);
    if gap < SPECTRA_GAP_TOL * scale {
        return Err(Error::SpectraOverlap { gap });
    }

    // Column-stacked vec convention: x_{i,j} lives at index i + j*m.
    let dim = m * n;
    let mut k = CMatrix::zeros((dim, dim));
    for j in 0..n {
        for i in 0..m {
            let row = i + j * m;
            for kk in 0..m {
                k[(row, kk + j * m)] += a[(i, kk)];
            }
            for l in 0..n {
                k[(row, i + l * m)] -= b[(l, j)];
            }
        }
    }
    let rhs = CVector::from_iter((0..dim).map(|idx| c[(idx % m, idx / m)]));
    let x = solve_linear(&k, &rhs)?;
    let mut out = CMatrix::zeros((m, n));
    for j in 0..n {
        for i in 0..m {
            out[(i, j)] = x[i + j * m];
        }
    }
    Ok(out)
}

/// Roots of a polynomial with coefficients in descending powers
/// (`coeffs[0]` multiplies the highest power), via companion-matrix
/// eigenvalues. Returns the `degree` roots sorted by (re, im).
pub fn poly_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    if coeffs.is_empty() {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    let scale = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if !scale.is_finite() {
        return Err(Error::NonFinite("poly_roots coefficients"));
    }
    if coeffs[0].norm() <= 1e-14 * scale || coeffs[0].norm() == 0.0 {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    let d = coeffs.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }
    // Companion matrix of the monic polynomial y^d + a_1 y^(d-1) + ... + a_d.
    let monic: Vec<C64> = coeffs[1..].iter().map(|c| c / coeffs[0]).collect();
    let mut comp = CMatrix::zeros((d, d));
    for i in 1..d {
        comp[(i, i - 1)] = ONE;
    }
    for i in 0..d {
        // last column: -a_{d - i}
        comp[(i, d - 1)] = -monic[d - 1 - i];
    }
    let eig = eig_dense(&comp)?;
    Ok(eig.values.to_vec())
}

/// Evaluate a polynomial in descending-power coefficient order (Horner).
pub fn poly_eval(coeffs: &[C64], y: C64) -> C64 {
    coeffs.iter().fold(ZERO, |acc, &c| acc * y + c)
}

/// Nonzero entries of a row-major dense matrix, gathered per row.
/// Propagation touches only stored entries, so lattice Hamiltonians
/// (near-tridiagonal) step in O(nnz) rather than O(n^2).
struct SparseRows {
    rows: Vec<Vec<(usize, C64)>>,
}

impl SparseRows {
    fn from_dense(h: &CMatrix) -> Self {
        let rows = h
            .rows()
            .into_iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, z)| z.norm_sqr() != 0.0)
                    .map(|(j, &z)| (j, z))
                    .collect()
            })
            .collect();
        Self { rows }
    }

    /// out = -i * H * c
    fn schrodinger_rhs(&self, c: &[C64], out: &mut [C64]) {
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = ZERO;
            for &(j, h) in row {
                acc += h * c[j];
            }
            out[i] = C64::new(acc.im, -acc.re);
        }
    }
}

/// Propagate i dc/dt = H c with the classical fixed-step 4th-order
/// Runge-Kutta method on the uniform grid t_k = k*dt, k = 0..round(t_max/dt).
///
/// dt defaults to 0.01 (in 1/kappa units) at call sites; runs are
/// reproducible bit-for-bit for fixed inputs. For Hermitian H the norm drift
/// per step is O((||H|| dt)^6).
pub fn propagate_linear(h: &CMatrix, c0: &CVector, t_max: f64, dt: f64) -> Result<Trajectory> {
    let n = require_square(h, "propagate_linear")?;
    if c0.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "propagate_linear: state length {} vs matrix order {n}",
            c0.len()
        )));
    }
    ensure_finite_mat(h, "propagate_linear matrix")?;
    ensure_finite_vec(c0, "propagate_linear state")?;
    if !(dt > 0.0) || !(t_max > 0.0) {
        return Err(Error::DomainError(format!(
            "propagate_linear: need t_max > 0 and dt > 0, got t_max = {t_max}, dt = {dt}"
        )));
    }
    let cap = dt * norm_inf(h);
    if cap > RK4_STABILITY_CAP {
        return Err(Error::StepTooLarge(cap));
    }
    let n_steps = (t_max / dt).round().max(1.0) as usize;

    let op = SparseRows::from_dense(h);
    let mut state: Vec<C64> = c0.to_vec();
    let mut k1 = vec![ZERO; n];
    let mut k2 = vec![ZERO; n];
    let mut k3 = vec![ZERO; n];
    let mut k4 = vec![ZERO; n];
    let mut tmp = vec![ZERO; n];

    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    times.push(0.0);
    states.push(CVector::from_vec(state.clone()));

    let half = 0.5 * dt;
    for step in 1..=n_steps {
        op.schrodinger_rhs(&state, &mut k1);
        for i in 0..n {
            tmp[i] = state[i] + half * k1[i];
        }
        op.schrodinger_rhs(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = state[i] + half * k2[i];
        }
        op.schrodinger_rhs(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = state[i] + dt * k3[i];
        }
        op.schrodinger_rhs(&tmp, &mut k4);
        let w = dt / 6.0;
        for i in 0..n {
            state[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        times.push(step as f64 * dt);
        states.push(CVector::from_vec(state.clone()));
    }
    Ok(Trajectory { times, states })
}
