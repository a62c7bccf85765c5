//! Dense complex linear-algebra helpers shared by every module.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `e^{i theta}`.
#[inline]
pub fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn basis_vector(dim: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(dim);
    v[i] = ONE;
    v
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let mut out = CVec::zeros(a.len() * b.len());
    for i in 0..a.len() {
        for k in 0..b.len() {
            out[i * b.len() + k] = a[i] * b[k];
        }
    }
    out
}

/// Block-diagonal `a ⊕ b`.
pub fn direct_sum(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMat::zeros(ar + br, ac + bc);
    out.view_mut((0, 0), (ar, ac)).copy_from(a);
    out.view_mut((ar, ac), (br, bc)).copy_from(b);
    out
}

pub fn trace(a: &CMat) -> Complex64 {
    a.diagonal().iter().sum()
}

/// Largest singular value.
pub fn op_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0, |m: f64, &s| m.max(s))
}

/// Sum of singular values.
pub fn trace_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().svd(false, false).singular_values.iter().sum()
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0, |m: f64, z| m.max(z.norm()))
}

pub fn hermitian_residual(a: &CMat) -> f64 {
    max_abs(&(a - a.adjoint()))
}

pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()).scale(0.5)
}

/// Eigendecomposition of the Hermitian part of `a`, eigenvalues ascending,
/// eigenvectors as matching columns.
pub fn eigh(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let eig = hermitian_part(a).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Eigenvalues of the Hermitian part of `a`, ascending.
pub fn eigvalsh(a: &CMat) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut v: Vec<f64> = hermitian_part(a).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Assemble `V diag(f(λ)) V†` from an eigendecomposition.
pub fn from_eigen(values: &[f64], vectors: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let n = vectors.nrows();
    let mut out = CMat::zeros(n, n);
    for (k, &lam) in values.iter().enumerate() {
        let w = f(lam);
        if w == 0.0 {
            continue;
        }
        let col = vectors.column(k);
        out += (&col * col.adjoint()).scale(w);
    }
    out
}

/// Unitary polar factor `U V†` of `a = U Σ V†` (square input).
pub fn polar_unitary(a: &CMat) -> CMat {
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("svd u requested");
    let v_t = svd.v_t.expect("svd v_t requested");
    u * v_t
}

/// Orthonormal basis (columns) of the orthogonal complement of the column
/// span of `a`, where `a` has `rank` significant columns worth of span.
pub fn complement_basis(a: &CMat, tol: f64) -> CMat {
    let n = a.nrows();
    let gram = a * a.adjoint();
    let (vals, vecs) = eigh(&gram);
    let scale = vals.last().copied().unwrap_or(0.0).max(1.0);
    let keep: Vec<usize> = (0..n).filter(|&k| vals[k] <= tol * scale).collect();
    let mut out = CMat::zeros(n, keep.len());
    for (j, &k) in keep.iter().enumerate() {
        out.set_column(j, &vecs.column(k));
    }
    out
}

/// `‖A A† − I‖` as max-abs entry.
pub fn unitarity_residual(a: &CMat) -> f64 {
    max_abs(&(a * a.adjoint() - identity(a.nrows())))
}

/// True if every row and column has exactly one nonzero entry.
pub fn is_monomial(a: &CMat) -> bool {
    if !a.is_square() {
        return false;
    }
    let n = a.nrows();
    let mut col_seen = vec![false; n];
    for i in 0..n {
        let mut count = 0;
        for j in 0..n {
            if a[(i, j)] != ZERO {
                count += 1;
                if col_seen[j] {
                    return false;
                }
                col_seen[j] = true;
            }
        }
        if count != 1 {
            return false;
        }
    }
    true
}
