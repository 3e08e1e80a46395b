//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{ComplexField, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex;

use crate::scalar::Scalar;

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues<T: Scalar>(m: &DMatrix<Complex<T>>) -> Vec<T> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut values: Vec<T> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    values
}

/// Smallest eigenvalue of a Hermitian matrix (zero for the empty matrix).
pub fn min_hermitian_eigenvalue<T: Scalar>(m: &DMatrix<Complex<T>>) -> T {
    hermitian_eigenvalues(m).first().copied().unwrap_or_else(T::zero)
}

/// Eigenpairs of a real symmetric matrix sorted by descending eigenvalue.
pub fn symmetric_eigen_descending<T: Scalar>(m: &DMatrix<T>) -> (Vec<T>, DMatrix<T>) {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn min_symmetric_eigenvalue<T: Scalar>(m: &DMatrix<T>) -> T {
    symmetric_eigen_descending(m).0.last().copied().unwrap_or_else(T::zero)
}

pub fn max_abs<T: Scalar>(m: &DMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
}

pub fn max_abs_complex<T: Scalar>(m: &DMatrix<Complex<T>>) -> T {
    m.iter().fold(T::zero(), |acc, v| acc.max(v.modulus()))
}

pub fn max_abs_diff<T: Scalar>(a: &DMatrix<T>, b: &DMatrix<T>) -> T {
    max_abs(&(a - b))
}

pub fn max_abs_diff_vec<T: Scalar>(a: &DVector<T>, b: &DVector<T>) -> T {
    (a - b).iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
}

/// Largest deviation from symmetry, `max |m - m^T|`.
pub fn asymmetry<T: Scalar>(m: &DMatrix<T>) -> T {
    max_abs(&(m - m.transpose()))
}

pub fn complexify<T: Scalar>(m: &DMatrix<T>) -> DMatrix<Complex<T>> {
    m.map(|v| Complex::new(v, T::zero()))
}

/// `re + i im` for real matrices of equal shape.
pub fn compose_complex<T: Scalar>(re: &DMatrix<T>, im: &DMatrix<T>) -> DMatrix<Complex<T>> {
    DMatrix::from_fn(re.nrows(), re.ncols(), |r, c| Complex::new(re[(r, c)], im[(r, c)]))
}

/// Block matrix `[[a, b], [c, d]]`.
pub fn block2<N: nalgebra::Scalar + num_traits::Zero>(
    a: &DMatrix<N>,
    b: &DMatrix<N>,
    c: &DMatrix<N>,
    d: &DMatrix<N>,
) -> DMatrix<N> {
    let (r1, c1) = a.shape();
    let (r2, c2) = d.shape();
    let mut out = DMatrix::zeros(r1 + r2, c1 + c2);
    out.view_mut((0, 0), (r1, c1)).copy_from(a);
    out.view_mut((0, c1), (r1, c2)).copy_from(b);
    out.view_mut((r1, 0), (r2, c1)).copy_from(c);
    out.view_mut((r1, c1), (r2, c2)).copy_from(d);
    out
}

/// Completes a set of orthonormal columns to an orthonormal basis.
///
/// `fixed` holds `(column index, unit vector)` pairs that are kept as given.
/// Free columns are filled in index order by Gram-Schmidt over the canonical
/// basis vectors `e_0, e_1, ...`, skipping candidates whose residual norm is
/// below `skip_below`. Returns `None` when the basis runs out.
pub fn complete_orthonormal<T: Scalar>(
    dim: usize,
    fixed: &[(usize, DVector<T>)],
    skip_below: T,
) -> Option<DMatrix<T>> {
    let mut out = DMatrix::zeros(dim, dim);
    let mut basis: Vec<DVector<T>> = Vec::with_capacity(dim);
    let mut taken = vec![false; dim];
    for (col, v) in fixed {
        out.set_column(*col, v);
        taken[*col] = true;
        basis.push(v.clone());
    }
    let mut candidate = 0;
    for col in 0..dim {
        if taken[col] {
            continue;
        }
        loop {
            if candidate >= dim {
                return None;
            }
            let mut v = DVector::zeros(dim);
            v[candidate] = T::one();
            candidate += 1;
            // two passes of modified Gram-Schmidt
            for _ in 0..2 {
                for b in &basis {
                    let proj = b.dot(&v);
                    v.axpy(-proj, b, T::one());
                }
            }
            let norm = v.norm();
            if norm >= skip_below {
                v /= norm;
                out.set_column(col, &v);
                basis.push(v);
                break;
            }
        }
    }
    Some(out)
}
