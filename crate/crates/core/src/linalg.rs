//! Dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

pub type C64 = nalgebra::Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn basis_vec(n: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(n);
    v[i] = ONE;
    v
}

/// Singular values in descending order together with `U` and `V` (not `V^*`).
pub struct Svd {
    pub s: Vec<f64>,
    pub u: CMat,
    pub v: CMat,
}

/// Full SVD; the returned `v` is always square so its trailing columns span the kernel,
/// `s` has one entry per column of `a` and only the leading `min(m, n)` columns of `u`
/// are meaningful.
///
/// Computed from the Hermitian eigenproblem of `[[0, A], [A*, 0]]`, whose eigenvalues
/// are `±σ_i`; nalgebra's complex bidiagonal SVD loses accuracy on some structured inputs.
pub fn svd(a: &CMat) -> Svd {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Svd { s: vec![0.0; n], u: CMat::zeros(m, n), v: CMat::identity(n, n) };
    }
    let mut h = CMat::zeros(m + n, m + n);
    h.view_mut((0, m), (m, n)).copy_from(a);
    h.view_mut((m, 0), (n, m)).copy_from(&a.adjoint());
    let e = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..m + n).collect();
    order.sort_by(|&i, &j| e.eigenvalues[j].total_cmp(&e.eigenvalues[i]));
    let p = m.min(n);
    let top = e.eigenvalues[order[0]].max(0.0);
    let floor = 64.0 * f64::EPSILON * top * (m + n) as f64;
    let mut vs: Vec<CVec> = Vec::new();
    for &i in &order[..p] {
        if e.eigenvalues[i] <= floor {
            break;
        }
        vs.push(e.eigenvectors.column(i).rows(m, n).into_owned());
    }
    let mut vk = if vs.is_empty() { CMat::zeros(n, 0) } else { orthonormalize(&vs, None, 1e-12) };
    let k = vk.ncols();
    if vk.ncols() < n {
        let rest: Vec<CVec> = (0..n).map(|i| basis_vec(n, i)).collect();
        let comp = orthonormalize(&rest, Some(&vk), 1e-8);
        vk = vk.resize_horizontally(n, ZERO);
        vk.view_mut((0, k), (n, n - k)).copy_from(&comp.columns(0, n - k));
    }
    let av = a * &vk;
    let mut s: Vec<f64> = (0..n).map(|j| av.column(j).norm()).collect();
    let mut us: Vec<CVec> = (0..k).map(|j| av.column(j) / r(s[j])).collect();
    us.extend((0..m).map(|i| basis_vec(m, i)));
    let uq = orthonormalize(&us, None, 1e-8);
    let mut u = CMat::zeros(m, n);
    let cols = uq.ncols().min(n);
    u.view_mut((0, 0), (m, cols)).copy_from(&uq.columns(0, cols));
    for x in s.iter_mut().skip(k) {
        if *x <= floor {
            *x = 0.0;
        }
    }
    Svd { s, u, v: vk }
}

/// Numerical rank with threshold `rel * largest singular value`.
pub fn rank(a: &CMat, rel: f64) -> usize {
    let s = svd(a).s;
    numerical_rank(&s, rel)
}

pub fn numerical_rank(s: &[f64], rel: f64) -> usize {
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel * top).count()
}

/// Orthonormal basis (columns) of the kernel of `a`.
pub fn null_space(a: &CMat, rel: f64) -> CMat {
    let n = a.ncols();
    let d = svd(a);
    let k = numerical_rank(&d.s, rel);
    d.v.columns(k, n - k).into_owned()
}

/// Largest singular value.
pub fn op_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let (m, n) = a.shape();
    let gram = if m < n { a * a.adjoint() } else { a.adjoint() * a };
    gram.symmetric_eigenvalues().iter().cloned().fold(0.0, f64::max).max(0.0).sqrt()
}

pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()) * r(0.5)
}

/// Eigenvalues (ascending) and eigenvectors of the Hermitian part of `a`.
pub fn eigh(a: &CMat) -> (Vec<f64>, CMat) {
    let h = hermitian_part(a);
    let e = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..e.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| e.eigenvalues[i].total_cmp(&e.eigenvalues[j]));
    let vals = order.iter().map(|&i| e.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(a.nrows(), order.len(), |r, k| e.eigenvectors[(r, order[k])]);
    (vals, vecs)
}

pub fn eigvalsh(a: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = hermitian_part(a).symmetric_eigenvalues().iter().cloned().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Kronecker product with the first factor as the major index.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let s = a[(i, j)];
            if s == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = s * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Column-major flattening.
pub fn vectorize(m: &CMat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVec, rows: usize, cols: usize) -> CMat {
    CMat::from_column_slice(rows, cols, v.as_slice())
}

/// Moore-Penrose pseudo-inverse with relative rank threshold.
pub fn pinv(a: &CMat, rel: f64) -> CMat {
    let d = svd(a);
    let k = numerical_rank(&d.s, rel);
    let mut out = CMat::zeros(a.ncols(), a.nrows());
    for i in 0..k {
        let vi = d.v.column(i);
        let ui = d.u.column(i);
        out += vi * ui.adjoint() * r(1.0 / d.s[i]);
    }
    out
}

/// Modified Gram-Schmidt with one reorthogonalisation pass whenever a vector loses
/// more than a factor `1e8` of its norm. Vectors that collapse below `tol` are dropped.
pub fn orthonormalize(vectors: &[CVec], against: Option<&CMat>, tol: f64) -> CMat {
    let dim = vectors.first().map(|v| v.len()).unwrap_or(0);
    let mut basis: Vec<CVec> = Vec::new();
    let prior: Vec<CVec> = against
        .map(|m| m.column_iter().map(|c| c.into_owned()).collect())
        .unwrap_or_default();
    for v in vectors {
        let mut w = v.clone();
        let start = w.norm();
        if start <= tol {
            continue;
        }
        for pass in 0..2 {
            let before = w.norm();
            for q in prior.iter().chain(basis.iter()) {
                let p = q.dotc(&w);
                w -= q * p;
            }
            let after = w.norm();
            if pass == 0 && after * 1e8 > before {
                break;
            }
        }
        let nrm = w.norm();
        if nrm > tol * start.max(1.0) {
            basis.push(w / r(nrm));
        }
    }
    let mut out = CMat::zeros(dim, basis.len());
    for (k, b) in basis.iter().enumerate() {
        out.set_column(k, b);
    }
    out
}

/// Largest absolute entry.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_vec(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hermitian square root of a positive semidefinite matrix.
pub fn sqrt_psd(a: &CMat) -> CMat {
    let (vals, vecs) = eigh(a);
    let d = CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&x| r(x.max(0.0).sqrt())),
    ));
    &vecs * d * vecs.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_wide_matrix() {
        let a = CMat::from_row_slice(1, 3, &[ONE, ONE, ZERO]);
        let k = null_space(&a, 1e-10);
        assert_eq!(k.ncols(), 2);
        assert!(max_abs(&(&a * &k)) < 1e-12);
    }

    #[test]
    fn svd_sorted_and_reconstructs() {
        let a = CMat::from_row_slice(2, 2, &[r(1.0), c(0.0, 2.0), r(3.0), r(-1.0)]);
        let d = svd(&a);
        assert!(d.s[0] >= d.s[1]);
        let s = CMat::from_diagonal(&CVec::from_iterator(2, d.s.iter().map(|&x| r(x))));
        let back = &d.u * s * d.v.adjoint();
        assert!(max_abs(&(back - a)) < 1e-12);
    }

    #[test]
    fn kron_of_identities() {
        let k = kron(&CMat::identity(2, 2), &CMat::identity(3, 3));
        assert_eq!(k, CMat::identity(6, 6));
    }

    #[test]
    fn pinv_right_inverse() {
        let a = CMat::from_row_slice(2, 3, &[ONE, ZERO, ONE, ZERO, I, ZERO]);
        let p = pinv(&a, 1e-10);
        assert!(max_abs(&(&a * &p - CMat::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn orthonormalize_drops_dependent() {
        let v = vec![basis_vec(3, 0), basis_vec(3, 0) * r(2.0), basis_vec(3, 1)];
        let q = orthonormalize(&v, None, 1e-10);
        assert_eq!(q.ncols(), 2);
        assert!(max_abs(&(q.adjoint() * &q - CMat::identity(2, 2))) < 1e-14);
    }

    fn reconstruct(d: &Svd, m: usize) -> CMat {
        let n = d.v.nrows();
        let mut out = CMat::zeros(m, n);
        for (i, &sv) in d.s.iter().enumerate() {
            if sv > 0.0 {
                out += d.u.column(i) * d.v.column(i).adjoint() * r(sv);
            }
        }
        out
    }

    #[test]
    fn svd_reconstructs_structured_and_random_matrices() {
        let mut rng = crate::sampling::rng(5);
        let mut cases = Vec::new();
        for (m, n) in [(3, 3), (5, 2), (2, 5), (16, 8), (1, 4)] {
            cases.push(crate::sampling::complex_gaussian_mat(&mut rng, m, n));
            let low = crate::sampling::complex_gaussian_mat(&mut rng, m, 1)
                * crate::sampling::complex_gaussian_mat(&mut rng, 1, n);
            cases.push(low);
        }
        // unitary times a partial isometry: four equal singular values
        let w = crate::sampling::isometry(&mut rng, 8, 8);
        cases.push(CMat::from_fn(8, 8, |i, j| if i == j && i < 4 { r(0.5) } else { ZERO }) * w);
        for a in cases {
            let d = svd(&a);
            assert!(max_abs(&(reconstruct(&d, a.nrows()) - &a)) < 1e-12);
            assert!(max_abs(&(d.v.adjoint() * &d.v - CMat::identity(a.ncols(), a.ncols()))) < 1e-12);
            assert!(d.s.windows(2).all(|w| w[0] + 1e-12 >= w[1]));
            assert!((op_norm(&a) - d.s[0]).abs() < 1e-12);
        }
    }
}
