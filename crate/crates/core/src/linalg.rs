//! Small dense linear-algebra helpers on top of nalgebra.

use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

pub type Matrix = DMatrix<f64>;

/// Binomial coefficient C(n, k); zero when k > n.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// max |uᵀu − I|.
pub fn orthogonality_deviation(u: &Matrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let g = u.transpose() * u;
    let n = u.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((g[(i, j)] - target).abs());
        }
    }
    dev
}

/// max |k + kᵀ|.
pub fn antisymmetry_deviation(k: &Matrix) -> f64 {
    if !k.is_square() {
        return f64::INFINITY;
    }
    let n = k.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((k[(i, j)] + k[(j, i)]).abs());
        }
    }
    dev
}

/// Matrix exponential of a real antisymmetric matrix.
///
/// With k² = −V Ω² Vᵀ (symmetric, negative semidefinite),
/// exp(k) = V cos(Ω) Vᵀ + k V (sin Ω / Ω) Vᵀ. Both factors are functions
/// of k² alone, so degenerate eigenvalues of k² do not matter.
pub fn exp_antisymmetric(k: &Matrix) -> Matrix {
    let n = k.nrows();
    if n == 0 {
        return Matrix::zeros(0, 0);
    }
    let k2 = -(k * k);
    let k2 = (&k2 + k2.transpose()) * 0.5;
    let eig = SymmetricEigen::new(k2);
    let v = &eig.eigenvectors;
    let mut cos_d = Matrix::zeros(n, n);
    let mut sinc_d = Matrix::zeros(n, n);
    for i in 0..n {
        let w = libm::sqrt(eig.eigenvalues[i].max(0.0));
        cos_d[(i, i)] = libm::cos(w);
        sinc_d[(i, i)] = if w < 1e-8 {
            1.0 - w * w / 6.0
        } else {
            libm::sin(w) / w
        };
    }
    let vt = v.transpose();
    let c = v * cos_d * &vt;
    let s = v * sinc_d * &vt;
    c + k * s
}

/// Lowest eigenpair of a dense symmetric matrix.
pub fn lowest_eigenpair(m: Matrix) -> (f64, Vec<f64>) {
    let eig = SymmetricEigen::new(m);
    let mut best = 0;
    for i in 1..eig.eigenvalues.len() {
        if eig.eigenvalues[i] < eig.eigenvalues[best] {
            best = i;
        }
    }
    let vec = eig.eigenvectors.column(best).iter().copied().collect();
    (eig.eigenvalues[best], vec)
}

/// Flip `v` so its first entry with magnitude above `tol` is positive.
pub fn fix_phase(v: &mut [f64], tol: f64) {
    if let Some(first) = v.iter().copied().find(|x| x.abs() > tol) {
        if first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(12, 4), 495);
        assert_eq!(binomial(6, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(8, 5), 56);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let u = exp_antisymmetric(&Matrix::zeros(4, 4));
        assert!((u - Matrix::identity(4, 4)).amax() < 1e-15);
    }

    #[test]
    fn exp_of_planar_generator_is_rotation() {
        let t = 0.73;
        let k = Matrix::from_row_slice(2, 2, &[0.0, -t, t, 0.0]);
        let u = exp_antisymmetric(&k);
        let expected = Matrix::from_row_slice(
            2,
            2,
            &[libm::cos(t), -libm::sin(t), libm::sin(t), libm::cos(t)],
        );
        assert!((u - expected).amax() < 1e-14);
    }

    #[test]
    fn phase_fix() {
        let mut v = [0.0, -0.5, 0.2];
        fix_phase(&mut v, 1e-12);
        assert_eq!(v, [0.0, 0.5, -0.2]);
    }
}
