// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! Dense complex kernels: matrix products and the vectorised Liouvillian.

use nalgebra::{DMatrix, DVector};

use super::model::QuantumModel;
use super::operator::{Operator, C64};

/// A·B through the blocked complex gemm kernel.
pub fn matmul(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    assert_eq!(a.ncols(), b.nrows());
    let (m, k, n) = (a.nrows(), a.ncols(), b.ncols());
    let mut c = DMatrix::<C64>::zeros(m, n);
    // SAFETY: Complex<f64> is repr(C) with layout [re, im], identical to the
    // kernel's element type. All three buffers are column-major and sized
    // exactly as described by the strides; `c` does not alias `a` or `b`.
    unsafe {
        matrixmultiply::zgemm(
            matrixmultiply::CGemmOption::Standard,
            matrixmultiply::CGemmOption::Standard,
            m,
            k,
            n,
            [1.0, 0.0],
            a.as_ptr() as *const [f64; 2],
            1,
            m as isize,
            b.as_ptr() as *const [f64; 2],
            1,
            k as isize,
            [0.0, 0.0],
            c.as_mut_ptr() as *mut [f64; 2],
            1,
            m as isize,
        );
    }
    c
}

/// Effective non-Hermitian Hamiltonian K = H − (i/2)Σ rate·L†L for a static model.
pub fn effective_hamiltonian(model: &QuantumModel) -> Operator {
    let d = model.dim();
    let mut k = Operator::zeros(d);
    for term in &model.terms {
        k = &k + &term.matrix;
    }
    for jump in &model.jumps {
        let ldl = &jump.operator.adjoint() * &jump.operator;
        k = &k + &ldl.scale(C64::new(0.0, -0.5 * jump.rate));
    }
    k
}

/// Matrix S with vec(dρ/dt) = S vec(ρ), column-major vectorisation.
/// Only the static terms of `model` are included.
pub fn liouvillian(model: &QuantumModel) -> DMatrix<C64> {
    let d = model.dim();
    let dd = d * d;
    let mut s = DMatrix::<C64>::zeros(dd, dd);
    let k = effective_hamiltonian(model);
    let mi = C64::new(0.0, -1.0);
    for (a, b, v) in k.triplets() {
        // −iKρ: (a, c) ← (b, c)
        for c in 0..d {
            s[(c * d + a, c * d + b)] += mi * v;
        }
        // +iρK†: (e, a) ← (e, b) with K†[b, a] = conj(K[a, b])
        for e in 0..d {
            s[(a * d + e, b * d + e)] += -mi * v.conj();
        }
    }
    for jump in &model.jumps {
        let l: Vec<_> = jump.operator.triplets().collect();
        for &(a, b, v) in &l {
            for &(c, e, w) in &l {
                s[(c * d + a, e * d + b)] += jump.rate * v * w.conj();
            }
        }
    }
    s
}

pub fn vectorize(rho: &DMatrix<C64>) -> DVector<C64> {
    DVector::from_column_slice(rho.as_slice())
}

pub fn unvectorize(v: &DVector<C64>, d: usize) -> DMatrix<C64> {
    DMatrix::from_column_slice(d, d, v.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gemm_matches_naive() {
        let a = DMatrix::from_fn(5, 3, |r, c| C64::new(r as f64 + 0.5, c as f64 - 1.0));
        let b = DMatrix::from_fn(3, 4, |r, c| C64::new((r * c) as f64, 1.0 + r as f64));
        assert!((matmul(&a, &b) - &a * &b).norm() < 1e-12);
    }
}
