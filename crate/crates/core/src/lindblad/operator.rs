// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! Square complex operators in compressed sparse row form.
//!
//! Atom ⊗ Fock operators have a handful of entries per row, so products and
//! applications to dense density matrices are done sparsely.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<C64>,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            indptr: vec![0; dim + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![C64::new(1.0, 0.0); dim])
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        Self::from_triplets(diag.len(), diag.iter().enumerate().map(|(i, &v)| (i, i, v)))
    }

    /// Duplicate entries are summed; exact zeros are dropped.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut map: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        for (r, c, v) in triplets {
            assert!(
                r < dim && c < dim,
                "entry ({r}, {c}) outside a {dim}-dimensional operator"
            );
            *map.entry((r, c)).or_default() += v;
        }
        let mut indptr = vec![0; dim + 1];
        let mut indices = Vec::with_capacity(map.len());
        let mut values = Vec::with_capacity(map.len());
        for ((r, c), v) in map {
            if v != C64::default() {
                indptr[r + 1] += 1;
                indices.push(c);
                values.push(v);
            }
        }
        for r in 0..dim {
            indptr[r + 1] += indptr[r];
        }
        Self {
            dim,
            indptr,
            indices,
            values,
        }
    }

    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "operators are square");
        let n = m.nrows();
        Self::from_triplets(
            n,
            (0..n)
                .flat_map(|r| (0..n).map(move |c| (r, c)))
                .map(|(r, c)| (r, c, m[(r, c)])),
        )
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim)
            .flat_map(move |r| (self.indptr[r]..self.indptr[r + 1]).map(move |p| (r, self.indices[p], self.values[p])))
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let row = &self.indices[self.indptr[r]..self.indptr[r + 1]];
        match row.binary_search(&c) {
            Ok(p) => self.values[self.indptr[r] + p],
            Err(_) => C64::default(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.dim, self.triplets().map(|(r, c, v)| (c, r, v.conj())))
    }

    pub fn kron(&self, other: &Operator) -> Self {
        let d = other.dim;
        Self::from_triplets(
            self.dim * d,
            self.triplets().flat_map(|(r1, c1, v1)| {
                other
                    .triplets()
                    .map(move |(r2, c2, v2)| (r1 * d + r2, c1 * d + c2, v1 * v2))
            }),
        )
    }

    pub fn matmul(&self, other: &Operator) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut triplets = Vec::new();
        for (r, k, a) in self.triplets() {
            for p in other.indptr[k]..other.indptr[k + 1] {
                triplets.push((r, other.indices[p], a * other.values[p]));
            }
        }
        Self::from_triplets(self.dim, triplets)
    }

    /// max |A − A†| over all entries.
    pub fn hermiticity_error(&self) -> f64 {
        let mut err: f64 = 0.0;
        for (r, c, v) in self.triplets() {
            err = err.max((v - self.get(c, r).conj()).norm());
        }
        err
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// Largest absolute row sum; bounds the spectral radius.
    pub fn row_sum_norm(&self) -> f64 {
        (0..self.dim)
            .map(|r| {
                self.values[self.indptr[r]..self.indptr[r + 1]]
                    .iter()
                    .map(|v| v.norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// out ← out + alpha·A·x for a column-major square matrix `x`.
    pub fn apply_add(&self, alpha: C64, x: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let d = self.dim;
        debug_assert_eq!(x.nrows(), d);
        let cols = x.ncols();
        let xs = x.as_slice();
        let os = out.as_mut_slice();
        for j in 0..cols {
            let xcol = &xs[j * d..(j + 1) * d];
            let ocol = &mut os[j * d..(j + 1) * d];
            for (i, o) in ocol.iter_mut().enumerate() {
                let (lo, hi) = (self.indptr[i], self.indptr[i + 1]);
                if lo == hi {
                    continue;
                }
                let mut acc = C64::default();
                for p in lo..hi {
                    acc += self.values[p] * xcol[self.indices[p]];
                }
                *o += alpha * acc;
            }
        }
    }

    /// A·x for a dense matrix.
    pub fn apply(&self, x: &DMatrix<C64>) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(self.dim, x.ncols());
        self.apply_add(C64::new(1.0, 0.0), x, &mut out);
        out
    }

    /// out ← out + alpha·A·v for a state vector.
    pub fn apply_vec_add(&self, alpha: C64, v: &[C64], out: &mut [C64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = C64::default();
            for p in self.indptr[i]..self.indptr[i + 1] {
                acc += self.values[p] * v[self.indices[p]];
            }
            *o += alpha * acc;
        }
    }

    /// tr(Aρ).
    pub fn expectation(&self, rho: &DMatrix<C64>) -> C64 {
        self.triplets().map(|(r, c, v)| v * rho[(c, r)]).sum()
    }

    /// ⟨ψ|A|ψ⟩.
    pub fn expectation_vec(&self, psi: &[C64]) -> C64 {
        self.triplets().map(|(r, c, v)| psi[r].conj() * v * psi[c]).sum()
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim);
        Operator::from_triplets(self.dim, self.triplets().chain(rhs.triplets()))
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self + &rhs.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.matmul(rhs)
    }
}

impl Mul<C64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: C64) -> Operator {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        self.scale(C64::new(rhs, 0.0))
    }
}

/// Sum of operators sharing one sparsity pattern, with coefficients that can
/// be updated without reallocating.
#[derive(Debug, Clone)]
pub(crate) struct LinearCombination {
    pub combined: Operator,
    maps: Vec<Vec<usize>>,
    parts: Vec<Operator>,
}

impl LinearCombination {
    pub fn new(dim: usize, parts: Vec<Operator>) -> Self {
        let mut keys: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for part in &parts {
            for (r, c, _) in part.triplets() {
                keys.insert((r, c), 0);
            }
        }
        let mut indptr = vec![0; dim + 1];
        let mut indices = Vec::with_capacity(keys.len());
        for (pos, ((r, c), slot)) in keys.iter_mut().enumerate() {
            *slot = pos;
            indptr[r + 1] += 1;
            indices.push(*c);
        }
        for r in 0..dim {
            indptr[r + 1] += indptr[r];
        }
        let maps = parts
            .iter()
            .map(|p| p.triplets().map(|(r, c, _)| keys[&(r, c)]).collect())
            .collect();
        let combined = Operator {
            dim,
            indptr,
            values: vec![C64::default(); indices.len()],
            indices,
        };
        Self { combined, maps, parts }
    }

    pub fn set(&mut self, coefficients: &[C64]) {
        self.combined.values.iter_mut().for_each(|v| *v = C64::default());
        for ((part, map), &c) in self.parts.iter().zip(&self.maps).zip(coefficients) {
            if c == C64::default() {
                continue;
            }
            for (&slot, &v) in map.iter().zip(part.values.iter()) {
                self.combined.values[slot] += c * v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn dense_round_trip_and_products() {
        let a = DMatrix::from_fn(3, 3, |r, k| c(r as f64 - k as f64, (r * k) as f64 * 0.5));
        let b = DMatrix::from_fn(3, 3, |r, k| c((r + 2 * k) as f64, -(r as f64)));
        let (sa, sb) = (Operator::from_dense(&a), Operator::from_dense(&b));
        assert_eq!(sa.to_dense(), a);
        assert!(((&sa * &sb).to_dense() - &a * &b).norm() < 1e-12);
        assert!((sa.adjoint().to_dense() - a.adjoint()).norm() < 1e-12);
        assert!((sa.kron(&sb).to_dense() - a.kronecker(&b)).norm() < 1e-12);
        assert!((sa.apply(&b) - &a * &b).norm() < 1e-12);
        let tr = (&a * &b).trace();
        assert!((sa.expectation(&b) - tr).norm() < 1e-12);
    }

    #[test]
    fn linear_combination_matches_sum() {
        let a = Operator::from_triplets(2, [(0, 1, c(1.0, 0.0))]);
        let b = Operator::from_triplets(2, [(1, 0, c(0.0, 2.0)), (0, 1, c(3.0, 0.0))]);
        let mut lc = LinearCombination::new(2, vec![a.clone(), b.clone()]);
        lc.set(&[c(2.0, 0.0), c(0.0, 1.0)]);
        let expect = &a.scale(c(2.0, 0.0)) + &b.scale(c(0.0, 1.0));
        assert!((lc.combined.to_dense() - expect.to_dense()).norm() < 1e-15);
    }
}
