// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The peit authors

//! The master equation restricted to the entries of ρ that the generator can
//! reach from the initial state.
//!
//! Models with a conserved excitation number keep ρ block diagonal, so only a
//! small fraction of the d² entries ever become nonzero. The generator is
//! assembled as a sparse matrix on that support and integrated with the same
//! fixed-step RK4 scheme.

use std::collections::VecDeque;

use nalgebra::DMatrix;

use super::model::QuantumModel;
use super::operator::{Operator, C64};

const ABSENT: u32 = u32::MAX;

/// Column lists of an operator: `cols[c]` holds (row, value).
fn columns(op: &Operator) -> Vec<Vec<(usize, C64)>> {
    let mut cols = vec![Vec::new(); op.dim()];
    for (r, c, v) in op.triplets() {
        cols[c].push((r, v));
    }
    cols
}

/// Row lists: `rows[r]` holds (column, value).
fn rows(op: &Operator) -> Vec<Vec<(usize, C64)>> {
    let mut rows = vec![Vec::new(); op.dim()];
    for (r, c, v) in op.triplets() {
        rows[r].push((c, v));
    }
    rows
}

struct Csr {
    indptr: Vec<usize>,
    indices: Vec<u32>,
    values: Vec<C64>,
}

impl Csr {
    fn from_entries(n: usize, mut entries: Vec<(u32, u32, C64)>) -> Self {
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0; n + 1];
        let mut indices = Vec::with_capacity(entries.len());
        let mut values: Vec<C64> = Vec::with_capacity(entries.len());
        let mut last = None;
        for (r, c, v) in entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            last = Some((r, c));
            indices.push(c);
            values.push(v);
            indptr[r as usize + 1] = indices.len();
        }
        for i in 0..n {
            indptr[i + 1] = indptr[i + 1].max(indptr[i]);
        }
        Self {
            indptr,
            indices,
            values,
        }
    }

    fn nnz(&self) -> usize {
        self.values.len()
    }

    fn apply_add(&self, coef: C64, x: &[C64], out: &mut [C64]) {
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for p in self.indptr[r]..self.indptr[r + 1] {
                acc += self.values[p] * x[self.indices[p] as usize];
            }
            *o += coef * acc;
        }
    }
}

/// Superoperator pieces ρ ↦ Aρ and ρ ↦ ρB on the support.
struct Builder<'a> {
    d: usize,
    index: &'a [u32],
    support: &'a [(u32, u32)],
}

impl Builder<'_> {
    fn left(&self, a: &Operator, coef: C64, out: &mut Vec<(u32, u32, C64)>) {
        let cols = columns(a);
        for (s, &(c, e)) in self.support.iter().enumerate() {
            for &(r, v) in &cols[c as usize] {
                let t = self.index[r * self.d + e as usize];
                debug_assert!(t != ABSENT);
                out.push((t, s as u32, coef * v));
            }
        }
    }

    fn right(&self, b: &Operator, coef: C64, out: &mut Vec<(u32, u32, C64)>) {
        let rows = rows(b);
        for (s, &(c, e)) in self.support.iter().enumerate() {
            for &(col, v) in &rows[e as usize] {
                let t = self.index[c as usize * self.d + col];
                debug_assert!(t != ABSENT);
                out.push((t, s as u32, coef * v));
            }
        }
    }

    fn sandwich(&self, l: &Operator, rate: f64, out: &mut Vec<(u32, u32, C64)>) {
        let cols = columns(l);
        for (s, &(c, e)) in self.support.iter().enumerate() {
            for &(a, va) in &cols[c as usize] {
                for &(b, vb) in &cols[e as usize] {
                    let t = self.index[a * self.d + b];
                    debug_assert!(t != ABSENT);
                    out.push((t, s as u32, va * vb.conj() * rate));
                }
            }
        }
    }
}

pub(crate) struct ReducedGenerator {
    d: usize,
    support: Vec<(u32, u32)>,
    fixed: Csr,
    /// (superoperator, frequency): contributes e^{iνt}·S.
    rotating: Vec<(Csr, f64)>,
}

/// Reachable (row, column) entries, and each flat entry's position among them.
type Support = (Vec<(u32, u32)>, Vec<u32>);

impl ReducedGenerator {
    /// Entries reachable from the initial state, or `None` if they exceed
    /// `limit`.
    fn support(model: &QuantumModel, limit: usize) -> Option<Support> {
        let d = model.dim();
        let mut hams: Vec<Operator> = Vec::new();
        for term in &model.terms {
            hams.push(term.matrix.clone());
            if !term.is_static() {
                hams.push(term.matrix.adjoint());
            }
        }
        for j in &model.jumps {
            hams.push(&j.operator.adjoint() * &j.operator);
        }
        // Union pattern of everything acting from the left or right.
        let mut pattern = vec![Vec::new(); d];
        for h in &hams {
            for (r, c, _) in h.triplets() {
                pattern[c].push(r);
                pattern[r].push(c);
            }
        }
        for p in pattern.iter_mut() {
            p.sort_unstable();
            p.dedup();
        }
        let jump_cols: Vec<Vec<Vec<usize>>> = model
            .jumps
            .iter()
            .map(|j| {
                columns(&j.operator)
                    .into_iter()
                    .map(|c| c.into_iter().map(|(r, _)| r).collect())
                    .collect()
            })
            .collect();

        let mut index = vec![ABSENT; d * d];
        let mut support = Vec::new();
        let mut queue = VecDeque::new();
        let rho = &model.initial_state;
        for c in 0..d {
            for r in 0..d {
                if rho[(r, c)] != C64::new(0.0, 0.0) {
                    index[r * d + c] = support.len() as u32;
                    support.push((r as u32, c as u32));
                    queue.push_back((r, c));
                }
            }
        }
        let mut visit = |r: usize, c: usize, support: &mut Vec<(u32, u32)>, queue: &mut VecDeque<(usize, usize)>| {
            if index[r * d + c] == ABSENT {
                index[r * d + c] = support.len() as u32;
                support.push((r as u32, c as u32));
                queue.push_back((r, c));
            }
        };
        while let Some((r, c)) = queue.pop_front() {
            if support.len() > limit {
                return None;
            }
            for &a in &pattern[r] {
                visit(a, c, &mut support, &mut queue);
            }
            for &b in &pattern[c] {
                visit(r, b, &mut support, &mut queue);
            }
            for cols in &jump_cols {
                for &a in &cols[r] {
                    for &b in &cols[c] {
                        visit(a, b, &mut support, &mut queue);
                    }
                }
            }
        }
        Some((support, index))
    }

    pub(crate) fn new(model: &QuantumModel, limit: usize) -> Option<Self> {
        let d = model.dim();
        let (support, index) = Self::support(model, limit)?;
        let n = support.len();
        let b = Builder {
            d,
            index: &index,
            support: &support,
        };
        let i = C64::new(0.0, 1.0);
        let mut k0 = Operator::zeros(d);
        for term in model.terms.iter().filter(|t| t.is_static()) {
            k0 = &k0 + &term.matrix;
        }
        for j in &model.jumps {
            k0 = &k0 - &(&j.operator.adjoint() * &j.operator).scale(C64::new(0.0, 0.5 * j.rate));
        }
        let mut fixed = Vec::new();
        b.left(&k0, -i, &mut fixed);
        b.right(&k0.adjoint(), i, &mut fixed);
        for j in &model.jumps {
            b.sandwich(&j.operator, j.rate, &mut fixed);
        }
        let mut rotating = Vec::new();
        for term in model.terms.iter().filter(|t| !t.is_static()) {
            for (m, nu) in [
                (term.matrix.clone(), term.frequency),
                (term.matrix.adjoint(), -term.frequency),
            ] {
                let mut e = Vec::new();
                b.left(&m, -i, &mut e);
                b.right(&m, i, &mut e);
                rotating.push((Csr::from_entries(n, e), nu));
            }
        }
        Some(Self {
            d,
            fixed: Csr::from_entries(n, fixed),
            rotating,
            support,
        })
    }

    pub(crate) fn len(&self) -> usize {
        self.support.len()
    }

    pub(crate) fn nnz(&self) -> usize {
        self.fixed.nnz() + self.rotating.iter().map(|(s, _)| s.nnz()).sum::<usize>()
    }

    pub(crate) fn gather(&self, rho: &DMatrix<C64>) -> Vec<C64> {
        self.support
            .iter()
            .map(|&(r, c)| rho[(r as usize, c as usize)])
            .collect()
    }

    pub(crate) fn scatter(&self, v: &[C64]) -> DMatrix<C64> {
        let mut rho = DMatrix::zeros(self.d, self.d);
        for (&(r, c), &x) in self.support.iter().zip(v) {
            rho[(r as usize, c as usize)] = x;
        }
        rho
    }

    pub(crate) fn rhs(&self, t: f64, x: &[C64], out: &mut [C64]) {
        out.iter_mut().for_each(|o| *o = C64::new(0.0, 0.0));
        self.fixed.apply_add(C64::new(1.0, 0.0), x, out);
        for (s, nu) in &self.rotating {
            s.apply_add(C64::from_polar(1.0, nu * t), x, out);
        }
    }
}
