// Copyright 2026 The sns Authors
// SPDX-License-Identifier: Apache-2.0

//! Real orthonormal basis of Hermitian 16×16 matrices adapted to atom exchange.
//!
//! The Liouvillian commutes with ρ ↦ PρP, P swapping the atoms, so it is block diagonal
//! between exchange-even (136) and exchange-odd (120) operators. Collective observables
//! such as the total S_z only see the even block.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use crate::qcore::{Op16, C64};

use super::liouvillian::Liouvillian;

pub const EVEN_DIM: usize = 136;
pub const ODD_DIM: usize = 120;

/// Hermitian basis element stored as its nonzero entries (row, col, value).
#[derive(Clone, Debug, PartialEq)]
pub struct SparseHerm {
    pub entries: Vec<(usize, usize, C64)>,
}

impl SparseHerm {
    pub fn to_dense(&self) -> Op16 {
        let mut m = Op16::zeros();
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
        }
        m
    }

    /// Tr(B M), real for Hermitian M.
    pub fn pair(&self, m: &Op16) -> f64 {
        self.entries.iter().map(|&(i, j, v)| (v * m[(j, i)]).re).sum()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Kind {
    Diag,
    Re,
    Im,
}

/// Standard element: Diag → |a⟩⟨a|, Re → (|a⟩⟨b| + |b⟩⟨a|)/√2, Im → (−i|a⟩⟨b| + i|b⟩⟨a|)/√2, a < b.
fn standard(kind: Kind, a: usize, b: usize) -> Vec<(usize, usize, C64)> {
    let s = FRAC_1_SQRT_2;
    match kind {
        Kind::Diag => vec![(a, a, C64::new(1.0, 0.0))],
        Kind::Re => vec![(a, b, C64::new(s, 0.0)), (b, a, C64::new(s, 0.0))],
        Kind::Im => vec![(a, b, C64::new(0.0, -s)), (b, a, C64::new(0.0, s))],
    }
}

fn swap_index(k: usize) -> usize {
    4 * (k % 4) + k / 4
}

/// Image of a standard element under exchange, as (kind, a, b, sign).
fn swap_image(kind: Kind, a: usize, b: usize) -> (Kind, usize, usize, f64) {
    let (pa, pb) = (swap_index(a), swap_index(b));
    match kind {
        Kind::Diag => (kind, pa, pa, 1.0),
        Kind::Re => (kind, pa.min(pb), pa.max(pb), 1.0),
        Kind::Im if pa < pb => (kind, pa, pb, 1.0),
        Kind::Im => (kind, pb, pa, -1.0),
    }
}

fn combine(x: &[(usize, usize, C64)], y: &[(usize, usize, C64)], sign: f64) -> SparseHerm {
    let mut entries: Vec<(usize, usize, C64)> = x.iter().map(|&(i, j, v)| (i, j, v * FRAC_1_SQRT_2)).collect();
    entries.extend(y.iter().map(|&(i, j, v)| (i, j, v * (sign * FRAC_1_SQRT_2))));
    SparseHerm { entries }
}

#[derive(Debug)]
pub struct SwapBasis {
    pub even: Vec<SparseHerm>,
    pub odd: Vec<SparseHerm>,
}

impl SwapBasis {
    fn build() -> Self {
        let mut elements = Vec::with_capacity(256);
        for a in 0..16 {
            elements.push((Kind::Diag, a, a));
            for b in (a + 1)..16 {
                elements.push((Kind::Re, a, b));
                elements.push((Kind::Im, a, b));
            }
        }
        let mut even = Vec::with_capacity(EVEN_DIM);
        let mut odd = Vec::with_capacity(ODD_DIM);
        for &(kind, a, b) in &elements {
            let (ik, ia, ib, sign) = swap_image(kind, a, b);
            let here = standard(kind, a, b);
            if (ik, ia, ib) == (kind, a, b) {
                let e = SparseHerm { entries: here };
                if sign > 0.0 {
                    even.push(e);
                } else {
                    odd.push(e);
                }
            } else if (ia, ib) > (a, b) {
                let there = standard(ik, ia, ib);
                even.push(combine(&here, &there, sign));
                odd.push(combine(&here, &there, -sign));
            }
        }
        debug_assert_eq!(even.len(), EVEN_DIM);
        debug_assert_eq!(odd.len(), ODD_DIM);
        SwapBasis { even, odd }
    }

    pub fn get() -> &'static SwapBasis {
        static BASIS: OnceLock<SwapBasis> = OnceLock::new();
        BASIS.get_or_init(SwapBasis::build)
    }

    pub fn block(&self, parity: Parity) -> &[SparseHerm] {
        match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }

    pub fn coords(&self, parity: Parity, m: &Op16) -> DVector<f64> {
        let block = self.block(parity);
        DVector::from_iterator(block.len(), block.iter().map(|b| b.pair(m)))
    }

    pub fn add_to(&self, parity: Parity, x: &DVector<f64>, m: &mut Op16) {
        for (b, &xk) in self.block(parity).iter().zip(x.iter()) {
            if xk != 0.0 {
                for &(i, j, v) in &b.entries {
                    m[(i, j)] += v * xk;
                }
            }
        }
    }

    pub fn matrix(&self, even: &DVector<f64>, odd: Option<&DVector<f64>>) -> Op16 {
        let mut m = Op16::zeros();
        self.add_to(Parity::Even, even, &mut m);
        if let Some(odd) = odd {
            self.add_to(Parity::Odd, odd, &mut m);
        }
        m
    }

    /// Real generator of one parity block, L_kl = Tr(B_k L[B_l]).
    pub fn project(&self, l: &Liouvillian, parity: Parity) -> DMatrix<f64> {
        let block = self.block(parity);
        let n = block.len();
        let mut out = DMatrix::zeros(n, n);
        for (col, b) in block.iter().enumerate() {
            let image = apply_sparse(l, b);
            for (row, bk) in block.iter().enumerate() {
                out[(row, col)] = bk.pair(&image);
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// L[B] for a sparse B, equal to `l.apply(&b.to_dense())`.
pub fn apply_sparse(l: &Liouvillian, b: &SparseHerm) -> Op16 {
    let mi = C64::new(0.0, -1.0);
    let mut out = Op16::zeros();
    let mut trace = C64::new(0.0, 0.0);
    for &(r, c, v) in &b.entries {
        if r == c {
            trace += v;
        }
        // −i H_eff B
        let hv = v * mi;
        for i in 0..16 {
            out[(i, c)] += l.h_eff[(i, r)] * hv;
        }
        // +i B H_eff†
        let bv = -hv;
        for j in 0..16 {
            out[(r, j)] += bv * l.h_eff[(j, c)].conj();
        }
        for jump in &l.jumps {
            let w = v * (2.0 * jump.rate);
            for j in 0..16 {
                let right = jump.op_adj[(c, j)];
                if right.re == 0.0 && right.im == 0.0 {
                    continue;
                }
                let rw = right * w;
                for i in 0..16 {
                    out[(i, j)] += jump.op[(i, r)] * rw;
                }
            }
        }
    }
    if l.gamma_t != 0.0 {
        for &(r, c, v) in &b.entries {
            out[(r, c)] -= v * l.gamma_t;
        }
        out += l.target * (trace * l.gamma_t);
    }
    out
}
