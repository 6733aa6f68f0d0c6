// Copyright 2026 The su2trotter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


use num_complex::Complex64;
use su2trotter::synth::Mat2;

use crate::{check_qubits, SimError, StateVector};

/// Superoperator on one qubit, acting on `vec(ρ)` with local index `r + 2c`.
pub type Super1 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity_superop() -> Super1 {
    let mut s = [[ZERO; 4]; 4];
    for (i, row) in s.iter_mut().enumerate() {
        row[i] = ONE;
    }
    s
}

/// `ρ → UρU†`.
pub fn unitary_superop(u: &Mat2) -> Super1 {
    let mut s = [[ZERO; 4]; 4];
    for r in 0..2 {
        for c in 0..2 {
            for r2 in 0..2 {
                for c2 in 0..2 {
                    s[r + 2 * c][r2 + 2 * c2] = u[(r, r2)] * u[(c, c2)].conj();
                }
            }
        }
    }
    s
}

/// `ρ → (1−p)ρ + (p/3) Σ_{X,Y,Z} PρP`.
pub fn depolarizing_superop(p: f64) -> Super1 {
    let mut s = [[ZERO; 4]; 4];
    s[0][0] = (1.0 - 2.0 * p / 3.0).into();
    s[3][3] = s[0][0];
    s[0][3] = (2.0 * p / 3.0).into();
    s[3][0] = s[0][3];
    s[1][1] = (1.0 - 4.0 * p / 3.0).into();
    s[2][2] = s[1][1];
    s
}

/// `ρ → (1−p)ρ + p ZρZ`.
pub fn dephasing_superop(p: f64) -> Super1 {
    let mut s = identity_superop();
    s[1][1] = (1.0 - 2.0 * p).into();
    s[2][2] = s[1][1];
    s
}

/// `a ∘ b`: apply `b` first.
pub fn compose(a: &Super1, b: &Super1) -> Super1 {
    let mut s = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            s[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    s
}

fn insert_zero_bits(mut x: usize, sorted: &[usize]) -> usize {
    for &b in sorted {
        let low = x & ((1 << b) - 1);
        x = ((x >> b) << (b + 1)) | low;
    }
    x
}

/// Split real and imaginary parts of a complex stream.
struct Stream<'a> {
    re: &'a mut [f64],
    im: &'a mut [f64],
}

/// `y_t = Σ_j s[t][j] x_j` elementwise over four equal-length streams.
fn mix4(s: &Super1, x: [Stream<'_>; 4]) {
    let [x0, x1, x2, x3] = x;
    let len = x0.re.len();
    let (r0, i0, r1, i1) = (&mut x0.re[..len], &mut x0.im[..len], &mut x1.re[..len], &mut x1.im[..len]);
    let (r2, i2, r3, i3) = (&mut x2.re[..len], &mut x2.im[..len], &mut x3.re[..len], &mut x3.im[..len]);
    let sr: [[f64; 4]; 4] = s.map(|row| row.map(|z| z.re));
    let si: [[f64; 4]; 4] = s.map(|row| row.map(|z| z.im));
    for k in 0..len {
        let xr = [r0[k], r1[k], r2[k], r3[k]];
        let xi = [i0[k], i1[k], i2[k], i3[k]];
        let mut yr = [0.0; 4];
        let mut yi = [0.0; 4];
        for t in 0..4 {
            for j in 0..4 {
                yr[t] += sr[t][j] * xr[j] - si[t][j] * xi[j];
                yi[t] += sr[t][j] * xi[j] + si[t][j] * xr[j];
            }
        }
        r0[k] = yr[0];
        r1[k] = yr[1];
        r2[k] = yr[2];
        r3[k] = yr[3];
        i0[k] = yi[0];
        i1[k] = yi[1];
        i2[k] = yi[2];
        i3[k] = yi[3];
    }
}

/// Applies a one-qubit superoperator to a pair of columns `lo` (column bit 0)
/// and `hi` (column bit 1), mixing rows that differ in bit `q`.
fn mix_columns(s: &Super1, q: usize, lo: (&mut [f64], &mut [f64]), hi: (&mut [f64], &mut [f64])) {
    let h = 1usize << q;
    let dim = lo.0.len();
    if h < 4 {
        for r in (0..dim).filter(|r| r & h == 0) {
            let xr = [lo.0[r], lo.0[r | h], hi.0[r], hi.0[r | h]];
            let xi = [lo.1[r], lo.1[r | h], hi.1[r], hi.1[r | h]];
            let mut y = [ZERO; 4];
            for (t, yt) in y.iter_mut().enumerate() {
                *yt = (0..4).map(|j| s[t][j] * Complex64::new(xr[j], xi[j])).sum();
            }
            (lo.0[r], lo.0[r | h], hi.0[r], hi.0[r | h]) = (y[0].re, y[1].re, y[2].re, y[3].re);
            (lo.1[r], lo.1[r | h], hi.1[r], hi.1[r | h]) = (y[0].im, y[1].im, y[2].im, y[3].im);
        }
        return;
    }
    let chunks = lo
        .0
        .chunks_exact_mut(2 * h)
        .zip(lo.1.chunks_exact_mut(2 * h))
        .zip(hi.0.chunks_exact_mut(2 * h).zip(hi.1.chunks_exact_mut(2 * h)));
    for ((lr, li), (hr, hi_)) in chunks {
        let (lr0, lr1) = lr.split_at_mut(h);
        let (li0, li1) = li.split_at_mut(h);
        let (hr0, hr1) = hr.split_at_mut(h);
        let (hi0, hi1) = hi_.split_at_mut(h);
        mix4(
            s,
            [
                Stream { re: lr0, im: li0 },
                Stream { re: lr1, im: li1 },
                Stream { re: hr0, im: hi0 },
                Stream { re: hr1, im: hi1 },
            ],
        );
    }
}

/// Disjoint mutable views of four distinct columns, in the order given.
fn columns_mut(buf: &mut [f64], dim: usize, cols: [usize; 4]) -> [&mut [f64]; 4] {
    let mut order = [0usize, 1, 2, 3];
    order.sort_by_key(|&j| cols[j]);
    let mut out: [&mut [f64]; 4] = Default::default();
    let mut rest = buf;
    let mut offset = 0;
    for j in order {
        let tail = std::mem::take(&mut rest).split_at_mut(cols[j] * dim - offset).1;
        let (col, after) = tail.split_at_mut(dim);
        out[j] = col;
        rest = after;
        offset = (cols[j] + 1) * dim;
    }
    out
}

fn two_columns<'a>(buf: &'a mut [f64], dim: usize, a: usize, b: usize) -> (&'a mut [f64], &'a mut [f64]) {
    let (left, right) = buf.split_at_mut(b * dim);
    (&mut left[a * dim..(a + 1) * dim], &mut right[..dim])
}

/// `ρ` stored column-major, `ρ_rc` at `r | c << n`, real and imaginary parts apart.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl DensityMatrix {
    pub fn from_pure(psi: &StateVector) -> Self {
        let n = psi.n_qubits();
        let a = psi.amplitudes();
        let dim = 1usize << n;
        let mut re = vec![0.0; dim * dim];
        let mut im = vec![0.0; dim * dim];
        for c in 0..dim {
            let ac = a[c].conj();
            for r in 0..dim {
                let z = a[r] * ac;
                re[r | c << n] = z.re;
                im[r | c << n] = z.im;
            }
        }
        DensityMatrix { n, re, im }
    }

    pub fn maximally_mixed(n: usize) -> Result<Self, SimError> {
        check_qubits(n)?;
        let dim = 1usize << n;
        let mut re = vec![0.0; dim * dim];
        for r in 0..dim {
            re[r | r << n] = 1.0 / dim as f64;
        }
        Ok(DensityMatrix { n, re, im: vec![0.0; dim * dim] })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// `ρ_rc`.
    pub fn element(&self, r: usize, c: usize) -> Complex64 {
        let i = r | c << self.n;
        Complex64::new(self.re[i], self.im[i])
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|r| self.element(r, r)).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.element(r, c) - self.element(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn purity(&self) -> f64 {
        self.re.iter().zip(&self.im).map(|(a, b)| a * a + b * b).sum()
    }

    pub fn apply_superop(&mut self, q: usize, s: &Super1) {
        let dim = self.dim();
        for c in (0..dim).filter(|c| c >> q & 1 == 0) {
            let (lr, hr) = two_columns(&mut self.re, dim, c, c | 1 << q);
            let (li, hi) = two_columns(&mut self.im, dim, c, c | 1 << q);
            mix_columns(s, q, (lr, li), (hr, hi));
        }
    }

    pub fn apply_unitary(&mut self, q: usize, u: &Mat2) {
        self.apply_superop(q, &unitary_superop(u));
    }

    pub fn depolarize(&mut self, q: usize, p: f64) {
        self.apply_superop(q, &depolarizing_superop(p));
    }

    pub fn dephase(&mut self, q: usize, p: f64) {
        self.apply_superop(q, &dephasing_superop(p));
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        self.pair_block(control, target, None, None, true, 0.0);
    }

    /// `ρ → (1−p)ρ + (p/15) Σ_{P≠II} PρP` on the pair.
    pub fn depolarize2(&mut self, a: usize, b: usize, p: f64) {
        self.pair_block(a, b, None, None, false, p);
    }

    /// Applies the pending superoperators of both qubits, the CNOT and then
    /// two-qubit depolarizing noise with probability `p2`, in a single pass.
    pub fn cnot_block(&mut self, control: usize, target: usize, s_control: Option<&Super1>, s_target: Option<&Super1>, p2: f64) {
        self.pair_block(control, target, s_control, s_target, true, p2);
    }

    /// Works on four columns at a time (column bits `a`, `b` free); column
    /// `j` of the quad has bit `a` = `j & 1` and bit `b` = `j >> 1`.
    fn pair_block(&mut self, a: usize, b: usize, sa: Option<&Super1>, sb: Option<&Super1>, cnot: bool, p2: f64) {
        let dim = self.dim();
        let (ba, bb) = (1usize << a, 1usize << b);
        let mut sorted = [a, b];
        sorted.sort_unstable();
        let run = 1usize << sorted[0];
        let keep = 1.0 - 16.0 * p2 / 15.0;
        let mix = 4.0 * p2 / 15.0;
        let mut diag = vec![(0.0, 0.0); dim / 4];
        for k in 0..dim / 4 {
            let base = insert_zero_bits(k, &sorted);
            let cols = [base, base | ba, base | bb, base | ba | bb];
            let [r0, r1, r2, r3] = columns_mut(&mut self.re, dim, cols);
            let [i0, i1, i2, i3] = columns_mut(&mut self.im, dim, cols);
            let mut q: [(&mut [f64], &mut [f64]); 4] = [(r0, i0), (r1, i1), (r2, i2), (r3, i3)];
            if let Some(s) = sa {
                let [c0, c1, c2, c3] = &mut q;
                mix_columns(s, a, (&mut *c0.0, &mut *c0.1), (&mut *c1.0, &mut *c1.1));
                mix_columns(s, a, (&mut *c2.0, &mut *c2.1), (&mut *c3.0, &mut *c3.1));
            }
            if let Some(s) = sb {
                let [c0, c1, c2, c3] = &mut q;
                mix_columns(s, b, (&mut *c0.0, &mut *c0.1), (&mut *c2.0, &mut *c2.1));
                mix_columns(s, b, (&mut *c1.0, &mut *c1.1), (&mut *c3.0, &mut *c3.1));
            }
            if cnot {
                for (re, im) in q.iter_mut() {
                    for col in [&mut **re, &mut **im] {
                        for i in 0..dim / (4 * run) {
                            let r = insert_zero_bits(i * run, &sorted) | ba;
                            let (lo, hi) = col.split_at_mut(r | bb);
                            lo[r..r + run].swap_with_slice(&mut hi[..run]);
                        }
                    }
                }
                let [_, c1, _, c3] = &mut q;
                c1.0.swap_with_slice(c3.0);
                c1.1.swap_with_slice(c3.1);
            }
            if p2 != 0.0 {
                for (i, d) in diag.iter_mut().enumerate() {
                    let r0 = insert_zero_bits(i, &sorted);
                    let rows = [r0, r0 | ba, r0 | bb, r0 | ba | bb];
                    *d = rows.iter().zip(q.iter()).fold((0.0, 0.0), |acc, (&r, c)| (acc.0 + c.0[r], acc.1 + c.1[r]));
                }
                for (re, im) in q.iter_mut() {
                    re.iter_mut().for_each(|x| *x *= keep);
                    im.iter_mut().for_each(|x| *x *= keep);
                }
                for (i, (dr, di)) in diag.iter().enumerate() {
                    let r0 = insert_zero_bits(i, &sorted);
                    for (c, r) in q.iter_mut().zip([r0, r0 | ba, r0 | bb, r0 | ba | bb]) {
                        c.0[r] += mix * dr;
                        c.1[r] += mix * di;
                    }
                }
            }
        }
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn overlap(&self, psi: &StateVector) -> Complex64 {
        let a = psi.amplitudes();
        let dim = self.dim();
        let mut acc = ZERO;
        for c in 0..dim {
            let (cr, ci) = (&self.re[c * dim..(c + 1) * dim], &self.im[c * dim..(c + 1) * dim]);
            let inner: Complex64 = a.iter().zip(cr.iter().zip(ci)).map(|(ar, (x, y))| ar.conj() * Complex64::new(*x, *y)).sum();
            acc += inner * a[c];
        }
        acc
    }
}
