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

//! The four SU(2) symmetry classes of three-site operators.
//!
//! For an ordered triple `(s1, s2, s3)` the generator spaces are
//!
//! * G1 = {X1, Y1, Z1}
//! * G2 = {X1X2X3, Y1Y2Y3, Z1Z2Z3}
//! * G3 = {X1Y2Y3, Y1Z2Z3, Z1X2X3}
//! * G4 = {X1Z2Z3, Y1X2X3, Z1Y2Y3}
//!
//! and every non-identity string on the triple lies in exactly one of the
//! sectors C = {X2X3, Y2Y3, Z2Z3}, G(l) or H(l) \ C, where H(l) is the
//! commutant of G(l).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::pauli::{Monomial, Pauli, PauliError, PauliString, PauliSum};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymmetryError {
    #[error("site {0} repeated in triple")]
    RepeatedSite(usize),
    #[error("operator acts outside the triple")]
    SupportOutside,
    #[error("identity string has no sector")]
    Identity,
    #[error("generator space has rank {0}, expected 3")]
    Rank(usize),
    #[error("class index {0} not in 1..=4")]
    BadClass(u8),
    #[error("string matched {0} sectors")]
    Ambiguous(usize),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// Which family a generator space belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassLabel {
    Canonical(u8),
    Torus,
    Custom,
}

/// A real three-dimensional space of operators given by a basis.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpace {
    basis: [PauliSum; 3],
    label: ClassLabel,
}

impl GeneratorSpace {
    pub fn new(basis: [PauliSum; 3], label: ClassLabel) -> Result<Self, SymmetryError> {
        let r = span_rank(&basis);
        if r != 3 {
            return Err(SymmetryError::Rank(r));
        }
        Ok(GeneratorSpace { basis, label })
    }

    pub fn from_strings(strings: [PauliString; 3], label: ClassLabel) -> Result<Self, SymmetryError> {
        let mk = |p: PauliString| PauliSum::from_string(p, 1.0);
        GeneratorSpace::new([mk(strings[0])?, mk(strings[1])?, mk(strings[2])?], label)
    }

    pub fn from_labels(labels: [&str; 3]) -> Result<Self, SymmetryError> {
        GeneratorSpace::from_strings(
            [
                PauliString::from_label(labels[0])?,
                PauliString::from_label(labels[1])?,
                PauliString::from_label(labels[2])?,
            ],
            ClassLabel::Custom,
        )
    }

    pub fn basis(&self) -> &[PauliSum; 3] {
        &self.basis
    }

    pub fn label(&self) -> ClassLabel {
        self.label
    }

    pub fn n_sites(&self) -> usize {
        self.basis[0].n_sites()
    }

    /// The basis as signed Pauli strings, when every element is `±1` times one string.
    pub fn strings(&self) -> Option<[PauliString; 3]> {
        let mut out = [PauliString::identity(self.n_sites()); 3];
        for (slot, g) in out.iter_mut().zip(self.basis.iter()) {
            if g.len() != 1 {
                return None;
            }
            let (p, c) = g.iter().next()?;
            let mut it = c.terms();
            let (m, v) = it.next()?;
            if it.next().is_some() || *m != Monomial::ONE || v.abs() != 1.0 {
                return None;
            }
            *slot = if *v > 0.0 { *p } else { p.with_phase(2) };
        }
        Some(out)
    }

    pub fn contains(&self, op: &PauliSum) -> bool {
        let mut all: Vec<PauliSum> = self.basis.to_vec();
        all.push(op.clone());
        span_rank(&all) == 3
    }
}

/// Sector of a three-site string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SectorLabel {
    C,
    G(u8),
    H(u8),
}

impl fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectorLabel::C => write!(f, "C"),
            SectorLabel::G(l) => write!(f, "G{}", l),
            SectorLabel::H(l) => write!(f, "H{}", l),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraType {
    Su2,
    Torus3,
    Other,
}

fn check_triple(sites: [usize; 3]) -> Result<(), SymmetryError> {
    if sites[0] == sites[1] || sites[0] == sites[2] {
        return Err(SymmetryError::RepeatedSite(sites[0]));
    }
    if sites[1] == sites[2] {
        return Err(SymmetryError::RepeatedSite(sites[1]));
    }
    Ok(())
}

fn triple_mask(sites: [usize; 3]) -> u64 {
    sites.iter().fold(0, |m, s| m | 1 << s)
}

const CLASS_PATTERNS: [[[Pauli; 3]; 3]; 4] = {
    use Pauli::{I, X, Y, Z};
    [
        [[X, I, I], [Y, I, I], [Z, I, I]],
        [[X, X, X], [Y, Y, Y], [Z, Z, Z]],
        [[X, Y, Y], [Y, Z, Z], [Z, X, X]],
        [[X, Z, Z], [Y, X, X], [Z, Y, Y]],
    ]
};

fn pattern_string(n: usize, sites: [usize; 3], pattern: &[Pauli; 3]) -> Result<PauliString, PauliError> {
    let ops: Vec<(usize, Pauli)> = sites
        .iter()
        .zip(pattern.iter())
        .filter(|(_, p)| **p != Pauli::I)
        .map(|(s, p)| (*s, *p))
        .collect();
    PauliString::from_ops(n, &ops)
}

/// Basis strings of the canonical class `l` on the ordered triple.
pub fn class_strings(l: u8, sites: [usize; 3], n: usize) -> Result<[PauliString; 3], SymmetryError> {
    if !(1..=4).contains(&l) {
        return Err(SymmetryError::BadClass(l));
    }
    check_triple(sites)?;
    let pats = &CLASS_PATTERNS[(l - 1) as usize];
    Ok([
        pattern_string(n, sites, &pats[0])?,
        pattern_string(n, sites, &pats[1])?,
        pattern_string(n, sites, &pats[2])?,
    ])
}

/// The torus space C = {X2X3, Y2Y3, Z2Z3} on the last two sites of the triple.
pub fn torus_strings(sites: [usize; 3], n: usize) -> Result<[PauliString; 3], SymmetryError> {
    check_triple(sites)?;
    let mk = |p| PauliString::from_ops(n, &[(sites[1], p), (sites[2], p)]);
    Ok([mk(Pauli::X)?, mk(Pauli::Y)?, mk(Pauli::Z)?])
}

pub fn canonical_classes(sites: [usize; 3], n: usize) -> Result<[GeneratorSpace; 4], SymmetryError> {
    let mk = |l: u8| GeneratorSpace::from_strings(class_strings(l, sites, n)?, ClassLabel::Canonical(l));
    Ok([mk(1)?, mk(2)?, mk(3)?, mk(4)?])
}

pub fn torus_space(sites: [usize; 3], n: usize) -> Result<GeneratorSpace, SymmetryError> {
    GeneratorSpace::from_strings(torus_strings(sites, n)?, ClassLabel::Torus)
}

pub fn sector_of(p: &PauliString, sites: [usize; 3]) -> Result<SectorLabel, SymmetryError> {
    check_triple(sites)?;
    if p.is_identity() {
        return Err(SymmetryError::Identity);
    }
    if p.support() & !triple_mask(sites) != 0 {
        return Err(SymmetryError::SupportOutside);
    }
    let n = p.n_sites();
    let key = p.unsigned();
    if torus_strings(sites, n)?.contains(&key) {
        return Ok(SectorLabel::C);
    }
    let mut found = Vec::new();
    for l in 1..=4u8 {
        let g = class_strings(l, sites, n)?;
        if g.contains(&key) {
            found.push(SectorLabel::G(l));
        } else if g.iter().all(|q| q.commutes_unchecked(&key)) {
            found.push(SectorLabel::H(l));
        }
    }
    match found.as_slice() {
        [one] => Ok(*one),
        other => Err(SymmetryError::Ambiguous(other.len())),
    }
}

fn check_support(h: &PauliSum, sites: [usize; 3]) -> Result<(), SymmetryError> {
    check_triple(sites)?;
    if h.support() & !triple_mask(sites) != 0 {
        return Err(SymmetryError::SupportOutside);
    }
    Ok(())
}

/// Classes `l` such that every term of `h` lies in G(l) or commutes with all of G(l).
pub fn classify(h: &PauliSum, sites: [usize; 3]) -> Result<BTreeSet<u8>, SymmetryError> {
    check_support(h, sites)?;
    let n = h.n_sites();
    let mut out = BTreeSet::new();
    for l in 1..=4u8 {
        let g = class_strings(l, sites, n)?;
        let ok = h.iter().all(|(p, _)| g.contains(p) || g.iter().all(|q| q.commutes_unchecked(p)));
        if ok {
            out.insert(l);
        }
    }
    Ok(out)
}

/// True when every term of `h` is in the span of `space` or commutes with all of it.
pub fn confined_to(h: &PauliSum, space: &GeneratorSpace) -> Result<bool, SymmetryError> {
    let mut outside = PauliSum::zero(h.n_sites());
    for (p, c) in h.iter() {
        let term = PauliSum::from_string(*p, c.clone())?;
        if !space.contains(&term) {
            outside.add_sum(&term)?;
        }
    }
    for g in space.basis() {
        if !PauliSum::commutator(&outside, g)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Routes every term by its sector; C and G1 terms go to class 1.
pub fn decompose_by_class(h: &PauliSum, sites: [usize; 3]) -> Result<[PauliSum; 4], SymmetryError> {
    check_support(h, sites)?;
    let n = h.n_sites();
    let mut parts = [PauliSum::zero(n), PauliSum::zero(n), PauliSum::zero(n), PauliSum::zero(n)];
    for (p, c) in h.iter() {
        let l = match sector_of(p, sites)? {
            SectorLabel::C => 1,
            SectorLabel::G(l) | SectorLabel::H(l) => l,
        };
        parts[(l - 1) as usize].add_term(*p, c)?;
    }
    Ok(parts)
}

type Coord = (PauliString, Monomial);

fn to_rational(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite coefficient")
}

fn coordinates(ops: &[PauliSum]) -> (Vec<Coord>, Vec<Vec<BigRational>>) {
    let mut index: BTreeMap<Coord, usize> = BTreeMap::new();
    for op in ops {
        for (p, c) in op.iter() {
            for (m, _) in c.terms() {
                let next = index.len();
                index.entry((*p, *m)).or_insert(next);
            }
        }
    }
    let mut coords = vec![(PauliString::identity(1), Monomial::ONE); index.len()];
    for (k, v) in &index {
        coords[*v] = *k;
    }
    let rows = ops
        .iter()
        .map(|op| {
            let mut row = vec![BigRational::zero(); index.len()];
            for (p, c) in op.iter() {
                for (m, v) in c.terms() {
                    row[index[&(*p, *m)]] = to_rational(*v);
                }
            }
            row
        })
        .collect();
    (coords, rows)
}

/// Row-reduces `rows` in place, applying the same operations to `track`;
/// returns the pivot columns. Nonzero rows are moved to the front.
fn eliminate(rows: &mut [Vec<BigRational>], track: &mut [Vec<BigRational>]) -> Vec<usize> {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(pivot) = (rank..n_rows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        track.swap(rank, pivot);
        let inv = BigRational::one() / rows[rank][col].clone();
        for v in rows[rank].iter_mut() {
            *v = &*v * &inv;
        }
        for v in track[rank].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n_rows {
            if r == rank || rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col].clone();
            for k in 0..n_cols {
                let d = &f * &rows[rank][k];
                rows[r][k] -= d;
            }
            for k in 0..track[r].len() {
                let d = &f * &track[rank][k];
                track[r][k] -= d;
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == n_rows {
            break;
        }
    }
    pivots
}

/// Rank of the real span of `ops` over (Pauli string, monomial) coordinates.
pub fn span_rank(ops: &[PauliSum]) -> usize {
    let (_, mut rows) = coordinates(ops);
    let mut track = vec![Vec::new(); rows.len()];
    eliminate(&mut rows, &mut track).len()
}

fn independent_rows(ops: &[PauliSum]) -> Vec<PauliSum> {
    let (_, rows) = coordinates(ops);
    let n_coord = rows.first().map_or(0, |r| r.len());
    let mut cols: Vec<Vec<BigRational>> = (0..n_coord).map(|k| rows.iter().map(|r| r[k].clone()).collect()).collect();
    let mut track = vec![Vec::new(); cols.len()];
    eliminate(&mut cols, &mut track).into_iter().map(|c| ops[c].clone()).collect()
}

fn combination(ops: &[PauliSum], weights: &[BigRational]) -> PauliSum {
    let n = ops.first().map_or(1, |o| o.n_sites());
    let mut out = PauliSum::zero(n);
    for (op, w) in ops.iter().zip(weights) {
        if w.is_zero() {
            continue;
        }
        let v = w.to_f64().expect("finite weight");
        out.add_sum(&op.scale(v)).expect("consistent sites");
    }
    out
}

/// A basis of span(a) ∩ span(b).
pub fn intersect_spans(a: &[PauliSum], b: &[PauliSum]) -> Vec<PauliSum> {
    let a_basis = independent_rows(a);
    let b_basis = independent_rows(b);
    let all: Vec<PauliSum> = a_basis.iter().chain(b_basis.iter()).cloned().collect();
    if all.is_empty() {
        return Vec::new();
    }
    let (_, mut rows) = coordinates(&all);
    let m = rows.len();
    let mut track: Vec<Vec<BigRational>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    let rank = eliminate(&mut rows, &mut track).len();
    // Rows past the rank are left-null combinations: Σ α_i a_i + Σ β_j b_j = 0.
    let mut out = Vec::new();
    for null in &track[rank..] {
        let alpha = &null[..a_basis.len()];
        let scale = alpha
            .iter()
            .filter(|v| !v.is_zero())
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigRational::one);
        let normalized: Vec<BigRational> = alpha.iter().map(|v| v / &scale).collect();
        let v = combination(&a_basis, &normalized);
        if !v.is_empty() {
            out.push(v);
        }
    }
    out
}

pub fn algebra_type(g: &GeneratorSpace) -> Result<AlgebraType, SymmetryError> {
    let b = g.basis();
    let r = span_rank(b);
    if r != 3 {
        return Err(SymmetryError::Rank(r));
    }
    let brackets = [
        PauliSum::commutator(&b[0], &b[1])?,
        PauliSum::commutator(&b[1], &b[2])?,
        PauliSum::commutator(&b[2], &b[0])?,
    ];
    if brackets.iter().all(|x| x.is_empty()) {
        return Ok(AlgebraType::Torus3);
    }
    let closed = brackets.iter().all(|x| g.contains(x));
    // Hermitian generators span a compact algebra, so perfect + closed means su(2).
    if closed && span_rank(&brackets) == 3 {
        return Ok(AlgebraType::Su2);
    }
    Ok(AlgebraType::Other)
}

/// All 63 non-identity strings on the triple, in mask order.
pub fn triple_strings(sites: [usize; 3], n: usize) -> Result<Vec<PauliString>, SymmetryError> {
    check_triple(sites)?;
    let ps = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let mut out = Vec::with_capacity(63);
    for a in ps {
        for b in ps {
            for c in ps {
                let s = pattern_string(n, sites, &[a, b, c])?;
                if !s.is_identity() {
                    out.push(s);
                }
            }
        }
    }
    Ok(out)
}

/// Span of all strings in sector H(l) together with C.
pub fn commutant_strings(l: u8, sites: [usize; 3], n: usize) -> Result<Vec<PauliString>, SymmetryError> {
    let mut out = Vec::new();
    for p in triple_strings(sites, n)? {
        match sector_of(&p, sites)? {
            SectorLabel::C => out.push(p),
            SectorLabel::H(k) if k == l => out.push(p),
            _ => {}
        }
    }
    Ok(out)
}
