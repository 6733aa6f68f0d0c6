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


//! Lattice models, their conventional and triangle-based clusterings, and
//! the per-vertex residual term counter.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::pauli::{chirality, chirality_component, heisenberg_pair, Coefficient, Pauli, PauliError, PauliString, PauliSum, Symbol};
use crate::symmetry::{classify, confined_to, GeneratorSpace, SymmetryError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("unknown model `{0}`")]
    Unknown(String),
    #[error("invalid size {size} for {model}: {reason}")]
    InvalidSize { model: &'static str, size: usize, reason: &'static str },
    #[error("no proper edge colouring found")]
    NoColouring,
    #[error("invalid clustering: {0}")]
    Invalid(String),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelName {
    TfimChain,
    HeisenbergChain,
    J1J2,
    TfimSquare,
    HeisenbergSquare,
    Kagome,
    KagomeChirality,
    Triangular,
    TriangularChirality,
    KagomeRing12,
}

impl ModelName {
    /// The nine benchmark lattices, in table order.
    pub const TABLE: [ModelName; 9] = [
        ModelName::TfimChain,
        ModelName::HeisenbergChain,
        ModelName::J1J2,
        ModelName::TfimSquare,
        ModelName::HeisenbergSquare,
        ModelName::Kagome,
        ModelName::KagomeChirality,
        ModelName::Triangular,
        ModelName::TriangularChirality,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ModelName::TfimChain => "tfim-1d",
            ModelName::HeisenbergChain => "heisenberg-1d",
            ModelName::J1J2 => "j1j2-two-layer",
            ModelName::TfimSquare => "tfim-square",
            ModelName::HeisenbergSquare => "heisenberg-square",
            ModelName::Kagome => "kagome",
            ModelName::KagomeChirality => "kagome-chirality",
            ModelName::Triangular => "triangular",
            ModelName::TriangularChirality => "triangular-chirality",
            ModelName::KagomeRing12 => "kagome-ring-12",
        }
    }

    pub fn parse(s: &str) -> Option<ModelName> {
        ModelName::TABLE.iter().chain(&[ModelName::KagomeRing12]).copied().find(|m| m.id() == s)
    }

    /// Chain length or linear lattice size used when none is given.
    pub fn default_size(self) -> usize {
        match self {
            ModelName::TfimChain | ModelName::HeisenbergChain | ModelName::J1J2 => 16,
            ModelName::TfimSquare | ModelName::HeisenbergSquare | ModelName::Triangular | ModelName::TriangularChirality => 6,
            ModelName::Kagome | ModelName::KagomeChirality => 4,
            ModelName::KagomeRing12 => 12,
        }
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Zz,
    Heisenberg,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelEdge {
    pub a: usize,
    pub b: usize,
    pub coupling: Coefficient,
    pub kind: EdgeKind,
}

/// Chirality term `coupling · σ_i·(σ_j×σ_k)` for `sites = [i, j, k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelTriangle {
    pub sites: [usize; 3],
    pub coupling: Coefficient,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelField {
    pub site: usize,
    pub coupling: Coefficient,
    pub axis: Pauli,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeModel {
    pub name: ModelName,
    pub size: usize,
    pub n_sites: usize,
    pub edges: Vec<ModelEdge>,
    pub triangles: Vec<ModelTriangle>,
    pub fields: Vec<ModelField>,
    pub periodic: bool,
}

fn edge_sum(n: usize, e: &ModelEdge) -> Result<PauliSum, PauliError> {
    match e.kind {
        EdgeKind::Heisenberg => heisenberg_pair(n, e.a, e.b, &e.coupling),
        EdgeKind::Zz => PauliSum::from_string(PauliString::from_ops(n, &[(e.a, Pauli::Z), (e.b, Pauli::Z)])?, e.coupling.clone()),
    }
}

fn field_sum(n: usize, f: &ModelField) -> Result<PauliSum, PauliError> {
    PauliSum::from_string(PauliString::single(n, f.site, f.axis)?, f.coupling.clone())
}

impl LatticeModel {
    pub fn hamiltonian(&self) -> PauliSum {
        let n = self.n_sites;
        let mut h = PauliSum::zero(n);
        for e in &self.edges {
            h.add_sum(&edge_sum(n, e).expect("edge in range")).expect("same size");
        }
        for t in &self.triangles {
            let [i, j, k] = t.sites;
            h.add_sum(&chirality(n, i, j, k, &t.coupling).expect("triangle in range")).expect("same size");
        }
        for f in &self.fields {
            h.add_sum(&field_sum(n, f).expect("field in range")).expect("same size");
        }
        h
    }
}

fn sym(s: Symbol) -> Coefficient {
    Coefficient::symbol(s)
}

fn heis(a: usize, b: usize, c: Coefficient) -> ModelEdge {
    ModelEdge { a, b, coupling: c, kind: EdgeKind::Heisenberg }
}

fn zz(a: usize, b: usize) -> ModelEdge {
    ModelEdge { a, b, coupling: sym(Symbol::J), kind: EdgeKind::Zz }
}

fn x_field(site: usize) -> ModelField {
    ModelField { site, coupling: sym(Symbol::H).scale(-1.0), axis: Pauli::X }
}

/// Square-grid index with periodic wrap; also used by the triangular lattice.
fn grid(l: usize) -> impl Fn(isize, isize) -> usize {
    move |x, y| (x.rem_euclid(l as isize) as usize) * l + y.rem_euclid(l as isize) as usize
}

fn kagome_site(l: usize) -> impl Fn(isize, isize, usize) -> usize {
    move |x, y, s| ((x.rem_euclid(l as isize) as usize) * l + y.rem_euclid(l as isize) as usize) * 3 + s
}

/// Up and down triangles of the periodic kagome lattice, each counter-clockwise.
pub fn kagome_triangles(l: usize) -> (Vec<[usize; 3]>, Vec<[usize; 3]>) {
    let k = kagome_site(l);
    let mut ups = Vec::new();
    let mut downs = Vec::new();
    for x in 0..l as isize {
        for y in 0..l as isize {
            ups.push([k(x, y, 0), k(x, y, 1), k(x, y, 2)]);
            downs.push([k(x, y, 1), k(x + 1, y - 1, 2), k(x + 1, y, 0)]);
        }
    }
    (ups, downs)
}

/// Triangles of the periodic triangular lattice tagged with their colour `(x−y) mod 3`.
pub fn triangular_triangles(l: usize) -> (Vec<(usize, [usize; 3])>, Vec<(usize, [usize; 3])>) {
    let g = grid(l);
    let mut ups = Vec::new();
    let mut downs = Vec::new();
    for x in 0..l as isize {
        for y in 0..l as isize {
            let colour = (x - y).rem_euclid(3) as usize;
            ups.push((colour, [g(x, y), g(x + 1, y), g(x, y + 1)]));
            downs.push((colour, [g(x + 1, y), g(x + 1, y + 1), g(x, y + 1)]));
        }
    }
    (ups, downs)
}

/// Triangles of the 12-site ring as `(apex, left, right)`, so that the
/// chirality term reads `σ_apex·(σ_left×σ_right)`.
pub fn ring12_triangles() -> Vec<[usize; 3]> {
    (0..6).map(|t| [2 * t + 1, 2 * t, (2 * t + 2) % 12]).collect()
}

fn bad_size(model: ModelName, size: usize, reason: &'static str) -> ModelError {
    ModelError::InvalidSize { model: model.id(), size, reason }
}

pub fn build_model(name: ModelName, size: Option<usize>) -> Result<LatticeModel, ModelError> {
    let size = size.unwrap_or_else(|| name.default_size());
    let mut m = LatticeModel {
        name,
        size,
        n_sites: 0,
        edges: Vec::new(),
        triangles: Vec::new(),
        fields: Vec::new(),
        periodic: true,
    };
    match name {
        ModelName::TfimChain | ModelName::HeisenbergChain | ModelName::J1J2 => {
            if size < 8 || size % 4 != 0 {
                return Err(bad_size(name, size, "chain length must be a multiple of 4, at least 8"));
            }
            m.n_sites = size;
            for i in 0..size {
                let next = (i + 1) % size;
                match name {
                    ModelName::TfimChain => {
                        m.edges.push(zz(i, next));
                        m.fields.push(x_field(i));
                    }
                    ModelName::HeisenbergChain => m.edges.push(heis(i, next, sym(Symbol::J))),
                    _ => {
                        m.edges.push(heis(i, next, sym(Symbol::J1)));
                        m.edges.push(heis(i, (i + 2) % size, sym(Symbol::J2)));
                    }
                }
            }
        }
        ModelName::TfimSquare | ModelName::HeisenbergSquare => {
            let ok = if name == ModelName::TfimSquare { size >= 4 && size % 2 == 0 } else { size >= 6 && size % 6 == 0 };
            if !ok {
                return Err(bad_size(name, size, "square side must be even (Ising) or a multiple of 6 (Heisenberg)"));
            }
            m.n_sites = size * size;
            let g = grid(size);
            for x in 0..size as isize {
                for y in 0..size as isize {
                    let (i, right, up) = (g(x, y), g(x + 1, y), g(x, y + 1));
                    if name == ModelName::TfimSquare {
                        m.edges.push(zz(i, right));
                        m.edges.push(zz(i, up));
                        m.fields.push(x_field(i));
                    } else {
                        m.edges.push(heis(i, right, sym(Symbol::J)));
                        m.edges.push(heis(i, up, sym(Symbol::J)));
                    }
                }
            }
        }
        ModelName::Kagome | ModelName::KagomeChirality => {
            if size < 2 || 3 * size * size > crate::pauli::MAX_SITES {
                return Err(bad_size(name, size, "kagome size must be 2..=4"));
            }
            m.n_sites = 3 * size * size;
            let (ups, downs) = kagome_triangles(size);
            for t in ups.iter().chain(&downs) {
                push_triangle(&mut m, *t, name == ModelName::KagomeChirality);
            }
        }
        ModelName::Triangular | ModelName::TriangularChirality => {
            if size < 6 || size % 6 != 0 || size * size > crate::pauli::MAX_SITES {
                return Err(bad_size(name, size, "triangular side must be 6"));
            }
            m.n_sites = size * size;
            let (ups, downs) = triangular_triangles(size);
            for (_, [a, b, c]) in &ups {
                m.edges.push(heis(*a, *b, sym(Symbol::J)));
                m.edges.push(heis(*a, *c, sym(Symbol::J)));
                m.edges.push(heis(*b, *c, sym(Symbol::J)));
            }
            if name == ModelName::TriangularChirality {
                for (_, t) in ups.iter().chain(&downs) {
                    m.triangles.push(ModelTriangle { sites: *t, coupling: sym(Symbol::K) });
                }
            }
        }
        ModelName::KagomeRing12 => {
            if size != 12 {
                return Err(bad_size(name, size, "the ring has exactly 12 sites"));
            }
            m.n_sites = 12;
            for t in ring12_triangles() {
                push_triangle(&mut m, t, true);
            }
        }
    }
    Ok(m)
}

fn push_triangle(m: &mut LatticeModel, t: [usize; 3], with_chirality: bool) {
    let [a, b, c] = t;
    m.edges.push(heis(a, b, sym(Symbol::J)));
    m.edges.push(heis(b, c, sym(Symbol::J)));
    m.edges.push(heis(c, a, sym(Symbol::J)));
    if with_chirality {
        m.triangles.push(ModelTriangle { sites: t, coupling: sym(Symbol::K) });
    }
}

/// Total spin components `Σ X_i`, `Σ Y_i`, `Σ Z_i`.
pub fn conservation_generators(n: usize) -> [PauliSum; 3] {
    [Pauli::X, Pauli::Y, Pauli::Z].map(|p| {
        let mut s = PauliSum::zero(n);
        for i in 0..n {
            s.add_term(PauliString::single(n, i, p).expect("site in range"), &1.0.into()).expect("same size");
        }
        s
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Edge,
    Field,
    /// One component `χ_abc = X_a(Y_bZ_c − Z_bY_c)` on `sites = [a, b, c]`.
    Chirality,
    /// Class-confined three-site operator; the first site is the symmetry wire.
    Triangle,
}

/// A symmetry space other than the canonical classes, with its wire.
#[derive(Clone, Debug, PartialEq)]
pub struct CustomSymmetry {
    pub space: GeneratorSpace,
    pub wire: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub kind: BlockKind,
    pub sites: Vec<usize>,
    pub hamiltonian: PauliSum,
    pub symmetry: Option<CustomSymmetry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClusterKind {
    EdgeMatching,
    Field,
    ChiralitySet,
    TriangleSet,
    /// Blocks may overlap but commute pairwise.
    CommutingSet,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub kind: ClusterKind,
    pub hamiltonian: PauliSum,
    pub blocks: Vec<Block>,
}

impl Cluster {
    fn new(kind: ClusterKind, n: usize, blocks: Vec<Block>) -> Cluster {
        let mut h = PauliSum::zero(n);
        for b in &blocks {
            h.add_sum(&b.hamiltonian).expect("same size");
        }
        Cluster { kind, hamiltonian: h, blocks }
    }
}

/// Clusters in time order; the listed sequence spans `schedule_period`
/// time steps and the clusters sum to `schedule_period · H`.
#[derive(Clone, Debug, PartialEq)]
pub struct Clustering {
    pub model: ModelName,
    pub n_sites: usize,
    pub clusters: Vec<Cluster>,
    pub schedule_period: usize,
}

impl Clustering {
    /// Clusters per time step.
    pub fn cluster_count(&self) -> usize {
        self.clusters.len() / self.schedule_period
    }

    pub fn hamiltonians(&self) -> Vec<PauliSum> {
        self.clusters.iter().map(|c| c.hamiltonian.clone()).collect()
    }

    /// Checks reassembly, block structure and class confinement.
    pub fn validate(&self, model: &LatticeModel) -> Result<(), ModelError> {
        let mut total = PauliSum::zero(self.n_sites);
        for c in &self.clusters {
            total.add_sum(&c.hamiltonian)?;
        }
        if total != model.hamiltonian().scale(self.schedule_period as f64) {
            return Err(ModelError::Invalid("clusters do not reassemble the Hamiltonian".into()));
        }
        for (ci, c) in self.clusters.iter().enumerate() {
            if c.kind == ClusterKind::CommutingSet {
                for (i, a) in c.blocks.iter().enumerate() {
                    for b in &c.blocks[i + 1..] {
                        if !a.hamiltonian.commutes_with(&b.hamiltonian)? {
                            return Err(ModelError::Invalid(format!("cluster {} has non-commuting blocks", ci)));
                        }
                    }
                }
            } else {
                let mut used = 0u64;
                for b in &c.blocks {
                    let mask = b.sites.iter().fold(0u64, |m, s| m | 1 << s);
                    if used & mask != 0 {
                        return Err(ModelError::Invalid(format!("cluster {} reuses a site", ci)));
                    }
                    used |= mask;
                }
            }
            for b in &c.blocks {
                let mask = b.sites.iter().fold(0u64, |m, s| m | 1 << s);
                if b.hamiltonian.support() & !mask != 0 {
                    return Err(ModelError::Invalid(format!("block in cluster {} leaves its sites", ci)));
                }
                if b.kind == BlockKind::Triangle {
                    let ok = match &b.symmetry {
                        Some(cs) => confined_to(&b.hamiltonian, &cs.space)?,
                        None => !classify(&b.hamiltonian, [b.sites[0], b.sites[1], b.sites[2]])?.is_empty(),
                    };
                    if !ok {
                        return Err(ModelError::Invalid(format!("block {:?} is not class-confined", b.sites)));
                    }
                }
            }
        }
        Ok(())
    }
}

fn edge_block(n: usize, e: &ModelEdge) -> Block {
    Block {
        kind: BlockKind::Edge,
        sites: vec![e.a, e.b],
        hamiltonian: edge_sum(n, e).expect("edge in range"),
        symmetry: None,
    }
}

fn field_block(n: usize, f: &ModelField) -> Block {
    Block {
        kind: BlockKind::Field,
        sites: vec![f.site],
        hamiltonian: field_sum(n, f).expect("field in range"),
        symmetry: None,
    }
}

fn matching(n: usize, edges: &[&ModelEdge]) -> Cluster {
    Cluster::new(ClusterKind::EdgeMatching, n, edges.iter().map(|e| edge_block(n, e)).collect())
}

/// Heisenberg triangle block `J Σ_edges σ·σ (+ coupling · chirality)`;
/// `edges` lists the pairs and their couplings.
fn heisenberg_triangle(n: usize, sites: [usize; 3], edges: &[(usize, usize, Coefficient)], chir: Option<Coefficient>) -> Block {
    let mut h = PauliSum::zero(n);
    for (a, b, c) in edges {
        h.add_sum(&heisenberg_pair(n, *a, *b, c).expect("edge in range")).expect("same size");
    }
    if let Some(k) = chir {
        h.add_sum(&chirality(n, sites[0], sites[1], sites[2], &k).expect("triangle in range")).expect("same size");
    }
    Block { kind: BlockKind::Triangle, sites: sites.to_vec(), hamiltonian: h, symmetry: None }
}

fn full_triangle(n: usize, t: [usize; 3], j: &Coefficient, chir: Option<Coefficient>) -> Block {
    let [a, b, c] = t;
    heisenberg_triangle(n, t, &[(a, b, j.clone()), (b, c, j.clone()), (c, a, j.clone())], chir)
}

/// Three χ sub-clusters of a vertex-disjoint triangle set, in the time order
/// `χ_ijk`, `χ_kij`, `χ_jki`.
fn chirality_clusters(n: usize, tris: &[[usize; 3]], k: &Coefficient) -> Vec<Cluster> {
    let perms: [fn([usize; 3]) -> [usize; 3]; 3] = [|[i, j, k]| [i, j, k], |[i, j, k]| [k, i, j], |[i, j, k]| [j, k, i]];
    perms
        .iter()
        .map(|p| {
            let blocks = tris
                .iter()
                .map(|t| {
                    let [a, b, c] = p(*t);
                    Block {
                        kind: BlockKind::Chirality,
                        sites: vec![a, b, c],
                        hamiltonian: chirality_component(n, a, b, c, k).expect("triangle in range"),
                        symmetry: None,
                    }
                })
                .collect();
            Cluster::new(ClusterKind::ChiralitySet, n, blocks)
        })
        .collect()
}

/// The Ising block symmetry `span{X_aX_bX_c, X_aX_bY_c, Z_c}` with wire `c`.
fn ising_symmetry(n: usize, a: usize, b: usize, c: usize) -> Result<CustomSymmetry, ModelError> {
    let s = |ops: &[(usize, Pauli)]| PauliString::from_ops(n, ops);
    let space = GeneratorSpace::from_strings(
        [s(&[(a, Pauli::X), (b, Pauli::X), (c, Pauli::X)])?, s(&[(a, Pauli::X), (b, Pauli::X), (c, Pauli::Y)])?, s(&[(c, Pauli::Z)])?],
        crate::symmetry::ClassLabel::Custom,
    )?;
    Ok(CustomSymmetry { space, wire: c })
}

fn ising_block(n: usize, path: [usize; 3], field_sites: &[usize]) -> Result<Block, ModelError> {
    let [a, b, c] = path;
    let mut h = PauliSum::zero(n);
    for e in [zz(a, b), zz(b, c)] {
        h.add_sum(&edge_sum(n, &e)?)?;
    }
    for &s in field_sites {
        h.add_sum(&field_sum(n, &x_field(s))?)?;
    }
    Ok(Block { kind: BlockKind::Triangle, sites: vec![c, a, b], hamiltonian: h, symmetry: Some(ising_symmetry(n, a, b, c)?) })
}

/// Proper 4-edge-colouring of a corner-sharing triangle lattice in which
/// every site lies on exactly two triangles; returns a colour per triangle
/// edge `(a,b)`, `(b,c)`, `(c,a)`.
fn colour_corner_sharing(n: usize, tris: &[[usize; 3]]) -> Result<Vec<[usize; 3]>, ModelError> {
    let mut on_site: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ti, t) in tris.iter().enumerate() {
        for &s in t {
            on_site[s].push(ti);
        }
    }
    let mut order = Vec::with_capacity(tris.len());
    let mut seen = vec![false; tris.len()];
    for start in 0..tris.len() {
        if seen[start] {
            continue;
        }
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(t) = queue.pop_front() {
            order.push(t);
            for &s in &tris[t] {
                for &u in &on_site[s] {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
    }
    let mut choices = Vec::new();
    for p in 0..4 {
        for q in 0..4 {
            for r in 0..4 {
                if p != q && q != r && p != r {
                    choices.push([p, q, r]);
                }
            }
        }
    }
    let mut used = vec![0u8; n];
    let mut colours = vec![[0usize; 3]; tris.len()];
    fn place(k: usize, order: &[usize], tris: &[[usize; 3]], choices: &[[usize; 3]], used: &mut [u8], colours: &mut [[usize; 3]]) -> bool {
        let Some(&t) = order.get(k) else { return true };
        let [a, b, c] = tris[t];
        for ch in choices {
            let [p, q, r] = ch.map(|x| 1u8 << x);
            let (ma, mb, mc) = (p | r, p | q, q | r);
            if used[a] & ma != 0 || used[b] & mb != 0 || used[c] & mc != 0 {
                continue;
            }
            used[a] |= ma;
            used[b] |= mb;
            used[c] |= mc;
            colours[t] = *ch;
            if place(k + 1, order, tris, choices, used, colours) {
                return true;
            }
            used[a] &= !ma;
            used[b] &= !mb;
            used[c] &= !mc;
        }
        false
    }
    if place(0, &order, tris, &choices, &mut used, &mut colours) {
        Ok(colours)
    } else {
        Err(ModelError::NoColouring)
    }
}

fn coloured_matchings(n: usize, tris: &[[usize; 3]], colours: &[[usize; 3]]) -> Vec<Cluster> {
    let j = sym(Symbol::J);
    (0..4)
        .map(|col| {
            let mut edges = Vec::new();
            for (t, cs) in tris.iter().zip(colours) {
                let [a, b, c] = *t;
                for (pair, &k) in [(a, b), (b, c), (c, a)].iter().zip(cs) {
                    if k == col {
                        edges.push(heis(pair.0, pair.1, j.clone()));
                    }
                }
            }
            matching(n, &edges.iter().collect::<Vec<_>>())
        })
        .collect()
}

/// Ring colouring: base edges alternate between colours 0 and 3, the
/// left-apex edges take 1 and the apex-right edges take 2.
fn ring12_colours() -> Vec<[usize; 3]> {
    // Per triangle (apex, left, right) the edges are (apex,left), (left,right), (right,apex).
    (0..6).map(|t| [1, if t % 2 == 0 { 0 } else { 3 }, 2]).collect()
}

pub fn conventional_clustering(model: &LatticeModel) -> Result<Clustering, ModelError> {
    let n = model.n_sites;
    let l = model.size;
    let mut clusters = Vec::new();
    let edges_where = |f: &dyn Fn(usize, &ModelEdge) -> bool| -> Vec<&ModelEdge> { model.edges.iter().enumerate().filter(|(i, e)| f(*i, e)).map(|(_, e)| e).collect() };
    match model.name {
        ModelName::TfimChain | ModelName::TfimSquare => {
            clusters.push(Cluster::new(ClusterKind::Field, n, model.fields.iter().map(|f| field_block(n, f)).collect()));
            let directions: Vec<Vec<&ModelEdge>> = if model.name == ModelName::TfimChain {
                vec![model.edges.iter().collect()]
            } else {
                vec![edges_where(&|i, _| i % 2 == 0), edges_where(&|i, _| i % 2 == 1)]
            };
            for d in directions {
                clusters.push(Cluster::new(ClusterKind::CommutingSet, n, d.iter().map(|e| edge_block(n, e)).collect()));
            }
        }
        ModelName::HeisenbergChain => {
            for parity in 0..2 {
                clusters.push(matching(n, &edges_where(&|_, e| e.a % 2 == parity)));
            }
        }
        ModelName::J1J2 => {
            let is_j1 = |e: &ModelEdge| (e.b + n - e.a) % n == 1;
            for parity in 0..2 {
                clusters.push(matching(n, &edges_where(&|_, e| is_j1(e) && e.a % 2 == parity)));
            }
            for parity in 0..2 {
                clusters.push(matching(n, &edges_where(&|_, e| !is_j1(e) && (e.a / 2) % 2 == parity)));
            }
        }
        ModelName::HeisenbergSquare => {
            // Edges alternate (right, up) per site; site index is x*L + y.
            for (dir, coord) in [(0, 0usize), (1, 1)] {
                for parity in 0..2 {
                    clusters.push(matching(
                        n,
                        &edges_where(&|i, e| {
                            let (x, y) = (e.a / l, e.a % l);
                            i % 2 == dir && [x, y][coord] % 2 == parity
                        }),
                    ));
                }
            }
        }
        ModelName::Kagome | ModelName::KagomeChirality | ModelName::KagomeRing12 => {
            let (tris, groups, colours) = if model.name == ModelName::KagomeRing12 {
                let tris = ring12_triangles();
                let groups = vec![tris.iter().step_by(2).copied().collect::<Vec<_>>(), tris.iter().skip(1).step_by(2).copied().collect()];
                (tris, groups, ring12_colours())
            } else {
                let (ups, downs) = kagome_triangles(l);
                let tris: Vec<[usize; 3]> = ups.iter().chain(&downs).copied().collect();
                let colours = colour_corner_sharing(n, &tris)?;
                (tris, vec![ups, downs], colours)
            };
            clusters.extend(coloured_matchings(n, &tris, &colours));
            if model.name != ModelName::Kagome {
                for g in &groups {
                    clusters.extend(chirality_clusters(n, g, &sym(Symbol::K)));
                }
            }
        }
        ModelName::Triangular | ModelName::TriangularChirality => {
            // Edges come in (horizontal, vertical, diagonal) triples per up triangle at (x, y).
            for dir in 0..3 {
                for parity in 0..2 {
                    clusters.push(matching(
                        n,
                        &edges_where(&|i, _| {
                            let cell = i / 3;
                            let (x, y) = (cell / l, cell % l);
                            let coord = if dir == 1 { y } else { x };
                            i % 3 == dir && coord % 2 == parity
                        }),
                    ));
                }
            }
            if model.name == ModelName::TriangularChirality {
                let (ups, downs) = triangular_triangles(l);
                for group in [&ups, &downs] {
                    for colour in 0..3 {
                        let tris: Vec<[usize; 3]> = group.iter().filter(|(c, _)| *c == colour).map(|(_, t)| *t).collect();
                        clusters.extend(chirality_clusters(n, &tris, &sym(Symbol::K)));
                    }
                }
            }
        }
    }
    let c = Clustering { model: model.name, n_sites: n, clusters, schedule_period: 1 };
    c.validate(model)?;
    Ok(c)
}

pub fn proposed_clustering(model: &LatticeModel) -> Result<Clustering, ModelError> {
    let n = model.n_sites;
    let l = model.size;
    let j = sym(Symbol::J);
    let k = sym(Symbol::K);
    let mut clusters = Vec::new();
    let mut s = 1;
    match model.name {
        ModelName::TfimChain => {
            for offset in [0, 2] {
                let mut blocks = Vec::new();
                for i in 0..n / 4 {
                    let a = 4 * i + offset;
                    blocks.push(ising_block(n, [a, (a + 1) % n, (a + 2) % n], &[a, (a + 1) % n])?);
                }
                clusters.push(Cluster::new(ClusterKind::TriangleSet, n, blocks));
            }
        }
        ModelName::HeisenbergChain => {
            for offset in [0, 2] {
                let blocks = (0..n / 4)
                    .map(|i| {
                        let a = 4 * i + offset;
                        let (b, c) = ((a + 1) % n, (a + 2) % n);
                        heisenberg_triangle(n, [a, b, c], &[(a, b, j.clone()), (b, c, j.clone())], None)
                    })
                    .collect();
                clusters.push(Cluster::new(ClusterKind::TriangleSet, n, blocks));
            }
        }
        ModelName::J1J2 => {
            s = 2;
            let (j1, j2) = (sym(Symbol::J1), sym(Symbol::J2).scale(2.0));
            for first in [0, 1] {
                for phase in [0, 2] {
                    let blocks = (0..n / 4)
                        .map(|i| {
                            let a = 4 * i + phase + first;
                            let (b, c) = ((a + 1) % n, (a + 2) % n);
                            heisenberg_triangle(n, [a, b, c], &[(a, b, j1.clone()), (b, c, j1.clone()), (a, c, j2.clone())], None)
                        })
                        .collect();
                    clusters.push(Cluster::new(ClusterKind::TriangleSet, n, blocks));
                }
            }
        }
        ModelName::TfimSquare => {
            let g = grid(l);
            for (dx, dy, parity) in [(1isize, 0isize, 0usize), (0, 1, 1)] {
                let mut blocks = Vec::new();
                for x in 0..l as isize {
                    for y in 0..l as isize {
                        if ((x + y) as usize) % 2 == parity {
                            let centre = g(x, y);
                            blocks.push(ising_block(n, [g(x - dx, y - dy), centre, g(x + dx, y + dy)], &[centre])?);
                        }
                    }
                }
                clusters.push(Cluster::new(ClusterKind::CommutingSet, n, blocks));
            }
        }
        ModelName::HeisenbergSquare => {
            let g = grid(l);
            for colour in 0..3 {
                let mut blocks = Vec::new();
                for x in 0..l as isize {
                    for y in 0..l as isize {
                        if (x - y).rem_euclid(3) as usize == colour {
                            let (c, r, u) = (g(x, y), g(x + 1, y), g(x, y + 1));
                            blocks.push(heisenberg_triangle(n, [c, r, u], &[(c, r, j.clone()), (c, u, j.clone())], None));
                        }
                    }
                }
                clusters.push(Cluster::new(ClusterKind::TriangleSet, n, blocks));
            }
        }
        ModelName::Kagome | ModelName::KagomeChirality | ModelName::KagomeRing12 => {
            let groups = if model.name == ModelName::KagomeRing12 {
                let tris = ring12_triangles();
                vec![tris.iter().step_by(2).copied().collect::<Vec<_>>(), tris.iter().skip(1).step_by(2).copied().collect()]
            } else {
                let (ups, downs) = kagome_triangles(l);
                vec![ups, downs]
            };
            let chir = model.name != ModelName::Kagome;
            for g in groups {
                let blocks = g.iter().map(|t| full_triangle(n, *t, &j, chir.then(|| k.clone()))).collect();
                clusters.push(Cluster::new(ClusterKind::TriangleSet, n, blocks));
            }
        }
        ModelName::Triangular | ModelName::TriangularChirality => {
            s = 2;
            let chir = model.name == ModelName::TriangularChirality;
            let (ups, downs) = triangular_triangles(l);
            for group in [&ups, &downs] {
                for colour in 0..3 {
                    let blocks = group
                        .iter()
                        .filter(|(c, _)| *c == colour)
                        .map(|(_, t)| full_triangle(n, *t, &j, chir.then(|| k.scale(2.0))))
                        .collect();
                    clusters.push(Cluster::new(ClusterKind::TriangleSet, n, blocks));
                }
            }
        }
    }
    let c = Clustering { model: model.name, n_sites: n, clusters, schedule_period: s };
    c.validate(model)?;
    Ok(c)
}

/// Polynomial in the coupling ratio `t`, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct TPoly(pub Vec<f64>);

fn format_count(v: f64) -> String {
    let r = (v * 1e9).round() / 1e9;
    if r == r.trunc() {
        format!("{}", r as i64)
    } else {
        format!("{}", r)
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (d, &v) in self.0.iter().enumerate() {
            if v.abs() < 1e-9 {
                continue;
            }
            let coef = format_count(v);
            parts.push(match d {
                0 => coef,
                1 => format!("{}t", coef),
                _ => format!("{}t^{}", coef, d),
            });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

/// Degree in `t = K/J` or `t = J₂/J₁`; the Ising couplings `h` and `J` are identified.
fn t_degree(m: &crate::pauli::Monomial) -> usize {
    (m.exponent(Symbol::K) + m.exponent(Symbol::J2)) as usize
}

/// Σ |coefficient| of the normalised leading error generator, grouped by
/// coupling monomial and divided by the number of sites.
pub fn residual_count(c: &Clustering) -> Result<TPoly, ModelError> {
    let r = crate::trotter::step_error_generator(c)?;
    let mut poly = vec![0.0; 3];
    for (_, coef) in r.iter() {
        for (m, v) in coef.terms() {
            let d = t_degree(m);
            if poly.len() <= d {
                poly.resize(d + 1, 0.0);
            }
            poly[d] += v.abs();
        }
    }
    Ok(TPoly(poly.into_iter().map(|v| v / c.n_sites as f64).collect()))
}
