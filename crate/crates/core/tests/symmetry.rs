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

use std::collections::BTreeMap;

use proptest::prelude::*;
use su2trotter::linalg;
use su2trotter::pauli::*;
use su2trotter::symmetry::*;

const T: [usize; 3] = [0, 1, 2];

fn label(s: &str) -> PauliString {
    PauliString::from_label(s).unwrap()
}

fn sum(p: PauliString) -> PauliSum {
    PauliSum::from_string(p, 1.0).unwrap()
}

/// Commutation from dense matrices, independent of the symplectic check.
fn dense_commutes(a: &PauliString, b: &PauliString) -> bool {
    let u = Couplings::unit();
    let (da, db) = (sum(*a).to_dense(&u).unwrap(), sum(*b).to_dense(&u).unwrap());
    linalg::max_abs_diff(&(&da * &db), &(&db * &da)) < 1e-12
}

#[test]
fn sectors_cover_all_strings() {
    let strings = triple_strings(T, 3).unwrap();
    assert_eq!(strings.len(), 63);
    let mut counts: BTreeMap<SectorLabel, usize> = BTreeMap::new();
    for p in &strings {
        *counts.entry(sector_of(p, T).unwrap()).or_default() += 1;
    }
    assert_eq!(counts[&SectorLabel::C], 3);
    for l in 1..=4 {
        assert_eq!(counts[&SectorLabel::G(l)], 3, "G{}", l);
        assert_eq!(counts[&SectorLabel::H(l)], 12, "H{}", l);
    }
    assert_eq!(counts.values().sum::<usize>(), 63);
}

#[test]
fn sectors_against_dense_commutation() {
    for p in triple_strings(T, 3).unwrap() {
        let s = sector_of(&p, T).unwrap();
        for l in 1..=4u8 {
            let g = class_strings(l, T, 3).unwrap();
            let all = g.iter().all(|q| dense_commutes(q, &p));
            match s {
                SectorLabel::H(k) if k == l => assert!(all, "{} {}", p.label(), l),
                SectorLabel::C => assert!(all, "{}", p.label()),
                SectorLabel::G(k) if k == l => assert!(g.contains(&p)),
                _ => assert!(!all, "{} {}", p.label(), l),
            }
        }
    }
}

#[test]
fn generator_spans_and_commutants() {
    let mut gens = Vec::new();
    for l in 1..=4 {
        gens.extend(class_strings(l, T, 3).unwrap().iter().map(|p| sum(*p)));
    }
    assert_eq!(span_rank(&gens), 12);
    let c: Vec<PauliSum> = torus_strings(T, 3).unwrap().iter().map(|p| sum(*p)).collect();
    let comm: Vec<Vec<PauliSum>> =
        (1..=4).map(|l| commutant_strings(l, T, 3).unwrap().into_iter().map(sum).collect()).collect();
    for (l, h) in comm.iter().enumerate() {
        assert_eq!(span_rank(h), 15, "H{}", l + 1);
    }
    for a in 0..4 {
        for b in 0..4 {
            if a == b {
                continue;
            }
            let both = intersect_spans(&comm[a], &comm[b]);
            assert_eq!(span_rank(&both), 3);
            let mut joined = both.clone();
            joined.extend(c.iter().cloned());
            assert_eq!(span_rank(&joined), 3);
        }
    }
    let all: Vec<PauliSum> = triple_strings(T, 3).unwrap().into_iter().map(sum).collect();
    assert_eq!(span_rank(&all), 63);
}

#[test]
fn algebra_types() {
    assert_eq!(algebra_type(&torus_space(T, 3).unwrap()).unwrap(), AlgebraType::Torus3);
    for g in canonical_classes(T, 3).unwrap() {
        assert_eq!(algebra_type(&g).unwrap(), AlgebraType::Su2, "{:?}", g.label());
    }
    let other = GeneratorSpace::from_labels(["XII", "ZII", "IXI"]).unwrap();
    assert_eq!(algebra_type(&other).unwrap(), AlgebraType::Other);
    assert_eq!(GeneratorSpace::from_labels(["XII", "XII", "ZII"]), Err(SymmetryError::Rank(2)));
}

#[test]
fn classify_examples() {
    let u = 1.0.into();
    let mut heis = PauliSum::zero(3);
    for (a, b) in [(0, 1), (1, 2), (2, 0)] {
        heis.add_sum(&heisenberg_pair(3, a, b, &u).unwrap()).unwrap();
    }
    assert_eq!(classify(&heis, T).unwrap().into_iter().collect::<Vec<_>>(), vec![2]);
    let chi = chirality(3, 0, 1, 2, &u).unwrap();
    assert!(classify(&chi, T).unwrap().contains(&2));
    let field = PauliSum::from_labels(&[("ZII", 1.0), ("IXX", 1.0)]).unwrap();
    assert!(classify(&field, T).unwrap().contains(&1));
    let edge = heisenberg_pair(3, 0, 1, &u).unwrap();
    assert!(classify(&edge, T).unwrap().contains(&2));
    let mixed = PauliSum::from_labels(&[("XII", 1.0), ("XXX", 1.0)]).unwrap();
    assert!(classify(&mixed, T).unwrap().is_empty());
    let g2 = canonical_classes(T, 3).unwrap()[1].clone();
    assert!(confined_to(&heis, &g2).unwrap());
    assert!(confined_to(&edge, &g2).unwrap());
    assert!(!confined_to(&mixed, &g2).unwrap());
}

#[test]
fn sector_errors() {
    assert_eq!(sector_of(&PauliString::identity(3), T), Err(SymmetryError::Identity));
    assert_eq!(sector_of(&label("IIIX"), T), Err(SymmetryError::SupportOutside));
    assert_eq!(sector_of(&label("XXX"), [0, 0, 1]), Err(SymmetryError::RepeatedSite(0)));
    assert_eq!(class_strings(5, T, 3), Err(SymmetryError::BadClass(5)));
    let wide = PauliSum::from_labels(&[("IIIZ", 1.0)]).unwrap();
    assert_eq!(classify(&wide, T), Err(SymmetryError::SupportOutside));
}

#[test]
fn sectors_follow_site_order() {
    let sites = [3, 0, 2];
    let g = class_strings(3, sites, 4).unwrap();
    assert_eq!(g[0], PauliString::from_ops(4, &[(3, Pauli::X), (0, Pauli::Y), (2, Pauli::Y)]).unwrap());
    for p in g {
        assert_eq!(sector_of(&p, sites).unwrap(), SectorLabel::G(3));
    }
    let c = torus_strings(sites, 4).unwrap();
    assert_eq!(sector_of(&c[2], sites).unwrap(), SectorLabel::C);
}

#[test]
fn span_rank_examples() {
    let x = PauliSum::from_labels(&[("XI", 1.0)]).unwrap();
    let z = PauliSum::from_labels(&[("IZ", 1.0)]).unwrap();
    let mix = PauliSum::from_labels(&[("XI", 2.0), ("IZ", -3.0)]).unwrap();
    assert_eq!(span_rank(&[x.clone(), z.clone(), mix]), 2);
    assert_eq!(span_rank(&[]), 0);
    let jx = PauliSum::from_string(label("XI"), Symbol::J).unwrap();
    assert_eq!(span_rank(&[x, jx]), 2);
    assert_eq!(span_rank(&[PauliSum::zero(2), z]), 1);
}

fn triple_sum() -> impl Strategy<Value = PauliSum> {
    prop::collection::vec((1u64..64, -4i32..5), 0..20).prop_map(|terms| {
        let mut h = PauliSum::zero(3);
        for (k, v) in terms {
            let p = PauliString::new(3, k & 7, k >> 3, 0).unwrap();
            h.add_term(p, &(v as f64).into()).unwrap();
        }
        h
    })
}

proptest! {
    #[test]
    fn decomposition_reassembles(h in triple_sum()) {
        let parts = decompose_by_class(&h, T).unwrap();
        let mut back = PauliSum::zero(3);
        for (l, part) in parts.iter().enumerate() {
            back.add_sum(part).unwrap();
            let g = class_strings(l as u8 + 1, T, 3).unwrap();
            for (p, _) in part.iter() {
                let s = sector_of(p, T).unwrap();
                prop_assert!(g.contains(p) || g.iter().all(|q| q.commutes(p).unwrap()), "{:?}", s);
            }
        }
        prop_assert_eq!(back, h);
    }
}
