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

use proptest::prelude::*;
use su2trotter::linalg::{self, c, CMatrix, I};
use su2trotter::pauli::*;

/// Kronecker-product oracle, independent of `to_dense`.
fn oracle(p: &PauliString) -> CMatrix {
    let one = |m: [[f64; 4]; 2]| CMatrix::from_fn(2, 2, |r, k| c(m[r][2 * k], m[r][2 * k + 1]));
    let mut out = linalg::identity(1);
    for site in (0..p.n_sites()).rev() {
        let m = match p.pauli_at(site) {
            Pauli::I => one([[1., 0., 0., 0.], [0., 0., 1., 0.]]),
            Pauli::X => one([[0., 0., 1., 0.], [1., 0., 0., 0.]]),
            Pauli::Y => one([[0., 0., 0., -1.], [0., 1., 0., 0.]]),
            Pauli::Z => one([[1., 0., 0., 0.], [0., 0., -1., 0.]]),
        };
        out = linalg::kron(&out, &m);
    }
    out * I.powu(p.phase_exp() as u32)
}

fn three_site_strings() -> Vec<PauliString> {
    (0..64u64).map(|k| PauliString::new(3, k & 7, k >> 3, 0).unwrap()).collect()
}

fn label(s: &str) -> PauliString {
    PauliString::from_label(s).unwrap()
}

fn heis3() -> PauliSum {
    let mut h = PauliSum::zero(3);
    for (a, b) in [(0, 1), (1, 2), (2, 0)] {
        h.add_sum(&heisenberg_pair(3, a, b, &1.0.into()).unwrap()).unwrap();
    }
    h
}

#[test]
fn single_site_products() {
    let xz = label("X").multiply(&label("Z")).unwrap();
    assert_eq!((xz.label(), xz.phase_exp()), ("Y".to_string(), 3));
    for p in three_site_strings() {
        assert_eq!(PauliString::identity(3).multiply(&p).unwrap(), p);
        let sq = p.multiply(&p).unwrap();
        assert!(sq.is_identity() && sq.phase_exp() == 0);
    }
}

#[test]
fn product_against_dense() {
    let r = label("XXI").multiply(&label("IYY")).unwrap();
    assert_eq!((r.label(), r.phase_exp()), ("XZY".to_string(), 1));
    let strings = three_site_strings();
    for a in &strings {
        for b in &strings {
            let ab = a.multiply(b).unwrap();
            assert_eq!(linalg::max_abs_diff(&oracle(&ab), &(oracle(a) * oracle(b))), 0.0);
        }
    }
}

#[test]
fn commutation() {
    assert!(!label("XXX").commutes(&label("ZZZ")).unwrap());
    assert!(!label("X").commutes(&label("Y")).unwrap());
    assert!(label("ZZI").commutes(&label("XXX")).unwrap());
    assert_eq!(label("XX").commutes(&label("XXX")), Err(PauliError::SiteMismatch(2, 3)));
}

#[test]
fn commutator_against_dense_exhaustive() {
    let u = Couplings::unit();
    let strings = three_site_strings();
    for a in &strings {
        for b in &strings {
            let sa = PauliSum::from_string(*a, 1.0).unwrap();
            let sb = PauliSum::from_string(*b, 1.0).unwrap();
            let got = PauliSum::commutator(&sa, &sb).unwrap();
            let (da, db) = (oracle(a), oracle(b));
            let want = (&da * &db - &db * &da) * c(0.0, -0.5);
            assert_eq!(linalg::max_abs_diff(&got.to_dense(&u).unwrap(), &want), 0.0);
            assert_eq!(a.commutes(b).unwrap(), got.is_empty());
        }
    }
}

#[test]
fn commutator_examples() {
    let x = PauliSum::from_labels(&[("X", 1.0)]).unwrap();
    let z = PauliSum::from_labels(&[("Z", 1.0)]).unwrap();
    assert_eq!(PauliSum::commutator(&x, &z).unwrap(), PauliSum::from_labels(&[("Y", -1.0)]).unwrap());
    assert!(PauliSum::commutator(&heis3(), &chirality(3, 0, 1, 2, &1.0.into()).unwrap()).unwrap().is_empty());
    let y = PauliSum::zero(2);
    assert_eq!(PauliSum::commutator(&x, &y), Err(PauliError::SiteMismatch(1, 2)));
}

#[test]
fn dense_examples() {
    let z = PauliSum::from_labels(&[("Z", 1.0)]).unwrap().to_dense(&Couplings::new()).unwrap();
    assert_eq!(z, CMatrix::from_fn(2, 2, |r, k| if r == k { c(1.0 - 2.0 * r as f64, 0.0) } else { c(0.0, 0.0) }));
    let xx = PauliSum::from_string(label("XX"), Symbol::J).unwrap();
    let d = xx.to_dense(&Couplings::new().with(Symbol::J, 2.0)).unwrap();
    assert_eq!(d, oracle(&label("XX")) * c(2.0, 0.0));
    assert_eq!(xx.to_dense(&Couplings::new()), Err(PauliError::Unbound("J")));
    let big = PauliSum::zero(13);
    assert_eq!(big.to_dense(&Couplings::new()), Err(PauliError::TooManySites(13)));
    let eig = heis3().to_dense(&Couplings::unit()).unwrap().symmetric_eigen().eigenvalues;
    let mut ev: Vec<f64> = eig.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    for (k, v) in ev.iter().enumerate() {
        let want = if k < 4 { -3.0 } else { 3.0 };
        assert!((v - want).abs() < 1e-12, "{:?}", ev);
    }
}

#[test]
fn construction_errors() {
    assert_eq!(PauliString::new(0, 0, 0, 0), Err(PauliError::SiteCount(0)));
    assert_eq!(PauliString::new(2, 4, 0, 0), Err(PauliError::MaskOutOfRange { n_sites: 2 }));
    assert_eq!(PauliString::from_ops(2, &[(2, Pauli::X)]), Err(PauliError::SiteOutOfRange { site: 2, n_sites: 2 }));
    assert_eq!(PauliString::from_ops(2, &[(1, Pauli::X), (1, Pauli::Z)]), Err(PauliError::RepeatedSite(1)));
    assert_eq!(PauliString::from_label("XA"), Err(PauliError::BadChar('A')));
    let mut s = PauliSum::zero(1);
    assert_eq!(s.add_term(label("X").with_phase(1), &1.0.into()), Err(PauliError::NonHermitian));
}

#[test]
fn signed_strings_fold_into_coefficients() {
    let mut s = PauliSum::zero(2);
    s.add_term(label("XY").with_phase(2), &2.0.into()).unwrap();
    assert_eq!(s.coefficient(&label("XY")), Coefficient::constant(-2.0));
    s.add_term(label("XY"), &2.0.into()).unwrap();
    assert!(s.is_empty());
}

#[test]
fn symbolic_coefficients() {
    let j = Coefficient::symbol(Symbol::J);
    let k = Coefficient::symbol(Symbol::K);
    let jk = &j * &k;
    assert_eq!(jk.max_degree(), 2);
    assert_eq!((&(&jk + &j) - &j), jk);
    let cp = Couplings::new().with(Symbol::J, 0.5).with(Symbol::K, 0.25);
    assert_eq!(jk.evaluate(&cp).unwrap(), 0.125);
    let a = heisenberg_pair(3, 0, 1, &j).unwrap();
    let b = heisenberg_pair(3, 1, 2, &k).unwrap();
    let comm = PauliSum::commutator(&a, &b).unwrap();
    for (_, coef) in comm.iter() {
        assert!(coef.terms().all(|(m, _)| m.exponent(Symbol::J) == 1 && m.exponent(Symbol::K) == 1));
    }
}

#[test]
fn text_round_trip() {
    let mut h = heis3().scale_by(&Coefficient::symbol(Symbol::J));
    h.add_sum(&chirality(3, 0, 1, 2, &Coefficient::symbol(Symbol::K).scale(0.5)).unwrap()).unwrap();
    h.add_term(label("ZII"), &(-0.25).into()).unwrap();
    let text = h.to_string();
    assert!(text.lines().any(|l| l == "+1.0*J^1 XXI" || l == "+1.0*J XXI"), "{}", text);
    let back: PauliSum = text.parse().unwrap();
    assert_eq!(back, h);
    let err = "1 XX\n\n2 XQ\n".parse::<PauliSum>().unwrap_err();
    assert!(matches!(err, PauliError::Parse { line: 3, .. }), "{:?}", err);
    assert!(matches!("1 XX\n1 XXX\n".parse::<PauliSum>(), Err(PauliError::Parse { line: 2, .. })));
    assert!(matches!("# nothing\n".parse::<PauliSum>(), Err(PauliError::Parse { .. })));
}

#[test]
fn relabel_and_restrict() {
    let h = heisenberg_pair(2, 0, 1, &1.0.into()).unwrap();
    let moved = h.relabel(&[3, 1], 4).unwrap();
    assert_eq!(moved, heisenberg_pair(4, 1, 3, &1.0.into()).unwrap());
    assert_eq!(moved.support(), 0b1010);
    let mut g = moved.clone();
    g.add_term(PauliString::single(4, 0, Pauli::Z).unwrap(), &1.0.into()).unwrap();
    assert_eq!(g.restricted_to(0b1010), moved);
}

fn string_strategy(n: usize) -> impl Strategy<Value = PauliString> {
    (0..1u64 << n, 0..1u64 << n, 0u8..4).prop_map(move |(x, z, ph)| PauliString::new(n, x, z, ph).unwrap())
}

proptest! {
    #[test]
    fn multiply_is_associative(a in string_strategy(6), b in string_strategy(6), d in string_strategy(6)) {
        let left = a.multiply(&b).unwrap().multiply(&d).unwrap();
        let right = a.multiply(&b.multiply(&d).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn commutator_is_antisymmetric(terms_a in prop::collection::vec((string_strategy(4), -3i32..4), 1..6),
                                   terms_b in prop::collection::vec((string_strategy(4), -3i32..4), 1..6)) {
        let build = |terms: &[(PauliString, i32)]| {
            let mut s = PauliSum::zero(4);
            for (p, v) in terms {
                s.add_term(p.unsigned(), &(*v as f64).into()).unwrap();
            }
            s
        };
        let (a, b) = (build(&terms_a), build(&terms_b));
        let ab = PauliSum::commutator(&a, &b).unwrap();
        let ba = PauliSum::commutator(&b, &a).unwrap();
        prop_assert_eq!(ab, -&ba);
    }
}
