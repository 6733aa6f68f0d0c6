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
use su2trotter::encoder::*;
use su2trotter::linalg::{self, CMatrix};
use su2trotter::pauli::{chirality, heisenberg_pair, Couplings, Pauli, PauliString, PauliSum};
use su2trotter::symmetry::{class_strings, triple_strings, GeneratorSpace};

const T: [usize; 3] = [0, 1, 2];

fn heis3() -> PauliSum {
    let mut h = heisenberg_pair(3, 0, 1, &1.0.into()).unwrap();
    h.add_sum(&heisenberg_pair(3, 1, 2, &1.0.into()).unwrap()).unwrap();
    h.add_sum(&heisenberg_pair(3, 2, 0, &1.0.into()).unwrap()).unwrap();
    h
}

fn dense(p: &PauliString) -> CMatrix {
    PauliSum::from_string(p.unsigned(), p.sign().unwrap()).unwrap().to_dense(&Couplings::unit()).unwrap()
}

fn all_strings() -> Vec<PauliString> {
    triple_strings(T, 3).unwrap()
}

#[test]
fn cnot_spreads_x() {
    let g = CliffordGate::Cnot(0, 1);
    let x0 = PauliString::from_label("XI").unwrap();
    assert_eq!(g.conjugate(&x0).unwrap(), PauliString::from_label("XX").unwrap());
}

#[test]
fn gate_conjugation_matches_dense() {
    let gates = [
        CliffordGate::Cnot(0, 2),
        CliffordGate::Cnot(2, 1),
        CliffordGate::SqrtX(1),
        CliffordGate::SqrtY(0),
        CliffordGate::SqrtZ(2),
        CliffordGate::Swap(0, 2),
        CliffordGate::H(1),
    ];
    for g in gates {
        let c = CliffordCircuit::from_gates(3, vec![g]).unwrap();
        let u = c.to_dense().unwrap();
        for p in all_strings() {
            let want = &u * dense(&p) * u.adjoint();
            let got = dense(&c.conjugate(&p).unwrap());
            assert!(linalg::max_abs_diff(&want, &got) < 1e-12, "{} on {}", g, p);
        }
    }
}

#[test]
fn u2_sends_xxx_to_wire() {
    let u = canonical_encoder(2, T, 3).unwrap();
    let img = u.conjugate(&PauliString::from_label("XXX").unwrap()).unwrap();
    assert_eq!(img.support(), 1);
    assert_eq!(img.pauli_at(0), Pauli::X);
    assert_eq!(u.cnot_count(), 3);
}

#[test]
fn identity_encoder_is_empty() {
    assert!(canonical_encoder(1, T, 3).unwrap().is_empty());
    assert!(matches!(canonical_encoder(5, T, 3), Err(EncoderError::BadClass(5))));
}

#[test]
fn canonical_encoders_map_onto_wire_paulis() {
    let target = class_strings(1, T, 3).unwrap();
    for l in 1..=4u8 {
        let u = canonical_encoder(l, T, 3).unwrap();
        let mut seen = Vec::new();
        for g in class_strings(l, T, 3).unwrap() {
            let img = u.conjugate(&g).unwrap().unsigned();
            assert!(target.contains(&img), "class {} sends {} to {}", l, g, img);
            seen.push(img);
        }
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 3);
    }
}

#[test]
fn round_trip_is_identity() {
    for l in 1..=4u8 {
        let u = canonical_encoder(l, T, 3).unwrap();
        let back = u.then(&u.inverse());
        for p in all_strings() {
            assert_eq!(back.conjugate(&p).unwrap(), p);
        }
    }
}

#[test]
fn heisenberg_effective_operator() {
    let u = canonical_encoder(2, T, 3).unwrap();
    let split = extract_effective(&heis3(), &u, 0).unwrap();
    assert!(split.symmetry.is_empty());
    assert_eq!(split.effective_sites, vec![1, 2]);
    let want = PauliSum::from_labels(&[
        ("XI", 1.0),
        ("ZI", 1.0),
        ("IX", 1.0),
        ("IZ", 1.0),
        ("XX", 1.0),
        ("XZ", -1.0),
        ("ZX", -1.0),
        ("ZZ", 1.0),
        ("YY", 1.0),
    ])
    .unwrap();
    assert_eq!(split.effective, want);
}

#[test]
fn chirality_effective_operator() {
    let u = canonical_encoder(2, T, 3).unwrap();
    let h = chirality(3, 0, 1, 2, &1.0.into()).unwrap();
    let split = extract_effective(&h, &u, 0).unwrap();
    assert!(split.symmetry.is_empty());
    let want = PauliSum::from_labels(&[
        ("YI", -1.0),
        ("IY", 1.0),
        ("YX", 1.0),
        ("YZ", 1.0),
        ("XY", -1.0),
        ("ZY", -1.0),
    ])
    .unwrap();
    assert_eq!(split.effective, want);
}

#[test]
fn generator_lands_on_wire() {
    let u = canonical_encoder(2, T, 3).unwrap();
    let h = PauliSum::from_labels(&[("XXX", 1.0)]).unwrap();
    let split = extract_effective(&h, &u, 0).unwrap();
    assert!(split.effective.is_empty());
    assert_eq!(split.symmetry, PauliSum::from_labels(&[("X", 1.0)]).unwrap());
}

#[test]
fn split_failure_is_reported() {
    let u = canonical_encoder(2, T, 3).unwrap();
    let h = PauliSum::from_labels(&[("XII", 1.0)]).unwrap();
    assert!(matches!(extract_effective(&h, &u, 0), Err(EncoderError::SplitFailed(_))));
}

#[test]
fn propagator_factorizes() {
    let cp = Couplings::unit();
    let u = canonical_encoder(2, T, 3).unwrap();
    let mut h = heis3();
    h.add_sum(&chirality(3, 0, 1, 2, &0.1.into()).unwrap()).unwrap();
    h.add_sum(&PauliSum::from_labels(&[("XXX", 0.7), ("YYY", -0.2)]).unwrap()).unwrap();
    let split = extract_effective(&h, &u, 0).unwrap();
    let ud = u.to_dense().unwrap();
    for tau in [0.0, 0.37, 1.9, 4.4, 6.1] {
        let lhs = &ud * linalg::expm_hermitian(&h.to_dense(&cp).unwrap(), tau) * ud.adjoint();
        let g = linalg::expm_hermitian(&split.symmetry.to_dense(&cp).unwrap(), tau);
        let e = linalg::expm_hermitian(&split.effective.to_dense(&cp).unwrap(), tau);
        // effective register holds sites 1,2, the wire is site 0.
        let rhs = linalg::kron(&e, &g);
        assert!(linalg::max_abs_diff(&lhs, &rhs) < 1e-12, "tau {}", tau);
    }
}

fn agree_up_to_sign(a: &CliffordCircuit, b: &CliffordCircuit, strings: &[PauliString]) -> bool {
    strings.iter().all(|p| a.conjugate(p).unwrap().unsigned() == b.conjugate(p).unwrap().unsigned())
}

#[test]
fn synthesized_class2_encoder_matches_canonical_on_generators() {
    let g = GeneratorSpace::from_strings(class_strings(2, T, 3).unwrap(), su2trotter::symmetry::ClassLabel::Canonical(2)).unwrap();
    let s = synthesize_encoder(&g, 0).unwrap();
    let u = canonical_encoder(2, T, 3).unwrap();
    assert!(agree_up_to_sign(&s, &u, &class_strings(2, T, 3).unwrap()));
    // The commutant must leave the wire in both cases.
    for p in su2trotter::symmetry::commutant_strings(2, T, 3).unwrap() {
        assert_eq!(s.conjugate(&p).unwrap().support() & 1, 0, "{}", p);
    }
}

#[test]
fn synthesized_ising_space_encoder() {
    let g = GeneratorSpace::from_labels(["XXX", "XXY", "IIZ"]).unwrap();
    let s = synthesize_encoder(&g, 2).unwrap();
    assert_eq!(s.cnot_count(), 2);
    let imgs: Vec<_> = g.strings().unwrap().iter().map(|p| s.conjugate(p).unwrap()).collect();
    for (img, want) in imgs.iter().zip([Pauli::X, Pauli::Y, Pauli::Z]) {
        assert_eq!(img.support(), 1 << 2);
        assert_eq!(img.pauli_at(2), want);
    }
}

#[test]
fn synthesized_trivial_class_is_empty() {
    let g = GeneratorSpace::from_labels(["XII", "YII", "ZII"]).unwrap();
    assert!(synthesize_encoder(&g, 0).unwrap().is_empty());
}

#[test]
fn synthesis_rejects_torus() {
    let g = GeneratorSpace::from_labels(["IXX", "IYY", "IZZ"]).unwrap();
    assert!(matches!(synthesize_encoder(&g, 0), Err(EncoderError::NotSu2)));
}

#[test]
fn text_round_trip() {
    let u = canonical_encoder(3, [2, 0, 1], 3).unwrap();
    let text = u.to_string();
    assert!(text.starts_with("SQRT_Z 2\nSQRT_Y 2\nCNOT 0 1\n"));
    assert_eq!(CliffordCircuit::parse(&text, 3).unwrap(), u);
    assert!(matches!(CliffordCircuit::parse("CNOT 0\n", 3), Err(EncoderError::Parse { line: 1, .. })));
}

fn gate_strategy() -> impl Strategy<Value = CliffordGate> {
    (0..6u8, 0..4usize, 1..4usize).prop_map(|(k, a, d)| {
        let b = (a + d) % 4;
        match k {
            0 => CliffordGate::Cnot(a, b),
            1 => CliffordGate::SqrtX(a),
            2 => CliffordGate::SqrtY(a),
            3 => CliffordGate::SqrtZ(a),
            4 => CliffordGate::Swap(a, b),
            _ => CliffordGate::H(a),
        }
    })
}

fn string_strategy() -> impl Strategy<Value = PauliString> {
    (1u64..256).prop_map(|bits| PauliString::new(4, bits & 15, bits >> 4, 0).unwrap())
}

proptest! {
    #[test]
    fn conjugation_is_homomorphic(a in prop::collection::vec(gate_strategy(), 0..8),
                                  b in prop::collection::vec(gate_strategy(), 0..8),
                                  p in string_strategy()) {
        let ca = CliffordCircuit::from_gates(4, a).unwrap();
        let cb = CliffordCircuit::from_gates(4, b).unwrap();
        let joint = cb.then(&ca);
        prop_assert_eq!(joint.conjugate(&p).unwrap(), ca.conjugate(&cb.conjugate(&p).unwrap()).unwrap());
    }

    #[test]
    fn inverse_undoes(a in prop::collection::vec(gate_strategy(), 0..10), p in string_strategy()) {
        let c = CliffordCircuit::from_gates(4, a).unwrap();
        prop_assert_eq!(c.inverse().conjugate(&c.conjugate(&p).unwrap()).unwrap(), p);
    }

    #[test]
    fn conjugation_preserves_commutation(a in prop::collection::vec(gate_strategy(), 0..10),
                                         p in string_strategy(), q in string_strategy()) {
        let c = CliffordCircuit::from_gates(4, a).unwrap();
        let (pp, qq) = (c.conjugate(&p).unwrap(), c.conjugate(&q).unwrap());
        prop_assert_eq!(p.commutes(&q).unwrap(), pp.commutes(&qq).unwrap());
    }
}
