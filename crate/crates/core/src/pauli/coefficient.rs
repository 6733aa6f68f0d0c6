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
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use super::PauliError;

/// Formal coupling constants appearing in model Hamiltonians.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    J,
    K,
    H,
    J1,
    J2,
}

impl Symbol {
    pub const ALL: [Symbol; 5] = [Symbol::J, Symbol::K, Symbol::H, Symbol::J1, Symbol::J2];

    pub fn index(self) -> usize {
        match self {
            Symbol::J => 0,
            Symbol::K => 1,
            Symbol::H => 2,
            Symbol::J1 => 3,
            Symbol::J2 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::J => "J",
            Symbol::K => "K",
            Symbol::H => "h",
            Symbol::J1 => "J1",
            Symbol::J2 => "J2",
        }
    }

    pub fn parse(s: &str) -> Option<Symbol> {
        match s {
            "J" => Some(Symbol::J),
            "K" => Some(Symbol::K),
            "h" | "H" => Some(Symbol::H),
            "J1" => Some(Symbol::J1),
            "J2" => Some(Symbol::J2),
            _ => None,
        }
    }
}

/// Exponent vector over the symbols, indexed by `Symbol::index`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub [u8; 5]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 5]);

    pub fn of(s: Symbol) -> Monomial {
        let mut e = [0u8; 5];
        e[s.index()] = 1;
        Monomial(e)
    }

    pub fn exponent(&self, s: Symbol) -> u8 {
        self.0[s.index()]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        let mut e = [0u8; 5];
        for (k, slot) in e.iter_mut().enumerate() {
            *slot = self.0[k] + other.0[k];
        }
        Monomial(e)
    }

    pub fn evaluate(&self, c: &Couplings) -> Result<f64, PauliError> {
        let mut v = 1.0;
        for s in Symbol::ALL {
            let e = self.exponent(s);
            if e > 0 {
                v *= c.get(s).ok_or(PauliError::Unbound(s.name()))?.powi(e as i32);
            }
        }
        Ok(v)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in Symbol::ALL {
            let e = self.exponent(s);
            if e > 0 {
                if !first {
                    f.write_str("*")?;
                }
                write!(f, "{}^{}", s.name(), e)?;
                first = false;
            }
        }
        Ok(())
    }
}

/// Numerical values bound to coupling symbols.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Couplings {
    values: [Option<f64>; 5],
}

impl Couplings {
    pub fn new() -> Self {
        Couplings::default()
    }

    /// Every symbol bound to 1.
    pub fn unit() -> Self {
        Couplings { values: [Some(1.0); 5] }
    }

    pub fn with(mut self, s: Symbol, v: f64) -> Self {
        self.values[s.index()] = Some(v);
        self
    }

    pub fn set(&mut self, s: Symbol, v: f64) {
        self.values[s.index()] = Some(v);
    }

    pub fn get(&self, s: Symbol) -> Option<f64> {
        self.values[s.index()]
    }
}

/// Real polynomial in the coupling symbols.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Coefficient {
    terms: BTreeMap<Monomial, f64>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient::default()
    }

    pub fn constant(v: f64) -> Self {
        Coefficient::monomial(Monomial::ONE, v)
    }

    pub fn symbol(s: Symbol) -> Self {
        Coefficient::monomial(Monomial::of(s), 1.0)
    }

    pub fn monomial(m: Monomial, v: f64) -> Self {
        let mut terms = BTreeMap::new();
        if v != 0.0 {
            terms.insert(m, v);
        }
        Coefficient { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &f64)> {
        self.terms.iter()
    }

    pub fn get(&self, m: &Monomial) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    pub fn add_monomial(&mut self, m: Monomial, v: f64) {
        let slot = self.terms.entry(m).or_insert(0.0);
        *slot += v;
        if *slot == 0.0 {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, v: f64) -> Coefficient {
        let mut out = Coefficient::zero();
        for (m, c) in &self.terms {
            out.add_monomial(*m, c * v);
        }
        out
    }

    pub fn evaluate(&self, c: &Couplings) -> Result<f64, PauliError> {
        let mut v = 0.0;
        for (m, k) in &self.terms {
            v += k * m.evaluate(c)?;
        }
        Ok(v)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }
}

impl AddAssign<&Coefficient> for Coefficient {
    fn add_assign(&mut self, rhs: &Coefficient) {
        for (m, v) in &rhs.terms {
            self.add_monomial(*m, *v);
        }
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        out += &rhs.scale(-1.0);
        out
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        self.scale(-1.0)
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        let mut out = Coefficient::zero();
        for (m1, v1) in &self.terms {
            for (m2, v2) in &rhs.terms {
                out.add_monomial(m1.times(m2), v1 * v2);
            }
        }
        out
    }
}

impl From<f64> for Coefficient {
    fn from(v: f64) -> Self {
        Coefficient::constant(v)
    }
}

impl From<Symbol> for Coefficient {
    fn from(s: Symbol) -> Self {
        Coefficient::symbol(s)
    }
}

/// Formats a float so that parsing it back gives the same value.
pub(crate) fn format_real(v: f64) -> String {
    let s = format!("{:?}", v.abs());
    if v.is_sign_negative() {
        format!("-{}", s)
    } else {
        format!("+{}", s)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("+0.0");
        }
        for (m, v) in &self.terms {
            f.write_str(&format_real(*v))?;
            if *m != Monomial::ONE {
                write!(f, "*{}", m)?;
            }
        }
        Ok(())
    }
}
