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
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use super::coefficient::{format_real, Coefficient, Couplings, Monomial, Symbol};
use super::string::{Pauli, PauliString};
use super::PauliError;
use crate::linalg::CMatrix;

/// Largest register that `to_dense` will materialise.
pub const MAX_DENSE_SITES: usize = 12;

/// Hermitian operator `Σ c_P P` with polynomial coefficients.
///
/// Keys are stored with phase 0; the sign of a Hermitian input string is
/// folded into its coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<PauliString, Coefficient>,
}

impl PauliSum {
    pub fn zero(n_sites: usize) -> Self {
        PauliSum {
            n: n_sites,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_string(p: PauliString, c: impl Into<Coefficient>) -> Result<Self, PauliError> {
        let mut s = PauliSum::zero(p.n_sites());
        s.add_term(p, &c.into())?;
        Ok(s)
    }

    /// Builds a sum from `(label, coefficient)` pairs, e.g. `("XXI", 1.0)`.
    pub fn from_labels<C: Into<Coefficient> + Clone>(terms: &[(&str, C)]) -> Result<Self, PauliError> {
        let n = terms.first().map(|t| t.0.len()).ok_or(PauliError::SiteCount(0))?;
        let mut s = PauliSum::zero(n);
        for (label, c) in terms {
            s.add_term(PauliString::from_label(label)?, &c.clone().into())?;
        }
        Ok(s)
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &PauliString) -> Coefficient {
        match p.sign() {
            Some(s) => self.terms.get(&p.unsigned()).map(|c| c.scale(s)).unwrap_or_default(),
            None => Coefficient::zero(),
        }
    }

    pub fn add_term(&mut self, p: PauliString, c: &Coefficient) -> Result<(), PauliError> {
        if p.n_sites() != self.n {
            return Err(PauliError::SiteMismatch(self.n, p.n_sites()));
        }
        let sign = p.sign().ok_or(PauliError::NonHermitian)?;
        if c.is_zero() {
            return Ok(());
        }
        let key = p.unsigned();
        let slot = self.terms.entry(key).or_default();
        *slot += &c.scale(sign);
        if slot.is_zero() {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn add_sum(&mut self, other: &PauliSum) -> Result<(), PauliError> {
        if other.n != self.n {
            return Err(PauliError::SiteMismatch(self.n, other.n));
        }
        for (p, c) in &other.terms {
            self.add_term(*p, c)?;
        }
        Ok(())
    }

    pub fn scale(&self, v: f64) -> PauliSum {
        self.scale_by(&Coefficient::constant(v))
    }

    pub fn scale_by(&self, c: &Coefficient) -> PauliSum {
        let mut out = PauliSum::zero(self.n);
        for (p, k) in &self.terms {
            let v = k * c;
            if !v.is_zero() {
                out.terms.insert(*p, v);
            }
        }
        out
    }

    /// Bitmask of sites touched by any term.
    pub fn support(&self) -> u64 {
        self.terms.keys().fold(0, |acc, p| acc | p.support())
    }

    /// Normalised Lie bracket `[a, b] / (2i)`.
    pub fn commutator(a: &PauliSum, b: &PauliSum) -> Result<PauliSum, PauliError> {
        if a.n != b.n {
            return Err(PauliError::SiteMismatch(a.n, b.n));
        }
        let mut out = PauliSum::zero(a.n);
        for (p, cp) in &a.terms {
            for (q, cq) in &b.terms {
                if p.commutes_unchecked(q) {
                    continue;
                }
                let r = p.multiply(q)?;
                // pq = i^k r with k odd, and [p,q]/(2i) = pq/i.
                let sign = if (r.phase_exp() + 3) % 4 == 0 { 1.0 } else { -1.0 };
                let c = (cp * cq).scale(sign);
                out.add_term(r.unsigned(), &c)?;
            }
        }
        Ok(out)
    }

    pub fn commutes_with(&self, other: &PauliSum) -> Result<bool, PauliError> {
        Ok(PauliSum::commutator(self, other)?.is_empty())
    }

    /// Numerical terms with all symbols bound; zero terms are dropped.
    pub fn evaluate(&self, c: &Couplings) -> Result<Vec<(PauliString, f64)>, PauliError> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (p, k) in &self.terms {
            let v = k.evaluate(c)?;
            if v != 0.0 {
                out.push((*p, v));
            }
        }
        Ok(out)
    }

    /// Substitutes the couplings, leaving constant coefficients.
    pub fn bind(&self, c: &Couplings) -> Result<PauliSum, PauliError> {
        let mut out = PauliSum::zero(self.n);
        for (p, v) in self.evaluate(c)? {
            out.terms.insert(p, Coefficient::constant(v));
        }
        Ok(out)
    }

    pub fn to_dense(&self, c: &Couplings) -> Result<CMatrix, PauliError> {
        if self.n > MAX_DENSE_SITES {
            return Err(PauliError::TooManySites(self.n));
        }
        let dim = 1usize << self.n;
        let mut m = CMatrix::zeros(dim, dim);
        let powers = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ];
        for (p, v) in self.evaluate(c)? {
            let x = p.x_mask() as usize;
            for b in 0..dim {
                let k = p.action_phase(b as u64);
                m[(b ^ x, b)] += powers[k as usize] * v;
            }
        }
        Ok(m)
    }

    /// Moves site `k` to `map[k]` in a register of `n_sites`.
    pub fn relabel(&self, map: &[usize], n_sites: usize) -> Result<PauliSum, PauliError> {
        let mut out = PauliSum::zero(n_sites);
        for (p, c) in &self.terms {
            out.add_term(p.relabel(map, n_sites)?, c)?;
        }
        Ok(out)
    }

    /// Terms whose support lies inside `sites_mask`.
    pub fn restricted_to(&self, sites_mask: u64) -> PauliSum {
        let mut out = PauliSum::zero(self.n);
        for (p, c) in &self.terms {
            if p.support() & !sites_mask == 0 {
                out.terms.insert(*p, c.clone());
            }
        }
        out
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms
            .values()
            .flat_map(|c| c.terms().map(|(_, v)| v.abs()))
            .fold(0.0, f64::max)
    }
}

impl Add for &PauliSum {
    type Output = PauliSum;
    fn add(self, rhs: &PauliSum) -> PauliSum {
        let mut out = self.clone();
        out.add_sum(rhs).expect("site counts must agree");
        out
    }
}

impl Sub for &PauliSum {
    type Output = PauliSum;
    fn sub(self, rhs: &PauliSum) -> PauliSum {
        self + &rhs.scale(-1.0)
    }
}

impl Neg for &PauliSum {
    type Output = PauliSum;
    fn neg(self) -> PauliSum {
        self.scale(-1.0)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, c) in &self.terms {
            let label = p.label();
            for (m, v) in c.terms() {
                if *m == Monomial::ONE {
                    writeln!(f, "{} {}", format_real(*v), label)?;
                } else {
                    writeln!(f, "{}*{} {}", format_real(*v), m, label)?;
                }
            }
        }
        Ok(())
    }
}

fn parse_coefficient(text: &str) -> Result<Coefficient, String> {
    let mut parts = text.split('*');
    let head = parts.next().ok_or("empty coefficient")?;
    let value: f64 = head.parse().map_err(|_| format!("bad number `{}`", head))?;
    let mut m = Monomial::ONE;
    for factor in parts {
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (n, e.parse::<u8>().map_err(|_| format!("bad exponent in `{}`", factor))?),
            None => (factor, 1),
        };
        let s = Symbol::parse(name).ok_or_else(|| format!("unknown symbol `{}`", name))?;
        m.0[s.index()] += exp;
    }
    Ok(Coefficient::monomial(m, value))
}

impl FromStr for PauliSum {
    type Err = PauliError;

    /// Reads one term per line, `<coefficient> <label>`; blank lines and
    /// lines starting with `#` are skipped.
    fn from_str(s: &str) -> Result<Self, PauliError> {
        let mut out: Option<PauliSum> = None;
        for (idx, raw) in s.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| PauliError::Parse { line: idx + 1, msg };
            let (coef, label) = line.rsplit_once(char::is_whitespace).ok_or_else(|| err("expected `<coefficient> <pauli>`".into()))?;
            let c = parse_coefficient(coef.trim()).map_err(err)?;
            if let Some(bad) = label.chars().find(|ch| Pauli::from_char(*ch).is_none()) {
                return Err(err(format!("bad pauli character `{}`", bad)));
            }
            let p = PauliString::from_label(label).map_err(|e| err(e.to_string()))?;
            let sum = out.get_or_insert_with(|| PauliSum::zero(p.n_sites()));
            if sum.n_sites() != p.n_sites() {
                return Err(err(format!("expected {} sites, found {}", sum.n_sites(), p.n_sites())));
            }
            sum.add_term(p, &c).map_err(|e| err(e.to_string()))?;
        }
        out.ok_or(PauliError::Parse {
            line: 0,
            msg: "no terms".into(),
        })
    }
}
