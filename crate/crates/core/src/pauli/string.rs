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

use std::cmp::Ordering;
use std::fmt;

use super::PauliError;

/// Maximum number of sites a `PauliString` can address.
pub const MAX_SITES: usize = 64;

/// Single-site Pauli operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' | 'i' | '_' => Some(Pauli::I),
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// An n-site Pauli operator `i^phase * P_0 ⊗ P_1 ⊗ ...` in symplectic form.
///
/// Bit `i` of `x` is set when site `i` carries X or Y, bit `i` of `z` when it
/// carries Z or Y. A site with both bits set is the Hermitian Y, so the string
/// is Hermitian exactly when the phase is 0 or 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: u8,
}

fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliString {
    pub fn new(n_sites: usize, x_mask: u64, z_mask: u64, phase_exp: u8) -> Result<Self, PauliError> {
        if n_sites == 0 || n_sites > MAX_SITES {
            return Err(PauliError::SiteCount(n_sites));
        }
        if (x_mask | z_mask) & !mask(n_sites) != 0 {
            return Err(PauliError::MaskOutOfRange { n_sites });
        }
        Ok(PauliString {
            n: n_sites,
            x: x_mask,
            z: z_mask,
            phase: phase_exp % 4,
        })
    }

    pub fn identity(n_sites: usize) -> Self {
        PauliString::new(n_sites, 0, 0, 0).expect("valid site count")
    }

    /// Hermitian string with the given single-site factors; unlisted sites are I.
    pub fn from_ops(n_sites: usize, ops: &[(usize, Pauli)]) -> Result<Self, PauliError> {
        let mut x = 0u64;
        let mut z = 0u64;
        for &(site, p) in ops {
            if site >= n_sites {
                return Err(PauliError::SiteOutOfRange { site, n_sites });
            }
            let bit = 1u64 << site;
            if (x | z) & bit != 0 {
                return Err(PauliError::RepeatedSite(site));
            }
            let (bx, bz) = p.bits();
            if bx {
                x |= bit;
            }
            if bz {
                z |= bit;
            }
        }
        PauliString::new(n_sites, x, z, 0)
    }

    pub fn single(n_sites: usize, site: usize, p: Pauli) -> Result<Self, PauliError> {
        PauliString::from_ops(n_sites, &[(site, p)])
    }

    /// Parses a label such as `XIZY`; character `k` is site `k`.
    pub fn from_label(label: &str) -> Result<Self, PauliError> {
        let chars: Vec<char> = label.chars().collect();
        let n = chars.len();
        let mut ops = Vec::new();
        for (site, c) in chars.into_iter().enumerate() {
            let p = Pauli::from_char(c).ok_or(PauliError::BadChar(c))?;
            if p != Pauli::I {
                ops.push((site, p));
            }
        }
        PauliString::from_ops(n, &ops)
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn pauli_at(&self, site: usize) -> Pauli {
        Pauli::from_bits(self.x >> site & 1 == 1, self.z >> site & 1 == 1)
    }

    /// Same operator content with phase 0.
    pub fn unsigned(&self) -> Self {
        PauliString { phase: 0, ..*self }
    }

    pub fn with_phase(&self, phase_exp: u8) -> Self {
        PauliString {
            phase: phase_exp % 4,
            ..*self
        }
    }

    /// Sign of a Hermitian string relative to its unsigned form.
    pub fn sign(&self) -> Option<f64> {
        match self.phase {
            0 => Some(1.0),
            2 => Some(-1.0),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        (0..self.n).map(|s| self.pauli_at(s).as_char()).collect()
    }

    fn check_sites(&self, other: &PauliString) -> Result<(), PauliError> {
        if self.n != other.n {
            return Err(PauliError::SiteMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// Exact product `self * other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString, PauliError> {
        self.check_sites(other)?;
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // Y = i X Z, so a Hermitian-form string equals i^{|x&z|} X^x Z^z.
        let k = self.phase as i64
            + other.phase as i64
            + (self.x & self.z).count_ones() as i64
            + (other.x & other.z).count_ones() as i64
            + 2 * (self.z & other.x).count_ones() as i64
            - (x & z).count_ones() as i64;
        Ok(PauliString {
            n: self.n,
            x,
            z,
            phase: k.rem_euclid(4) as u8,
        })
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool, PauliError> {
        self.check_sites(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    pub fn adjoint(&self) -> PauliString {
        PauliString {
            phase: (4 - self.phase) % 4,
            ..*self
        }
    }

    /// Moves site `k` of `self` to site `map[k]` of an `n_sites` string.
    pub fn relabel(&self, map: &[usize], n_sites: usize) -> Result<PauliString, PauliError> {
        let mut x = 0u64;
        let mut z = 0u64;
        for site in 0..self.n {
            let p = self.pauli_at(site);
            if p == Pauli::I {
                continue;
            }
            let to = *map.get(site).ok_or(PauliError::SiteOutOfRange { site, n_sites: map.len() })?;
            if to >= n_sites {
                return Err(PauliError::SiteOutOfRange { site: to, n_sites });
            }
            let (bx, bz) = p.bits();
            if bx {
                x |= 1 << to;
            }
            if bz {
                z |= 1 << to;
            }
        }
        PauliString::new(n_sites, x, z, self.phase)
    }

    /// Matrix element action on a computational basis index:
    /// `P |b> = i^k |b ^ x>` with the returned `k`.
    pub fn action_phase(&self, basis: u64) -> u8 {
        let k = self.phase as u32 + (self.x & self.z).count_ones() + 2 * (basis & self.z).count_ones();
        (k % 4) as u8
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.z, self.x, self.phase, self.n).cmp(&(other.z, other.x, other.phase, other.n))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{}{}", prefix, self.label())
    }
}
