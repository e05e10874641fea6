//! Bit-encoded occupation basis of a fixed symmetry sector.
//!
//! A chain of `n` sites is encoded in the low `n` bits of a `u32`: bit
//! `l - 1` carries site `l`, a set bit meaning spin-up in the spin picture
//! and one fermion in the fermion picture. Both pictures share the same
//! configurations, so a single basis serves the XXZ chain and its
//! Jordan-Wigner counterpart.
//!
//! Total S^z (equivalently total particle number) is conserved by every
//! Hamiltonian in this crate, so states are grouped into sectors of fixed
//! up-count `n_up`. A [`SectorBasis`] enumerates one sector in ascending
//! bit-value order, which fixes the row/column convention used everywhere
//! else.

use crate::error::{Error, Result};

/// Smallest chain the crate accepts.
pub const MIN_SITES: usize = 2;
/// Largest chain the bit-encoded enumeration accepts. Dense
/// diagonalization is practical up to about 16 sites; longer chains are
/// supported for directly constructed few-particle states.
pub const MAX_SITES: usize = 24;

/// One basis configuration: bit `l - 1` holds site `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccupationState(u32);

impl OccupationState {
    pub fn new(bits: u32) -> Self {
        OccupationState(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Number of up spins / particles.
    pub fn count(self) -> u32 {
        self.0.count_ones()
    }

    /// True when site `l` (1-based) is up/occupied. No range check.
    #[inline]
    pub fn is_up(self, l: usize) -> bool {
        self.0 >> (l - 1) & 1 == 1
    }

    /// Toggle site `l` (1-based).
    #[inline]
    pub fn toggled(self, l: usize) -> Self {
        OccupationState(self.0 ^ (1 << (l - 1)))
    }

    /// Occupied sites strictly between `i` and `j`, as a count.
    #[inline]
    pub(crate) fn count_between(self, i: usize, j: usize) -> u32 {
        let mask = (1u32 << (j - 1)) - (1u32 << i);
        (self.0 & mask).count_ones()
    }
}

/// Symmetry block (n sites, n_up up spins). S^z = n_up - n/2 and the
/// fermion number equals n_up under the Jordan-Wigner identification
/// S_l^z = n_l - 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sector {
    n: usize,
    n_up: usize,
}

impl Sector {
    pub fn new(n: usize, n_up: usize) -> Result<Self> {
        if !(MIN_SITES..=MAX_SITES).contains(&n) {
            return Err(Error::Capacity {
                n,
                min: MIN_SITES,
                max: MAX_SITES,
            });
        }
        if n_up > n {
            return Err(Error::domain(format!(
                "n_up = {n_up} exceeds chain length {n}"
            )));
        }
        Ok(Sector { n, n_up })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_up(&self) -> usize {
        self.n_up
    }

    /// binomial(n, n_up)
    pub fn dimension(&self) -> usize {
        binomial(self.n, self.n_up)
    }

    /// Total magnetization S^z of every state in the sector.
    pub fn total_sz(&self) -> f64 {
        self.n_up as f64 - self.n as f64 / 2.0
    }
}

/// Ordered basis of one sector: all n-bit configurations with exactly
/// n_up set bits, ascending by bit value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    sector: Sector,
    states: Vec<OccupationState>,
}

impl SectorBasis {
    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn dimension(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[OccupationState] {
        &self.states
    }

    pub fn state(&self, idx: usize) -> OccupationState {
        self.states[idx]
    }

    /// Ordinal of a configuration in this basis, or None when the
    /// configuration lies outside the sector.
    pub fn index_of(&self, state: OccupationState) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }
}

/// Enumerate the (n, n_up) sector in ascending bit-value order.
pub fn enumerate_sector(n: usize, n_up: usize) -> Result<SectorBasis> {
    let sector = Sector::new(n, n_up)?;
    let mut states = Vec::with_capacity(sector.dimension());
    if n_up == 0 {
        states.push(OccupationState(0));
    } else {
        // Gosper's hack: next larger integer with the same popcount.
        let top = 1u32 << n;
        let mut v = (1u32 << n_up) - 1;
        while v < top {
            states.push(OccupationState(v));
            let t = v | (v - 1);
            let next = t.wrapping_add(1);
            if next == 0 {
                break;
            }
            v = next | (((!t & next) - 1) >> (v.trailing_zeros() + 1));
        }
    }
    debug_assert_eq!(states.len(), sector.dimension());
    Ok(SectorBasis { sector, states })
}

/// Occupation f(m_l) of site `l` (1-based): 1 for up, 0 for down.
pub fn site_occupation(state: OccupationState, n_sites: usize, l: usize) -> Result<u8> {
    if l == 0 || l > n_sites {
        return Err(Error::domain(format!(
            "site index {l} outside 1..={n_sites}"
        )));
    }
    Ok(state.is_up(l) as u8)
}

/// Jordan-Wigner string parity (-1)^(number of occupied sites strictly
/// between i and j). Nearest-neighbor pairs have an empty string, hence
/// parity +1.
pub fn string_parity(state: OccupationState, n_sites: usize, i: usize, j: usize) -> Result<i8> {
    if i == 0 || i >= j || j > n_sites {
        return Err(Error::domain(format!(
            "string endpoints must satisfy 1 <= i < j <= {n_sites}, got ({i}, {j})"
        )));
    }
    Ok(if state.count_between(i, j) % 2 == 0 {
        1
    } else {
        -1
    })
}

/// binomial(n, k) for the sizes this crate handles.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc as usize
}
