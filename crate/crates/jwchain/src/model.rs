//! Sector-restricted Hamiltonian matrices for open chains.
//!
//! Two families are built over the same [`SectorBasis`]:
//!
//! * the spin-1/2 XXZ chain
//!   H_s = Σ_j [ J_j (S_j⁺ S_{j+1}⁻ + S_j⁻ S_{j+1}⁺) + J_jᶻ S_jᶻ S_{j+1}ᶻ ],
//! * its Jordan-Wigner counterpart, a tight-binding chain of spinless
//!   fermions
//!   H_f = Σ_j [ J_jᶻ (n_j − ½)(n_{j+1} − ½) + J_j (a_j† a_{j+1} + h.c.) ].
//!
//! With kets ordered as ascending products of creation operators, the
//! nearest-neighbor hop crosses an empty Jordan-Wigner string, so the two
//! builders produce the same matrix entry for entry. They are nevertheless
//! implemented independently — the fermionic builder tracks anticommutation
//! signs explicitly — so that the coincidence is checked rather than
//! assumed.
//!
//! Conventions: S± = Sˣ ± iSʸ, so S⁺|↓⟩ = |↑⟩ with unit amplitude and a
//! transverse bond contributes exactly J_j off the diagonal. All couplings
//! are real, making every matrix real symmetric.

use nalgebra::DMatrix;

use crate::basis::{OccupationState, SectorBasis};
use crate::error::{Error, Result};

/// Per-bond couplings of an open chain: `j_xy[b]` and `j_z[b]` act on the
/// bond between sites b+1 and b+2. An XY chain is the special case
/// j_z = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSet {
    j_xy: Vec<f64>,
    j_z: Vec<f64>,
}

impl CouplingSet {
    pub fn new(j_xy: Vec<f64>, j_z: Vec<f64>) -> Result<Self> {
        if j_xy.len() != j_z.len() {
            return Err(Error::domain(format!(
                "coupling lists differ in length: {} transverse vs {} Ising",
                j_xy.len(),
                j_z.len()
            )));
        }
        if j_xy.is_empty() {
            return Err(Error::domain("a chain needs at least one bond"));
        }
        if j_xy.iter().chain(j_z.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(CouplingSet { j_xy, j_z })
    }

    /// Transverse couplings only (j_z = 0).
    pub fn xy_only(j_xy: Vec<f64>) -> Result<Self> {
        let zeros = vec![0.0; j_xy.len()];
        CouplingSet::new(j_xy, zeros)
    }

    /// Uniform couplings J, Jᶻ on every bond of an n-site chain.
    pub fn uniform(n_sites: usize, j: f64, j_z: f64) -> Result<Self> {
        if n_sites < 2 {
            return Err(Error::domain("a chain needs at least two sites"));
        }
        CouplingSet::new(vec![j; n_sites - 1], vec![j_z; n_sites - 1])
    }

    /// Same transverse couplings, Ising couplings scaled to
    /// j_z = ratio * j_xy. Used by anisotropy sweeps.
    pub fn with_anisotropy(&self, ratio: f64) -> CouplingSet {
        CouplingSet {
            j_xy: self.j_xy.clone(),
            j_z: self.j_xy.iter().map(|j| ratio * j).collect(),
        }
    }

    pub fn bonds(&self) -> usize {
        self.j_xy.len()
    }

    pub fn n_sites(&self) -> usize {
        self.j_xy.len() + 1
    }

    pub fn j_xy(&self) -> &[f64] {
        &self.j_xy
    }

    pub fn j_z(&self) -> &[f64] {
        &self.j_z
    }
}

/// Dense real symmetric Hamiltonian block on one sector basis, rows and
/// columns in basis order.
#[derive(Debug, Clone)]
pub struct SectorMatrix {
    basis: SectorBasis,
    mat: DMatrix<f64>,
}

impl SectorMatrix {
    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.mat[(row, col)]
    }

    #[cfg(test)]
    pub(crate) fn matrix_mut(&mut self) -> &mut DMatrix<f64> {
        &mut self.mat
    }
}

fn check_lengths(couplings: &CouplingSet, basis: &SectorBasis) -> Result<()> {
    let n = basis.sector().n();
    if couplings.bonds() != n - 1 {
        return Err(Error::domain(format!(
            "{} bonds supplied for a {}-site chain (need {})",
            couplings.bonds(),
            n,
            n - 1
        )));
    }
    Ok(())
}

/// XXZ spin chain block. Off-diagonal J_j between configurations that
/// differ by swapping an antiparallel nearest-neighbor pair; diagonal
/// Σ_j ±J_jᶻ/4 with + on aligned bonds.
pub fn build_xxz_spin(couplings: &CouplingSet, basis: &SectorBasis) -> Result<SectorMatrix> {
    check_lengths(couplings, basis)?;
    let n = basis.sector().n();
    let dim = basis.dimension();
    let mut mat = DMatrix::zeros(dim, dim);
    for (col, &state) in basis.states().iter().enumerate() {
        let mut diag = 0.0;
        for bond in 1..n {
            let up_l = state.is_up(bond);
            let up_r = state.is_up(bond + 1);
            diag += couplings.j_z[bond - 1] * if up_l == up_r { 0.25 } else { -0.25 };
            if up_l != up_r {
                let flipped = state.toggled(bond).toggled(bond + 1);
                let row = basis
                    .index_of(flipped)
                    .expect("bond flip preserves the sector");
                mat[(row, col)] += couplings.j_xy[bond - 1];
            }
        }
        mat[(col, col)] = diag;
    }
    Ok(SectorMatrix {
        basis: basis.clone(),
        mat,
    })
}

/// Annihilate a particle at `site`, returning the Jordan-Wigner sign
/// (-1)^(particles below `site`) and the new configuration.
fn annihilate(state: OccupationState, site: usize) -> (f64, OccupationState) {
    debug_assert!(state.is_up(site));
    let below = (state.bits() & ((1u32 << (site - 1)) - 1)).count_ones();
    let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
    (sign, state.toggled(site))
}

/// Create a particle at `site`; same sign convention as [`annihilate`].
fn create(state: OccupationState, site: usize) -> (f64, OccupationState) {
    debug_assert!(!state.is_up(site));
    let below = (state.bits() & ((1u32 << (site - 1)) - 1)).count_ones();
    let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
    (sign, state.toggled(site))
}

/// Tight-binding fermion block on the same ordered basis. Hopping signs
/// are computed from the fermionic operator algebra; for nearest-neighbor
/// bonds they always come out +1, reproducing the spin block exactly.
pub fn build_tb_fermion(couplings: &CouplingSet, basis: &SectorBasis) -> Result<SectorMatrix> {
    check_lengths(couplings, basis)?;
    let n = basis.sector().n();
    let dim = basis.dimension();
    let mut mat = DMatrix::zeros(dim, dim);
    for (col, &state) in basis.states().iter().enumerate() {
        let mut diag = 0.0;
        for bond in 1..n {
            let occ_l = state.is_up(bond);
            let occ_r = state.is_up(bond + 1);
            let nl = occ_l as u8 as f64;
            let nr = occ_r as u8 as f64;
            diag += couplings.j_z[bond - 1] * ((nl - 0.5) * (nr - 0.5));
            if occ_l != occ_r {
                let (from, to) = if occ_r { (bond + 1, bond) } else { (bond, bond + 1) };
                let (s1, removed) = annihilate(state, from);
                let (s2, hopped) = create(removed, to);
                let row = basis
                    .index_of(hopped)
                    .expect("hop preserves particle number");
                mat[(row, col)] += s1 * s2 * couplings.j_xy[bond - 1];
            }
        }
        mat[(col, col)] = diag;
    }
    Ok(SectorMatrix {
        basis: basis.clone(),
        mat,
    })
}

/// XY spin chain block: the XXZ chain with j_z = 0.
pub fn build_xy_spin(j_xy: &[f64], basis: &SectorBasis) -> Result<SectorMatrix> {
    let couplings = CouplingSet::xy_only(j_xy.to_vec())?;
    build_xxz_spin(&couplings, basis)
}
