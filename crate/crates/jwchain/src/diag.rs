//! Dense symmetric eigensolution and ground-state extraction.
//!
//! Sector dimensions stay small at the chain lengths this crate targets,
//! so every solve is a full dense symmetric decomposition. Ground states
//! can be requested in a pinned sector or with an automatic scan over all
//! n_up blocks; near-degeneracies at the bottom of the spectrum are
//! detected against an absolute tolerance and never broken silently.

use nalgebra::{DMatrix, DVector};

use crate::basis::{Sector, SectorBasis};
use crate::error::{Error, Result};
use crate::model::{CouplingSet, SectorMatrix};

/// Absolute energy tolerance below which two levels count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Normalized real amplitude vector over one sector basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    basis: SectorBasis,
    amps: Vec<f64>,
}

impl StateVector {
    /// Wrap amplitudes over `basis`. The vector must be unit-norm within
    /// 1e-12.
    pub fn new(basis: SectorBasis, amps: Vec<f64>) -> Result<Self> {
        if amps.len() != basis.dimension() {
            return Err(Error::domain(format!(
                "{} amplitudes for a dimension-{} basis",
                amps.len(),
                basis.dimension()
            )));
        }
        if amps.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm2: f64 = amps.iter().map(|a| a * a).sum();
        if (norm2 - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "state vector not normalized: |psi|^2 = {norm2}"
            )));
        }
        Ok(StateVector { basis, amps })
    }

    /// Normalize arbitrary finite amplitudes (zero vectors rejected).
    pub fn normalized(basis: SectorBasis, mut amps: Vec<f64>) -> Result<Self> {
        if amps.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::domain("cannot normalize the zero vector"));
        }
        for a in &mut amps {
            *a /= norm;
        }
        Ok(StateVector { basis, amps })
    }

    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    pub fn amps(&self) -> &[f64] {
        &self.amps
    }

    pub fn sector(&self) -> Sector {
        self.basis.sector()
    }

    /// Amplitude on a configuration, zero when it lies outside the sector.
    pub fn amplitude(&self, state: crate::basis::OccupationState) -> f64 {
        self.basis.index_of(state).map_or(0.0, |i| self.amps[i])
    }

    /// Flip the overall sign in place.
    pub(crate) fn negate(&mut self) {
        for a in &mut self.amps {
            *a = -*a;
        }
    }
}

/// Full spectrum of one sector block: ascending eigenvalues, orthonormal
/// eigenvectors as matrix columns.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    basis: SectorBasis,
    values: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl EigenSystem {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    /// k-th eigenvector (ascending order) as a state vector.
    pub fn state(&self, k: usize) -> StateVector {
        let amps: Vec<f64> = self.vectors.column(k).iter().copied().collect();
        StateVector::normalized(self.basis.clone(), amps)
            .expect("eigenvector columns are normalized")
    }

    pub fn dimension(&self) -> usize {
        self.values.len()
    }
}

/// Dense symmetric eigendecomposition, eigenvalues ascending.
pub fn eigensystem(m: &SectorMatrix) -> Result<EigenSystem> {
    if m.matrix().iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let se = m.matrix().clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let dim = values.len();
    let mut vectors = DMatrix::zeros(dim, dim);
    for (new_col, &old_col) in order.iter().enumerate() {
        vectors.set_column(new_col, &se.eigenvectors.column(old_col));
    }
    Ok(EigenSystem {
        basis: m.basis().clone(),
        values,
        vectors,
    })
}

/// Which symmetry block to diagonalize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorChoice {
    /// Single block with this many up spins / particles.
    Fixed(usize),
    /// Scan every block n_up = 0..=n and take the global minimum.
    Auto,
}

/// Lowest eigenpair plus degeneracy diagnostics.
#[derive(Debug, Clone)]
pub struct GroundStateReport {
    pub energy: f64,
    pub state: StateVector,
    pub sector: Sector,
    /// Distance to the next level (within the scanned set); infinite for
    /// a one-dimensional pinned sector.
    pub gap_to_next: f64,
    pub degenerate: bool,
    /// n_up of every block tied with the minimum (repeats signal a tie
    /// inside one block). Empty when the ground state is unique.
    pub tied_sectors: Vec<usize>,
}

/// Ground state of `build`'s Hamiltonian. With `strict` set, a
/// degenerate minimum is an error instead of a flagged report.
pub fn ground_state<B>(
    build: B,
    couplings: &CouplingSet,
    choice: SectorChoice,
    strict: bool,
) -> Result<GroundStateReport>
where
    B: Fn(&CouplingSet, &SectorBasis) -> Result<SectorMatrix>,
{
    ground_state_with_tol(build, couplings, choice, strict, DEGENERACY_TOL)
}

/// [`ground_state`] with an explicit degeneracy tolerance.
pub fn ground_state_with_tol<B>(
    build: B,
    couplings: &CouplingSet,
    choice: SectorChoice,
    strict: bool,
    degeneracy_tol: f64,
) -> Result<GroundStateReport>
where
    B: Fn(&CouplingSet, &SectorBasis) -> Result<SectorMatrix>,
{
    let n = couplings.n_sites();
    let scan: Vec<usize> = match choice {
        SectorChoice::Fixed(n_up) => vec![n_up],
        SectorChoice::Auto => (0..=n).collect(),
    };

    let mut solved: Vec<(usize, EigenSystem)> = Vec::with_capacity(scan.len());
    for n_up in scan {
        let basis = crate::basis::enumerate_sector(n, n_up)?;
        let m = build(couplings, &basis)?;
        solved.push((n_up, eigensystem(&m)?));
    }

    let (best_idx, energy) = solved
        .iter()
        .enumerate()
        .map(|(i, (_, es))| (i, es.values()[0]))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one sector scanned");

    // collect every level tied with the minimum, and the gap to the next
    let mut tied_sectors = Vec::new();
    let mut next_above = f64::INFINITY;
    for (n_up, es) in &solved {
        for &v in es.values() {
            if v - energy <= degeneracy_tol {
                tied_sectors.push(*n_up);
            } else {
                next_above = next_above.min(v);
            }
        }
    }
    let degenerate = tied_sectors.len() > 1;
    let gap_to_next = next_above - energy;

    if strict && degenerate {
        return Err(Error::Degenerate {
            energy,
            sectors: tied_sectors,
        });
    }

    let (n_up, es) = &solved[best_idx];
    Ok(GroundStateReport {
        energy,
        state: es.state(0),
        sector: Sector::new(n, *n_up)?,
        gap_to_next,
        degenerate,
        tied_sectors: if degenerate { tied_sectors } else { Vec::new() },
    })
}

/// Residual norm ‖H·psi − E·psi‖, the quality measure quoted in reports.
pub fn residual(m: &SectorMatrix, energy: f64, state: &StateVector) -> f64 {
    let v = DVector::from_column_slice(state.amps());
    (m.matrix() * &v - energy * &v).norm()
}
