//! Marshall sign rule and the amplitude-product identity behind C ≥ MC.
//!
//! For a bipartite XXZ chain with uniformly signed transverse couplings,
//! the ground-state amplitudes obey the Marshall sign rule: with all
//! J_j > 0 they are (−1)^φ(m)·b_m for a nonnegative set {b_m}, where φ(m)
//! counts the up spins on one sublattice; with all J_j ≤ 0 the amplitudes
//! share one sign outright. Either form is stated up to the overall sign
//! of the eigenvector, so checks here normalize the global sign before
//! looking for violations.
//!
//! Decomposing the state relative to a site pair (i, j) into
//! x_k |↑↓⟩ + y_k |↓↑⟩ over rest configurations k, the sign rule forces
//! every product x_k·y_k to one common sign, which gives the identity
//!
//! |Σ_k x_k y_k| = Σ_k |x_k y_k|.
//!
//! Since z = Σ x_k y_k while the fermionic Z re-weights the same products
//! by ±1 string parities, the identity pins |Z| ≤ |z| and hence mode
//! concurrence at or below concurrence for these ground states.

use crate::basis::{binomial, OccupationState};
use crate::diag::StateVector;
use crate::error::{Error, Result};
use crate::model::CouplingSet;

/// Violation threshold for the sign-rule checks.
pub const SIGN_RULE_TOL: f64 = 1e-9;
/// Amplitudes below this magnitude are treated as zero (their sign is
/// eigensolver noise).
pub const AMPLITUDE_FLOOR: f64 = 1e-12;

/// Bipartition of the chain into sublattices A and B such that every bond
/// connects the two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SublatticePartition {
    n: usize,
    a_mask: u32,
}

impl SublatticePartition {
    /// The default convention: A = odd sites {1, 3, 5, ...}.
    pub fn odd_sites(n: usize) -> Self {
        let mut a_mask = 0u32;
        let mut l = 1;
        while l <= n {
            a_mask |= 1 << (l - 1);
            l += 2;
        }
        SublatticePartition { n, a_mask }
    }

    /// Explicit A set; rejected unless sites strictly alternate along the
    /// chain (the bipartite condition for nearest-neighbor bonds).
    pub fn new(n: usize, a_sites: &[usize]) -> Result<Self> {
        let mut a_mask = 0u32;
        for &l in a_sites {
            if l == 0 || l > n {
                return Err(Error::domain(format!("site {l} outside 1..={n}")));
            }
            a_mask |= 1 << (l - 1);
        }
        let part = SublatticePartition { n, a_mask };
        for bond in 1..n {
            if part.in_a(bond) == part.in_a(bond + 1) {
                return Err(Error::domain(format!(
                    "bond ({bond}, {}) does not connect the sublattices",
                    bond + 1
                )));
            }
        }
        Ok(part)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn in_a(&self, l: usize) -> bool {
        self.a_mask >> (l - 1) & 1 == 1
    }

    pub fn a_sites(&self) -> Vec<usize> {
        (1..=self.n).filter(|&l| self.in_a(l)).collect()
    }

    pub fn b_sites(&self) -> Vec<usize> {
        (1..=self.n).filter(|&l| !self.in_a(l)).collect()
    }
}

/// Remove the global-sign ambiguity of an eigenvector: flip so that the
/// largest-magnitude amplitude is positive, ties resolved toward the
/// lowest basis index.
pub fn phase_fix(psi: &StateVector) -> Result<StateVector> {
    let mut best = 0usize;
    let mut best_mag = -1.0f64;
    for (idx, &a) in psi.amps().iter().enumerate() {
        if a.abs() > best_mag {
            best_mag = a.abs();
            best = idx;
        }
    }
    if best_mag == 0.0 {
        return Err(Error::domain("cannot phase-fix the zero vector"));
    }
    let mut fixed = psi.clone();
    if psi.amps()[best] < 0.0 {
        fixed.negate();
    }
    Ok(fixed)
}

/// φ(m): number of up spins of `state` on sublattice A.
pub fn marshall_phi(state: OccupationState, part: &SublatticePartition) -> u32 {
    (state.bits() & part.a_mask).count_ones()
}

/// Which form of the sign rule applies, from the sign of the transverse
/// couplings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignConvention {
    /// All J_j ≤ 0: amplitudes share one sign.
    Ferro,
    /// All J_j > 0: amplitudes alternate as (−1)^φ(m).
    Antiferro,
}

/// Outcome of a Marshall sign-rule check.
#[derive(Debug, Clone)]
pub struct SignRuleReport {
    pub holds: bool,
    /// Largest violation of the expected sign pattern after the global
    /// sign is normalized, clamped at zero.
    pub max_violation: f64,
    pub convention: SignConvention,
}

fn classify_couplings(couplings: &CouplingSet) -> Result<SignConvention> {
    let any_positive = couplings.j_xy().iter().any(|&j| j > 0.0);
    let all_positive = couplings.j_xy().iter().all(|&j| j > 0.0);
    if all_positive {
        Ok(SignConvention::Antiferro)
    } else if !any_positive {
        Ok(SignConvention::Ferro)
    } else {
        Err(Error::MixedCouplingSigns)
    }
}

/// Check the sign rule on a ground state. The expected pattern is
/// (−1)^φ(m) for all J_j > 0 and constant for all J_j ≤ 0, in both cases
/// up to the arbitrary overall sign of the eigenvector, which is fixed
/// from the dominant amplitude before violations are measured.
pub fn check_marshall(
    psi: &StateVector,
    part: &SublatticePartition,
    couplings: &CouplingSet,
) -> Result<SignRuleReport> {
    if part.n() != psi.sector().n() {
        return Err(Error::domain("partition and state chain lengths differ"));
    }
    let convention = classify_couplings(couplings)?;
    let signed = |idx: usize, state: OccupationState| -> f64 {
        let g = psi.amps()[idx];
        match convention {
            SignConvention::Ferro => g,
            SignConvention::Antiferro => {
                if marshall_phi(state, part) % 2 == 0 {
                    g
                } else {
                    -g
                }
            }
        }
    };

    // global sign from the dominant amplitude
    let mut dominant = 0usize;
    let mut best_mag = -1.0f64;
    for (idx, &a) in psi.amps().iter().enumerate() {
        if a.abs() > best_mag {
            best_mag = a.abs();
            dominant = idx;
        }
    }
    let global = signed(dominant, psi.basis().state(dominant)).signum();

    let mut max_violation = 0.0f64;
    for (idx, &state) in psi.basis().states().iter().enumerate() {
        if psi.amps()[idx].abs() < AMPLITUDE_FLOOR {
            continue;
        }
        let v = -global * signed(idx, state);
        if v > max_violation {
            max_violation = v;
        }
    }
    Ok(SignRuleReport {
        holds: max_violation <= SIGN_RULE_TOL,
        max_violation,
        convention,
    })
}

/// The state split relative to a pair (i, j): amplitudes x_k of
/// |↑⟩ᵢ|↓⟩ⱼ and y_k of |↓⟩ᵢ|↑⟩ⱼ, aligned over the ascending basis of
/// rest configurations (the other N−2 sites with n_up − 1 up spins).
#[derive(Debug, Clone)]
pub struct PairDecomposition {
    pub i: usize,
    pub j: usize,
    /// Sites the rest configurations live on, ascending.
    rest_sites: Vec<usize>,
    /// Rest configurations, bit t ↔ rest_sites[t], ascending bit value.
    rest_basis: Vec<OccupationState>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl PairDecomposition {
    pub fn len(&self) -> usize {
        self.rest_basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rest_basis.is_empty()
    }

    pub fn rest_sites(&self) -> &[usize] {
        &self.rest_sites
    }

    pub fn rest_basis(&self) -> &[OccupationState] {
        &self.rest_basis
    }

    /// The products x_k·y_k in rest-basis order.
    pub fn products(&self) -> Vec<f64> {
        self.x.iter().zip(&self.y).map(|(x, y)| x * y).collect()
    }

    /// Σ_k x_k y_k, which equals the spin correlator z = ¼⟨σᵢ⁺σⱼ⁻⟩.
    pub fn sum_products(&self) -> f64 {
        self.x.iter().zip(&self.y).map(|(x, y)| x * y).sum()
    }
}

/// Decompose a state relative to the pair (i, j). Sectors with n_up = 0
/// or n_up = N have no antiparallel component and yield an empty
/// decomposition.
pub fn pair_decompose(psi: &StateVector, i: usize, j: usize) -> Result<PairDecomposition> {
    let n = psi.sector().n();
    if i == 0 || i >= j || j > n {
        return Err(Error::domain(format!(
            "site pair must satisfy 1 <= i < j <= {n}, got ({i}, {j})"
        )));
    }
    let n_up = psi.sector().n_up();
    let rest_sites: Vec<usize> = (1..=n).filter(|&l| l != i && l != j).collect();

    if n_up == 0 || n_up == n {
        return Ok(PairDecomposition {
            i,
            j,
            rest_sites,
            rest_basis: Vec::new(),
            x: Vec::new(),
            y: Vec::new(),
        });
    }

    let rest_ups = n_up - 1;
    let mut rest_basis = Vec::with_capacity(binomial(n - 2, rest_ups));
    let mut x = Vec::with_capacity(rest_basis.capacity());
    let mut y = Vec::with_capacity(rest_basis.capacity());

    // enumerate rest configurations in ascending compressed order and
    // scatter them back onto the physical sites
    let rest_dim_bits = n - 2;
    let expand = |compressed: u32| -> u32 {
        let mut bits = 0u32;
        for (t, &site) in rest_sites.iter().enumerate() {
            if compressed >> t & 1 == 1 {
                bits |= 1 << (site - 1);
            }
        }
        bits
    };

    let mut push_config = |compressed: u32| {
        let rest_bits = expand(compressed);
        let with_i = OccupationState::new(rest_bits | 1 << (i - 1));
        let with_j = OccupationState::new(rest_bits | 1 << (j - 1));
        rest_basis.push(OccupationState::new(compressed));
        x.push(psi.amplitude(with_i));
        y.push(psi.amplitude(with_j));
    };

    if rest_ups == 0 {
        push_config(0);
    } else if rest_ups <= rest_dim_bits {
        let top = 1u32 << rest_dim_bits;
        let mut v = (1u32 << rest_ups) - 1;
        while v < top {
            push_config(v);
            let t = v | (v - 1);
            let next = t.wrapping_add(1);
            if next == 0 {
                break;
            }
            v = next | (((!t & next) - 1) >> (v.trailing_zeros() + 1));
        }
    }

    Ok(PairDecomposition {
        i,
        j,
        rest_sites,
        rest_basis,
        x,
        y,
    })
}

/// Result of testing |Σ x_k y_k| = Σ |x_k y_k|.
#[derive(Debug, Clone, Copy)]
pub struct XyIdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Tolerance for the product identity.
pub const XY_IDENTITY_TOL: f64 = 1e-10;

/// Check the identity |Σ_k x_k y_k| = Σ_k |x_k y_k|; it holds exactly
/// when all products share one sign, which the sign rule guarantees for
/// ground states.
pub fn check_xy_identity(d: &PairDecomposition) -> XyIdentityCheck {
    let lhs = d.sum_products().abs();
    let rhs: f64 = d.products().iter().map(|p| p.abs()).sum();
    XyIdentityCheck {
        lhs,
        rhs,
        holds: (lhs - rhs).abs() <= XY_IDENTITY_TOL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::enumerate_sector;
    use crate::diag::{ground_state, SectorChoice};
    use crate::fixtures;
    use crate::measures::spin_correlations;
    use crate::model::build_xxz_spin;

    #[test]
    fn odd_site_partition() {
        let part = SublatticePartition::odd_sites(5);
        assert_eq!(part.a_sites(), vec![1, 3, 5]);
        assert_eq!(part.b_sites(), vec![2, 4]);
    }

    #[test]
    fn partition_must_alternate() {
        assert!(SublatticePartition::new(4, &[1, 3]).is_ok());
        assert!(SublatticePartition::new(4, &[2, 4]).is_ok());
        assert!(SublatticePartition::new(4, &[1, 2]).is_err());
        assert!(SublatticePartition::new(4, &[5]).is_err());
    }

    #[test]
    fn phase_fix_tie_break_and_flip() {
        let basis = enumerate_sector(2, 1).unwrap();
        let r = 0.5f64.sqrt();
        // tie: lowest index wins and is made positive
        let psi = StateVector::new(basis.clone(), vec![-r, r]).unwrap();
        let fixed = phase_fix(&psi).unwrap();
        assert!((fixed.amps()[0] - r).abs() < 1e-15);
        assert!((fixed.amps()[1] + r).abs() < 1e-15);
        // dominant negative amplitude flips the vector
        let a = 0.1f64.sqrt();
        let amps = vec![a, -(1.0 - a * a).sqrt()];
        let psi = StateVector::new(basis.clone(), amps).unwrap();
        let fixed = phase_fix(&psi).unwrap();
        assert!(fixed.amps()[1] > 0.0);
        assert!(fixed.amps()[0] < 0.0);
        // already dominated by a positive amplitude: unchanged
        let amps = vec![(0.9f64).sqrt(), (0.1f64).sqrt()];
        let psi = StateVector::new(basis, amps.clone()).unwrap();
        let fixed = phase_fix(&psi).unwrap();
        assert_eq!(fixed.amps(), amps.as_slice());
    }

    #[test]
    fn marshall_phi_counts_a_sites() {
        let part = SublatticePartition::odd_sites(5);
        // ↓↑↓↑↑: ups at sites 2, 4, 5 → only site 5 in A
        assert_eq!(marshall_phi(OccupationState::new(0b11010), &part), 1);
        // ↑↓↑↓↑: ups at 1, 3, 5 → all in A
        assert_eq!(marshall_phi(OccupationState::new(0b10101), &part), 3);
        assert_eq!(marshall_phi(OccupationState::new(0), &part), 0);
    }

    #[test]
    fn five_site_reference_obeys_the_sign_rule() {
        let psi = fixtures::five_site_ground_truth();
        let part = SublatticePartition::odd_sites(5);
        let c = fixtures::five_site_couplings();
        let report = check_marshall(&psi, &part, &c).unwrap();
        assert_eq!(report.convention, SignConvention::Antiferro);
        assert!(report.holds);
        assert_eq!(report.max_violation, 0.0);
        // and the phase-fixed copy passes the same check
        let fixed = phase_fix(&psi).unwrap();
        let report = check_marshall(&fixed, &part, &c).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn two_site_ground_state_alternates() {
        let c = crate::model::CouplingSet::uniform(2, 1.0, 1.0).unwrap();
        let report = ground_state(build_xxz_spin, &c, SectorChoice::Fixed(1), true).unwrap();
        let part = SublatticePartition::odd_sites(2);
        let check = check_marshall(&report.state, &part, &c).unwrap();
        assert!(check.holds);
        // the component with odd phi carries the opposite sign
        let fixed = phase_fix(&report.state).unwrap();
        let phi0 = marshall_phi(fixed.basis().state(0), &part);
        let phi1 = marshall_phi(fixed.basis().state(1), &part);
        assert_ne!(phi0 % 2, phi1 % 2);
        assert!(fixed.amps()[0] * fixed.amps()[1] < 0.0);
    }

    #[test]
    fn ferromagnetic_chain_has_uniform_sign() {
        let c = crate::model::CouplingSet::uniform(4, -1.0, 0.0).unwrap();
        let report = ground_state(build_xxz_spin, &c, SectorChoice::Fixed(2), true).unwrap();
        let part = SublatticePartition::odd_sites(4);
        let check = check_marshall(&report.state, &part, &c).unwrap();
        assert_eq!(check.convention, SignConvention::Ferro);
        assert!(check.holds);
        let fixed = phase_fix(&report.state).unwrap();
        assert!(fixed.amps().iter().all(|&a| a > 0.0));
    }

    #[test]
    fn mixed_sign_couplings_rejected() {
        let c = crate::model::CouplingSet::new(vec![1.0, -1.0, 1.0], vec![0.0; 3]).unwrap();
        let psi = {
            let basis = enumerate_sector(4, 2).unwrap();
            let dim = basis.dimension();
            StateVector::normalized(basis, vec![1.0; dim]).unwrap()
        };
        let part = SublatticePartition::odd_sites(4);
        assert!(matches!(
            check_marshall(&psi, &part, &c),
            Err(Error::MixedCouplingSigns)
        ));
    }

    #[test]
    fn five_site_pair_decomposition_products() {
        let psi = fixtures::five_site_ground_truth();
        let d = pair_decompose(&psi, 1, 3).unwrap();
        assert_eq!(d.rest_sites(), &[2, 4, 5]);
        assert_eq!(d.len(), 3);
        let mut products = d.products();
        products.sort_by(f64::total_cmp);
        let expected = [1.0 / 18.0, 1.0 / 18.0, 1.0 / 9.0];
        for (got, want) in products.iter().zip(expected) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!((d.sum_products() - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn decomposition_reconstructs_the_spin_correlator() {
        let psi = fixtures::five_site_ground_truth();
        for (i, j) in [(1, 2), (1, 3), (2, 5), (3, 4), (1, 5)] {
            let d = pair_decompose(&psi, i, j).unwrap();
            let z = spin_correlations(&psi, i, j).unwrap().z;
            assert!((d.sum_products() - z).abs() < 1e-12);
        }
    }

    #[test]
    fn saturated_sectors_decompose_to_nothing() {
        let basis = enumerate_sector(3, 3).unwrap();
        let psi = StateVector::new(basis, vec![1.0]).unwrap();
        let d = pair_decompose(&psi, 1, 2).unwrap();
        assert!(d.is_empty());
        assert_eq!(d.sum_products(), 0.0);

        let basis = enumerate_sector(3, 0).unwrap();
        let psi = StateVector::new(basis, vec![1.0]).unwrap();
        let d = pair_decompose(&psi, 2, 3).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn singlet_decomposition() {
        let basis = enumerate_sector(2, 1).unwrap();
        let r = 0.5f64.sqrt();
        let psi = StateVector::new(basis, vec![r, -r]).unwrap();
        let d = pair_decompose(&psi, 1, 2).unwrap();
        assert_eq!(d.len(), 1);
        assert!((d.x[0] - r).abs() < 1e-15);
        assert!((d.y[0] + r).abs() < 1e-15);
    }

    #[test]
    fn xy_identity_on_the_reference_state() {
        let psi = fixtures::five_site_ground_truth();
        let d = pair_decompose(&psi, 1, 3).unwrap();
        let check = check_xy_identity(&d);
        assert!(check.holds);
        assert!((check.lhs - 2.0 / 9.0).abs() < 1e-15);
        assert!((check.rhs - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn xy_identity_fails_for_mixed_sign_products() {
        // crafted decomposition with products (+1, -1): lhs 0, rhs 2
        let d = PairDecomposition {
            i: 1,
            j: 2,
            rest_sites: vec![3, 4],
            rest_basis: vec![OccupationState::new(0b01), OccupationState::new(0b10)],
            x: vec![1.0, -1.0],
            y: vec![1.0, 1.0],
        };
        let check = check_xy_identity(&d);
        assert!(!check.holds);
        assert_eq!(check.lhs, 0.0);
        assert_eq!(check.rhs, 2.0);
    }

    #[test]
    fn single_product_always_satisfies_the_identity() {
        let d = PairDecomposition {
            i: 1,
            j: 2,
            rest_sites: vec![],
            rest_basis: vec![OccupationState::new(0)],
            x: vec![-0.6],
            y: vec![0.8],
        };
        assert!(check_xy_identity(&d).holds);
    }
}
