//! Reference data for the five-site XY chain used as a regression anchor.
//!
//! The chain has transverse couplings (1, 2, 2, 1) and its three-up sector
//! ground state is known in closed form; the pair (1, 3) then carries
//! u⁺ = 7/18, u⁻ = 1/9, z = 2/9, |Z| = 1/9, C = (4 − √14)/9 and MC = 0.
//! Tests and the verification battery compare computed results against
//! these values.

use crate::basis::{enumerate_sector, OccupationState};
use crate::diag::StateVector;
use crate::model::CouplingSet;

/// Couplings (1, 2, 2, 1) with no Ising part.
pub fn five_site_couplings() -> CouplingSet {
    CouplingSet::xy_only(vec![1.0, 2.0, 2.0, 1.0]).expect("static couplings are valid")
}

/// The known ground state of the (5, 3) sector, as (configuration bits,
/// amplitude numerator) pairs with common denominator 6. Bit l−1 encodes
/// site l.
pub fn five_site_ground_components() -> Vec<(u32, f64)> {
    vec![
        (0b11010, -2.0), // ↓↑↓↑↑ : sites 2,4,5 up
        (0b01011, -2.0), // ↑↑↓↑↓
        (0b10011, 2.0),  // ↑↑↓↓↑
        (0b11001, 2.0),  // ↑↓↓↑↑
        (0b01101, 2.0),  // ↑↓↑↑↓
        (0b10110, 2.0),  // ↓↑↑↓↑
        (0b11100, 1.0),  // ↓↓↑↑↑
        (0b00111, 1.0),  // ↑↑↑↓↓
        (0b10101, -3.0), // ↑↓↑↓↑
        (0b01110, -1.0), // ↓↑↑↑↓
    ]
}

/// The reference ground state as a normalized state vector over the
/// ascending (5, 3) sector basis.
pub fn five_site_ground_truth() -> StateVector {
    let basis = enumerate_sector(5, 3).expect("sector (5,3) is valid");
    let mut amps = vec![0.0; basis.dimension()];
    for (bits, numerator) in five_site_ground_components() {
        let idx = basis
            .index_of(OccupationState::new(bits))
            .expect("component lies in the sector");
        amps[idx] = numerator / 6.0;
    }
    StateVector::new(basis, amps).expect("reference amplitudes are normalized")
}

/// Expected pair-(1,3) values for the reference state.
pub mod expected {
    pub const U_PLUS: f64 = 7.0 / 18.0;
    pub const U_MINUS: f64 = 1.0 / 9.0;
    pub const Z_SPIN: f64 = 2.0 / 9.0;
    pub const X_PLUS: f64 = 7.0 / 18.0;
    pub const X_MINUS: f64 = 1.0 / 9.0;
    pub const Z_FERMION_ABS: f64 = 1.0 / 9.0;

    pub fn concurrence_13() -> f64 {
        (4.0 - 14.0f64.sqrt()) / 9.0
    }

    pub const MODE_CONCURRENCE_13: f64 = 0.0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_state_is_normalized() {
        let psi = five_site_ground_truth();
        let norm2: f64 = psi.amps().iter().map(|a| a * a).sum();
        assert!((norm2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reference_state_is_the_sector_ground_state() {
        use crate::diag::{ground_state, SectorChoice};
        use crate::model::build_xxz_spin;
        let c = five_site_couplings();
        let report = ground_state(build_xxz_spin, &c, SectorChoice::Fixed(3), true).unwrap();
        let reference = five_site_ground_truth();
        // agreement up to a global sign
        let dot: f64 = report
            .state
            .amps()
            .iter()
            .zip(reference.amps())
            .map(|(a, b)| a * b)
            .sum();
        assert!(
            (dot.abs() - 1.0).abs() < 1e-12,
            "overlap with reference = {dot}"
        );
    }
}
