//! Acceptance battery: every release-gating check, one test per
//! criterion, each printing a single pass/fail line. Run with
//!
//! ```text
//! cargo test -p jwchain --test acceptance -- --nocapture
//! ```

use jwchain::diag::{ground_state, SectorChoice};
use jwchain::fixtures;
use jwchain::measures;
use jwchain::model::build_xxz_spin;
use jwchain::signrule::SignConvention;
use jwchain::verify::{
    analytic_oracle_suite, draw_ensemble, excited_case_suite, five_site_regression,
    nn_equality_suite, non_nn_inequality_suite, run_full_battery, sign_rule_suite,
    spectrum_equality_suite, string_identity_suite, xy_identity_suite, EnsembleConfig, RdmAudit,
    SuiteReport,
};

fn default_ensemble() -> EnsembleConfig {
    EnsembleConfig::default() // 100 draws, N in 4..=10, seed 42
}

fn report_line(criterion: &str, r: &SuiteReport) {
    let verdict = if r.all_passed() { "PASS" } else { "FAIL" };
    println!(
        "acceptance {criterion}: {verdict} ({}/{} cases, worst deviation {:.3e})",
        r.passed, r.cases, r.worst_deviation
    );
    assert!(
        r.all_passed(),
        "{criterion} failed: {}/{} cases, worst deviation {:.3e}",
        r.passed,
        r.cases,
        r.worst_deviation
    );
}

#[test]
fn criterion_01_five_site_regression() {
    let mut audit = RdmAudit::default();
    let r = five_site_regression(&mut audit).unwrap();
    report_line("01 five-site regression", &r);
    assert_eq!(audit.failures, 0);

    // spot-check the headline numbers once more, at the stated tolerance
    let gs = ground_state(
        build_xxz_spin,
        &fixtures::five_site_couplings(),
        SectorChoice::Fixed(3),
        true,
    )
    .unwrap();
    let m = measures::measure_pair(&gs.state, 1, 3).unwrap();
    assert!((m.spin.u_plus - 7.0 / 18.0).abs() <= 1e-10);
    assert!((m.spin.u_minus - 1.0 / 9.0).abs() <= 1e-10);
    assert!((m.spin.z.abs() - 2.0 / 9.0).abs() <= 1e-10);
    assert!((m.fermion.x_plus - 7.0 / 18.0).abs() <= 1e-10);
    assert!((m.fermion.x_minus - 1.0 / 9.0).abs() <= 1e-10);
    assert!((m.fermion.z_f.abs() - 1.0 / 9.0).abs() <= 1e-10);
    assert!((m.concurrence - (4.0 - 14.0f64.sqrt()) / 9.0).abs() <= 1e-10);
    assert!(m.mode_concurrence.abs() <= 1e-10);
}

#[test]
fn criterion_02_nn_equality() {
    let draws = draw_ensemble(&default_ensemble()).unwrap();
    let mut audit = RdmAudit::default();
    let r = nn_equality_suite(&draws, &mut audit).unwrap();
    report_line("02 NN equality", &r);
    assert_eq!(audit.failures, 0);
}

#[test]
fn criterion_03_non_nn_inequality() {
    let draws = draw_ensemble(&default_ensemble()).unwrap();
    let mut audit = RdmAudit::default();
    let r = non_nn_inequality_suite(&draws, &mut audit).unwrap();
    report_line("03 non-NN inequality", &r);
    assert_eq!(audit.failures, 0);
}

#[test]
fn criterion_04_sign_rule() {
    let draws = draw_ensemble(&default_ensemble()).unwrap();
    // the ensemble must exercise both coupling signs
    let positive = draws
        .iter()
        .filter(|d| d.couplings.j_xy().iter().all(|&j| j > 0.0))
        .count();
    assert!(positive > 0, "no J > 0 draws in the ensemble");
    assert!(positive < draws.len(), "no J < 0 draws in the ensemble");
    let r = sign_rule_suite(&draws).unwrap();
    report_line("04 Marshall sign rule", &r);
    // both conventions were checked
    let mut seen = (false, false);
    for d in &draws {
        let part = jwchain::signrule::SublatticePartition::odd_sites(d.n());
        match jwchain::signrule::check_marshall(&d.ground, &part, &d.couplings)
            .unwrap()
            .convention
        {
            SignConvention::Antiferro => seen.0 = true,
            SignConvention::Ferro => seen.1 = true,
        }
    }
    assert!(seen.0 && seen.1);
}

#[test]
fn criterion_05_product_identity() {
    let draws = draw_ensemble(&default_ensemble()).unwrap();
    let r = xy_identity_suite(&draws).unwrap();
    report_line("05 product identity and sign-pattern lemma", &r);
}

#[test]
fn criterion_06_spectrum_equality() {
    let r = spectrum_equality_suite(42, 50, 8).unwrap();
    report_line("06 spectrum/matrix equality", &r);
}

#[test]
fn criterion_07_jw_string_identity() {
    let mut audit = RdmAudit::default();
    let r = string_identity_suite(42, 100, 8, &mut audit).unwrap();
    report_line("07 JW string identity", &r);
    assert_eq!(audit.failures, 0);
}

#[test]
fn criterion_08_analytic_oracle() {
    let mut audit = RdmAudit::default();
    let r = analytic_oracle_suite(12, &mut audit).unwrap();
    report_line("08 analytic oracle", &r);
    assert_eq!(audit.failures, 0);
}

#[test]
fn criterion_09_excited_case_studies() {
    let mut audit = RdmAudit::default();
    let r = excited_case_suite(4, 20, &mut audit).unwrap();
    report_line("09 excited-state case studies", &r);
    assert_eq!(audit.failures, 0);
}

#[test]
fn criterion_10_rdm_sanity() {
    // the full battery accumulates the audit over every state the other
    // criteria touch
    let outcome = run_full_battery(&default_ensemble()).unwrap();
    let rdm = outcome
        .suites
        .iter()
        .find(|s| s.suite == "rdm_sanity")
        .expect("battery reports the rdm audit");
    report_line("10 RDM sanity", rdm);
    assert!(rdm.cases > 1000, "audit covered only {} RDMs", rdm.cases);
    // while the battery ran, confirm the overall contract
    assert!(outcome.all_passed);
}
