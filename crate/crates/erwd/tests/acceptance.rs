//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Every threshold is pinned here or in the verification catalog; the
//! statistical checks run at fixed seeds.

use std::sync::OnceLock;

use erwd::analytic::LimitTheoremId;
use erwd::verify::{
    run_infra, run_theorem, CheckOutput, InfraCheck, Overrides, REPORT_THEOREMS, TestResult,
};

fn assert_all(criterion: &str, results: &[TestResult]) {
    let pass = results.iter().all(|r| r.pass);
    println!("ACCEPTANCE {criterion}: {}", if pass { "PASS" } else { "FAIL" });
    for r in results {
        println!(
            "  {} {}: statistic {:.6e} vs threshold {:.6e} (m = {})",
            if r.pass { "ok " } else { "FAIL" },
            r.name,
            r.statistic,
            r.threshold,
            r.sample_size
        );
    }
    assert!(
        pass,
        "{criterion} failed: {:?}",
        results.iter().filter(|r| !r.pass).map(|r| &r.name).collect::<Vec<_>>()
    );
}

fn theorem(id: LimitTheoremId) -> CheckOutput {
    run_theorem(id, &Overrides::default()).unwrap_or_else(|e| panic!("{id} errored: {e}"))
}

fn infra(check: InfraCheck) -> CheckOutput {
    run_infra(check, &Overrides::default()).unwrap_or_else(|e| panic!("{check:?} errored: {e}"))
}

// the first-and-last bundle feeds two criteria; run it once
fn t82_output() -> &'static CheckOutput {
    static OUT: OnceLock<CheckOutput> = OnceLock::new();
    OUT.get_or_init(|| theorem(LimitTheoremId::T82))
}

#[test]
fn acceptance_01_enumeration_oracle() {
    // every regime x policy x init at (0.5, 0.3, 0.2), n <= 8, 1e-12
    let start = std::time::Instant::now();
    let out = infra(InfraCheck::EnumerationGrid);
    assert!(start.elapsed().as_secs() < 120, "enumeration must finish within 2 minutes");
    assert_all("criterion 1 (enumeration oracle)", &out.results);
}

#[test]
fn acceptance_02_first_step_closed_forms_and_lln() {
    let mut results = infra(InfraCheck::FirstStepClosedForms).results;
    results.extend(theorem(LimitTheoremId::T52).results);
    assert_all("criterion 2 (first-step closed forms + three-point LLN)", &results);
}

#[test]
fn acceptance_03_diffusive_mixture() {
    assert_all(
        "criterion 3 (diffusive Gaussian-plus-atom mixture)",
        &theorem(LimitTheoremId::T41a).results,
    );
}

#[test]
fn acceptance_04_critical_scaling() {
    assert_all(
        "criterion 4 (critical sqrt(n log n) scaling)",
        &theorem(LimitTheoremId::T41b).results,
    );
}

#[test]
fn acceptance_05_superdiffusive_moments() {
    assert_all(
        "criterion 5 (superdiffusive limit moments)",
        &theorem(LimitTheoremId::T41c).results,
    );
}

#[test]
fn acceptance_06_absorption() {
    assert_all(
        "criterion 6 (geometric absorption and S_tau)",
        &theorem(LimitTheoremId::T72).results,
    );
}

#[test]
fn acceptance_07_first_and_last_moments() {
    let mut results = infra(InfraCheck::FirstLastMeanChain).results;
    results.extend(theorem(LimitTheoremId::T81).results);
    // the variance-slope check of the shared first-and-last bundle
    results.extend(
        t82_output()
            .results
            .iter()
            .filter(|r| r.name == "T82_variance_slope")
            .cloned(),
    );
    assert_all("criterion 7 (first-and-last moment chain)", &results);
}

#[test]
fn acceptance_08_random_centered_clts() {
    let mut results = theorem(LimitTheoremId::T53a).results;
    results.extend(theorem(LimitTheoremId::T62a).results);
    results.extend(
        t82_output()
            .results
            .iter()
            .filter(|r| r.name == "T82_ks")
            .cloned(),
    );
    assert_all("criterion 8 (randomly-centered CLTs)", &results);
}

#[test]
fn acceptance_09_multiplier_mixture() {
    let out = theorem(LimitTheoremId::T43);
    for note in &out.notes {
        println!("  note: {note}");
    }
    assert!(
        out.notes.iter().any(|n| n.contains("variance scale")),
        "the report must compare the variance scale against both printed constants"
    );
    assert_all("criterion 9 (finite multiplier mixture)", &out.results);
}

#[test]
fn acceptance_10_infrastructure() {
    let mut results = Vec::new();
    for check in [
        InfraCheck::NuRatio,
        InfraCheck::DiffeqAsymptote,
        InfraCheck::WeightReduction,
        InfraCheck::PropagateNonzeroMass,
    ] {
        results.extend(infra(check).results);
    }
    assert_all("criterion 10 (infrastructure properties)", &results);
}

#[test]
fn acceptance_theorem_coverage_has_no_gaps() {
    let expect = [
        "T41a", "T41b", "T41c", "T43", "T52", "T53a", "T61a", "T62a", "T72", "T81", "T82",
    ];
    let got: Vec<String> = REPORT_THEOREMS.iter().map(|id| id.to_string()).collect();
    assert_eq!(got, expect);
}
