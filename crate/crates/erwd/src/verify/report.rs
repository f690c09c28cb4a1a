//! Machine-readable pass/fail results.

use serde::Serialize;

/// Outcome of one statistical or exact check. `pass` holds exactly when
/// `statistic <= threshold`.
#[derive(Debug, Clone, Serialize)]
pub struct TestResult {
    pub name: String,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    pub sample_size: u64,
    /// Which statement and quantity the check targets.
    pub note: String,
}

impl TestResult {
    pub fn new(
        name: impl Into<String>,
        statistic: f64,
        threshold: f64,
        sample_size: u64,
        note: impl Into<String>,
    ) -> Self {
        Self {
            name: name.into(),
            statistic,
            threshold,
            pass: statistic <= threshold,
            sample_size,
            note: note.into(),
        }
    }
}

/// A reproducible bundle of check results.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub fingerprint: String,
    pub config: serde_json::Value,
    pub notes: Vec<String>,
    pub results: Vec<TestResult>,
}

/// Aggregate results; the report passes when every result does.
pub fn assemble_report(
    results: Vec<TestResult>,
    config: serde_json::Value,
    notes: Vec<String>,
) -> VerifyReport {
    let pass = results.iter().all(|r| r.pass);
    let fingerprint = format!(
        "{} {} / {} checks pass",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION"),
        results.iter().filter(|r| r.pass).count(),
    );
    VerifyReport { pass, fingerprint, config, notes, results }
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Flat CSV of the results: name,statistic,threshold,pass,sample_size,note.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,statistic,threshold,pass,sample_size,note\n");
        for r in &self.results {
            let note = r.note.replace('"', "'").replace(',', ";");
            out.push_str(&format!(
                "{},{},{},{},{},\"{}\"\n",
                r.name, r.statistic, r.threshold, r.pass, r.sample_size, note
            ));
        }
        out
    }

    pub fn failed(&self) -> Vec<&TestResult> {
        self.results.iter().filter(|r| !r.pass).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_passes() {
        let report = assemble_report(Vec::new(), serde_json::json!({}), Vec::new());
        assert!(report.pass);
        assert!(report.failed().is_empty());
    }

    #[test]
    fn single_passing_result() {
        let report = assemble_report(
            vec![TestResult::new("x", 0.5, 1.0, 10, "demo")],
            serde_json::json!({}),
            Vec::new(),
        );
        assert!(report.pass);
    }

    #[test]
    fn mixed_results_fail_with_names() {
        let report = assemble_report(
            vec![
                TestResult::new("good", 0.5, 1.0, 10, ""),
                TestResult::new("bad", 2.0, 1.0, 10, ""),
            ],
            serde_json::json!({}),
            Vec::new(),
        );
        assert!(!report.pass);
        let failed: Vec<&str> = report.failed().iter().map(|r| r.name.as_str()).collect();
        assert_eq!(failed, vec!["bad"]);
    }

    #[test]
    fn reports_are_byte_reproducible() {
        let make = || {
            assemble_report(
                vec![TestResult::new("x", 0.123456789, 1.0, 42, "note")],
                serde_json::json!({"seed": 7}),
                vec!["aside".into()],
            )
        };
        assert_eq!(make().to_json(), make().to_json());
        assert_eq!(make().to_csv(), make().to_csv());
    }
}
