//! Statistical verification of the simulator against the exact results:
//! comparison primitives, the enumeration oracle, and the per-theorem
//! check catalog.

pub mod catalog;
pub mod checks;
pub mod enumeration;
pub mod report;

pub use catalog::{
    run_acceptance_suite, run_infra, run_theorem, CatalogError, CheckOutput, InfraCheck,
    Overrides, REPORT_THEOREMS,
};
pub use checks::{
    discrete_cluster_check, geometric_fit, ks_mixed, moment_check, MomentKind, Tolerance,
    VerifyError,
};
pub use enumeration::{enumerate, enumerate_weighted, Enumeration};
pub use report::{assemble_report, TestResult, VerifyReport};
