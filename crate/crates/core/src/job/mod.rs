//! Job descriptions, orchestration of the verifications, and JSON reports.

mod input;
mod run;

pub use input::{
    parse_input, CoefficientSource, ConeInput, JobSpec, Selection, Verification, DEFAULT_MAX_DEGREE, DEFAULT_N_CAP,
    SAMPLE_TRIES,
};
pub use run::{
    run, run_check, FilteredDimsReport, Context, Details, PairSummary, Parameters, Report, Verdict, VerificationResult,
    SCHEMA_VERSION,
};
