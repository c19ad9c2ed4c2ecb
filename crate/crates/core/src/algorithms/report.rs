use alloc::string::String;

/// Summary of an exhaustive algorithm check.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgorithmReport {
    pub algorithm: String,
    pub n: usize,
    pub cases_checked: usize,
    pub max_abs_error: f64,
    pub oracle_calls: u64,
    pub pass: bool,
}
