use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(String),

    #[error("modulus {p} has fewer than two {what}; no spacings exist")]
    DegenerateModulus { p: String, what: &'static str },

    #[error("window start {start} with size {size} does not fit inside [1, {p} - 1]")]
    WindowOutOfRange { p: String, start: String, size: u64 },

    #[error("window holds {hits} hit(s); at least two are needed for a spacing")]
    DegenerateWindow { hits: usize },

    #[error("factoring {n} ran out of budget ({budget} rho iterations, {ecm_curves} ECM curves)")]
    BudgetExhausted {
        n: String,
        budget: u64,
        ecm_curves: u32,
    },

    #[error("field characteristic {0} is not a supported prime")]
    InvalidCharacteristic(u32),

    #[error("element {value} at index {index} is not reduced modulo {modulus}")]
    UnreducedElement {
        index: usize,
        value: u32,
        modulus: u32,
    },

    #[error("seed has {got} elements but the feedback polynomial has degree {want}")]
    SeedLength { got: usize, want: usize },

    #[error("empty sequence")]
    EmptySequence,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("trial {trial} aborted after {attempts} resampling attempts (last: {last})")]
    TrialAborted {
        trial: u64,
        attempts: u32,
        last: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: field `{field}`: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        field: String,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
