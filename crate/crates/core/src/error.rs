use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("singular system: {0}")]
    Singular(String),

    #[error("step size underflow: dt = {dt:e} s cannot advance t = {t:e} s")]
    StepUnderflow { t: f64, dt: f64 },

    #[error("population {index} = {value:e} is negative beyond solver tolerance")]
    NegativePopulation { index: usize, value: f64 },

    #[error("steady state failed at drive frequency {frequency_hz:e} Hz: {source}")]
    AtFrequency {
        frequency_hz: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("special function overflow: order {order} at |x| = {magnitude:e}")]
    Overflow { order: usize, magnitude: f64 },

    #[error("argument {0:e} is at the pole x = 0")]
    Pole(f64),

    #[error("order {order}: |denominator| {denominator:e} is within pole tolerance of |numerator| {numerator:e}")]
    ResonancePole {
        order: usize,
        numerator: f64,
        denominator: f64,
    },

    #[error("requested {requested} minima of |D_{order}| but found {} at rho = {found:?}", found.len())]
    InsufficientMinima {
        order: usize,
        requested: usize,
        found: Vec<f64>,
    },

    #[error("field evaluation failed at cell ({u:e}, {v:e}): {source}")]
    AtCell {
        u: f64,
        v: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("no ellipse solution: target perimeter {target:e} m outside [{min:e}, {max:e}] m")]
    NoSolution { target: f64, min: f64, max: f64 },

    #[error("fit did not converge after {iterations} iterations")]
    NotConverged { iterations: usize },

    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("line {line}: {reason}")]
    Parse { line: u64, reason: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures caused by bad input values rather than numerics or I/O.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::UnknownStrategy { .. }
                | Error::NoSolution { .. }
        )
    }

    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Csv(_) | Error::Parse { .. })
    }
}

pub(crate) fn check_rate(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::invalid(name, format!("{value} is not finite")));
    }
    if value < 0.0 {
        return Err(Error::invalid(name, format!("{value:e} is negative")));
    }
    Ok(())
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::invalid(
            name,
            format!("{value:e} must be finite and > 0"),
        ));
    }
    Ok(())
}
