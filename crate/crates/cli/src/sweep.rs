//! Parameter sweeps over one-parameter state families.

use qcorr_core::{
    mutual_information, named, optimize_measurement, sequential_measure, Family, OptimizerConfig,
};

use crate::error::CliError;
use crate::format::sig;

pub const HEADER: &str = "param,I,D0,D1,Q,C";

/// Families with a scalar parameter.
pub const SWEEPABLE: [&str; 1] = ["werner"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

impl Range {
    /// Grid points `from, from + step, …` up to `to`, with the last point
    /// pinned to `to` when the step divides the interval.
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        let Range { from, to, step } = *self;
        if !(from.is_finite() && to.is_finite() && step.is_finite()) || step <= 0.0 || to < from {
            return Err(CliError::Usage(format!(
                "sweep range needs finite from <= to and step > 0 (got from={from}, to={to}, step={step})"
            )));
        }
        let span = (to - from) / step;
        let n = (span + 1e-9).floor() as usize;
        let mut pts: Vec<f64> = (0..=n).map(|i| from + i as f64 * step).collect();
        if (span - span.round()).abs() < 1e-9 {
            *pts.last_mut().expect("nonempty") = to;
        }
        Ok(pts)
    }
}

fn family_at(name: &str, p: f64) -> Result<Family, CliError> {
    match name {
        "werner" => Ok(Family::Werner(p)),
        other => Err(CliError::Core(qcorr_core::Error::UnknownFamily(format!(
            "`{other}` cannot be swept; sweepable families: {}",
            SWEEPABLE.join(", ")
        )))),
    }
}

/// CSV text with header [`HEADER`] and one row per grid point.
pub fn run(family: &str, range: Range, config: &OptimizerConfig) -> Result<String, CliError> {
    family_at(family, 0.0)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER.split(',')).expect("in-memory write");
    for p in range.points()? {
        let rho = named(&family_at(family, p)?)?;
        let i = mutual_information(&rho)?;
        let d0 = optimize_measurement(&rho, 0, config)?.discord;
        let d1 = optimize_measurement(&rho, 1, config)?.discord;
        let seq = sequential_measure(&rho, &[0, 1], config)?;
        let row = [p, i, d0, d1, seq.q_total, seq.c_total].map(sig);
        w.write_record(&row).expect("in-memory write");
    }
    Ok(String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"))
}
