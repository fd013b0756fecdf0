//! Averaging error against ω.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::Scenario;
use super::{run_frame, Provenance};
use crate::analysis::averaging_error;
use crate::dynamics::Frame;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub omega: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub horizon: f64,
    pub rows: Vec<ScalingRow>,
    /// Least-squares slope of `ln error` on `ln ω`; `None` if any error is 0.
    pub slope: Option<f64>,
    pub provenance: Provenance,
}

impl ScalingReport {
    pub fn write_csv(&self, mut w: impl std::io::Write) -> Result<()> {
        use crate::dynamics::fmt_float;
        writeln!(w, "omega,error")?;
        for r in &self.rows {
            writeln!(w, "{},{}", fmt_float(r.omega), fmt_float(r.error))?;
        }
        Ok(())
    }
}

pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return None;
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Sup-norm distance between rotating-frame runs at each ω and the averaged
/// run, all from the scenario's initial condition and on one sample grid.
///
/// The grid must be increasing and span at least three doublings.
pub fn averaging_scaling_study(
    s: &Scenario,
    omegas: &[f64],
    horizon: Option<f64>,
) -> Result<ScalingReport> {
    if omegas.len() < 4
        || omegas.iter().any(|w| !(w.is_finite() && *w > 0.0))
        || omegas.windows(2).any(|w| w[0] >= w[1])
        || omegas[omegas.len() - 1] / omegas[0] < 8.0 * (1.0 - 1e-12)
    {
        return Err(Error::usage(
            "scaling study needs an increasing grid spanning at least three doublings",
        ));
    }
    let horizon = horizon.unwrap_or_else(|| s.horizon_for(Some(omegas[0])));
    let integrator = s.run_integrator();
    let xi0 = s.initial_blocks();

    let averaged = run_frame(s, Frame::Averaged, None, &xi0, horizon, &integrator)?;
    let rows = omegas
        .par_iter()
        .map(|&omega| {
            let rot = run_frame(s, Frame::Rotating, Some(omega), &xi0, horizon, &integrator)?;
            Ok(ScalingRow {
                omega,
                error: averaging_error(&rot, &averaged)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let slope = loglog_slope(&rows.iter().map(|r| (r.omega, r.error)).collect::<Vec<_>>());
    let mut provenance = Provenance::of(s, horizon);
    provenance.omega = None;
    Ok(ScalingReport {
        horizon,
        rows,
        slope,
        provenance,
    })
}
