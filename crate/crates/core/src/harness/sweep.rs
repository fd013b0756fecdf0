//! ω-sweeps over seeded batches of initial conditions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{random_blocks, Scenario};
use super::{run_frame, Provenance};
use crate::analysis::{max_pairwise, settle_index};
use crate::dynamics::Frame;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepParams {
    /// Initial spread bound `Δ`.
    pub big_delta: f64,
    /// Target residual `δ`.
    pub delta: f64,
    pub omegas: Vec<f64>,
    /// Settle thresholds; `[δ]` when empty.
    pub eps: Vec<f64>,
    pub batch: usize,
    /// Fraction of the horizon, at its end, over which residuals are taken.
    pub tail_fraction: f64,
}

impl SweepParams {
    pub fn new(big_delta: f64, delta: f64, omegas: Vec<f64>) -> Self {
        Self {
            big_delta,
            delta,
            omegas,
            eps: Vec::new(),
            batch: 5,
            tail_fraction: 0.2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.big_delta > self.delta && self.big_delta.is_finite()) {
            return Err(Error::usage("sweep needs Delta > delta > 0"));
        }
        if self.omegas.is_empty() {
            return Err(Error::usage("omega grid is empty"));
        }
        if self.omegas.iter().any(|w| !(w.is_finite() && *w > 0.0))
            || self.omegas.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::usage("omega grid must be positive and increasing"));
        }
        if self.eps.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(Error::usage("settle thresholds must be positive"));
        }
        if self.batch == 0 {
            return Err(Error::usage("batch must be at least 1"));
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return Err(Error::usage("tail fraction must lie in (0, 1]"));
        }
        Ok(())
    }

    fn thresholds(&self) -> Vec<f64> {
        if self.eps.is_empty() {
            vec![self.delta]
        } else {
            self.eps.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub initial_spread: f64,
    /// `sup_t max_pairwise` over the whole horizon; `None` after a blow-up.
    pub sup_spread: Option<f64>,
    /// `sup max_pairwise` over the tail window.
    pub residual: Option<f64>,
    /// Settle time for each threshold, in the order of the sweep's `eps`.
    pub settle_times: Vec<Option<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blow_up: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaResult {
    pub omega: f64,
    /// Batch started with spread at most `Δ`.
    pub runs: Vec<RunRecord>,
    /// Batch started with spread at most `δ/10`.
    pub stability_runs: Vec<RunRecord>,
    /// Largest tail residual over the batch; `None` if a run blew up.
    pub residual: Option<f64>,
    /// Clause (b): largest `sup max_pairwise` over the batch.
    pub r: Option<f64>,
    /// Clause (a): largest `sup max_pairwise` over the stability batch.
    pub r_small: Option<f64>,
    pub clause_a: bool,
    pub clause_b: bool,
    /// Clause (c) per threshold: every run settles.
    pub clause_c: Vec<bool>,
    /// Every run ends with residual `≤ δ`.
    pub within_delta: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub big_delta: f64,
    pub delta: f64,
    pub omegas: Vec<f64>,
    pub eps: Vec<f64>,
    pub batch: usize,
    pub tail_fraction: f64,
    pub connected: bool,
    pub provenance: Provenance,
    pub results: Vec<OmegaResult>,
    /// Smallest grid ω from which every larger grid ω also keeps all
    /// residuals `≤ δ`.
    pub empirical_omega_star: Option<f64>,
    /// Spearman correlation between ω and the batch residual.
    pub trend: Option<f64>,
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut r = vec![0.0; v.len()];
    let mut k = 0;
    while k < idx.len() {
        let mut m = k;
        while m + 1 < idx.len() && v[idx[m + 1]] == v[idx[k]] {
            m += 1;
        }
        let avg = (k + m) as f64 / 2.0 + 1.0;
        for &i in &idx[k..=m] {
            r[i] = avg;
        }
        k = m + 1;
    }
    r
}

/// Spearman rank correlation with average ranks for ties; `None` when either
/// side is constant or the lengths differ.
pub fn spearman(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return None;
    }
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in ra.iter().zip(&rb) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        None
    } else {
        Some(sab / (saa * sbb).sqrt())
    }
}

fn one_run(
    s: &Scenario,
    omega: f64,
    seed: u64,
    radius: f64,
    center: f64,
    horizon: f64,
    params: &SweepParams,
    eps: &[f64],
) -> RunRecord {
    let xi0 = random_blocks(seed, s.net.nodes(), radius, center);
    let flat: Vec<f64> = xi0.iter().flatten().copied().collect();
    let initial_spread = max_pairwise(&flat);
    match run_frame(
        s,
        Frame::Original,
        Some(omega),
        &xi0,
        horizon,
        &s.run_integrator(),
    ) {
        Ok(traj) => {
            let series: Vec<f64> = traj.states.iter().map(|x| max_pairwise(x)).collect();
            let tail_start = horizon * (1.0 - params.tail_fraction);
            let residual = traj
                .times
                .iter()
                .zip(&series)
                .filter(|(t, _)| **t >= tail_start - 1e-12)
                .map(|(_, v)| *v)
                .fold(0.0, f64::max);
            RunRecord {
                seed,
                initial_spread,
                sup_spread: Some(series.iter().copied().fold(0.0, f64::max)),
                residual: Some(residual),
                settle_times: eps
                    .iter()
                    .map(|e| settle_index(&series, *e).map(|k| traj.times[k]))
                    .collect(),
                blow_up: None,
            }
        }
        Err(e) => RunRecord {
            seed,
            initial_spread,
            sup_spread: None,
            residual: None,
            settle_times: vec![None; eps.len()],
            blow_up: Some(match e {
                Error::BlowUp { time } => time,
                _ => f64::NAN,
            }),
        },
    }
}

fn max_opt(mut v: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    v.try_fold(0.0, |acc: f64, x| x.map(|x| acc.max(x)))
}

/// Integrates the original system for every `(ω, seed)` pair.
///
/// Seeds are `base + k` for the main batch and `base + 1000 + k` for the
/// stability batch, where `base` is the scenario seed (0 without one). Main
/// initial conditions are uniform in a disc of radius `Δ/2`, so their spread
/// is at most `Δ`; stability ones use radius `δ/20`.
pub fn omega_sweep(s: &Scenario, params: &SweepParams) -> Result<SweepReport> {
    params.validate()?;
    let eps = params.thresholds();
    let base = s.seed().unwrap_or(0);
    let horizon = s.horizon_for(params.omegas.first().copied());
    let center = params.big_delta;

    let jobs: Vec<(usize, bool, u64)> = (0..params.omegas.len())
        .flat_map(|w| {
            (0..params.batch as u64)
                .flat_map(move |k| [(w, false, base + k), (w, true, base + 1000 + k)])
        })
        .collect();
    let records: Vec<RunRecord> = jobs
        .par_iter()
        .map(|&(w, small, seed)| {
            let radius = if small {
                params.delta / 20.0
            } else {
                params.big_delta / 2.0
            };
            one_run(
                s,
                params.omegas[w],
                seed,
                radius,
                center,
                horizon,
                params,
                &eps,
            )
        })
        .collect();

    let mut results = Vec::with_capacity(params.omegas.len());
    for (w, &omega) in params.omegas.iter().enumerate() {
        let mine = jobs.iter().zip(&records).filter(|((i, _, _), _)| *i == w);
        let (mut runs, mut stability_runs) = (Vec::new(), Vec::new());
        for ((_, small, _), rec) in mine {
            if *small {
                stability_runs.push(rec.clone());
            } else {
                runs.push(rec.clone());
            }
        }
        let residual = max_opt(runs.iter().map(|r| r.residual));
        let r = max_opt(runs.iter().map(|r| r.sup_spread));
        let r_small = max_opt(stability_runs.iter().map(|r| r.sup_spread));
        let clause_c = (0..eps.len())
            .map(|e| runs.iter().all(|r| r.settle_times[e].is_some()))
            .collect();
        results.push(OmegaResult {
            omega,
            clause_a: r_small.is_some_and(|v| v <= params.delta),
            clause_b: r.is_some_and(f64::is_finite),
            clause_c,
            within_delta: residual.is_some_and(|v| v <= params.delta),
            residual,
            r,
            r_small,
            runs,
            stability_runs,
        });
    }

    let empirical_omega_star = results
        .iter()
        .rposition(|r| !r.within_delta)
        .map_or(Some(0), |k| (k + 1 < results.len()).then_some(k + 1))
        .map(|k| results[k].omega);
    let residuals: Vec<f64> = results
        .iter()
        .map(|r| r.residual.unwrap_or(f64::INFINITY))
        .collect();
    let trend = spearman(&params.omegas, &residuals);

    Ok(SweepReport {
        big_delta: params.big_delta,
        delta: params.delta,
        omegas: params.omegas.clone(),
        eps,
        batch: params.batch,
        tail_fraction: params.tail_fraction,
        connected: crate::topology::is_connected(&crate::topology::build_graph(&s.net)).connected,
        provenance: Provenance::of(s, horizon),
        results,
        empirical_omega_star,
        trend,
    })
}
