//! Synchronization metrics over states and trajectories.
//!
//! For `p` blocks with mean `x̄`, the distance of the stacked state to the
//! synchronization manifold is `sqrt(Σ |x_i − x̄|²)`. Both metrics below obey
//! `max_pairwise ≤ √2 · dist ≤ 2 · dist` and `dist ≤ √p · max_pairwise`:
//! the first by the triangle inequality through `x̄`, the second because `x̄`
//! lies in the convex hull of the blocks.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dynamics::{fmt_float, Frame, Trajectory};
use crate::error::{Error, Result};

fn blocks(coords: &[f64]) -> impl Iterator<Item = [f64; 2]> + '_ {
    coords.chunks_exact(2).map(|b| [b[0], b[1]])
}

fn block_mean(coords: &[f64]) -> [f64; 2] {
    let p = (coords.len() / 2) as f64;
    let (sx, sy) = blocks(coords).fold((0.0, 0.0), |(x, y), b| (x + b[0], y + b[1]));
    [sx / p, sy / p]
}

pub fn dist_to_manifold(coords: &[f64]) -> f64 {
    let m = block_mean(coords);
    blocks(coords)
        .map(|b| (b[0] - m[0]).powi(2) + (b[1] - m[1]).powi(2))
        .sum::<f64>()
        .sqrt()
}

pub fn max_pairwise(coords: &[f64]) -> f64 {
    let p = coords.len() / 2;
    let mut best: f64 = 0.0;
    for i in 0..p {
        for j in i + 1..p {
            let d = (coords[2 * i] - coords[2 * j]).hypot(coords[2 * i + 1] - coords[2 * j + 1]);
            best = best.max(d);
        }
    }
    best
}

/// Distance between the centroids of two groups of oscillators.
pub fn centroid_distance(coords: &[f64], a: &[usize], b: &[usize]) -> f64 {
    let centroid = |g: &[usize]| {
        let n = g.len() as f64;
        let (x, y) = g.iter().fold((0.0, 0.0), |(x, y), &i| {
            (x + coords[2 * i], y + coords[2 * i + 1])
        });
        [x / n, y / n]
    };
    let (ca, cb) = (centroid(a), centroid(b));
    (ca[0] - cb[0]).hypot(ca[1] - cb[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyncMetrics {
    pub dist_to_manifold: f64,
    pub max_pairwise: f64,
    pub pairwise: Vec<Vec<f64>>,
}

impl SyncMetrics {
    pub fn of(coords: &[f64]) -> Self {
        let p = coords.len() / 2;
        let pairwise = (0..p)
            .map(|i| {
                (0..p)
                    .map(|j| {
                        (coords[2 * i] - coords[2 * j]).hypot(coords[2 * i + 1] - coords[2 * j + 1])
                    })
                    .collect()
            })
            .collect();
        Self {
            dist_to_manifold: dist_to_manifold(coords),
            max_pairwise: max_pairwise(coords),
            pairwise,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    DistToManifold,
    MaxPairwise,
}

impl Metric {
    pub fn eval(self, coords: &[f64]) -> f64 {
        match self {
            Metric::DistToManifold => dist_to_manifold(coords),
            Metric::MaxPairwise => max_pairwise(coords),
        }
    }
}

pub fn metric_series(traj: &Trajectory, metric: Metric) -> Vec<f64> {
    traj.states.iter().map(|s| metric.eval(s)).collect()
}

/// First index from which every value stays `≤ eps`.
pub fn settle_index(values: &[f64], eps: f64) -> Option<usize> {
    let last_bad = values.iter().rposition(|v| !(*v <= eps));
    match last_bad {
        None => Some(0),
        Some(k) if k + 1 < values.len() => Some(k + 1),
        Some(_) => None,
    }
}

/// Earliest sample time after which the metric stays `≤ eps`; `None` when
/// the final sample still violates it.
pub fn settle_time(traj: &Trajectory, eps: f64, metric: Metric) -> Result<Option<f64>> {
    if traj.is_empty() {
        return Err(Error::usage("settle_time needs a nonempty trajectory"));
    }
    if !(eps > 0.0) {
        return Err(Error::usage("settle threshold must be positive"));
    }
    Ok(settle_index(&metric_series(traj, metric), eps).map(|k| traj.times[k]))
}

/// `(t, max_pairwise)` along an averaged trajectory: the diameter of the
/// convex hull of the oscillator states.
pub fn hull_diameter_series(traj: &Trajectory) -> Result<Vec<(f64, f64)>> {
    if traj.frame != Frame::Averaged {
        return Err(Error::usage(
            "hull diameter series expects an averaged trajectory",
        ));
    }
    Ok(traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(t, s)| (*t, max_pairwise(s)))
        .collect())
}

/// Largest one-step increase of a series; `≤ 0` for nonincreasing series.
pub fn max_increase(values: &[f64]) -> f64 {
    values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Sup over samples of the stacked-state distance between a rotating-frame
/// run and the averaged run from the same initial condition.
pub fn averaging_error(rotating: &Trajectory, averaged: &Trajectory) -> Result<f64> {
    if rotating.times != averaged.times {
        return Err(Error::usage("averaging_error needs identical sample grids"));
    }
    if rotating.states.first().map(Vec::len) != averaged.states.first().map(Vec::len) {
        return Err(Error::usage("averaging_error needs equal state dimensions"));
    }
    Ok(rotating
        .states
        .iter()
        .zip(&averaged.states)
        .map(|(a, b)| {
            a.iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max))
}

/// `t,value` CSV with 17 significant digits.
pub fn write_series_csv(
    mut w: impl Write,
    name: &str,
    series: impl IntoIterator<Item = (f64, f64)>,
) -> Result<()> {
    writeln!(w, "t,{name}")?;
    for (t, v) in series {
        writeln!(w, "{},{}", fmt_float(t), fmt_float(v))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::IntegratorSpec;

    fn synthetic(frame: Frame, states: Vec<Vec<f64>>) -> Trajectory {
        Trajectory {
            frame,
            times: (0..states.len()).map(|k| k as f64).collect(),
            states,
            step: 1.0,
            omega: None,
            output_row: [0.0, 1.0],
            integrator: IntegratorSpec::default(),
        }
    }

    #[test]
    fn manifold_distance_examples() {
        assert_eq!(dist_to_manifold(&[1.0, 2.0, 1.0, 2.0, 1.0, 2.0]), 0.0);
        assert!((dist_to_manifold(&[0.0, 0.0, 2.0, 0.0]) - 2f64.sqrt()).abs() < 1e-15);
        let a = [0.3, -1.0, 2.0, 0.5, 4.0, 4.0];
        let b: Vec<f64> = a
            .iter()
            .enumerate()
            .map(|(k, v)| v + [5.0, -2.0][k % 2])
            .collect();
        assert!((dist_to_manifold(&a) - dist_to_manifold(&b)).abs() < 1e-12);
    }

    #[test]
    fn pairwise_examples() {
        assert_eq!(max_pairwise(&[1.0, 1.0, 1.0, 1.0]), 0.0);
        assert_eq!(max_pairwise(&[0.0, 0.0, 3.0, 0.0, 0.0, 4.0]), 5.0);
        let th: f64 = 0.8;
        let (c, s) = (th.cos(), th.sin());
        let rot: Vec<f64> = [0.0, 0.0, 3.0, 0.0, 0.0, 4.0]
            .chunks(2)
            .flat_map(|b| [c * b[0] - s * b[1], s * b[0] + c * b[1]])
            .collect();
        assert!((max_pairwise(&rot) - 5.0).abs() < 1e-14);
        let m = SyncMetrics::of(&[0.0, 0.0, 3.0, 0.0, 0.0, 4.0]);
        assert_eq!(m.pairwise[1][2], 5.0);
        assert_eq!(m.pairwise[0][0], 0.0);
    }

    #[test]
    fn settle_examples() {
        let on = synthetic(Frame::Averaged, vec![vec![1.0, 1.0, 1.0, 1.0]; 5]);
        assert_eq!(
            settle_time(&on, 1e-9, Metric::MaxPairwise).unwrap(),
            Some(0.0)
        );

        let growing = synthetic(
            Frame::Averaged,
            (0..5).map(|k| vec![0.0, 0.0, k as f64, 0.0]).collect(),
        );
        assert_eq!(
            settle_time(&growing, 0.5, Metric::MaxPairwise).unwrap(),
            None
        );

        let dip = synthetic(
            Frame::Averaged,
            [3.0, 0.1, 2.0, 0.1, 0.05]
                .iter()
                .map(|g| vec![0.0, 0.0, *g, 0.0])
                .collect(),
        );
        assert_eq!(
            settle_time(&dip, 0.5, Metric::MaxPairwise).unwrap(),
            Some(3.0)
        );

        let empty = synthetic(Frame::Averaged, vec![]);
        assert!(settle_time(&empty, 1.0, Metric::MaxPairwise).is_err());
    }

    #[test]
    fn hull_series_requires_averaged() {
        let t = synthetic(Frame::Original, vec![vec![0.0; 4]]);
        assert!(hull_diameter_series(&t).is_err());
        let t = synthetic(Frame::Averaged, vec![vec![0.0; 4]; 3]);
        assert!(hull_diameter_series(&t)
            .unwrap()
            .iter()
            .all(|(_, d)| *d == 0.0));
    }

    #[test]
    fn averaging_error_grid_checks() {
        let a = synthetic(Frame::Rotating, vec![vec![0.0, 0.0], vec![1.0, 1.0]]);
        assert_eq!(averaging_error(&a, &a).unwrap(), 0.0);
        let mut b = a.clone();
        b.states[1] = vec![1.0, 4.0];
        assert_eq!(averaging_error(&a, &b).unwrap(), 3.0);
        b.times[1] = 1.5;
        assert!(averaging_error(&a, &b).is_err());
    }

    #[test]
    fn centroid_distance_between_pairs() {
        let s = [0.0, 0.0, 2.0, 0.0, 10.0, 0.0, 10.0, 2.0];
        assert!((centroid_distance(&s, &[0, 1], &[2, 3]) - 82f64.sqrt()).abs() < 1e-14);
    }
}
