//! Scenario runs, ω-sweeps and the averaging-error scaling study.

mod config;
mod scaling;
mod sweep;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{
    load_config, parse_config, random_blocks, sample_disc, EdgeConfig, InitialCondition, Scenario,
    ScenarioConfig,
};
pub use scaling::{averaging_scaling_study, loglog_slope, ScalingReport, ScalingRow};
pub use sweep::{omega_sweep, spearman, OmegaResult, RunRecord, SweepParams, SweepReport};

use crate::analysis::{max_pairwise, Metric, SyncMetrics};
use crate::averaging::build_averaged_field;
use crate::dynamics::{
    integrate, ArrayState, Frame, IntegratorSpec, OriginalField, RotatingField, SystemSpec,
    Trajectory, VectorField,
};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::topology::{build_graph, is_connected, ConnectivityReport};

/// Sample spacing used when a scenario leaves it unset.
pub const DEFAULT_SAMPLE_INTERVAL: f64 = 0.05;

/// Threshold for "synchronized" in scenario reports.
pub const SYNC_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub integrator: IntegratorSpec,
    pub quadrature: QuadratureSpec,
    pub horizon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    pub output_row: [f64; 2],
    pub version: String,
}

impl Provenance {
    fn of(s: &Scenario, horizon: f64) -> Self {
        Self {
            config_hash: s.config_hash.clone(),
            seed: s.seed(),
            integrator: s.run_integrator(),
            quadrature: s.quadrature,
            horizon,
            omega: s.omega,
            output_row: s.output_row,
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    pub frame: Frame,
    pub step: f64,
    pub samples: usize,
    pub initial: SyncMetrics,
    #[serde(rename = "final")]
    pub last: SyncMetrics,
    pub sup_max_pairwise: f64,
    /// First sample time after which `max_pairwise ≤ SYNC_THRESHOLD`.
    pub settle_time: Option<f64>,
    /// File name of the trajectory CSV, relative to the output directory.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub name: String,
    pub provenance: Provenance,
    pub connectivity: ConnectivityReport,
    pub frames: Vec<FrameReport>,
    /// Largest disagreement in pairwise distances between the original and
    /// rotating runs, when both were requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame_consistency: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub report: ScenarioReport,
    pub trajectories: Vec<Trajectory>,
    pub files: Vec<PathBuf>,
}

fn system_spec(s: &Scenario, omega: f64) -> SystemSpec {
    SystemSpec::new(s.net.clone(), omega).with_output_row(s.output_row)
}

/// Integrates one frame of a scenario from original-frame blocks `xi0`.
///
/// At `t = 0` the rotating frame coincides with the original one and the
/// averaged state starts from the same point.
pub fn run_frame(
    s: &Scenario,
    frame: Frame,
    omega: Option<f64>,
    xi0: &[[f64; 2]],
    horizon: f64,
    integrator: &IntegratorSpec,
) -> Result<Trajectory> {
    let need = || Error::validation("omega", "required for original or rotating frames");
    let x0 = ArrayState::from_blocks(frame, xi0)?;
    match frame {
        Frame::Original => {
            let f = OriginalField::new(&system_spec(s, omega.ok_or_else(need)?));
            integrate(&f, &x0, horizon, integrator)
        }
        Frame::Rotating => {
            let f = RotatingField::new(&system_spec(s, omega.ok_or_else(need)?));
            integrate(&f, &x0, horizon, integrator)
        }
        Frame::Averaged => {
            let amp = s.output_row[0].hypot(s.output_row[1]);
            let f = build_averaged_field(&s.net, &s.quadrature, amp)?;
            integrate(&f as &dyn VectorField, &x0, horizon, integrator)
        }
    }
}

/// Largest `| |ξ_i − ξ_j| − |x_i − x_j| |` over samples and pairs.
pub fn pairwise_disagreement(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    if a.times != b.times {
        return Err(Error::usage(
            "pairwise comparison needs identical sample grids",
        ));
    }
    let mut worst: f64 = 0.0;
    for (sa, sb) in a.states.iter().zip(&b.states) {
        let (ma, mb) = (SyncMetrics::of(sa), SyncMetrics::of(sb));
        for (ra, rb) in ma.pairwise.iter().zip(&mb.pairwise) {
            for (x, y) in ra.iter().zip(rb) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    Ok(worst)
}

fn frame_name(f: Frame) -> &'static str {
    match f {
        Frame::Original => "original",
        Frame::Rotating => "rotating",
        Frame::Averaged => "averaged",
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// Writes pretty JSON followed by a newline.
pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    use std::io::Write;
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Runs every requested frame, writes `<name>_<frame>.csv` and
/// `<name>_metrics.json` into `out_dir` (or the scenario's own output
/// directory), and returns the report.
pub fn run_scenario(s: &Scenario, out_dir: Option<&Path>) -> Result<ScenarioRun> {
    let horizon = s.horizon_for(s.omega);
    let integrator = s.run_integrator();
    let xi0 = s.initial_blocks();
    let connectivity = is_connected(&build_graph(&s.net));

    let trajectories = s
        .frames
        .par_iter()
        .map(|&f| run_frame(s, f, s.omega, &xi0, horizon, &integrator))
        .collect::<Result<Vec<_>>>()?;

    let dir = out_dir
        .map(Path::to_path_buf)
        .or_else(|| s.output_dir.clone());
    let mut files = Vec::new();
    let mut frames = Vec::new();
    for traj in &trajectories {
        let series: Vec<f64> = traj.states.iter().map(|x| max_pairwise(x)).collect();
        let csv = match &dir {
            Some(d) => {
                let file = format!("{}_{}.csv", s.name, frame_name(traj.frame));
                let path = d.join(&file);
                let mut w = create(&path)?;
                traj.write_csv(&mut w)?;
                std::io::Write::flush(&mut w)?;
                files.push(path);
                Some(file)
            }
            None => None,
        };
        frames.push(FrameReport {
            frame: traj.frame,
            step: traj.step,
            samples: traj.len(),
            initial: SyncMetrics::of(&traj.states[0]),
            last: SyncMetrics::of(traj.final_state().unwrap_or_default()),
            sup_max_pairwise: series.iter().copied().fold(0.0, f64::max),
            settle_time: crate::analysis::settle_time(traj, SYNC_THRESHOLD, Metric::MaxPairwise)?,
            csv,
        });
    }

    let find = |f: Frame| trajectories.iter().find(|t| t.frame == f);
    let frame_consistency = match (find(Frame::Original), find(Frame::Rotating)) {
        (Some(a), Some(b)) => Some(pairwise_disagreement(a, b)?),
        _ => None,
    };

    let report = ScenarioReport {
        name: s.name.clone(),
        provenance: Provenance::of(s, horizon),
        connectivity,
        frames,
        frame_consistency,
    };
    if let Some(d) = &dir {
        let path = d.join(format!("{}_metrics.json", s.name));
        write_json(&path, &report)?;
        files.push(path);
    }
    Ok(ScenarioRun {
        report,
        trajectories,
        files,
    })
}
