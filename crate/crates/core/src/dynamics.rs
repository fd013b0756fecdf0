//! Vector fields of the oscillator array and a fixed-step RK4 integrator.
//!
//! Each oscillator state is a block `[q_i, p_i]` of a flat `2p` vector. The
//! three representations share this layout:
//!
//! * original: `ξ̇_i = S(ω)ξ_i + Hᵀ Σ_j γ_ij(H(ξ_j − ξ_i))`
//! * rotating: `ẋ_i = h(t)ᵀ Σ_j γ_ij(h(t)(x_j − x_i))` with `h(t) = H e^{S(ω)t}`
//! * averaged: `η̇_i = Σ_j ρ_ij(|η_j − η_i|)(η_j − η_i)/|η_j − η_i|`
//!
//! where `S(ω) = [[0, ω], [−ω, 0]]`, so
//! `e^{S(ω)t} = [[cos ωt, sin ωt], [−sin ωt, cos ωt]]`.

use std::f64::consts::TAU;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::averaging::AveragedField;
use crate::coupling::{CouplingFunction, Interconnection};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    Original,
    Rotating,
    Averaged,
}

impl Frame {
    /// Column prefixes used in trajectory CSV headers.
    fn column_names(self) -> (&'static str, &'static str) {
        match self {
            Frame::Original => ("q", "p"),
            Frame::Rotating => ("x", "y"),
            Frame::Averaged => ("eta_x", "eta_y"),
        }
    }
}

/// Stacked oscillator states tagged with the frame they live in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayState {
    pub frame: Frame,
    pub coords: Vec<f64>,
}

impl ArrayState {
    pub fn new(frame: Frame, coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.len() % 2 != 0 {
            return Err(Error::usage(format!(
                "state length must be a positive even number, got {}",
                coords.len()
            )));
        }
        if let Some(k) = coords.iter().position(|v| !v.is_finite()) {
            return Err(Error::usage(format!("state entry {k} is not finite")));
        }
        Ok(Self { frame, coords })
    }

    pub fn from_blocks(frame: Frame, blocks: &[[f64; 2]]) -> Result<Self> {
        Self::new(frame, blocks.iter().flatten().copied().collect())
    }

    pub fn oscillators(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn block(&self, i: usize) -> [f64; 2] {
        [self.coords[2 * i], self.coords[2 * i + 1]]
    }
}

/// Network, frequency and output row of one oscillator array.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub net: Interconnection,
    pub omega: f64,
    pub output_row: [f64; 2],
}

impl SystemSpec {
    pub fn new(net: Interconnection, omega: f64) -> Self {
        Self {
            net,
            omega,
            output_row: [0.0, 1.0],
        }
    }

    pub fn with_output_row(mut self, h: [f64; 2]) -> Self {
        self.output_row = h;
        self
    }

    /// `|H|`, the amplitude of the swept projection.
    pub fn amplitude(&self) -> f64 {
        self.output_row[0].hypot(self.output_row[1])
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::validation("omega", "must be positive and finite"));
        }
        if !(self.amplitude() > 0.0 && self.amplitude().is_finite()) {
            return Err(Error::validation("h", "output row must be nonzero"));
        }
        Ok(())
    }
}

/// `e^{S(ω)t}` as a row-major 2×2 matrix.
pub fn rotation(omega: f64, t: f64) -> [[f64; 2]; 2] {
    let (s, c) = (omega * t).sin_cos();
    [[c, s], [-s, c]]
}

fn apply_blockwise(m: [[f64; 2]; 2], coords: &[f64]) -> Vec<f64> {
    coords
        .chunks_exact(2)
        .flat_map(|b| {
            [
                m[0][0] * b[0] + m[0][1] * b[1],
                m[1][0] * b[0] + m[1][1] * b[1],
            ]
        })
        .collect()
}

/// `x_i = e^{−S(ω)t} ξ_i`
pub fn to_rotating_frame(state: &ArrayState, t: f64, omega: f64) -> Result<ArrayState> {
    if state.frame != Frame::Original {
        return Err(Error::usage(
            "to_rotating_frame expects an original-frame state",
        ));
    }
    let r = rotation(omega, t);
    let inverse = [[r[0][0], r[1][0]], [r[0][1], r[1][1]]];
    ArrayState::new(Frame::Rotating, apply_blockwise(inverse, &state.coords))
}

/// `ξ_i = e^{S(ω)t} x_i`
pub fn from_rotating_frame(state: &ArrayState, t: f64, omega: f64) -> Result<ArrayState> {
    if state.frame != Frame::Rotating {
        return Err(Error::usage(
            "from_rotating_frame expects a rotating-frame state",
        ));
    }
    ArrayState::new(
        Frame::Original,
        apply_blockwise(rotation(omega, t), &state.coords),
    )
}

/// A vector field on the flat `2p` state.
pub trait VectorField: Sync {
    fn frame(&self) -> Frame;

    /// Rotation frequency that the integrator step must resolve, if any.
    fn omega(&self) -> Option<f64>;

    fn output_row(&self) -> [f64; 2] {
        [0.0, 1.0]
    }

    fn eval_into(&self, t: f64, y: &[f64], out: &mut [f64]);

    fn eval(&self, t: f64, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; y.len()];
        self.eval_into(t, y, &mut out);
        out
    }
}

type EdgeList = Vec<(usize, usize, CouplingFunction)>;

fn edge_list(net: &Interconnection) -> EdgeList {
    net.edges().map(|(i, j, f)| (i, j, *f)).collect()
}

/// Adds `rowᵀ γ_ij(row · (y_j − y_i))` to every listening oscillator.
#[inline]
fn add_projected_coupling(edges: &EdgeList, row: [f64; 2], y: &[f64], out: &mut [f64]) {
    for (i, j, f) in edges {
        let s = row[0] * (y[2 * j] - y[2 * i]) + row[1] * (y[2 * j + 1] - y[2 * i + 1]);
        let g = f.eval(s);
        out[2 * i] += row[0] * g;
        out[2 * i + 1] += row[1] * g;
    }
}

#[derive(Debug, Clone)]
pub struct OriginalField {
    omega: f64,
    row: [f64; 2],
    edges: EdgeList,
}

impl OriginalField {
    pub fn new(spec: &SystemSpec) -> Self {
        Self {
            omega: spec.omega,
            row: spec.output_row,
            edges: edge_list(&spec.net),
        }
    }
}

impl VectorField for OriginalField {
    fn frame(&self) -> Frame {
        Frame::Original
    }

    fn omega(&self) -> Option<f64> {
        Some(self.omega)
    }

    fn output_row(&self) -> [f64; 2] {
        self.row
    }

    fn eval_into(&self, _t: f64, y: &[f64], out: &mut [f64]) {
        for (d, b) in out.chunks_exact_mut(2).zip(y.chunks_exact(2)) {
            d[0] = self.omega * b[1];
            d[1] = -self.omega * b[0];
        }
        add_projected_coupling(&self.edges, self.row, y, out);
    }
}

#[derive(Debug, Clone)]
pub struct RotatingField {
    omega: f64,
    row: [f64; 2],
    edges: EdgeList,
}

impl RotatingField {
    pub fn new(spec: &SystemSpec) -> Self {
        Self {
            omega: spec.omega,
            row: spec.output_row,
            edges: edge_list(&spec.net),
        }
    }

    /// `H e^{S(ω)t}`; equals `[−sin ωt, cos ωt]` for `H = [0, 1]`.
    pub fn swept_row(&self, t: f64) -> [f64; 2] {
        let r = rotation(self.omega, t);
        [
            self.row[0] * r[0][0] + self.row[1] * r[1][0],
            self.row[0] * r[0][1] + self.row[1] * r[1][1],
        ]
    }
}

impl VectorField for RotatingField {
    fn frame(&self) -> Frame {
        Frame::Rotating
    }

    fn omega(&self) -> Option<f64> {
        Some(self.omega)
    }

    fn output_row(&self) -> [f64; 2] {
        self.row
    }

    fn eval_into(&self, t: f64, y: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        add_projected_coupling(&self.edges, self.swept_row(t), y, out);
    }
}

impl VectorField for AveragedField {
    fn frame(&self) -> Frame {
        Frame::Averaged
    }

    fn omega(&self) -> Option<f64> {
        None
    }

    fn eval_into(&self, _t: f64, y: &[f64], out: &mut [f64]) {
        AveragedField::eval_into(self, y, out)
    }
}

fn check_frame(state: &ArrayState, want: Frame) -> Result<()> {
    if state.frame == want {
        Ok(())
    } else {
        Err(Error::usage(format!(
            "expected a {want:?} state, got {:?}",
            state.frame
        )))
    }
}

pub fn original_field(state: &ArrayState, t: f64, spec: &SystemSpec) -> Result<Vec<f64>> {
    check_frame(state, Frame::Original)?;
    Ok(OriginalField::new(spec).eval(t, &state.coords))
}

pub fn rotating_field(state: &ArrayState, t: f64, spec: &SystemSpec) -> Result<Vec<f64>> {
    check_frame(state, Frame::Rotating)?;
    Ok(RotatingField::new(spec).eval(t, &state.coords))
}

pub fn averaged_field(state: &ArrayState, field: &AveragedField) -> Result<Vec<f64>> {
    check_frame(state, Frame::Averaged)?;
    Ok(field.eval(&state.coords))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegratorSpec {
    /// Upper bound on the step.
    pub base_step: f64,
    /// Minimum number of steps per rotation period `2π/ω`.
    pub steps_per_period: u32,
    /// Spacing of recorded samples; every step is recorded when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_interval: Option<f64>,
}

impl Default for IntegratorSpec {
    fn default() -> Self {
        Self {
            base_step: 0.01,
            steps_per_period: 400,
            sample_interval: None,
        }
    }
}

impl IntegratorSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.base_step.is_finite() && self.base_step > 0.0) {
            return Err(Error::validation(
                "integrator.base_step",
                "must be positive",
            ));
        }
        if self.steps_per_period < 20 {
            return Err(Error::validation(
                "integrator.steps_per_period",
                "must be at least 20",
            ));
        }
        if let Some(s) = self.sample_interval {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::validation(
                    "integrator.sample_interval",
                    "must be positive",
                ));
            }
        }
        Ok(())
    }

    /// `min(h₀, (2π/ω)/K)`, or `h₀` for autonomous slow fields.
    pub fn step_bound(&self, omega: Option<f64>) -> f64 {
        match omega {
            Some(w) => self.base_step.min(TAU / w / self.steps_per_period as f64),
            None => self.base_step,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub frame: Frame,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Actual RK4 step used.
    pub step: f64,
    pub omega: Option<f64>,
    pub output_row: [f64; 2],
    pub integrator: IntegratorSpec,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn oscillators(&self) -> usize {
        self.states.first().map_or(0, |s| s.len() / 2)
    }

    pub fn final_state(&self) -> Option<&[f64]> {
        self.states.last().map(Vec::as_slice)
    }

    /// Header `t,q1,p1,…` (or the rotating/averaged names) then one row per
    /// sample, 17 significant digits.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        let (a, b) = self.frame.column_names();
        let mut header = String::from("t");
        for i in 1..=self.oscillators() {
            header.push_str(&format!(",{a}{i},{b}{i}"));
        }
        writeln!(w, "{header}")?;
        for (t, s) in self.times.iter().zip(&self.states) {
            let mut line = fmt_float(*t);
            for v in s {
                line.push(',');
                line.push_str(&fmt_float(*v));
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }
}

/// Round-trip formatting with 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn rk4_step(
    field: &dyn VectorField,
    t: f64,
    h: f64,
    y: &mut [f64],
    k: &mut [Vec<f64>; 4],
    tmp: &mut [f64],
) {
    let n = y.len();
    field.eval_into(t, y, &mut k[0]);
    for m in 0..n {
        tmp[m] = y[m] + 0.5 * h * k[0][m];
    }
    field.eval_into(t + 0.5 * h, tmp, &mut k[1]);
    for m in 0..n {
        tmp[m] = y[m] + 0.5 * h * k[1][m];
    }
    field.eval_into(t + 0.5 * h, tmp, &mut k[2]);
    for m in 0..n {
        tmp[m] = y[m] + h * k[2][m];
    }
    field.eval_into(t + h, tmp, &mut k[3]);
    for m in 0..n {
        y[m] += h / 6.0 * (k[0][m] + 2.0 * k[1][m] + 2.0 * k[2][m] + k[3][m]);
    }
}

/// Classical RK4 from `t = 0` to `t_end` on a uniform grid.
///
/// With a sample interval `Δ`, the step is shortened so that an integer number
/// of steps fits in `Δ`, and samples are recorded at `kΔ`. Without one, the
/// step is shortened so that `t_end` is hit exactly and every step is kept.
pub fn integrate(
    field: &dyn VectorField,
    x0: &ArrayState,
    t_end: f64,
    spec: &IntegratorSpec,
) -> Result<Trajectory> {
    spec.validate()?;
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::usage("integration horizon must be positive"));
    }
    check_frame(x0, field.frame())?;
    let bound = spec.step_bound(field.omega());
    let (interval, substeps, samples) = match spec.sample_interval {
        Some(dt) => {
            let sub = ((dt / bound) - 1e-9).ceil().max(1.0) as usize;
            let n = ((t_end / dt) - 1e-9).ceil().max(1.0) as usize;
            (dt, sub, n)
        }
        None => {
            let n = ((t_end / bound) - 1e-9).ceil().max(1.0) as usize;
            (t_end / n as f64, 1, n)
        }
    };
    let h = interval / substeps as f64;

    let dim = x0.coords.len();
    let mut y = x0.coords.clone();
    let mut k = [
        vec![0.0; dim],
        vec![0.0; dim],
        vec![0.0; dim],
        vec![0.0; dim],
    ];
    let mut tmp = vec![0.0; dim];
    let mut times = Vec::with_capacity(samples + 1);
    let mut states = Vec::with_capacity(samples + 1);
    times.push(0.0);
    states.push(y.clone());

    for sample in 0..samples {
        let t0 = interval * sample as f64;
        for sub in 0..substeps {
            let t = t0 + h * sub as f64;
            rk4_step(field, t, h, &mut y, &mut k, &mut tmp);
            if y.iter().any(|v| !v.is_finite()) {
                return Err(Error::BlowUp { time: t + h });
            }
        }
        times.push(interval * (sample + 1) as f64);
        states.push(y.clone());
    }

    Ok(Trajectory {
        frame: field.frame(),
        times,
        states,
        step: h,
        omega: field.omega(),
        output_row: field.output_row(),
        integrator: *spec,
    })
}

/// Maps a rotating-frame trajectory back to original coordinates sample by
/// sample.
pub fn rotating_to_original(traj: &Trajectory) -> Result<Trajectory> {
    let omega = match (traj.frame, traj.omega) {
        (Frame::Rotating, Some(w)) => w,
        _ => return Err(Error::usage("expected a rotating-frame trajectory")),
    };
    let states = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(t, s)| apply_blockwise(rotation(omega, *t), s))
        .collect();
    Ok(Trajectory {
        frame: Frame::Original,
        states,
        ..traj.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::averaging::build_averaged_field;
    use crate::quadrature::QuadratureSpec;

    fn lin(g: f64) -> CouplingFunction {
        CouplingFunction::Linear { gain: g }
    }

    #[test]
    fn uncoupled_rotation_derivative() {
        let spec = SystemSpec::new(Interconnection::new(1).unwrap(), 3.0);
        let s = ArrayState::new(Frame::Original, vec![1.0, 0.0]).unwrap();
        assert_eq!(original_field(&s, 0.0, &spec).unwrap(), vec![0.0, -3.0]);
    }

    #[test]
    fn one_way_pair_derivative() {
        let net = Interconnection::from_edges(2, [(0, 1, lin(1.0))]).unwrap();
        let spec = SystemSpec::new(net, 1.0);
        let s = ArrayState::from_blocks(Frame::Original, &[[0.0, 0.0], [0.0, 2.0]]).unwrap();
        assert_eq!(
            original_field(&s, 0.0, &spec).unwrap(),
            vec![0.0, 2.0, 2.0, 0.0]
        );
    }

    #[test]
    fn horizontal_row_couples_positions() {
        let net = Interconnection::from_edges(2, [(0, 1, lin(1.0))]).unwrap();
        let spec = SystemSpec::new(net, 1.0).with_output_row([1.0, 0.0]);
        let s = ArrayState::from_blocks(Frame::Original, &[[0.0, 0.0], [3.0, 0.0]]).unwrap();
        // q̇₁ = ω p₁ + γ(q₂ − q₁), ṗ₁ = −ω q₁
        assert_eq!(
            original_field(&s, 0.0, &spec).unwrap(),
            vec![3.0, 0.0, 0.0, -3.0]
        );
    }

    #[test]
    fn manifold_states_have_no_coupling() {
        let net = Interconnection::example_c(CouplingFunction::Saturation {
            gain: 2.0,
            level: 2.0,
        });
        let spec = SystemSpec::new(net, 2.0);
        let blocks = [[0.7, -0.3]; 4];
        let s = ArrayState::from_blocks(Frame::Original, &blocks).unwrap();
        let d = original_field(&s, 0.0, &spec).unwrap();
        for b in d.chunks(2) {
            assert_eq!(b, &[2.0 * -0.3, -2.0 * 0.7]);
        }
        let r = ArrayState::from_blocks(Frame::Rotating, &blocks).unwrap();
        assert_eq!(rotating_field(&r, 0.37, &spec).unwrap(), vec![0.0; 8]);
    }

    #[test]
    fn rotating_row_at_zero() {
        let spec = SystemSpec::new(Interconnection::new(2).unwrap(), 5.0);
        assert_eq!(RotatingField::new(&spec).swept_row(0.0), [0.0, 1.0]);
        let t = 0.3;
        let row = RotatingField::new(&spec).swept_row(t);
        assert!((row[0] + (5.0 * t).sin()).abs() < 1e-15);
        assert!((row[1] - (5.0 * t).cos()).abs() < 1e-15);
    }

    #[test]
    fn rotation_matches_matrix_exponential_derivative() {
        let (w, t, dt) = (1.7, 0.9, 1e-6);
        let a = rotation(w, t + dt);
        let b = rotation(w, t - dt);
        let e = rotation(w, t);
        let s = [[0.0, w], [-w, 0.0]];
        for r in 0..2 {
            for c in 0..2 {
                let fd = (a[r][c] - b[r][c]) / (2.0 * dt);
                let se = s[r][0] * e[0][c] + s[r][1] * e[1][c];
                assert!((fd - se).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn frame_change_identity_and_round_trip() {
        let s = ArrayState::from_blocks(Frame::Original, &[[1.0, 2.0], [-3.0, 0.5]]).unwrap();
        assert_eq!(to_rotating_frame(&s, 0.0, 4.0).unwrap().coords, s.coords);
        let x = to_rotating_frame(&s, 1.3, 4.0).unwrap();
        let back = from_rotating_frame(&x, 1.3, 4.0).unwrap();
        for (a, b) in back.coords.iter().zip(&s.coords) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(to_rotating_frame(&x, 0.0, 1.0).is_err());
    }

    #[test]
    fn single_period_returns_to_start() {
        let spec = SystemSpec::new(Interconnection::new(1).unwrap(), TAU);
        let x0 = ArrayState::new(Frame::Original, vec![0.3, -1.1]).unwrap();
        let norm0 = 0.3f64.hypot(1.1);
        for k in [200u32, 400] {
            let ispec = IntegratorSpec {
                base_step: 1.0,
                steps_per_period: k,
                sample_interval: None,
            };
            let traj = integrate(&OriginalField::new(&spec), &x0, 1.0, &ispec).unwrap();
            assert_eq!(traj.states[0], x0.coords);
            assert!((traj.times.last().unwrap() - 1.0).abs() < 1e-15);
            let last = traj.final_state().unwrap();
            let err = (last[0] - 0.3).hypot(last[1] + 1.1);
            // RK4 on a pure rotation lags by θ⁵/120 per step, θ = 2π/K.
            let theta = TAU / k as f64;
            let model = k as f64 * theta.powi(5) / 120.0 * norm0;
            assert!((err / model - 1.0).abs() < 0.05, "K={k}: {err} vs {model}");
            if k == 400 {
                assert!(err < 1e-8);
            }
        }
    }

    #[test]
    fn averaged_pair_gap_decays_exponentially() {
        let net = Interconnection::complete(2, lin(2.0)).unwrap();
        let field = build_averaged_field(&net, &QuadratureSpec::default(), 1.0).unwrap();
        let x0 = ArrayState::from_blocks(Frame::Averaged, &[[0.0, 0.0], [2.0, 0.0]]).unwrap();
        let ispec = IntegratorSpec {
            base_step: 0.01,
            sample_interval: Some(0.5),
            ..Default::default()
        };
        let traj = integrate(&field, &x0, 5.0, &ispec).unwrap();
        let last = traj.final_state().unwrap();
        let gap = (last[2] - last[0]).hypot(last[3] - last[1]);
        assert!((gap - 2.0 * (-10.0f64).exp()).abs() < 1e-6);
        assert!((last[0] - 1.0).abs() < 1e-3 && (last[2] - 1.0).abs() < 1e-3);
        assert_eq!(traj.len(), 11);
    }

    #[test]
    fn step_rule_honours_period() {
        let ispec = IntegratorSpec {
            base_step: 0.1,
            steps_per_period: 50,
            sample_interval: None,
        };
        assert_eq!(ispec.step_bound(None), 0.1);
        assert!((ispec.step_bound(Some(10.0)) - TAU / 500.0).abs() < 1e-15);
        let bad = IntegratorSpec {
            steps_per_period: 10,
            ..ispec
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn blow_up_is_reported() {
        let net = Interconnection::complete(2, CouplingFunction::Cubic { gain: 1.0 }).unwrap();
        let spec = SystemSpec::new(net, 1.0);
        let x0 = ArrayState::from_blocks(Frame::Original, &[[0.0, 0.0], [0.0, 50.0]]).unwrap();
        let ispec = IntegratorSpec {
            base_step: 0.1,
            ..Default::default()
        };
        match integrate(&OriginalField::new(&spec), &x0, 10.0, &ispec) {
            Err(Error::BlowUp { time }) => assert!(time > 0.0 && time <= 10.0),
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn csv_header_and_precision() {
        let spec = SystemSpec::new(Interconnection::new(2).unwrap(), 1.0);
        let x0 = ArrayState::from_blocks(Frame::Original, &[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let ispec = IntegratorSpec {
            sample_interval: Some(0.5),
            ..Default::default()
        };
        let traj = integrate(&OriginalField::new(&spec), &x0, 1.0, &ispec).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,q1,p1,q2,p2"));
        let first: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(first, vec![0.0, 1.0, 0.0, 0.0, 1.0]);
        assert_eq!(text.lines().count(), 4);
    }
}
