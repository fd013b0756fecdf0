//! Time averages of the rotating-frame coupling.
//!
//! Over one rotation the coupling term `u(φ)·γ(u(φ)·x)` with
//! `u(φ) = [−sin φ, cos φ]` averages to a vector parallel to `x`:
//!
//! ```text
//! γ̄(x) = ρ(|x|) · x / |x|,     ρ(r) = (1/2π) ∫₀^{2π} γ(r sin φ) sin φ dφ
//! ```
//!
//! [`rho`] evaluates the radial profile, [`average_vector_oracle`] evaluates
//! the raw vector average without the radial reduction, and
//! [`AveragedField`] assembles the consensus-type field of the averaged array.
//!
//! A general output row `H` only changes the amplitude of the swept
//! projection, so the averaged field for `H` uses `|H|·ρ(|H|·r)`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::coupling::{CouplingFunction, Interconnection};
use crate::error::Result;
use crate::quadrature::{Quadrature, QuadratureSpec};

const GRADING_RATIO: f64 = 4.0;

/// Projected values in `(0, amplitude)` where the integrand should be split:
/// kinks, and a geometric grading through the transition region of a
/// saturation.
fn feature_values(f: &CouplingFunction, amplitude: f64) -> Vec<f64> {
    match *f {
        CouplingFunction::Saturation { gain, level } => {
            let scale = level / gain;
            let mut v = Vec::new();
            let mut b = scale / GRADING_RATIO;
            while b < amplitude && v.len() < 64 {
                v.push(b);
                b *= GRADING_RATIO;
            }
            v
        }
        CouplingFunction::DeadzoneLinear { deadzone, .. }
            if deadzone > 0.0 && deadzone < amplitude =>
        {
            vec![deadzone]
        }
        _ => Vec::new(),
    }
}

/// Kink locations in projected-value space.
fn kink_values(f: &CouplingFunction) -> Vec<f64> {
    match *f {
        CouplingFunction::DeadzoneLinear { deadzone, .. } if deadzone > 0.0 => vec![deadzone],
        _ => Vec::new(),
    }
}

/// Panel breakpoints for integrands of the form `g(R sin φ)`.
fn sine_breakpoints(f: &CouplingFunction, amplitude: f64) -> Vec<f64> {
    let mut bp = vec![FRAC_PI_2, PI, 3.0 * FRAC_PI_2];
    for b in feature_values(f, amplitude) {
        let psi = (b / amplitude).asin();
        bp.extend([psi, PI - psi, PI + psi, TAU - psi]);
    }
    bp
}

/// Radial profile `ρ` of one coupling, with the amplitude `|H|` folded in.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    coupling: CouplingFunction,
    amplitude: f64,
    quadrature: Quadrature,
}

impl RadialProfile {
    pub fn new(coupling: CouplingFunction, spec: QuadratureSpec, amplitude: f64) -> Result<Self> {
        Ok(Self {
            coupling,
            amplitude,
            quadrature: Quadrature::new(spec)?,
        })
    }

    pub fn coupling(&self) -> &CouplingFunction {
        &self.coupling
    }

    /// `(A/2π) ∫₀^{2π} γ(A r sin φ) sin φ dφ`
    pub fn eval(&self, r: f64) -> f64 {
        if self.coupling.is_zero() || r == 0.0 {
            return 0.0;
        }
        let big_r = self.amplitude * r;
        let bp = sine_breakpoints(&self.coupling, big_r);
        let f = &self.coupling;
        let integral = self.quadrature.integrate(&bp, |phi| {
            let s = phi.sin();
            f.eval(big_r * s) * s
        });
        self.amplitude * integral / TAU
    }
}

pub fn rho(f: &CouplingFunction, r: f64, q: &QuadratureSpec, amplitude: f64) -> Result<f64> {
    Ok(RadialProfile::new(*f, *q, amplitude)?.eval(r))
}

/// Positive lower bound on `ρ(r)` from the coupling's shipped minorant `α`.
///
/// On the two thirds of a period where `|sin φ| ≥ 1/2` the integrand is at
/// least `α(r/2)/2`, and it is nonnegative elsewhere, so
/// `ρ(r) ≥ α(r/2)/3`. `None` for the zero coupling.
pub fn rho_lower_bound(f: &CouplingFunction, r: f64) -> Option<f64> {
    f.default_minorant().map(|a| a.eval(0.5 * r) / 3.0)
}

/// `(1/2π) ∫₀^{2π} γ(r sin φ) cos φ dφ`, which vanishes for every admissible γ.
pub fn cosine_component(f: &CouplingFunction, r: f64, q: &QuadratureSpec) -> Result<f64> {
    let quad = Quadrature::new(*q)?;
    if f.is_zero() || r == 0.0 {
        return Ok(0.0);
    }
    let bp = sine_breakpoints(f, r);
    Ok(quad.integrate(&bp, |phi| f.eval(r * phi.sin()) * phi.cos()) / TAU)
}

/// Row vector `H e^{Sφ}` for `S = [[0, 1], [−1, 0]]`.
fn swept_row(h: [f64; 2], phi: f64) -> [f64; 2] {
    let (s, c) = phi.sin_cos();
    [h[0] * c - h[1] * s, h[0] * s + h[1] * c]
}

/// Panels of the direct vector average per half rotation.
const ORACLE_PANELS_PER_HALF: usize = 64;

/// Direct quadrature of `(1/2π) ∫ h(φ)ᵀ γ(h(φ)·x) dφ` with `h(φ) = H e^{Sφ}`.
///
/// Panels are anchored at the zeros of the projection `h(φ)·x`, found from
/// `x` directly, and split uniformly; kinks are located by bisection. No use
/// is made of the radial form.
pub fn average_vector_oracle_general(
    f: &CouplingFunction,
    h: [f64; 2],
    x: [f64; 2],
    q: &QuadratureSpec,
) -> Result<[f64; 2]> {
    let quad = Quadrature::new(*q)?;
    if f.is_zero() || (x[0] == 0.0 && x[1] == 0.0) {
        return Ok([0.0, 0.0]);
    }
    let proj = |phi: f64| {
        let row = swept_row(h, phi);
        row[0] * x[0] + row[1] * x[1]
    };
    // h(φ)·x = a cos φ + b sin φ
    let a = h[0] * x[0] + h[1] * x[1];
    let b = -h[1] * x[0] + h[0] * x[1];
    let zero = (-a).atan2(b);

    let mut bp = Vec::new();
    for half in 0..2 {
        let start = zero + PI * half as f64;
        for k in 0..ORACLE_PANELS_PER_HALF {
            bp.push(start + PI * k as f64 / ORACLE_PANELS_PER_HALF as f64);
        }
        let peak = start + FRAC_PI_2;
        let amp = proj(peak).abs();
        for w in kink_values(f).into_iter().filter(|w| *w < amp) {
            bp.push(bisect(|t| proj(t).abs() - w, start, peak));
            bp.push(bisect(|t| w - proj(t).abs(), peak, start + PI));
        }
    }

    let mut acc = [0.0, 0.0];
    quad.for_each_node(&bp, |phi, wt| {
        let row = swept_row(h, phi);
        let g = f.eval(row[0] * x[0] + row[1] * x[1]);
        acc[0] += wt * row[0] * g;
        acc[1] += wt * row[1] * g;
    });
    Ok([acc[0] / TAU, acc[1] / TAU])
}

/// The raw vector average for the default output row `H = [0, 1]`.
pub fn average_vector_oracle(
    f: &CouplingFunction,
    x: [f64; 2],
    q: &QuadratureSpec,
) -> Result<[f64; 2]> {
    average_vector_oracle_general(f, [0.0, 1.0], x, q)
}

/// Root of an increasing function on `[lo, hi]`.
fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The averaged array field `η̇_i = Σ_j ρ_ij(|η_j − η_i|) (η_j − η_i)/|η_j − η_i|`.
///
/// Coincident pairs contribute the zero vector.
#[derive(Debug, Clone)]
pub struct AveragedField {
    nodes: usize,
    edges: Vec<(usize, usize, RadialProfile)>,
}

impl AveragedField {
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn eval_into(&self, eta: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (i, j, profile) in &self.edges {
            let dx = eta[2 * j] - eta[2 * i];
            let dy = eta[2 * j + 1] - eta[2 * i + 1];
            let r = dx.hypot(dy);
            if r == 0.0 {
                continue;
            }
            let k = profile.eval(r) / r;
            out[2 * i] += k * dx;
            out[2 * i + 1] += k * dy;
        }
    }

    pub fn eval(&self, eta: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; eta.len()];
        self.eval_into(eta, &mut out);
        out
    }
}

pub fn build_averaged_field(
    net: &Interconnection,
    q: &QuadratureSpec,
    amplitude: f64,
) -> Result<AveragedField> {
    let edges = net
        .edges()
        .map(|(i, j, f)| Ok((i, j, RadialProfile::new(*f, *q, amplitude)?)))
        .collect::<Result<_>>()?;
    Ok(AveragedField {
        nodes: net.nodes(),
        edges,
    })
}
