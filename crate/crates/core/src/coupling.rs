//! Scalar coupling nonlinearities and the interconnection that wires them.
//!
//! An admissible coupling `γ` satisfies the sector condition `γ(0) = 0`,
//! `s·γ(s) ≥ 0`, and is either identically zero or bounded below in
//! magnitude by a class-K function `α(|s|)`. The catalog below only contains
//! shapes that meet both conditions for valid parameters; the grid validators
//! exist to catch bad parameters and to document the conditions executably.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of points in the default validation grids.
pub const DEFAULT_GRID_POINTS: usize = 10_001;
/// Half-width of the default sector grid and upper end of the minorant grid.
pub const DEFAULT_GRID_EXTENT: f64 = 100.0;

/// A catalog coupling function `γ: R → R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CouplingFunction {
    Zero,
    /// `gain · s`
    Linear {
        gain: f64,
    },
    /// `gain · s³`
    Cubic {
        gain: f64,
    },
    /// `level · tanh(gain · s / level)`: slope `gain` at the origin, bounded by `level`.
    Saturation {
        gain: f64,
        level: f64,
    },
    /// `slope · s + gain · sign(s) · max(|s| − deadzone, 0)`.
    ///
    /// The `slope` term keeps the function strictly sector-bounded inside the
    /// deadzone, so it is never zero on an interval.
    DeadzoneLinear {
        gain: f64,
        deadzone: f64,
        slope: f64,
    },
}

impl CouplingFunction {
    #[inline]
    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            CouplingFunction::Zero => 0.0,
            CouplingFunction::Linear { gain } => gain * s,
            CouplingFunction::Cubic { gain } => gain * s * s * s,
            CouplingFunction::Saturation { gain, level } => level * (gain * s / level).tanh(),
            CouplingFunction::DeadzoneLinear {
                gain,
                deadzone,
                slope,
            } => {
                let excess = (s.abs() - deadzone).max(0.0);
                slope * s + gain * excess.copysign(s)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CouplingFunction::Zero)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            CouplingFunction::Zero => "zero",
            CouplingFunction::Linear { .. } => "linear",
            CouplingFunction::Cubic { .. } => "cubic",
            CouplingFunction::Saturation { .. } => "saturation",
            CouplingFunction::DeadzoneLinear { .. } => "deadzone_linear",
        }
    }

    /// Checks the parameter ranges that make the catalog shape admissible.
    pub fn check_params(&self) -> Result<()> {
        fn positive(name: &str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::validation(
                    name,
                    format!("must be positive and finite, got {v}"),
                ))
            }
        }
        match *self {
            CouplingFunction::Zero => Ok(()),
            CouplingFunction::Linear { gain } | CouplingFunction::Cubic { gain } => {
                positive("gain", gain)
            }
            CouplingFunction::Saturation { gain, level } => {
                positive("gain", gain)?;
                positive("level", level)
            }
            CouplingFunction::DeadzoneLinear {
                gain,
                deadzone,
                slope,
            } => {
                positive("gain", gain)?;
                positive("slope", slope)?;
                if deadzone.is_finite() && deadzone >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::validation(
                        "deadzone",
                        format!("must be nonnegative and finite, got {deadzone}"),
                    ))
                }
            }
        }
    }

    /// Local Lipschitz constant on `[-radius, radius]`.
    pub fn lipschitz_bound(&self, radius: f64) -> f64 {
        match *self {
            CouplingFunction::Zero => 0.0,
            CouplingFunction::Linear { gain } => gain,
            CouplingFunction::Cubic { gain } => 3.0 * gain * radius * radius,
            CouplingFunction::Saturation { gain, .. } => gain,
            CouplingFunction::DeadzoneLinear { gain, slope, .. } => gain + slope,
        }
    }

    /// The class-K lower bound shipped with each non-zero member.
    pub fn default_minorant(&self) -> Option<ClassKMinorant> {
        match *self {
            CouplingFunction::Zero => None,
            CouplingFunction::Linear { gain } => Some(ClassKMinorant::Linear { c: gain }),
            CouplingFunction::Cubic { gain } => Some(ClassKMinorant::Power {
                c: 0.5 * gain,
                k: 3.0,
            }),
            CouplingFunction::Saturation { gain, level } => Some(ClassKMinorant::SaturatedLinear {
                c: 0.5 * gain,
                cap: 0.5 * level,
            }),
            CouplingFunction::DeadzoneLinear { slope, .. } => {
                Some(ClassKMinorant::Linear { c: slope })
            }
        }
    }
}

/// Parametric lower bounds `α` used to certify the minorant condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ClassKMinorant {
    /// `c · s`
    Linear { c: f64 },
    /// `min(c · s, cap)`.
    ///
    /// Flat beyond `cap / c`, so not itself strictly increasing; it dominates
    /// the class-K function `c·cap·s / (cap + c·s)`, which is what
    /// [`ClassKMinorant::class_k_companion`] evaluates.
    SaturatedLinear { c: f64, cap: f64 },
    /// `c · s^k`
    Power { c: f64, k: f64 },
}

impl ClassKMinorant {
    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            ClassKMinorant::Linear { c } => c * s,
            ClassKMinorant::SaturatedLinear { c, cap } => (c * s).min(cap),
            ClassKMinorant::Power { c, k } => c * s.powf(k),
        }
    }

    /// A strictly increasing function bounded above by [`Self::eval`].
    pub fn class_k_companion(&self, s: f64) -> f64 {
        match *self {
            ClassKMinorant::SaturatedLinear { c, cap } => c * cap * s / (cap + c * s),
            _ => self.eval(s),
        }
    }

    /// Checks `α(0) = 0` and strict monotonicity of the class-K companion on a
    /// nonnegative grid.
    pub fn check_class_k(&self, grid: &[f64]) -> Result<()> {
        if self.eval(0.0) != 0.0 {
            return Err(Error::validation("minorant", "α(0) ≠ 0"));
        }
        let mut sorted: Vec<f64> = grid.iter().copied().filter(|s| *s >= 0.0).collect();
        sorted.sort_by(|a, b| a.total_cmp(b));
        sorted.dedup();
        for w in sorted.windows(2) {
            let (lo, hi) = (self.class_k_companion(w[0]), self.class_k_companion(w[1]));
            if hi <= lo {
                return Err(Error::validation(
                    "minorant",
                    format!("not strictly increasing between {} and {}", w[0], w[1]),
                ));
            }
            if self.class_k_companion(w[1]) > self.eval(w[1]) {
                return Err(Error::validation("minorant", "companion exceeds α"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub s: f64,
    pub value: f64,
}

/// Outcome of a grid-based condition check. An empty violation list is a pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let step = (b - a) / (n - 1) as f64;
            (0..n).map(|k| a + step * k as f64).collect()
        }
    }
}

pub fn default_sector_grid() -> Vec<f64> {
    uniform_grid(
        -DEFAULT_GRID_EXTENT,
        DEFAULT_GRID_EXTENT,
        DEFAULT_GRID_POINTS,
    )
}

pub fn default_minorant_grid() -> Vec<f64> {
    uniform_grid(0.0, DEFAULT_GRID_EXTENT, DEFAULT_GRID_POINTS)
}

/// Sector condition on an arbitrary scalar map: `γ(0) = 0` and `s·γ(s) ≥ 0`.
pub fn validate_sector_fn(eval: impl Fn(f64) -> f64, grid: &[f64]) -> Result<ValidationReport> {
    if grid.is_empty() {
        return Err(Error::usage("sector validation needs a nonempty grid"));
    }
    let violations = grid
        .iter()
        .filter_map(|&s| {
            let value = eval(s);
            let bad = if s == 0.0 {
                value != 0.0
            } else {
                !(s * value >= 0.0)
            };
            bad.then_some(Violation { s, value })
        })
        .collect();
    Ok(ValidationReport {
        checked: grid.len(),
        violations,
    })
}

pub fn validate_sector(f: &CouplingFunction, grid: &[f64]) -> Result<ValidationReport> {
    validate_sector_fn(|s| f.eval(s), grid)
}

/// Minorant condition `|γ(s)| ≥ α(|s|)` on a grid. Zero couplings take the
/// other branch of the condition and are rejected here.
pub fn validate_minorant(
    f: &CouplingFunction,
    alpha: &ClassKMinorant,
    grid: &[f64],
) -> Result<ValidationReport> {
    if f.is_zero() {
        return Err(Error::usage(
            "zero coupling satisfies the minorant condition trivially; nothing to certify",
        ));
    }
    if grid.is_empty() {
        return Err(Error::usage("minorant validation needs a nonempty grid"));
    }
    let violations = grid
        .iter()
        .filter_map(|&s| {
            let value = f.eval(s).abs();
            (value < alpha.eval(s.abs())).then_some(Violation { s, value })
        })
        .collect();
    Ok(ValidationReport {
        checked: grid.len(),
        violations,
    })
}

/// Full admissibility check for one coupling: parameters, sector condition and
/// its shipped minorant, all on the default grids.
pub fn validate_coupling(f: &CouplingFunction) -> Result<()> {
    f.check_params()?;
    let sector = validate_sector(f, &default_sector_grid())?;
    if let Some(v) = sector.violations.first() {
        return Err(Error::validation(
            f.kind_name(),
            format!("sector condition fails at s = {} (γ = {})", v.s, v.value),
        ));
    }
    if let Some(alpha) = f.default_minorant() {
        let grid = default_minorant_grid();
        alpha.check_class_k(&grid)?;
        let report = validate_minorant(f, &alpha, &grid)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::validation(
                f.kind_name(),
                format!("minorant condition fails at s = {}", v.s),
            ));
        }
    }
    Ok(())
}

/// `p × p` grid of couplings; entry `(i, j)` drives oscillator `i` with the
/// projected difference `x_j − x_i`. Diagonal entries are always zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Interconnection {
    nodes: usize,
    entries: Vec<CouplingFunction>,
}

impl Interconnection {
    /// An all-zero interconnection on `nodes` oscillators.
    pub fn new(nodes: usize) -> Result<Self> {
        if nodes == 0 {
            return Err(Error::usage("an interconnection needs at least one node"));
        }
        Ok(Self {
            nodes,
            entries: vec![CouplingFunction::Zero; nodes * nodes],
        })
    }

    /// Builds from `(i, j, γ_ij)` triples with 0-based indices.
    pub fn from_edges(
        nodes: usize,
        edges: impl IntoIterator<Item = (usize, usize, CouplingFunction)>,
    ) -> Result<Self> {
        let mut net = Self::new(nodes)?;
        for (i, j, f) in edges {
            net.set(i, j, f)?;
        }
        Ok(net)
    }

    /// Every ordered pair coupled by `f`.
    pub fn complete(nodes: usize, f: CouplingFunction) -> Result<Self> {
        let pairs = (0..nodes).flat_map(|i| (0..nodes).map(move |j| (i, j)));
        Self::from_edges(nodes, pairs.filter(|(i, j)| i != j).map(|(i, j)| (i, j, f)))
    }

    /// The four-node example with couplings on `γ13, γ23, γ24, γ32` and every
    /// other entry zero. Node 4 is reachable from every other node.
    pub fn example_c(f: CouplingFunction) -> Self {
        Self::from_edges(4, [(0, 2, f), (1, 2, f), (1, 3, f), (2, 1, f)])
            .expect("static example is well formed")
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn get(&self, i: usize, j: usize) -> &CouplingFunction {
        &self.entries[i * self.nodes + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: CouplingFunction) -> Result<()> {
        if i >= self.nodes || j >= self.nodes {
            return Err(Error::usage(format!(
                "edge ({i}, {j}) out of range for {} nodes",
                self.nodes
            )));
        }
        if i == j && !f.is_zero() {
            return Err(Error::validation(
                format!("couplings[{i}][{j}]"),
                "diagonal entries must be zero",
            ));
        }
        self.entries[i * self.nodes + j] = f;
        Ok(())
    }

    /// Non-zero entries as `(i, j, γ_ij)`, row-major.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &CouplingFunction)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter_map(move |(k, f)| (!f.is_zero()).then_some((k / self.nodes, k % self.nodes, f)))
    }

    pub fn validate(&self) -> Result<()> {
        for (i, j, f) in self.edges() {
            validate_coupling(f).map_err(|e| match e {
                Error::Validation { path, message } => {
                    Error::validation(format!("couplings[{}][{}].{path}", i + 1, j + 1), message)
                }
                other => other,
            })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog() -> Vec<CouplingFunction> {
        vec![
            CouplingFunction::Linear { gain: 2.0 },
            CouplingFunction::Cubic { gain: 1.0 },
            CouplingFunction::Saturation {
                gain: 1.0,
                level: 1.0,
            },
            CouplingFunction::DeadzoneLinear {
                gain: 1.0,
                deadzone: 0.5,
                slope: 0.2,
            },
        ]
    }

    #[test]
    fn eval_examples() {
        assert_eq!(CouplingFunction::Linear { gain: 2.0 }.eval(3.0), 6.0);
        assert_eq!(CouplingFunction::Cubic { gain: 1.0 }.eval(-2.0), -8.0);
        for f in catalog().into_iter().chain([CouplingFunction::Zero]) {
            assert_eq!(f.eval(0.0), 0.0, "{f:?}");
        }
    }

    #[test]
    fn deadzone_is_flattened_not_zeroed() {
        let f = CouplingFunction::DeadzoneLinear {
            gain: 3.0,
            deadzone: 1.0,
            slope: 0.1,
        };
        assert!((f.eval(0.5) - 0.05).abs() < 1e-15);
        assert!((f.eval(-2.0) + 3.2).abs() < 1e-15);
    }

    #[test]
    fn sector_examples() {
        let lin = CouplingFunction::Linear { gain: 1.0 };
        assert!(validate_sector(&lin, &[-1.0, 0.0, 1.0]).unwrap().passed());

        let sat = CouplingFunction::Saturation {
            gain: 1.0,
            level: 1.0,
        };
        let grid = uniform_grid(-10.0, 10.0, 1001);
        assert!(validate_sector(&sat, &grid).unwrap().passed());

        let corrupted = |s: f64| if s == 1.0 { -0.5 } else { s };
        let report = validate_sector_fn(corrupted, &[-1.0, 0.0, 1.0, 2.0]).unwrap();
        assert_eq!(
            report.violations,
            vec![Violation {
                s: 1.0,
                value: -0.5
            }]
        );

        let shifted = |s: f64| s + 1e-3;
        let report = validate_sector_fn(shifted, &[0.0]).unwrap();
        assert_eq!(report.violations.len(), 1);

        assert!(matches!(validate_sector(&lin, &[]), Err(Error::Usage(_))));
    }

    #[test]
    fn minorant_examples() {
        let lin = CouplingFunction::Linear { gain: 2.0 };
        let r = validate_minorant(&lin, &ClassKMinorant::Linear { c: 1.0 }, &[0.0, 1.0, 5.0]);
        assert!(r.unwrap().passed());

        let sat = CouplingFunction::Saturation {
            gain: 1.0,
            level: 1.0,
        };
        let alpha = ClassKMinorant::SaturatedLinear { c: 0.5, cap: 0.5 };
        let grid = uniform_grid(0.0, 10.0, 1001);
        assert!(validate_minorant(&sat, &alpha, &grid).unwrap().passed());

        // tanh(2) ≈ 0.964 < 2
        let r = validate_minorant(&sat, &ClassKMinorant::Linear { c: 1.0 }, &[2.0]).unwrap();
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].s, 2.0);
        assert!((r.violations[0].value - 2.0f64.tanh()).abs() < 1e-15);

        assert!(matches!(
            validate_minorant(&CouplingFunction::Zero, &alpha, &grid),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn catalog_passes_default_grids() {
        let sector = default_sector_grid();
        let minor = default_minorant_grid();
        assert!(sector.contains(&0.0));
        for f in catalog() {
            assert!(validate_sector(&f, &sector).unwrap().passed(), "{f:?}");
            let alpha = f.default_minorant().unwrap();
            alpha.check_class_k(&minor).unwrap();
            assert!(
                validate_minorant(&f, &alpha, &minor).unwrap().passed(),
                "{f:?}"
            );
            validate_coupling(&f).unwrap();
        }
    }

    #[test]
    fn lipschitz_bounds_hold() {
        let radius = 5.0;
        let grid = uniform_grid(-radius, radius, 401);
        for f in catalog() {
            let l = f.lipschitz_bound(radius);
            for w in grid.windows(2) {
                let slope = (f.eval(w[1]) - f.eval(w[0])).abs() / (w[1] - w[0]);
                assert!(slope <= l * (1.0 + 1e-12), "{f:?} slope {slope} > {l}");
            }
        }
    }

    #[test]
    fn bad_params_rejected() {
        assert!(validate_coupling(&CouplingFunction::Linear { gain: -1.0 }).is_err());
        assert!(validate_coupling(&CouplingFunction::Saturation {
            gain: 1.0,
            level: 0.0
        })
        .is_err());
        assert!(validate_coupling(&CouplingFunction::DeadzoneLinear {
            gain: 1.0,
            deadzone: -0.1,
            slope: 1.0
        })
        .is_err());
    }

    #[test]
    fn interconnection_diagonal_and_edges() {
        let lin = CouplingFunction::Linear { gain: 1.0 };
        let mut net = Interconnection::new(3).unwrap();
        assert!(net.set(1, 1, lin).is_err());
        assert!(net.set(0, 3, lin).is_err());
        net.set(0, 1, lin).unwrap();
        assert_eq!(net.edges().count(), 1);
        assert_eq!(
            Interconnection::complete(3, lin).unwrap().edges().count(),
            6
        );

        let c = Interconnection::example_c(lin);
        let e: Vec<_> = c.edges().map(|(i, j, _)| (i + 1, j + 1)).collect();
        assert_eq!(e, vec![(1, 3), (2, 3), (2, 4), (3, 2)]);
    }

    #[test]
    fn validate_reports_field_path() {
        let mut net = Interconnection::new(2).unwrap();
        net.set(0, 1, CouplingFunction::Linear { gain: -2.0 })
            .unwrap();
        match net.validate() {
            Err(Error::Validation { path, .. }) => assert_eq!(path, "couplings[1][2].gain"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn serde_tags() {
        let f: CouplingFunction =
            serde_json::from_str(r#"{"kind":"saturation","gain":1.0,"level":1.0}"#).unwrap();
        assert_eq!(
            f,
            CouplingFunction::Saturation {
                gain: 1.0,
                level: 1.0
            }
        );
        let z: CouplingFunction = serde_json::from_str(r#"{"kind":"zero"}"#).unwrap();
        assert!(z.is_zero());
    }
}
