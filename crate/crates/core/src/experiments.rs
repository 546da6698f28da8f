//! Named experiment recipes, parameter sweeps and convergence studies.

use rayon::prelude::*;

use crate::analysis::{
    classify_front, error_norms, exact_front, speed_summary, ErrorNorms, FrontShapeReport,
    ShapeThresholds, SpeedSeries, SpeedSummary, SpeedTracker,
};
use crate::error::{Error, Result};
use crate::model::{
    default_riemann_states, make_grid, recover_healthy, riemann_initial, FieldState, Grid1D, ModelParams,
    TimeControl, Variant,
};
use crate::schemes::{evolve, Scheme, StepObserver, StepOptions};

/// Default acid production / reabsorption rate of the full model.
pub const DEFAULT_ACID_RATE: f64 = 70.0;
/// Default fraction of the speed series averaged for the asymptotic speed.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.25;
pub const DEFAULT_SNAPSHOTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Analyses {
    pub speed: bool,
    pub shape: bool,
    pub exact: bool,
}

impl Analyses {
    pub const NONE: Analyses = Analyses {
        speed: false,
        shape: false,
        exact: false,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialProfile {
    /// Piecewise-constant data jumping from the left to the right state.
    Riemann,
    /// The exact sharp front at `t = 0` placed at `x_jump` (one-equation
    /// model and its relaxation, `0 < d < 1`); the healthy tissue starts on
    /// `u = (1 - d v)^+`.
    ExactFront,
}

impl InitialProfile {
    pub fn name(self) -> &'static str {
        match self {
            InitialProfile::Riemann => "riemann",
            InitialProfile::ExactFront => "exact",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "riemann" => Some(InitialProfile::Riemann),
            "exact" => Some(InitialProfile::ExactFront),
            _ => None,
        }
    }
}

/// Initial data. `None` end states mean "the variant's default states for
/// the current `d`", so sweeps over `d` recompute them.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub profile: InitialProfile,
    pub x_jump: f64,
    pub left: Option<Vec<f64>>,
    pub right: Option<Vec<f64>>,
}

impl InitialData {
    pub fn at(x_jump: f64) -> Self {
        Self {
            profile: InitialProfile::Riemann,
            x_jump,
            left: None,
            right: None,
        }
    }

    pub fn build(&self, params: &ModelParams, grid: &Grid1D) -> Result<FieldState> {
        let variant = params.variant;
        let (left, right) = self.states(variant, params.d);
        let mut state = riemann_initial(variant, grid, &left, &right, self.x_jump)?;
        if self.profile == InitialProfile::ExactFront {
            if !matches!(variant, Variant::OneEq | Variant::EpsilonSystem)
                || !(params.d > 0.0 && params.d < 1.0)
            {
                return Err(Error::UnsupportedAnalysis {
                    analysis: "exact initial profile",
                    reason: "needs the one-equation model or its relaxation with 0 < d < 1",
                });
            }
            state.v = grid
                .centers()
                .iter()
                .map(|&x| exact_front(x - self.x_jump, 0.0, params.d))
                .collect::<Result<_>>()?;
            if state.u.is_some() {
                state.u = Some(recover_healthy(&state.v, params.d));
            }
        }
        Ok(state)
    }

    pub fn states(&self, variant: Variant, d: f64) -> (Vec<f64>, Vec<f64>) {
        let (l, r) = default_riemann_states(variant, d);
        (
            self.left.clone().unwrap_or(l),
            self.right.clone().unwrap_or(r),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub params: ModelParams,
    pub x_left: f64,
    pub x_right: f64,
    pub dx: f64,
    pub dt: f64,
    pub t_final: f64,
    pub snapshots: usize,
    pub initial: InitialData,
    pub analyses: Analyses,
    pub options: StepOptions,
    pub tail_fraction: f64,
    pub thresholds: ShapeThresholds,
}

impl ExperimentSpec {
    pub fn variant(&self) -> Variant {
        self.params.variant
    }

    pub fn grid(&self) -> Result<Grid1D> {
        make_grid(self.x_left, self.x_right, self.dx)
    }

    pub fn time_control(&self) -> Result<TimeControl> {
        TimeControl::equally_spaced(self.dt, self.t_final, self.snapshots)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.grid()?;
        self.time_control()?;
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "tail_fraction",
                requirement: "in (0, 1]",
                value: self.tail_fraction,
            });
        }
        if self.analyses.exact {
            if !matches!(self.variant(), Variant::OneEq | Variant::EpsilonSystem) {
                return Err(Error::UnsupportedAnalysis {
                    analysis: "exact",
                    reason: "the exact front exists for the one-equation model and its relaxation only",
                });
            }
            if !(self.params.d > 0.0 && self.params.d < 1.0) {
                return Err(Error::UnsupportedAnalysis {
                    analysis: "exact",
                    reason: "the exact front requires 0 < d < 1",
                });
            }
        }
        Ok(())
    }
}

/// Distance between the numerical tumour density and the exact front at
/// the final time.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactComparison {
    pub x: Vec<f64>,
    pub numeric: Vec<f64>,
    pub exact: Vec<f64>,
    pub norms: ErrorNorms,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub grid: Grid1D,
    pub snapshots: Vec<FieldState>,
    pub final_state: FieldState,
    pub speed: Option<SpeedSeries>,
    pub speed_summary: Option<SpeedSummary>,
    pub shape: Option<FrontShapeReport>,
    pub exact: Option<ExactComparison>,
    pub warnings: Vec<String>,
}

impl ExperimentResult {
    pub fn asymptotic_speed(&self) -> Option<f64> {
        self.speed_summary.map(|s| s.speed)
    }
}

struct Builtin {
    name: &'static str,
    provenance: &'static str,
    build: fn() -> ExperimentSpec,
}

fn base(
    name: &str,
    params: ModelParams,
    domain: (f64, f64),
    x_jump: f64,
    dx: f64,
    dt: f64,
    analyses: Analyses,
) -> ExperimentSpec {
    ExperimentSpec {
        name: name.to_string(),
        params,
        x_left: domain.0,
        x_right: domain.1,
        dx,
        dt,
        t_final: 20.0,
        snapshots: DEFAULT_SNAPSHOTS,
        initial: InitialData::at(x_jump),
        analyses,
        options: StepOptions::default(),
        tail_fraction: DEFAULT_TAIL_FRACTION,
        thresholds: ShapeThresholds::default(),
    }
}

const SPEED_SHAPE: Analyses = Analyses {
    speed: true,
    shape: true,
    exact: false,
};
const ALL: Analyses = Analyses {
    speed: true,
    shape: true,
    exact: true,
};
const SPEED_EXACT: Analyses = Analyses {
    speed: true,
    shape: false,
    exact: true,
};

/// Domain used by the rescaled reductions.
pub const REDUCED_DOMAIN: (f64, f64) = (0.0, 40.0);
pub const REDUCED_JUMP: f64 = 10.0;

const BUILTINS: &[Builtin] = &[
    Builtin {
        name: "full_homogeneous",
        provenance: "full model, d=12.5, r=1, D=4e-5, dx=dt=0.005, T=20",
        build: || {
            base(
                "full_homogeneous",
                ModelParams::full(12.5, 1.0, 4e-5, DEFAULT_ACID_RATE),
                (-1.0, 1.0),
                -0.5,
                0.005,
                0.005,
                SPEED_SHAPE,
            )
        },
    },
    Builtin {
        name: "twoeq_heterogeneous",
        provenance: "two-equation model, d=0.5, r=1, dx=dt=0.005, T=20",
        build: || {
            base(
                "twoeq_heterogeneous",
                ModelParams::two_eq(0.5, 1.0),
                REDUCED_DOMAIN,
                REDUCED_JUMP,
                0.005,
                0.005,
                SPEED_SHAPE,
            )
        },
    },
    Builtin {
        name: "twoeq_homogeneous",
        provenance: "two-equation model, d=2, r=1, dx=dt=0.005, T=20",
        build: || {
            base(
                "twoeq_homogeneous",
                ModelParams::two_eq(2.0, 1.0),
                REDUCED_DOMAIN,
                REDUCED_JUMP,
                0.005,
                0.005,
                SPEED_SHAPE,
            )
        },
    },
    Builtin {
        name: "oneeq_heterogeneous",
        provenance: "one-equation model, d=0.5, dx=0.05, dt=0.001, T=20",
        build: || {
            base(
                "oneeq_heterogeneous",
                ModelParams::one_eq(0.5),
                REDUCED_DOMAIN,
                REDUCED_JUMP,
                0.05,
                0.001,
                ALL,
            )
        },
    },
    Builtin {
        name: "oneeq_homogeneous",
        provenance: "one-equation model, d=2, dx=0.05, dt=0.001, T=20",
        build: || {
            base(
                "oneeq_homogeneous",
                ModelParams::one_eq(2.0),
                REDUCED_DOMAIN,
                REDUCED_JUMP,
                0.05,
                0.001,
                SPEED_SHAPE,
            )
        },
    },
    Builtin {
        name: "oneeq_refined",
        provenance: "one-equation model, d=0.5, refined mesh dx=0.01, dt=0.0001, T=20",
        build: || {
            base(
                "oneeq_refined",
                ModelParams::one_eq(0.5),
                REDUCED_DOMAIN,
                REDUCED_JUMP,
                0.01,
                0.0001,
                SPEED_EXACT,
            )
        },
    },
    Builtin {
        name: "epsilon_heterogeneous",
        provenance: "relaxed two-equation system, d=0.5, eps=0.01, dx=0.05, dt=0.001, T=20",
        build: || {
            base(
                "epsilon_heterogeneous",
                ModelParams::epsilon(0.5, 0.01),
                REDUCED_DOMAIN,
                REDUCED_JUMP,
                0.05,
                0.001,
                SPEED_EXACT,
            )
        },
    },
];

/// `(name, provenance)` of every builtin experiment.
pub fn builtin_names() -> Vec<(&'static str, &'static str)> {
    BUILTINS.iter().map(|b| (b.name, b.provenance)).collect()
}

pub fn builtin(name: &str) -> Result<ExperimentSpec> {
    BUILTINS
        .iter()
        .find(|b| b.name == name)
        .map(|b| (b.build)())
        .ok_or_else(|| Error::UnknownExperiment(name.to_string()))
}

/// Builds the initial data, evolves it and attaches the requested analyses.
pub fn run(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    run_inner(spec).map_err(|e| e.in_experiment(&spec.name))
}

fn run_inner(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.params.validate()?;
    let grid = spec.grid()?;
    let variant = spec.variant();
    let (left, right) = spec.initial.states(variant, spec.params.d);
    let initial = spec.initial.build(&spec.params, &grid)?;
    let scheme = Scheme::new(spec.params, grid, spec.dt, spec.options)?;
    // The stability guard fires before time-control validation so that an
    // oversized step is reported as a numerical failure.
    scheme.precheck(&initial)?;
    spec.validate()?;
    let time = spec.time_control()?;

    let mut tracker = if spec.analyses.speed {
        let (v_left, v_right) = tumour_limits(variant, &left, &right);
        Some(SpeedTracker::new(grid.dx(), spec.dt, v_right - v_left)?)
    } else {
        None
    };
    let evolution = {
        let mut observers: Vec<&mut dyn StepObserver> = Vec::new();
        if let Some(t) = tracker.as_mut() {
            observers.push(t);
        }
        evolve(initial, &scheme, &time, &mut observers)?
    };

    let speed = tracker.map(SpeedTracker::into_series);
    let speed_summary = match &speed {
        Some(series) if !series.values.is_empty() => Some(speed_summary(series, spec.tail_fraction)?),
        _ => None,
    };

    let shape = if spec.analyses.shape && time.n_steps() > 0 {
        let snaps: Vec<&[f64]> = evolution.snapshots.iter().map(|s| s.v.as_slice()).collect();
        Some(classify_front(&snaps, &grid, &spec.thresholds)?)
    } else {
        None
    };

    let exact = if spec.analyses.exact {
        let t = evolution.final_state.t;
        let x = grid.centers();
        let exact = x
            .iter()
            .map(|&xi| exact_front(xi - spec.initial.x_jump, t, spec.params.d))
            .collect::<Result<Vec<f64>>>()?;
        let numeric = evolution.final_state.v.clone();
        let norms = error_norms(&numeric, &exact, grid.dx())?;
        Some(ExactComparison {
            x,
            numeric,
            exact,
            norms,
        })
    } else {
        None
    };

    Ok(ExperimentResult {
        spec: spec.clone(),
        grid,
        snapshots: evolution.snapshots,
        final_state: evolution.final_state,
        speed,
        speed_summary,
        shape,
        exact,
        warnings: evolution.warnings,
    })
}

/// Tumour density `(v_-, v_+)` of the Riemann end states.
fn tumour_limits(variant: Variant, left: &[f64], right: &[f64]) -> (f64, f64) {
    let k = if variant == Variant::OneEq { 0 } else { 1 };
    (left[k], right[k])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    R,
    D,
    Epsilon,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::R => "r",
            SweepParameter::D => "d",
            SweepParameter::Epsilon => "epsilon",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "r" => Some(SweepParameter::R),
            "d" => Some(SweepParameter::D),
            "epsilon" => Some(SweepParameter::Epsilon),
            _ => None,
        }
    }

    fn apply(self, spec: &ExperimentSpec, value: f64) -> ExperimentSpec {
        let mut s = spec.clone();
        match self {
            SweepParameter::R => s.params.r = value,
            SweepParameter::D => s.params.d = value,
            SweepParameter::Epsilon => s.params.epsilon = Some(value),
        }
        s.name = format!("{}[{}={}]", spec.name, self.name(), value);
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: ExperimentSpec,
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::InvalidSweep("no values".into()));
        }
        let increasing = self.values.windows(2).all(|w| w[1] > w[0]);
        let decreasing = self.values.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(Error::InvalidSweep("values must be strictly monotone".into()));
        }
        for &v in &self.values {
            self.parameter.apply(&self.base, v).params.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    /// Asymptotic speed, or the error message of a failed run.
    pub speed: std::result::Result<f64, String>,
}

/// Runs the base experiment once per value, in parallel, and returns the
/// asymptotic speeds in the order of `values`.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut base = spec.base.clone();
    base.analyses = Analyses {
        speed: true,
        ..Analyses::NONE
    };
    base.snapshots = 1;
    let rows: Vec<SweepRow> = spec
        .values
        .par_iter()
        .map(|&value| {
            let s = spec.parameter.apply(&base, value);
            let speed = run(&s)
                .and_then(|r| r.asymptotic_speed().ok_or(Error::EmptySeries))
                .map_err(|e| e.to_string());
            SweepRow { value, speed }
        })
        .collect();
    if rows.iter().all(|r| r.speed.is_err()) {
        return Err(Error::AllRunsFailed(rows.len()));
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonRow {
    pub epsilon: f64,
    pub speed: f64,
    pub l_inf: f64,
}

/// Relaxed-system speeds and final-time distance to the exact front for
/// each `eps` in `values`.
pub fn epsilon_transition(values: &[f64], base: &ExperimentSpec) -> Result<Vec<EpsilonRow>> {
    if base.variant() != Variant::EpsilonSystem {
        return Err(Error::InvalidSweep(
            "epsilon transition needs an epsilon-system base experiment".into(),
        ));
    }
    if !(base.params.d > 0.0 && base.params.d < 1.0) {
        return Err(Error::UnsupportedAnalysis {
            analysis: "exact",
            reason: "the exact front requires 0 < d < 1",
        });
    }
    let sweep = SweepSpec {
        base: base.clone(),
        parameter: SweepParameter::Epsilon,
        values: values.to_vec(),
    };
    sweep.validate()?;
    let mut spec = base.clone();
    spec.analyses = SPEED_EXACT;
    spec.snapshots = 1;
    let rows: Vec<Result<EpsilonRow>> = values
        .par_iter()
        .map(|&eps| {
            let s = SweepParameter::Epsilon.apply(&spec, eps);
            let r = run(&s)?;
            Ok(EpsilonRow {
                epsilon: eps,
                speed: r.asymptotic_speed().ok_or(Error::EmptySeries)?,
                l_inf: r.exact.as_ref().map(|e| e.norms.l_inf).ok_or(Error::EmptySeries)?,
            })
        })
        .collect();
    rows.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineRow {
    pub dx: f64,
    pub dt: f64,
    pub speed: f64,
    pub l_inf: f64,
    pub l2: f64,
}

/// Runs the one-equation model on each `(dx, dt)` mesh and compares the
/// final state with the exact front.
///
/// Runs start from the exact profile, so the final-time error measures the
/// discretization only. From Riemann data every mesh carries the same
/// start-up shift of the front, which does not shrink under refinement.
pub fn refinement_study(d: f64, meshes: &[(f64, f64)]) -> Result<Vec<RefineRow>> {
    let mut template = builtin("oneeq_heterogeneous")?;
    template.params = ModelParams::one_eq(d);
    template.initial.profile = InitialProfile::ExactFront;
    refinement_study_with(&template, meshes)
}

/// [`refinement_study`] on an arbitrary one-equation template.
pub fn refinement_study_with(template: &ExperimentSpec, meshes: &[(f64, f64)]) -> Result<Vec<RefineRow>> {
    if template.variant() != Variant::OneEq {
        return Err(Error::InvalidSweep("refinement study runs the one-equation model".into()));
    }
    if meshes.is_empty() {
        return Err(Error::InvalidSweep("no meshes".into()));
    }
    let mut spec = template.clone();
    spec.analyses = SPEED_EXACT;
    spec.snapshots = 1;
    meshes
        .par_iter()
        .map(|&(dx, dt)| {
            let mut s = spec.clone();
            s.dx = dx;
            s.dt = dt;
            s.name = format!("{}[dx={dx},dt={dt}]", spec.name);
            let r = run(&s)?;
            let norms = r.exact.as_ref().map(|e| e.norms).ok_or(Error::EmptySeries)?;
            Ok(RefineRow {
                dx,
                dt,
                speed: r.asymptotic_speed().ok_or(Error::EmptySeries)?,
                l_inf: norms.l_inf,
                l2: norms.l2,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_mirror_the_parameter_tables() {
        let full = builtin("full_homogeneous").unwrap();
        assert_eq!(full.params, ModelParams::full(12.5, 1.0, 4e-5, DEFAULT_ACID_RATE));
        assert_eq!((full.x_left, full.x_right), (-1.0, 1.0));
        assert_eq!((full.dx, full.dt, full.t_final), (0.005, 0.005, 20.0));
        assert_eq!(full.time_control().unwrap().n_steps(), 4000);

        for (name, d) in [("twoeq_heterogeneous", 0.5), ("twoeq_homogeneous", 2.0)] {
            let s = builtin(name).unwrap();
            assert_eq!(s.params, ModelParams::two_eq(d, 1.0));
            assert_eq!((s.dx, s.dt, s.t_final), (0.005, 0.005, 20.0));
        }
        for (name, d) in [("oneeq_heterogeneous", 0.5), ("oneeq_homogeneous", 2.0)] {
            let s = builtin(name).unwrap();
            assert_eq!(s.params, ModelParams::one_eq(d));
            assert_eq!((s.dx, s.dt, s.t_final), (0.05, 0.001, 20.0));
        }
        let refined = builtin("oneeq_refined").unwrap();
        assert_eq!((refined.dx, refined.dt), (0.01, 0.0001));
        for (name, _) in builtin_names() {
            builtin(name).unwrap().validate().unwrap();
        }
        assert_eq!(builtin("nope"), Err(Error::UnknownExperiment("nope".into())));
    }

    #[test]
    fn zero_duration_run() {
        let mut s = builtin("oneeq_heterogeneous").unwrap();
        s.t_final = 0.0;
        let r = run(&s).unwrap();
        assert_eq!(r.snapshots.len(), 1);
        assert_eq!(r.snapshots[0].t, 0.0);
        assert!(r.speed.unwrap().values.is_empty());
        assert!(r.speed_summary.is_none());
    }

    #[test]
    fn exact_compare_needs_heterogeneous_one_eq() {
        let mut s = builtin("twoeq_heterogeneous").unwrap();
        s.analyses.exact = true;
        assert!(matches!(
            run(&s).unwrap_err().root(),
            Error::UnsupportedAnalysis { .. }
        ));
        let mut s = builtin("oneeq_homogeneous").unwrap();
        s.analyses.exact = true;
        assert!(s.validate().is_err());
    }

    #[test]
    fn sweep_validation() {
        let base = builtin("twoeq_homogeneous").unwrap();
        let bad = SweepSpec {
            base: base.clone(),
            parameter: SweepParameter::R,
            values: vec![1.0, 3.0, 2.0],
        };
        assert!(matches!(sweep(&bad), Err(Error::InvalidSweep(_))));
        let eps_on_two_eq = SweepSpec {
            base,
            parameter: SweepParameter::Epsilon,
            values: vec![0.1],
        };
        assert!(sweep(&eps_on_two_eq).is_err());
    }

    #[test]
    fn sweep_over_d_recomputes_left_state() {
        let spec = builtin("twoeq_homogeneous").unwrap();
        let s = SweepParameter::D.apply(&spec, 0.25);
        assert_eq!(s.initial.states(Variant::TwoEq, s.params.d).0, vec![0.75, 1.0]);
    }
}
