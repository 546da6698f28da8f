//! Time steppers for the four model variants.
//!
//! The systems use the semi-implicit scheme: reaction terms at time level
//! `n`, diffusion at level `n+1`. The healthy tissue is advanced first
//! (it has no diffusion), and the tumour diffusion matrix is then built from
//! `u^{n+1}`:
//!
//! ```text
//! u^{n+1}_i = u^n_i + dt [u^n_i (1 - u^n_i) - d u^n_i X^n_i]     X = w (full) or v
//! v^{n+1}_i - lam [a_{i+1/2}(v^{n+1}_{i+1} - v^{n+1}_i) - a_{i-1/2}(v^{n+1}_i - v^{n+1}_{i-1})]
//!     = v^n_i + r dt v^n_i (1 - v^n_i)
//! ```
//!
//! with `lam = D dt / dx^2` and `a_{i+1/2} = 1 - (u^{n+1}_i + u^{n+1}_{i+1}) / 2`.
//! Expanding the bracket gives back the interface-averaged form
//! `(1-u_i)(v_{i+1} - 2v_i + v_{i-1}) - 1/2 (v_{i+1}-v_i)(u_{i+1}-u_i)
//! - 1/2 (v_i-v_{i-1})(u_i-u_{i-1})`, so row `i` of the tridiagonal matrix is
//!
//! ```text
//! sub  = -lam a_{i-1/2},  diag = 1 + lam (a_{i-1/2} + a_{i+1/2}),  sup = -lam a_{i+1/2}
//! ```
//!
//! Boundary faces carry no flux (mirrored ghost cells), so the first and last
//! rows only have one off-diagonal term. Columns of the matrix sum to one,
//! which is what makes the diffusion exactly mass conserving.
//!
//! The one-equation model is fully explicit.

mod evolve;
mod operators;
mod tridiag;

pub use evolve::{evolve, Evolution, StepObserver};
pub use operators::{
    degenerate_flux_divergence, face_diffusivity, laplacian, one_eq_diffusivity,
    one_eq_increment,
};
pub use tridiag::{solve_tridiagonal, TridiagonalSystem};

use crate::error::{Error, Result};
use crate::model::{FieldState, Grid1D, ModelParams, Variant};

/// Explicit stability limit on `F dt / dx^2`.
pub const CFL_LIMIT: f64 = 0.5;

/// What to do when the explicit one-equation scheme exceeds [`CFL_LIMIT`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CflPolicy {
    #[default]
    Warn,
    Fail,
}

impl CflPolicy {
    pub fn name(self) -> &'static str {
        match self {
            CflPolicy::Warn => "warn",
            CflPolicy::Fail => "fail",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "warn" => Some(CflPolicy::Warn),
            "fail" => Some(CflPolicy::Fail),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOptions {
    pub cfl_policy: CflPolicy,
    /// Test hook: `false` drops every reaction term and leaves pure diffusion.
    pub reactions: bool,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self {
            cfl_policy: CflPolicy::Warn,
            reactions: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub t_new: f64,
    /// Largest absolute change of any field over the step.
    pub max_update: f64,
    /// `max_i F(v_i) dt / dx^2`, explicit scheme only.
    pub cfl_number: Option<f64>,
    /// `dt / eps` for the relaxed system; above 1 the explicit healthy-tissue
    /// update may overshoot.
    pub relaxation_ratio: Option<f64>,
}

/// A variant-specific stepper bound to its parameters, grid and time step.
#[derive(Debug, Clone, Copy)]
pub struct Scheme {
    params: ModelParams,
    grid: Grid1D,
    dt: f64,
    options: StepOptions,
}

impl Scheme {
    pub fn new(params: ModelParams, grid: Grid1D, dt: f64, options: StepOptions) -> Result<Self> {
        params.validate()?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dt",
                requirement: "finite and > 0",
                value: dt,
            });
        }
        if grid.n_cells() < 3 {
            return Err(Error::GridTooSmall {
                min: 3,
                got: grid.n_cells(),
            });
        }
        Ok(Self {
            params,
            grid,
            dt,
            options,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn options(&self) -> &StepOptions {
        &self.options
    }

    /// CFL number of the explicit scheme for `state`, `None` for the
    /// semi-implicit variants.
    pub fn cfl_number(&self, state: &FieldState) -> Option<f64> {
        if self.params.variant != Variant::OneEq {
            return None;
        }
        let d = self.params.d;
        let fmax = state
            .v
            .iter()
            .map(|&v| one_eq_diffusivity(v, d))
            .fold(0.0, f64::max);
        Some(fmax * self.dt / (self.grid.dx() * self.grid.dx()))
    }

    /// Checks `state` against the stability guard before stepping.
    pub fn precheck(&self, state: &FieldState) -> Result<()> {
        state.check_layout(self.params.variant, self.grid.n_cells())?;
        if let Some(cfl) = self.cfl_number(state) {
            if cfl > CFL_LIMIT && self.options.cfl_policy == CflPolicy::Fail {
                return Err(Error::CflViolation { cfl });
            }
        }
        Ok(())
    }

    /// Advances `state` by one time step.
    pub fn step(&self, state: &FieldState) -> Result<(FieldState, StepReport)> {
        self.precheck(state)?;
        let next = match self.params.variant {
            Variant::FullModel => self.step_full(state)?,
            Variant::TwoEq => self.step_system(state, 1.0)?,
            Variant::EpsilonSystem => {
                let eps = self.params.epsilon.expect("validated");
                self.step_system(state, 1.0 / eps)?
            }
            Variant::OneEq => self.step_one_eq(state),
        };
        check_finite(&next)?;
        let report = StepReport {
            t_new: next.t,
            max_update: max_update(state, &next),
            cfl_number: self.cfl_number(state),
            relaxation_ratio: self.params.epsilon.map(|eps| self.dt / eps),
        };
        Ok((next, report))
    }

    fn reaction_on(&self) -> f64 {
        if self.options.reactions {
            1.0
        } else {
            0.0
        }
    }

    /// Explicit healthy-tissue update, `u + rate dt [u(1-u) - d u x]`.
    fn healthy_update(&self, u: &[f64], killer: &[f64], rate: f64) -> Vec<f64> {
        let k = rate * self.dt * self.reaction_on();
        let d = self.params.d;
        u.iter()
            .zip(killer)
            .map(|(&ui, &xi)| ui + k * (ui * (1.0 - ui) - d * ui * xi))
            .collect()
    }

    /// Implicit tumour update given the already advanced healthy tissue.
    fn tumour_update(&self, v: &[f64], u_new: &[f64]) -> Result<Vec<f64>> {
        let dx = self.grid.dx();
        let lambda = self.params.tumour_diffusion() * self.dt / (dx * dx);
        let growth = self.params.r * self.dt * self.reaction_on();
        let rhs = v.iter().map(|&vi| vi + growth * vi * (1.0 - vi)).collect();
        let faces = face_diffusivity(u_new);
        solve_diffusion(&faces, lambda, v, rhs)
    }

    fn step_system(&self, state: &FieldState, rate: f64) -> Result<FieldState> {
        let u = state.u.as_deref().expect("layout checked");
        let u_new = self.healthy_update(u, &state.v, rate);
        let v_new = self.tumour_update(&state.v, &u_new)?;
        Ok(FieldState {
            t: state.t + self.dt,
            u: Some(u_new),
            v: v_new,
            w: None,
        })
    }

    fn step_full(&self, state: &FieldState) -> Result<FieldState> {
        let u = state.u.as_deref().expect("layout checked");
        let w = state.w.as_deref().expect("layout checked");
        let u_new = self.healthy_update(u, w, 1.0);
        let v_new = self.tumour_update(&state.v, &u_new)?;

        let dx = self.grid.dx();
        let c = self.params.acid_rate.expect("validated") * self.dt * self.reaction_on();
        let rhs = w
            .iter()
            .zip(&state.v)
            .map(|(&wi, &vi)| wi + c * (vi - wi))
            .collect();
        let faces = vec![1.0; w.len() - 1];
        let w_new = solve_diffusion(&faces, self.dt / (dx * dx), w, rhs)?;

        Ok(FieldState {
            t: state.t + self.dt,
            u: Some(u_new),
            v: v_new,
            w: Some(w_new),
        })
    }

    fn step_one_eq(&self, state: &FieldState) -> FieldState {
        let v = &state.v;
        let d = self.params.d;
        let dx = self.grid.dx();
        let lambda = self.dt / (dx * dx);
        let growth = self.params.r * self.dt * self.reaction_on();
        let v_new = (0..v.len())
            .map(|i| v[i] + growth * v[i] * (1.0 - v[i]) + one_eq_increment(v, i, d, lambda))
            .collect();
        FieldState {
            t: state.t + self.dt,
            u: None,
            v: v_new,
            w: None,
        }
    }
}

/// Solves `(I - lam L_a) x = rhs` for the increment `x - x_old`, so
/// constant states with a zero source come back bit-identical.
fn solve_diffusion(faces: &[f64], lambda: f64, x_old: &[f64], rhs: Vec<f64>) -> Result<Vec<f64>> {
    let n = x_old.len();
    let residual = (0..n)
        .map(|i| {
            let east = if i + 1 < n { faces[i] * (x_old[i + 1] - x_old[i]) } else { 0.0 };
            let west = if i > 0 { faces[i - 1] * (x_old[i] - x_old[i - 1]) } else { 0.0 };
            (rhs[i] - x_old[i]) + lambda * (east - west)
        })
        .collect();
    let delta = solve_tridiagonal(&diffusion_system(faces, lambda, residual))?;
    Ok(x_old.iter().zip(delta).map(|(x, dx)| x + dx).collect())
}

/// `(I - lam L_a) x = rhs`, with `L_a` the flux-form Laplacian built from
/// the interior face diffusivities `faces` and zero flux through the ends.
pub fn diffusion_system(faces: &[f64], lambda: f64, rhs: Vec<f64>) -> TridiagonalSystem {
    let n = rhs.len();
    debug_assert_eq!(faces.len() + 1, n);
    let off: Vec<f64> = faces.iter().map(|&a| -lambda * a).collect();
    let diag = (0..n)
        .map(|i| {
            let west = if i > 0 { faces[i - 1] } else { 0.0 };
            let east = if i + 1 < n { faces[i] } else { 0.0 };
            1.0 + lambda * (west + east)
        })
        .collect();
    TridiagonalSystem {
        sub: off.clone(),
        diag,
        sup: off,
        rhs,
    }
}

fn check_finite(state: &FieldState) -> Result<()> {
    for (field, values) in state.fields() {
        if let Some(cell) = values.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFiniteState { field, cell });
        }
    }
    Ok(())
}

fn max_update(old: &FieldState, new: &FieldState) -> f64 {
    old.fields()
        .zip(new.fields())
        .flat_map(|((_, a), (_, b))| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max)
}

fn scheme_for(
    variant: Variant,
    params: &ModelParams,
    grid: &Grid1D,
    dt: f64,
) -> Result<Scheme> {
    if params.variant != variant {
        return Err(Error::StateMismatch {
            variant: variant.name(),
            reason: "parameters belong to a different variant",
        });
    }
    Scheme::new(*params, *grid, dt, StepOptions::default())
}

/// One semi-implicit step of the two-equation reduction.
pub fn step_two_eq(
    state: &FieldState,
    params: &ModelParams,
    grid: &Grid1D,
    dt: f64,
) -> Result<(FieldState, StepReport)> {
    scheme_for(Variant::TwoEq, params, grid, dt)?.step(state)
}

/// One semi-implicit step of the full three-field model.
pub fn step_full(
    state: &FieldState,
    params: &ModelParams,
    grid: &Grid1D,
    dt: f64,
) -> Result<(FieldState, StepReport)> {
    scheme_for(Variant::FullModel, params, grid, dt)?.step(state)
}

/// One explicit step of the degenerate one-equation reduction.
pub fn step_one_eq(
    state: &FieldState,
    params: &ModelParams,
    grid: &Grid1D,
    dt: f64,
) -> Result<(FieldState, StepReport)> {
    scheme_for(Variant::OneEq, params, grid, dt)?.step(state)
}

/// One step of the relaxed two-equation system (`eps u_t = ...`).
pub fn step_epsilon(
    state: &FieldState,
    params: &ModelParams,
    grid: &Grid1D,
    dt: f64,
) -> Result<(FieldState, StepReport)> {
    scheme_for(Variant::EpsilonSystem, params, grid, dt)?.step(state)
}
