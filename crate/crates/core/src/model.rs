//! Grids, parameters, field states and equilibria shared by all model variants.
//!
//! Four variants are supported:
//!
//! * `FullModel`: healthy tissue `u`, tumour `v` and excess acid `w`,
//!   ```text
//!   u_t = u(1-u) - d u w
//!   v_t = r v(1-v) + D ((1-u) v_x)_x
//!   w_t = c (v-w) + w_xx
//!   ```
//! * `TwoEq`: the `w = v` reduction rescaled so that `D = 1`,
//!   ```text
//!   u_t = u(1-u) - d u v
//!   v_t = r v(1-v) + ((1-u) v_x)_x
//!   ```
//! * `OneEq`: `u` slaved to `v` through `u = (1 - d v)^+`, which leaves the
//!   degenerate scalar equation `v_t = r v(1-v) + (F(v) v_x)_x` with
//!   `F(v) = min(d v, 1)`;
//! * `EpsilonSystem`: the two-equation system with `eps u_t` on the left of
//!   the healthy-tissue equation and `r = 1`.

use crate::error::{Error, Result};

/// Relative tolerance used when checking that a length or a time is an
/// integer multiple of a step.
const MULTIPLE_TOL: f64 = 1e-9;

/// Uniform, cell-centred mesh on `[x_left, x_right]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_left: f64,
    x_right: f64,
    n_cells: usize,
}

impl Grid1D {
    /// Builds a grid from its cell count.
    pub fn new(x_left: f64, x_right: f64, n_cells: usize) -> Result<Self> {
        if !(x_left.is_finite() && x_right.is_finite()) || x_left >= x_right {
            return Err(Error::InvalidDomain { x_left, x_right });
        }
        if n_cells == 0 {
            return Err(Error::GridTooSmall { min: 1, got: 0 });
        }
        Ok(Self {
            x_left,
            x_right,
            n_cells,
        })
    }

    pub fn x_left(&self) -> f64 {
        self.x_left
    }

    pub fn x_right(&self) -> f64 {
        self.x_right
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn dx(&self) -> f64 {
        (self.x_right - self.x_left) / self.n_cells as f64
    }

    /// Centre of cell `i` (zero-based): `x_left + (i + 1/2) dx`.
    pub fn center(&self, i: usize) -> f64 {
        self.x_left + (i as f64 + 0.5) * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }
}

/// Builds a uniform grid with spacing `dx`; the domain length must be an
/// integer number of cells.
pub fn make_grid(x_left: f64, x_right: f64, dx: f64) -> Result<Grid1D> {
    if !(x_left.is_finite() && x_right.is_finite()) || x_left >= x_right {
        return Err(Error::InvalidDomain { x_left, x_right });
    }
    if !(dx.is_finite() && dx > 0.0) {
        return Err(Error::InvalidParameter {
            name: "dx",
            requirement: "finite and > 0",
            value: dx,
        });
    }
    let length = x_right - x_left;
    let ratio = length / dx;
    let n = ratio.round();
    if (ratio - n).abs() > MULTIPLE_TOL * ratio.max(1.0) || n < 1.0 {
        return Err(Error::NonIntegerCellCount { length, dx });
    }
    Grid1D::new(x_left, x_right, n as usize)
}

/// Time step, horizon and snapshot schedule.
///
/// Snapshot times are kept as step indices so that they are exact multiples
/// of `dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeControl {
    dt: f64,
    n_steps: usize,
    snapshot_steps: Vec<usize>,
}

fn steps_for(t: f64, dt: f64, what: &str) -> Result<usize> {
    let ratio = t / dt;
    let n = ratio.round();
    if (ratio - n).abs() > MULTIPLE_TOL * ratio.max(1.0) {
        return Err(Error::InvalidTime(format!(
            "{what} = {t} is not an integer multiple of dt = {dt}"
        )));
    }
    Ok(n as usize)
}

impl TimeControl {
    pub fn new(dt: f64, t_final: f64, snapshot_times: &[f64]) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dt",
                requirement: "finite and > 0",
                value: dt,
            });
        }
        if !(t_final.is_finite() && t_final >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "t_final",
                requirement: "finite and >= 0",
                value: t_final,
            });
        }
        let n_steps = steps_for(t_final, dt, "t_final")?;
        let mut snapshot_steps = Vec::with_capacity(snapshot_times.len());
        for &t in snapshot_times {
            if !(0.0..=t_final * (1.0 + MULTIPLE_TOL)).contains(&t) {
                return Err(Error::InvalidTime(format!(
                    "snapshot time {t} outside [0, {t_final}]"
                )));
            }
            let k = steps_for(t, dt, "snapshot time")?;
            if snapshot_steps.last().is_some_and(|&last| k <= last) {
                return Err(Error::InvalidTime(
                    "snapshot times must be strictly increasing".into(),
                ));
            }
            snapshot_steps.push(k);
        }
        Ok(Self {
            dt,
            n_steps,
            snapshot_steps,
        })
    }

    /// `count` snapshot instants equally spaced over `[0, t_final]`, both ends
    /// included (a single snapshot means the final time only). Instants are
    /// rounded to the nearest step.
    pub fn equally_spaced(dt: f64, t_final: f64, count: usize) -> Result<Self> {
        let base = Self::new(dt, t_final, &[])?;
        let n = base.n_steps;
        let mut steps: Vec<usize> = match count {
            0 => Vec::new(),
            1 => vec![n],
            m => (0..m)
                .map(|k| ((k * n) as f64 / (m - 1) as f64).round() as usize)
                .collect(),
        };
        steps.dedup();
        Ok(Self {
            snapshot_steps: steps,
            ..base
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn t_final(&self) -> f64 {
        self.n_steps as f64 * self.dt
    }

    pub fn snapshot_steps(&self) -> &[usize] {
        &self.snapshot_steps
    }

    pub fn snapshot_times(&self) -> Vec<f64> {
        self.snapshot_steps
            .iter()
            .map(|&k| k as f64 * self.dt)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    FullModel,
    TwoEq,
    OneEq,
    EpsilonSystem,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::FullModel,
        Variant::TwoEq,
        Variant::OneEq,
        Variant::EpsilonSystem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::FullModel => "full",
            Variant::TwoEq => "two_eq",
            Variant::OneEq => "one_eq",
            Variant::EpsilonSystem => "epsilon",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Variant::ALL.into_iter().find(|v| v.name() == name)
    }

    /// Number of components in a Riemann state tuple for this variant.
    pub fn state_arity(self) -> usize {
        match self {
            Variant::FullModel => 3,
            Variant::TwoEq | Variant::EpsilonSystem => 2,
            Variant::OneEq => 1,
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Model coefficients. Fields a variant does not use are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub variant: Variant,
    /// Death rate of healthy tissue.
    pub d: f64,
    /// Tumour growth rate. Fixed to 1 for `EpsilonSystem`.
    pub r: f64,
    /// Tumour diffusion constant (`FullModel` only).
    pub diffusion: Option<f64>,
    /// Acid production / reabsorption rate (`FullModel` only).
    pub acid_rate: Option<f64>,
    /// Relaxation time of the healthy tissue (`EpsilonSystem` only).
    pub epsilon: Option<f64>,
}

impl ModelParams {
    pub fn full(d: f64, r: f64, diffusion: f64, acid_rate: f64) -> Self {
        Self {
            variant: Variant::FullModel,
            d,
            r,
            diffusion: Some(diffusion),
            acid_rate: Some(acid_rate),
            epsilon: None,
        }
    }

    pub fn two_eq(d: f64, r: f64) -> Self {
        Self {
            variant: Variant::TwoEq,
            d,
            r,
            diffusion: None,
            acid_rate: None,
            epsilon: None,
        }
    }

    pub fn one_eq(d: f64) -> Self {
        Self {
            variant: Variant::OneEq,
            d,
            r: 1.0,
            diffusion: None,
            acid_rate: None,
            epsilon: None,
        }
    }

    pub fn epsilon(d: f64, epsilon: f64) -> Self {
        Self {
            variant: Variant::EpsilonSystem,
            d,
            r: 1.0,
            diffusion: None,
            acid_rate: None,
            epsilon: Some(epsilon),
        }
    }

    /// Diffusion multiplier in front of the tumour flux: `D` for the full
    /// model, 1 for the rescaled reductions.
    pub fn tumour_diffusion(&self) -> f64 {
        self.diffusion.unwrap_or(1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let variant = self.variant.name();
        let non_negative = |name: &'static str, value: f64| {
            if !value.is_finite() {
                Err(Error::InvalidParameter {
                    name,
                    requirement: "finite",
                    value,
                })
            } else if value < 0.0 {
                Err(Error::NegativeParameter(name))
            } else {
                Ok(())
            }
        };
        let positive = |name: &'static str, value: f64| {
            if value.is_finite() && value > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    requirement: "finite and > 0",
                    value,
                })
            }
        };
        let required = |name: &'static str, value: Option<f64>| {
            value.ok_or(Error::MissingParameter { name, variant })
        };
        let absent = |name: &'static str, value: Option<f64>| match value {
            Some(_) => Err(Error::UnusedParameter { name, variant }),
            None => Ok(()),
        };

        non_negative("d", self.d)?;
        non_negative("r", self.r)?;
        match self.variant {
            Variant::FullModel => {
                non_negative("D", required("D", self.diffusion)?)?;
                positive("c", required("c", self.acid_rate)?)?;
                absent("epsilon", self.epsilon)?;
            }
            Variant::TwoEq | Variant::OneEq => {
                absent("D", self.diffusion)?;
                absent("c", self.acid_rate)?;
                absent("epsilon", self.epsilon)?;
            }
            Variant::EpsilonSystem => {
                absent("D", self.diffusion)?;
                absent("c", self.acid_rate)?;
                positive("epsilon", required("epsilon", self.epsilon)?)?;
                if self.r != 1.0 {
                    return Err(Error::InvalidParameter {
                        name: "r",
                        requirement: "exactly 1 for the epsilon system",
                        value: self.r,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Per-cell field values at one time level.
///
/// `u` is absent for the one-equation model (use [`recover_healthy`]), `w`
/// is present only for the full model.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub t: f64,
    pub u: Option<Vec<f64>>,
    pub v: Vec<f64>,
    pub w: Option<Vec<f64>>,
}

impl FieldState {
    pub fn n_cells(&self) -> usize {
        self.v.len()
    }

    /// Checks that the stored fields are the ones `variant` works with and
    /// that every field has `n` cells.
    pub fn check_layout(&self, variant: Variant, n: usize) -> Result<()> {
        let name = variant.name();
        let (want_u, want_w) = match variant {
            Variant::FullModel => (true, true),
            Variant::TwoEq | Variant::EpsilonSystem => (true, false),
            Variant::OneEq => (false, false),
        };
        if self.u.is_some() != want_u {
            return Err(Error::StateMismatch {
                variant: name,
                reason: if want_u { "u is missing" } else { "u must not be stored" },
            });
        }
        if self.w.is_some() != want_w {
            return Err(Error::StateMismatch {
                variant: name,
                reason: if want_w { "w is missing" } else { "w must not be stored" },
            });
        }
        for field in [Some(&self.v), self.u.as_ref(), self.w.as_ref()]
            .into_iter()
            .flatten()
        {
            if field.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: field.len(),
                });
            }
        }
        Ok(())
    }

    /// Healthy density: stored `u`, or `(1 - d v)^+` when it is slaved to `v`.
    pub fn healthy(&self, d: f64) -> Vec<f64> {
        match &self.u {
            Some(u) => u.clone(),
            None => recover_healthy(&self.v, d),
        }
    }

    /// Iterates over `(name, values)` for the stored fields in `u, v, w` order.
    pub fn fields(&self) -> impl Iterator<Item = (&'static str, &[f64])> {
        [
            self.u.as_deref().map(|u| ("u", u)),
            Some(("v", self.v.as_slice())),
            self.w.as_deref().map(|w| ("w", w)),
        ]
        .into_iter()
        .flatten()
    }
}

/// Healthy density slaved to the tumour density, `u = max(1 - d v, 0)`.
pub fn recover_healthy(v: &[f64], d: f64) -> Vec<f64> {
    v.iter().map(|&vi| (1.0 - d * vi).max(0.0)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumLabel {
    E0,
    E1,
    E2,
    E3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
    Degenerate,
}

/// Spatially homogeneous steady state `(u*, v*)` of the two-equation kinetics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub label: EquilibriumLabel,
    pub u: f64,
    pub v: f64,
    pub stability: Stability,
    /// False when a coordinate is negative (E3 with `d > 1`).
    pub physical: bool,
}

/// The four equilibria of `u(1-u-dv) = 0`, `v(1-v) = 0` with their stability.
///
/// E2 and E3 exchange stability at `d = 1`, where both are degenerate. E3 is
/// reported even when `1 - d < 0`, flagged as unphysical.
pub fn equilibria(d: f64) -> Result<Vec<Equilibrium>> {
    if d.is_nan() {
        return Err(Error::InvalidParameter {
            name: "d",
            requirement: "a number",
            value: d,
        });
    }
    if d < 0.0 {
        return Err(Error::NegativeParameter("d"));
    }
    use std::cmp::Ordering::*;
    let (e2, e3) = match d.partial_cmp(&1.0).unwrap_or(Equal) {
        Greater => (Stability::Stable, Stability::Unstable),
        Less => (Stability::Unstable, Stability::Stable),
        Equal => (Stability::Degenerate, Stability::Degenerate),
    };
    let eq = |label, u: f64, v: f64, stability| Equilibrium {
        label,
        u,
        v,
        stability,
        physical: u >= 0.0,
    };
    Ok(vec![
        eq(EquilibriumLabel::E0, 0.0, 0.0, Stability::Unstable),
        eq(EquilibriumLabel::E1, 1.0, 0.0, Stability::Unstable),
        eq(EquilibriumLabel::E2, 0.0, 1.0, e2),
        eq(EquilibriumLabel::E3, 1.0 - d, 1.0, e3),
    ])
}

/// Piecewise-constant initial data with a single jump at `x_jump`.
///
/// State tuples are `(u, v, w)`, `(u, v)` or `(v)` depending on the variant.
/// Cells whose centre is `< x_jump` take the left state.
pub fn riemann_initial(
    variant: Variant,
    grid: &Grid1D,
    left: &[f64],
    right: &[f64],
    x_jump: f64,
) -> Result<FieldState> {
    let arity = variant.state_arity();
    for state in [left, right] {
        if state.len() != arity {
            return Err(Error::StateArity {
                variant: variant.name(),
                expected: arity,
                got: state.len(),
            });
        }
    }
    if !(x_jump > grid.x_left() && x_jump < grid.x_right()) {
        return Err(Error::JumpOutsideDomain {
            x_jump,
            x_left: grid.x_left(),
            x_right: grid.x_right(),
        });
    }
    let centers = grid.centers();
    let field = |k: usize| -> Vec<f64> {
        centers
            .iter()
            .map(|&x| if x < x_jump { left[k] } else { right[k] })
            .collect()
    };
    Ok(match variant {
        Variant::OneEq => FieldState {
            t: 0.0,
            u: None,
            v: field(0),
            w: None,
        },
        Variant::TwoEq | Variant::EpsilonSystem => FieldState {
            t: 0.0,
            u: Some(field(0)),
            v: field(1),
            w: None,
        },
        Variant::FullModel => FieldState {
            t: 0.0,
            u: Some(field(0)),
            v: field(1),
            w: Some(field(2)),
        },
    })
}

/// Default Riemann end states `(left, right)` for a variant: the invaded
/// state `((1-d)^+, 1[, 1])` on the left and the healthy state on the right.
pub fn default_riemann_states(variant: Variant, d: f64) -> (Vec<f64>, Vec<f64>) {
    let behind = (1.0 - d).max(0.0);
    match variant {
        Variant::FullModel => (vec![behind, 1.0, 1.0], vec![1.0, 0.0, 0.0]),
        Variant::TwoEq | Variant::EpsilonSystem => (vec![behind, 1.0], vec![1.0, 0.0]),
        Variant::OneEq => (vec![1.0], vec![0.0]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grid_cell_counts() {
        assert_eq!(make_grid(-1.0, 1.0, 0.005).unwrap().n_cells(), 400);
        assert_eq!(make_grid(0.0, 40.0, 0.05).unwrap().n_cells(), 800);
        assert!(matches!(
            make_grid(0.0, 1.0, 0.3),
            Err(Error::NonIntegerCellCount { .. })
        ));
        assert!(matches!(
            make_grid(1.0, 1.0, 0.1),
            Err(Error::InvalidDomain { .. })
        ));
        assert!(matches!(
            make_grid(2.0, 1.0, 0.1),
            Err(Error::InvalidDomain { .. })
        ));
    }

    #[test]
    fn grid_dx_is_derived() {
        let g = make_grid(0.0, 40.0, 0.005).unwrap();
        assert_eq!(g.n_cells(), 8000);
        assert_eq!(g.dx(), 40.0 / 8000.0);
        assert_eq!(g.center(0), 0.0025);
    }

    #[test]
    fn equilibria_stability_rule() {
        let eq = equilibria(2.0).unwrap();
        assert_eq!(eq[2].stability, Stability::Stable);
        assert_eq!((eq[3].u, eq[3].v), (-1.0, 1.0));
        assert_eq!(eq[3].stability, Stability::Unstable);
        assert!(!eq[3].physical);

        let eq = equilibria(0.5).unwrap();
        assert_eq!((eq[3].u, eq[3].v), (0.5, 1.0));
        assert_eq!(eq[3].stability, Stability::Stable);
        assert_eq!(eq[2].stability, Stability::Unstable);

        let eq = equilibria(0.0).unwrap();
        assert_eq!(eq[2].stability, Stability::Unstable);
        assert_eq!((eq[3].u, eq[3].stability), (1.0, Stability::Stable));

        let eq = equilibria(1.0).unwrap();
        assert_eq!(eq[2].stability, Stability::Degenerate);
        assert_eq!(eq[3].stability, Stability::Degenerate);
        assert!(eq[3].physical);

        for e in &eq[..2] {
            assert_eq!(e.stability, Stability::Unstable);
        }
        assert_eq!(equilibria(-0.1), Err(Error::NegativeParameter("d")));
    }

    #[test]
    fn riemann_step_profiles() {
        let grid = make_grid(0.0, 1.0, 0.1).unwrap();
        let (l, r) = default_riemann_states(Variant::TwoEq, 2.0);
        assert_eq!(l, vec![0.0, 1.0]);
        let s = riemann_initial(Variant::TwoEq, &grid, &l, &r, 0.5).unwrap();
        assert_eq!(s.v, vec![1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(s.u.as_ref().unwrap()[4..6], [0.0, 1.0]);
        assert_eq!(s.t, 0.0);
        assert!(s.w.is_none());

        let s = riemann_initial(Variant::OneEq, &grid, &[1.0], &[0.0], 0.3).unwrap();
        assert!(s.u.is_none());
        assert_eq!(s.v.iter().sum::<f64>(), 3.0);

        let flat = riemann_initial(Variant::TwoEq, &grid, &[1.0, 0.0], &[1.0, 0.0], 0.77).unwrap();
        assert!(flat.u.unwrap().iter().all(|&u| u == 1.0));
        assert!(flat.v.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn riemann_rejects_bad_input() {
        let grid = make_grid(0.0, 1.0, 0.1).unwrap();
        assert!(matches!(
            riemann_initial(Variant::OneEq, &grid, &[1.0], &[0.0], 1.0),
            Err(Error::JumpOutsideDomain { .. })
        ));
        assert!(matches!(
            riemann_initial(Variant::FullModel, &grid, &[1.0, 0.0], &[0.0, 1.0, 1.0], 0.5),
            Err(Error::StateArity { expected: 3, got: 2, .. })
        ));
    }

    #[test]
    fn recovered_healthy_density() {
        assert_eq!(recover_healthy(&[1.0], 2.0), vec![0.0]);
        assert_eq!(recover_healthy(&[1.0], 0.5), vec![0.5]);
        assert_eq!(recover_healthy(&[0.0, 0.0], 7.0), vec![1.0, 1.0]);
    }

    #[test]
    fn one_eq_left_state_matches_two_eq() {
        let grid = make_grid(0.0, 1.0, 0.1).unwrap();
        for d in [0.0, 0.3, 0.5, 1.0, 2.0, 12.5] {
            let s = riemann_initial(Variant::OneEq, &grid, &[1.0], &[0.0], 0.5).unwrap();
            let u = recover_healthy(&s.v, d);
            let (two_left, _) = default_riemann_states(Variant::TwoEq, d);
            assert_eq!(u[0], two_left[0]);
            assert_eq!(u[9], 1.0);
        }
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::two_eq(2.0, 1.0).validate().is_ok());
        let mut p = ModelParams::two_eq(2.0, 1.0);
        p.diffusion = Some(1.0);
        assert!(matches!(p.validate(), Err(Error::UnusedParameter { name: "D", .. })));
        assert!(ModelParams::full(12.5, 1.0, 4e-5, 70.0).validate().is_ok());
        assert!(ModelParams::full(12.5, 1.0, 4e-5, 0.0).validate().is_err());
        assert!(ModelParams::epsilon(0.5, 0.0).validate().is_err());
        assert_eq!(
            ModelParams::one_eq(-1.0).validate(),
            Err(Error::NegativeParameter("d"))
        );
    }

    #[test]
    fn time_control_schedule() {
        let tc = TimeControl::new(0.005, 20.0, &[0.0, 10.0, 20.0]).unwrap();
        assert_eq!(tc.n_steps(), 4000);
        assert_eq!(tc.snapshot_steps(), &[0, 2000, 4000]);
        assert!(TimeControl::new(0.005, 20.0, &[0.0012]).is_err());
        assert!(TimeControl::new(0.3, 1.0, &[]).is_err());

        let tc = TimeControl::equally_spaced(0.001, 20.0, 5).unwrap();
        assert_eq!(tc.snapshot_times(), vec![0.0, 5.0, 10.0, 15.0, 20.0]);
        let tc = TimeControl::equally_spaced(0.001, 0.0, 5).unwrap();
        assert_eq!(tc.snapshot_steps(), &[0]);
    }

    proptest! {
        #[test]
        fn equilibria_zero_the_kinetics(d in 0.0f64..20.0) {
            for e in equilibria(d).unwrap() {
                prop_assert!((e.u * (1.0 - e.u - d * e.v)).abs() <= 1e-15);
                prop_assert!((e.v * (1.0 - e.v)).abs() <= 1e-15);
            }
        }

        #[test]
        fn centers_increase_and_are_symmetric(
            x_left in -50.0f64..50.0,
            len in 0.1f64..100.0,
            n in 1usize..2000,
        ) {
            let g = Grid1D::new(x_left, x_left + len, n).unwrap();
            let c = g.centers();
            prop_assert!(c.windows(2).all(|w| w[1] > w[0]));
            let mid = 0.5 * (g.x_left() + g.x_right());
            for i in 0..n {
                let a = c[i] - mid;
                let b = mid - c[n - 1 - i];
                prop_assert!((a - b).abs() <= 1e-9 * (1.0 + len + x_left.abs()));
            }
        }
    }
}
