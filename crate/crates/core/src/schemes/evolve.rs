use crate::error::{Error, Result};
use crate::model::{FieldState, TimeControl};

use super::{Scheme, CFL_LIMIT};

/// Receives every consecutive pair of states produced by [`evolve`].
pub trait StepObserver {
    fn observe(&mut self, before: &FieldState, after: &FieldState);
}

impl<F: FnMut(&FieldState, &FieldState)> StepObserver for F {
    fn observe(&mut self, before: &FieldState, after: &FieldState) {
        self(before, after)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    /// One state per scheduled snapshot step, in schedule order.
    pub snapshots: Vec<FieldState>,
    pub final_state: FieldState,
    /// Stability notes raised under the `warn` policy (one per kind).
    pub warnings: Vec<String>,
}

/// Advances `initial` to the final time of `time`.
///
/// Times are computed as `n * dt` rather than accumulated, so identical
/// inputs give bit-identical outputs.
pub fn evolve(
    initial: FieldState,
    scheme: &Scheme,
    time: &TimeControl,
    observers: &mut [&mut dyn StepObserver],
) -> Result<Evolution> {
    if (time.dt() - scheme.dt()).abs() > 1e-15 * scheme.dt() {
        return Err(Error::InvalidTime(format!(
            "time control dt = {} differs from scheme dt = {}",
            time.dt(),
            scheme.dt()
        )));
    }
    scheme.precheck(&initial).map_err(|e| e.at_step(0))?;

    let schedule = time.snapshot_steps();
    let mut next_snapshot = 0;
    let mut snapshots = Vec::with_capacity(schedule.len());
    let mut warnings = Vec::new();
    let mut cfl_warned = false;
    let mut stiffness_warned = false;

    let mut state = initial;
    state.t = 0.0;
    for n in 0..=time.n_steps() {
        if schedule.get(next_snapshot) == Some(&n) {
            snapshots.push(state.clone());
            next_snapshot += 1;
        }
        if n == time.n_steps() {
            break;
        }
        let (mut next, report) = scheme.step(&state).map_err(|e| e.at_step(n))?;
        next.t = (n + 1) as f64 * time.dt();

        if let Some(cfl) = report.cfl_number.filter(|&c| c > CFL_LIMIT) {
            if !cfl_warned {
                let msg = format!("step {n}: CFL number {cfl:.4} exceeds {CFL_LIMIT}");
                log::warn!("{msg}");
                warnings.push(msg);
                cfl_warned = true;
            }
        }
        if let Some(ratio) = report.relaxation_ratio.filter(|&r| r > 1.0) {
            if !stiffness_warned {
                let msg = format!("dt/eps = {ratio:.4} > 1: healthy-tissue relaxation may overshoot");
                log::warn!("{msg}");
                warnings.push(msg);
                stiffness_warned = true;
            }
        }
        for obs in observers.iter_mut() {
            obs.observe(&state, &next);
        }
        state = next;
    }
    Ok(Evolution {
        snapshots,
        final_state: state,
        warnings,
    })
}
