//! Traveling-front diagnostics.

use crate::error::{Error, Result};
use crate::model::{FieldState, Grid1D};
use crate::schemes::StepObserver;

/// Per-step speed estimates `(t^n, s^n)` for one field.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedSeries {
    /// `[phi] = phi_+ - phi_-`, the limit at `+inf` minus the limit at `-inf`.
    pub phi_jump: f64,
    pub values: Vec<(f64, f64)>,
}

impl SpeedSeries {
    pub fn new(phi_jump: f64) -> Result<Self> {
        if phi_jump == 0.0 || !phi_jump.is_finite() {
            return Err(Error::ZeroJump);
        }
        Ok(Self {
            phi_jump,
            values: Vec::new(),
        })
    }
}

/// Space-averaged speed over one step:
///
/// ```text
/// s^n = dx / ([phi] dt) * sum_i (v^n_i - v^{n+1}_i)
/// ```
///
/// The estimate only uses the change of the total mass of `v`, so it does
/// not depend on how the front is resolved.
pub fn speed_estimate_step(
    v_n: &[f64],
    v_np1: &[f64],
    dx: f64,
    dt: f64,
    phi_jump: f64,
) -> Result<f64> {
    if v_n.len() != v_np1.len() {
        return Err(Error::LengthMismatch {
            expected: v_n.len(),
            got: v_np1.len(),
        });
    }
    if phi_jump == 0.0 || !phi_jump.is_finite() {
        return Err(Error::ZeroJump);
    }
    let loss: f64 = v_n.iter().zip(v_np1).map(|(a, b)| a - b).sum();
    Ok(dx / (phi_jump * dt) * loss)
}

/// Observer that feeds [`speed_estimate_step`] on the tumour density.
#[derive(Debug, Clone)]
pub struct SpeedTracker {
    dx: f64,
    dt: f64,
    series: SpeedSeries,
}

impl SpeedTracker {
    pub fn new(dx: f64, dt: f64, phi_jump: f64) -> Result<Self> {
        Ok(Self {
            dx,
            dt,
            series: SpeedSeries::new(phi_jump)?,
        })
    }

    pub fn into_series(self) -> SpeedSeries {
        self.series
    }
}

impl StepObserver for SpeedTracker {
    fn observe(&mut self, before: &FieldState, after: &FieldState) {
        let loss: f64 = before.v.iter().zip(&after.v).map(|(a, b)| a - b).sum();
        let s = self.dx / (self.series.phi_jump * self.dt) * loss;
        self.series.values.push((before.t, s));
    }
}

fn tail(series: &SpeedSeries, tail_fraction: f64) -> Result<&[(f64, f64)]> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "tail_fraction",
            requirement: "in (0, 1]",
            value: tail_fraction,
        });
    }
    let n = series.values.len();
    if n == 0 {
        return Err(Error::EmptySeries);
    }
    let count = ((n as f64 * tail_fraction).round() as usize).clamp(1, n);
    Ok(&series.values[n - count..])
}

/// Mean of the last `tail_fraction` of the recorded speeds.
pub fn asymptotic_speed(series: &SpeedSeries, tail_fraction: f64) -> Result<f64> {
    let tail = tail(series, tail_fraction)?;
    Ok(tail.iter().map(|&(_, s)| s).sum::<f64>() / tail.len() as f64)
}

/// Tail mean plus the tail's peak-to-peak spread.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedSummary {
    pub speed: f64,
    pub spread: f64,
    pub tail_fraction: f64,
}

pub fn speed_summary(series: &SpeedSeries, tail_fraction: f64) -> Result<SpeedSummary> {
    let speed = asymptotic_speed(series, tail_fraction)?;
    let tail = tail(series, tail_fraction)?;
    let (lo, hi) = tail
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, s)| {
            (lo.min(s), hi.max(s))
        });
    Ok(SpeedSummary {
        speed,
        spread: hi - lo,
        tail_fraction,
    })
}

/// Sharp traveling wave of `v_t = v(1-v) + d (v v_x)_x`:
///
/// ```text
/// v = 1 - exp((x - s t) / sqrt(2d))   for x <= s t,   0 beyond,   s = sqrt(d/2)
/// ```
///
/// The profile solves the heterogeneous (`d < 1`) one-equation model; other
/// positive `d` are accepted and evaluate the same formula.
pub fn exact_front(x: f64, t: f64, d: f64) -> Result<f64> {
    if d.is_nan() || d <= 0.0 {
        return Err(Error::NonPositiveD(d));
    }
    let s = (0.5 * d).sqrt();
    let xi = x - s * t;
    Ok(if xi <= 0.0 {
        -(xi / (2.0 * d).sqrt()).exp_m1()
    } else {
        0.0
    })
}

/// `sqrt(d/2)`, the speed of [`exact_front`].
pub fn exact_speed(d: f64) -> f64 {
    (0.5 * d).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub l_inf: f64,
    pub l2: f64,
}

/// Max norm and grid `L2` norm (`sqrt(sum diff^2 dx)`) of `numeric - reference`.
pub fn error_norms(numeric: &[f64], reference: &[f64], dx: f64) -> Result<ErrorNorms> {
    if numeric.len() != reference.len() {
        return Err(Error::LengthMismatch {
            expected: reference.len(),
            got: numeric.len(),
        });
    }
    let (l_inf, sq) = numeric
        .iter()
        .zip(reference)
        .map(|(a, b)| (a - b).abs())
        .fold((0.0f64, 0.0f64), |(m, s), e| (m.max(e), s + e * e));
    Ok(ErrorNorms {
        l_inf,
        l2: (sq * dx).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontLabel {
    Sharp,
    Smooth,
    Indeterminate,
}

impl FrontLabel {
    pub fn name(self) -> &'static str {
        match self {
            FrontLabel::Sharp => "sharp",
            FrontLabel::Smooth => "smooth",
            FrontLabel::Indeterminate => "indeterminate",
        }
    }
}

/// Thresholds of [`classify_front`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeThresholds {
    /// Upper level bounding the leading tail.
    pub eps_high: f64,
    /// Lower level; its crossing is the edge estimate.
    pub eps_low: f64,
    /// Level whose distance to the `eps_high` crossing sets the length
    /// scale of the front body.
    pub eps_body: f64,
    /// Tail ratio at or below which a front is sharp; smooth fronts need at
    /// least `4 * k_sharp`.
    pub k_sharp: f64,
}

impl Default for ShapeThresholds {
    fn default() -> Self {
        Self {
            eps_high: 0.1,
            eps_low: 1e-6,
            eps_body: 0.5,
            k_sharp: 0.5,
        }
    }
}

/// Front shape estimate for the last snapshot, labelled from all snapshots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontShapeReport {
    pub label: FrontLabel,
    /// Leading position where `v` falls below `eps_low`.
    pub edge_position: f64,
    /// `x(eps_low) - x(eps_high)`.
    pub tail_length: f64,
    /// One-sided difference slope just behind the edge.
    pub edge_slope: f64,
    /// Median over the last half of the snapshots of
    /// `tail_length / (x(eps_high) - x(eps_body))`.
    pub tail_ratio: f64,
}

/// Cells kept clear of the domain ends for the edge estimate.
pub const BOUNDARY_BUFFER: usize = 5;

struct Profile {
    edge_position: f64,
    tail_length: f64,
    edge_slope: f64,
    tail_ratio: f64,
}

/// Rightmost down-crossing of `level`: the last cell `i` with
/// `v_i >= level`, interpolated linearly towards cell `i+1`.
fn leading_crossing(v: &[f64], centers: &[f64], level: f64) -> Option<(usize, f64)> {
    let i = v.iter().rposition(|&x| x >= level)?;
    if i + 1 == v.len() {
        return None;
    }
    let (a, b) = (v[i], v[i + 1]);
    let frac = if a > b { (a - level) / (a - b) } else { 0.0 };
    Some((i, centers[i] + frac * (centers[i + 1] - centers[i])))
}

fn median3(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|i| {
            if i == 0 || i + 1 == n {
                return v[i];
            }
            let mut w = [v[i - 1], v[i], v[i + 1]];
            w.sort_by(f64::total_cmp);
            w[1]
        })
        .collect()
}

fn profile(v: &[f64], grid: &Grid1D, th: &ShapeThresholds) -> Result<Option<Profile>> {
    let centers = grid.centers();
    let cross = |level: f64| {
        leading_crossing(v, &centers, level).ok_or(Error::FrontNotFound { level })
    };
    let (i_low, x_low) = cross(th.eps_low)?;
    let (_, x_high) = cross(th.eps_high)?;
    let (i_body, x_body) = cross(th.eps_body)?;

    let n = v.len();
    if i_low + 1 + BOUNDARY_BUFFER > n || i_body < BOUNDARY_BUFFER {
        return Err(Error::BoundaryContamination {
            edge: x_low,
            cells: BOUNDARY_BUFFER,
        });
    }

    // The front region must be non-increasing once single-cell noise is removed.
    let smooth = median3(v);
    let region = &smooth[i_body..=(i_low + 1).min(n - 1)];
    if region.windows(2).any(|w| w[1] > w[0]) {
        return Ok(None);
    }

    let body = x_high - x_body;
    let tail_length = (x_low - x_high).max(0.0);
    let edge_slope = if i_low > 0 {
        (v[i_low] - v[i_low - 1]) / grid.dx()
    } else {
        0.0
    };
    Ok(Some(Profile {
        edge_position: x_low,
        tail_length,
        edge_slope,
        tail_ratio: if body > 0.0 { tail_length / body } else { f64::INFINITY },
    }))
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Classifies a right-moving decreasing front as sharp or smooth.
///
/// A sharp front reaches zero at a finite edge with a non-zero slope, so the
/// distance from the `eps_high` level to the `eps_low` level is short
/// compared with the width of the front body. A smooth front decays
/// exponentially and spends a distance proportional to
/// `ln(eps_high / eps_low)` in that tail. The test statistic is
/// `tail_ratio = (x(eps_low) - x(eps_high)) / (x(eps_high) - x(eps_body))`,
/// taken as the median over the last half of the snapshots; it does not
/// depend on the mesh size. Snapshots that are not monotone in the front
/// region after a 3-cell median filter are skipped.
pub fn classify_front(
    snapshots: &[&[f64]],
    grid: &Grid1D,
    thresholds: &ShapeThresholds,
) -> Result<FrontShapeReport> {
    let th = thresholds;
    if !(th.eps_low > 0.0 && th.eps_low < th.eps_high && th.eps_high < th.eps_body && th.eps_body < 1.0)
    {
        return Err(Error::InvalidParameter {
            name: "eps_low/eps_high/eps_body",
            requirement: "ordered as 0 < eps_low < eps_high < eps_body < 1",
            value: th.eps_low,
        });
    }
    if th.k_sharp.is_nan() || th.k_sharp <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "k_sharp",
            requirement: "> 0",
            value: th.k_sharp,
        });
    }
    let last = snapshots.last().ok_or(Error::FrontNotFound { level: th.eps_low })?;
    let last_profile = profile(last, grid, th)?;

    let start = snapshots.len() / 2;
    let mut ratios = Vec::new();
    for snap in &snapshots[start..] {
        if snap.len() != grid.n_cells() {
            return Err(Error::LengthMismatch {
                expected: grid.n_cells(),
                got: snap.len(),
            });
        }
        if let Some(p) = profile(snap, grid, th)? {
            ratios.push(p.tail_ratio);
        }
    }

    let (label, tail_ratio) = if ratios.is_empty() {
        (FrontLabel::Indeterminate, f64::NAN)
    } else {
        let m = median(&mut ratios);
        let label = if m <= th.k_sharp {
            FrontLabel::Sharp
        } else if m >= 4.0 * th.k_sharp {
            FrontLabel::Smooth
        } else {
            FrontLabel::Indeterminate
        };
        (label, m)
    };
    let (edge_position, tail_length, edge_slope) = match last_profile {
        Some(p) => (p.edge_position, p.tail_length, p.edge_slope),
        None => (f64::NAN, f64::NAN, f64::NAN),
    };
    Ok(FrontShapeReport {
        label,
        edge_position,
        tail_length,
        edge_slope,
        tail_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::make_grid;
    use proptest::prelude::*;

    #[test]
    fn stationary_field_has_zero_speed() {
        let v = vec![1.0, 0.7, 0.2, 0.0];
        assert_eq!(speed_estimate_step(&v, &v, 0.1, 0.01, -1.0).unwrap(), 0.0);
    }

    #[test]
    fn shifted_step_moves_one_cell_per_step() {
        // v^n - v^{n+1} sums to -1, so s = dx/dt.
        let v_n: Vec<f64> = (0..20).map(|i| if i < 8 { 1.0 } else { 0.0 }).collect();
        let v_np1: Vec<f64> = (0..20).map(|i| if i < 9 { 1.0 } else { 0.0 }).collect();
        let s = speed_estimate_step(&v_n, &v_np1, 0.05, 0.01, -1.0).unwrap();
        assert!((s - 5.0).abs() < 1e-12);
        assert_eq!(
            speed_estimate_step(&v_n, &v_np1, 0.05, 0.01, 0.0),
            Err(Error::ZeroJump)
        );
    }

    #[test]
    fn asymptotic_speed_tail_means() {
        let constant = SpeedSeries {
            phi_jump: -1.0,
            values: (0..40).map(|i| (i as f64, 0.5)).collect(),
        };
        for frac in [0.1, 0.25, 1.0] {
            assert_eq!(asymptotic_speed(&constant, frac).unwrap(), 0.5);
        }
        // Oracle: the mean of k/(n-1), k = 0..n-1, is 1/2.
        let n = 101;
        let ramp = SpeedSeries {
            phi_jump: -1.0,
            values: (0..n).map(|k| (k as f64, k as f64 / (n - 1) as f64)).collect(),
        };
        assert!((asymptotic_speed(&ramp, 1.0).unwrap() - 0.5).abs() < 1e-15);
        let sum = speed_summary(&ramp, 1.0).unwrap();
        assert_eq!(sum.spread, 1.0);
        let empty = SpeedSeries::new(-1.0).unwrap();
        assert_eq!(asymptotic_speed(&empty, 0.25), Err(Error::EmptySeries));
        assert!(asymptotic_speed(&constant, 0.0).is_err());
    }

    #[test]
    fn exact_front_values() {
        assert_eq!(exact_front(3.0, 1.0, 0.5).unwrap(), 0.0);
        assert_eq!(exact_front(0.5, 1.0, 0.5).unwrap(), 0.0);
        let x = 0.5 - std::f64::consts::LN_2;
        assert!((exact_front(x, 1.0, 0.5).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(exact_front(0.0, 0.0, 0.0), Err(Error::NonPositiveD(0.0)));
        assert!((exact_front(-60.0, 0.0, 0.5).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exact_front_solves_the_heterogeneous_equation() {
        // Residual of v_t - v(1-v) - d (v v_x)_x by centred differences.
        let h = 1e-4;
        for d in [0.1, 0.5, 0.9] {
            let f = |x: f64, t: f64| exact_front(x, t, d).unwrap();
            let t = 2.0;
            let edge = exact_speed(d) * t;
            for k in 0..20 {
                let x = edge - 0.1 - 0.15 * k as f64;
                let v = f(x, t);
                let vt = (f(x, t + h) - f(x, t - h)) / (2.0 * h);
                let flux = |y: f64| {
                    let vy = (f(y + h / 2.0, t) - f(y - h / 2.0, t)) / h;
                    f(y, t) * vy
                };
                let div = (flux(x + h / 2.0) - flux(x - h / 2.0)) / h;
                let res = vt - v * (1.0 - v) - d * div;
                assert!(res.abs() < 1e-6, "d={d} x={x}: residual {res}");
            }
            // Continuous at the edge.
            assert!(f(edge - 1e-9, t) < 1e-8);
        }
    }

    #[test]
    fn exact_front_speed_is_recovered_by_the_estimator() {
        let dx = 0.01;
        let dt = 0.01;
        for d in [0.1, 0.5, 0.9] {
            let grid = make_grid(-20.0, 20.0, dx).unwrap();
            let centers = grid.centers();
            let sample = |t: f64| -> Vec<f64> {
                centers.iter().map(|&x| exact_front(x, t, d).unwrap()).collect()
            };
            let mut series = SpeedSeries::new(-1.0).unwrap();
            let mut prev = sample(0.0);
            for n in 0..200 {
                let next = sample((n + 1) as f64 * dt);
                let s = speed_estimate_step(&prev, &next, dx, dt, -1.0).unwrap();
                series.values.push((n as f64 * dt, s));
                prev = next;
            }
            let s = asymptotic_speed(&series, 0.25).unwrap();
            assert!((s - exact_speed(d)).abs() <= 1e-3, "d={d}: {s}");
        }
    }

    #[test]
    fn error_norm_closed_forms() {
        let a = vec![0.3, 0.1, 0.9];
        assert_eq!(error_norms(&a, &a, 0.1).unwrap(), ErrorNorms { l_inf: 0.0, l2: 0.0 });
        let n = 50;
        let dx = 0.02;
        let b: Vec<f64> = vec![0.0; n];
        let c: Vec<f64> = vec![-0.25; n];
        let e = error_norms(&c, &b, dx).unwrap();
        assert_eq!(e.l_inf, 0.25);
        assert!((e.l2 - 0.25 * (n as f64 * dx).sqrt()).abs() < 1e-15);
        assert!(error_norms(&a, &b, dx).is_err());
    }

    fn sampled_exact(grid: &Grid1D, d: f64, times: &[f64], x0: f64) -> Vec<Vec<f64>> {
        times
            .iter()
            .map(|&t| {
                grid.centers()
                    .iter()
                    .map(|&x| exact_front(x - x0, t, d).unwrap())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn exact_fronts_are_sharp() {
        for dx in [0.05, 0.01] {
            let grid = make_grid(0.0, 40.0, dx).unwrap();
            for d in [0.1, 0.5, 0.9] {
                let snaps = sampled_exact(&grid, d, &[0.0, 5.0, 10.0, 15.0, 20.0], 10.0);
                let refs: Vec<&[f64]> = snaps.iter().map(|s| s.as_slice()).collect();
                let rep = classify_front(&refs, &grid, &ShapeThresholds::default()).unwrap();
                assert_eq!(rep.label, FrontLabel::Sharp, "d={d} dx={dx}: {rep:?}");
                assert!(rep.tail_length >= 0.0);
                let edge = 10.0 + exact_speed(d) * 20.0;
                assert!((rep.edge_position - edge).abs() <= 2.0 * dx);
            }
        }
    }

    #[test]
    fn exponential_tails_are_smooth() {
        let grid = make_grid(0.0, 40.0, 0.01).unwrap();
        let snaps: Vec<Vec<f64>> = [10.0, 15.0, 20.0]
            .iter()
            .map(|&c| {
                grid.centers()
                    .iter()
                    .map(|&x| 1.0 / (1.0 + (3.0 * (x - c)).exp()))
                    .collect()
            })
            .collect();
        let refs: Vec<&[f64]> = snaps.iter().map(|s| s.as_slice()).collect();
        let rep = classify_front(&refs, &grid, &ShapeThresholds::default()).unwrap();
        assert_eq!(rep.label, FrontLabel::Smooth, "{rep:?}");
    }

    #[test]
    fn classifier_errors() {
        let grid = make_grid(0.0, 1.0, 0.01).unwrap();
        let zero = vec![0.0; 100];
        assert!(matches!(
            classify_front(&[zero.as_slice()], &grid, &ShapeThresholds::default()),
            Err(Error::FrontNotFound { .. })
        ));
        let near_edge: Vec<f64> = (0..100).map(|i| if i < 97 { 1.0 } else { 0.0 }).collect();
        assert!(matches!(
            classify_front(&[near_edge.as_slice()], &grid, &ShapeThresholds::default()),
            Err(Error::BoundaryContamination { .. })
        ));
    }

    proptest! {
        #[test]
        fn speed_is_linear_and_odd_in_the_jump(
            pairs in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..50),
            k in -3.0f64..3.0,
            jump in prop_oneof![-2.0f64..-0.1, 0.1f64..2.0],
        ) {
            let a: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let b: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let s = speed_estimate_step(&a, &b, 0.05, 0.001, jump).unwrap();
            let flipped = speed_estimate_step(&a, &b, 0.05, 0.001, -jump).unwrap();
            prop_assert!((s + flipped).abs() <= 1e-9 * (1.0 + s.abs()));
            // Scaling the increment by k scales the speed by k.
            let bk: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - k * (x - y)).collect();
            let sk = speed_estimate_step(&a, &bk, 0.05, 0.001, jump).unwrap();
            prop_assert!((sk - k * s).abs() <= 1e-9 * (1.0 + s.abs() * k.abs()));
        }

        #[test]
        fn speed_is_mirror_symmetric(
            pairs in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..50),
            jump in prop_oneof![-2.0f64..-0.1, 0.1f64..2.0],
        ) {
            // Reversing the cell order swaps phi_+ and phi_-; the space
            // integral is unchanged, so the mirrored front with the negated
            // jump moves with the opposite speed.
            let a: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let b: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let ar: Vec<f64> = a.iter().rev().copied().collect();
            let br: Vec<f64> = b.iter().rev().copied().collect();
            let s = speed_estimate_step(&a, &b, 0.05, 0.001, jump).unwrap();
            let sr = speed_estimate_step(&ar, &br, 0.05, 0.001, -jump).unwrap();
            prop_assert!((s + sr).abs() <= 1e-9 * (1.0 + s.abs()));
        }
    }
}
