//! Finite-volume spatial operators on a uniform mesh.
//!
//! All operators close the boundary with one mirrored ghost cell per side
//! (`f[-1] = f[0]`, `f[n] = f[n-1]`), which makes the boundary fluxes vanish.

use crate::error::{Error, Result};

#[inline]
fn left(f: &[f64], i: usize) -> f64 {
    if i == 0 {
        f[0]
    } else {
        f[i - 1]
    }
}

#[inline]
fn right(f: &[f64], i: usize) -> f64 {
    if i + 1 == f.len() {
        f[i]
    } else {
        f[i + 1]
    }
}

/// Discrete `((1-u) v_x)_x` in the expanded form produced by the
/// finite-volume interface averages:
///
/// ```text
/// [ (1-u_i)(v_{i+1} - 2 v_i + v_{i-1})
///   - 1/2 (v_{i+1} - v_i)(u_{i+1} - u_i)
///   - 1/2 (v_i - v_{i-1})(u_i - u_{i-1}) ] / dx^2
/// ```
pub fn degenerate_flux_divergence(u: &[f64], v: &[f64], dx: f64) -> Result<Vec<f64>> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            expected: v.len(),
            got: u.len(),
        });
    }
    if v.len() < 3 {
        return Err(Error::GridTooSmall {
            min: 3,
            got: v.len(),
        });
    }
    let inv = 1.0 / (dx * dx);
    Ok((0..v.len())
        .map(|i| {
            let (vm, vi, vp) = (left(v, i), v[i], right(v, i));
            let (um, ui, up) = (left(u, i), u[i], right(u, i));
            inv * ((1.0 - ui) * (vp - 2.0 * vi + vm)
                - 0.5 * (vp - vi) * (up - ui)
                - 0.5 * (vi - vm) * (ui - um))
        })
        .collect())
}

/// Interface diffusivities `a_{i+1/2} = 1 - (u_i + u_{i+1})/2` for the
/// `n - 1` interior faces.
///
/// The bracket of [`degenerate_flux_divergence`] regroups exactly as
/// `a_{i+1/2}(v_{i+1} - v_i) - a_{i-1/2}(v_i - v_{i-1})`, which is the form
/// the implicit matrix is assembled from.
pub fn face_diffusivity(u: &[f64]) -> Vec<f64> {
    u.windows(2).map(|w| 1.0 - 0.5 * (w[0] + w[1])).collect()
}

/// Three-point Laplacian `(v_{i+1} - 2 v_i + v_{i-1}) / dx^2`.
pub fn laplacian(v: &[f64], dx: f64) -> Vec<f64> {
    let inv = 1.0 / (dx * dx);
    (0..v.len())
        .map(|i| inv * (right(v, i) - 2.0 * v[i] + left(v, i)))
        .collect()
}

/// Diffusion increment `H` of the explicit one-equation scheme for cell `i`.
///
/// Cells with `v_i < 1/d` use the porous-medium form of `d (v v_x)_x`;
/// cells with `v_i >= 1/d` use the plain Laplacian.
#[inline]
pub fn one_eq_increment(v: &[f64], i: usize, d: f64, lambda: f64) -> f64 {
    let (vm, vi, vp) = (left(v, i), v[i], right(v, i));
    if vi < 1.0 / d {
        d * lambda
            * (0.5 * vi * (vp - 2.0 * vi + vm) + 0.5 * vp * (vp - vi) - 0.5 * vm * (vi - vm))
    } else {
        lambda * (vm - 2.0 * vi + vp)
    }
}

/// Effective diffusivity `F(v) = d v` below `1/d`, 1 above.
#[inline]
pub fn one_eq_diffusivity(v: f64, d: f64) -> f64 {
    if v < 1.0 / d {
        d * v
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constants_have_no_flux() {
        let u = vec![0.3; 10];
        let v = vec![0.8; 10];
        assert!(degenerate_flux_divergence(&u, &v, 0.1)
            .unwrap()
            .iter()
            .all(|&x| x == 0.0));
    }

    #[test]
    fn quadratic_has_unit_second_derivative() {
        // Oracle: the centred second difference of x^2 is exactly 2.
        let dx = 0.01;
        let x: Vec<f64> = (0..50).map(|i| (i as f64 + 0.5) * dx).collect();
        let v: Vec<f64> = x.iter().map(|x| x * x).collect();
        let u = vec![0.0; 50];
        let got = degenerate_flux_divergence(&u, &v, dx).unwrap();
        for i in 1..49 {
            let oracle = (x[i + 1].powi(2) - 2.0 * x[i].powi(2) + x[i - 1].powi(2)) / (dx * dx);
            assert!((got[i] - 2.0).abs() < 1e-8, "cell {i}: {}", got[i]);
            assert!((got[i] - oracle).abs() < 1e-9);
        }
    }

    #[test]
    fn healthy_tissue_blocks_diffusion() {
        let u = vec![1.0; 8];
        let v = vec![0.0, 0.5, 0.9, 0.1, 0.2, 0.7, 0.3, 1.0];
        let got = degenerate_flux_divergence(&u, &v, 0.05).unwrap();
        assert!(got.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(matches!(
            degenerate_flux_divergence(&[0.0; 4], &[0.0; 5], 0.1),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            degenerate_flux_divergence(&[0.0; 2], &[0.0; 2], 0.1),
            Err(Error::GridTooSmall { .. })
        ));
    }

    #[test]
    fn branch_selection_is_half_open() {
        // v = 1/d exactly takes the Laplacian branch.
        let v = [0.5, 0.5, 0.5];
        assert_eq!(one_eq_diffusivity(0.5, 2.0), 1.0);
        assert_eq!(one_eq_diffusivity(0.499, 2.0), 2.0 * 0.499);
        assert_eq!(one_eq_increment(&v, 1, 2.0, 0.4), 0.0);
        let v = [0.2, 0.5, 0.9];
        assert_eq!(one_eq_increment(&v, 1, 2.0, 0.4), 0.4 * (0.2 - 1.0 + 0.9));
    }

    proptest! {
        #[test]
        fn expanded_bracket_equals_face_form(
            pairs in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 3..40),
        ) {
            let u: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let v: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let n = v.len();
            let dx = 0.1;
            let got = degenerate_flux_divergence(&u, &v, dx).unwrap();
            let a = face_diffusivity(&u);
            for i in 0..n {
                let fp = if i + 1 < n { a[i] * (v[i + 1] - v[i]) } else { 0.0 };
                let fm = if i > 0 { a[i - 1] * (v[i] - v[i - 1]) } else { 0.0 };
                prop_assert!((got[i] - (fp - fm) / (dx * dx)).abs() < 1e-10);
            }
            // Flux form with closed boundaries sums to zero.
            prop_assert!(got.iter().sum::<f64>().abs() < 1e-9);
        }

        #[test]
        fn porous_branch_is_flux_form(v in prop::collection::vec(0.0f64..1.0, 3..40)) {
            let d = 0.7;
            let n = v.len();
            let total: f64 = (0..n).map(|i| one_eq_increment(&v, i, d, 1.0)).sum();
            prop_assert!(total.abs() < 1e-12);
        }
    }
}
