//! Tridiagonal solver (Thomas algorithm, no pivoting).

use crate::error::{Error, Result};

/// `A x = rhs` with `A` tridiagonal.
///
/// Row `i` reads `sub[i-1] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    fn check(&self) -> Result<()> {
        let n = self.diag.len();
        let off = n.saturating_sub(1);
        for len in [self.sub.len(), self.sup.len()] {
            if len != off {
                return Err(Error::LengthMismatch {
                    expected: off,
                    got: len,
                });
            }
        }
        if self.rhs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: self.rhs.len(),
            });
        }
        Ok(())
    }

    /// `A x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * x[i];
                if i > 0 {
                    acc += self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    acc += self.sup[i] * x[i + 1];
                }
                acc
            })
            .collect()
    }

    /// `max_i |(A x - rhs)_i|`.
    pub fn residual_inf(&self, x: &[f64]) -> f64 {
        self.apply(x)
            .iter()
            .zip(&self.rhs)
            .map(|(ax, b)| (ax - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Solves the system by forward elimination and back substitution.
///
/// Fails with `ZeroPivot` when an elimination pivot vanishes; diagonally
/// dominant systems, which is what the semi-implicit steppers assemble,
/// never hit that case.
pub fn solve_tridiagonal(sys: &TridiagonalSystem) -> Result<Vec<f64>> {
    sys.check()?;
    let n = sys.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c_star = vec![0.0; n];
    let mut x = vec![0.0; n];

    let mut pivot = sys.diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(Error::ZeroPivot { row: 0 });
    }
    if n > 1 {
        c_star[0] = sys.sup[0] / pivot;
    }
    x[0] = sys.rhs[0] / pivot;
    for i in 1..n {
        let a = sys.sub[i - 1];
        pivot = sys.diag[i] - a * c_star[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::ZeroPivot { row: i });
        }
        if i + 1 < n {
            c_star[i] = sys.sup[i] / pivot;
        }
        x[i] = (sys.rhs[i] - a * x[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        x[i] -= c_star[i] * x[i + 1];
    }
    Ok(x)
}
