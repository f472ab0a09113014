use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{check_dim, Error, Result};

/// Solution of `(A + lambda I) x = C`.
#[derive(Clone, Debug)]
pub struct RegularizedSolution {
    pub x: DVector<f64>,
    /// `|(A + lambda I) x - C|`.
    pub residual: f64,
}

pub(crate) fn shifted(a: &DMatrix<f64>, lambda: f64) -> DMatrix<f64> {
    let mut m = a.clone();
    for k in 0..m.nrows() {
        m[(k, k)] += lambda;
    }
    m
}

pub(crate) fn factor(a: &DMatrix<f64>, lambda: f64) -> Result<Cholesky<f64, nalgebra::Dyn>> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::invalid(format!("regularization must be positive, got {lambda}")));
    }
    if a.nrows() != a.ncols() {
        return Err(Error::Solver(format!("matrix is {}x{}, not square", a.nrows(), a.ncols())));
    }
    // A is positive semidefinite up to round-off; symmetrize before factoring.
    let m = shifted(&((a + a.transpose()) * 0.5), lambda);
    Cholesky::new(m).ok_or_else(|| Error::Solver("regularized matrix is not positive definite".into()))
}

/// Tikhonov-regularized solve by Cholesky factorization.
pub fn solve_regularized(a: &DMatrix<f64>, c: &DVector<f64>, lambda: f64) -> Result<RegularizedSolution> {
    check_dim(a.nrows(), c.len())?;
    let chol = factor(a, lambda)?;
    let x = chol.solve(c);
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Solver("non-finite solution".into()));
    }
    let residual = (shifted(a, lambda) * &x - c).norm();
    Ok(RegularizedSolution { x, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_and_reports_residual() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let c = DVector::from_row_slice(&[1.0, -1.0]);
        let sol = solve_regularized(&a, &c, 1e-6).unwrap();
        assert!(sol.residual < 1e-12);
        let plain = a.clone().lu().solve(&c).unwrap();
        assert!((sol.x - plain).norm() < 1e-5);
    }

    #[test]
    fn singular_matrix_is_regularized() {
        let a = DMatrix::from_element(2, 2, 1.0);
        let c = DVector::from_row_slice(&[1.0, 1.0]);
        let sol = solve_regularized(&a, &c, 1e-6).unwrap();
        assert!((sol.x[0] - sol.x[1]).abs() < 1e-9);
        assert!((sol.x[0] - 0.5).abs() < 1e-5);
    }

    #[test]
    fn rejects_bad_input() {
        let a = DMatrix::from_element(2, 2, 1.0);
        assert!(solve_regularized(&a, &DVector::zeros(3), 1e-6).is_err());
        assert!(solve_regularized(&a, &DVector::zeros(2), 0.0).is_err());
        let indefinite = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
        assert!(matches!(solve_regularized(&indefinite, &DVector::zeros(2), 1e-6), Err(Error::Solver(_))));
        let empty = solve_regularized(&DMatrix::zeros(0, 0), &DVector::zeros(0), 1e-6).unwrap();
        assert_eq!(empty.x.len(), 0);
    }
}
