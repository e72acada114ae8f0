use nalgebra::{DMatrix, DVector};

use crate::{build_design, NumoptError, RegressionResult};

/// Ordinary least squares with an intercept.
///
/// `rows` holds one regressor vector per observation (no intercept column);
/// singular designs are rejected with the offending column named.
pub fn ols(rows: &[Vec<f64>], y: &[f64]) -> Result<RegressionResult, NumoptError> {
    let x = build_design(rows, y.len())?;
    let yv = DVector::from_column_slice(y);
    let n = x.nrows();
    let p = x.ncols();

    // Thin QR: beta solves R beta = Q^T y.
    let qr = x.clone().qr();
    let qty = qr.q().transpose() * &yv;
    let beta = qr
        .r()
        .solve_upper_triangular(&qty)
        .ok_or_else(|| NumoptError::OptimizationFailure("QR solve failed".into()))?;

    let residuals = &yv - &x * &beta;
    let rss: f64 = residuals.iter().map(|r| r * r).sum();
    let sigma2 = rss / (n - p) as f64;

    let xtx: DMatrix<f64> = x.transpose() * &x;
    let cov = xtx
        .try_inverse()
        .ok_or(NumoptError::SingularDesign {
            column: "intercept".to_string(),
        })?
        .scale(sigma2);
    let se: Vec<f64> = (0..p).map(|j| cov[(j, j)].max(0.0).sqrt()).collect();

    Ok(RegressionResult {
        coefficients: beta.iter().copied().collect(),
        standard_errors: se,
        n_obs: n,
        converged: true,
        separated: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_is_recovered() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64]).collect();
        let y: Vec<f64> = rows.iter().map(|r| 2.0 * r[0] + 1.0).collect();
        let fit = ols(&rows, &y).unwrap();
        assert!((fit.coefficients[0] - 1.0).abs() < 1e-10);
        assert!((fit.coefficients[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn constant_response_has_zero_slope() {
        let rows: Vec<Vec<f64>> = (0..15).map(|i| vec![i as f64]).collect();
        let y = vec![3.5; 15];
        let fit = ols(&rows, &y).unwrap();
        assert!(fit.coefficients[1].abs() < 1e-12);
    }

    #[test]
    fn duplicate_column_is_named() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, 2.0 * i as f64]).collect();
        let y = vec![0.0; 10];
        match ols(&rows, &y) {
            Err(NumoptError::SingularDesign { column }) => assert_eq!(column, "x2"),
            other => panic!("expected singular design, got {other:?}"),
        }
    }

    #[test]
    fn too_few_rows_is_rejected() {
        let rows = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        let y = vec![0.0, 1.0];
        assert!(matches!(
            ols(&rows, &y),
            Err(NumoptError::TooFewObservations { .. })
        ));
    }
}
