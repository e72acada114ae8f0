//! Numerical kernels shared by the metric-fitting code: ordinary least
//! squares, logistic regression via iteratively reweighted least squares,
//! and a bounded Nelder-Mead search used for likelihood maximization.
//!
//! All routines work on plain `&[Vec<f64>]` design rows (without an
//! intercept column; one is prepended internally) so callers never touch
//! matrix types.

mod logistic;
mod nelder_mead;
mod ols;

pub use logistic::{logistic_fit, logistic_gradient, logistic_nll};
pub use nelder_mead::{minimize_nll, GridSpec, OptResult};
pub use ols::ols;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumoptError {
    #[error("design matrix is singular: column {column} is linearly dependent on earlier columns")]
    SingularDesign { column: String },
    #[error("need more observations than coefficients: {n_obs} rows for {n_coef} coefficients")]
    TooFewObservations { n_obs: usize, n_coef: usize },
    #[error("logistic regression requires both response classes to be present")]
    SingleClass,
    #[error("design rows have inconsistent lengths")]
    RaggedDesign,
    #[error("optimization failed: {0}")]
    OptimizationFailure(String),
    #[error("invalid bounds: lower {lo} not below upper {hi}")]
    InvalidBounds { lo: f64, hi: f64 },
}

/// Fitted regression coefficients with their standard errors.
///
/// `coefficients[0]` is always the intercept; the remaining entries follow
/// the order of the supplied regressors.
#[derive(Debug, Clone)]
pub struct RegressionResult {
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub n_obs: usize,
    pub converged: bool,
    /// Set by `logistic_fit` when the fitted predictor perfectly separates
    /// the classes; coefficients then come from the ridge-stabilized fit.
    pub separated: bool,
}

impl RegressionResult {
    /// Wald z-value for coefficient `i` (intercept is index 0).
    pub fn z_value(&self, i: usize) -> f64 {
        let se = self.standard_errors[i];
        if se > 0.0 {
            self.coefficients[i] / se
        } else {
            f64::INFINITY * self.coefficients[i].signum()
        }
    }
}

/// Column labels used in singular-design errors: intercept, then x1, x2, ...
pub(crate) fn column_name(index: usize) -> String {
    if index == 0 {
        "intercept".to_string()
    } else {
        format!("x{index}")
    }
}

/// Builds the design matrix with a leading intercept column, screening for
/// linearly dependent columns via modified Gram-Schmidt.
pub(crate) fn build_design(
    rows: &[Vec<f64>],
    y_len: usize,
) -> Result<nalgebra::DMatrix<f64>, NumoptError> {
    let n = rows.len();
    if n != y_len {
        return Err(NumoptError::RaggedDesign);
    }
    let k = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != k) {
        return Err(NumoptError::RaggedDesign);
    }
    let p = k + 1;
    if n <= p {
        return Err(NumoptError::TooFewObservations { n_obs: n, n_coef: p });
    }
    let mut x = nalgebra::DMatrix::<f64>::zeros(n, p);
    for (i, row) in rows.iter().enumerate() {
        x[(i, 0)] = 1.0;
        for (j, v) in row.iter().enumerate() {
            x[(i, j + 1)] = *v;
        }
    }
    screen_rank(&x)?;
    Ok(x)
}

fn screen_rank(x: &nalgebra::DMatrix<f64>) -> Result<(), NumoptError> {
    let n = x.nrows();
    let mut basis: Vec<nalgebra::DVector<f64>> = Vec::new();
    for j in 0..x.ncols() {
        let mut col = nalgebra::DVector::from_iterator(n, x.column(j).iter().copied());
        let scale = col.norm().max(1.0);
        for b in &basis {
            let proj = b.dot(&col);
            col -= b * proj;
        }
        if col.norm() <= 1e-10 * scale {
            return Err(NumoptError::SingularDesign {
                column: column_name(j),
            });
        }
        let norm = col.norm();
        basis.push(col / norm);
    }
    Ok(())
}
