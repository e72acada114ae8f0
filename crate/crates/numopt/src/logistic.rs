use nalgebra::{DMatrix, DVector};

use crate::{build_design, NumoptError, RegressionResult};

/// Ridge strength applied to every logistic fit; keeps coefficients finite
/// under (near-)separation without visibly biasing well-posed fits.
pub const RIDGE: f64 = 1e-4;

const MAX_ITER: usize = 200;
const TOL: f64 = 1e-10;

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Penalized Bernoulli negative log-likelihood at `beta`.
///
/// `rows` does not include the intercept column; `beta[0]` is the intercept.
pub fn logistic_nll(beta: &[f64], rows: &[Vec<f64>], y: &[f64], ridge: f64) -> f64 {
    let mut nll = 0.0;
    for (row, &yi) in rows.iter().zip(y) {
        let eta = beta[0]
            + row
                .iter()
                .zip(&beta[1..])
                .map(|(x, b)| x * b)
                .sum::<f64>();
        // log(1 + e^eta) - y*eta, computed stably
        let log1p_exp = if eta > 0.0 {
            eta + (-eta).exp().ln_1p()
        } else {
            eta.exp().ln_1p()
        };
        nll += log1p_exp - yi * eta;
    }
    nll + 0.5 * ridge * beta.iter().map(|b| b * b).sum::<f64>()
}

/// Analytic gradient of `logistic_nll` with respect to `beta`.
pub fn logistic_gradient(beta: &[f64], rows: &[Vec<f64>], y: &[f64], ridge: f64) -> Vec<f64> {
    let mut grad = vec![0.0; beta.len()];
    for (row, &yi) in rows.iter().zip(y) {
        let eta = beta[0]
            + row
                .iter()
                .zip(&beta[1..])
                .map(|(x, b)| x * b)
                .sum::<f64>();
        let resid = sigmoid(eta) - yi;
        grad[0] += resid;
        for (g, x) in grad[1..].iter_mut().zip(row) {
            *g += resid * x;
        }
    }
    for (g, b) in grad.iter_mut().zip(beta) {
        *g += ridge * b;
    }
    grad
}

/// Logistic regression by iteratively reweighted least squares with a small
/// L2 ridge. Perfect separation is detected post hoc and flagged; the
/// ridge-stabilized coefficients are still returned.
pub fn logistic_fit(rows: &[Vec<f64>], y: &[f64]) -> Result<RegressionResult, NumoptError> {
    if y.iter().any(|v| *v != 0.0 && *v != 1.0) {
        return Err(NumoptError::OptimizationFailure(
            "logistic response must be 0/1".into(),
        ));
    }
    let ones = y.iter().filter(|v| **v == 1.0).count();
    if ones == 0 || ones == y.len() {
        return Err(NumoptError::SingleClass);
    }
    let x = build_design(rows, y.len())?;
    let n = x.nrows();
    let p = x.ncols();

    let mut beta = DVector::<f64>::zeros(p);
    let mut nll = logistic_nll(beta.as_slice(), rows, y, RIDGE);
    let mut converged = false;

    for _ in 0..MAX_ITER {
        // Newton step on the penalized likelihood.
        let eta = &x * &beta;
        let mut grad = DVector::<f64>::zeros(p);
        let mut hess = DMatrix::<f64>::zeros(p, p);
        for i in 0..n {
            let pi = sigmoid(eta[i]);
            let w = (pi * (1.0 - pi)).max(1e-12);
            let resid = pi - y[i];
            for a in 0..p {
                grad[a] += resid * x[(i, a)];
                for b in a..p {
                    hess[(a, b)] += w * x[(i, a)] * x[(i, b)];
                }
            }
        }
        for a in 0..p {
            grad[a] += RIDGE * beta[a];
            hess[(a, a)] += RIDGE;
            for b in 0..a {
                hess[(a, b)] = hess[(b, a)];
            }
        }
        let step = hess
            .clone()
            .cholesky()
            .map(|c| c.solve(&grad))
            .ok_or_else(|| NumoptError::OptimizationFailure("Hessian not positive definite".into()))?;

        // Halve the step until the penalized nll does not increase; this
        // keeps the likelihood monotone over iterations.
        let mut scale = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            let candidate = &beta - &step * scale;
            let cand_nll = logistic_nll(candidate.as_slice(), rows, y, RIDGE);
            if cand_nll <= nll + 1e-15 {
                let delta = nll - cand_nll;
                beta = candidate;
                nll = cand_nll;
                improved = true;
                if delta < TOL {
                    converged = true;
                }
                break;
            }
            scale *= 0.5;
        }
        if !improved {
            converged = true;
        }
        if converged {
            break;
        }
    }

    // Separation check: does the fitted predictor split the classes exactly?
    let eta = &x * &beta;
    let mut min_pos = f64::INFINITY;
    let mut max_neg = f64::NEG_INFINITY;
    for i in 0..n {
        if y[i] == 1.0 {
            min_pos = min_pos.min(eta[i]);
        } else {
            max_neg = max_neg.max(eta[i]);
        }
    }
    let separated = min_pos >= max_neg && min_pos - max_neg > 1e-9;

    // Standard errors from the (ridge-regularized) Fisher information.
    let mut info = DMatrix::<f64>::zeros(p, p);
    for i in 0..n {
        let pi = sigmoid(eta[i]);
        let w = (pi * (1.0 - pi)).max(1e-12);
        for a in 0..p {
            for b in a..p {
                info[(a, b)] += w * x[(i, a)] * x[(i, b)];
            }
        }
    }
    for a in 0..p {
        info[(a, a)] += RIDGE;
        for b in 0..a {
            info[(a, b)] = info[(b, a)];
        }
    }
    let cov = info
        .try_inverse()
        .ok_or_else(|| NumoptError::OptimizationFailure("information matrix singular".into()))?;
    let se: Vec<f64> = (0..p).map(|j| cov[(j, j)].max(0.0).sqrt()).collect();

    Ok(RegressionResult {
        coefficients: beta.iter().copied().collect(),
        standard_errors: se,
        n_obs: n,
        converged,
        separated,
    })
}
