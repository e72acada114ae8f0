use crate::NumoptError;

/// Outcome of a bounded multi-start Nelder-Mead run.
#[derive(Debug, Clone)]
pub struct OptResult {
    pub params: Vec<f64>,
    pub nll: f64,
    pub iterations: usize,
    pub restarts_used: usize,
}

/// Start-point grid: `per_dim` interior quantiles per dimension, fully
/// crossed. 5 per dimension gives the 5x5 (or 5x5x5) grid used for the
/// choice-model fits.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub per_dim: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { per_dim: 5 }
    }
}

fn grid_starts(bounds: &[(f64, f64)], per_dim: usize) -> Vec<Vec<f64>> {
    let d = bounds.len();
    let mut starts = vec![Vec::with_capacity(d)];
    for &(lo, hi) in bounds {
        let mut expanded = Vec::with_capacity(starts.len() * per_dim);
        for base in &starts {
            for i in 0..per_dim {
                let frac = (i as f64 + 0.5) / per_dim as f64;
                let mut s = base.clone();
                s.push(lo + frac * (hi - lo));
                expanded.push(s);
            }
        }
        starts = expanded;
    }
    starts
}

fn clamp(point: &mut [f64], bounds: &[(f64, f64)]) {
    for (x, &(lo, hi)) in point.iter_mut().zip(bounds) {
        *x = x.clamp(lo, hi);
    }
}

fn finite_or_inf(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        f64::INFINITY
    }
}

/// Minimizes `f` over a box via Nelder-Mead restarted from a coarse grid of
/// starting points; the best result across all restarts is returned. The
/// result is never worse than the best evaluated start.
pub fn minimize_nll(
    f: &dyn Fn(&[f64]) -> f64,
    bounds: &[(f64, f64)],
    grid: GridSpec,
) -> Result<OptResult, NumoptError> {
    for &(lo, hi) in bounds {
        if !(lo < hi) {
            return Err(NumoptError::InvalidBounds { lo, hi });
        }
    }
    let starts = grid_starts(bounds, grid.per_dim.max(1));
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut total_iters = 0;
    let mut restarts_used = 0;

    for start in &starts {
        restarts_used += 1;
        let (point, value, iters) = simplex_descent(f, start, bounds);
        total_iters += iters;
        if best.as_ref().is_none_or(|(_, b)| value < *b) {
            best = Some((point, value));
        }
    }

    match best {
        Some((params, nll)) if nll.is_finite() => Ok(OptResult {
            params,
            nll,
            iterations: total_iters,
            restarts_used,
        }),
        _ => Err(NumoptError::OptimizationFailure(format!(
            "objective not finite at any of {restarts_used} starting points"
        ))),
    }
}

fn simplex_descent(
    f: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    bounds: &[(f64, f64)],
) -> (Vec<f64>, f64, usize) {
    let d = start.len();
    let eval = |p: &[f64]| finite_or_inf(f(p));

    // Initial simplex: start plus one vertex per dimension, offset by 5% of
    // the bound width and clamped back into the box.
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    simplex.push((start.to_vec(), eval(start)));
    for (i, &(lo, hi)) in bounds.iter().enumerate() {
        let mut v = start.to_vec();
        let step = 0.05 * (hi - lo);
        v[i] = if v[i] + step <= hi { v[i] + step } else { v[i] - step };
        clamp(&mut v, bounds);
        let fv = eval(&v);
        simplex.push((v, fv));
    }

    let max_iter = 400 * d;
    let mut iters = 0;
    for _ in 0..max_iter {
        iters += 1;
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[d].1 - simplex[0].1;
        if spread.abs() < 1e-12 && simplex_size(&simplex) < 1e-10 {
            break;
        }

        let centroid: Vec<f64> = (0..d)
            .map(|j| simplex[..d].iter().map(|(v, _)| v[j]).sum::<f64>() / d as f64)
            .collect();
        let worst = simplex[d].clone();

        let propose = |coef: f64| {
            let mut p: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + coef * (c - w))
                .collect();
            clamp(&mut p, bounds);
            let fp = eval(&p);
            (p, fp)
        };

        let reflected = propose(1.0);
        if reflected.1 < simplex[0].1 {
            let expanded = propose(2.0);
            simplex[d] = if expanded.1 < reflected.1 { expanded } else { reflected };
        } else if reflected.1 < simplex[d - 1].1 {
            simplex[d] = reflected;
        } else {
            let contracted = if reflected.1 < worst.1 {
                propose(0.5)
            } else {
                propose(-0.5)
            };
            if contracted.1 < worst.1.min(reflected.1) {
                simplex[d] = contracted;
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    for (x, b) in entry.0.iter_mut().zip(&best) {
                        *x = b + 0.5 * (*x - b);
                    }
                    clamp(&mut entry.0, bounds);
                    entry.1 = eval(&entry.0);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (best_point, best_value) = simplex.swap_remove(0);
    (best_point, best_value, iters)
}

fn simplex_size(simplex: &[(Vec<f64>, f64)]) -> f64 {
    let best = &simplex[0].0;
    simplex[1..]
        .iter()
        .map(|(v, _)| {
            v.iter()
                .zip(best)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}
