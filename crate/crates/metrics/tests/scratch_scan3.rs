//! Temporary parameter scan (removed before finalization).
mod common;

use common::run_sims;
use phenolab_agents::{AgentSpec, OracleParams};
use phenolab_core::TaskId;
use phenolab_metrics::fit_learning;

fn scan(label: &str, params: OracleParams, alpha_true: f64, bias_true: f64) {
    let mut worst_alpha: f64 = 0.0;
    let mut worst_bias: f64 = 0.0;
    let mut sum_alpha = 0.0;
    for root in 0..12 {
        let ts = run_sims(
            TaskId::InstrumentalLearning,
            &AgentSpec::Oracle(params.clone()),
            10,
            900 + root * 13,
        );
        let fit = fit_learning(&ts).unwrap();
        sum_alpha += fit.alpha;
        worst_alpha = worst_alpha.max((fit.alpha - alpha_true).abs());
        worst_bias = worst_bias.max((fit.optimism_bias - bias_true).abs());
    }
    println!(
        "{label}: worst alpha err {worst_alpha:.3} (mean fitted {:.3}) worst bias err {worst_bias:.3}",
        sum_alpha / 12.0
    );
}

#[test]
#[ignore]
fn scan_case_a() {
    for invtemp in [8.0, 10.0, 12.0, 14.0] {
        scan(
            &format!("a invtemp {invtemp}"),
            OracleParams::RescorlaWagner { alpha: 0.1, invtemp },
            0.1,
            0.0,
        );
    }
}

#[test]
#[ignore]
fn scan_case_b() {
    for invtemp in [3.0, 4.0, 5.0, 6.0] {
        scan(
            &format!("b invtemp {invtemp}"),
            OracleParams::RwAsymmetric { alpha_plus: 0.45, alpha_minus: 0.15, invtemp },
            0.3,
            0.3,
        );
    }
}

#[test]
#[ignore]
fn scan_case_c() {
    for invtemp in [3.0, 4.0, 5.0, 6.0] {
        scan(
            &format!("c invtemp {invtemp}"),
            OracleParams::RwAsymmetric { alpha_plus: 0.4, alpha_minus: 0.6, invtemp },
            0.5,
            -0.2,
        );
    }
}
