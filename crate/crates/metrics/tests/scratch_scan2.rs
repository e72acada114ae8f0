//! Temporary parameter scan (removed before finalization).
mod common;

use common::run_sims;
use phenolab_agents::{AgentSpec, OracleParams};
use phenolab_core::TaskId;
use phenolab_metrics::fit_learning;

#[test]
#[ignore]
fn scan_criterion_cases() {
    for invtemp in [7.0, 8.0, 10.0, 12.0] {
        for (label, params, alpha_true, bias_true) in [
            ("a", OracleParams::RescorlaWagner { alpha: 0.1, invtemp }, 0.1, 0.0),
            (
                "b",
                OracleParams::RwAsymmetric { alpha_plus: 0.45, alpha_minus: 0.15, invtemp },
                0.3,
                0.3,
            ),
            (
                "c",
                OracleParams::RwAsymmetric { alpha_plus: 0.4, alpha_minus: 0.6, invtemp },
                0.5,
                -0.2,
            ),
        ] {
            let mut worst_alpha: f64 = 0.0;
            let mut worst_bias: f64 = 0.0;
            for root in 0..8 {
                let ts = run_sims(
                    TaskId::InstrumentalLearning,
                    &AgentSpec::Oracle(params.clone()),
                    10,
                    700 + root,
                );
                let fit = fit_learning(&ts).unwrap();
                worst_alpha = worst_alpha.max((fit.alpha - alpha_true).abs());
                worst_bias = worst_bias.max((fit.optimism_bias - bias_true).abs());
            }
            println!(
                "invtemp {invtemp} case {label}: worst alpha err {worst_alpha:.3} worst bias err {worst_bias:.3}"
            );
        }
    }
}
