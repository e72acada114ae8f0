//! Temporary parameter scan (removed before finalization).
mod common;

use common::run_sims;
use phenolab_agents::{AgentSpec, OracleParams};
use phenolab_core::TaskId;
use phenolab_metrics::{fit_exploration, fit_learning};

#[test]
#[ignore]
fn scan_rw_invtemp() {
    for invtemp in [2.0, 3.0, 4.0, 5.0, 7.0] {
        for (ap, am) in [(0.3, 0.3), (0.1, 0.1), (0.45, 0.15), (0.4, 0.6)] {
            let mut worst_alpha: f64 = 0.0;
            let mut worst_bias: f64 = 0.0;
            for root in 0..6 {
                let ts = run_sims(
                    TaskId::InstrumentalLearning,
                    &AgentSpec::Oracle(OracleParams::RwAsymmetric {
                        alpha_plus: ap,
                        alpha_minus: am,
                        invtemp,
                    }),
                    10,
                    500 + root,
                );
                let fit = fit_learning(&ts).unwrap();
                let alpha_err = (fit.alpha - (ap + am) / 2.0).abs();
                let bias_err = (fit.optimism_bias - (ap - am)).abs();
                worst_alpha = worst_alpha.max(alpha_err);
                worst_bias = worst_bias.max(bias_err);
            }
            println!(
                "invtemp {invtemp} (ap {ap} am {am}): worst alpha err {worst_alpha:.3} worst bias err {worst_bias:.3}"
            );
        }
    }
}

#[test]
#[ignore]
fn scan_horizon_noise() {
    for (short, long, n) in [
        (0.3, 0.05, 400),
        (0.3, 0.0, 800),
        (0.25, 0.0, 1500),
        (0.2, 0.0, 1500),
        (0.15, 0.0, 2000),
    ] {
        let mut zs = Vec::new();
        for root in 0..4 {
            let ts = run_sims(
                TaskId::Horizon,
                &AgentSpec::Oracle(OracleParams::HorizonNoisy {
                    invtemp_short: short,
                    invtemp_long: long,
                }),
                n,
                600 + root,
            );
            let fit = fit_exploration(&ts).unwrap();
            zs.push((fit.random.z, fit.directed.z));
        }
        println!("short {short} long {long} n {n}: {zs:?}");
    }
}
