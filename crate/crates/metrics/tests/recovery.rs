//! Parameter-recovery studies: every behavioral metric with a generative
//! oracle is checked by generating transcripts from known parameters and
//! fitting them back. These are the module's executable definition of
//! correctness.

mod common;

use common::run_sims;
use phenolab_agents::{AgentSpec, OracleParams};
use phenolab_core::TaskId;
use phenolab_metrics::{
    fit_exploration, fit_learning, fit_prior_likelihood, metacognition, model_basedness,
    performance,
};

fn oracle(params: OracleParams) -> AgentSpec {
    AgentSpec::Oracle(params)
}

#[test]
fn bayes_oracle_recovers_unit_weightings() {
    let ts = run_sims(
        TaskId::ProbabilisticReasoning,
        &oracle(OracleParams::BayesOptimal),
        100,
        101,
    );
    let fit = fit_prior_likelihood(&ts).unwrap();
    assert!((fit.beta1 - 1.0).abs() < 0.02, "beta1 {}", fit.beta1);
    assert!((fit.beta2 - 1.0).abs() < 0.02, "beta2 {}", fit.beta2);
    let acc = performance(TaskId::ProbabilisticReasoning, &ts).unwrap();
    assert!((acc - 1.0).abs() < 0.01, "posterior accuracy {acc}");
}

#[test]
fn system_neglect_weights_recover_within_tolerance() {
    let ts = run_sims(
        TaskId::ProbabilisticReasoning,
        &oracle(OracleParams::SystemNeglect { beta1: 0.6, beta2: 0.6 }),
        100,
        102,
    );
    let fit = fit_prior_likelihood(&ts).unwrap();
    assert!((fit.beta1 - 0.6).abs() < 0.05, "beta1 {}", fit.beta1);
    assert!((fit.beta2 - 0.6).abs() < 0.05, "beta2 {}", fit.beta2);
}

#[test]
fn rescorla_wagner_parameters_recover_from_ten_episodes() {
    let ts = run_sims(
        TaskId::InstrumentalLearning,
        &oracle(OracleParams::RwAsymmetric {
            alpha_plus: 0.45,
            alpha_minus: 0.15,
            invtemp: 5.0,
        }),
        10,
        103,
    );
    let fit = fit_learning(&ts).unwrap();
    assert!((fit.alpha - 0.3).abs() < 0.10, "alpha {}", fit.alpha);
    assert!(
        (fit.optimism_bias - 0.3).abs() < 0.12,
        "bias {} (plus {} minus {})",
        fit.optimism_bias,
        fit.alpha_plus,
        fit.alpha_minus
    );
}

#[test]
fn symmetric_learner_shows_no_optimism_bias() {
    let ts = run_sims(
        TaskId::InstrumentalLearning,
        &oracle(OracleParams::RescorlaWagner { alpha: 0.3, invtemp: 5.0 }),
        10,
        104,
    );
    let fit = fit_learning(&ts).unwrap();
    assert!(fit.optimism_bias.abs() < 0.08, "bias {}", fit.optimism_bias);
}

#[test]
fn two_step_discriminates_model_based_from_model_free() {
    let model_based = run_sims(
        TaskId::TwoStep,
        &oracle(OracleParams::HybridTwoStep { w_model_based: 1.0, alpha: 0.5, invtemp: 5.0 }),
        100,
        105,
    );
    let mb = model_basedness(&model_based).unwrap();
    assert!(mb.interaction.value > 0.0, "mb beta {}", mb.interaction.value);
    assert!(mb.interaction.z > 3.0, "mb z {}", mb.interaction.z);

    let model_free = run_sims(
        TaskId::TwoStep,
        &oracle(OracleParams::HybridTwoStep { w_model_based: 0.0, alpha: 0.5, invtemp: 5.0 }),
        100,
        106,
    );
    let mf = model_basedness(&model_free).unwrap();
    assert!(mf.interaction.z.abs() < 2.0, "mf z {}", mf.interaction.z);
}

#[test]
fn horizon_noise_shows_up_as_random_not_directed_exploration() {
    let ts = run_sims(
        TaskId::Horizon,
        &oracle(OracleParams::HorizonNoisy { invtemp_short: 0.3, invtemp_long: 0.05 }),
        400,
        107,
    );
    let fit = fit_exploration(&ts).unwrap();
    assert!(fit.random.z > 3.0, "random z {}", fit.random.z);
    assert!(fit.directed.z.abs() < 3.0, "directed z {}", fit.directed.z);
}

#[test]
fn information_seeking_shows_up_as_directed_not_random_exploration() {
    let ts = run_sims(
        TaskId::Horizon,
        &oracle(OracleParams::HorizonInfoSeek { p_explore: 0.8, invtemp: 0.3 }),
        400,
        108,
    );
    let fit = fit_exploration(&ts).unwrap();
    assert!(fit.directed.z > 3.0, "directed z {}", fit.directed.z);
    assert!(fit.random.z.abs() < 3.0, "random z {}", fit.random.z);
}

#[test]
fn greedy_agent_shows_neither_form_of_exploration() {
    let ts = run_sims(
        TaskId::Horizon,
        &oracle(OracleParams::HorizonNoisy { invtemp_short: 0.3, invtemp_long: 0.3 }),
        400,
        109,
    );
    let fit = fit_exploration(&ts).unwrap();
    assert!(
        fit.directed.value.abs() < 2.0 * fit.directed.se,
        "directed {} se {}",
        fit.directed.value,
        fit.directed.se
    );
    assert!(
        fit.random.value.abs() < 2.0 * fit.random.se,
        "random {} se {}",
        fit.random.value,
        fit.random.se
    );
}

#[test]
fn random_agent_qsr_matches_closed_form() {
    // Accuracy is Bernoulli(~0.5) independent of uniform confidence, so
    // QSR = 1 - (E[acc^2] - 2 E[acc] E[u] + E[u^2]) = 1 - (0.5 - 0.5 + 1/3).
    let ts = run_sims(TaskId::RestlessBandit, &oracle(OracleParams::Random), 30, 110);
    let meta = metacognition(&ts).unwrap();
    assert!(!meta.constant_confidence);
    assert!((meta.qsr - (1.0 - 0.335)).abs() < 0.02, "qsr {}", meta.qsr);
}

#[test]
fn two_step_reward_parity_between_model_based_and_model_free() {
    // The task is designed so planning confers no reward advantage.
    let n = 2_000;
    let mb = run_sims(
        TaskId::TwoStep,
        &oracle(OracleParams::HybridTwoStep { w_model_based: 1.0, alpha: 0.5, invtemp: 5.0 }),
        n,
        111,
    );
    let mf = run_sims(
        TaskId::TwoStep,
        &oracle(OracleParams::HybridTwoStep { w_model_based: 0.0, alpha: 0.5, invtemp: 5.0 }),
        n,
        112,
    );
    let mb_rate = performance(TaskId::TwoStep, &mb).unwrap();
    let mf_rate = performance(TaskId::TwoStep, &mf).unwrap();
    assert!(
        (mb_rate - mf_rate).abs() < 0.02,
        "model-based {mb_rate} vs model-free {mf_rate}"
    );
}
