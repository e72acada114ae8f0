//! The seven task environments. Each module owns its generator, prompt
//! rendering, and episode state machine; prompts reproduce the task's
//! canonical wording with history serialized append-only, so every prompt
//! is a prefix-extension of the previous one.

pub mod bart;
pub mod horizon;
pub mod instrumental_learning;
pub mod probabilistic_reasoning;
pub mod restless_bandit;
pub mod temporal_discounting;
pub mod two_step;

use phenolab_core::{Environment, TaskId};

/// Builds the environment for one `(root seed, simulation index)` episode.
/// All per-episode randomness derives from these two values, so episodes
/// replay identically regardless of execution order.
pub fn build_env(task: TaskId, root_seed: u64, sim: u32) -> Box<dyn Environment> {
    match task {
        TaskId::ProbabilisticReasoning => Box::new(probabilistic_reasoning::build(root_seed, sim)),
        TaskId::Horizon => Box::new(horizon::build(root_seed, sim)),
        TaskId::RestlessBandit => Box::new(restless_bandit::build(root_seed, sim)),
        TaskId::InstrumentalLearning => Box::new(instrumental_learning::build(root_seed, sim)),
        TaskId::TwoStep => Box::new(two_step::build(root_seed, sim)),
        TaskId::TemporalDiscounting => Box::new(temporal_discounting::build(root_seed, sim)),
        TaskId::Bart => Box::new(bart::build(root_seed, sim)),
    }
}

/// Default simulations per agent for each task.
pub fn default_simulations(task: TaskId) -> u32 {
    match task {
        TaskId::ProbabilisticReasoning => 100,
        TaskId::Horizon => 100,
        TaskId::RestlessBandit => 10,
        TaskId::InstrumentalLearning => 10,
        TaskId::TwoStep => 100,
        TaskId::TemporalDiscounting => 1,
        TaskId::Bart => 10,
    }
}

pub(crate) fn env_stream(task: TaskId, root_seed: u64, sim: u32) -> phenolab_core::SeededStream {
    let seed = phenolab_core::episode_seed(root_seed, task, sim);
    phenolab_core::SeededStream::new(seed, format!("{}/sim={}/env", task.name(), sim))
}
