use phenolab_agents::AgentSpec;
use phenolab_core::{episode_seed, run_episode, PromptMode, SeededStream, TaskId, Transcript};

/// Runs `n` seeded episodes of one task for an agent spec.
pub fn run_sims(task: TaskId, spec: &AgentSpec, n: u32, root: u64) -> Vec<Transcript> {
    (0..n)
        .map(|sim| {
            let mut env = phenolab_tasks::build_env(task, root, sim);
            let seed = episode_seed(root, task, sim);
            let stream = SeededStream::new(seed, format!("{}/sim={sim}/agent", task.name()));
            let mut agent = spec.instantiate(stream);
            run_episode(env.as_mut(), agent.as_mut(), PromptMode::Base, sim, seed)
        })
        .collect()
}
