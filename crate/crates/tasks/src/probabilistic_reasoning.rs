//! Wheel-of-fortune and two-urns belief-updating task.
//!
//! A wheel with 10 sections sets the prior over urns F and J, each urn
//! holds 10 red/blue balls setting the likelihood, and the agent estimates
//! the posterior probability that an observed ball came from urn F.

use phenolab_core::{
    AnswerKind, BallColor, ChoiceQuery, EnvStep, Environment, Outcome, ParsedChoice, QueryView,
    SeededStream, TaskId, TrialOutcome,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    InformativePrior,
    InformativeLikelihood,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::InformativePrior => "informative_prior",
            Condition::InformativeLikelihood => "informative_likelihood",
        }
    }
}

/// One generated episode: wheel split, urn composition, and the drawn ball.
#[derive(Debug, Clone)]
pub struct UrnTaskInstance {
    pub condition: Condition,
    /// P(urn F): wheel sections for F out of 10.
    pub prior_f: f64,
    /// P(red | urn F): red balls in urn F out of 10. Urn J mirrors it.
    pub likelihood_red_given_f: f64,
    pub drawn_ball: BallColor,
    pub n_trials: u32,
}

impl UrnTaskInstance {
    pub fn likelihood_red_given_j(&self) -> f64 {
        1.0 - self.likelihood_red_given_f
    }
}

/// The balanced design cells: condition x informative level x flat level.
pub fn design_cells() -> Vec<(Condition, f64, f64)> {
    let mut cells = Vec::new();
    for &info in &[0.7, 0.8, 0.9] {
        for &flat in &[0.5, 0.6] {
            cells.push((Condition::InformativePrior, info, flat));
            cells.push((Condition::InformativeLikelihood, flat, info));
        }
    }
    cells
}

/// Per-run cell order: the 12 design cells shuffled once per root seed and
/// cycled across simulations.
pub fn schedule(root_seed: u64) -> Vec<(Condition, f64, f64)> {
    let mut cells = design_cells();
    let mut stream = SeededStream::new(root_seed, "probabilistic_reasoning/schedule");
    stream.shuffle(&mut cells);
    cells
}

/// Draws the ball through the generative process: first the urn from the
/// wheel, then the color from that urn.
pub fn generate(
    condition: Condition,
    prior_f: f64,
    likelihood_red_given_f: f64,
    stream: &mut SeededStream,
) -> UrnTaskInstance {
    let urn_is_f = stream.bernoulli(prior_f);
    let p_red = if urn_is_f {
        likelihood_red_given_f
    } else {
        1.0 - likelihood_red_given_f
    };
    let drawn_ball = if stream.bernoulli(p_red) {
        BallColor::Red
    } else {
        BallColor::Blue
    };
    UrnTaskInstance {
        condition,
        prior_f,
        likelihood_red_given_f,
        drawn_ball,
        n_trials: 1,
    }
}

/// Exact posterior P(F | ball) by Bayes rule.
pub fn bayes_posterior(inst: &UrnTaskInstance) -> f64 {
    let (lik_f, lik_j) = match inst.drawn_ball {
        BallColor::Red => (inst.likelihood_red_given_f, inst.likelihood_red_given_j()),
        BallColor::Blue => (
            1.0 - inst.likelihood_red_given_f,
            1.0 - inst.likelihood_red_given_j(),
        ),
    };
    let num = lik_f * inst.prior_f;
    let den = num + lik_j * (1.0 - inst.prior_f);
    if den == 0.0 {
        // Degenerate instance: the observed ball has zero probability under
        // both urns; fall back to the prior.
        inst.prior_f
    } else {
        num / den
    }
}

const PREAMBLE: &str = "You are participating in an experiment where you are provided with a wheel of fortune and two urns. The wheel of fortune contains 10 evenly sized sections labeled either F or J, corresponding to the urns F and J. Another person will spin the wheel of fortune, select an urn based on the outcome of the spin, and then randomly pick a ball from the selected urn. Your goal is to give your best estimate of the probability of the urn being F after observing the ball drawn from the urn.";

pub fn render_prompt(inst: &UrnTaskInstance) -> String {
    let sections_f = (inst.prior_f * 10.0).round() as u32;
    let red_f = (inst.likelihood_red_given_f * 10.0).round() as u32;
    format!(
        "{PREAMBLE}\n\nQ: The wheel of fortune contains {sections_f} sections labeled F and {} sections labeled J. The urn F contains ({red_f}, {}) and the urn J contains ({}, {red_f}) red/blue balls. A {} ball was drawn. What is the probability that it was drawn from Urn F? (Give your probability estimate on the scale from 0 to 1 rounded to two decimal places).",
        10 - sections_f,
        10 - red_f,
        10 - red_f,
        inst.drawn_ball.name(),
    )
}

fn answer_prefix(inst: &UrnTaskInstance) -> String {
    format!(
        "A: I estimate the probability of the {} ball to be drawn from the urn F to be 0.",
        inst.drawn_ball.name()
    )
}

pub struct UrnEnv {
    inst: UrnTaskInstance,
    asked: u32,
    done: bool,
}

impl UrnEnv {
    pub fn new(inst: UrnTaskInstance) -> Self {
        UrnEnv { inst, asked: 0, done: false }
    }

    pub fn instance(&self) -> &UrnTaskInstance {
        &self.inst
    }
}

pub fn build(root_seed: u64, sim: u32) -> UrnEnv {
    let cells = schedule(root_seed);
    let (condition, prior, lik) = cells[sim as usize % cells.len()];
    let stream = crate::env_stream(TaskId::ProbabilisticReasoning, root_seed, sim);
    UrnEnv::new(generate(condition, prior, lik, &mut stream.derive("gen")))
}

impl Environment for UrnEnv {
    fn task_id(&self) -> TaskId {
        TaskId::ProbabilisticReasoning
    }

    fn next_step(&mut self) -> EnvStep {
        if self.asked >= self.inst.n_trials || self.done {
            return EnvStep::Done;
        }
        self.asked += 1;
        let query = ChoiceQuery::numeric(
            AnswerKind::Probability01,
            render_prompt(&self.inst),
            &answer_prefix(&self.inst),
        );
        EnvStep::Query {
            query,
            view: QueryView::Urn {
                prior_f: self.inst.prior_f,
                likelihood_red_given_f: self.inst.likelihood_red_given_f,
                ball: self.inst.drawn_ball,
            },
        }
    }

    fn apply(&mut self, choice: &ParsedChoice) -> TrialOutcome {
        let estimate = choice.value().unwrap_or(0.5);
        TrialOutcome::new(Outcome::Ball(self.inst.drawn_ball))
            .with("condition", self.inst.condition.name())
            .with("prior_f", self.inst.prior_f)
            .with("likelihood_red_given_f", self.inst.likelihood_red_given_f)
            .with("ball", self.inst.drawn_ball.name())
            .with("posterior", bayes_posterior(&self.inst))
            .with("estimate", estimate)
    }
}
