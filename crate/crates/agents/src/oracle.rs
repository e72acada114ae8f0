//! Generative oracle agents. Each embodies one of the computational models
//! the metric fits assume, so fitting transcripts they generate must
//! recover their parameters — the recovery suite exercises exactly that.

use std::collections::HashMap;

use phenolab_core::{
    Agent, AgentError, BallColor, ChoiceQuery, PromptMode, QueryView, SeededStream, TaskId,
    Transcript, TrialRecord,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum OracleParams {
    /// Uniform over valid choices; numeric answers uniform on [0, 1].
    Random,
    /// Exact Bayes posterior on the urn task.
    BayesOptimal,
    /// Generalized Bayes with prior/likelihood exponents.
    SystemNeglect { beta1: f64, beta2: f64 },
    /// Rescorla-Wagner value learner with softmax choice.
    RescorlaWagner { alpha: f64, invtemp: f64 },
    /// Separate learning rates for positive and negative prediction errors.
    RwAsymmetric { alpha_plus: f64, alpha_minus: f64, invtemp: f64 },
    /// Mixture of model-based planning (via the known 70% transition
    /// structure) and one-step model-free values.
    HybridTwoStep { w_model_based: f64, alpha: f64, invtemp: f64 },
    /// Always the first listed option.
    AlwaysFirst,
    /// Scripted intertemporal answers: bit i decides sooner/later for live
    /// question i (cycled when exhausted).
    StaircaseScripted { prefer_sooner: Vec<bool> },
    /// Softmax on observed machine means with a horizon-dependent inverse
    /// temperature: decision noise only where the horizon is long.
    HorizonNoisy { invtemp_short: f64, invtemp_long: f64 },
    /// Greedy on observed means, except in long-horizon unequal games where
    /// it seeks the less-observed machine with probability `p_explore`.
    HorizonInfoSeek { p_explore: f64, invtemp: f64 },
}

impl OracleParams {
    pub fn name(&self) -> &'static str {
        match self {
            OracleParams::Random => "random",
            OracleParams::BayesOptimal => "bayes_optimal",
            OracleParams::SystemNeglect { .. } => "system_neglect",
            OracleParams::RescorlaWagner { .. } => "rescorla_wagner",
            OracleParams::RwAsymmetric { .. } => "rw_asymmetric",
            OracleParams::HybridTwoStep { .. } => "hybrid_two_step",
            OracleParams::AlwaysFirst => "always_first",
            OracleParams::StaircaseScripted { .. } => "staircase_scripted",
            OracleParams::HorizonNoisy { .. } => "horizon_noisy",
            OracleParams::HorizonInfoSeek { .. } => "horizon_info_seek",
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let unit = |v: f64, what: &str| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(format!("{what} must lie in [0, 1], got {v}"))
            }
        };
        let nonneg = |v: f64, what: &str| {
            if v >= 0.0 {
                Ok(())
            } else {
                Err(format!("{what} must be >= 0, got {v}"))
            }
        };
        match self {
            OracleParams::SystemNeglect { beta1, beta2 } => {
                nonneg(*beta1, "beta1")?;
                nonneg(*beta2, "beta2")
            }
            OracleParams::RescorlaWagner { alpha, invtemp } => {
                unit(*alpha, "alpha")?;
                nonneg(*invtemp, "invtemp")
            }
            OracleParams::RwAsymmetric { alpha_plus, alpha_minus, invtemp } => {
                unit(*alpha_plus, "alpha_plus")?;
                unit(*alpha_minus, "alpha_minus")?;
                nonneg(*invtemp, "invtemp")
            }
            OracleParams::HybridTwoStep { w_model_based, alpha, invtemp } => {
                unit(*w_model_based, "w_model_based")?;
                unit(*alpha, "alpha")?;
                nonneg(*invtemp, "invtemp")
            }
            OracleParams::HorizonNoisy { invtemp_short, invtemp_long } => {
                nonneg(*invtemp_short, "invtemp_short")?;
                nonneg(*invtemp_long, "invtemp_long")
            }
            OracleParams::HorizonInfoSeek { p_explore, invtemp } => {
                unit(*p_explore, "p_explore")?;
                nonneg(*invtemp, "invtemp")
            }
            _ => Ok(()),
        }
    }
}

pub fn build_oracle(params: OracleParams, stream: SeededStream) -> Box<dyn Agent> {
    match params {
        OracleParams::Random => Box::new(RandomAgent { stream }),
        OracleParams::BayesOptimal => Box::new(WeightedBayesAgent { beta1: 1.0, beta2: 1.0 }),
        OracleParams::SystemNeglect { beta1, beta2 } => {
            Box::new(WeightedBayesAgent { beta1, beta2 })
        }
        OracleParams::RescorlaWagner { alpha, invtemp } => Box::new(RwAgent {
            alpha_plus: alpha,
            alpha_minus: alpha,
            invtemp,
            values: HashMap::new(),
            stream,
        }),
        OracleParams::RwAsymmetric { alpha_plus, alpha_minus, invtemp } => Box::new(RwAgent {
            alpha_plus,
            alpha_minus,
            invtemp,
            values: HashMap::new(),
            stream,
        }),
        OracleParams::HybridTwoStep { w_model_based, alpha, invtemp } => Box::new(TwoStepAgent {
            w_model_based,
            alpha,
            invtemp,
            q_stage1: [0.5; 2],
            q_stage2: [[0.5; 2]; 2],
            stream,
        }),
        OracleParams::AlwaysFirst => Box::new(AlwaysFirstAgent),
        OracleParams::StaircaseScripted { prefer_sooner } => {
            Box::new(ScriptedIntertemporalAgent { prefer_sooner, cursor: 0 })
        }
        OracleParams::HorizonNoisy { invtemp_short, invtemp_long } => {
            Box::new(HorizonNoisyAgent { invtemp_short, invtemp_long, stream })
        }
        OracleParams::HorizonInfoSeek { p_explore, invtemp } => {
            Box::new(HorizonInfoSeekAgent { p_explore, invtemp, stream })
        }
    }
}

/// Samples an index from the softmax distribution over `values` at inverse
/// temperature `invtemp`.
pub fn softmax_sample(values: &[f64], invtemp: f64, stream: &mut SeededStream) -> usize {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = values.iter().map(|v| ((v - max) * invtemp).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut draw = stream.range(0.0..1.0) * total;
    for (i, w) in weights.iter().enumerate() {
        draw -= w;
        if draw <= 0.0 {
            return i;
        }
    }
    values.len() - 1
}

fn token_reply(token: &str) -> String {
    format!(" {token}.")
}

fn value_reply(value: f64) -> String {
    format!("{value:.2}")
}

fn mismatch(agent: &str, task: TaskId) -> AgentError {
    AgentError::TaskMismatch { agent: agent.to_string(), task }
}

struct RandomAgent {
    stream: SeededStream,
}

impl Agent for RandomAgent {
    fn name(&self) -> &str {
        "random"
    }

    fn choose(
        &mut self,
        query: &ChoiceQuery,
        _view: &QueryView,
        _mode: PromptMode,
    ) -> Result<String, AgentError> {
        if query.answer_kind.is_numeric() {
            Ok(value_reply(self.stream.unit_two_decimals()))
        } else {
            Ok(token_reply(self.stream.choose(&query.valid_tokens)))
        }
    }
}

/// Generalized Bayesian updater: posterior odds with the prior and
/// likelihood raised to their weighting exponents. (1, 1) is exact Bayes.
struct WeightedBayesAgent {
    beta1: f64,
    beta2: f64,
}

pub fn weighted_posterior(prior_f: f64, lik_red_f: f64, ball: BallColor, beta1: f64, beta2: f64) -> f64 {
    let (lik_f, lik_j) = match ball {
        BallColor::Red => (lik_red_f, 1.0 - lik_red_f),
        BallColor::Blue => (1.0 - lik_red_f, lik_red_f),
    };
    let num = lik_f.powf(beta2) * prior_f.powf(beta1);
    let den = num + lik_j.powf(beta2) * (1.0 - prior_f).powf(beta1);
    if den == 0.0 {
        prior_f
    } else {
        num / den
    }
}

impl Agent for WeightedBayesAgent {
    fn name(&self) -> &str {
        "weighted_bayes"
    }

    fn choose(
        &mut self,
        _query: &ChoiceQuery,
        view: &QueryView,
        _mode: PromptMode,
    ) -> Result<String, AgentError> {
        match view {
            QueryView::Urn { prior_f, likelihood_red_given_f, ball } => Ok(value_reply(
                weighted_posterior(*prior_f, *likelihood_red_given_f, *ball, self.beta1, self.beta2),
            )),
            _ => Err(mismatch(self.name(), TaskId::ProbabilisticReasoning)),
        }
    }
}

/// Rescorla-Wagner learner over (casino, machine) values, initialized at
/// 0.5, choosing by softmax within the presented pair.
struct RwAgent {
    alpha_plus: f64,
    alpha_minus: f64,
    invtemp: f64,
    values: HashMap<(u8, char), f64>,
    stream: SeededStream,
}

impl Agent for RwAgent {
    fn name(&self) -> &str {
        "rescorla_wagner"
    }

    fn choose(
        &mut self,
        _query: &ChoiceQuery,
        view: &QueryView,
        _mode: PromptMode,
    ) -> Result<String, AgentError> {
        match view {
            QueryView::CasinoChoice { casino, machines } => {
                let values: Vec<f64> = machines
                    .iter()
                    .map(|&m| *self.values.entry((*casino, m)).or_insert(0.5))
                    .collect();
                let pick = softmax_sample(&values, self.invtemp, &mut self.stream);
                Ok(token_reply(&machines[pick].to_string()))
            }
            _ => Err(mismatch(self.name(), TaskId::InstrumentalLearning)),
        }
    }

    fn observe(&mut self, record: &TrialRecord) {
        let (Some(casino), Some(machine), Some(reward)) = (
            Transcript::meta_f64(record, "casino"),
            Transcript::meta_str(record, "machine"),
            Transcript::meta_f64(record, "reward"),
        ) else {
            return;
        };
        let key = (casino as u8 - 1, machine.chars().next().unwrap_or('?'));
        let value = self.values.entry(key).or_insert(0.5);
        let delta = reward - *value;
        let alpha = if delta >= 0.0 { self.alpha_plus } else { self.alpha_minus };
        *value += alpha * delta;
    }
}

/// Two-step agent mixing model-based planning with one-step model-free
/// values at weight `w_model_based`; both value systems share the learning
/// rate and the stage-2 softmax.
struct TwoStepAgent {
    w_model_based: f64,
    alpha: f64,
    invtemp: f64,
    q_stage1: [f64; 2],
    q_stage2: [[f64; 2]; 2],
    stream: SeededStream,
}

const COMMON_PROB: f64 = 0.7;

impl Agent for TwoStepAgent {
    fn name(&self) -> &str {
        "hybrid_two_step"
    }

    fn choose(
        &mut self,
        _query: &ChoiceQuery,
        view: &QueryView,
        _mode: PromptMode,
    ) -> Result<String, AgentError> {
        match view {
            QueryView::PlanetChoice { planets } => {
                let values: Vec<f64> = (0..2)
                    .map(|a| {
                        let own = self.q_stage2[a].iter().copied().fold(f64::MIN, f64::max);
                        let other = self.q_stage2[1 - a].iter().copied().fold(f64::MIN, f64::max);
                        let model_based = COMMON_PROB * own + (1.0 - COMMON_PROB) * other;
                        self.w_model_based * model_based
                            + (1.0 - self.w_model_based) * self.q_stage1[a]
                    })
                    .collect();
                let pick = softmax_sample(&values, self.invtemp, &mut self.stream);
                Ok(token_reply(&planets[pick].to_string()))
            }
            QueryView::AlienChoice { planet, aliens } => {
                let state = usize::from(*planet != 'X');
                let pick = softmax_sample(&self.q_stage2[state], self.invtemp, &mut self.stream);
                Ok(token_reply(&aliens[pick].to_string()))
            }
            _ => Err(mismatch(self.name(), TaskId::TwoStep)),
        }
    }

    fn observe(&mut self, record: &TrialRecord) {
        if Transcript::meta_f64(record, "stage") != Some(2.0) {
            return;
        }
        let (Some(planet), Some(arrived), Some(alien), Some(treasure)) = (
            Transcript::meta_str(record, "planet"),
            Transcript::meta_str(record, "arrived"),
            Transcript::meta_str(record, "alien"),
            Transcript::meta_bool(record, "treasure"),
        ) else {
            return;
        };
        let action = usize::from(planet != "X");
        let state = usize::from(arrived != "X");
        // The alien slot is recoverable from the record's query tokens.
        let slot = record
            .query
            .valid_tokens
            .iter()
            .position(|t| t == alien)
            .unwrap_or(0);
        let reward = f64::from(treasure);
        let q2 = &mut self.q_stage2[state][slot];
        *q2 += self.alpha * (reward - *q2);
        let q1 = &mut self.q_stage1[action];
        *q1 += self.alpha * (reward - *q1);
    }
}

struct AlwaysFirstAgent;

impl Agent for AlwaysFirstAgent {
    fn name(&self) -> &str {
        "always_first"
    }

    fn choose(
        &mut self,
        query: &ChoiceQuery,
        _view: &QueryView,
        _mode: PromptMode,
    ) -> Result<String, AgentError> {
        if query.answer_kind.is_numeric() {
            Ok(value_reply(1.0))
        } else {
            Ok(token_reply(&query.valid_tokens[0]))
        }
    }
}

struct ScriptedIntertemporalAgent {
    prefer_sooner: Vec<bool>,
    cursor: usize,
}

impl Agent for ScriptedIntertemporalAgent {
    fn name(&self) -> &str {
        "staircase_scripted"
    }

    fn choose(
        &mut self,
        _query: &ChoiceQuery,
        view: &QueryView,
        _mode: PromptMode,
    ) -> Result<String, AgentError> {
        match view {
            QueryView::Intertemporal { sooner_option, .. } => {
                let sooner = if self.prefer_sooner.is_empty() {
                    false
                } else {
                    self.prefer_sooner[self.cursor % self.prefer_sooner.len()]
                };
                self.cursor += 1;
                let option = if sooner { *sooner_option } else { 3 - *sooner_option };
                Ok(token_reply(&option.to_string()))
            }
            _ => Err(mismatch(self.name(), TaskId::TemporalDiscounting)),
        }
    }
}

fn observed_means(observed: &[(char, Vec<f64>)]) -> Vec<f64> {
    observed
        .iter()
        .map(|(_, rewards)| {
            if rewards.is_empty() {
                0.0
            } else {
                rewards.iter().sum::<f64>() / rewards.len() as f64
            }
        })
        .collect()
}

struct HorizonNoisyAgent {
    invtemp_short: f64,
    invtemp_long: f64,
    stream: SeededStream,
}

impl Agent for HorizonNoisyAgent {
    fn name(&self) -> &str {
        "horizon_noisy"
    }

    fn choose(
        &mut self,
        _query: &ChoiceQuery,
        view: &QueryView,
        _mode: PromptMode,
    ) -> Result<String, AgentError> {
        match view {
            QueryView::HorizonChoice { observed, horizon_six, .. } => {
                let means = observed_means(observed);
                let invtemp = if *horizon_six { self.invtemp_long } else { self.invtemp_short };
                let pick = softmax_sample(&means, invtemp, &mut self.stream);
                Ok(token_reply(&observed[pick].0.to_string()))
            }
            _ => Err(mismatch(self.name(), TaskId::Horizon)),
        }
    }
}

struct HorizonInfoSeekAgent {
    p_explore: f64,
    invtemp: f64,
    stream: SeededStream,
}

impl Agent for HorizonInfoSeekAgent {
    fn name(&self) -> &str {
        "horizon_info_seek"
    }

    fn choose(
        &mut self,
        _query: &ChoiceQuery,
        view: &QueryView,
        _mode: PromptMode,
    ) -> Result<String, AgentError> {
        match view {
            QueryView::HorizonChoice { observed, horizon_six, equal_info } => {
                let counts: Vec<usize> = observed.iter().map(|(_, r)| r.len()).collect();
                if *horizon_six && !equal_info && counts[0] != counts[1] {
                    if self.stream.bernoulli(self.p_explore) {
                        let less = if counts[0] < counts[1] { 0 } else { 1 };
                        return Ok(token_reply(&observed[less].0.to_string()));
                    }
                }
                let means = observed_means(observed);
                let pick = softmax_sample(&means, self.invtemp, &mut self.stream);
                Ok(token_reply(&observed[pick].0.to_string()))
            }
            _ => Err(mismatch(self.name(), TaskId::Horizon)),
        }
    }
}
