use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::prompt;

/// The seven tasks in the battery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskId {
    ProbabilisticReasoning,
    Horizon,
    RestlessBandit,
    InstrumentalLearning,
    TwoStep,
    TemporalDiscounting,
    Bart,
}

impl TaskId {
    pub const ALL: [TaskId; 7] = [
        TaskId::ProbabilisticReasoning,
        TaskId::Horizon,
        TaskId::RestlessBandit,
        TaskId::InstrumentalLearning,
        TaskId::TwoStep,
        TaskId::TemporalDiscounting,
        TaskId::Bart,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TaskId::ProbabilisticReasoning => "probabilistic_reasoning",
            TaskId::Horizon => "horizon",
            TaskId::RestlessBandit => "restless_bandit",
            TaskId::InstrumentalLearning => "instrumental_learning",
            TaskId::TwoStep => "two_step",
            TaskId::TemporalDiscounting => "temporal_discounting",
            TaskId::Bart => "bart",
        }
    }
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TaskId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TaskId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown task `{s}`"))
    }
}

/// How queries are posed to the agent: plain completion, chain-of-thought,
/// or take-a-step-back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PromptMode {
    #[default]
    Base,
    Cot,
    Sb,
}

impl PromptMode {
    pub fn name(self) -> &'static str {
        match self {
            PromptMode::Base => "base",
            PromptMode::Cot => "cot",
            PromptMode::Sb => "sb",
        }
    }
}

impl FromStr for PromptMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "base" => Ok(PromptMode::Base),
            "cot" => Ok(PromptMode::Cot),
            "sb" => Ok(PromptMode::Sb),
            other => Err(format!("unknown prompt mode `{other}`")),
        }
    }
}

/// What shape of answer a query expects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerKind {
    /// One token out of `valid_tokens` (machine letters, planet names, ...).
    LetterChoice,
    /// One of two enumerated options, answered by its number.
    BinaryOption,
    /// A probability estimate in [0, 1] at two-decimal resolution.
    Probability01,
    /// A confidence report in [0, 1] at two-decimal resolution.
    Confidence01,
}

impl AnswerKind {
    pub fn is_numeric(self) -> bool {
        matches!(self, AnswerKind::Probability01 | AnswerKind::Confidence01)
    }
}

/// A single question posed to the agent: the task prompt (with serialized
/// history), the expected answer shape, and the completion stub.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoiceQuery {
    pub prompt_text: String,
    pub answer_kind: AnswerKind,
    /// Acceptable answer tokens for discrete kinds; empty for numeric kinds.
    pub valid_tokens: Vec<String>,
    /// The answer stub the completion continues, e.g. `A: Machine`.
    pub answer_prefix: String,
}

impl ChoiceQuery {
    pub fn discrete(
        kind: AnswerKind,
        prompt_text: String,
        valid_tokens: Vec<String>,
        answer_prefix: &str,
    ) -> Self {
        debug_assert!(!kind.is_numeric());
        debug_assert!(!valid_tokens.is_empty());
        ChoiceQuery {
            prompt_text,
            answer_kind: kind,
            valid_tokens,
            answer_prefix: answer_prefix.to_string(),
        }
    }

    pub fn numeric(kind: AnswerKind, prompt_text: String, answer_prefix: &str) -> Self {
        debug_assert!(kind.is_numeric());
        ChoiceQuery {
            prompt_text,
            answer_kind: kind,
            valid_tokens: Vec::new(),
            answer_prefix: answer_prefix.to_string(),
        }
    }

    /// The full text sent to a completion endpoint for the given mode.
    pub fn full_prompt(&self, mode: PromptMode) -> String {
        match mode {
            PromptMode::Base => format!("{}\n\n{}", self.prompt_text, self.answer_prefix),
            PromptMode::Cot | PromptMode::Sb => format!(
                "{}\n\n{}",
                self.prompt_text,
                prompt::reasoning_suffix(mode, &self.final_answer_stub())
            ),
        }
    }

    /// The answer-format stub spliced into the reasoning templates: the
    /// prefix minus its `A: ` marker for discrete kinds (e.g. `Machine `),
    /// empty for numeric kinds where the final answer is just the number.
    pub fn final_answer_stub(&self) -> String {
        if self.answer_kind.is_numeric() {
            return String::new();
        }
        let stub = self.answer_prefix.strip_prefix("A: ").unwrap_or(&self.answer_prefix);
        let stub = stub.trim_end();
        if stub.is_empty() {
            String::new()
        } else {
            format!("{stub} ")
        }
    }
}

/// A parsed agent choice: either one of the query's valid tokens or a
/// two-decimal number in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParsedChoice {
    Token(String),
    Value(f64),
}

impl ParsedChoice {
    pub fn token(&self) -> Option<&str> {
        match self {
            ParsedChoice::Token(t) => Some(t),
            ParsedChoice::Value(_) => None,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            ParsedChoice::Token(_) => None,
            ParsedChoice::Value(v) => Some(*v),
        }
    }
}

impl fmt::Display for ParsedChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParsedChoice::Token(t) => f.write_str(t),
            ParsedChoice::Value(v) => write!(f, "{v:.2}"),
        }
    }
}

/// Ball colors in the urn task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BallColor {
    Red,
    Blue,
}

impl BallColor {
    pub fn name(self) -> &'static str {
        match self {
            BallColor::Red => "red",
            BallColor::Blue => "blue",
        }
    }
}

/// Task-specific observation produced by a trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Outcome {
    None,
    /// Reward in the task's currency (dollars, points, 0/1 treasure).
    Reward(f64),
    /// The ball color observed in the urn task.
    Ball(BallColor),
    /// Second-stage state reached after a first-stage choice.
    Arrived(char),
    /// Balloon survived the pump.
    Pumped,
    /// Balloon exploded; accumulated points lost.
    Exploded,
    /// Points banked by stopping.
    Banked(f64),
}

pub type MetaMap = serde_json::Map<String, serde_json::Value>;

/// One recorded trial: the query, the raw agent reply, the parsed choice,
/// and the observation it produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u32,
    pub query: ChoiceQuery,
    pub raw_reply: String,
    pub parsed_choice: ParsedChoice,
    pub outcome: Outcome,
    /// True when the environment dictated the choice (forced trials).
    pub forced: bool,
    /// True when the choice came from the fallback policy after repeated
    /// parse failures or agent errors.
    pub invalid: bool,
    /// Task-specific annotations used by the metric fits.
    #[serde(default, skip_serializing_if = "MetaMap::is_empty")]
    pub meta: MetaMap,
}

/// Full record of one episode.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Transcript {
    pub task_id: TaskId,
    pub simulation_index: u32,
    pub seed: u64,
    pub prompt_mode: PromptMode,
    pub trials: Vec<TrialRecord>,
    pub invalid_count: u32,
}

impl Transcript {
    /// Trials answered by the agent (forced trials excluded).
    pub fn free_trials(&self) -> impl Iterator<Item = &TrialRecord> {
        self.trials.iter().filter(|t| !t.forced)
    }

    pub fn meta_f64(record: &TrialRecord, key: &str) -> Option<f64> {
        record.meta.get(key).and_then(serde_json::Value::as_f64)
    }

    pub fn meta_str<'a>(record: &'a TrialRecord, key: &str) -> Option<&'a str> {
        record.meta.get(key).and_then(serde_json::Value::as_str)
    }

    pub fn meta_bool(record: &TrialRecord, key: &str) -> Option<bool> {
        record.meta.get(key).and_then(serde_json::Value::as_bool)
    }
}

/// Structured view of the pending query, given to built-in oracle agents so
/// they can act on task state instead of scraping prompt text. Endpoint
/// agents ignore it.
#[derive(Debug, Clone, PartialEq)]
pub enum QueryView {
    /// No structured context (used by tests and generic scripted agents).
    Opaque,
    Urn {
        prior_f: f64,
        likelihood_red_given_f: f64,
        ball: BallColor,
    },
    HorizonChoice {
        /// Per-machine observation history, in valid-token order.
        observed: Vec<(char, Vec<f64>)>,
        horizon_six: bool,
        equal_info: bool,
    },
    RestlessChoice {
        machines: [char; 2],
        trial: u32,
    },
    RestlessConfidence {
        chosen: char,
    },
    CasinoChoice {
        casino: u8,
        machines: [char; 2],
    },
    PlanetChoice {
        planets: [char; 2],
    },
    AlienChoice {
        planet: char,
        aliens: [char; 2],
    },
    Intertemporal {
        /// Which option number ("1" or "2") is the sooner one.
        sooner_option: u8,
        item: String,
    },
    Balloon {
        balloon: u32,
        label: char,
        pumps: u32,
    },
}
