use thiserror::Error;

use crate::parse::parse_reply;
use crate::stream::SeededStream;
use crate::types::{
    ChoiceQuery, MetaMap, Outcome, ParsedChoice, PromptMode, QueryView, TaskId, Transcript,
    TrialRecord,
};

/// Parse attempts per trial before the fallback policy kicks in.
pub const PARSE_RETRY_LIMIT: usize = 3;

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("endpoint failure: {0}")]
    Endpoint(String),
    #[error("agent `{agent}` cannot answer {task} queries")]
    TaskMismatch { agent: String, task: TaskId },
}

/// A choice-maker. Oracles keep per-episode learning state and read the
/// structured [`QueryView`]; endpoint adapters only read the prompt text.
pub trait Agent {
    fn name(&self) -> &str;

    /// Returns the raw completion text for a query.
    fn choose(
        &mut self,
        query: &ChoiceQuery,
        view: &QueryView,
        mode: PromptMode,
    ) -> Result<String, AgentError>;

    /// Called after every trial (free and forced) with the finished record.
    fn observe(&mut self, _record: &TrialRecord) {}
}

/// What the environment asks for next.
pub enum EnvStep {
    /// Free-choice trial: the agent answers.
    Query { query: ChoiceQuery, view: QueryView },
    /// Forced trial: the environment dictates the choice.
    Forced { query: ChoiceQuery, choice: ParsedChoice },
    Done,
}

/// Observation plus per-trial metadata returned by the environment after a
/// choice is applied.
pub struct TrialOutcome {
    pub outcome: Outcome,
    pub meta: MetaMap,
}

impl TrialOutcome {
    pub fn new(outcome: Outcome) -> Self {
        TrialOutcome { outcome, meta: MetaMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }
}

/// A single-episode task state machine. `apply` must be called exactly once
/// after every non-`Done` step.
pub trait Environment {
    fn task_id(&self) -> TaskId;
    fn next_step(&mut self) -> EnvStep;
    fn apply(&mut self, choice: &ParsedChoice) -> TrialOutcome;
}

/// Runs one full episode, chaining history into prompts as the environment
/// prescribes, and returns the completed transcript.
///
/// Unparseable or failing replies are retried up to [`PARSE_RETRY_LIMIT`]
/// times, then resolved by drawing a uniformly random valid choice from the
/// episode's fallback stream with the trial flagged invalid, so episodes
/// always run to completion.
pub fn run_episode(
    env: &mut dyn Environment,
    agent: &mut dyn Agent,
    mode: PromptMode,
    simulation_index: u32,
    episode_seed: u64,
) -> Transcript {
    let mut fallback = SeededStream::new(
        episode_seed,
        format!("{}/sim={simulation_index}/fallback", env.task_id().name()),
    );
    let mut trials: Vec<TrialRecord> = Vec::new();
    let mut invalid_count = 0u32;

    loop {
        let step = env.next_step();
        let record = match step {
            EnvStep::Done => break,
            EnvStep::Forced { query, choice } => {
                let TrialOutcome { outcome, meta } = env.apply(&choice);
                TrialRecord {
                    trial_index: trials.len() as u32,
                    query,
                    raw_reply: String::new(),
                    parsed_choice: choice,
                    outcome,
                    forced: true,
                    invalid: false,
                    meta,
                }
            }
            EnvStep::Query { query, view } => {
                let mut raw_reply = String::new();
                let mut parsed = None;
                for _ in 0..PARSE_RETRY_LIMIT {
                    match agent.choose(&query, &view, mode) {
                        Ok(reply) => {
                            raw_reply = reply;
                            if let Ok(choice) = parse_reply(&raw_reply, &query, mode) {
                                parsed = Some(choice);
                                break;
                            }
                        }
                        Err(_) => {
                            // Endpoint failures burn an attempt like parse
                            // failures; the fallback policy resolves both.
                        }
                    }
                }
                let invalid = parsed.is_none();
                let choice = parsed.unwrap_or_else(|| fallback_choice(&query, &mut fallback));
                if invalid {
                    invalid_count += 1;
                }
                let TrialOutcome { outcome, meta } = env.apply(&choice);
                TrialRecord {
                    trial_index: trials.len() as u32,
                    query,
                    raw_reply,
                    parsed_choice: choice,
                    outcome,
                    forced: false,
                    invalid,
                    meta,
                }
            }
        };
        agent.observe(&record);
        trials.push(record);
    }

    Transcript {
        task_id: env.task_id(),
        simulation_index,
        seed: episode_seed,
        prompt_mode: mode,
        trials,
        invalid_count,
    }
}

/// Uniform random valid choice used when parsing has failed repeatedly.
pub(crate) fn fallback_choice(query: &ChoiceQuery, stream: &mut SeededStream) -> ParsedChoice {
    if query.answer_kind.is_numeric() {
        ParsedChoice::Value(stream.unit_two_decimals())
    } else {
        ParsedChoice::Token(stream.choose(&query.valid_tokens).clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::AnswerKind;

    /// Minimal scripted environment: n forced trials then m free trials.
    struct ToyEnv {
        forced_left: u32,
        free_left: u32,
        pending: bool,
    }

    impl Environment for ToyEnv {
        fn task_id(&self) -> TaskId {
            TaskId::Horizon
        }

        fn next_step(&mut self) -> EnvStep {
            assert!(!self.pending, "apply not called");
            let query = ChoiceQuery::discrete(
                AnswerKind::LetterChoice,
                "pick".into(),
                vec!["F".into(), "J".into()],
                "A: Machine",
            );
            if self.forced_left > 0 {
                self.forced_left -= 1;
                self.pending = true;
                EnvStep::Forced { query, choice: ParsedChoice::Token("F".into()) }
            } else if self.free_left > 0 {
                self.free_left -= 1;
                self.pending = true;
                EnvStep::Query { query, view: QueryView::Opaque }
            } else {
                EnvStep::Done
            }
        }

        fn apply(&mut self, _choice: &ParsedChoice) -> TrialOutcome {
            self.pending = false;
            TrialOutcome::new(Outcome::Reward(1.0))
        }
    }

    struct Scripted(&'static str);

    impl Agent for Scripted {
        fn name(&self) -> &str {
            "scripted"
        }
        fn choose(
            &mut self,
            _q: &ChoiceQuery,
            _v: &QueryView,
            _m: PromptMode,
        ) -> Result<String, AgentError> {
            Ok(self.0.to_string())
        }
    }

    #[test]
    fn forced_and_free_trials_are_recorded() {
        let mut env = ToyEnv { forced_left: 4, free_left: 1, pending: false };
        let mut agent = Scripted(" J.");
        let t = run_episode(&mut env, &mut agent, PromptMode::Base, 0, 99);
        assert_eq!(t.trials.len(), 5);
        assert_eq!(t.trials.iter().filter(|r| r.forced).count(), 4);
        assert_eq!(t.free_trials().count(), 1);
        assert_eq!(t.invalid_count, 0);
    }

    #[test]
    fn zero_trial_episode_is_fine() {
        let mut env = ToyEnv { forced_left: 0, free_left: 0, pending: false };
        let mut agent = Scripted(" J.");
        let t = run_episode(&mut env, &mut agent, PromptMode::Base, 0, 99);
        assert!(t.trials.is_empty());
    }

    #[test]
    fn unparseable_replies_fall_back_and_flag() {
        let mut env = ToyEnv { forced_left: 0, free_left: 3, pending: false };
        let mut agent = Scripted("no machine here");
        let t = run_episode(&mut env, &mut agent, PromptMode::Base, 0, 99);
        assert_eq!(t.invalid_count, 3);
        for r in &t.trials {
            assert!(r.invalid);
            let tok = r.parsed_choice.token().unwrap();
            assert!(tok == "F" || tok == "J");
        }
    }

    #[test]
    fn replays_are_byte_identical() {
        let run = || {
            let mut env = ToyEnv { forced_left: 2, free_left: 2, pending: false };
            let mut agent = Scripted("gibberish");
            let t = run_episode(&mut env, &mut agent, PromptMode::Base, 3, 1234);
            serde_json::to_string(&t).unwrap()
        };
        assert_eq!(run(), run());
    }
}
