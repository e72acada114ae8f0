//! Shared protocol types and mechanics for running text-based cognitive
//! tasks against arbitrary choice-making agents.
//!
//! An episode is a dialogue between an [`Environment`] and an [`Agent`]:
//! the environment renders a prompt carrying the full task history, the
//! agent completes it, the reply is parsed into a choice, and the outcome
//! is appended to the history for the next trial. The full exchange is
//! recorded as a [`Transcript`], the single substrate every metric is
//! fitted on.

mod episode;
mod parse;
mod prompt;
mod stream;
mod types;

pub use episode::{run_episode, Agent, AgentError, EnvStep, Environment, TrialOutcome, PARSE_RETRY_LIMIT};
pub use parse::{parse_reply, ParseError};
pub use prompt::{reasoning_suffix, COT_TEMPLATE, FINAL_ANSWER_MARKER, SB_TEMPLATE};
pub use stream::{episode_seed, SeededStream};
pub use types::*;
