//! Reasoning-mode prompt suffixes. The two templates replace the plain
//! answer stub when a query runs in chain-of-thought or take-a-step-back
//! mode; `{format_answer}` is spliced with the query's answer-format stub.

use crate::types::PromptMode;

/// Marker that reply parsing scans for in reasoning modes.
pub const FINAL_ANSWER_MARKER: &str = "Final answer:";

pub const COT_TEMPLATE: &str = "First break down the problem into smaller steps and reason through each step logically in a maximum of 100 words before giving your final answer in the format 'Final answer: {format_answer}<your choice>'. It is very important that you always answer in the right format even if you have no idea or you believe there is not enough information.\n\nA: Let's think step by step:";

pub const SB_TEMPLATE: &str = "First, take-a-step-back and think in the following two steps to answer this:\nStep 1) Abstract the key concepts and principles relevant to this question in a maximum of 60 words.\"\nStep 2) Use the abstractions to reason through the question in a maximum of 60 words.\n\nFinally, give your final answer in the format 'Final answer: {format_answer}<your choice>'. It is very important that you always answer in the right format even if you have no idea or you believe there is not enough information.\n\nA: Step 1)";

/// Renders the reasoning suffix for the given mode with the query's
/// answer-format stub filled in. Panics if called with `PromptMode::Base`.
pub fn reasoning_suffix(mode: PromptMode, format_answer: &str) -> String {
    let template = match mode {
        PromptMode::Cot => COT_TEMPLATE,
        PromptMode::Sb => SB_TEMPLATE,
        PromptMode::Base => panic!("base mode has no reasoning suffix"),
    };
    template.replace("{format_answer}", format_answer)
}
