//! Restless two-armed bandit with per-trial confidence reports. The better
//! arm pays N(60, 8), the worse N(40, 8), and the assignment flips at every
//! block boundary (4 blocks of 18-22 trials) without announcement.

use phenolab_core::{
    AnswerKind, ChoiceQuery, EnvStep, Environment, Outcome, ParsedChoice, QueryView, SeededStream,
    TaskId, TrialOutcome,
};

pub const MACHINES: [char; 2] = ['J', 'F'];
pub const GOOD_MEAN: f64 = 60.0;
pub const BAD_MEAN: f64 = 40.0;
pub const REWARD_SD: f64 = 8.0;
pub const REWARD_CLIP: (i64, i64) = (20, 80);

#[derive(Debug, Clone)]
pub struct RestlessInstance {
    pub block_lengths: [u32; 4],
    /// Index into `MACHINES` of the good arm in block 0; alternates after.
    pub initial_good: usize,
}

impl RestlessInstance {
    pub fn total_trials(&self) -> u32 {
        self.block_lengths.iter().sum()
    }

    /// Good-arm machine index at a 1-based trial number.
    pub fn good_arm_at(&self, trial: u32) -> usize {
        let mut boundary = 0;
        for (block, len) in self.block_lengths.iter().enumerate() {
            boundary += len;
            if trial <= boundary {
                return (self.initial_good + block) % 2;
            }
        }
        (self.initial_good + 3) % 2
    }
}

pub fn generate(stream: &mut SeededStream) -> RestlessInstance {
    let block_lengths = [
        stream.range(18..=22u32),
        stream.range(18..=22u32),
        stream.range(18..=22u32),
        stream.range(18..=22u32),
    ];
    RestlessInstance {
        block_lengths,
        initial_good: usize::from(stream.bernoulli(0.5)),
    }
}

pub fn draw_reward(good: bool, stream: &mut SeededStream) -> i64 {
    let mean = if good { GOOD_MEAN } else { BAD_MEAN };
    let raw = stream.normal(mean, REWARD_SD).round() as i64;
    raw.clamp(REWARD_CLIP.0, REWARD_CLIP.1)
}

enum Phase {
    Choice,
    Confidence,
}

pub struct RestlessEnv {
    inst: RestlessInstance,
    stream: SeededStream,
    trial: u32,
    phase: Phase,
    history: String,
    /// Choice made this trial, pending its confidence report.
    current_choice: Option<(usize, i64)>,
    pending: bool,
}

impl RestlessEnv {
    pub fn new(inst: RestlessInstance, stream: SeededStream) -> Self {
        RestlessEnv {
            inst,
            stream,
            trial: 1,
            phase: Phase::Choice,
            history: String::new(),
            current_choice: None,
            pending: false,
        }
    }

    pub fn instance(&self) -> &RestlessInstance {
        &self.inst
    }

    fn preamble(&self) -> String {
        format!(
            "Q: You are going to a casino that owns two slot machines named machine J and F. You earn dollars $ each time you play on one of these machines with one machine always having a higher average $ reward. Every 18 to 22 trials a switch of block takes place and the other slot machine will now give the higher point reward on average. However, you are not told about the change of block. After each choice, you have to indicate how confident you were about your choice being the best on a scale from 0 to 1. The casino includes 4 blocks of 18 to 22 trials, for a total of {} trials 't'. Your goal is to interact with both machines and optimize your $ as much as possible by identifying the best machine at a given point in time which comes in hand with being attentive to a potential change of block. The rewards will range between 20$ and 80$.",
            self.inst.total_trials()
        )
    }

    fn choice_prompt(&self) -> String {
        let history_block = if self.history.is_empty() {
            String::new()
        } else {
            format!(
                "\n\nYou have received the following amount of $ when playing in the past:\n{}",
                self.history.trim_end_matches('\n')
            )
        };
        format!(
            "{}{history_block}\n\nQ: You are now in trial t={}. Which machine do you choose between machine J and F?(Think carefully remembering that exploration of both machines is required for optimal rewards. Give the answer in the form 'Machine <your choice>'.)",
            self.preamble(),
            self.trial
        )
    }

    fn confidence_prompt(&self, machine: usize) -> String {
        format!(
            "{}\n\nA: Machine {}.\n\nQ: How confident are you about your choice being the best on a continuous scale running from 0 representing 'this was a guess' to 1 representing 'very certain'? (Think carefully and give your answer to two decimal places)",
            self.choice_prompt(),
            MACHINES[machine]
        )
    }
}

pub fn build(root_seed: u64, sim: u32) -> RestlessEnv {
    let stream = crate::env_stream(TaskId::RestlessBandit, root_seed, sim);
    let inst = generate(&mut stream.derive("gen"));
    RestlessEnv::new(inst, stream)
}

impl Environment for RestlessEnv {
    fn task_id(&self) -> TaskId {
        TaskId::RestlessBandit
    }

    fn next_step(&mut self) -> EnvStep {
        debug_assert!(!self.pending, "apply not called");
        if self.trial > self.inst.total_trials() {
            return EnvStep::Done;
        }
        self.pending = true;
        match self.phase {
            Phase::Choice => EnvStep::Query {
                query: ChoiceQuery::discrete(
                    AnswerKind::LetterChoice,
                    self.choice_prompt(),
                    vec!["J".to_string(), "F".to_string()],
                    "A: Machine",
                ),
                view: QueryView::RestlessChoice { machines: MACHINES, trial: self.trial },
            },
            Phase::Confidence => {
                let (machine, _) = self.current_choice.expect("choice before confidence");
                EnvStep::Query {
                    query: ChoiceQuery::numeric(
                        AnswerKind::Confidence01,
                        self.confidence_prompt(machine),
                        "A: On a scale from 0 to 1, I am confident at 0.",
                    ),
                    view: QueryView::RestlessConfidence { chosen: MACHINES[machine] },
                }
            }
        }
    }

    fn apply(&mut self, choice: &ParsedChoice) -> TrialOutcome {
        self.pending = false;
        let good = self.inst.good_arm_at(self.trial);
        match self.phase {
            Phase::Choice => {
                let machine = match choice.token() {
                    Some("J") => 0,
                    _ => 1,
                };
                let reward = draw_reward(machine == good, &mut self.stream);
                self.current_choice = Some((machine, reward));
                self.phase = Phase::Confidence;
                TrialOutcome::new(Outcome::Reward(reward as f64))
                    .with("t", self.trial)
                    .with("phase", "choice")
                    .with("machine", MACHINES[machine].to_string())
                    .with("best", MACHINES[good].to_string())
                    .with("correct", machine == good)
                    .with("reward", reward)
            }
            Phase::Confidence => {
                let (machine, reward) = self.current_choice.take().expect("choice recorded");
                let confidence = choice.value().unwrap_or(0.5);
                self.history.push_str(&format!(
                    "t={}: You chose {} with a reported confidence of {confidence:.2}. It rewarded {reward} $.\n",
                    self.trial,
                    MACHINES[machine]
                ));
                let out = TrialOutcome::new(Outcome::None)
                    .with("t", self.trial)
                    .with("phase", "confidence")
                    .with("machine", MACHINES[machine].to_string())
                    .with("best", MACHINES[good].to_string())
                    .with("correct", machine == good)
                    .with("confidence", confidence);
                self.trial += 1;
                self.phase = Phase::Choice;
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_blocks_with_bounded_totals() {
        let mut s = SeededStream::new(1, "test/restless");
        for _ in 0..100 {
            let inst = generate(&mut s);
            let total = inst.total_trials();
            assert!((72..=88).contains(&total), "{total}");
        }
    }

    #[test]
    fn forced_minimum_blocks_sum_to_72() {
        let inst = RestlessInstance { block_lengths: [18; 4], initial_good: 0 };
        assert_eq!(inst.total_trials(), 72);
    }

    #[test]
    fn good_arm_alternates_at_block_boundaries() {
        let inst = RestlessInstance { block_lengths: [18, 20, 22, 19], initial_good: 1 };
        assert_eq!(inst.good_arm_at(1), 1);
        assert_eq!(inst.good_arm_at(18), 1);
        assert_eq!(inst.good_arm_at(19), 0);
        assert_eq!(inst.good_arm_at(38), 0);
        assert_eq!(inst.good_arm_at(39), 1);
        assert_eq!(inst.good_arm_at(60), 1);
        assert_eq!(inst.good_arm_at(61), 0);
        assert_eq!(inst.good_arm_at(79), 0);
    }

    #[test]
    fn good_rewards_average_sixty_before_clipping() {
        // The clip at [20, 80] is 2.5 sd out, so the clipped mean stays
        // within the tolerance.
        let mut s = SeededStream::new(2, "test/restless");
        let n = 10_000;
        let mean = (0..n).map(|_| draw_reward(true, &mut s) as f64).sum::<f64>() / n as f64;
        assert!((mean - 60.0).abs() < 0.3, "{mean}");
    }

    #[test]
    fn rewards_stay_in_range_and_replay() {
        let run = |seed| {
            let mut s = SeededStream::new(seed, "test/restless");
            (0..500).map(|_| draw_reward(false, &mut s)).collect::<Vec<_>>()
        };
        let a = run(9);
        assert_eq!(a, run(9));
        assert!(a.iter().all(|r| (20..=80).contains(r)));
    }

    #[test]
    fn episode_alternates_choice_and_confidence() {
        let mut env = build(3, 0);
        let total = env.instance().total_trials();
        let mut records = 0;
        loop {
            match env.next_step() {
                EnvStep::Done => break,
                EnvStep::Query { query, .. } => {
                    records += 1;
                    let choice = if query.answer_kind == AnswerKind::LetterChoice {
                        assert!(query.prompt_text.contains("Which machine do you choose"));
                        ParsedChoice::Token("J".into())
                    } else {
                        assert!(query.prompt_text.contains("How confident are you"));
                        ParsedChoice::Value(0.5)
                    };
                    env.apply(&choice);
                }
                EnvStep::Forced { .. } => panic!("no forced trials here"),
            }
        }
        assert_eq!(records, 2 * total);
    }

    #[test]
    fn history_lines_render_confidence_and_reward() {
        let mut env = build(4, 1);
        // First trial: choice then confidence.
        match env.next_step() {
            EnvStep::Query { .. } => {
                env.apply(&ParsedChoice::Token("F".into()));
            }
            _ => panic!(),
        }
        match env.next_step() {
            EnvStep::Query { .. } => {
                env.apply(&ParsedChoice::Value(0.43));
            }
            _ => panic!(),
        }
        match env.next_step() {
            EnvStep::Query { query, .. } => {
                assert!(query
                    .prompt_text
                    .contains("t=1: You chose F with a reported confidence of 0.43. It rewarded "));
                assert!(query.prompt_text.contains("Q: You are now in trial t=2."));
            }
            _ => panic!(),
        }
    }
}
