//! Horizon task: a stationary two-armed bandit with four forced-choice
//! trials followed by either one or six free choices. The forced trials
//! implement the equal (2/2) or unequal (1/3) information condition.

use phenolab_core::{
    AnswerKind, ChoiceQuery, EnvStep, Environment, Outcome, ParsedChoice, QueryView, SeededStream,
    TaskId, TrialOutcome,
};

pub const MACHINES: [char; 2] = ['F', 'J'];
pub const REWARD_SD: f64 = 8.0;
pub const BASE_MEANS: [f64; 2] = [40.0, 60.0];
pub const MEAN_GAPS: [f64; 5] = [4.0, 8.0, 12.0, 20.0, 30.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfoCondition {
    Equal22,
    Unequal13,
}

impl InfoCondition {
    pub fn name(self) -> &'static str {
        match self {
            InfoCondition::Equal22 => "equal_2_2",
            InfoCondition::Unequal13 => "unequal_1_3",
        }
    }
}

#[derive(Debug, Clone)]
pub struct HorizonGame {
    /// Reward means for machines F and J respectively.
    pub means: [f64; 2],
    pub sd: f64,
    pub horizon_six: bool,
    pub info: InfoCondition,
    /// Machine index (0 = F, 1 = J) for each of the 4 forced trials.
    pub forced_sequence: [usize; 4],
}

impl HorizonGame {
    pub fn free_choices(&self) -> u32 {
        if self.horizon_six {
            6
        } else {
            1
        }
    }
}

/// The 4 design cells cycled across simulations, shuffled per root seed.
pub fn schedule(root_seed: u64) -> Vec<(bool, InfoCondition)> {
    let mut cells = vec![
        (false, InfoCondition::Equal22),
        (false, InfoCondition::Unequal13),
        (true, InfoCondition::Equal22),
        (true, InfoCondition::Unequal13),
    ];
    let mut stream = SeededStream::new(root_seed, "horizon/schedule");
    stream.shuffle(&mut cells);
    cells
}

pub fn generate(
    horizon_six: bool,
    info: InfoCondition,
    stream: &mut SeededStream,
) -> HorizonGame {
    let anchor = *stream.choose(&BASE_MEANS);
    let gap = *stream.choose(&MEAN_GAPS);
    let signed_gap = if stream.bernoulli(0.5) { gap } else { -gap };
    let other = anchor + signed_gap;
    let mut means = [anchor, other];
    if stream.bernoulli(0.5) {
        means.swap(0, 1);
    }
    let mut forced_sequence = match info {
        InfoCondition::Equal22 => [0, 0, 1, 1],
        InfoCondition::Unequal13 => {
            let lone = usize::from(stream.bernoulli(0.5));
            let full = 1 - lone;
            [lone, full, full, full]
        }
    };
    stream.shuffle(&mut forced_sequence);
    HorizonGame { means, sd: REWARD_SD, horizon_six, info, forced_sequence }
}

/// Integer reward from the machine's Gaussian, clipped to [1, 99].
pub fn draw_reward(game: &HorizonGame, machine: usize, stream: &mut SeededStream) -> i64 {
    let raw = stream.normal(game.means[machine], game.sd).round() as i64;
    raw.clamp(1, 99)
}

const NUMBER_WORDS: [&str; 6] = ["one", "two", "three", "four", "five", "six"];

pub struct HorizonEnv {
    game: HorizonGame,
    stream: SeededStream,
    history: String,
    forced_done: usize,
    free_done: u32,
    pending: Option<Pending>,
}

enum Pending {
    Forced(usize),
    Free,
}

impl HorizonEnv {
    pub fn new(game: HorizonGame, stream: SeededStream) -> Self {
        HorizonEnv {
            game,
            stream,
            history: String::new(),
            forced_done: 0,
            free_done: 0,
            pending: None,
        }
    }

    pub fn game(&self) -> &HorizonGame {
        &self.game
    }

    fn remaining_rounds(&self) -> u32 {
        self.game.free_choices() - self.free_done
    }

    fn render_prompt(&self) -> String {
        let remaining = self.remaining_rounds();
        let rounds = if remaining == 1 { "round" } else { "rounds" };
        format!(
            "You are going to a casino that owns two slot machines. You earn money each time you play on one of these machines.\n\nYou have received the following amount of dollars when playing in the past:\n{}\nYour goal is to maximize the sum of received dollars within {} additional {rounds}.\n\nQ: Which machine do you choose?",
            self.history,
            NUMBER_WORDS[remaining as usize - 1],
        )
    }

    fn machine_index(choice: &ParsedChoice) -> usize {
        match choice.token() {
            Some("F") => 0,
            _ => 1,
        }
    }
}

pub fn build(root_seed: u64, sim: u32) -> HorizonEnv {
    let cells = schedule(root_seed);
    let (horizon_six, info) = cells[sim as usize % cells.len()];
    let stream = crate::env_stream(TaskId::Horizon, root_seed, sim);
    let game = generate(horizon_six, info, &mut stream.derive("gen"));
    HorizonEnv::new(game, stream)
}

impl Environment for HorizonEnv {
    fn task_id(&self) -> TaskId {
        TaskId::Horizon
    }

    fn next_step(&mut self) -> EnvStep {
        debug_assert!(self.pending.is_none(), "apply not called");
        let tokens = vec!["F".to_string(), "J".to_string()];
        if self.forced_done < 4 {
            let machine = self.game.forced_sequence[self.forced_done];
            self.pending = Some(Pending::Forced(machine));
            // Forced trials are dictated by the design and never prompted.
            let query = ChoiceQuery::discrete(
                AnswerKind::LetterChoice,
                String::new(),
                tokens,
                "",
            );
            return EnvStep::Forced {
                query,
                choice: ParsedChoice::Token(MACHINES[machine].to_string()),
            };
        }
        if self.free_done >= self.game.free_choices() {
            return EnvStep::Done;
        }
        self.pending = Some(Pending::Free);
        let query = ChoiceQuery::discrete(
            AnswerKind::LetterChoice,
            self.render_prompt(),
            tokens,
            "A: Machine",
        );
        let observed = MACHINES
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, self.observed_rewards(i)))
            .collect();
        EnvStep::Query {
            query,
            view: QueryView::HorizonChoice {
                observed,
                horizon_six: self.game.horizon_six,
                equal_info: self.game.info == InfoCondition::Equal22,
            },
        }
    }

    fn apply(&mut self, choice: &ParsedChoice) -> TrialOutcome {
        let pending = self.pending.take().expect("next_step not called");
        let (machine, free_index) = match pending {
            Pending::Forced(machine) => {
                self.forced_done += 1;
                (machine, None)
            }
            Pending::Free => {
                let idx = self.free_done;
                self.free_done += 1;
                (Self::machine_index(choice), Some(idx))
            }
        };
        let reward = draw_reward(&self.game, machine, &mut self.stream);
        self.history.push_str(&format!(
            "- Machine {} delivered {reward} dollars.\n",
            MACHINES[machine]
        ));
        let mut out = TrialOutcome::new(Outcome::Reward(reward as f64))
            .with("horizon", if self.game.horizon_six { 6 } else { 1 })
            .with("info", self.game.info.name())
            .with("machine", MACHINES[machine].to_string())
            .with("reward", reward);
        if let Some(idx) = free_index {
            out = out.with("free_index", idx);
        }
        out
    }
}

impl HorizonEnv {
    fn observed_rewards(&self, machine: usize) -> Vec<f64> {
        // Reconstructed from history lines; forced and free draws both count.
        self.history
            .lines()
            .filter_map(|line| {
                let rest = line.strip_prefix("- Machine ")?;
                let (m, rest) = rest.split_at(1);
                if m.chars().next()? != MACHINES[machine] {
                    return None;
                }
                let amount = rest.strip_prefix(" delivered ")?.strip_suffix(" dollars.")?;
                amount.parse::<f64>().ok()
            })
            .collect()
    }
}
