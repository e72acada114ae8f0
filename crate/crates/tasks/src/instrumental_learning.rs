//! Instrumental learning: four interleaved two-armed bandits ("casinos"),
//! two with symmetric win probabilities (0.25/0.25 and 0.75/0.75) and two
//! asymmetric (0.25 vs 0.75), 24 visits each over 96 interleaved visits.

use phenolab_core::{
    AnswerKind, ChoiceQuery, EnvStep, Environment, Outcome, ParsedChoice, QueryView, SeededStream,
    TaskId, TrialOutcome,
};

pub const VISITS: usize = 96;
pub const VISITS_PER_CASINO: usize = 24;

#[derive(Debug, Clone)]
pub struct Casino {
    /// The two machine letters, in presentation order.
    pub machines: [char; 2],
    /// Win probability of each machine.
    pub win_probs: [f64; 2],
}

#[derive(Debug, Clone)]
pub struct CasinoSet {
    pub casinos: [Casino; 4],
    /// Casino index (0-based) for each of the 96 visits.
    pub visit_order: Vec<usize>,
}

const ALPHABET: [char; 26] = [
    'A', 'B', 'C', 'D', 'E', 'F', 'G', 'H', 'I', 'J', 'K', 'L', 'M', 'N', 'O', 'P', 'Q', 'R',
    'S', 'T', 'U', 'V', 'W', 'X', 'Y', 'Z',
];

pub fn generate(stream: &mut SeededStream) -> CasinoSet {
    // Eight distinct letters, two per casino.
    let mut letters = ALPHABET;
    stream.shuffle(&mut letters);

    let mut conditions: [[f64; 2]; 4] =
        [[0.25, 0.25], [0.75, 0.75], [0.25, 0.75], [0.25, 0.75]];
    stream.shuffle(&mut conditions);
    let casinos: Vec<Casino> = (0..4)
        .map(|i| {
            let mut win_probs = conditions[i];
            if stream.bernoulli(0.5) {
                win_probs.swap(0, 1);
            }
            Casino {
                machines: [letters[2 * i], letters[2 * i + 1]],
                win_probs,
            }
        })
        .collect();

    let mut visit_order: Vec<usize> = (0..4).flat_map(|c| [c; VISITS_PER_CASINO]).collect();
    stream.shuffle(&mut visit_order);

    CasinoSet {
        casinos: casinos.try_into().expect("four casinos"),
        visit_order,
    }
}

const PREAMBLE: &str = "You are going to visit four different casinos (named 1, 2, 3, and 4) 24 times each. Each casino owns two slot machines which all return either 1 or 0 dollars stochastically with different reward probabilities. Your goal is to maximize the sum of received dollars within 96 visits.";

pub struct CasinoEnv {
    set: CasinoSet,
    stream: SeededStream,
    visit: usize,
    history: String,
    pending: bool,
}

impl CasinoEnv {
    pub fn new(set: CasinoSet, stream: SeededStream) -> Self {
        CasinoEnv { set, stream, visit: 0, history: String::new(), pending: false }
    }

    pub fn set(&self) -> &CasinoSet {
        &self.set
    }

    fn render_prompt(&self) -> String {
        let casino = self.set.visit_order[self.visit];
        let machines = self.set.casinos[casino].machines;
        let history_block = if self.history.is_empty() {
            String::new()
        } else {
            format!(
                "\n\nYou have received the following amount of dollars when playing in the past:\n{}",
                self.history.trim_end_matches('\n')
            )
        };
        format!(
            "{PREAMBLE}{history_block}\n\nQ: You are now in visit {} playing in Casino {}. Which machine do you choose between Machine {} and Machine {}? (Give the answer in the form \"Machine <your choice>\").",
            self.visit + 1,
            casino + 1,
            machines[0],
            machines[1],
        )
    }
}

pub fn build(root_seed: u64, sim: u32) -> CasinoEnv {
    let stream = crate::env_stream(TaskId::InstrumentalLearning, root_seed, sim);
    let set = generate(&mut stream.derive("gen"));
    CasinoEnv::new(set, stream)
}

impl Environment for CasinoEnv {
    fn task_id(&self) -> TaskId {
        TaskId::InstrumentalLearning
    }

    fn next_step(&mut self) -> EnvStep {
        debug_assert!(!self.pending, "apply not called");
        if self.visit >= VISITS {
            return EnvStep::Done;
        }
        self.pending = true;
        let casino = self.set.visit_order[self.visit];
        let machines = self.set.casinos[casino].machines;
        EnvStep::Query {
            query: ChoiceQuery::discrete(
                AnswerKind::LetterChoice,
                self.render_prompt(),
                machines.iter().map(ToString::to_string).collect(),
                "A: Machine",
            ),
            view: QueryView::CasinoChoice { casino: casino as u8, machines },
        }
    }

    fn apply(&mut self, choice: &ParsedChoice) -> TrialOutcome {
        self.pending = false;
        let casino_idx = self.set.visit_order[self.visit];
        let casino = &self.set.casinos[casino_idx];
        let arm = usize::from(choice.token() != Some(&casino.machines[0].to_string()));
        let reward = i64::from(self.stream.bernoulli(casino.win_probs[arm]));
        self.history.push_str(&format!(
            "- Machine {} in Casino {} delivered {reward}.0 dollars.\n",
            casino.machines[arm],
            casino_idx + 1
        ));
        self.visit += 1;
        TrialOutcome::new(Outcome::Reward(reward as f64))
            .with("visit", self.visit)
            .with("casino", casino_idx + 1)
            .with("machine_a", casino.machines[0].to_string())
            .with("machine_b", casino.machines[1].to_string())
            .with("machine", casino.machines[arm].to_string())
            .with("reward", reward)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn letters_are_distinct_and_visits_balanced() {
        let mut s = SeededStream::new(1, "test/casinos");
        for _ in 0..20 {
            let set = generate(&mut s);
            let letters: BTreeSet<char> =
                set.casinos.iter().flat_map(|c| c.machines).collect();
            assert_eq!(letters.len(), 8);
            assert_eq!(set.visit_order.len(), VISITS);
            for c in 0..4 {
                assert_eq!(
                    set.visit_order.iter().filter(|&&v| v == c).count(),
                    VISITS_PER_CASINO
                );
            }
        }
    }

    #[test]
    fn two_symmetric_two_asymmetric() {
        let mut s = SeededStream::new(2, "test/casinos");
        let set = generate(&mut s);
        let asym = set
            .casinos
            .iter()
            .filter(|c| (c.win_probs[0] - c.win_probs[1]).abs() > 1e-9)
            .count();
        assert_eq!(asym, 2);
    }

    #[test]
    fn win_rate_follows_arm_probability() {
        let mut s = SeededStream::new(3, "test/casinos");
        let n = 10_000;
        let wins = (0..n).filter(|_| s.bernoulli(0.75)).count();
        let rate = wins as f64 / n as f64;
        assert!((rate - 0.75).abs() < 0.01, "{rate}");
    }

    #[test]
    fn optimal_and_random_policy_values() {
        // Optimal picks the better arm everywhere: (0.25+0.75+0.75+0.75)/4;
        // random averages both arms: 0.5.
        let mut s = SeededStream::new(4, "test/casinos");
        let mut optimal_total = 0.0;
        let mut random_total = 0.0;
        let episodes = 200;
        for _ in 0..episodes {
            let set = generate(&mut s);
            for &c in &set.visit_order {
                let casino = &set.casinos[c];
                let best = if casino.win_probs[0] >= casino.win_probs[1] { 0 } else { 1 };
                optimal_total += f64::from(s.bernoulli(casino.win_probs[best]));
                let arm = usize::from(s.bernoulli(0.5));
                random_total += f64::from(s.bernoulli(casino.win_probs[arm]));
            }
        }
        let n = (episodes * VISITS) as f64;
        assert!((optimal_total / n - 0.625).abs() < 0.02);
        assert!((random_total / n - 0.5).abs() < 0.02);
    }

    #[test]
    fn prompt_matches_visit_structure() {
        let mut env = build(5, 0);
        for _ in 0..4 {
            match env.next_step() {
                EnvStep::Query { query, .. } => {
                    let tok = query.valid_tokens[0].clone();
                    env.apply(&ParsedChoice::Token(tok));
                }
                _ => panic!(),
            }
        }
        match env.next_step() {
            EnvStep::Query { query, .. } => {
                assert!(query.prompt_text.starts_with(PREAMBLE));
                assert!(query.prompt_text.contains("Q: You are now in visit 5 playing in Casino "));
                assert!(query
                    .prompt_text
                    .contains("You have received the following amount of dollars when playing in the past:"));
                assert!(query.prompt_text.contains(" delivered "));
                assert_eq!(query.answer_prefix, "A: Machine");
            }
            _ => panic!(),
        }
    }

    #[test]
    fn full_episode_is_96_visits() {
        let mut env = build(6, 1);
        let mut visits = 0;
        loop {
            match env.next_step() {
                EnvStep::Done => break,
                EnvStep::Query { query, .. } => {
                    visits += 1;
                    let tok = query.valid_tokens[1].clone();
                    env.apply(&ParsedChoice::Token(tok));
                }
                EnvStep::Forced { .. } => panic!(),
            }
        }
        assert_eq!(visits, 96);
    }
}
