//! Two-step planning task: a first-stage planet choice probabilistically
//! (70% common) leads to one of two second-stage planets, where trading
//! with an alien yields treasure at a slowly drifting probability.

use phenolab_core::{
    AnswerKind, ChoiceQuery, EnvStep, Environment, Outcome, ParsedChoice, QueryView, SeededStream,
    TaskId, TrialOutcome,
};

pub const PLANETS: [char; 2] = ['X', 'Y'];
pub const COMMON_PROB: f64 = 0.7;
pub const DAYS: u32 = 20;
pub const DRIFT_SD: f64 = 0.025;
pub const PROB_BOUNDS: (f64, f64) = (0.25, 0.75);

#[derive(Debug, Clone)]
pub struct TwoStepInstance {
    /// Two aliens per second-stage state, indexed `[state][slot]`.
    pub aliens: [[char; 2]; 2],
    /// Initial treasure probability for each alien, same indexing.
    pub initial_probs: [[f64; 2]; 2],
}

pub fn generate(stream: &mut SeededStream) -> TwoStepInstance {
    let mut pool: Vec<char> = ('A'..='Z').filter(|c| !PLANETS.contains(c)).collect();
    stream.shuffle(&mut pool);
    let aliens = [[pool[0], pool[1]], [pool[2], pool[3]]];
    let mut initial_probs = [[0.0; 2]; 2];
    for state in &mut initial_probs {
        for p in state.iter_mut() {
            *p = stream.range(PROB_BOUNDS.0..PROB_BOUNDS.1);
        }
    }
    TwoStepInstance { aliens, initial_probs }
}

/// One Gaussian drift step, reflected at the probability bounds.
pub fn drift(p: f64, sd: f64, stream: &mut SeededStream) -> f64 {
    let mut next = p + stream.normal(0.0, sd);
    let (lo, hi) = PROB_BOUNDS;
    for _ in 0..8 {
        if next > hi {
            next = 2.0 * hi - next;
        } else if next < lo {
            next = 2.0 * lo - next;
        } else {
            break;
        }
    }
    next.clamp(lo, hi)
}

struct DayRecord {
    planet: usize,
    arrived: usize,
    alien: char,
    treasure: bool,
}

enum Phase {
    Planet,
    Alien,
}

pub struct TwoStepEnv {
    inst: TwoStepInstance,
    stream: SeededStream,
    probs: [[f64; 2]; 2],
    day: u32,
    phase: Phase,
    chosen_planet: Option<usize>,
    arrived: Option<usize>,
    days_log: Vec<DayRecord>,
    pending: bool,
}

impl TwoStepEnv {
    pub fn new(inst: TwoStepInstance, stream: SeededStream) -> Self {
        let probs = inst.initial_probs;
        TwoStepEnv {
            inst,
            stream,
            probs,
            day: 1,
            phase: Phase::Planet,
            chosen_planet: None,
            arrived: None,
            days_log: Vec::new(),
            pending: false,
        }
    }

    pub fn instance(&self) -> &TwoStepInstance {
        &self.inst
    }

    /// Current treasure probabilities (drifted), indexed `[state][slot]`.
    pub fn current_probs(&self) -> &[[f64; 2]; 2] {
        &self.probs
    }

    fn history_block(&self) -> String {
        if self.days_log.is_empty() {
            return String::new();
        }
        let mut out = String::from("\n\nYour previous space travels went as follows:");
        let today = self.day;
        for (i, rec) in self.days_log.iter().enumerate() {
            let ago = today - (i as u32 + 1);
            let unit = if ago == 1 { "day" } else { "days" };
            out.push_str(&format!(
                "\n- {ago} {unit} ago, you boarded the spaceship to planet {}, arrived at planet {}, traded with alien {}, and received {}.",
                PLANETS[rec.planet],
                PLANETS[rec.arrived],
                rec.alien,
                if rec.treasure { "treasures" } else { "junk" },
            ));
        }
        out
    }

    fn planet_prompt(&self) -> String {
        format!(
            "You will travel to foreign planets in search of treasures.\nWhen you visit a planet, you can choose an alien to trade with. The chance of getting treasures from these aliens changes over time. Your goal is to maximize the number of received treasures.{}\n\nQ: Do you want to take the spaceship to planet X or planet Y?",
            self.history_block()
        )
    }

    fn alien_prompt(&self) -> String {
        let planet = self.chosen_planet.expect("stage order");
        let arrived = self.arrived.expect("stage order");
        let aliens = self.inst.aliens[arrived];
        format!(
            "{}\n\nA: Planet {}.\n\nYou arrive at planet {}.\n\nQ: Do you want to trade with alien {} or {}?",
            self.planet_prompt(),
            PLANETS[planet],
            PLANETS[arrived],
            aliens[0],
            aliens[1],
        )
    }
}

pub fn build(root_seed: u64, sim: u32) -> TwoStepEnv {
    let stream = crate::env_stream(TaskId::TwoStep, root_seed, sim);
    let inst = generate(&mut stream.derive("gen"));
    TwoStepEnv::new(inst, stream)
}

impl Environment for TwoStepEnv {
    fn task_id(&self) -> TaskId {
        TaskId::TwoStep
    }

    fn next_step(&mut self) -> EnvStep {
        debug_assert!(!self.pending, "apply not called");
        if self.day > DAYS {
            return EnvStep::Done;
        }
        self.pending = true;
        match self.phase {
            Phase::Planet => EnvStep::Query {
                query: ChoiceQuery::discrete(
                    AnswerKind::LetterChoice,
                    self.planet_prompt(),
                    PLANETS.iter().map(ToString::to_string).collect(),
                    "A: Planet",
                ),
                view: QueryView::PlanetChoice { planets: PLANETS },
            },
            Phase::Alien => {
                let arrived = self.arrived.expect("stage order");
                EnvStep::Query {
                    query: ChoiceQuery::discrete(
                        AnswerKind::LetterChoice,
                        self.alien_prompt(),
                        self.inst.aliens[arrived].iter().map(ToString::to_string).collect(),
                        "A: Alien",
                    ),
                    view: QueryView::AlienChoice {
                        planet: PLANETS[arrived],
                        aliens: self.inst.aliens[arrived],
                    },
                }
            }
        }
    }

    fn apply(&mut self, choice: &ParsedChoice) -> TrialOutcome {
        self.pending = false;
        match self.phase {
            Phase::Planet => {
                let planet = usize::from(choice.token() != Some("X"));
                let common = self.stream.bernoulli(COMMON_PROB);
                let arrived = if common { planet } else { 1 - planet };
                self.chosen_planet = Some(planet);
                self.arrived = Some(arrived);
                self.phase = Phase::Alien;
                TrialOutcome::new(Outcome::Arrived(PLANETS[arrived]))
                    .with("day", self.day)
                    .with("stage", 1)
                    .with("planet", PLANETS[planet].to_string())
                    .with("arrived", PLANETS[arrived].to_string())
                    .with("common", common)
            }
            Phase::Alien => {
                let planet = self.chosen_planet.take().expect("stage order");
                let arrived = self.arrived.take().expect("stage order");
                let aliens = self.inst.aliens[arrived];
                let slot = usize::from(choice.token() != Some(&aliens[0].to_string()));
                let treasure = self.stream.bernoulli(self.probs[arrived][slot]);
                self.days_log.push(DayRecord {
                    planet,
                    arrived,
                    alien: aliens[slot],
                    treasure,
                });
                let out = TrialOutcome::new(Outcome::Reward(f64::from(treasure)))
                    .with("day", self.day)
                    .with("stage", 2)
                    .with("planet", PLANETS[planet].to_string())
                    .with("arrived", PLANETS[arrived].to_string())
                    .with("common", planet == arrived)
                    .with("alien", aliens[slot].to_string())
                    .with("treasure", treasure);
                // Treasure probabilities drift once per day.
                for state in &mut self.probs {
                    for p in state.iter_mut() {
                        *p = drift(*p, DRIFT_SD, &mut self.stream);
                    }
                }
                self.day += 1;
                self.phase = Phase::Planet;
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transitions_are_seventy_percent_common() {
        let mut s = SeededStream::new(1, "test/twostep");
        let n = 100_000;
        let common = (0..n).filter(|_| s.bernoulli(COMMON_PROB)).count();
        let freq = common as f64 / n as f64;
        assert!((freq - 0.70).abs() < 0.005, "{freq}");
    }

    #[test]
    fn drift_respects_bounds_and_zero_sd_is_constant() {
        let mut s = SeededStream::new(2, "test/twostep");
        let mut p = 0.5;
        for _ in 0..10_000 {
            p = drift(p, DRIFT_SD, &mut s);
            assert!((0.25..=0.75).contains(&p), "{p}");
        }
        assert_eq!(drift(0.4, 0.0, &mut s), 0.4);
    }

    #[test]
    fn episode_runs_twenty_days_of_two_stages() {
        let mut env = build(3, 0);
        let mut stage1 = 0;
        let mut stage2 = 0;
        loop {
            match env.next_step() {
                EnvStep::Done => break,
                EnvStep::Query { query, .. } => {
                    if query.answer_prefix == "A: Planet" {
                        stage1 += 1;
                        env.apply(&ParsedChoice::Token("Y".into()));
                    } else {
                        stage2 += 1;
                        let alien = query.valid_tokens[0].clone();
                        env.apply(&ParsedChoice::Token(alien));
                    }
                }
                EnvStep::Forced { .. } => panic!(),
            }
        }
        assert_eq!(stage1, 20);
        assert_eq!(stage2, 20);
    }

    #[test]
    fn stage_two_prompt_names_arrival_and_aliens() {
        let mut env = build(4, 1);
        match env.next_step() {
            EnvStep::Query { .. } => env.apply(&ParsedChoice::Token("Y".into())),
            _ => panic!(),
        };
        match env.next_step() {
            EnvStep::Query { query, .. } => {
                assert!(query.prompt_text.contains("A: Planet Y."));
                assert!(query.prompt_text.contains("You arrive at planet "));
                assert!(query.prompt_text.contains("Q: Do you want to trade with alien "));
                assert_eq!(query.valid_tokens.len(), 2);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn history_uses_relative_days_with_singular_form() {
        let mut env = build(5, 2);
        for _ in 0..2 {
            match env.next_step() {
                EnvStep::Query { .. } => env.apply(&ParsedChoice::Token("X".into())),
                _ => panic!(),
            };
            match env.next_step() {
                EnvStep::Query { query, .. } => {
                    let alien = query.valid_tokens[0].clone();
                    env.apply(&ParsedChoice::Token(alien));
                }
                _ => panic!(),
            };
        }
        match env.next_step() {
            EnvStep::Query { query, .. } => {
                assert!(query.prompt_text.contains("- 2 days ago, you boarded the spaceship to planet X"));
                assert!(query.prompt_text.contains("- 1 day ago, you boarded the spaceship to planet X"));
                assert!(
                    query.prompt_text.contains("and received treasures.")
                        || query.prompt_text.contains("and received junk.")
                );
            }
            _ => panic!(),
        }
    }

    #[test]
    fn treasure_rate_tracks_alien_probability() {
        let mut s = SeededStream::new(6, "test/twostep");
        let n = 10_000;
        let hits = (0..n).filter(|_| s.bernoulli(0.75)).count();
        let freq = hits as f64 / n as f64;
        assert!((freq - 0.75).abs() < 0.02, "{freq}");
    }
}
