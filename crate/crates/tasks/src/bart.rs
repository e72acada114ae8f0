//! Balloon risk task: 30 balloons across three hazard classes (hidden pop
//! points uniform on [1, N] for N in {32, 8, 128}), one point per pump,
//! everything lost on explosion.

use phenolab_core::{
    AnswerKind, ChoiceQuery, EnvStep, Environment, Outcome, ParsedChoice, QueryView, SeededStream,
    TaskId, TrialOutcome,
};

pub const LABELS: [char; 3] = ['A', 'B', 'C'];
pub const HAZARD_CLASSES: [u32; 3] = [32, 8, 128];
pub const BALLOONS_PER_TYPE: usize = 10;
pub const TOTAL_BALLOONS: usize = 30;

#[derive(Debug, Clone)]
pub struct BartInstance {
    /// Hazard N for each label A, B, C (assignment shuffled per episode).
    pub hazard_by_label: [u32; 3],
    /// Label index (0..3) of each balloon in presentation order.
    pub balloon_types: Vec<usize>,
    /// Hidden pop point of each balloon: the pump on which it explodes.
    pub pop_points: Vec<u32>,
}

impl BartInstance {
    pub fn hazard_n(&self, balloon: usize) -> u32 {
        self.hazard_by_label[self.balloon_types[balloon]]
    }

    pub fn label(&self, balloon: usize) -> char {
        LABELS[self.balloon_types[balloon]]
    }
}

pub fn generate(stream: &mut SeededStream) -> BartInstance {
    let mut hazard_by_label = HAZARD_CLASSES;
    stream.shuffle(&mut hazard_by_label);
    let mut balloon_types: Vec<usize> = (0..3).flat_map(|t| [t; BALLOONS_PER_TYPE]).collect();
    stream.shuffle(&mut balloon_types);
    let pop_points = balloon_types
        .iter()
        .map(|&t| stream.range(1..=hazard_by_label[t]))
        .collect();
    BartInstance { hazard_by_label, balloon_types, pop_points }
}

const PREAMBLE: &str = "In this game, you will encounter 3 different balloons labeled A, B, and C. There will be a total of 10 balloons for each type of balloon. Your goal is to accumulate as many points as possible without popping the balloon. You will be presented with a balloon and given the option to inflate it or not. Each inflation increases the balloon's size and potential points but also carries a risk of the balloon popping. Your task is to decide whether to inflate the balloon or not knowing that a successful inflation adds 1 point from that balloon. Once you decide to stop inflating the balloon, you can no longer earn points from that balloon. If the balloon pops before you stop inflating, you will lose all the points accumulated in that balloon. Your final score will be determined by the total number of points earned across all 30 balloons. Your goal is to maximize your final score.";

struct BalloonSummary {
    label: char,
    pumps: u32,
    banked: u32,
    exploded: bool,
}

impl BalloonSummary {
    fn render(&self, number: usize) -> String {
        let points = if self.exploded { 0 } else { self.banked };
        let plural = if points == 1 { "point" } else { "points" };
        let verdict = if self.exploded { "did explode" } else { "did not explode" };
        format!(
            " -Balloon {number} ({}): You inflated the balloon {} times for a total of {points} {plural}. It {verdict}.",
            self.label, self.pumps
        )
    }
}

pub struct BartEnv {
    inst: BartInstance,
    balloon: usize,
    pumps: u32,
    finished: Vec<BalloonSummary>,
    pending: bool,
}

impl BartEnv {
    pub fn new(inst: BartInstance) -> Self {
        BartEnv { inst, balloon: 0, pumps: 0, finished: Vec::new(), pending: false }
    }

    pub fn instance(&self) -> &BartInstance {
        &self.inst
    }

    fn render_prompt(&self) -> String {
        let mut text = PREAMBLE.to_string();
        if !self.finished.is_empty() || self.pumps > 0 {
            text.push_str(
                "\n\n You observed the following previously where the type of balloon is given in parenthesis:",
            );
            for (i, summary) in self.finished.iter().enumerate() {
                text.push('\n');
                text.push_str(&summary.render(i + 1));
            }
            if self.pumps > 0 {
                // The current balloon's in-progress state.
                let current = BalloonSummary {
                    label: self.inst.label(self.balloon),
                    pumps: self.pumps,
                    banked: self.pumps,
                    exploded: false,
                };
                text.push('\n');
                text.push_str(&current.render(self.balloon + 1));
            }
        }
        text.push_str(&format!(
            "\n\nQ: You are currently with Balloon {} which is a balloon of type {}. What do you do? (Option 1 for 'skip' or 0 for 'inflate')",
            self.balloon + 1,
            self.inst.label(self.balloon)
        ));
        text
    }
}

pub fn build(root_seed: u64, sim: u32) -> BartEnv {
    let stream = crate::env_stream(TaskId::Bart, root_seed, sim);
    BartEnv::new(generate(&mut stream.derive("gen")))
}

impl Environment for BartEnv {
    fn task_id(&self) -> TaskId {
        TaskId::Bart
    }

    fn next_step(&mut self) -> EnvStep {
        debug_assert!(!self.pending, "apply not called");
        if self.balloon >= TOTAL_BALLOONS {
            return EnvStep::Done;
        }
        self.pending = true;
        EnvStep::Query {
            query: ChoiceQuery::discrete(
                AnswerKind::BinaryOption,
                self.render_prompt(),
                vec!["1".to_string(), "0".to_string()],
                "A: Option",
            ),
            view: QueryView::Balloon {
                balloon: self.balloon as u32 + 1,
                label: self.inst.label(self.balloon),
                pumps: self.pumps,
            },
        }
    }

    fn apply(&mut self, choice: &ParsedChoice) -> TrialOutcome {
        self.pending = false;
        let balloon = self.balloon;
        let label = self.inst.label(balloon);
        let hazard_n = self.inst.hazard_n(balloon);
        let inflate = choice.token() == Some("0");
        let mut out;
        if inflate {
            self.pumps += 1;
            if self.pumps == self.inst.pop_points[balloon] {
                out = TrialOutcome::new(Outcome::Exploded).with("exploded", true);
                self.finished.push(BalloonSummary {
                    label,
                    pumps: self.pumps,
                    banked: 0,
                    exploded: true,
                });
                self.balloon += 1;
                self.pumps = 0;
            } else {
                out = TrialOutcome::new(Outcome::Pumped);
            }
            out = out.with("action", "inflate");
        } else {
            out = TrialOutcome::new(Outcome::Banked(f64::from(self.pumps)))
                .with("action", "skip")
                .with("banked", self.pumps);
            self.finished.push(BalloonSummary {
                label,
                pumps: self.pumps,
                banked: self.pumps,
                exploded: false,
            });
            self.balloon += 1;
            self.pumps = 0;
        }
        out.with("balloon", balloon + 1)
            .with("label", label.to_string())
            .with("hazard_n", hazard_n)
    }
}

/// Expected banked points of the optimal policy for hazard class N,
/// by dynamic programming over the survival chain.
pub fn optimal_value(n: u32) -> f64 {
    // v[k]: best expected points having survived k pumps.
    let n = n as usize;
    let mut v = vec![0.0; n + 1];
    v[n] = n as f64;
    for k in (0..n).rev() {
        let survive = 1.0 - 1.0 / (n - k) as f64;
        v[k] = (k as f64).max(survive * v[k + 1]);
    }
    v[0]
}
