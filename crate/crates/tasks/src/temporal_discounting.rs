//! Adaptive intertemporal-choice battery: three 5-rung baseline ladders
//! walked by a midpoint staircase (at most three live questions each), then
//! four fixed anomaly items. Scored 0-19: the summed switch rank of each
//! baseline plus one point per sooner-preferring anomaly answer.

use serde::Deserialize;
use thiserror::Error;

use phenolab_core::{
    AnswerKind, ChoiceQuery, EnvStep, Environment, Outcome, ParsedChoice, QueryView, TaskId,
    Transcript, TrialOutcome,
};

const DEFAULT_LADDERS: &str = include_str!("../../../data/discounting_ladders.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Gain,
    Loss,
}

impl Polarity {
    fn verb(self) -> &'static str {
        match self {
            Polarity::Gain => "Receive",
            Polarity::Loss => "Pay",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct BaselineSpec {
    pub polarity: Polarity,
    pub immediate: u32,
    pub delay_months: u32,
    /// Delayed values in strictly increasing order; rung ranks are 1-based.
    pub rungs: [u32; 5],
    /// 1-based rung shown in the worked opener pair.
    pub opener_rung: usize,
    /// Seeded opener answer (option number).
    pub opener_answer: u8,
}

#[derive(Debug, Clone, Deserialize)]
pub struct DiscountingBattery {
    pub baselines: Vec<BaselineSpec>,
}

#[derive(Debug, Error)]
pub enum BatteryError {
    #[error("ladder file is invalid: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("ladder file must define exactly 3 baselines with increasing rungs")]
    Shape,
}

impl DiscountingBattery {
    pub fn from_toml(text: &str) -> Result<Self, BatteryError> {
        let battery: DiscountingBattery = toml::from_str(text)?;
        let ok = battery.baselines.len() == 3
            && battery.baselines.iter().all(|b| {
                b.rungs.windows(2).all(|w| w[0] < w[1])
                    && (1..=5).contains(&b.opener_rung)
                    && (1..=2).contains(&b.opener_answer)
            });
        if ok {
            Ok(battery)
        } else {
            Err(BatteryError::Shape)
        }
    }
}

impl Default for DiscountingBattery {
    fn default() -> Self {
        DiscountingBattery::from_toml(DEFAULT_LADDERS).expect("embedded ladder file is valid")
    }
}

/// The four fixed anomaly items: (name, option 1, option 2, sooner option).
pub const ANOMALIES: [(&str, &str, &str, u8); 4] = [
    (
        "present_bias",
        "Receive 500 dollars in 12 months.",
        "Receive 600 dollars in 24 months.",
        1,
    ),
    (
        "subadditivity",
        "Receive 500 dollars now.",
        "Receive 700 dollars in 24 months.",
        1,
    ),
    (
        "delay_speedup",
        "Receive 500 dollars now.",
        "Wait 12 months for the 500 dollars but with an additional 99 dollars.",
        1,
    ),
    (
        "delay_length",
        "Wait 12 months to receive 600 dollars now.",
        "Pay 100 dollars and receive the 600 dollars gain now.",
        2,
    ),
];

/// Staircase interval over switch ranks [lo, hi], both inclusive.
#[derive(Debug, Clone, Copy)]
pub struct Staircase {
    pub lo: u32,
    pub hi: u32,
}

impl Staircase {
    pub fn new() -> Self {
        Staircase { lo: 0, hi: 5 }
    }

    pub fn settled(&self) -> bool {
        self.lo == self.hi
    }

    /// 1-based rung to present next: the upper midpoint of the interval,
    /// which resolves any answer pattern in at most three questions.
    pub fn next_rung(&self) -> u32 {
        (self.lo + self.hi + 2) / 2
    }

    /// A sooner answer at rung `m` pins the rank at `>= m`; a delayed
    /// answer pins it at `< m`.
    pub fn update(&mut self, rung: u32, chose_sooner: bool) {
        if chose_sooner {
            self.lo = self.lo.max(rung);
        } else {
            self.hi = self.hi.min(rung - 1);
        }
    }

    pub fn rank(&self) -> Option<u32> {
        self.settled().then_some(self.lo)
    }
}

impl Default for Staircase {
    fn default() -> Self {
        Staircase::new()
    }
}

fn question_text(option1: &str, option2: &str) -> String {
    format!(
        "Q: What do you prefer between the following two options:\n - Option 1: {option1}\n - Option 2: {option2}"
    )
}

fn baseline_options(spec: &BaselineSpec, rung: u32) -> (String, String) {
    let verb = spec.polarity.verb();
    (
        format!("{verb} {} dollars now.", spec.immediate),
        format!(
            "{verb} {} dollars in {} months.",
            spec.rungs[rung as usize - 1],
            spec.delay_months
        ),
    )
}

enum Phase {
    Opener(usize),
    Baseline(usize),
    Anomaly(usize),
    Done,
}

pub struct DiscountingEnv {
    battery: DiscountingBattery,
    phase: Phase,
    staircase: Staircase,
    /// Chained question-answer history of the current baseline.
    history: String,
    pending_rung: Option<u32>,
    pending_anomaly: Option<usize>,
    ranks: [Option<u32>; 3],
}

impl DiscountingEnv {
    pub fn new(battery: DiscountingBattery) -> Self {
        DiscountingEnv {
            battery,
            phase: Phase::Opener(0),
            staircase: Staircase::new(),
            history: String::new(),
            pending_rung: None,
            pending_anomaly: None,
            ranks: [None; 3],
        }
    }

    fn prompt_with_history(&self, question: &str) -> String {
        if self.history.is_empty() {
            question.to_string()
        } else {
            format!("{}{question}", self.history)
        }
    }
}

pub fn build(_root_seed: u64, _sim: u32) -> DiscountingEnv {
    // The battery is fixed, not procedurally generated.
    DiscountingEnv::new(DiscountingBattery::default())
}

impl Environment for DiscountingEnv {
    fn task_id(&self) -> TaskId {
        TaskId::TemporalDiscounting
    }

    fn next_step(&mut self) -> EnvStep {
        match self.phase {
            Phase::Opener(b) => {
                let spec = &self.battery.baselines[b];
                let (o1, o2) = baseline_options(spec, spec.opener_rung as u32);
                let query = ChoiceQuery::discrete(
                    AnswerKind::BinaryOption,
                    question_text(&o1, &o2),
                    vec!["1".to_string(), "2".to_string()],
                    "A: I prefer option",
                );
                EnvStep::Forced {
                    query,
                    choice: ParsedChoice::Token(spec.opener_answer.to_string()),
                }
            }
            Phase::Baseline(b) => {
                let spec = &self.battery.baselines[b];
                let rung = self.staircase.next_rung();
                self.pending_rung = Some(rung);
                let (o1, o2) = baseline_options(spec, rung);
                let query = ChoiceQuery::discrete(
                    AnswerKind::BinaryOption,
                    self.prompt_with_history(&question_text(&o1, &o2)),
                    vec!["1".to_string(), "2".to_string()],
                    "A: I prefer option",
                );
                EnvStep::Query {
                    query,
                    view: QueryView::Intertemporal {
                        sooner_option: 1,
                        item: format!("baseline_{}_rung_{rung}", b + 1),
                    },
                }
            }
            Phase::Anomaly(i) => {
                let (name, o1, o2, sooner) = ANOMALIES[i];
                self.pending_anomaly = Some(i);
                let query = ChoiceQuery::discrete(
                    AnswerKind::BinaryOption,
                    question_text(o1, o2),
                    vec!["1".to_string(), "2".to_string()],
                    "A: I prefer option",
                );
                EnvStep::Query {
                    query,
                    view: QueryView::Intertemporal {
                        sooner_option: sooner,
                        item: name.to_string(),
                    },
                }
            }
            Phase::Done => EnvStep::Done,
        }
    }

    fn apply(&mut self, choice: &ParsedChoice) -> TrialOutcome {
        match self.phase {
            Phase::Opener(b) => {
                let spec = &self.battery.baselines[b];
                let (o1, o2) = baseline_options(spec, spec.opener_rung as u32);
                self.history = format!(
                    "{}\n\nA: I prefer option {}.\n\n",
                    question_text(&o1, &o2),
                    spec.opener_answer
                );
                self.phase = Phase::Baseline(b);
                TrialOutcome::new(Outcome::None)
                    .with("phase", "opener")
                    .with("baseline", b + 1)
            }
            Phase::Baseline(b) => {
                let rung = self.pending_rung.take().expect("question pending");
                let chose_sooner = choice.token() == Some("1");
                let spec = &self.battery.baselines[b];
                let (o1, o2) = baseline_options(spec, rung);
                self.history.push_str(&format!(
                    "{}\n\nA: I prefer option {choice}.\n\n",
                    question_text(&o1, &o2)
                ));
                self.staircase.update(rung, chose_sooner);
                let out = TrialOutcome::new(Outcome::None)
                    .with("phase", "baseline")
                    .with("baseline", b + 1)
                    .with("rung", rung)
                    .with("sooner_option", 1)
                    .with("chose_sooner", chose_sooner);
                if let Some(rank) = self.staircase.rank() {
                    self.ranks[b] = Some(rank);
                    self.staircase = Staircase::new();
                    self.history.clear();
                    self.phase = if b + 1 < self.battery.baselines.len() {
                        Phase::Opener(b + 1)
                    } else {
                        Phase::Anomaly(0)
                    };
                }
                out
            }
            Phase::Anomaly(i) => {
                self.pending_anomaly.take().expect("question pending");
                let (name, _, _, sooner) = ANOMALIES[i];
                let chose_sooner = choice.token() == Some(&sooner.to_string());
                self.phase = if i + 1 < ANOMALIES.len() {
                    Phase::Anomaly(i + 1)
                } else {
                    Phase::Done
                };
                TrialOutcome::new(Outcome::None)
                    .with("phase", "anomaly")
                    .with("item", i + 1)
                    .with("name", name)
                    .with("sooner_option", sooner)
                    .with("chose_sooner", chose_sooner)
            }
            Phase::Done => unreachable!("apply after Done"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScoreError {
    #[error("battery incomplete: baseline {0} rank undetermined")]
    BaselineUnsettled(usize),
    #[error("battery incomplete: {0} of 4 anomaly answers present")]
    AnomaliesMissing(usize),
}

/// Reconstructs the 0-19 score from a completed battery transcript: the
/// switch rank of each baseline staircase plus one per sooner-preferring
/// anomaly answer.
pub fn score(transcript: &Transcript) -> Result<u32, ScoreError> {
    let mut staircases = [Staircase::new(), Staircase::new(), Staircase::new()];
    let mut anomaly_sooner = 0u32;
    let mut anomalies_seen = 0usize;
    for trial in &transcript.trials {
        match Transcript::meta_str(trial, "phase") {
            Some("baseline") => {
                let b = Transcript::meta_f64(trial, "baseline").unwrap_or(0.0) as usize;
                let rung = Transcript::meta_f64(trial, "rung").unwrap_or(0.0) as u32;
                let sooner = Transcript::meta_bool(trial, "chose_sooner").unwrap_or(false);
                if (1..=3).contains(&b) {
                    staircases[b - 1].update(rung, sooner);
                }
            }
            Some("anomaly") => {
                anomalies_seen += 1;
                if Transcript::meta_bool(trial, "chose_sooner").unwrap_or(false) {
                    anomaly_sooner += 1;
                }
            }
            _ => {}
        }
    }
    let mut total = anomaly_sooner;
    for (i, s) in staircases.iter().enumerate() {
        total += s.rank().ok_or(ScoreError::BaselineUnsettled(i + 1))?;
    }
    if anomalies_seen < 4 {
        return Err(ScoreError::AnomaliesMissing(anomalies_seen));
    }
    Ok(total)
}
