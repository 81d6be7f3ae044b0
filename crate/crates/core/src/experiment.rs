//! End-to-end runs: generate, parse, encode, train, evaluate.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;

use crate::automata::HyperParams;
use crate::encoder::Schema;
use crate::error::{Error, Result};
use crate::forge::{generate, inject_noise, Dataset, GenConfig};
use crate::multiclass::{Metrics, MultiClassMachine};
use crate::qa::{parse_instance, Encoded, ParsedInstance, Task, TaskEncoder, TaskSettings};
use crate::rng::rng_from_seed;

/// Keeps the noise stream apart from the generator stream, so clean data is
/// the same at every noise rate.
const NOISE_SALT: u64 = 0x6e6f_6973_6521;

/// Specificity of the movement runs; at `s = 3` one-vs-rest constants mode
/// cannot keep the per-person patterns that each cover a sixth of a class.
pub const MOVEMENT_SPECIFICITY: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub data: GenConfig,
    pub settings: TaskSettings,
    pub params: HyperParams,
}

impl Experiment {
    /// Positive-literal defaults for `task` in generalized mode. Movement
    /// uses `s = 10`; the yes/no tasks keep `s = 3` and convolve over their
    /// free variables.
    pub fn new(task: Task) -> Self {
        let yes_no = task.is_yes_no();
        Self {
            data: GenConfig::for_task(task),
            settings: TaskSettings {
                task,
                conv: yes_no,
                ..TaskSettings::default()
            },
            params: HyperParams {
                negative_literals: false,
                specificity: if yes_no { 3.0 } else { MOVEMENT_SPECIFICITY },
                ..HyperParams::default()
            },
        }
    }
}

pub fn check_settings(settings: &TaskSettings, params: &HyperParams) -> Result<()> {
    params.validate()?;
    if settings.task == Task::Movement && params.negative_literals && !settings.order_tags {
        return Err(Error::Config(
            "negative literals on the movement task need order tags".into(),
        ));
    }
    Ok(())
}

pub fn parse_dataset(task: Task, data: &Dataset) -> Result<Vec<ParsedInstance>> {
    let lexicon = task.lexicon();
    data.instances
        .iter()
        .map(|i| parse_instance(i, &lexicon))
        .collect()
}

/// Train and test splits, the first with `noise` applied, plus the number
/// of corrupted training answers.
pub fn datasets(config: &GenConfig) -> Result<(Dataset, Dataset, usize)> {
    let mut rng = rng_from_seed(config.seed);
    let train = generate(config, &mut rng, config.train)?;
    let test = generate(config, &mut rng, config.test)?;
    let mut noise_rng = rng_from_seed(config.seed ^ NOISE_SALT);
    let (train, corrupted) =
        inject_noise(&train, config.noise, config.task, &config.locations, &mut noise_rng)?;
    Ok((train, test, corrupted))
}

/// Schema over the configured vocabulary, constants sorted.
pub fn schema_for(config: &GenConfig) -> Result<Schema> {
    let mut persons = config.persons.clone();
    let mut locations = config.locations.clone();
    persons.sort();
    locations.sort();
    config.task.schema(&persons, &locations)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trained {
    pub encoder: TaskEncoder,
    pub machine: MultiClassMachine,
}

impl Trained {
    /// Untrained machine over the encoder fitted on `train`.
    pub fn init(
        settings: TaskSettings,
        params: HyperParams,
        schema: Schema,
        train: &[ParsedInstance],
    ) -> Result<Self> {
        check_settings(&settings, &params)?;
        let encoder = TaskEncoder::fit(settings, schema, train)?;
        let mut rng = rng_from_seed(params.seed);
        let machine =
            MultiClassMachine::new(encoder.classes(), encoder.index().len(), params, &mut rng)?;
        Ok(Self { encoder, machine })
    }

    pub fn encode_all(&self, data: &[ParsedInstance]) -> Result<Vec<Encoded>> {
        data.iter().map(|p| self.encoder.encode(p)).collect()
    }

    /// Runs every epoch over `train` in a fresh shuffled order. The training
    /// stream is seeded one past the initialisation seed.
    pub fn train(&mut self, train: &[ParsedInstance]) -> Result<()> {
        self.train_with(train, |_, _| {})
    }

    /// As [`Trained::train`], calling `after_epoch(epoch, self)` each round.
    pub fn train_with(
        &mut self,
        train: &[ParsedInstance],
        mut after_epoch: impl FnMut(usize, &Self),
    ) -> Result<()> {
        if train.is_empty() {
            return Err(Error::Empty("training set"));
        }
        let encoded = self.encode_all(train)?;
        let mut rng = rng_from_seed(self.machine.params().seed.wrapping_add(1));
        let mut order: Vec<usize> = (0..encoded.len()).collect();
        for epoch in 0..self.machine.params().epochs {
            order.shuffle(&mut rng);
            for &i in &order {
                let e = &encoded[i];
                self.machine.train_step_conv(&e.windows, e.label, &mut rng)?;
            }
            after_epoch(epoch + 1, self);
        }
        Ok(())
    }

    /// Predicted class index and the answer it stands for.
    pub fn predict(&self, p: &ParsedInstance) -> Result<(usize, String)> {
        let e = self.encoder.encode(p)?;
        let class = self.machine.predict_conv(&e.windows)?;
        let label = &self.encoder.classes()[class];
        let answer = e
            .label_map
            .to_constant(label)
            .unwrap_or_else(|_| label.clone());
        Ok((class, answer))
    }

    pub fn evaluate(&self, test: &[ParsedInstance]) -> Result<Metrics> {
        if test.is_empty() {
            return Err(Error::Empty("evaluation set"));
        }
        let mut truth = Vec::with_capacity(test.len());
        let mut predicted = Vec::with_capacity(test.len());
        for p in test {
            let e = self.encoder.encode(p)?;
            truth.push(e.label);
            predicted.push(self.machine.predict_conv(&e.windows)?);
        }
        Metrics::from_predictions(self.encoder.classes(), &truth, &predicted)
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub trained: Trained,
    pub metrics: Metrics,
    pub corrupted: usize,
    pub wall_time: Duration,
}

/// Generates the data of `exp`, trains and evaluates on the clean test split.
pub fn run(exp: &Experiment) -> Result<Outcome> {
    let start = Instant::now();
    let mut data = exp.data.clone();
    data.task = exp.settings.task;
    let (train, test, corrupted) = datasets(&data)?;
    let train = parse_dataset(data.task, &train)?;
    let test = parse_dataset(data.task, &test)?;
    let mut trained = Trained::init(exp.settings, exp.params.clone(), schema_for(&data)?, &train)?;
    trained.train(&train)?;
    let metrics = trained.evaluate(&test)?;
    Ok(Outcome {
        trained,
        metrics,
        corrupted,
        wall_time: start.elapsed(),
    })
}
