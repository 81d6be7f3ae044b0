//! One-vs-rest composition of binary machines with argmax decisions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::automata::{EvalMode, HyperParams, LiteralVector, TsetlinMachine};
use crate::error::{Error, Result};

/// A labelled binary machine voting for one class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassBank {
    pub label: String,
    pub machine: TsetlinMachine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiClassMachine {
    params: HyperParams,
    features: usize,
    banks: Vec<ClassBank>,
}

/// Index of the largest vote; ties go to the lowest index.
pub fn argmax_first(votes: &[i32]) -> usize {
    let mut best = 0;
    for (i, &v) in votes.iter().enumerate() {
        if v > votes[best] {
            best = i;
        }
    }
    best
}

impl MultiClassMachine {
    pub fn new<R: Rng + ?Sized>(
        labels: &[String],
        features: usize,
        params: HyperParams,
        rng: &mut R,
    ) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::Config(format!(
                "need at least two classes, got {}",
                labels.len()
            )));
        }
        let banks = labels
            .iter()
            .map(|label| {
                Ok(ClassBank {
                    label: label.clone(),
                    machine: TsetlinMachine::new(features, params.clone(), rng)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params,
            features,
            banks,
        })
    }

    pub fn from_banks(banks: Vec<ClassBank>) -> Result<Self> {
        if banks.len() < 2 {
            return Err(Error::Config(format!(
                "need at least two classes, got {}",
                banks.len()
            )));
        }
        let params = banks[0].machine.params().clone();
        let features = banks[0].machine.features();
        for bank in &banks[1..] {
            if bank.machine.params() != &params {
                return Err(Error::Model(format!(
                    "bank `{}` has different hyperparameters",
                    bank.label
                )));
            }
            if bank.machine.features() != features {
                return Err(Error::DimensionMismatch {
                    expected: features,
                    actual: bank.machine.features(),
                });
            }
        }
        Ok(Self {
            params,
            features,
            banks,
        })
    }

    pub fn params(&self) -> &HyperParams {
        &self.params
    }

    pub fn features(&self) -> usize {
        self.features
    }

    pub fn banks(&self) -> &[ClassBank] {
        &self.banks
    }

    pub(crate) fn banks_mut(&mut self) -> &mut [ClassBank] {
        &mut self.banks
    }

    pub fn labels(&self) -> Vec<String> {
        self.banks.iter().map(|b| b.label.clone()).collect()
    }

    pub fn class_index(&self, label: &str) -> Result<usize> {
        self.banks
            .iter()
            .position(|b| b.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub(crate) fn check_width(&self, x: &LiteralVector) -> Result<()> {
        self.banks[0].machine.check_width(x)
    }

    pub(crate) fn check_class(&self, class: usize) -> Result<()> {
        if class < self.banks.len() {
            Ok(())
        } else {
            Err(Error::UnknownLabel(format!("#{class}")))
        }
    }

    pub fn class_votes(&self, x: &LiteralVector) -> Result<Vec<i32>> {
        self.check_width(x)?;
        Ok(self
            .banks
            .iter()
            .map(|b| b.machine.votes(x, EvalMode::Classify))
            .collect())
    }

    pub fn predict(&self, x: &LiteralVector) -> Result<usize> {
        Ok(argmax_first(&self.class_votes(x)?))
    }

    /// Draws the single non-target bank that receives `y = 0` this step.
    /// With two classes the choice is forced and nothing is drawn.
    pub(crate) fn sample_negative<R: Rng + ?Sized>(&self, target: usize, rng: &mut R) -> usize {
        let k = self.banks.len();
        if k == 2 {
            return 1 - target;
        }
        let r = rng.random_range(0..k - 1);
        if r >= target {
            r + 1
        } else {
            r
        }
    }

    /// Target bank learns `y = 1`, one uniformly drawn other bank `y = 0`.
    pub fn train_step<R: Rng + ?Sized>(
        &mut self,
        x: &LiteralVector,
        class: usize,
        rng: &mut R,
    ) -> Result<()> {
        self.check_width(x)?;
        self.check_class(class)?;
        self.banks[class].machine.train_step(x, true, rng);
        let other = self.sample_negative(class, rng);
        self.banks[other].machine.train_step(x, false, rng);
        Ok(())
    }

    pub fn train_step_label<R: Rng + ?Sized>(
        &mut self,
        x: &LiteralVector,
        label: &str,
        rng: &mut R,
    ) -> Result<()> {
        let class = self.class_index(label)?;
        self.train_step(x, class, rng)
    }

    pub fn evaluate(&self, samples: &[(LiteralVector, usize)]) -> Result<Metrics> {
        if samples.is_empty() {
            return Err(Error::Empty("evaluation set"));
        }
        let mut truth = Vec::with_capacity(samples.len());
        let mut predicted = Vec::with_capacity(samples.len());
        for (x, y) in samples {
            self.check_class(*y)?;
            truth.push(*y);
            predicted.push(self.predict(x)?);
        }
        Metrics::from_predictions(&self.labels(), &truth, &predicted)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassScore {
    pub label: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

/// Classification metrics. `confusion[i][j]` counts true class `i`
/// predicted as `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    /// F1 averaged over classes that occur in the truth or the predictions.
    pub f_macro: f64,
    /// Micro-averaged F1; equals accuracy for single-label predictions.
    pub f_micro: f64,
    pub labels: Vec<String>,
    pub confusion: Vec<Vec<usize>>,
    pub per_class: Vec<ClassScore>,
}

impl Metrics {
    pub fn from_predictions(labels: &[String], truth: &[usize], predicted: &[usize]) -> Result<Self> {
        if truth.is_empty() {
            return Err(Error::Empty("evaluation set"));
        }
        if truth.len() != predicted.len() {
            return Err(Error::DimensionMismatch {
                expected: truth.len(),
                actual: predicted.len(),
            });
        }
        let k = labels.len();
        let mut confusion = vec![vec![0usize; k]; k];
        for (&t, &p) in truth.iter().zip(predicted) {
            if t >= k || p >= k {
                return Err(Error::UnknownLabel(format!("#{}", t.max(p))));
            }
            confusion[t][p] += 1;
        }
        let correct: usize = (0..k).map(|i| confusion[i][i]).sum();
        let accuracy = correct as f64 / truth.len() as f64;

        let mut per_class = Vec::with_capacity(k);
        let mut f_sum = 0.0;
        let mut counted = 0usize;
        for i in 0..k {
            let tp = confusion[i][i];
            let support: usize = confusion[i].iter().sum();
            let predicted_i: usize = (0..k).map(|r| confusion[r][i]).sum();
            let precision = ratio(tp, predicted_i);
            let recall = ratio(tp, support);
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            if support > 0 || predicted_i > 0 {
                f_sum += f1;
                counted += 1;
            }
            per_class.push(ClassScore {
                label: labels[i].clone(),
                precision,
                recall,
                f1,
                support,
            });
        }
        let f_macro = if counted > 0 { f_sum / counted as f64 } else { 0.0 };
        Ok(Self {
            accuracy,
            f_macro,
            f_micro: accuracy,
            labels: labels.to_vec(),
            confusion,
            per_class,
        })
    }

    /// Line-oriented plain-text rendering.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "accuracy {:.4}\nf_macro {:.4}\nf_micro {:.4}\n",
            self.accuracy, self.f_macro, self.f_micro
        );
        for (label, row) in self.labels.iter().zip(&self.confusion) {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&format!("confusion {label} {}\n", cells.join(" ")));
        }
        out
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}
