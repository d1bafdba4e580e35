//! Wisconsin breast cancer data in the UCI comma-separated layout:
//! `id, nine attributes in 1..=10, class (2 benign, 4 malignant)`, with `?`
//! marking a missing attribute.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Location, Result};

pub const FEATURES: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Benign,
    Malignant,
}

impl Label {
    pub fn index(self) -> usize {
        match self {
            Label::Benign => 0,
            Label::Malignant => 1,
        }
    }

    pub fn from_index(k: usize) -> Option<Label> {
        match k {
            0 => Some(Label::Benign),
            1 => Some(Label::Malignant),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub id: String,
    /// Attributes scaled to `(v - 5.5) / 4.5`, so 1..=10 maps onto [-1, 1].
    pub features: [f64; FEATURES],
    pub label: Label,
}

/// Index sets into [`Dataset::samples`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Split {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub samples: Vec<Sample>,
    pub split: Split,
    /// Rows skipped because an attribute was missing.
    pub dropped: usize,
}

pub fn scale_feature(raw: f64) -> f64 {
    (raw - 5.5) / 4.5
}

impl Dataset {
    /// Parses the UCI file. Rows with a missing attribute are dropped; any
    /// other malformed row is an error. All samples start in the training set.
    pub fn parse_uci(text: &str) -> Result<Dataset> {
        let mut samples = Vec::new();
        let mut dropped = 0;
        'rows: for (idx, line) in text.lines().enumerate() {
            let at = Location::Line(idx + 1);
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != FEATURES + 2 {
                return Err(Error::parse(at, format!("expected {} columns, found {}", FEATURES + 2, fields.len())));
            }
            let mut features = [0.0; FEATURES];
            for (k, f) in fields[1..=FEATURES].iter().enumerate() {
                if *f == "?" {
                    dropped += 1;
                    continue 'rows;
                }
                let v: f64 = f
                    .parse()
                    .map_err(|_| Error::parse(at, format!("attribute {} `{f}` is not a number", k + 1)))?;
                if !(1.0..=10.0).contains(&v) {
                    return Err(Error::parse(at, format!("attribute {} = {v} outside 1..=10", k + 1)));
                }
                features[k] = scale_feature(v);
            }
            let label = match fields[FEATURES + 1] {
                "2" => Label::Benign,
                "4" => Label::Malignant,
                other => return Err(Error::parse(at, format!("class `{other}` is neither 2 nor 4"))),
            };
            samples.push(Sample {
                id: fields[0].to_string(),
                features,
                label,
            });
        }
        if samples.is_empty() {
            return Err(Error::parse(Location::Line(1), "no usable rows"));
        }
        let split = Split {
            train: (0..samples.len()).collect(),
            ..Split::default()
        };
        Ok(Dataset { samples, split, dropped })
    }

    /// Seeded shuffle into 70 / 15 / 15 train, validation and test sets.
    pub fn with_split(mut self, seed: u64) -> Self {
        let mut idx: Vec<usize> = (0..self.samples.len()).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let n = idx.len();
        let n_train = (n as f64 * 0.70).round() as usize;
        let n_val = (n as f64 * 0.15).round() as usize;
        self.split = Split {
            train: idx[..n_train].to_vec(),
            validation: idx[n_train..n_train + n_val].to_vec(),
            test: idx[n_train + n_val..].to_vec(),
        };
        self
    }

    pub fn subset(&self, indices: &[usize]) -> Vec<&Sample> {
        indices.iter().map(|&k| &self.samples[k]).collect()
    }
}
