//! Mini-batch gradient descent on softmax cross-entropy.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::nn::dataset::{Dataset, Sample};
use crate::nn::network::{softmax, forward, NetMode, NetworkSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 200,
            learning_rate: 0.05,
            batch_size: 16,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    /// Network with the best validation accuracy seen (ties go to lower loss).
    pub net: NetworkSpec,
    /// Mean training loss after each epoch.
    pub epoch_losses: Vec<f64>,
    /// 0 when the starting weights were never beaten.
    pub best_epoch: usize,
    pub best_validation_accuracy: f64,
}

/// Trains with the defaults for everything except the given knobs.
pub fn train(net: &NetworkSpec, data: &Dataset, epochs: usize, lr: f64, seed: u64) -> Result<NetworkSpec> {
    let cfg = TrainConfig {
        epochs,
        learning_rate: lr,
        seed,
        ..TrainConfig::default()
    };
    Ok(train_report(net, data, &cfg)?.net)
}

pub fn train_report(net: &NetworkSpec, data: &Dataset, cfg: &TrainConfig) -> Result<TrainReport> {
    net.validate()?;
    if net.mode != NetMode::Float {
        return Err(Error::argument("only float networks can be trained"));
    }
    if !(cfg.learning_rate > 0.0) || cfg.batch_size == 0 {
        return Err(Error::argument("learning rate and batch size must be positive"));
    }
    if data.split.train.is_empty() {
        return Err(Error::argument("training split is empty"));
    }
    let train = data.subset(&data.split.train);
    let val = data.subset(if data.split.validation.is_empty() { &data.split.train } else { &data.split.validation });

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut current = net.clone();
    let mut best = current.clone();
    let mut best_score = (accuracy(&current, &val)?, -mean_loss(&current, &val)?);
    let mut best_epoch = 0;
    let mut losses = Vec::with_capacity(cfg.epochs);
    let mut order: Vec<usize> = (0..train.len()).collect();

    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(cfg.batch_size) {
            let samples: Vec<&Sample> = batch.iter().map(|&k| train[k]).collect();
            let grad = gradient(&current, &samples)?;
            let scale = cfg.learning_rate / samples.len() as f64;
            for (l, (gw, gb)) in grad.into_iter().enumerate() {
                for (row, grow) in current.weights[l].iter_mut().zip(gw) {
                    for (w, g) in row.iter_mut().zip(grow) {
                        *w -= scale * g;
                    }
                }
                for (b, g) in current.biases[l].iter_mut().zip(gb) {
                    *b -= scale * g;
                }
            }
        }
        losses.push(mean_loss(&current, &train)?);
        let score = (accuracy(&current, &val)?, -mean_loss(&current, &val)?);
        if score > best_score {
            best_score = score;
            best = current.clone();
            best_epoch = epoch;
        }
    }
    Ok(TrainReport {
        net: best,
        epoch_losses: losses,
        best_epoch,
        best_validation_accuracy: best_score.0,
    })
}

type LayerGrad = (Vec<Vec<f64>>, Vec<f64>);

/// Summed cross-entropy gradient over `samples`.
fn gradient(net: &NetworkSpec, samples: &[&Sample]) -> Result<Vec<LayerGrad>> {
    let mut grads: Vec<LayerGrad> = net
        .weights
        .iter()
        .map(|w| (vec![vec![0.0; w[0].len()]; w.len()], vec![0.0; w.len()]))
        .collect();
    let last = net.weights.len() - 1;
    for s in samples {
        // Forward pass keeping pre-activations and activations.
        let mut acts = vec![s.features.to_vec()];
        let mut pre = Vec::with_capacity(net.weights.len());
        for l in 0..=last {
            let a = &acts[l];
            let z: Vec<f64> = net.weights[l]
                .iter()
                .zip(&net.biases[l])
                .map(|(row, b)| row.iter().zip(a).map(|(w, x)| w * x).sum::<f64>() + b)
                .collect();
            let next = if l == last {
                z.clone()
            } else {
                z.iter().map(|&v| net.hidden_activation.apply(v)).collect()
            };
            pre.push(z);
            acts.push(next);
        }
        let mut delta = softmax(&acts[last + 1]);
        delta[s.label.index()] -= 1.0;
        for l in (0..=last).rev() {
            let (gw, gb) = &mut grads[l];
            for (j, d) in delta.iter().enumerate() {
                gb[j] += d;
                for (k, x) in acts[l].iter().enumerate() {
                    gw[j][k] += d * x;
                }
            }
            if l > 0 {
                delta = (0..net.weights[l][0].len())
                    .map(|k| {
                        let back: f64 = delta.iter().zip(&net.weights[l]).map(|(d, row)| d * row[k]).sum();
                        back * net.hidden_activation.derivative(pre[l - 1][k])
                    })
                    .collect();
            }
        }
    }
    Ok(grads)
}

/// Mean cross-entropy.
pub fn mean_loss(net: &NetworkSpec, samples: &[&Sample]) -> Result<f64> {
    let mut total = 0.0;
    for s in samples {
        let p = softmax(&net.logits(&s.features)?);
        total -= p[s.label.index()].max(1e-300).ln();
    }
    Ok(total / samples.len().max(1) as f64)
}

/// Fraction of samples whose predicted label matches.
pub fn accuracy(net: &NetworkSpec, samples: &[&Sample]) -> Result<f64> {
    let mut right = 0;
    for s in samples {
        if forward(net, &s.features)?.1 == s.label {
            right += 1;
        }
    }
    Ok(right as f64 / samples.len().max(1) as f64)
}

/// Counts `[[benign as benign, benign as malignant], [malignant as benign, malignant as malignant]]`.
pub fn confusion(net: &NetworkSpec, samples: &[&Sample]) -> Result<[[usize; 2]; 2]> {
    let mut m = [[0; 2]; 2];
    for s in samples {
        let guess = forward(net, &s.features)?.1;
        m[s.label.index()][guess.index()] += 1;
    }
    Ok(m)
}
