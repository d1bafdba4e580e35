//! Small fully connected classifier with a softmax output, evaluated either
//! in floating point or through bridge-quantized weights and the analog
//! block models.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blocks::{max_bridge_weight, pade_tanh, quantize_weight, relu, summing};
use crate::device::DeviceParams;
use crate::error::{Error, Result};
use crate::nn::dataset::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Relu,
    /// `3x / (x^2 + 3)`.
    TanhPade,
}

impl Activation {
    pub fn name(self) -> &'static str {
        match self {
            Activation::Relu => "relu",
            Activation::TanhPade => "tanh-pade",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "relu" => Some(Activation::Relu),
            "tanh-pade" => Some(Activation::TanhPade),
            _ => None,
        }
    }

    pub(crate) fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Relu => relu(z, None),
            Activation::TanhPade => pade_tanh(z),
        }
    }

    pub(crate) fn derivative(self, z: f64) -> f64 {
        match self {
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::TanhPade => {
                let d = z * z + 3.0;
                3.0 * (3.0 - z * z) / (d * d)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetMode {
    Float,
    BridgeQuantized,
}

impl NetMode {
    pub fn name(self) -> &'static str {
        match self {
            NetMode::Float => "float",
            NetMode::BridgeQuantized => "bridge",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "float" => Some(NetMode::Float),
            "bridge" => Some(NetMode::BridgeQuantized),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    pub layer_sizes: Vec<usize>,
    pub hidden_activation: Activation,
    /// `weights[l][j][k]` connects node `k` of layer `l` to node `j` of layer `l + 1`.
    pub weights: Vec<Vec<Vec<f64>>>,
    pub biases: Vec<Vec<f64>>,
    pub mode: NetMode,
    /// Per-layer output gain in bridge mode; weights are stored divided by it
    /// so every stored value fits a bridge. Empty in float mode.
    pub gains: Vec<f64>,
}

/// `exp(z_i - max z) / Σ exp(z_j - max z)`.
pub fn softmax(z: &[f64]) -> Vec<f64> {
    let top = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|&v| (v - top).exp()).collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|v| v / total).collect()
}

impl NetworkSpec {
    /// All-zero float network.
    pub fn zeros(layer_sizes: &[usize], hidden_activation: Activation) -> Result<Self> {
        if layer_sizes.len() < 2 || layer_sizes.contains(&0) {
            return Err(Error::argument(format!("need at least two positive layer sizes, got {layer_sizes:?}")));
        }
        let weights = layer_sizes.windows(2).map(|w| vec![vec![0.0; w[0]]; w[1]]).collect();
        let biases = layer_sizes[1..].iter().map(|&n| vec![0.0; n]).collect();
        Ok(NetworkSpec {
            layer_sizes: layer_sizes.to_vec(),
            hidden_activation,
            weights,
            biases,
            mode: NetMode::Float,
            gains: vec![],
        })
    }

    /// Float network with Glorot-uniform weights drawn from `seed`.
    pub fn init(layer_sizes: &[usize], hidden_activation: Activation, seed: u64) -> Result<Self> {
        let mut net = Self::zeros(layer_sizes, hidden_activation)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (l, layer) in net.weights.iter_mut().enumerate() {
            let a = (6.0 / (layer_sizes[l] + layer_sizes[l + 1]) as f64).sqrt();
            for w in layer.iter_mut().flatten() {
                *w = rng.gen_range(-a..a);
            }
        }
        Ok(net)
    }

    /// Default 9-2-2 classifier.
    pub fn default_classifier(seed: u64) -> Self {
        Self::init(&[9, 2, 2], Activation::Relu, seed).expect("fixed sizes are valid")
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.layer_sizes.len();
        if n < 2 || self.weights.len() != n - 1 || self.biases.len() != n - 1 {
            return Err(Error::argument("layer count does not match weight and bias lists"));
        }
        for l in 0..n - 1 {
            let (fan_in, fan_out) = (self.layer_sizes[l], self.layer_sizes[l + 1]);
            if self.weights[l].len() != fan_out
                || self.weights[l].iter().any(|row| row.len() != fan_in)
                || self.biases[l].len() != fan_out
            {
                return Err(Error::argument(format!("layer {l} is not {fan_out}x{fan_in}")));
            }
        }
        match self.mode {
            NetMode::Float if !self.gains.is_empty() => Err(Error::argument("float network carries bridge gains")),
            NetMode::BridgeQuantized if self.gains.len() != n - 1 => {
                Err(Error::argument("bridge network needs one gain per layer"))
            }
            _ => Ok(()),
        }
    }

    /// Output-layer pre-softmax values.
    pub fn logits(&self, features: &[f64]) -> Result<Vec<f64>> {
        self.validate()?;
        if features.len() != self.layer_sizes[0] {
            return Err(Error::argument(format!(
                "network takes {} features, got {}",
                self.layer_sizes[0],
                features.len()
            )));
        }
        let last = self.weights.len() - 1;
        let mut a = features.to_vec();
        for l in 0..=last {
            let z: Vec<f64> = match self.mode {
                NetMode::Float => self.weights[l]
                    .iter()
                    .zip(&self.biases[l])
                    .map(|(row, b)| row.iter().zip(&a).map(|(w, x)| w * x).sum::<f64>() + b)
                    .collect(),
                NetMode::BridgeQuantized => self.weights[l]
                    .iter()
                    .zip(&self.biases[l])
                    .map(|(row, &b)| {
                        // Each bridge outputs w * v; the bias bridge sees a constant 1.0 input.
                        let products = row.iter().zip(&a).map(|(w, x)| w * x).chain(std::iter::once(b * 1.0));
                        let (plus, minus): (Vec<f64>, Vec<f64>) = products.partition(|p| *p >= 0.0);
                        let minus: Vec<f64> = minus.into_iter().map(f64::abs).collect();
                        self.gains[l] * summing(&plus, &minus)
                    })
                    .collect(),
            };
            a = if l == last {
                z
            } else {
                z.into_iter().map(|v| self.hidden_activation.apply(v)).collect()
            };
        }
        Ok(a)
    }

    /// Largest weight magnitude in each layer, biases included.
    fn layer_peaks(&self) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.biases)
            .map(|(w, b)| w.iter().flatten().chain(b).fold(0.0f64, |m, v| m.max(v.abs())))
            .collect()
    }

    /// Bridge-quantized copy of a float network.
    ///
    /// Each layer is divided by a gain `s >= 1` so its largest weight sits
    /// just inside the bridge range, every weight is replaced by what a
    /// balanced bridge reaches when programmed toward it, and `s` is restored
    /// on the summed output.
    pub fn quantize(&self, params: &DeviceParams, amplitude: f64) -> Result<NetworkSpec> {
        self.validate()?;
        if self.mode != NetMode::Float {
            return Err(Error::argument("network is already quantized"));
        }
        let limit = 0.99 * max_bridge_weight(params);
        let gains: Vec<f64> = self.layer_peaks().into_iter().map(|p| (p / limit).max(1.0)).collect();
        let q = |w: f64, s: f64| quantize_weight(params, w / s, amplitude);
        let mut out = self.clone();
        for (l, &s) in gains.iter().enumerate() {
            for w in out.weights[l].iter_mut().flatten() {
                *w = q(*w, s)?;
            }
            for b in out.biases[l].iter_mut() {
                *b = q(*b, s)?;
            }
        }
        out.mode = NetMode::BridgeQuantized;
        out.gains = gains;
        Ok(out)
    }

    /// Float network with the same effective weights (quantized values times gains).
    pub fn effective_float(&self) -> NetworkSpec {
        let mut out = self.clone();
        if self.mode == NetMode::BridgeQuantized {
            for (l, &s) in self.gains.iter().enumerate() {
                out.weights[l].iter_mut().flatten().for_each(|w| *w *= s);
                out.biases[l].iter_mut().for_each(|b| *b *= s);
            }
        }
        out.mode = NetMode::Float;
        out.gains.clear();
        out
    }
}

/// Class probabilities and the predicted label of a two-output network.
pub fn forward(net: &NetworkSpec, features: &[f64]) -> Result<(Vec<f64>, Label)> {
    let probs = softmax(&net.logits(features)?);
    if probs.len() != 2 {
        return Err(Error::argument(format!("label prediction needs 2 outputs, network has {}", probs.len())));
    }
    let label = if probs[1] > probs[0] { Label::Malignant } else { Label::Benign };
    Ok((probs, label))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{bridge_weight, program_to_weight, BridgeSynapse, ProgrammingPlan};
    use crate::device::DEFAULT_DT;
    use proptest::prelude::*;

    #[test]
    fn softmax_examples() {
        assert_eq!(softmax(&[0.0, 0.0]), vec![0.5, 0.5]);
        assert_eq!(softmax(&[1234.5, 1234.5]), vec![0.5, 0.5]);
        let p = softmax(&[3.0f64.ln(), 0.0]);
        assert!((p[0] - 0.75).abs() < 1e-15 && (p[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn zero_network_is_undecided() {
        let net = NetworkSpec::zeros(&[9, 2, 2], Activation::Relu).unwrap();
        assert_eq!(forward(&net, &[0.3; 9]).unwrap().0, vec![0.5, 0.5]);
    }

    #[test]
    fn single_path_logits() {
        // Hidden node 0 copies feature 0; output 0 copies hidden node 0.
        let mut net = NetworkSpec::zeros(&[9, 2, 2], Activation::Relu).unwrap();
        net.weights[0][0][0] = 1.0;
        net.weights[1][0][0] = 1.0;
        let mut x = [0.0; 9];
        x[0] = 1.0;
        let (p, label) = forward(&net, &x).unwrap();
        let e = 1.0f64.exp();
        assert!((p[0] - e / (e + 1.0)).abs() < 1e-15);
        assert!((p[1] - 1.0 / (e + 1.0)).abs() < 1e-15);
        assert_eq!(label, Label::Benign);
    }

    #[test]
    fn shape_errors() {
        let net = NetworkSpec::zeros(&[9, 2, 2], Activation::Relu).unwrap();
        assert!(forward(&net, &[0.0; 8]).is_err());
        let mut bad = net.clone();
        bad.weights[1].pop();
        assert!(forward(&bad, &[0.0; 9]).is_err());
        assert!(NetworkSpec::zeros(&[9], Activation::Relu).is_err());
    }

    #[test]
    fn quantized_weights_fit_bridges_and_reprogram() {
        let mut net = NetworkSpec::init(&[9, 2, 2], Activation::Relu, 3).unwrap();
        net.weights[0][1][4] = 2.4;
        net.weights[1] = vec![vec![0.3, -0.4], vec![-0.2, 0.5]];
        let params = DeviceParams::hp_linear();
        let q = net.quantize(&params, 1.0).unwrap();
        assert!(q.gains[0] > 1.0);
        assert_eq!(q.gains[1], 1.0);
        let start = BridgeSynapse::balanced(params);
        for &w in q.weights.iter().flatten().flatten().chain(q.biases.iter().flatten()) {
            assert!(w.abs() <= max_bridge_weight(&params));
            let width = program_to_weight(&start, w, 1.0).unwrap();
            let plan = ProgrammingPlan { width, dt: DEFAULT_DT };
            assert!((bridge_weight(&plan.apply(&start, 1.0).unwrap()) - w).abs() <= 0.01);
        }
        let x = [0.2, -0.4, 0.9, 0.0, -1.0, 0.5, 0.1, -0.3, 0.7];
        let a = q.logits(&x).unwrap();
        let b = q.effective_float().logits(&x).unwrap();
        for (u, v) in a.iter().zip(&b) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn softmax_properties(z in prop::collection::vec(-50.0f64..50.0, 1..8), shift in -100.0f64..100.0) {
            let p = softmax(&z);
            prop_assert!(p.iter().all(|&v| v > 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let shifted: Vec<f64> = z.iter().map(|v| v + shift).collect();
            for (a, b) in p.iter().zip(softmax(&shifted)) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn forward_is_deterministic(seed in 0u64..1000, x in prop::collection::vec(-1.0f64..1.0, 9)) {
            let net = NetworkSpec::init(&[9, 2, 2], Activation::TanhPade, seed).unwrap();
            let a = forward(&net, &x).unwrap();
            let b = forward(&net, &x).unwrap();
            prop_assert_eq!(a.0[0].to_bits(), b.0[0].to_bits());
            prop_assert_eq!(a.1, b.1);
        }
    }
}
