//! 3x3 convolution through bridge-weighted signal multiplication.
//!
//! An image becomes nine voltage traces, one per kernel tap. Breakpoint `n`
//! of trace `(k, l)` carries pixel `(r + k, c + l)` of the `n`-th window,
//! windows visited row-major. The engine weights and sums the traces, and the
//! result trace is normalized back into an image.

use crate::blocks::quantize_weight;
use crate::device::DeviceParams;
use crate::error::{Error, Result};
use crate::formats::SignalTrace;
use crate::vision::image::{round_half_up, ImageGrid, PixelVoltageMap};

/// Spacing between successive windows on the trace time axis.
pub const DEFAULT_DT_PIXEL: f64 = 1e-3;

/// Transconductance of the output stage, 1 mS.
pub const DEFAULT_TRANSCONDUCTANCE: f64 = 1e-3;

/// Load resistance of the output stage, 1 kΩ.
pub const DEFAULT_R_LOAD: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Realization {
    #[default]
    Ideal,
    /// Each weight replaced by what a balanced bridge reaches when programmed
    /// toward it.
    BridgeQuantized,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub weights: [[f64; 3]; 3],
    pub realization: Realization,
}

impl KernelSpec {
    pub fn new(weights: [[f64; 3]; 3]) -> Self {
        KernelSpec {
            weights,
            realization: Realization::Ideal,
        }
    }

    /// Uniform 0.1 weights.
    pub fn blur() -> Self {
        Self::new([[0.1; 3]; 3])
    }

    /// Center 0.8 surrounded by -0.1.
    pub fn edge() -> Self {
        let mut w = [[-0.1; 3]; 3];
        w[1][1] = 0.8;
        Self::new(w)
    }

    pub fn identity() -> Self {
        let mut w = [[0.0; 3]; 3];
        w[1][1] = 1.0;
        Self::new(w)
    }

    /// Uniform `1/9` weights, the average pooling kernel.
    pub fn mean() -> Self {
        Self::new([[1.0 / 9.0; 3]; 3])
    }

    pub fn named(name: &str) -> Option<Self> {
        match name {
            "blur" => Some(Self::blur()),
            "edge" => Some(Self::edge()),
            "identity" => Some(Self::identity()),
            "mean" => Some(Self::mean()),
            _ => None,
        }
    }

    /// Parses nine numbers, row-major, separated by whitespace, commas or semicolons.
    pub fn parse_inline(text: &str) -> Result<Self> {
        let values: Vec<f64> = text
            .split(|c: char| c.is_whitespace() || c == ',' || c == ';')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::argument(format!("kernel entry `{s}` is not a number")))
            })
            .collect::<Result<_>>()?;
        if values.len() != 9 {
            return Err(Error::argument(format!("a 3x3 kernel needs 9 weights, got {}", values.len())));
        }
        let mut w = [[0.0; 3]; 3];
        for (k, v) in values.into_iter().enumerate() {
            w[k / 3][k % 3] = v;
        }
        Ok(Self::new(w))
    }

    pub fn with_realization(mut self, realization: Realization) -> Self {
        self.realization = realization;
        self
    }

    pub fn scaled(mut self, alpha: f64) -> Self {
        for row in &mut self.weights {
            for w in row {
                *w *= alpha;
            }
        }
        self
    }

    /// Weights the engine actually multiplies by.
    pub fn realized_weights(&self) -> Result<[[f64; 3]; 3]> {
        match self.realization {
            Realization::Ideal => Ok(self.weights),
            Realization::BridgeQuantized => {
                let params = DeviceParams::hp_linear();
                let mut out = [[0.0; 3]; 3];
                for (r, row) in self.weights.iter().enumerate() {
                    for (c, &w) in row.iter().enumerate() {
                        out[r][c] = quantize_weight(&params, w, 1.0)?;
                    }
                }
                Ok(out)
            }
        }
    }
}

/// The nine tap traces of an image plus the output geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSignals {
    /// Tap `(k, l)` at index `3k + l`.
    pub traces: Vec<SignalTrace>,
    pub out_width: usize,
    pub out_height: usize,
}

pub fn image_to_signals(img: &ImageGrid, map: &PixelVoltageMap, dt_pixel: f64) -> Result<KernelSignals> {
    if img.width() < 3 || img.height() < 3 {
        return Err(Error::argument(format!(
            "image is {}x{}, a 3x3 kernel needs at least 3x3",
            img.width(),
            img.height()
        )));
    }
    if !(dt_pixel > 0.0) {
        return Err(Error::argument(format!("pixel spacing must be positive, got {dt_pixel}")));
    }
    let (ow, oh) = (img.width() - 2, img.height() - 2);
    let mut traces = Vec::with_capacity(9);
    for k in 0..3 {
        for l in 0..3 {
            let mut values = Vec::with_capacity(ow * oh);
            for r in 0..oh {
                for c in 0..ow {
                    values.push(map.to_volts(img.get(r + k, c + l)));
                }
            }
            let pts = values.iter().enumerate().map(|(n, &v)| (n as f64 * dt_pixel, v)).collect();
            traces.push(SignalTrace::with_unit(pts, "V")?);
        }
    }
    Ok(KernelSignals {
        traces,
        out_width: ow,
        out_height: oh,
    })
}

/// Weighted sum of the nine tap traces at every breakpoint.
///
/// Ideal mode reports the sum itself. Bridge mode quantizes the weights and
/// scales by the output stage, transconductance times `r_load`.
pub fn conv_forward(kernel: &KernelSpec, signals: &[SignalTrace], r_load: f64) -> Result<SignalTrace> {
    if signals.len() != 9 {
        return Err(Error::argument(format!("expected 9 tap traces, got {}", signals.len())));
    }
    if !(r_load > 0.0) {
        return Err(Error::argument(format!("load resistance must be positive, got {r_load}")));
    }
    let n = signals[0].len();
    for (k, s) in signals.iter().enumerate() {
        if s.len() != n || s.times().zip(signals[0].times()).any(|(a, b)| a != b) {
            return Err(Error::argument(format!("tap trace {k} does not share breakpoints with tap 0")));
        }
    }
    let weights = kernel.realized_weights()?;
    let gain = match kernel.realization {
        Realization::Ideal => 1.0,
        Realization::BridgeQuantized => DEFAULT_TRANSCONDUCTANCE * r_load,
    };
    let mut out = Vec::with_capacity(n);
    for (idx, t) in signals[0].times().enumerate() {
        let mut acc = 0.0;
        for (tap, s) in signals.iter().enumerate() {
            acc += weights[tap / 3][tap % 3] * s.points()[idx].1;
        }
        out.push((t, gain * acc));
    }
    SignalTrace::with_unit(out, "V")
}

/// Min-max normalizes trace values onto 0..=255 and lays them out row-major.
/// A constant trace maps to an all-zero image.
pub fn signals_to_image(trace: &SignalTrace, out_width: usize, out_height: usize) -> Result<ImageGrid> {
    if trace.len() != out_width * out_height {
        return Err(Error::argument(format!(
            "trace has {} breakpoints, a {out_width}x{out_height} image needs {}",
            trace.len(),
            out_width * out_height
        )));
    }
    let values: Vec<f64> = trace.values().collect();
    ImageGrid::new(out_width, out_height, normalize_to_pixels(&values))
}

pub(crate) fn normalize_to_pixels(values: &[f64]) -> Vec<u8> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    if !(span > 0.0) {
        return vec![0; values.len()];
    }
    values
        .iter()
        .map(|&v| round_half_up((v - lo) / span * 255.0).clamp(0.0, 255.0) as u8)
        .collect()
}

/// Image in, filtered image out: signals, weighted sum, normalization.
pub fn run_kernel(img: &ImageGrid, kernel: &KernelSpec, map: &PixelVoltageMap) -> Result<ImageGrid> {
    let sig = image_to_signals(img, map, DEFAULT_DT_PIXEL)?;
    let out = conv_forward(kernel, &sig.traces, DEFAULT_R_LOAD)?;
    signals_to_image(&out, sig.out_width, sig.out_height)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn checker(n: usize) -> ImageGrid {
        ImageGrid::from_fn(n, n, |r, c| if (r + c) % 2 == 0 { 255 } else { 0 }).unwrap()
    }

    #[test]
    fn three_by_three_gives_single_breakpoints() {
        let img = ImageGrid::from_fn(3, 3, |r, c| (r * 3 + c) as u8).unwrap();
        let sig = image_to_signals(&img, &PixelVoltageMap::default(), DEFAULT_DT_PIXEL).unwrap();
        assert_eq!((sig.out_width, sig.out_height), (1, 1));
        for (tap, tr) in sig.traces.iter().enumerate() {
            assert_eq!(tr.len(), 1);
            assert_eq!(tr.points()[0].1, tap as f64 / 255.0 * 1.5);
        }
    }

    #[test]
    fn white_image_gives_full_scale() {
        let sig = image_to_signals(&ImageGrid::filled(5, 4, 255).unwrap(), &PixelVoltageMap::default(), 1e-3).unwrap();
        assert!(sig.traces.iter().all(|t| t.values().all(|v| v == 1.5)));
    }

    #[test]
    fn checkerboard_against_window_extractor() {
        let img = checker(4);
        let sig = image_to_signals(&img, &PixelVoltageMap::default(), 1e-3).unwrap();
        // Independent extractor: collect each window, then transpose.
        let mut windows = vec![];
        for r in 0..2 {
            for c in 0..2 {
                let mut w = vec![];
                for k in 0..3 {
                    for l in 0..3 {
                        w.push(img.data()[(r + k) * 4 + c + l] as f64 * 1.5 / 255.0);
                    }
                }
                windows.push(w);
            }
        }
        for tap in 0..9 {
            let got: Vec<f64> = sig.traces[tap].values().collect();
            let want: Vec<f64> = windows.iter().map(|w| w[tap]).collect();
            assert_eq!(got, want);
        }
        let times: Vec<f64> = sig.traces[0].times().collect();
        assert_eq!(times, vec![0.0, 1e-3, 2e-3, 3e-3]);
    }

    #[test]
    fn undersized_image_rejected() {
        let img = ImageGrid::filled(2, 5, 0).unwrap();
        assert!(matches!(image_to_signals(&img, &PixelVoltageMap::default(), 1e-3), Err(Error::Argument(_))));
    }

    #[test]
    fn zero_kernel_and_constant_blur() {
        let img = ImageGrid::filled(4, 4, 170).unwrap();
        let map = PixelVoltageMap::default();
        let sig = image_to_signals(&img, &map, 1e-3).unwrap();
        let zero = conv_forward(&KernelSpec::new([[0.0; 3]; 3]), &sig.traces, 1e3).unwrap();
        assert!(zero.values().all(|v| v == 0.0));
        let blur = conv_forward(&KernelSpec::blur(), &sig.traces, 1e3).unwrap();
        let v = map.to_volts(170);
        assert!(blur.values().all(|o| (o - 0.9 * v).abs() < 1e-12));
    }

    #[test]
    fn mismatched_traces_rejected() {
        let img = ImageGrid::filled(4, 4, 1).unwrap();
        let mut sig = image_to_signals(&img, &PixelVoltageMap::default(), 1e-3).unwrap();
        sig.traces[4] = SignalTrace::new(vec![(0.0, 0.0)]).unwrap();
        assert!(conv_forward(&KernelSpec::blur(), &sig.traces, 1e3).is_err());
        assert!(conv_forward(&KernelSpec::blur(), &sig.traces[..8], 1e3).is_err());
    }

    #[test]
    fn min_max_examples() {
        let tr = SignalTrace::uniform(0.0, 1e-3, &[0.0, 0.75, 1.5]).unwrap();
        assert_eq!(signals_to_image(&tr, 3, 1).unwrap().data(), &[0, 128, 255]);
        let shifted = SignalTrace::uniform(0.0, 1e-3, &[-3.0, 0.0, 3.0]).unwrap();
        assert_eq!(signals_to_image(&shifted, 1, 3).unwrap().data(), &[0, 128, 255]);
        let flat = SignalTrace::uniform(0.0, 1e-3, &[0.4; 6]).unwrap();
        assert_eq!(signals_to_image(&flat, 3, 2).unwrap().data(), &[0; 6]);
        assert!(signals_to_image(&flat, 4, 2).is_err());
    }

    #[test]
    fn edge_on_flat_image_is_black() {
        let out = run_kernel(&ImageGrid::filled(6, 6, 90).unwrap(), &KernelSpec::edge(), &PixelVoltageMap::default()).unwrap();
        assert!(out.data().iter().all(|&p| p == 0));
    }

    #[test]
    fn identity_kernel_recovers_interior() {
        let img = ImageGrid::from_fn(7, 5, |r, c| (r * 37 + c * 11 + 5) as u8).unwrap();
        let out = run_kernel(&img, &KernelSpec::identity(), &PixelVoltageMap::default()).unwrap();
        let crop = img.crop(1, 1, 5, 3).unwrap();
        let vals: Vec<f64> = crop.data().iter().map(|&p| p as f64).collect();
        assert_eq!(out.data(), normalize_to_pixels(&vals).as_slice());
    }

    #[test]
    fn named_and_inline_kernels() {
        assert_eq!(KernelSpec::named("edge").unwrap(), KernelSpec::edge());
        let k = KernelSpec::parse_inline("-0.1 -0.1 -0.1; -0.1 0.8 -0.1; -0.1,-0.1,-0.1").unwrap();
        assert_eq!(k, KernelSpec::edge());
        assert!(KernelSpec::parse_inline("1 2 3").is_err());
    }

    #[test]
    fn bridge_blur_within_one_level() {
        let img = ImageGrid::from_fn(12, 10, |r, c| ((r * 53 + c * 29) % 256) as u8).unwrap();
        let map = PixelVoltageMap::default();
        let ideal = run_kernel(&img, &KernelSpec::blur(), &map).unwrap();
        let bridge = run_kernel(&img, &KernelSpec::blur().with_realization(Realization::BridgeQuantized), &map).unwrap();
        for (a, b) in ideal.data().iter().zip(bridge.data()) {
            assert!((*a as i32 - *b as i32).abs() <= 1);
        }
    }
}
