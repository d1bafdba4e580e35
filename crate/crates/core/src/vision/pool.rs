use crate::blocks::max_pool_block;
use crate::error::{Error, Result};
use crate::vision::image::{round_half_up, ImageGrid, PixelVoltageMap};
use crate::vision::kernel::{conv_forward, image_to_signals, KernelSpec, DEFAULT_DT_PIXEL, DEFAULT_R_LOAD};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoolKind {
    Max,
    Avg,
}

/// Output side length for `dim` pixels pooled by `window` with `stride`.
pub fn pooled_len(dim: usize, window: usize, stride: usize) -> usize {
    (dim - window) / stride + 1
}

/// Pools `img` over `window x window` blocks every `stride` pixels.
///
/// Max pooling with a diode threshold runs the pixels through `map` and the
/// diode selector, so dark blocks floor at the threshold voltage. Average
/// pooling over 3x3 blocks goes through the convolution engine with 1/9
/// weights; other sizes take the arithmetic mean. Averages are rounded half up.
pub fn pool_image(
    img: &ImageGrid,
    window: usize,
    stride: usize,
    kind: PoolKind,
    diode_threshold: Option<f64>,
    map: &PixelVoltageMap,
) -> Result<ImageGrid> {
    if window == 0 || stride == 0 {
        return Err(Error::argument("pool window and stride must be at least 1"));
    }
    if window > img.width() || window > img.height() {
        return Err(Error::argument(format!(
            "{window}x{window} pool window does not fit a {}x{} image",
            img.width(),
            img.height()
        )));
    }
    let ow = pooled_len(img.width(), window, stride);
    let oh = pooled_len(img.height(), window, stride);

    match kind {
        PoolKind::Max => {
            let mut data = Vec::with_capacity(ow * oh);
            for r in 0..oh {
                for c in 0..ow {
                    let block = (0..window).flat_map(|k| (0..window).map(move |l| (k, l)));
                    let px = block.clone().map(|(k, l)| img.get(r * stride + k, c * stride + l));
                    data.push(match diode_threshold {
                        None => px.max().expect("window is non-empty"),
                        Some(th) => {
                            let volts: Vec<f64> = px.map(|p| map.to_volts(p)).collect();
                            map.to_pixel(max_pool_block(&volts, th)?)
                        }
                    });
                }
            }
            ImageGrid::new(ow, oh, data)
        }
        PoolKind::Avg if window == 3 => {
            let sig = image_to_signals(img, map, DEFAULT_DT_PIXEL)?;
            let conv = conv_forward(&KernelSpec::mean(), &sig.traces, DEFAULT_R_LOAD)?;
            let pts = conv.points();
            ImageGrid::from_fn(ow, oh, |r, c| map.to_pixel(pts[r * stride * sig.out_width + c * stride].1))
        }
        PoolKind::Avg => {
            let n = (window * window) as f64;
            ImageGrid::from_fn(ow, oh, |r, c| {
                let mut sum = 0u32;
                for k in 0..window {
                    for l in 0..window {
                        sum += img.get(r * stride + k, c * stride + l) as u32;
                    }
                }
                round_half_up(sum as f64 / n) as u8
            })
        }
    }
}
