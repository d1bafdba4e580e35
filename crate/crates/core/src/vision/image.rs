use crate::error::{Error, Result};

/// 8-bit grayscale raster stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageGrid {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl ImageGrid {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::argument(format!("image dimensions must be positive, got {width}x{height}")));
        }
        if data.len() != width * height {
            return Err(Error::argument(format!(
                "{width}x{height} image needs {} pixels, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(ImageGrid { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Builds an image by evaluating `f(row, col)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                data.push(f(r, c));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.data[row * self.width + col]
    }

    /// Copy of the rectangle starting at `(row, col)`.
    pub fn crop(&self, row: usize, col: usize, width: usize, height: usize) -> Result<ImageGrid> {
        if row + height > self.height || col + width > self.width {
            return Err(Error::argument("crop rectangle leaves the image"));
        }
        Self::from_fn(width, height, |r, c| self.get(row + r, col + c))
    }
}

/// Linear mapping between pixel codes and voltages: `p / 255 * v_full`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PixelVoltageMap {
    pub v_full: f64,
}

impl Default for PixelVoltageMap {
    fn default() -> Self {
        PixelVoltageMap { v_full: 1.5 }
    }
}

impl PixelVoltageMap {
    pub fn new(v_full: f64) -> Result<Self> {
        if v_full > 0.0 && v_full.is_finite() {
            Ok(PixelVoltageMap { v_full })
        } else {
            Err(Error::argument(format!("full-scale voltage must be positive, got {v_full}")))
        }
    }

    pub fn to_volts(&self, pixel: u8) -> f64 {
        pixel as f64 / 255.0 * self.v_full
    }

    /// Nearest pixel code for `v`, saturating outside `[0, v_full]`.
    pub fn to_pixel(&self, v: f64) -> u8 {
        round_half_up(v / self.v_full * 255.0).clamp(0.0, 255.0) as u8
    }
}

/// Rounds half away from negative infinity. The small bias keeps values that
/// should be exact halves from dropping a level through rounding noise.
pub(crate) fn round_half_up(x: f64) -> f64 {
    (x + 0.5 + 1e-9).floor()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_checked() {
        assert!(ImageGrid::new(2, 2, vec![0; 3]).is_err());
        assert!(ImageGrid::new(0, 2, vec![]).is_err());
        let img = ImageGrid::from_fn(3, 2, |r, c| (10 * r + c) as u8).unwrap();
        assert_eq!(img.data(), &[0, 1, 2, 10, 11, 12]);
        assert_eq!(img.get(1, 2), 12);
        assert_eq!(img.crop(1, 1, 2, 1).unwrap().data(), &[11, 12]);
    }

    #[test]
    fn pixel_voltage_round_trip() {
        let map = PixelVoltageMap::default();
        assert_eq!(map.to_volts(255), 1.5);
        assert_eq!(map.to_volts(0), 0.0);
        for p in 0..=255u8 {
            assert_eq!(map.to_pixel(map.to_volts(p)), p);
        }
        assert_eq!(map.to_pixel(9.0), 255);
        assert_eq!(map.to_pixel(-1.0), 0);
    }
}
