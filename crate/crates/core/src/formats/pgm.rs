//! Binary PGM (`P5`, maxval 255) images.

use crate::error::{Error, Location, Result};
use crate::vision::ImageGrid;

pub fn write_pgm(img: &ImageGrid) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.data());
    out
}

/// Parses a `P5` image. Header comments (`#` to end of line) are allowed.
pub fn read_pgm(bytes: &[u8]) -> Result<ImageGrid> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(Error::parse(Location::Byte(0), "missing P5 magic number"));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for (slot, name) in fields.iter_mut().zip(["width", "height", "maxval"]) {
        // Whitespace and comments between header fields.
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(|b| b.is_ascii_digit()) {
            pos += 1;
        }
        if start == pos {
            return Err(Error::parse(Location::Byte(start), format!("expected {name}")));
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("ascii digits");
        *slot = text
            .parse()
            .map_err(|_| Error::parse(Location::Byte(start), format!("{name} `{text}` too large")))?;
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(Error::parse(Location::Byte(pos), format!("maxval {maxval} unsupported, need 255")));
    }
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::parse(Location::Byte(pos), "expected single whitespace after maxval")),
    }
    let need = width
        .checked_mul(height)
        .ok_or_else(|| Error::parse(Location::Byte(0), "image dimensions overflow"))?;
    let payload = &bytes[pos..];
    if payload.len() < need {
        return Err(Error::parse(
            Location::Byte(bytes.len()),
            format!("truncated payload: {} of {need} bytes", payload.len()),
        ));
    }
    if payload.len() > need {
        return Err(Error::parse(Location::Byte(pos + need), "trailing bytes after pixel data"));
    }
    ImageGrid::new(width, height, payload.to_vec())
}
