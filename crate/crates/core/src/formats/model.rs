//! Plain-text model files for [`NetworkSpec`].
//!
//! ```text
//! 9 2 2 relu float
//! <2 rows of 9 weights>
//! <2 biases>
//! <2 rows of 2 weights>
//! <2 biases>
//! ```
//!
//! Bridge-quantized networks end with one more line holding the per-layer gains.

use crate::error::{Error, Location, Result};
use crate::formats::matrix::{format_row, parse_row};
use crate::nn::{Activation, NetMode, NetworkSpec};

pub fn write_model(net: &NetworkSpec) -> Result<String> {
    net.validate()?;
    let sizes: Vec<String> = net.layer_sizes.iter().map(|n| n.to_string()).collect();
    let mut out = format!("{} {} {}\n", sizes.join(" "), net.hidden_activation.name(), net.mode.name());
    for (w, b) in net.weights.iter().zip(&net.biases) {
        for row in w {
            out.push_str(&format_row(row));
            out.push('\n');
        }
        out.push_str(&format_row(b));
        out.push('\n');
    }
    if net.mode == NetMode::BridgeQuantized {
        out.push_str(&format_row(&net.gains));
        out.push('\n');
    }
    Ok(out)
}

pub fn read_model(text: &str) -> Result<NetworkSpec> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(Location::Line(1), "empty model file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 4 {
        return Err(Error::parse(Location::Line(hline), "header needs layer sizes, activation and mode"));
    }
    let (sizes, tail) = fields.split_at(fields.len() - 2);
    let layer_sizes = sizes
        .iter()
        .map(|s| s.parse::<usize>().ok().filter(|&n| n > 0))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::parse(Location::Line(hline), format!("bad layer sizes {sizes:?}")))?;
    let activation = Activation::from_name(tail[0])
        .ok_or_else(|| Error::parse(Location::Line(hline), format!("unknown activation `{}`", tail[0])))?;
    let mode = NetMode::from_name(tail[1])
        .ok_or_else(|| Error::parse(Location::Line(hline), format!("unknown mode `{}`", tail[1])))?;

    let mut last_line = hline;
    let mut next_row = |len: usize, what: &str| -> Result<Vec<f64>> {
        let (n, line) = lines
            .next()
            .ok_or_else(|| Error::parse(Location::Line(last_line + 1), format!("missing {what}")))?;
        last_line = n;
        let row = parse_row(line, n)?;
        if row.len() != len {
            return Err(Error::parse(Location::Line(n), format!("{what} has {} entries, expected {len}", row.len())));
        }
        Ok(row)
    };

    let mut net = NetworkSpec::zeros(&layer_sizes, activation)?;
    for l in 0..layer_sizes.len() - 1 {
        for j in 0..layer_sizes[l + 1] {
            net.weights[l][j] = next_row(layer_sizes[l], &format!("layer {l} weight row {j}"))?;
        }
        net.biases[l] = next_row(layer_sizes[l + 1], &format!("layer {l} biases"))?;
    }
    if mode == NetMode::BridgeQuantized {
        net.gains = next_row(layer_sizes.len() - 1, "bridge gains")?;
    }
    net.mode = mode;
    if let Some((n, _)) = lines.next() {
        return Err(Error::parse(Location::Line(n), "trailing data after model"));
    }
    Ok(net)
}
