//! Plain-text checkpoint format, version 1:
//!
//! ```text
//! stratified-pinn-checkpoint v1
//! hidden <h_1> <h_2> ... <h_F>
//! params <count>
//! <value>            one line per parameter, canonical order
//! ```
//!
//! Values are written with Rust's shortest round-trip float formatting, so
//! reading a checkpoint back reproduces the parameters bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{NetworkParams, NetworkShape};
use crate::{Error, Result};

pub const CHECKPOINT_MAGIC: &str = "stratified-pinn-checkpoint v1";

pub fn to_text(params: &NetworkParams) -> String {
    let mut out = String::new();
    let hidden: Vec<String> = params
        .shape()
        .neurons_per_layer()
        .iter()
        .map(|h| h.to_string())
        .collect();
    let _ = writeln!(out, "{CHECKPOINT_MAGIC}");
    let _ = writeln!(out, "hidden {}", hidden.join(" "));
    let _ = writeln!(out, "params {}", params.len());
    for v in params.as_flat() {
        let _ = writeln!(out, "{v:?}");
    }
    out
}

pub fn from_text(text: &str) -> Result<NetworkParams> {
    let bad = |msg: String| Error::Checkpoint(msg);
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim() == CHECKPOINT_MAGIC => {}
        Some((_, l)) => return Err(bad(format!("unrecognised header `{l}`"))),
        None => return Err(bad("empty checkpoint".into())),
    }
    let hidden_line = lines.next().ok_or_else(|| bad("missing `hidden` line".into()))?.1;
    let widths = hidden_line
        .strip_prefix("hidden")
        .ok_or_else(|| bad(format!("expected `hidden ...`, got `{hidden_line}`")))?
        .split_whitespace()
        .map(|w| w.parse::<usize>().map_err(|e| bad(format!("layer width `{w}`: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let shape = NetworkShape::new(widths)?;

    let count_line = lines.next().ok_or_else(|| bad("missing `params` line".into()))?.1;
    let count: usize = count_line
        .strip_prefix("params")
        .ok_or_else(|| bad(format!("expected `params N`, got `{count_line}`")))?
        .trim()
        .parse()
        .map_err(|e| bad(format!("parameter count: {e}")))?;
    if count != shape.param_count() {
        return Err(bad(format!(
            "parameter count {count} does not match shape ({})",
            shape.param_count()
        )));
    }
    let mut values = Vec::with_capacity(count);
    for (n, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        values.push(
            line.parse::<f64>()
                .map_err(|e| bad(format!("line {}: {e}", n + 1)))?,
        );
    }
    NetworkParams::from_flat(shape, values)
}

pub fn write_checkpoint(path: &Path, params: &NetworkParams) -> Result<()> {
    fs::write(path, to_text(params))?;
    Ok(())
}

pub fn read_checkpoint(path: &Path) -> Result<NetworkParams> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    from_text(&fs::read_to_string(path)?)
}
