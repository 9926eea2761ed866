//! Channel and source description files (TOML).
//!
//! Channel:
//!
//! ```toml
//! name = "BSC(0.1) / BSC(0.3)"
//! nx = 2
//! ny = 2
//! nz = 2
//! # one row per input x, entries W(y, z | x) in (y-major, z-minor) order
//! kernel = [
//!   [0.63, 0.27, 0.07, 0.03],
//!   [0.03, 0.07, 0.27, 0.63],
//! ]
//! ```
//!
//! Source, either explicit or the biased randomizer shorthand:
//!
//! ```toml
//! alphabet = 2
//! probs = [0.11, 0.89]
//! ```
//!
//! ```toml
//! [biased_example]
//! n = 10
//! alpha = 0.3
//! R = 1.0
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;
use toml::Spanned;
use wrl_core::info::MASS_TOLERANCE;
use wrl_core::{Distribution, WiretapChannel};

use crate::error::{CliError, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelFile {
    name: Option<String>,
    nx: Spanned<usize>,
    ny: Spanned<usize>,
    nz: Spanned<usize>,
    kernel: Spanned<Vec<Spanned<Vec<f64>>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceFile {
    alphabet: Option<Spanned<usize>>,
    probs: Option<Spanned<Vec<f64>>>,
    biased_example: Option<Spanned<BiasedExample>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiasedExample {
    pub n: Option<usize>,
    pub alpha: f64,
    #[serde(rename = "R")]
    pub rate: f64,
}

#[derive(Debug, Clone)]
pub struct ChannelSpec {
    pub name: Option<String>,
    pub channel: WiretapChannel,
}

#[derive(Debug, Clone)]
pub enum SourceSpec {
    /// Per-symbol law of an i.i.d. source.
    Explicit(Distribution),
    /// The biased randomizer, already a distribution over randomization
    /// indices.
    Biased(BiasedExample),
}

struct Located<'a> {
    path: &'a Path,
    text: &'a str,
}

impl Located<'_> {
    fn error(&self, offset: usize, message: impl Into<String>) -> CliError {
        let before = &self.text[..offset.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        CliError::Parse {
            path: self.path.to_path_buf(),
            line,
            column,
            message: message.into(),
        }
    }

    fn parse<T: for<'de> Deserialize<'de>>(&self) -> Result<T> {
        toml::from_str(self.text).map_err(|e| {
            let offset = e.span().map_or(0, |s| s.start);
            self.error(offset, e.message().trim_end().to_string())
        })
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: PathBuf::from(path),
        source,
    })
}

pub fn load_channel(path: &Path) -> Result<ChannelSpec> {
    let text = read(path)?;
    parse_channel(path, &text)
}

pub fn parse_channel(path: &Path, text: &str) -> Result<ChannelSpec> {
    let at = Located { path, text };
    let file: ChannelFile = at.parse()?;
    let (nx, ny, nz) = (*file.nx.get_ref(), *file.ny.get_ref(), *file.nz.get_ref());
    for (dim, name) in [(&file.nx, "nx"), (&file.ny, "ny"), (&file.nz, "nz")] {
        if *dim.get_ref() == 0 {
            return Err(at.error(dim.span().start, format!("{name} must be at least 1")));
        }
    }
    let rows = file.kernel.get_ref();
    if rows.len() != nx {
        return Err(at.error(
            file.kernel.span().start,
            format!("kernel has {} rows, expected nx = {nx}", rows.len()),
        ));
    }
    let width = ny * nz;
    for (x, row) in rows.iter().enumerate() {
        let start = row.span().start;
        let values = row.get_ref();
        if values.len() != width {
            return Err(at.error(
                start,
                format!("kernel row {x} has {} entries, expected ny*nz = {width}", values.len()),
            ));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(at.error(start, format!("kernel row {x} has invalid entry {v}")));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > MASS_TOLERANCE {
            return Err(at.error(start, format!("kernel row {x} sums to {sum}, expected 1")));
        }
    }
    let channel = WiretapChannel::new(nx, ny, nz, rows.iter().map(|r| r.get_ref().clone()).collect())
        .map_err(|e| at.error(file.kernel.span().start, e.to_string()))?;
    Ok(ChannelSpec {
        name: file.name,
        channel,
    })
}

pub fn load_source(path: &Path) -> Result<SourceSpec> {
    let text = read(path)?;
    parse_source(path, &text)
}

pub fn parse_source(path: &Path, text: &str) -> Result<SourceSpec> {
    let at = Located { path, text };
    let file: SourceFile = at.parse()?;
    match (file.alphabet, file.probs, file.biased_example) {
        (Some(alphabet), Some(probs), None) => {
            let size = *alphabet.get_ref();
            if probs.get_ref().len() != size {
                return Err(at.error(
                    probs.span().start,
                    format!(
                        "probs has {} entries, expected alphabet = {size}",
                        probs.get_ref().len()
                    ),
                ));
            }
            let d =
                Distribution::new(probs.get_ref().clone()).map_err(|e| at.error(probs.span().start, e.to_string()))?;
            Ok(SourceSpec::Explicit(d))
        }
        (None, None, Some(b)) => {
            let ex = *b.get_ref();
            if !(ex.alpha > 0.0 && ex.alpha < 0.5) {
                return Err(at.error(b.span().start, format!("alpha must lie in (0, 0.5), got {}", ex.alpha)));
            }
            if !(ex.rate > 0.0 && ex.rate.is_finite()) {
                return Err(at.error(b.span().start, format!("R must be positive, got {}", ex.rate)));
            }
            if ex.n == Some(0) {
                return Err(at.error(b.span().start, "n must be at least 1"));
            }
            Ok(SourceSpec::Biased(ex))
        }
        _ => Err(at.error(0, "expected either `alphabet` and `probs`, or a [biased_example] table")),
    }
}
