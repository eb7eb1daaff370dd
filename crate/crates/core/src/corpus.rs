//! Test-function corpora: seeded generators and file loading.

use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::embed::tent_function;
use crate::error::{Error, Result};
use crate::space::Space;

/// A function on the points of a space, with a label for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedFunction {
    pub label: String,
    pub values: Vec<f64>,
}

impl NamedFunction {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Self {
        NamedFunction { label: label.into(), values }
    }
}

/// A corpus generator.
///
/// Text forms: `random-uniform:N`, `indicators`, `tents`,
/// `lipschitz-noise:N`, `constants`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// `N` functions with values uniform in `[-1, 1]`.
    RandomUniform(usize),
    /// `χ_{B(x,1)}` for every point `x`.
    Indicators,
    /// The tent `u_x` at every point `x`.
    Tents,
    /// `N` functions `d(x0, ·)` plus uniform noise of size `r_min/4`, with
    /// random `x0`.
    LipschitzNoise(usize),
    /// The constants `1`, `-2.5` and `7`.
    Constants,
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Generator> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let count = |what: &str| -> Result<usize> {
            let a = arg.ok_or_else(|| Error::Domain(format!("{what} needs a count, e.g. {what}:20")))?;
            a.parse().map_err(|_| Error::Domain(format!("bad count '{a}' in '{s}'")))
        };
        match name {
            "random-uniform" => Ok(Generator::RandomUniform(count(name)?)),
            "lipschitz-noise" => Ok(Generator::LipschitzNoise(count(name)?)),
            "indicators" => Ok(Generator::Indicators),
            "tents" | "tents-at-all-centers" => Ok(Generator::Tents),
            "constants" => Ok(Generator::Constants),
            _ => Err(Error::Domain(format!("unknown corpus generator '{s}'"))),
        }
    }
}

impl Generator {
    /// Generates the corpus; the output depends only on the space and seed.
    pub fn generate(&self, space: &Space, seed: u64) -> Result<Vec<NamedFunction>> {
        let n = space.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = match *self {
            Generator::RandomUniform(k) => (0..k)
                .map(|i| NamedFunction::new(format!("uniform{i}"), (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()))
                .collect(),
            Generator::Indicators => (0..n)
                .map(|x| {
                    let v = (0..n).map(|y| if space.d(x, y) < 1.0 { 1.0 } else { 0.0 }).collect();
                    NamedFunction::new(format!("ball{x}"), v)
                })
                .collect(),
            Generator::Tents => (0..n)
                .map(|x| Ok(NamedFunction::new(format!("tent{x}"), tent_function(space, x)?)))
                .collect::<Result<Vec<_>>>()?,
            Generator::LipschitzNoise(k) => {
                let eps = space.r_min() / 4.0;
                (0..k)
                    .map(|i| {
                        let x0 = rng.gen_range(0..n);
                        let v = (0..n).map(|y| space.d(x0, y) + eps * rng.gen_range(-1.0..1.0)).collect();
                        NamedFunction::new(format!("lipnoise{i}"), v)
                    })
                    .collect()
            }
            Generator::Constants => [1.0, -2.5, 7.0]
                .iter()
                .map(|&c| NamedFunction::new(format!("const{c}"), vec![c; n]))
                .collect(),
        };
        Ok(out)
    }
}

/// Reads a corpus from JSON (`[{"label": .., "values": [..]}]`) or CSV
/// (header-less rows `label,v0,v1,..`), chosen by file extension.
pub fn load(path: impl AsRef<Path>, space: &Space) -> Result<Vec<NamedFunction>> {
    let path = path.as_ref();
    let corpus: Vec<NamedFunction> = if path.extension().is_some_and(|e| e == "csv") {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_path(path)?;
        let mut out = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let mut it = rec.iter();
            let label = it.next().unwrap_or_default().to_string();
            let values = it
                .map(|v| v.trim().parse::<f64>().map_err(|_| Error::Domain(format!("bad value '{v}' in row {label}"))))
                .collect::<Result<Vec<f64>>>()?;
            out.push(NamedFunction { label, values });
        }
        out
    } else {
        serde_json::from_str(&std::fs::read_to_string(path)?)?
    };
    for nf in &corpus {
        if nf.values.len() != space.n() {
            return Err(Error::Domain(format!(
                "corpus function {} has {} values for {} points",
                nf.label,
                nf.values.len(),
                space.n()
            )));
        }
    }
    Ok(corpus)
}

/// A generator name or a file path.
pub fn resolve(source: &str, space: &Space, seed: u64) -> Result<Vec<NamedFunction>> {
    match source.parse::<Generator>() {
        Ok(g) => g.generate(space, seed),
        Err(e) if Path::new(source).exists() => load(source, space).map_err(|le| match le {
            Error::Io(_) => e,
            other => other,
        }),
        Err(e) => Err(e),
    }
}
