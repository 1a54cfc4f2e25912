use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use snumbers::{Exponent, Field};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Idnumbers,
    Estimate,
    Verify,
    Volume,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Which sequence a row or request refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
pub enum Quantity {
    /// Entropy numbers.
    #[serde(rename = "e")]
    #[value(name = "e")]
    Entropy,
    /// Approximation numbers.
    #[serde(rename = "a")]
    #[value(name = "a")]
    Approximation,
    /// Kolmogorov numbers.
    #[serde(rename = "d")]
    #[value(name = "d")]
    Kolmogorov,
}

impl Quantity {
    pub fn symbol(self) -> &'static str {
        match self {
            Quantity::Entropy => "e",
            Quantity::Approximation => "a",
            Quantity::Kolmogorov => "d",
        }
    }
}

/// Inclusive index range, written `3` or `1..8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRange {
    pub start: usize,
    pub end: usize,
}

impl KRange {
    pub fn single(k: usize) -> Self {
        KRange { start: k, end: k }
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }
}

impl FromStr for KRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| -> Result<usize, String> {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid index `{t}`"))
        };
        let range = match s.split_once("..") {
            Some((a, b)) => KRange {
                start: parse(a)?,
                end: parse(b.trim_start_matches('='))?,
            },
            None => KRange::single(parse(s)?),
        };
        if range.start == 0 {
            return Err("indices start at 1".into());
        }
        if range.end < range.start {
            return Err(format!("empty range `{s}`"));
        }
        Ok(range)
    }
}

impl fmt::Display for KRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}..{}", self.start, self.end)
        }
    }
}

/// Fully resolved parameters of one run; echoed verbatim in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub p: Exponent,
    pub q: Exponent,
    pub n: Option<usize>,
    pub k: KRange,
    pub field: Field,
    pub seed: u64,
    pub budget: usize,
    pub tol: f64,
    pub output: OutputFormat,
    pub input_path: Option<String>,
    pub quantities: Vec<Quantity>,
    pub timings: bool,
    /// Test hook: check Weyl's inequalities in the wrong direction.
    pub inject_fault: bool,
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_BUDGET: usize = 10_000;
pub const DEFAULT_TOL: f64 = 1e-9;

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            p: Exponent::TWO,
            q: Exponent::TWO,
            n: None,
            k: KRange::single(1),
            field: Field::Real,
            seed: DEFAULT_SEED,
            budget: DEFAULT_BUDGET,
            tol: DEFAULT_TOL,
            output: OutputFormat::Json,
            input_path: None,
            quantities: vec![Quantity::Entropy, Quantity::Approximation, Quantity::Kolmogorov],
            timings: false,
            inject_fault: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_ranges() {
        assert_eq!("3".parse::<KRange>().unwrap(), KRange::single(3));
        assert_eq!("1..4".parse::<KRange>().unwrap(), KRange { start: 1, end: 4 });
        assert_eq!("2..=5".parse::<KRange>().unwrap(), KRange { start: 2, end: 5 });
        assert!("0".parse::<KRange>().is_err());
        assert!("4..2".parse::<KRange>().is_err());
        assert!("x".parse::<KRange>().is_err());
        assert_eq!(KRange { start: 1, end: 4 }.to_string(), "1..4");
    }
}
