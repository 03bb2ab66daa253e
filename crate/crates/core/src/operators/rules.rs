use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::OperatorError;

/// Index-dependent positive sequence: shift weights `ω_n` or block
/// perturbation sizes `ε_j`. Parsed from `"1/n"`, `"const:<v>"` or
/// `"pow:<p>"` (`n^p`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SequenceRule {
    Reciprocal,
    Const(f64),
    Pow(f64),
}

impl SequenceRule {
    /// Value at index `n ≥ 1`.
    pub fn value(&self, n: usize) -> f64 {
        let n = n as f64;
        match *self {
            SequenceRule::Reciprocal => 1.0 / n,
            SequenceRule::Const(v) => v,
            SequenceRule::Pow(p) => n.powf(p),
        }
    }

    pub fn values(&self, count: usize) -> Vec<f64> {
        (1..=count).map(|n| self.value(n)).collect()
    }
}

impl FromStr for SequenceRule {
    type Err = OperatorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1/n" {
            return Ok(SequenceRule::Reciprocal);
        }
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| OperatorError::InvalidRule(s.to_string()))
        };
        match s.split_once(':') {
            Some(("const", v)) => Ok(SequenceRule::Const(parse(v)?)),
            Some(("pow", v)) => Ok(SequenceRule::Pow(parse(v)?)),
            _ => Err(OperatorError::InvalidRule(s.to_string())),
        }
    }
}

impl TryFrom<String> for SequenceRule {
    type Error = OperatorError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<SequenceRule> for String {
    fn from(r: SequenceRule) -> String {
        r.to_string()
    }
}

impl fmt::Display for SequenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceRule::Reciprocal => write!(f, "1/n"),
            SequenceRule::Const(v) => write!(f, "const:{v}"),
            SequenceRule::Pow(p) => write!(f, "pow:{p}"),
        }
    }
}

/// Size of block `j` in a block perturbation: `"j"`, `"2j"` or `"const:<n>"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum BlockSizeRule {
    Index,
    DoubledIndex,
    Const(usize),
}

impl BlockSizeRule {
    pub fn size(&self, j: usize) -> usize {
        match *self {
            BlockSizeRule::Index => j,
            BlockSizeRule::DoubledIndex => 2 * j,
            BlockSizeRule::Const(n) => n,
        }
    }
}

impl FromStr for BlockSizeRule {
    type Err = OperatorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "j" => Ok(BlockSizeRule::Index),
            "2j" => Ok(BlockSizeRule::DoubledIndex),
            other => other
                .strip_prefix("const:")
                .and_then(|v| v.trim().parse::<usize>().ok())
                .filter(|&n| n > 0)
                .map(BlockSizeRule::Const)
                .ok_or_else(|| OperatorError::InvalidRule(other.to_string())),
        }
    }
}

impl TryFrom<String> for BlockSizeRule {
    type Error = OperatorError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<BlockSizeRule> for String {
    fn from(r: BlockSizeRule) -> String {
        match r {
            BlockSizeRule::Index => "j".into(),
            BlockSizeRule::DoubledIndex => "2j".into(),
            BlockSizeRule::Const(n) => format!("const:{n}"),
        }
    }
}
