use chaoskit_core::hardy::AnalyticPolynomial;
use chaoskit_core::numerics::{DenseOperator, Scalar};
use chaoskit_core::operators::{
    make_block_perturbation, make_lebesgue_operator, make_multiplication_truncation, make_weighted_backward_shift,
    BlockPerturbationSpec, BlockSizeRule, LebesgueDiscretizationSpec, LebesgueOperator, SequenceRule,
    WeightedShiftSpec, DEFAULT_DIM_CAP,
};
use serde::Deserialize;

use crate::{CliError, Result};

/// Shift weights: a rule string or explicit real values `ω_1 … ω_{N−1}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum WeightsField {
    Rule(String),
    Values(Vec<f64>),
}

/// Raw operator spec. Fields not used by `kind` must be absent.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub kind: String,
    pub dim: Option<usize>,
    pub weights: Option<WeightsField>,
    pub lambda: Option<[f64; 2]>,
    pub blocks: Option<usize>,
    pub eps: Option<String>,
    pub eps_scale: Option<f64>,
    pub sizes: Option<String>,
    pub dim_cap: Option<usize>,
    pub coeffs: Option<Vec<[f64; 2]>>,
    pub adjoint: Option<bool>,
    pub a: Option<f64>,
    pub b: Option<f64>,
}

#[derive(Debug, Clone)]
pub enum ParsedOperator {
    WeightedShift { spec: WeightedShiftSpec, operator: DenseOperator },
    Block { spec: BlockPerturbationSpec, operator: DenseOperator },
    Multiplication { symbol: AnalyticPolynomial, operator: DenseOperator },
    Lebesgue(LebesgueOperator),
}

impl ParsedOperator {
    pub fn operator(&self) -> &DenseOperator {
        match self {
            ParsedOperator::WeightedShift { operator, .. }
            | ParsedOperator::Block { operator, .. }
            | ParsedOperator::Multiplication { operator, .. } => operator,
            ParsedOperator::Lebesgue(op) => &op.matrix,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::InvalidConfig(msg.into())
}

fn require<T>(v: Option<T>, kind: &str, field: &str) -> Result<T> {
    v.ok_or_else(|| invalid(format!("{kind}: missing field {field:?}")))
}

fn forbid(kind: &str, present: &[(&str, bool)]) -> Result<()> {
    match present.iter().find(|(_, p)| *p) {
        Some((field, _)) => Err(invalid(format!("{kind}: field {field:?} does not apply"))),
        None => Ok(()),
    }
}

fn positive_dim(kind: &str, dim: Option<usize>) -> Result<usize> {
    match require(dim, kind, "dim")? {
        0 => Err(invalid(format!("{kind}: dim must be positive"))),
        n => Ok(n),
    }
}

impl OperatorSpec {
    pub fn from_json(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(CliError::from_json)
    }

    pub fn build(&self) -> Result<ParsedOperator> {
        let kind = self.kind.as_str();
        match kind {
            "weighted_backward_shift" => {
                forbid(
                    kind,
                    &[
                        ("blocks", self.blocks.is_some()),
                        ("eps", self.eps.is_some()),
                        ("coeffs", self.coeffs.is_some()),
                        ("a", self.a.is_some()),
                        ("b", self.b.is_some()),
                    ],
                )?;
                let dim = positive_dim(kind, self.dim)?;
                let spec = match &self.weights {
                    None => WeightedShiftSpec::unweighted(dim),
                    Some(WeightsField::Rule(r)) => WeightedShiftSpec::from_rule(dim, r.parse::<SequenceRule>()?),
                    Some(WeightsField::Values(v)) => {
                        WeightedShiftSpec::new(dim, v.iter().map(|&w| Scalar::new(w, 0.0)).collect())
                    }
                };
                let mut operator = make_weighted_backward_shift(&spec)?;
                if self.adjoint == Some(true) {
                    operator = operator.adjoint();
                }
                if let Some([re, im]) = self.lambda {
                    operator = operator.shift_diagonal(Scalar::new(re, im));
                }
                Ok(ParsedOperator::WeightedShift { spec, operator })
            }
            "block_perturbation" => {
                forbid(
                    kind,
                    &[
                        ("dim", self.dim.is_some()),
                        ("weights", self.weights.is_some()),
                        ("coeffs", self.coeffs.is_some()),
                        ("adjoint", self.adjoint.is_some()),
                        ("a", self.a.is_some()),
                        ("b", self.b.is_some()),
                    ],
                )?;
                let [re, im] = self.lambda.unwrap_or([1.0, 0.0]);
                let blocks = require(self.blocks, kind, "blocks")?;
                if blocks == 0 {
                    return Err(invalid("block_perturbation: blocks must be positive"));
                }
                let eps: SequenceRule = self.eps.as_deref().unwrap_or("pow:-0.5").parse()?;
                let sizes: BlockSizeRule = self.sizes.as_deref().unwrap_or("j").parse()?;
                let mut spec = BlockPerturbationSpec::standard(Scalar::new(re, im), blocks)
                    .with_eps(eps, self.eps_scale.unwrap_or(1.0))
                    .with_sizes(sizes);
                spec.dim_cap = self.dim_cap.unwrap_or(DEFAULT_DIM_CAP);
                let operator = make_block_perturbation(&spec)?;
                Ok(ParsedOperator::Block { spec, operator })
            }
            "multiplication" => {
                forbid(
                    kind,
                    &[
                        ("weights", self.weights.is_some()),
                        ("lambda", self.lambda.is_some()),
                        ("blocks", self.blocks.is_some()),
                        ("eps", self.eps.is_some()),
                        ("a", self.a.is_some()),
                        ("b", self.b.is_some()),
                    ],
                )?;
                let dim = positive_dim(kind, self.dim)?;
                let coeffs = require(self.coeffs.as_ref(), kind, "coeffs")?;
                let symbol = AnalyticPolynomial::new(coeffs.iter().map(|&[re, im]| Scalar::new(re, im)).collect())
                    .map_err(|e| invalid(format!("multiplication: {e}")))?;
                let mut operator = make_multiplication_truncation(&symbol, dim)?;
                if self.adjoint == Some(true) {
                    operator = operator.adjoint();
                }
                Ok(ParsedOperator::Multiplication { symbol, operator })
            }
            "lebesgue" => {
                forbid(
                    kind,
                    &[
                        ("weights", self.weights.is_some()),
                        ("lambda", self.lambda.is_some()),
                        ("blocks", self.blocks.is_some()),
                        ("eps", self.eps.is_some()),
                        ("coeffs", self.coeffs.is_some()),
                    ],
                )?;
                let dim = positive_dim(kind, self.dim)?;
                let spec = LebesgueDiscretizationSpec::new(self.a.unwrap_or(0.5), self.b.unwrap_or(2.0), dim);
                Ok(ParsedOperator::Lebesgue(make_lebesgue_operator(&spec)?))
            }
            other => Err(invalid(format!("unknown operator kind {other:?}"))),
        }
    }
}

/// Builds the operator described by a JSON spec.
pub fn parse_operator_spec(json: &str) -> Result<DenseOperator> {
    Ok(OperatorSpec::from_json(json)?.build()?.operator().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_shift_spec() {
        let t = parse_operator_spec(r#"{"kind":"weighted_backward_shift","dim":4,"weights":"1/n"}"#).unwrap();
        assert_eq!(t.dim(), 4);
        assert_eq!(t.get(0, 1), Scalar::new(1.0, 0.0));
        assert_eq!(t.get(2, 3), Scalar::new(1.0 / 3.0, 0.0));
        let t = parse_operator_spec(r#"{"kind":"weighted_backward_shift","dim":3,"weights":[2,3]}"#).unwrap();
        assert_eq!(t.get(1, 2), Scalar::new(3.0, 0.0));
    }

    #[test]
    fn block_spec() {
        let t = parse_operator_spec(r#"{"kind":"block_perturbation","lambda":[1,0],"blocks":36,"eps":"pow:-0.5"}"#)
            .unwrap();
        assert_eq!(t.dim(), 36 * 37 / 2);
        let spec = BlockPerturbationSpec::standard(Scalar::new(1.0, 0.0), 36);
        assert_eq!(t, make_block_perturbation(&spec).unwrap());
    }

    #[test]
    fn multiplication_and_lebesgue() {
        let t = parse_operator_spec(r#"{"kind":"multiplication","dim":5,"coeffs":[[0.5,0],[1,0]],"adjoint":true}"#)
            .unwrap();
        assert_eq!(t.get(0, 1), Scalar::new(1.0, 0.0));
        assert_eq!(t.get(0, 0), Scalar::new(0.5, 0.0));
        let t = parse_operator_spec(r#"{"kind":"lebesgue","dim":2}"#).unwrap();
        assert_eq!(t.get(0, 1), Scalar::new(1.625, 0.0));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(
            parse_operator_spec(r#"{"kind":"weighted_backward_shift","dim":0,"weights":"1/n"}"#),
            Err(CliError::InvalidConfig(_))
        ));
        assert!(matches!(
            parse_operator_spec("{\"kind\":\n \"weighted_backward_shift\", \"dim\": \"four\"}"),
            Err(CliError::ParseError { line: 2, .. })
        ));
        assert!(matches!(
            parse_operator_spec(r#"{"kind":"weighted_backward_shift","dim":4,"colour":1}"#),
            Err(CliError::ParseError { .. })
        ));
        assert!(matches!(parse_operator_spec(r#"{"kind":"bilateral","dim":4}"#), Err(CliError::InvalidConfig(_))));
        assert!(matches!(
            parse_operator_spec(r#"{"kind":"lebesgue","dim":4,"blocks":3}"#),
            Err(CliError::InvalidConfig(_))
        ));
        assert!(parse_operator_spec(r#"{"kind":"weighted_backward_shift","dim":4,"weights":"sqrt"}"#).is_err());
    }
}
