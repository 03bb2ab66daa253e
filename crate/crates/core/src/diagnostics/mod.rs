//! Finite-horizon orbit diagnostics. Everything here reports evidence from
//! a truncated orbit; none of it certifies a limit.

mod dc;

pub use dc::{classify_dc, distributional_profile, DcClass, DcVerdict, DistributionalProfile, DC_READING};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{invert, DenseOperator, NumericsError, Scalar, StateVector};
use crate::operators::{make_weighted_backward_shift, scalar_perturb, OperatorError, WeightedShiftSpec};

pub const DELTA_LOW: f64 = 1e-6;
pub const DELTA_HIGH: f64 = 10.0;
pub const ETA: f64 = 0.05;
/// Norms above this stop the iteration.
pub const OVERFLOW_NORM: f64 = 1e300;
pub const MIN_EVIDENCE_HORIZON: usize = 16;
pub const MIN_DC_HORIZON: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("horizon must be at least 1")]
    InvalidHorizon,
    #[error("tau grid must be positive and strictly ascending")]
    InvalidTauGrid,
    #[error("candidate {index} is zero or exceeds the bound")]
    InvalidCandidate { index: usize },
    #[error("lambda {0} is not unimodular")]
    NotUnimodular(Scalar),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub type Result<T> = std::result::Result<T, DiagnosticsError>;

/// `‖Tⁿx‖` for `n = 0..=H`, cut short at the first overflow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub horizon: usize,
    pub norms: Vec<f64>,
    pub tail_start: usize,
    /// Step whose norm exceeded [`OVERFLOW_NORM`]; not stored in `norms`.
    pub overflow_at: Option<usize>,
    pub start: StateVector,
}

impl OrbitRecord {
    pub fn initial_norm(&self) -> f64 {
        self.norms[0]
    }

    /// Norms over `[tail_start, H]` that were computed.
    pub fn tail(&self) -> &[f64] {
        let from = self.tail_start.min(self.norms.len() - 1);
        &self.norms[from..]
    }

    pub fn max_norm(&self) -> (usize, f64) {
        arg_extreme(&self.norms, |a, b| a > b)
    }

    pub fn min_norm(&self) -> (usize, f64) {
        arg_extreme(&self.norms, |a, b| a < b)
    }
}

fn arg_extreme(v: &[f64], better: impl Fn(f64, f64) -> bool) -> (usize, f64) {
    let mut best = (0, v[0]);
    for (i, &x) in v.iter().enumerate().skip(1) {
        if better(x, best.1) {
            best = (i, x);
        }
    }
    best
}

pub fn orbit_norms(t: &DenseOperator, x: &StateVector, horizon: usize) -> Result<OrbitRecord> {
    if horizon == 0 {
        return Err(DiagnosticsError::InvalidHorizon);
    }
    if t.dim() != x.dim() {
        return Err(NumericsError::DimensionMismatch {
            expected: t.dim(),
            got: x.dim(),
        }
        .into());
    }
    let mut norms = Vec::with_capacity(horizon + 1);
    norms.push(x.norm());
    let mut state = x.as_slice().to_vec();
    let mut overflow_at = None;
    for n in 1..=horizon {
        state = t.apply_slice(&state);
        let norm = crate::numerics::scaled_norm(&state);
        if !(norm <= OVERFLOW_NORM) {
            overflow_at = Some(n);
            break;
        }
        norms.push(norm);
    }
    Ok(OrbitRecord {
        horizon,
        norms,
        tail_start: horizon / 2,
        overflow_at,
        start: x.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    LiYorkeEvidence,
    NoEvidence,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChaosVerdict {
    pub kind: VerdictKind,
    pub witness: Option<StateVector>,
    pub liminf_est: f64,
    pub limsup_est: f64,
}

/// `liminf_est` is the minimum over the tail window, `limsup_est` the
/// maximum over the whole record.
pub fn li_yorke_evidence(record: &OrbitRecord) -> ChaosVerdict {
    let liminf_est = record.tail().iter().copied().fold(f64::INFINITY, f64::min);
    let limsup_est = record.max_norm().1;
    let x = record.initial_norm();
    let kind = if record.horizon < MIN_EVIDENCE_HORIZON {
        VerdictKind::Inconclusive
    } else if liminf_est < DELTA_LOW * x && limsup_est > DELTA_HIGH * x {
        VerdictKind::LiYorkeEvidence
    } else {
        VerdictKind::NoEvidence
    };
    ChaosVerdict {
        kind,
        witness: (kind == VerdictKind::LiYorkeEvidence).then(|| record.start.clone()),
        liminf_est,
        limsup_est,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnboundedPair {
    pub n: usize,
    pub candidate: usize,
    pub norm: f64,
    /// Ladder rung this pair cleared.
    pub rung: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionEvidence {
    /// Candidates whose orbit dips below `DELTA_LOW·‖a‖`.
    pub vanishing_set: Vec<usize>,
    pub unbounded_pairs: Vec<UnboundedPair>,
    /// Candidates that reach `10³·‖a‖` and afterwards fall below
    /// `DELTA_LOW·‖a‖`.
    pub rise_then_decay: Vec<usize>,
    pub bound: f64,
    pub witnessed: bool,
}

impl CriterionEvidence {
    pub fn ladder_top(&self) -> f64 {
        self.unbounded_pairs.last().map_or(0.0, |p| p.rung)
    }
}

/// Rungs `10, 100, …` that the escalation must clear.
pub const LADDER_BASE: f64 = 10.0;
pub const WITNESS_RUNG: f64 = 1e3;

/// Scans candidate orbits for both clauses of the chaos criterion: a
/// vanishing subsequence, and bounded starts whose images escalate through
/// successive powers of ten.
pub fn criterion_search(
    t: &DenseOperator,
    candidates: &[StateVector],
    bound: f64,
    horizon: usize,
) -> Result<CriterionEvidence> {
    for (index, c) in candidates.iter().enumerate() {
        let n = c.norm();
        if n == 0.0 || n > bound * (1.0 + 1e-12) {
            return Err(DiagnosticsError::InvalidCandidate { index });
        }
    }
    let records: Vec<OrbitRecord> = candidates
        .par_iter()
        .map(|c| orbit_norms(t, c, horizon))
        .collect::<Result<_>>()?;

    let mut vanishing_set = Vec::new();
    let mut rise_then_decay = Vec::new();
    for (i, r) in records.iter().enumerate() {
        let x = r.initial_norm();
        if r.norms.iter().any(|&v| v < DELTA_LOW * x) {
            vanishing_set.push(i);
        }
        if let Some(peak) = r.norms.iter().position(|&v| v >= WITNESS_RUNG * x) {
            if r.norms[peak..].iter().any(|&v| v < DELTA_LOW * x) {
                rise_then_decay.push(i);
            }
        }
    }

    let mut unbounded_pairs = Vec::new();
    let mut rung = LADDER_BASE * bound;
    for (i, r) in records.iter().enumerate() {
        for (n, &v) in r.norms.iter().enumerate() {
            while v > rung {
                unbounded_pairs.push(UnboundedPair {
                    n,
                    candidate: i,
                    norm: v,
                    rung,
                });
                rung *= LADDER_BASE;
            }
        }
    }
    let ladder_top = unbounded_pairs.last().map_or(0.0, |p: &UnboundedPair| p.rung);
    let witnessed = !vanishing_set.is_empty() && ladder_top >= WITNESS_RUNG * bound && !rise_then_decay.is_empty();
    Ok(CriterionEvidence {
        vanishing_set,
        unbounded_pairs,
        rise_then_decay,
        bound,
        witnessed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InverseFloor {
    pub min_norm: f64,
    pub argmin: usize,
    pub final_norm: f64,
    pub overflow_at: Option<usize>,
}

/// Floor of `‖T^{−n}x‖` over `n ∈ [0, H]` for each sample.
pub fn inverse_orbit_floor(t: &DenseOperator, samples: &[StateVector], horizon: usize) -> Result<Vec<InverseFloor>> {
    let inv = invert(t)?;
    samples
        .par_iter()
        .map(|x| {
            let r = orbit_norms(&inv, x, horizon)?;
            let (argmin, min_norm) = r.min_norm();
            Ok(InverseFloor {
                min_norm,
                argmin,
                final_norm: *r.norms.last().expect("nonempty"),
                overflow_at: r.overflow_at,
            })
        })
        .collect()
}

/// Largest `| |((λI + S_ω*)ⁿ x)₀| − |x₀| |` for `n ≤ H`.
pub fn first_coordinate_invariance(
    lambda: Scalar,
    spec: &WeightedShiftSpec,
    x: &StateVector,
    horizon: usize,
) -> Result<f64> {
    if (lambda.norm() - 1.0).abs() > 1e-12 {
        return Err(DiagnosticsError::NotUnimodular(lambda));
    }
    let t = scalar_perturb(lambda, &make_weighted_backward_shift(spec)?.adjoint());
    if t.dim() != x.dim() {
        return Err(NumericsError::DimensionMismatch {
            expected: t.dim(),
            got: x.dim(),
        }
        .into());
    }
    let x0 = x[0].norm();
    let mut state = x.as_slice().to_vec();
    let mut worst = 0.0_f64;
    for _ in 0..horizon {
        state = t.apply_slice(&state);
        worst = worst.max((state[0].norm() - x0).abs());
    }
    Ok(worst)
}
