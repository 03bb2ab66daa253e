use serde::{Deserialize, Serialize};

use super::{orbit_norms, DiagnosticsError, Result, ETA, MIN_DC_HORIZON};
use crate::numerics::{DenseOperator, StateVector};

/// Tail envelopes of `F^n(τ) = #{i ≤ n : ‖T^i x‖ < τ} / (n + 1)` over
/// `n ∈ [H/2, H]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionalProfile {
    pub tau_grid: Vec<f64>,
    pub f_lower: Vec<f64>,
    pub f_upper: Vec<f64>,
    pub horizon: usize,
    pub tail_start: usize,
}

/// `tau_grid` is absolute. Steps past an overflow count as `+∞`.
pub fn distributional_profile(
    t: &DenseOperator,
    x: &StateVector,
    horizon: usize,
    tau_grid: &[f64],
) -> Result<DistributionalProfile> {
    if tau_grid.is_empty()
        || tau_grid.iter().any(|&v| !(v > 0.0 && v.is_finite()))
        || tau_grid.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(DiagnosticsError::InvalidTauGrid);
    }
    let record = orbit_norms(t, x, horizon)?;
    let tail_start = horizon / 2;
    let mut f_lower = Vec::with_capacity(tau_grid.len());
    let mut f_upper = Vec::with_capacity(tau_grid.len());
    for &tau in tau_grid {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut count = 0usize;
        for n in 0..=horizon {
            if record.norms.get(n).is_some_and(|&v| v < tau) {
                count += 1;
            }
            if n >= tail_start {
                let f = count as f64 / (n + 1) as f64;
                lo = lo.min(f);
                hi = hi.max(f);
            }
        }
        f_lower.push(lo);
        f_upper.push(hi);
    }
    Ok(DistributionalProfile {
        tau_grid: tau_grid.to_vec(),
        f_lower,
        f_upper,
        horizon,
        tail_start,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DcClass {
    #[serde(rename = "DC-I")]
    DcI,
    #[serde(rename = "DC-II")]
    DcII,
    #[serde(rename = "DC-III")]
    DcIII,
    None,
}

/// Quantifier reading used by [`classify_dc`].
pub const DC_READING: &str =
    "DC-I: exists tau F_lower<=eta and all eps F_upper>=1-eta; DC-II: all eps F_upper>=1-eta and a gap; DC-III: a gap > eta";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DcVerdict {
    pub class: DcClass,
    pub reading: String,
    /// False when the horizon was below the minimum; the class is then `None`.
    pub horizon_sufficient: bool,
    pub max_gap: f64,
}

pub fn classify_dc(profile: &DistributionalProfile) -> DcVerdict {
    let max_gap = profile
        .f_upper
        .iter()
        .zip(&profile.f_lower)
        .map(|(u, l)| u - l)
        .fold(0.0, f64::max);
    let horizon_sufficient = profile.horizon >= MIN_DC_HORIZON;
    let upper_full = profile.f_upper.iter().all(|&u| u >= 1.0 - ETA);
    let lower_zero = profile.f_lower.iter().any(|&l| l <= ETA);
    let gap = max_gap > ETA;
    let class = if !horizon_sufficient {
        DcClass::None
    } else if lower_zero && upper_full {
        DcClass::DcI
    } else if upper_full && gap {
        DcClass::DcII
    } else if gap {
        DcClass::DcIII
    } else {
        DcClass::None
    };
    DcVerdict {
        class,
        reading: DC_READING.to_string(),
        horizon_sufficient,
        max_gap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Scalar;
    use crate::operators::{make_block_perturbation, BlockPerturbationSpec, BlockSizeRule};
    use crate::rng::ChaosRng;
    use proptest::prelude::*;

    fn scaled_identity(n: usize, s: f64) -> DenseOperator {
        DenseOperator::identity(n).scale(Scalar::new(s, 0.0))
    }

    #[test]
    fn half_identity_counts() {
        let x = StateVector::basis(2, 0);
        let p = distributional_profile(&scaled_identity(2, 0.5), &x, 64, &[0.1]).unwrap();
        // F^n = (n − 3)/(n + 1) on the tail n ∈ [32, 64].
        assert!((p.f_lower[0] - 29.0 / 33.0).abs() < 1e-15);
        assert!((p.f_upper[0] - 61.0 / 65.0).abs() < 1e-15);
        // The tail gap at H = 64 still exceeds eta; it closes by H = 256.
        assert_eq!(classify_dc(&p).class, DcClass::DcIII);
        let p = distributional_profile(&scaled_identity(2, 0.5), &x, 256, &[0.1]).unwrap();
        assert!(p.f_lower[0] >= 1.0 - ETA);
        assert_eq!(classify_dc(&p).class, DcClass::None);
    }

    #[test]
    fn identity_and_doubling() {
        let x = StateVector::basis(2, 0);
        let grid = [0.1, 0.5, 0.99];
        let p = distributional_profile(&DenseOperator::identity(2), &x, 128, &grid).unwrap();
        assert!(p.f_lower.iter().chain(&p.f_upper).all(|&v| v == 0.0));
        assert_eq!(classify_dc(&p).class, DcClass::None);
        let p = distributional_profile(&scaled_identity(2, 2.0), &x, 128, &[1.0]).unwrap();
        assert!(p.f_upper[0] == 0.0);
    }

    #[test]
    fn rejects_bad_grid() {
        let x = StateVector::basis(2, 0);
        let t = DenseOperator::identity(2);
        assert!(distributional_profile(&t, &x, 64, &[0.5, 0.5]).is_err());
        assert!(distributional_profile(&t, &x, 64, &[-1.0]).is_err());
        assert!(distributional_profile(&t, &x, 64, &[]).is_err());
    }

    #[test]
    fn classification_rules() {
        let mk = |lo: Vec<f64>, hi: Vec<f64>| DistributionalProfile {
            tau_grid: (1..=lo.len()).map(|k| k as f64).collect(),
            f_lower: lo,
            f_upper: hi,
            horizon: 128,
            tail_start: 64,
        };
        assert_eq!(classify_dc(&mk(vec![0.0, 0.5], vec![0.96, 1.0])).class, DcClass::DcI);
        assert_eq!(classify_dc(&mk(vec![0.3, 0.5], vec![0.96, 1.0])).class, DcClass::DcII);
        assert_eq!(classify_dc(&mk(vec![0.3, 0.5], vec![0.5, 0.6])).class, DcClass::DcIII);
        assert_eq!(classify_dc(&mk(vec![0.3, 0.5], vec![0.3, 0.5])).class, DcClass::None);
        let mut short = mk(vec![0.0], vec![1.0]);
        short.horizon = 32;
        assert_eq!(classify_dc(&short).class, DcClass::None);
    }

    #[test]
    fn doubled_blocks_show_a_gap() {
        let spec = BlockPerturbationSpec::standard(Scalar::new(1.0, 0.0), 12).with_sizes(BlockSizeRule::DoubledIndex);
        let t = make_block_perturbation(&spec).unwrap();
        let mut x = StateVector::zeros(spec.total_dim());
        for j in 1..=12 {
            x = x.add(&spec.uniform_block_vector(j).scale(Scalar::new(1.0 / (j * j) as f64, 0.0))).unwrap();
        }
        let nx = x.norm();
        let grid: Vec<f64> = (0..25).map(|k| nx * 10f64.powf(-6.0 + 0.5 * k as f64)).collect();
        let p = distributional_profile(&t, &x, 512, &grid).unwrap();
        let v = classify_dc(&p);
        assert!(matches!(v.class, DcClass::DcI | DcClass::DcII | DcClass::DcIII), "{v:?}");
    }

    proptest! {
        #[test]
        fn envelopes_bounded_and_monotone(seed in 0u64..300, s in 0.3f64..1.5) {
            let mut rng = ChaosRng::seed(seed);
            let t = rng.complex_matrix(5).scale(Scalar::new(s / 3.0, 0.0));
            let x = rng.complex_vector(5);
            let grid: Vec<f64> = (0..20).map(|k| 10f64.powf(-4.0 + 0.4 * k as f64)).collect();
            let p = distributional_profile(&t, &x, 96, &grid).unwrap();
            for k in 0..grid.len() {
                prop_assert!(0.0 <= p.f_lower[k] && p.f_lower[k] <= p.f_upper[k] && p.f_upper[k] <= 1.0);
                if k > 0 {
                    prop_assert!(p.f_lower[k - 1] <= p.f_lower[k]);
                    prop_assert!(p.f_upper[k - 1] <= p.f_upper[k]);
                }
            }
        }

        #[test]
        fn equal_envelopes_are_unclassified(vals in proptest::collection::vec(0.0f64..1.0, 1..10)) {
            let mut sorted = vals.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let p = DistributionalProfile {
                tau_grid: (1..=sorted.len()).map(|k| k as f64).collect(),
                f_lower: sorted.clone(),
                f_upper: sorted,
                horizon: 128,
                tail_start: 64,
            };
            prop_assert_eq!(classify_dc(&p).class, DcClass::None);
        }
    }
}
