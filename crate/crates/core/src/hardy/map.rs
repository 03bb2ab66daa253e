use std::f64::consts::PI;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    circle_margin, is_cowen_douglas, modulus_range_on_disk, AnalyticPolynomial, CdStatus, HardyError, CIRCLE_TOL,
    DEFAULT_PROBE_ANGLES, TANGENCY_TOL,
};
use crate::diagnostics::{li_yorke_evidence, orbit_norms, VerdictKind, DELTA_LOW};
use crate::numerics::{eigenvalues, singular_values, DenseOperator, Scalar, StateVector};

/// Rectangular lattice `{(i + k·1i)·step}` with integer index ranges, so
/// that 0 and the axes are hit exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaGrid {
    pub step: f64,
    pub re: (i64, i64),
    pub im: (i64, i64),
}

impl LambdaGrid {
    /// Indices rounded from the bounds.
    pub fn new(re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64, step: f64) -> Self {
        let idx = |v: f64| (v / step).round() as i64;
        Self {
            step,
            re: (idx(re_lo), idx(re_hi)),
            im: (idx(im_lo), idx(im_hi)),
        }
    }

    /// `[lo, hi]²`.
    pub fn square(lo: f64, hi: f64, step: f64) -> Self {
        Self::new(lo, hi, lo, hi, step)
    }

    pub fn columns(&self) -> usize {
        (self.re.1 - self.re.0 + 1).max(0) as usize
    }

    pub fn rows(&self) -> usize {
        (self.im.1 - self.im.0 + 1).max(0) as usize
    }

    pub fn len(&self) -> usize {
        self.rows() * self.columns()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major: imaginary part outer, real part inner, both ascending.
    pub fn points(&self) -> Vec<Scalar> {
        let mut pts = Vec::with_capacity(self.len());
        for k in self.im.0..=self.im.1 {
            for i in self.re.0..=self.re.1 {
                pts.push(Scalar::new(i as f64 * self.step, k as f64 * self.step));
            }
        }
        pts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapVerdict {
    Decay,
    BoundedBelow,
    Chaotic,
    BoundaryUncertain,
}

impl MapVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            MapVerdict::Decay => "decay",
            MapVerdict::BoundedBelow => "bounded_below",
            MapVerdict::Chaotic => "chaotic",
            MapVerdict::BoundaryUncertain => "boundary_uncertain",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    MultiplicationShift,
    SpectralBounds,
    OrbitEvidence,
}

impl FromStr for FamilyKind {
    type Err = HardyError;

    fn from_str(s: &str) -> Result<Self, HardyError> {
        match s {
            "multiplication_shift" => Ok(Self::MultiplicationShift),
            "spectral_bounds" => Ok(Self::SpectralBounds),
            "orbit_evidence" => Ok(Self::OrbitEvidence),
            other => Err(HardyError::UnknownFamily(other.to_string())),
        }
    }
}

/// What `λ` perturbs.
#[derive(Debug, Clone)]
pub enum MapFamily {
    /// `λI + T` with `(λI + T)* = M_{λ̄ + ψ}`; classified through the range
    /// of `λ̄ + ψ`.
    MultiplicationShift { symbol: AnalyticPolynomial },
    /// Eigenvalue and smallest-singular-value bounds of `λI + T`.
    SpectralBounds { operator: DenseOperator },
    /// Orbit verdicts of `λI + T` on sample vectors.
    OrbitEvidence {
        operator: DenseOperator,
        samples: Vec<StateVector>,
    },
}

impl MapFamily {
    pub fn kind(&self) -> FamilyKind {
        match self {
            MapFamily::MultiplicationShift { .. } => FamilyKind::MultiplicationShift,
            MapFamily::SpectralBounds { .. } => FamilyKind::SpectralBounds,
            MapFamily::OrbitEvidence { .. } => FamilyKind::OrbitEvidence,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChaosMap {
    pub family: FamilyKind,
    pub grid: LambdaGrid,
    pub points: Vec<Scalar>,
    pub verdicts: Vec<MapVerdict>,
}

impl ChaosMap {
    pub fn count(&self, v: MapVerdict) -> usize {
        self.verdicts.iter().filter(|&&x| x == v).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Scalar, MapVerdict)> + '_ {
        self.points.iter().copied().zip(self.verdicts.iter().copied())
    }
}

/// Boundary samples per range evaluation inside a map sweep.
const MAP_BOUNDARY_SAMPLES: usize = 256;
const BALL_DIRECTIONS: usize = 32;

/// Verdict for every grid point. Points whose `step`-ball straddles a
/// classification boundary are `boundary_uncertain`.
pub fn chaos_parameter_map(family: &MapFamily, grid: &LambdaGrid, horizon: usize) -> Result<ChaosMap, HardyError> {
    let points = grid.points();
    let h = grid.step;
    let verdicts: Vec<MapVerdict> = match family {
        MapFamily::MultiplicationShift { symbol } => {
            let cd = is_cowen_douglas(symbol, DEFAULT_PROBE_ANGLES, CIRCLE_TOL)?;
            if cd.is_cd != CdStatus::Yes {
                return Err(HardyError::NotCowenDouglas);
            }
            points.par_iter().map(|&l| multiplier_verdict(symbol, l, h)).collect()
        }
        MapFamily::SpectralBounds { operator } => {
            let eig = eigenvalues(operator)?;
            points
                .par_iter()
                .map(|&l| spectral_verdict(operator, &eig, l, h))
                .collect::<Result<_, HardyError>>()?
        }
        MapFamily::OrbitEvidence { operator, samples } => points
            .par_iter()
            .map(|&l| orbit_verdict(operator, samples, l, horizon))
            .collect::<Result<_, HardyError>>()?,
    };
    Ok(ChaosMap {
        family: family.kind(),
        grid: *grid,
        points,
        verdicts,
    })
}

fn ball_samples(center: Scalar, radius: f64) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(2 * BALL_DIRECTIONS + 2);
    for k in 0..BALL_DIRECTIONS {
        let d = Scalar::from_polar(1.0, 2.0 * PI * k as f64 / BALL_DIRECTIONS as f64);
        out.push(center + d * radius);
        out.push(center + d * (0.5 * radius));
    }
    if center.norm() > 0.0 {
        let radial = center / center.norm();
        out.push(center + radial * radius);
        out.push(center - radial * radius);
    }
    out
}

fn multiplier_verdict(symbol: &AnalyticPolynomial, lambda: Scalar, h: f64) -> MapVerdict {
    let range = |mu: Scalar| modulus_range_on_disk(&symbol.add_constant(mu.conj()), MAP_BOUNDARY_SAMPLES);
    let (inf0, sup0) = range(lambda);
    let m0 = circle_margin(inf0, sup0);
    let mut pos = m0 > TANGENCY_TOL;
    let mut neg = m0 < -TANGENCY_TOL;
    // inf and sup of |c + ψ| are 1-Lipschitz in c, hence so is the margin:
    // a centre this far from the boundary cannot straddle it within h.
    let settled = m0.abs() > 1.01 * h + 1e-9;
    let ball = if settled { Vec::new() } else { ball_samples(lambda, h * (1.0 - 1e-9)) };
    for mu in ball {
        let (i, s) = range(mu);
        let m = circle_margin(i, s);
        pos |= m > TANGENCY_TOL;
        neg |= m < -TANGENCY_TOL;
        if pos && neg {
            return MapVerdict::BoundaryUncertain;
        }
    }
    if m0 > TANGENCY_TOL {
        MapVerdict::Chaotic
    } else if sup0 <= 1.0 + TANGENCY_TOL {
        MapVerdict::Decay
    } else {
        MapVerdict::BoundedBelow
    }
}

fn spectral_verdict(t: &DenseOperator, eig: &[Scalar], lambda: Scalar, h: f64) -> Result<MapVerdict, HardyError> {
    let moduli = eig.iter().map(|mu| (lambda + mu).norm());
    if moduli.clone().all(|m| m < 1.0 - h) {
        return Ok(MapVerdict::Decay);
    }
    if moduli.clone().all(|m| m > 1.0 + h) {
        return Ok(MapVerdict::BoundedBelow);
    }
    let sigma = singular_values(&t.shift_diagonal(lambda))?;
    if sigma.last().is_some_and(|&s| s >= 1.0) {
        return Ok(MapVerdict::BoundedBelow);
    }
    Ok(MapVerdict::BoundaryUncertain)
}

fn orbit_verdict(
    t: &DenseOperator,
    samples: &[StateVector],
    lambda: Scalar,
    horizon: usize,
) -> Result<MapVerdict, HardyError> {
    let shifted = t.shift_diagonal(lambda);
    let mut all_decay = true;
    let mut all_bounded = true;
    for x in samples {
        let record = orbit_norms(&shifted, x, horizon)?;
        let verdict = li_yorke_evidence(&record);
        match verdict.kind {
            VerdictKind::LiYorkeEvidence => return Ok(MapVerdict::Chaotic),
            VerdictKind::Inconclusive => return Ok(MapVerdict::BoundaryUncertain),
            VerdictKind::NoEvidence => {}
        }
        let nx = record.initial_norm();
        let tail_max = record.tail().iter().copied().fold(0.0, f64::max);
        all_decay &= record.overflow_at.is_none() && tail_max < DELTA_LOW * nx;
        all_bounded &= record.min_norm().1 >= nx * (1.0 - 1e-9);
    }
    Ok(if all_decay {
        MapVerdict::Decay
    } else if all_bounded {
        MapVerdict::BoundedBelow
    } else {
        MapVerdict::BoundaryUncertain
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{make_weighted_backward_shift, SequenceRule, WeightedShiftSpec};

    #[test]
    fn grid_hits_zero_exactly() {
        let g = LambdaGrid::square(-2.5, 2.5, 0.05);
        assert_eq!(g.columns(), 101);
        assert!(g.points().contains(&Scalar::new(0.0, 0.0)));
        assert_eq!(g.points()[0], Scalar::new(-2.5, -2.5));
    }

    #[test]
    fn unit_shift_map_is_punctured_disk() {
        let fam = MapFamily::MultiplicationShift {
            symbol: AnalyticPolynomial::z(),
        };
        let map = chaos_parameter_map(&fam, &LambdaGrid::square(-2.5, 2.5, 0.1), 0).unwrap();
        for (l, v) in map.iter() {
            let r = l.norm();
            if l == Scalar::new(0.0, 0.0) || r >= 2.1 - 1e-9 {
                assert!(matches!(v, MapVerdict::Decay | MapVerdict::BoundedBelow), "{l} {v:?}");
            } else if r >= 0.1 - 1e-12 && r <= 1.9 + 1e-12 {
                assert_eq!(v, MapVerdict::Chaotic, "{l}");
            } else {
                assert_eq!(v, MapVerdict::BoundaryUncertain, "{l}");
            }
        }
        assert_eq!(map.verdicts[map.points.iter().position(|p| p.norm() == 0.0).unwrap()], MapVerdict::Decay);
    }

    #[test]
    fn unit_shift_map_is_rotation_invariant() {
        let fam = MapFamily::MultiplicationShift {
            symbol: AnalyticPolynomial::z(),
        };
        let map = chaos_parameter_map(&fam, &LambdaGrid::square(-2.5, 2.5, 0.25), 0).unwrap();
        for (l, v) in map.iter() {
            let on_axis = multiplier_verdict(&AnalyticPolynomial::z(), Scalar::new(l.norm(), 0.0), 0.25);
            assert_eq!(v, on_axis, "{l}");
        }
    }

    #[test]
    fn lemma8_style_map() {
        let t = make_weighted_backward_shift(&WeightedShiftSpec::from_rule(32, SequenceRule::Reciprocal)).unwrap();
        let fam = MapFamily::SpectralBounds { operator: t };
        let map = chaos_parameter_map(&fam, &LambdaGrid::square(-1.5, 1.5, 0.1), 0).unwrap();
        for (l, v) in map.iter() {
            let r = l.norm();
            if r < 0.9 - 1e-9 {
                assert_eq!(v, MapVerdict::Decay);
            } else if r > 1.1 + 1e-9 {
                assert_eq!(v, MapVerdict::BoundedBelow);
            } else {
                assert_ne!(v, MapVerdict::Chaotic);
            }
        }
        assert_eq!(map.count(MapVerdict::Chaotic), 0);
    }

    #[test]
    fn normal_operator_never_chaotic() {
        let d: Vec<Scalar> = (0..8).map(|k| Scalar::new(-0.8 + 0.2 * k as f64, 0.0)).collect();
        let t = DenseOperator::diagonal(&d).unwrap();
        let samples = vec![StateVector::new(vec![Scalar::new(1.0, 0.0); 8]).unwrap()];
        for fam in [
            MapFamily::SpectralBounds { operator: t.clone() },
            MapFamily::OrbitEvidence { operator: t, samples },
        ] {
            let map = chaos_parameter_map(&fam, &LambdaGrid::square(-1.0, 1.0, 0.25), 200).unwrap();
            assert_eq!(map.count(MapVerdict::Chaotic), 0);
        }
    }

    #[test]
    fn unknown_family_name() {
        assert!(matches!("nope".parse::<FamilyKind>(), Err(HardyError::UnknownFamily(_))));
        assert_eq!("spectral_bounds".parse::<FamilyKind>().unwrap(), FamilyKind::SpectralBounds);
    }
}
