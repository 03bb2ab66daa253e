//! Finite-dimensional experiments on Li-Yorke and distributional chaos of
//! linear operators: dense complex numerics, operator families, spectral
//! identities, orbit diagnostics and Hardy-space multiplier maps.

pub mod diagnostics;
pub mod hardy;
pub mod numerics;
pub mod operators;
pub mod rng;
pub mod spectral;
