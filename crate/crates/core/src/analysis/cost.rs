//! Operation-count model of a uniform FMM evaluation.

use super::constants_for;
use crate::tiling::{Structure, MAX_LEVEL};
use crate::{Error, Result};

/// Optimal number of points per leaf: `p * sqrt(c_N N / (c_D M))`.
pub fn s_opt(structure: Structure, n: usize, m: usize, p: usize) -> f64 {
    let (c_n, c_d) = constants_for(structure).density_coefficients(structure);
    p as f64 * (c_n as f64 * n as f64 / (c_d as f64 * m as f64)).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostBreakdown {
    /// P2M and L2P work, `(M + N) p`.
    pub expansion_cost: f64,
    /// M2M, M2L and L2L work.
    pub translation_cost: f64,
    /// Direct near-field work plus local evaluation, `M (P2 s + p)`.
    pub near_field_cost: f64,
    pub total: f64,
    pub s_opt: f64,
    pub l_opt: u32,
}

/// Translations saved at the two coarsest levels, where cells have fewer
/// than P4 interaction partners.
fn coarse_level_correction(structure: Structure) -> f64 {
    let c = constants_for(structure);
    let b = structure.branching() as f64;
    let p4 = c.p4 as f64;
    (b.powi(4) - p4 * b * b) / (b - 1.0)
}

/// Cost of an evaluation with `levels` levels below the root, before the
/// leaf density is optimised.
pub fn total_cost(structure: Structure, n: usize, m: usize, p: usize, levels: u32) -> Result<CostBreakdown> {
    if levels < 1 {
        return Err(Error::InvalidArgument("cost model needs at least one level".into()));
    }
    let c = constants_for(structure);
    let b = structure.branching() as f64;
    let (n_f, m_f, p_f) = (n as f64, m as f64, p as f64);
    let k = b.powi(levels as i32);
    let s = n_f / k;
    let expansion_cost = (m_f + n_f) * p_f;
    let translation_cost =
        (k * b / (b - 1.0) * (c.p4 as f64 + 2.0) - coarse_level_correction(structure)) * p_f * p_f;
    let near_field_cost = m_f * (c.p2 as f64 * s + p_f);
    Ok(CostBreakdown {
        expansion_cost,
        translation_cost,
        near_field_cost,
        total: expansion_cost + translation_cost + near_field_cost,
        s_opt: s_opt(structure, n, m, p),
        l_opt: choose_lmax(structure, n, m, p),
    })
}

/// Leading coefficient `C` of the optimised cost `(M + N + C sqrt(MN)) p`.
pub fn opt_cost_coefficient(structure: Structure) -> f64 {
    let c = constants_for(structure);
    let b = structure.branching() as f64;
    let radicand = (c.p4 as f64 + 2.0) * c.p2 as f64;
    ((b / (b - 1.0)).sqrt() + ((b - 1.0) / b).sqrt()) * radicand.sqrt()
}

pub fn opt_cost(structure: Structure, n: usize, m: usize, p: usize) -> f64 {
    let (n_f, m_f) = (n as f64, m as f64);
    (m_f + n_f + opt_cost_coefficient(structure) * (m_f * n_f).sqrt()) * p as f64
}

/// Smallest depth whose leaves hold at most `S_opt` sources on average,
/// clamped to `1..=16`.
pub fn choose_lmax(structure: Structure, n: usize, m: usize, p: usize) -> u32 {
    let target = s_opt(structure, n, m, p);
    let b = structure.branching() as f64;
    (1..=MAX_LEVEL)
        .find(|&l| n as f64 / b.powi(l as i32) <= target)
        .unwrap_or(MAX_LEVEL)
}
