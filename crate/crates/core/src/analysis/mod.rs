//! Separation constants of the three tilings, the FMM cost model built on
//! them, and geometric measurement of the separation ratios.

mod cost;
mod separation;

pub use cost::{choose_lmax, opt_cost, opt_cost_coefficient, s_opt, total_cost, CostBreakdown};
pub use separation::{measure_separation, SeparationMeasurement};

use crate::tiling::Structure;

/// Interaction counts and separation ratios of one tiling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeparationConstants {
    /// Size of an interior cell's M2L list.
    pub p4: u32,
    /// Size of an interior cell's near field, the cell itself included.
    pub p2: u32,
    /// Cell circumradius over the radius of the largest disk about the
    /// center that avoids every non-neighbor cell.
    pub r_over_big_r: f64,
    /// Gap between M2L partners over the cell circumradius.
    pub rho_over_r: f64,
}

pub fn constants_for(structure: Structure) -> SeparationConstants {
    match structure {
        Structure::Quadtree => SeparationConstants {
            p4: 27,
            p2: 9,
            r_over_big_r: 2f64.sqrt() / 3.0,
            rho_over_r: 2.0 * (2f64.sqrt() - 1.0),
        },
        Structure::Septree => SeparationConstants {
            p4: 42,
            p2: 7,
            r_over_big_r: 0.5,
            rho_over_r: 1.0,
        },
        Structure::TriangleQuadtree => SeparationConstants {
            p4: 39,
            p2: 13,
            r_over_big_r: 0.5,
            rho_over_r: 7f64.sqrt() - 2.0,
        },
    }
}

impl SeparationConstants {
    /// The per-step error ratio of the slower of the two truncations:
    /// `max(r/R, 1/(1 + rho/r))`.
    pub fn convergence_ratio(&self) -> f64 {
        self.r_over_big_r.max(1.0 / (1.0 + self.rho_over_r))
    }

    /// `(c_N, c_D)` in `S_opt = p * sqrt(c_N N / (c_D M))`: translation work
    /// per cell `B (P4 + 2)` against near-field work `(B - 1) P2`.
    pub fn density_coefficients(&self, structure: Structure) -> (u64, u64) {
        let b = structure.branching();
        (b * (self.p4 as u64 + 2), (b - 1) * self.p2 as u64)
    }
}
