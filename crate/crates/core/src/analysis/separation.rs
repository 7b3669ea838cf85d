//! Separation ratios measured directly from cell geometry.
//!
//! For a cell with center `c`:
//!
//! - `r` is the largest distance from `c` to the cell's boundary,
//! - `R` is the smallest distance from `c` to any cell that is not a
//!   neighbor,
//! - `rho` is the smallest distance from `c` to the center of an M2L
//!   partner, minus `2r`.
//!
//! Only cells whose whole second ring and parent neighborhood lie inside
//! the domain are measured, and the worst case over them is reported.
//! Septree cells above the leaf level are unions of leaf hexagons with a
//! fractal outline; they are measured through those hexagons and flagged.

use super::constants_for;
use crate::geometry::{self, Point};
use crate::tiling::{CellRef, Structure, Tiling, TilingConfig};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeparationMeasurement {
    pub structure: Structure,
    pub level: u32,
    pub r: f64,
    pub big_r: f64,
    pub rho: f64,
    pub min_e4_distance: f64,
    pub r_over_big_r: f64,
    pub rho_over_r: f64,
    /// Set for septree cells above the leaf level.
    pub aggregate: bool,
    /// Number of interior cells measured.
    pub cells: usize,
}

fn full_neighbor_count(structure: Structure) -> usize {
    constants_for(structure).p2 as usize - 1
}

/// The convex pieces making up a cell: its polygon, or its leaf hexagons for
/// a septree aggregate.
fn cell_pieces(tiling: &dyn Tiling, n: CellRef) -> Result<Vec<Vec<Point>>> {
    let l_max = tiling.l_max();
    if tiling.structure() != Structure::Septree || n.level == l_max {
        return Ok(vec![tiling.cell_polygon(n)?.vertices]);
    }
    let span = tiling.branching().pow(l_max - n.level);
    (n.index * span..(n.index + 1) * span)
        .map(|leaf| Ok(tiling.cell_polygon(CellRef::new(l_max, leaf))?.vertices))
        .collect()
}

fn is_full(tiling: &dyn Tiling, n: CellRef, full: usize) -> Result<bool> {
    Ok(tiling.neighbors(n)?.len() == full)
}

/// Measures the separation ratios at `level` of the tiling described by
/// `config`. Levels below 2 have no interior cells.
pub fn measure_separation(config: &TilingConfig, level: u32) -> Result<SeparationMeasurement> {
    if level < 2 || level > config.l_max {
        return Err(Error::InvalidArgument(format!(
            "separation is measured on levels 2..={}, got {level}",
            config.l_max
        )));
    }
    let tiling = config.build();
    let tiling = tiling.as_ref();
    let structure = config.structure;
    let full = full_neighbor_count(structure);

    let mut r: f64 = 0.0;
    let mut big_r = f64::INFINITY;
    let mut min_e4 = f64::INFINITY;
    let mut cells = 0;
    for index in 0..tiling.cell_count(level) {
        let n = CellRef::new(level, index);
        let neighbors = tiling.neighbors(n)?;
        if neighbors.len() != full || !is_full(tiling, tiling.parent(n)?, full)? {
            continue;
        }
        let mut interior = true;
        for &m in &neighbors {
            if !is_full(tiling, m, full)? {
                interior = false;
                break;
            }
        }
        if !interior {
            continue;
        }
        cells += 1;
        let center = tiling.cell_center(n)?;

        for piece in cell_pieces(tiling, n)? {
            for v in piece {
                r = r.max(v.distance(center));
            }
        }

        let near = tiling.near_field(n)?;
        let mut ring: Vec<CellRef> = Vec::new();
        for &m in &neighbors {
            ring.extend(tiling.neighbors(m)?);
        }
        ring.sort_unstable();
        ring.dedup();
        for m in ring.into_iter().filter(|m| near.binary_search(m).is_err()) {
            for piece in cell_pieces(tiling, m)? {
                big_r = big_r.min(geometry::convex_distance(&piece, center));
            }
        }

        for m in tiling.neighbors_e4(n)? {
            min_e4 = min_e4.min(tiling.cell_center(m)?.distance(center));
        }
    }
    if cells == 0 {
        return Err(Error::InvalidArgument(format!(
            "no interior cell at level {level} of a depth-{} {structure}",
            config.l_max
        )));
    }
    let rho = min_e4 - 2.0 * r;
    Ok(SeparationMeasurement {
        structure,
        level,
        r,
        big_r,
        rho,
        min_e4_distance: min_e4,
        r_over_big_r: r / big_r,
        rho_over_r: rho / r,
        aggregate: structure == Structure::Septree && level < config.l_max,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadtree_leaf() {
        let config = TilingConfig::new(Structure::Quadtree, 3, 1.0).unwrap();
        let m = measure_separation(&config, 3).unwrap();
        assert!((m.r_over_big_r - 2f64.sqrt() / 3.0).abs() < 1e-9);
        assert!((m.rho_over_r - 2.0 * (2f64.sqrt() - 1.0)).abs() < 1e-9);
        assert!(!m.aggregate);
    }

    #[test]
    fn rejects_shallow_levels() {
        let config = TilingConfig::new(Structure::Quadtree, 3, 1.0).unwrap();
        assert!(measure_separation(&config, 1).is_err());
        assert!(measure_separation(&config, 4).is_err());
    }
}
