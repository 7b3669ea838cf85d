//! Uniform point picking inside cell polygons and the synthetic datasets
//! used for benchmarks.
//!
//! A polygon is cut into one isosceles triangle per edge, with apex at the
//! centroid. Each isosceles triangle is halved along its median, and the
//! two halves together are the image of the unit square under a fold: a
//! uniform `(s, t)` below the diagonal lands in one half and a reflected
//! `(1 - s, 1 - t)` lands in the other. A third uniform variable picks the
//! edge triangle.

pub mod pointfile;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fmm::{Source, Target};
use crate::geometry::{self, Point};
use crate::tiling::{CellPolygon, CellRef, TilingConfig};
use crate::{Error, Result};

/// Draws one point uniformly from a convex polygon.
pub fn sample_polygon_point<R: Rng + ?Sized>(polygon: &CellPolygon, rng: &mut R) -> Result<Point> {
    let v = &polygon.vertices;
    let area = geometry::signed_area(v).abs();
    if v.len() < 3 || !(area > 0.0) || !area.is_finite() {
        return Err(Error::DegeneratePolygon);
    }
    let c = polygon.centroid();
    let n = v.len();
    let weights: Vec<f64> = (0..n).map(|i| (v[i] - c).cross(v[(i + 1) % n] - c).abs()).collect();
    let total: f64 = weights.iter().sum();

    let s: f64 = rng.gen();
    let t: f64 = rng.gen();
    let z: f64 = rng.gen::<f64>() * total;

    let mut i = 0;
    let mut acc = weights[0];
    while z >= acc && i + 1 < n {
        i += 1;
        acc += weights[i];
    }
    let (a, b) = (v[i], v[(i + 1) % n]);
    let m = (a + b) * 0.5;
    Ok(if s + t <= 1.0 {
        m + (b - m) * s + (c - m) * t
    } else {
        m + (a - m) * (1.0 - s) + (c - m) * (1.0 - t)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OccupiedCells {
    All,
    /// The given number of leaves, lowest indices first.
    Count(u64),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StrengthMode {
    #[default]
    Unit,
    /// Independent uniform strengths in `[-1, 1]`.
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DatasetSpec {
    pub config: TilingConfig,
    pub occupied_cells: OccupiedCells,
    pub points_per_cell: usize,
    pub seed: u64,
    pub strengths: StrengthMode,
}

impl DatasetSpec {
    pub fn new(config: TilingConfig, occupied_cells: OccupiedCells, points_per_cell: usize, seed: u64) -> Self {
        DatasetSpec { config, occupied_cells, points_per_cell, seed, strengths: StrengthMode::Unit }
    }

    fn cell_count(&self) -> Result<u64> {
        let leaves = self.config.leaf_count();
        match self.occupied_cells {
            OccupiedCells::All => Ok(leaves),
            OccupiedCells::Count(k) if k <= leaves => Ok(k),
            OccupiedCells::Count(k) => Err(Error::InvalidArgument(format!(
                "{k} occupied cells requested but the tiling has {leaves} leaves"
            ))),
        }
    }
}

/// Independent stream for one cell, so the points of a cell do not depend
/// on how many other cells are occupied.
fn cell_rng(seed: u64, cell: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(cell * 2 + stream);
    rng
}

pub fn generate_sources(spec: &DatasetSpec) -> Result<Vec<Source>> {
    let cells = spec.cell_count()?;
    let tiling = spec.config.build();
    let mut out = Vec::with_capacity(cells as usize * spec.points_per_cell);
    for cell in 0..cells {
        let polygon = tiling.cell_polygon(CellRef::new(spec.config.l_max, cell))?;
        let mut rng = cell_rng(spec.seed, cell, 0);
        for _ in 0..spec.points_per_cell {
            let p = sample_polygon_point(&polygon, &mut rng)?;
            let u = match spec.strengths {
                StrengthMode::Unit => 1.0,
                StrengthMode::Uniform => rng.gen_range(-1.0..=1.0),
            };
            out.push(Source::new(p.x, p.y, u));
        }
    }
    Ok(out)
}

pub fn generate_targets(spec: &DatasetSpec) -> Result<Vec<Target>> {
    let cells = spec.cell_count()?;
    let tiling = spec.config.build();
    let mut out = Vec::with_capacity(cells as usize * spec.points_per_cell);
    for cell in 0..cells {
        let polygon = tiling.cell_polygon(CellRef::new(spec.config.l_max, cell))?;
        let mut rng = cell_rng(spec.seed, cell, 1);
        for _ in 0..spec.points_per_cell {
            let p = sample_polygon_point(&polygon, &mut rng)?;
            out.push(Target::new(p.x, p.y));
        }
    }
    Ok(out)
}

/// Sources and targets drawn independently from the same occupied cells.
pub fn generate_dataset(spec: &DatasetSpec) -> Result<(Vec<Source>, Vec<Target>)> {
    if spec.points_per_cell == 0 {
        return Err(Error::InvalidArgument("points_per_cell must be at least 1".into()));
    }
    Ok((generate_sources(spec)?, generate_targets(spec)?))
}

/// A dataset of exactly `n` sources and `m` targets: the leaves are filled
/// evenly with `ceil(max(n, m) / B^l_max)` points each, only as many cells
/// as needed are occupied, and the excess points are dropped.
pub fn uniform_dataset(
    config: TilingConfig,
    n: usize,
    m: usize,
    seed: u64,
    strengths: StrengthMode,
) -> Result<(Vec<Source>, Vec<Target>)> {
    let want = n.max(m);
    if want == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let per_cell = want.div_ceil(config.leaf_count().min(want as u64) as usize);
    let cells = want.div_ceil(per_cell) as u64;
    let spec = DatasetSpec {
        config,
        occupied_cells: OccupiedCells::Count(cells),
        points_per_cell: per_cell,
        seed,
        strengths,
    };
    let (mut sources, mut targets) = generate_dataset(&spec)?;
    sources.truncate(n);
    targets.truncate(m);
    Ok((sources, targets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::Structure;

    #[test]
    fn rejects_degenerate_polygons() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let line = CellPolygon {
            vertices: vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0)],
            up: None,
        };
        assert!(matches!(sample_polygon_point(&line, &mut rng), Err(Error::DegeneratePolygon)));
        let two = CellPolygon { vertices: vec![Point::ORIGIN, Point::new(1.0, 1.0)], up: None };
        assert!(sample_polygon_point(&two, &mut rng).is_err());
    }

    #[test]
    fn counts_and_truncation() {
        let config = TilingConfig::new(Structure::Septree, 2, 1.0).unwrap();
        let spec = DatasetSpec::new(config, OccupiedCells::All, 3, 9);
        let (s, t) = generate_dataset(&spec).unwrap();
        assert_eq!((s.len(), t.len()), (147, 147));
        assert!(s.iter().all(|x| x.strength == 1.0));

        let (s, t) = uniform_dataset(config, 100, 60, 9, StrengthMode::Uniform).unwrap();
        assert_eq!((s.len(), t.len()), (100, 60));
        assert!(s.iter().all(|x| (-1.0..=1.0).contains(&x.strength)));

        let too_many = DatasetSpec::new(config, OccupiedCells::Count(50), 1, 0);
        assert!(generate_dataset(&too_many).is_err());
    }

    #[test]
    fn cell_streams_are_independent_of_occupancy() {
        let config = TilingConfig::new(Structure::Quadtree, 2, 1.0).unwrap();
        let few = generate_sources(&DatasetSpec::new(config, OccupiedCells::Count(3), 4, 5)).unwrap();
        let all = generate_sources(&DatasetSpec::new(config, OccupiedCells::All, 4, 5)).unwrap();
        assert_eq!(few[..], all[..12]);
    }
}
