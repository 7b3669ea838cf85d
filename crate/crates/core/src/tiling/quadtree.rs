//! Square quadtree with Morton (Z-order) cell indices.
//!
//! The root is the square of side `2r * 2^l_max` centred on the origin. Child
//! digit `q` has its x half in bit 0 and its y half in bit 1.

use super::{CellPolygon, CellRef, Tiling, TilingConfig};
use crate::geometry::Point;
use crate::{Error, Result};

pub struct Quadtree {
    config: TilingConfig,
}

fn interleave(ix: u64, iy: u64, level: u32) -> u64 {
    (0..level).fold(0, |acc, bit| {
        acc | ((ix >> bit) & 1) << (2 * bit) | ((iy >> bit) & 1) << (2 * bit + 1)
    })
}

fn deinterleave(index: u64, level: u32) -> (u64, u64) {
    (0..level).fold((0, 0), |(ix, iy), bit| {
        (
            ix | ((index >> (2 * bit)) & 1) << bit,
            iy | ((index >> (2 * bit + 1)) & 1) << bit,
        )
    })
}

impl Quadtree {
    pub fn new(config: TilingConfig) -> Self {
        Quadtree { config }
    }

    /// Half the side of a level-`level` cell.
    pub fn half_side(&self, level: u32) -> f64 {
        self.config.r * 2f64.powi((self.config.l_max - level) as i32)
    }

    /// Half the side of the root square.
    fn extent(&self) -> f64 {
        self.half_side(0)
    }

    /// Grid coordinate along one axis. Points on a shared edge go to the lower
    /// cell so that ties resolve to the smaller index.
    fn axis_cell(&self, t: f64, level: u32) -> u64 {
        let cells = 1u64 << level;
        let side = 2.0 * self.half_side(level);
        let u = (t + self.extent()) / side;
        (u.ceil() as i64 - 1).clamp(0, cells as i64 - 1) as u64
    }
}

impl Tiling for Quadtree {
    fn config(&self) -> &TilingConfig {
        &self.config
    }

    fn cell_center(&self, n: CellRef) -> Result<Point> {
        self.validate(n)?;
        let (ix, iy) = deinterleave(n.index, n.level);
        let side = 2.0 * self.half_side(n.level);
        let lo = -self.extent();
        Ok(self.config.origin
            + Point::new(lo + (ix as f64 + 0.5) * side, lo + (iy as f64 + 0.5) * side))
    }

    fn cell_index(&self, p: Point, level: u32) -> Result<CellRef> {
        if level > self.config.l_max {
            return Err(Error::InvalidCell(CellRef::new(level, 0)));
        }
        let q = p - self.config.origin;
        let half = self.extent();
        if !q.is_finite() || q.x.abs() > half || q.y.abs() > half {
            return Err(Error::OutOfDomain { x: p.x, y: p.y });
        }
        let ix = self.axis_cell(q.x, level);
        let iy = self.axis_cell(q.y, level);
        Ok(CellRef::new(level, interleave(ix, iy, level)))
    }

    fn neighbors(&self, n: CellRef) -> Result<Vec<CellRef>> {
        self.validate(n)?;
        let (ix, iy) = deinterleave(n.index, n.level);
        let cells = 1i64 << n.level;
        let mut out = Vec::with_capacity(8);
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let (nx, ny) = (ix as i64 + dx, iy as i64 + dy);
                if (0..cells).contains(&nx) && (0..cells).contains(&ny) {
                    out.push(CellRef::new(n.level, interleave(nx as u64, ny as u64, n.level)));
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    fn cell_polygon(&self, n: CellRef) -> Result<CellPolygon> {
        let c = self.cell_center(n)?;
        let h = self.half_side(n.level);
        Ok(CellPolygon {
            vertices: vec![
                c + Point::new(-h, -h),
                c + Point::new(h, -h),
                c + Point::new(h, h),
                c + Point::new(-h, h),
            ],
            up: None,
        })
    }

    fn cell_radius(&self, level: u32) -> f64 {
        self.half_side(level) * std::f64::consts::SQRT_2
    }
}
