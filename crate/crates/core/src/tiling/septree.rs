//! Septree: leaf hexagons of circumradius `r` aggregated seven at a time.
//!
//! Leaf cells are flat-topped hexagons whose centers form a triangular
//! lattice of spacing `r * sqrt(3)`. Unit digit `d` points at angle
//! `d * 60° - 30°`. A digit `j` places above the leaf level is rotated by
//! `j * atan(sqrt(3)/2)` and scaled by `sqrt(7)^j`, so the center of a cell
//! is the sum of one polar translation per nonzero address digit.
//!
//! Point location changes basis to lattice coordinates `(b, c)` along the
//! digit-1 and digit-2 directions, picks the nearest of the four surrounding
//! lattice points and converts the winner to an address by GBT addition of
//! its two axis components. The domain is the set of leaves whose full
//! address fits in `l_max` digits.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

use super::{CellPolygon, CellRef, Tiling, TilingConfig};
use crate::gbt::{self, GbtDigits};
use crate::geometry::Point;
use crate::{Error, Result};

/// Rotation between successive zero-extension orders.
pub fn level_rotation() -> f64 {
    (3f64.sqrt() / 2.0).atan()
}

pub struct Septree {
    config: TilingConfig,
}

impl Septree {
    pub fn new(config: TilingConfig) -> Self {
        Septree { config }
    }

    pub fn address(&self, n: CellRef) -> Result<GbtDigits> {
        self.validate(n)?;
        GbtDigits::from_index(n.index, n.level as usize)
    }

    /// Translation contributed by digit `digit` sitting `order` places above
    /// the leaf level.
    pub fn digit_offset(&self, digit: u8, order: u32) -> Point {
        if digit == 0 {
            return Point::ORIGIN;
        }
        let theta = order as f64 * level_rotation() + digit as f64 * FRAC_PI_3 - FRAC_PI_6;
        let radius = self.config.r * 3f64.sqrt() * 7f64.sqrt().powi(order as i32);
        Point::from_polar(radius, theta)
    }

    /// Cartesian position of lattice point `(b, c)` relative to the origin.
    fn lattice_point(&self, b: f64, c: f64) -> Point {
        let r = self.config.r;
        Point::new(1.5 * r * b, r * 3f64.sqrt() * (2.0 * c + b) / 2.0)
    }

    fn lattice_address(b: i64, c: i64) -> Result<GbtDigits> {
        Ok(gbt::gbt_add(&gbt::axis_address(1, b)?, &gbt::axis_address(2, c)?))
    }

    /// Full `l_max`-digit address of the leaf containing `p`.
    pub fn leaf_address(&self, p: Point) -> Result<GbtDigits> {
        let q = p - self.config.origin;
        if !q.is_finite() {
            return Err(Error::OutOfDomain { x: p.x, y: p.y });
        }
        let r = self.config.r;
        let b = 2.0 * q.x / (3.0 * r);
        let c = (q.y * 3f64.sqrt() - q.x) / (3.0 * r);
        // Guards the i64 conversion; anything this far out is off-domain.
        if b.abs() > 1e15 || c.abs() > 1e15 {
            return Err(Error::OutOfDomain { x: p.x, y: p.y });
        }
        let mut candidates: Vec<(f64, f64)> = Vec::with_capacity(4);
        for bb in [b.floor(), b.ceil()] {
            for cc in [c.floor(), c.ceil()] {
                if !candidates.contains(&(bb, cc)) {
                    candidates.push((bb, cc));
                }
            }
        }
        let dist: Vec<f64> = candidates
            .iter()
            .map(|&(bb, cc)| self.lattice_point(bb, cc).distance_sqr(q))
            .collect();
        let best = dist.iter().copied().fold(f64::INFINITY, f64::min);
        let l_max = self.config.l_max as usize;
        let mut winner: Option<GbtDigits> = None;
        for (&(bb, cc), &d) in candidates.iter().zip(&dist) {
            if d != best {
                continue;
            }
            let addr = Self::lattice_address(bb as i64, cc as i64)?;
            // A tied candidate may fall outside the domain while another does not.
            let Ok(addr) = addr.with_len(l_max) else { continue };
            if winner.as_ref().is_none_or(|w| addr.to_index() < w.to_index()) {
                winner = Some(addr);
            }
        }
        winner.ok_or(Error::OutOfDomain { x: p.x, y: p.y })
    }
}

impl Tiling for Septree {
    fn config(&self) -> &TilingConfig {
        &self.config
    }

    fn cell_center(&self, n: CellRef) -> Result<Point> {
        let addr = self.address(n)?;
        let l_max = self.config.l_max;
        let offset = addr
            .digits()
            .iter()
            .enumerate()
            .fold(Point::ORIGIN, |acc, (i, &d)| acc + self.digit_offset(d, l_max - 1 - i as u32));
        Ok(self.config.origin + offset)
    }

    fn cell_index(&self, p: Point, level: u32) -> Result<CellRef> {
        if level > self.config.l_max {
            return Err(Error::InvalidCell(CellRef::new(level, 0)));
        }
        let leaf = self.leaf_address(p)?;
        Ok(CellRef::new(level, leaf.prefix(level as usize).to_index()))
    }

    fn neighbors(&self, n: CellRef) -> Result<Vec<CellRef>> {
        let addr = self.address(n)?;
        let level = n.level as usize;
        let mut out: Vec<CellRef> = (1..=6u8)
            .filter_map(|d| {
                let sum = gbt::gbt_add(&addr, &GbtDigits::new(vec![d]).ok()?);
                (sum.significant_len() <= level).then(|| CellRef::new(n.level, sum.to_index()))
            })
            .filter(|m| *m != n)
            .collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    fn cell_polygon(&self, n: CellRef) -> Result<CellPolygon> {
        if n.level != self.config.l_max {
            return Err(Error::Unsupported(format!(
                "septree cell {n:?} above the leaf level is an aggregate, not a polygon"
            )));
        }
        let c = self.cell_center(n)?;
        let r = self.config.r;
        Ok(CellPolygon {
            vertices: (0..6).map(|k| c + Point::from_polar(r, k as f64 * FRAC_PI_3)).collect(),
            up: None,
        })
    }

    fn cell_radius(&self, level: u32) -> f64 {
        self.config.r * 7f64.sqrt().powi((self.config.l_max - level) as i32)
    }
}
