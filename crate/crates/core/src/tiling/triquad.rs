//! Triangle quadtree: an equilateral root triangle split recursively into
//! center (0), vertical (1), left (2) and right (3) children.
//!
//! Corner children keep their parent's orientation and the center child is
//! inverted, so a cell is upright exactly when its address has an even number
//! of zero digits. Edge-adjacent neighbors are found with the
//! ancestor-sibling-reflect walk over [`ADJACENCY`].

use std::f64::consts::{FRAC_PI_2, PI};

use super::{CellPolygon, CellRef, Tiling, TilingConfig};
use crate::geometry::{self, Point};
use crate::{Error, Result};

/// Search direction for [`TriangleQuadtree::adjacent_neighbor`], relative to
/// the cell's own orientation: `Vertical` crosses the horizontal edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
    Vertical,
}

impl Direction {
    fn column(self) -> usize {
        match self {
            Direction::Left => 0,
            Direction::Right => 1,
            Direction::Vertical => 2,
        }
    }
}

/// Destination child type for each (source type, direction). `true` marks a
/// sibling under the same parent.
pub const ADJACENCY: [[(u8, bool); 3]; 4] = [
    [(2, true), (3, true), (1, true)],
    [(3, false), (2, false), (0, true)],
    [(1, false), (0, true), (2, false)],
    [(0, true), (1, false), (3, false)],
];

/// Orientation of a triangle-quadtree cell: `+1` upright, `-1` inverted.
///
/// `address` holds the cell's base-4 digits and `level` its level; for the
/// usual fixed-length addresses the two agree and the result depends only on
/// the parity of the zero digits.
pub fn is_up(address: &[u8], level: u32) -> i8 {
    let zeros = address.iter().filter(|&&d| d == 0).count() as i64;
    let k = (zeros + level as i64 - address.len() as i64 + 1).rem_euclid(2);
    (2 * k - 1) as i8
}

fn digits_of(n: CellRef) -> Vec<u8> {
    let mut digits = vec![0u8; n.level as usize];
    let mut rest = n.index;
    for slot in digits.iter_mut().rev() {
        *slot = (rest % 4) as u8;
        rest /= 4;
    }
    digits
}

fn index_of(digits: &[u8]) -> u64 {
    digits.iter().fold(0, |acc, &d| acc * 4 + d as u64)
}

/// Direction from a parent's center to the center of corner child `digit`.
fn corner_angle(digit: u8, up: i8) -> f64 {
    up as f64 * (FRAC_PI_2 + 2.0 * (digit as f64 - 1.0) * PI / 3.0)
}

pub struct TriangleQuadtree {
    config: TilingConfig,
}

impl TriangleQuadtree {
    pub fn new(config: TilingConfig) -> Self {
        TriangleQuadtree { config }
    }

    /// Circumradius of a level-`level` triangle.
    pub fn radius(&self, level: u32) -> f64 {
        self.config.r * 2f64.powi(self.config.l_max as i32 - level as i32)
    }

    pub fn root_polygon(&self) -> CellPolygon {
        self.polygon_at(self.config.origin, self.radius(0), 1)
    }

    fn polygon_at(&self, center: Point, radius: f64, up: i8) -> CellPolygon {
        let vertices = (0..3)
            .map(|k| center + Point::from_polar(radius, corner_angle(k + 1, up)))
            .collect::<Vec<_>>();
        // Inverted triangles come out clockwise; keep the stored order CCW.
        let vertices = if up < 0 { vertices.into_iter().rev().collect() } else { vertices };
        CellPolygon { vertices, up: Some(up) }
    }

    /// The edge-adjacent cell of `n` in direction `k`, or `None` when the
    /// shared edge lies on the domain boundary.
    pub fn adjacent_neighbor(&self, n: CellRef, k: Direction) -> Result<Option<CellRef>> {
        self.validate(n)?;
        let mut digits = digits_of(n);
        let col = k.column();
        let Some(pivot) = digits.iter().rposition(|&d| ADJACENCY[d as usize][col].1) else {
            return Ok(None);
        };
        for d in &mut digits[pivot..] {
            *d = ADJACENCY[*d as usize][col].0;
        }
        Ok(Some(CellRef::new(n.level, index_of(&digits))))
    }

    fn step(&self, n: Option<CellRef>, k: Direction) -> Result<Option<CellRef>> {
        match n {
            Some(cell) => self.adjacent_neighbor(cell, k),
            None => Ok(None),
        }
    }
}

impl Tiling for TriangleQuadtree {
    fn config(&self) -> &TilingConfig {
        &self.config
    }

    fn cell_center(&self, n: CellRef) -> Result<Point> {
        self.validate(n)?;
        let mut center = self.config.origin;
        let mut up = 1i8;
        for (i, &d) in digits_of(n).iter().enumerate() {
            if d == 0 {
                up = -up;
            } else {
                center = center + Point::from_polar(self.radius(i as u32 + 1), corner_angle(d, up));
            }
        }
        Ok(center)
    }

    fn cell_index(&self, p: Point, level: u32) -> Result<CellRef> {
        if level > self.config.l_max {
            return Err(Error::InvalidCell(CellRef::new(level, 0)));
        }
        let root = self.root_polygon();
        if !p.is_finite() || !geometry::convex_contains(&root.vertices, p, 1e-12 * self.radius(0)) {
            return Err(Error::OutOfDomain { x: p.x, y: p.y });
        }
        let mut center = self.config.origin;
        let mut up = 1i8;
        let mut index = 0u64;
        for i in 1..=level {
            let radius = self.radius(i);
            let mut best = (center.distance_sqr(p), 0u8, center);
            for d in 1..=3u8 {
                let c = center + Point::from_polar(radius, corner_angle(d, up));
                let dist = c.distance_sqr(p);
                // Strict comparison keeps the smallest digit on ties.
                if dist < best.0 {
                    best = (dist, d, c);
                }
            }
            let (_, digit, next) = best;
            if digit == 0 {
                up = -up;
            }
            center = next;
            index = index * 4 + digit as u64;
        }
        Ok(CellRef::new(level, index))
    }

    fn neighbors(&self, n: CellRef) -> Result<Vec<CellRef>> {
        use Direction::{Left as L, Right as R, Vertical as V};
        let l = self.adjacent_neighbor(n, L)?;
        let r = self.adjacent_neighbor(n, R)?;
        let v = self.adjacent_neighbor(n, V)?;
        let vl = self.step(v, L)?;
        let vr = self.step(v, R)?;
        let ll = self.step(l, L)?;
        let rr = self.step(r, R)?;
        let lv = self.step(l, V)?;
        let rv = self.step(r, V)?;
        let vll = self.step(vl, L)?;
        let vrr = self.step(vr, R)?;
        let lvr = self.step(lv, R)?;
        let mut out: Vec<CellRef> = [l, r, v, vl, vr, ll, rr, lv, rv, vll, vrr, lvr]
            .into_iter()
            .flatten()
            .filter(|&m| m != n)
            .collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    fn cell_polygon(&self, n: CellRef) -> Result<CellPolygon> {
        let center = self.cell_center(n)?;
        let up = is_up(&digits_of(n), n.level);
        Ok(self.polygon_at(center, self.radius(n.level), up))
    }

    fn cell_radius(&self, level: u32) -> f64 {
        self.radius(level)
    }
}
