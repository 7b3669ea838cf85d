//! Hierarchical tilings of the plane behind a common addressing interface.
//!
//! Every structure exposes the same six auxiliary functions the FMM needs:
//! children, parent, cell centers, point location, vertex neighbors and the
//! M2L interaction list ("E4"). Cells are identified by `(level, index)`
//! where the index of a level-`l` cell is the base-`B` value of its `l`-digit
//! address; leading zero digits are significant.

mod quadtree;
mod septree;
mod triquad;

use std::fmt;
use std::str::FromStr;

pub use quadtree::Quadtree;
pub use septree::Septree;
pub use triquad::{is_up, Direction, TriangleQuadtree};

use crate::geometry::Point;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Structure {
    Quadtree,
    Septree,
    TriangleQuadtree,
}

impl Structure {
    pub const ALL: [Structure; 3] = [
        Structure::Quadtree,
        Structure::Septree,
        Structure::TriangleQuadtree,
    ];

    /// Branching factor.
    pub fn branching(self) -> u64 {
        match self {
            Structure::Quadtree | Structure::TriangleQuadtree => 4,
            Structure::Septree => 7,
        }
    }

    /// Short name used on the command line and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            Structure::Quadtree => "quadtree",
            Structure::Septree => "septree",
            Structure::TriangleQuadtree => "triquad",
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Structure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadtree" => Ok(Structure::Quadtree),
            "septree" => Ok(Structure::Septree),
            "triquad" | "triangle-quadtree" => Ok(Structure::TriangleQuadtree),
            other => Err(Error::InvalidArgument(format!("unknown structure {other:?}"))),
        }
    }
}

/// One cell of a tiling: `index` is in `[0, B^level)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellRef {
    pub level: u32,
    pub index: u64,
}

impl CellRef {
    pub const ROOT: CellRef = CellRef { level: 0, index: 0 };

    pub const fn new(level: u32, index: u64) -> Self {
        CellRef { level, index }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TilingConfig {
    pub structure: Structure,
    /// Depth of the leaf level.
    pub l_max: u32,
    /// Leaf scale: half-side for the quadtree, hexagon circumradius for the
    /// septree, triangle circumradius for the triangle quadtree.
    pub r: f64,
    pub origin: Point,
}

/// Deepest level accepted by [`TilingConfig::new`]; keeps `B^l_max` in `u64`.
pub const MAX_LEVEL: u32 = 16;

impl TilingConfig {
    pub fn new(structure: Structure, l_max: u32, r: f64) -> Result<Self> {
        Self::with_origin(structure, l_max, r, Point::ORIGIN)
    }

    pub fn with_origin(structure: Structure, l_max: u32, r: f64, origin: Point) -> Result<Self> {
        if !(1..=MAX_LEVEL).contains(&l_max) {
            return Err(Error::InvalidArgument(format!(
                "l_max must be in 1..={MAX_LEVEL}, got {l_max}"
            )));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidArgument(format!("leaf scale must be positive, got {r}")));
        }
        if !origin.is_finite() {
            return Err(Error::InvalidArgument("origin must be finite".into()));
        }
        Ok(TilingConfig { structure, l_max, r, origin })
    }

    pub fn build(&self) -> Box<dyn Tiling> {
        match self.structure {
            Structure::Quadtree => Box::new(Quadtree::new(*self)),
            Structure::Septree => Box::new(Septree::new(*self)),
            Structure::TriangleQuadtree => Box::new(TriangleQuadtree::new(*self)),
        }
    }

    pub fn leaf_count(&self) -> u64 {
        self.structure.branching().pow(self.l_max)
    }
}

/// Vertices of one cell, counter-clockwise. `up` is the triangle orientation
/// (+1 upright, -1 inverted) and is `None` for squares and hexagons.
#[derive(Clone, Debug, PartialEq)]
pub struct CellPolygon {
    pub vertices: Vec<Point>,
    pub up: Option<i8>,
}

impl CellPolygon {
    pub fn centroid(&self) -> Point {
        let n = self.vertices.len() as f64;
        let sum = self.vertices.iter().fold(Point::ORIGIN, |acc, &v| acc + v);
        sum * (1.0 / n)
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        crate::geometry::convex_contains(&self.vertices, p, tol)
    }

    pub fn circumradius(&self) -> f64 {
        let c = self.centroid();
        self.vertices.iter().map(|v| v.distance(c)).fold(0.0, f64::max)
    }
}

/// The common interface of the three hierarchical tilings.
pub trait Tiling: Send + Sync {
    fn config(&self) -> &TilingConfig;

    fn cell_center(&self, n: CellRef) -> Result<Point>;

    /// The level-`level` cell containing `p`.
    fn cell_index(&self, p: Point, level: u32) -> Result<CellRef>;

    /// Same-level cells sharing at least a vertex with `n`, sorted by index.
    fn neighbors(&self, n: CellRef) -> Result<Vec<CellRef>>;

    fn cell_polygon(&self, n: CellRef) -> Result<CellPolygon>;

    /// Idealised circumradius of a level-`level` cell.
    fn cell_radius(&self, level: u32) -> f64;

    fn structure(&self) -> Structure {
        self.config().structure
    }

    fn branching(&self) -> u64 {
        self.structure().branching()
    }

    fn l_max(&self) -> u32 {
        self.config().l_max
    }

    fn cell_count(&self, level: u32) -> u64 {
        self.branching().pow(level)
    }

    fn validate(&self, n: CellRef) -> Result<()> {
        if n.level > self.l_max() || n.index >= self.cell_count(n.level) {
            return Err(Error::InvalidCell(n));
        }
        Ok(())
    }

    fn children(&self, n: CellRef) -> Result<Vec<CellRef>> {
        self.validate(n)?;
        if n.level >= self.l_max() {
            return Err(Error::LeafCell(n));
        }
        let b = self.branching();
        Ok((0..b).map(|i| CellRef::new(n.level + 1, n.index * b + i)).collect())
    }

    fn parent(&self, n: CellRef) -> Result<CellRef> {
        self.validate(n)?;
        if n.level == 0 {
            return Err(Error::RootCell(n));
        }
        Ok(CellRef::new(n.level - 1, n.index / self.branching()))
    }

    /// `n` together with its neighbors, sorted by index.
    fn near_field(&self, n: CellRef) -> Result<Vec<CellRef>> {
        let mut near = self.neighbors(n)?;
        near.push(n);
        near.sort_unstable();
        Ok(near)
    }

    /// The M2L interaction list: children of the parent's near field that are
    /// not in `n`'s own near field. At level 1 the parent is the root, so the
    /// list holds the level-1 cells that do not touch `n` (empty for the
    /// quadtree and triangle quadtree, three cells for the septree).
    fn neighbors_e4(&self, n: CellRef) -> Result<Vec<CellRef>> {
        self.validate(n)?;
        if n.level == 0 {
            return Ok(Vec::new());
        }
        let parent = self.parent(n)?;
        let near = self.near_field(n)?;
        let mut list = Vec::new();
        for p in self.near_field(parent)? {
            for c in self.children(p)? {
                if near.binary_search(&c).is_err() {
                    list.push(c);
                }
            }
        }
        list.sort_unstable();
        list.dedup();
        Ok(list)
    }
}
