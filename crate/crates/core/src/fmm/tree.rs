//! Occupied-cell bookkeeping and interaction lists for one FMM evaluation.
//!
//! Points are sorted by leaf index. Because a level-`l` index is the leaf
//! index divided by `B^(l_max - l)`, every occupied cell at every level then
//! owns a contiguous run of the sorted points, and the occupied cells of one
//! level are sorted as well.

use std::ops::Range;

use crate::geometry::Point;
use crate::tiling::{CellRef, Tiling};
use crate::Result;

/// Occupied cells of one level and the sorted points each one holds.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LevelCells {
    pub cells: Vec<u64>,
    pub ranges: Vec<Range<usize>>,
}

impl LevelCells {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn find(&self, index: u64) -> Option<usize> {
        self.cells.binary_search(&index).ok()
    }
}

/// A point set binned into the tiling at every level.
#[derive(Clone, Debug, PartialEq)]
pub struct PointTree {
    /// `order[k]` is the original index of the `k`-th sorted point.
    pub order: Vec<usize>,
    /// Leaf index of each sorted point.
    pub leaves: Vec<u64>,
    /// Indexed by level, `0..=l_max`.
    pub levels: Vec<LevelCells>,
}

impl PointTree {
    pub fn build(tiling: &dyn Tiling, points: &[Point]) -> Result<Self> {
        let l_max = tiling.l_max();
        let leaf_of = points
            .iter()
            .map(|&p| tiling.cell_index(p, l_max).map(|c| c.index))
            .collect::<Result<Vec<_>>>()?;
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by_key(|&i| (leaf_of[i], i));
        let leaves: Vec<u64> = order.iter().map(|&i| leaf_of[i]).collect();
        let b = tiling.branching();
        let levels = (0..=l_max)
            .map(|level| {
                let div = b.pow(l_max - level);
                let mut cells = LevelCells::default();
                for (k, &leaf) in leaves.iter().enumerate() {
                    let cell = leaf / div;
                    if cells.cells.last() == Some(&cell) {
                        cells.ranges.last_mut().unwrap().end = k + 1;
                    } else {
                        cells.cells.push(cell);
                        cells.ranges.push(k..k + 1);
                    }
                }
                cells
            })
            .collect();
        Ok(PointTree { order, leaves, levels })
    }

    pub fn l_max(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    /// Slots at level `level + 1` of the occupied children of slot `slot`.
    pub fn children(&self, level: u32, slot: usize, branching: u64) -> Range<usize> {
        let parent = self.levels[level as usize].cells[slot];
        let below = &self.levels[level as usize + 1].cells;
        let start = below.partition_point(|&c| c / branching < parent);
        let end = below.partition_point(|&c| c / branching <= parent);
        start..end
    }
}

/// Everything the passes need: both point trees, the M2L source slots of
/// every occupied target cell, and the near-field source leaves of every
/// occupied target leaf.
#[derive(Clone, Debug)]
pub struct InteractionPlan {
    pub sources: PointTree,
    pub targets: PointTree,
    /// `m2l[level][target_slot]` lists source slots at the same level,
    /// sorted by cell index. Level 0 is always empty.
    pub m2l: Vec<Vec<Vec<usize>>>,
    /// `near[target_leaf_slot]` lists source leaf slots, sorted.
    pub near: Vec<Vec<usize>>,
}

impl InteractionPlan {
    pub fn build(tiling: &dyn Tiling, sources: &[Point], targets: &[Point]) -> Result<Self> {
        let sources = PointTree::build(tiling, sources)?;
        let targets = PointTree::build(tiling, targets)?;
        let l_max = tiling.l_max();
        let mut m2l = vec![Vec::new(); l_max as usize + 1];
        for level in 1..=l_max {
            let src = &sources.levels[level as usize];
            m2l[level as usize] = targets.levels[level as usize]
                .cells
                .iter()
                .map(|&cell| {
                    let list = tiling.neighbors_e4(CellRef::new(level, cell))?;
                    Ok(list.iter().filter_map(|c| src.find(c.index)).collect())
                })
                .collect::<Result<Vec<Vec<usize>>>>()?;
        }
        let src_leaves = &sources.levels[l_max as usize];
        let near = targets.levels[l_max as usize]
            .cells
            .iter()
            .map(|&cell| {
                let list = tiling.near_field(CellRef::new(l_max, cell))?;
                Ok(list.iter().filter_map(|c| src_leaves.find(c.index)).collect())
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        Ok(InteractionPlan { sources, targets, m2l, near })
    }

    pub fn l_max(&self) -> u32 {
        self.sources.l_max()
    }

    pub fn m2l_count(&self) -> u64 {
        self.m2l.iter().flatten().map(|list| list.len() as u64).sum()
    }

    /// Number of source-target pairs evaluated directly.
    pub fn direct_pair_count(&self) -> u64 {
        let leaves = self.l_max() as usize;
        let tgt = &self.targets.levels[leaves];
        let src = &self.sources.levels[leaves];
        self.near
            .iter()
            .zip(&tgt.ranges)
            .map(|(list, t)| {
                let n_src: usize = list.iter().map(|&s| src.ranges[s].len()).sum();
                (n_src * t.len()) as u64
            })
            .sum()
    }
}
