use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tilefmm::analysis::{constants_for, measure_separation};
use tilefmm::geometry::{signed_area, Point};
use tilefmm::tiling::{Direction, Septree, TriangleQuadtree};
use tilefmm::{CellRef, Structure, Tiling, TilingConfig};

fn build(structure: Structure, l_max: u32) -> Box<dyn Tiling> {
    TilingConfig::new(structure, l_max, 1.0).unwrap().build()
}

fn cells(t: &dyn Tiling, level: u32) -> impl Iterator<Item = CellRef> {
    (0..t.cell_count(level)).map(move |i| CellRef::new(level, i))
}

#[test]
fn center_lookup_round_trip_to_level_four() {
    for s in Structure::ALL {
        let t = build(s, 4);
        for level in 1..=4 {
            for n in cells(t.as_ref(), level) {
                let c = t.cell_center(n).unwrap();
                assert_eq!(t.cell_index(c, level).unwrap(), n, "{s} {n:?}");
            }
        }
    }
}

#[test]
fn located_leaf_contains_the_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for s in Structure::ALL {
        let t = build(s, 3);
        let extent = t.cell_radius(0);
        let mut hits = 0;
        while hits < 2000 {
            let p = Point::new(rng.gen_range(-extent..extent), rng.gen_range(-extent..extent));
            let Ok(leaf) = t.cell_index(p, 3) else { continue };
            hits += 1;
            let poly = t.cell_polygon(leaf).unwrap();
            assert!(poly.contains(p, 1e-9), "{s}: {p:?} not in {leaf:?}");
            // Coarser lookups agree with the leaf's ancestors.
            let mut ancestor = leaf;
            for level in (0..3).rev() {
                ancestor = t.parent(ancestor).unwrap();
                assert_eq!(t.cell_index(p, level).unwrap(), ancestor);
            }
        }
    }
}

#[test]
fn children_partition_their_parent() {
    for s in [Structure::Quadtree, Structure::TriangleQuadtree] {
        let t = build(s, 4);
        for level in 0..4 {
            for n in cells(t.as_ref(), level) {
                let parent = t.cell_polygon(n).unwrap();
                let area = signed_area(&parent.vertices);
                let kids = t.children(n).unwrap();
                let mut sum = 0.0;
                for k in kids {
                    let poly = t.cell_polygon(k).unwrap();
                    let a = signed_area(&poly.vertices);
                    assert!(a > 0.0, "{s} {k:?} not counter-clockwise");
                    sum += a;
                    for v in &poly.vertices {
                        assert!(parent.contains(*v, 1e-9), "{s} {k:?} leaks out of {n:?}");
                    }
                }
                assert!((sum - area).abs() < 1e-9 * area, "{s} {n:?}");
            }
        }
    }
}

#[test]
fn septree_leaves_tile_without_overlap() {
    let t = build(Structure::Septree, 3);
    let centers: Vec<Point> = cells(t.as_ref(), 3).map(|n| t.cell_center(n).unwrap()).collect();
    let spacing = 3f64.sqrt();
    for (i, a) in centers.iter().enumerate() {
        for b in &centers[i + 1..] {
            assert!(a.distance(*b) > spacing - 1e-9);
        }
    }
}

#[test]
fn adjacency_is_symmetric() {
    for s in Structure::ALL {
        let t = build(s, 4);
        for level in 1..=4 {
            for n in cells(t.as_ref(), level) {
                let near = t.neighbors(n).unwrap();
                assert!(near.len() < t.branching() as usize * 4);
                for m in near {
                    assert!(t.neighbors(m).unwrap().contains(&n), "{s}: {n:?} -> {m:?}");
                }
            }
        }
    }
}

/// Cells whose polygons share at least one vertex with `n`'s.
fn vertex_sharing(t: &dyn Tiling, n: CellRef, scale: f64) -> Vec<CellRef> {
    let own = t.cell_polygon(n).unwrap().vertices;
    cells(t, n.level)
        .filter(|&m| m != n)
        .filter(|&m| {
            let other = t.cell_polygon(m).unwrap().vertices;
            own.iter().any(|a| other.iter().any(|b| a.distance(*b) < 1e-9 * scale))
        })
        .collect()
}

#[test]
fn neighbors_match_vertex_sharing_oracle() {
    for s in [Structure::Quadtree, Structure::TriangleQuadtree] {
        let t = build(s, 4);
        for level in 1..=4 {
            let scale = t.cell_radius(level);
            for n in cells(t.as_ref(), level) {
                assert_eq!(t.neighbors(n).unwrap(), vertex_sharing(t.as_ref(), n, scale), "{s} {n:?}");
            }
        }
    }
    let t = build(Structure::Septree, 3);
    for n in cells(t.as_ref(), 3) {
        assert_eq!(t.neighbors(n).unwrap(), vertex_sharing(t.as_ref(), n, 1.0), "septree {n:?}");
    }
}

#[test]
fn neighbor_center_distances() {
    let sep = build(Structure::Septree, 3);
    for n in cells(sep.as_ref(), 3) {
        let c = sep.cell_center(n).unwrap();
        for m in sep.neighbors(n).unwrap() {
            let d = sep.cell_center(m).unwrap().distance(c);
            assert!((d - 3f64.sqrt()).abs() < 1e-9);
        }
    }

    let config = TilingConfig::new(Structure::TriangleQuadtree, 3, 1.0).unwrap();
    let tri = TriangleQuadtree::new(config);
    for n in cells(&tri, 3) {
        let c = tri.cell_center(n).unwrap();
        for k in [Direction::Left, Direction::Right, Direction::Vertical] {
            if let Some(m) = tri.adjacent_neighbor(n, k).unwrap() {
                // Edge-adjacent triangles have opposite orientation and centroids
                // two inradii apart.
                assert!((tri.cell_center(m).unwrap().distance(c) - 1.0).abs() < 1e-9);
                assert_ne!(tri.cell_polygon(m).unwrap().up, tri.cell_polygon(n).unwrap().up);
                // Directions are relative to orientation, so crossing back from the
                // flipped neighbor swaps left and right.
                let back = match k {
                    Direction::Left => Direction::Right,
                    Direction::Right => Direction::Left,
                    Direction::Vertical => Direction::Vertical,
                };
                assert_eq!(tri.adjacent_neighbor(m, back).unwrap(), Some(n), "{n:?} {k:?}");
            }
        }
    }
}

#[test]
fn interaction_list_structure() {
    for s in Structure::ALL {
        let t = build(s, 4);
        let consts = constants_for(s);
        let full = consts.p2 as usize - 1;
        let mut interior_seen = 0;
        for level in 1..=3 {
            for n in cells(t.as_ref(), level) {
                let e4 = t.neighbors_e4(n).unwrap();
                let near = t.near_field(n).unwrap();
                let parent = t.parent(n).unwrap();
                let mut candidates = BTreeSet::new();
                for p in t.near_field(parent).unwrap() {
                    candidates.extend(t.children(p).unwrap());
                }
                for m in &e4 {
                    assert!(!near.contains(m));
                    assert!(candidates.contains(m));
                    assert!(t.neighbors_e4(*m).unwrap().contains(&n), "{s}: E4 not symmetric");
                }
                for c in candidates {
                    assert!(near.contains(&c) || e4.contains(&c));
                }
                if near.len() == full + 1 && t.neighbors(parent).unwrap().len() == full {
                    interior_seen += 1;
                    assert_eq!(e4.len(), consts.p4 as usize, "{s} {n:?}");
                }
            }
        }
        assert!(interior_seen > 0, "{s}");
    }
}

#[test]
fn septree_zero_extension_scale_and_rotation() {
    let config = TilingConfig::new(Structure::Septree, 5, 1.0).unwrap();
    let t = Septree::new(config);
    let theta = (3f64.sqrt() / 2.0).atan();
    for digit in 1..=6u8 {
        for order in 0..4 {
            let a = t.digit_offset(digit, order);
            let b = t.digit_offset(digit, order + 1);
            assert!((b.norm() / a.norm() - 7f64.sqrt()).abs() < 1e-9);
            let turn = (b.angle() - a.angle()).rem_euclid(std::f64::consts::TAU);
            assert!((turn - theta).abs() < 1e-9);
        }
    }
    // Center spacing between neighbors grows by sqrt(7) per level.
    let tiling = build(Structure::Septree, 4);
    for level in 1..4 {
        let n = CellRef::new(level, 0);
        let m = tiling.neighbors(n).unwrap()[0];
        let coarse = tiling.cell_center(m).unwrap().norm();
        let n_fine = CellRef::new(level + 1, 0);
        let m_fine = tiling.neighbors(n_fine).unwrap()[0];
        let fine = tiling.cell_center(m_fine).unwrap().norm();
        assert!((coarse / fine - 7f64.sqrt()).abs() < 1e-9);
    }
}

#[test]
fn leaf_separation_ratios() {
    for s in Structure::ALL {
        let config = TilingConfig::new(s, 3, 1.0).unwrap();
        let m = measure_separation(&config, 3).unwrap();
        let c = constants_for(s);
        assert!((m.r_over_big_r - c.r_over_big_r).abs() < 1e-9, "{s}: {m:?}");
        assert!((m.rho_over_r - c.rho_over_r).abs() < 1e-9, "{s}: {m:?}");
        assert!(!m.aggregate);
    }
    let tri = measure_separation(&TilingConfig::new(Structure::TriangleQuadtree, 3, 1.0).unwrap(), 3).unwrap();
    assert!((tri.min_e4_distance - 7f64.sqrt()).abs() < 1e-9);
    let sep = measure_separation(&TilingConfig::new(Structure::Septree, 3, 1.0).unwrap(), 3).unwrap();
    assert!((sep.min_e4_distance - 3.0).abs() < 1e-9);
}

#[test]
fn separation_is_level_invariant_for_polygonal_tilings() {
    for s in [Structure::Quadtree, Structure::TriangleQuadtree] {
        let config = TilingConfig::new(s, 5, 1.0).unwrap();
        let c = constants_for(s);
        for level in 3..=5 {
            let m = measure_separation(&config, level).unwrap();
            assert!((m.r_over_big_r - c.r_over_big_r).abs() < 1e-9, "{s} level {level}");
            assert!((m.rho_over_r - c.rho_over_r).abs() < 1e-9, "{s} level {level}");
        }
    }
}

#[test]
fn septree_aggregates_are_flagged_and_still_separated() {
    let config = TilingConfig::new(Structure::Septree, 4, 1.0).unwrap();
    let m = measure_separation(&config, 3).unwrap();
    assert!(m.aggregate);
    // The flower outline pokes out past the idealised hexagon, but partners in
    // the interaction list stay disjoint.
    assert!(m.r > 7f64.sqrt());
    assert!(m.rho > 0.0);
    assert!(m.r_over_big_r > 0.5 && m.r_over_big_r < 1.0, "{m:?}");
}
