use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tilefmm::analysis::{choose_lmax, constants_for};
use tilefmm::fmm::{direct_sum, max_abs_error, run_fmm, InteractionPlan, Source, Target};
use tilefmm::sampling::{generate_dataset, uniform_dataset, DatasetSpec, OccupiedCells, StrengthMode};
use tilefmm::{CellRef, Point, Structure, TilingConfig};

fn dataset(s: Structure, n: usize, strengths: StrengthMode, seed: u64) -> (TilingConfig, Vec<Source>, Vec<Target>) {
    let config = TilingConfig::new(s, choose_lmax(s, n, n, 12), 1.0).unwrap();
    let (src, tgt) = uniform_dataset(config, n, n, seed, strengths).unwrap();
    (config, src, tgt)
}

/// Neumaier-compensated sum in reverse source order.
fn compensated(terms: impl DoubleEndedIterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for x in terms.rev() {
        let t = sum + x;
        c += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    sum + c
}

#[test]
fn direct_sum_matches_compensated_resummation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let src: Vec<Source> = (0..64)
        .map(|_| Source::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let tgt: Vec<Target> = (0..64).map(|_| Target::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let direct = direct_sum(&src, &tgt).unwrap();
    for (t, phi) in tgt.iter().zip(&direct.potentials) {
        let re = compensated(src.iter().map(|s| s.strength * (t.position - s.position).norm().ln()));
        let im = compensated(src.iter().map(|s| {
            let d = t.position - s.position;
            s.strength * d.im.atan2(d.re)
        }));
        assert!((phi.re - re).abs() < 1e-12);
        assert!((phi.im - im).abs() < 1e-12);
    }
}

#[test]
fn every_structure_stays_within_bound() {
    for s in Structure::ALL {
        for strengths in [StrengthMode::Unit, StrengthMode::Uniform] {
            let (config, src, tgt) = dataset(s, 1024, strengths, 11);
            let fmm = run_fmm(&src, &tgt, &config, 12).unwrap();
            let direct = direct_sum(&src, &tgt).unwrap();
            let err = max_abs_error(&fmm.potentials, &direct.potentials);
            let total: f64 = src.iter().map(|x| x.strength.abs()).sum();
            assert!(err <= fmm.analytic_bound, "{s}: {err} > {}", fmm.analytic_bound);
            assert!(err <= 1e-6 * total, "{s}: {err}");
            assert!(fmm.stats.m2l_count > 0, "{s}");
        }
    }
}

#[test]
fn result_is_linear_in_strengths() {
    for s in Structure::ALL {
        let (config, src, tgt) = dataset(s, 600, StrengthMode::Uniform, 5);
        let scaled: Vec<Source> = src.iter().map(|x| Source { strength: -2.5 * x.strength, ..*x }).collect();
        let a = run_fmm(&src, &tgt, &config, 10).unwrap();
        let b = run_fmm(&scaled, &tgt, &config, 10).unwrap();
        let scale = a.potentials.iter().map(|z| z.norm()).fold(0.0, f64::max) * 2.5;
        for (x, y) in a.potentials.iter().zip(&b.potentials) {
            assert!((x * -2.5 - y).norm() <= 1e-12 * scale, "{s}");
        }
    }
}

#[test]
fn repeated_runs_are_bit_identical() {
    let (config, src, tgt) = dataset(Structure::Septree, 700, StrengthMode::Uniform, 2);
    let a = run_fmm(&src, &tgt, &config, 12).unwrap();
    let b = run_fmm(&src, &tgt, &config, 12).unwrap();
    assert_eq!(a, b);
}

#[test]
fn degenerate_single_pair() {
    for s in Structure::ALL {
        let config = TilingConfig::new(s, choose_lmax(s, 1, 1, 12), 1.0).unwrap();
        let tiling = config.build();
        let first = tiling.cell_center(CellRef::new(config.l_max, 0)).unwrap();
        for last in [1, tiling.cell_count(config.l_max) - 1] {
            let far = tiling.cell_center(CellRef::new(config.l_max, last)).unwrap();
            let src = [Source::new(first.x, first.y, 1.0)];
            let tgt = [Target::new(far.x, far.y)];
            let fmm = run_fmm(&src, &tgt, &config, 12).unwrap();
            let direct = direct_sum(&src, &tgt).unwrap();
            assert!((fmm.potentials[0].re - direct.potentials[0].re).abs() < 1e-12, "{s}");
        }
    }
}

#[test]
fn every_pair_is_accounted_once() {
    for s in Structure::ALL {
        let (config, src, tgt) = dataset(s, 256, StrengthMode::Unit, 8);
        let config = TilingConfig::new(s, config.l_max + 1, 1.0).unwrap();
        let tiling = config.build();
        let l_max = config.l_max;
        let b = s.branching();
        let src_pts: Vec<Point> = src.iter().map(Source::point).collect();
        let tgt_pts: Vec<Point> = tgt.iter().map(Target::point).collect();
        let plan = InteractionPlan::build(tiling.as_ref(), &src_pts, &tgt_pts).unwrap();

        let mut direct_pairs = 0u64;
        for &t_leaf in &plan.targets.leaves {
            for &s_leaf in &plan.sources.leaves {
                let mut routes = 0;
                let t_slot = plan.targets.levels[l_max as usize].find(t_leaf).unwrap();
                let s_slot = plan.sources.levels[l_max as usize].find(s_leaf).unwrap();
                if plan.near[t_slot].contains(&s_slot) {
                    routes += 1;
                    direct_pairs += 1;
                }
                for level in 1..=l_max {
                    let div = b.pow(l_max - level);
                    let t_cell = plan.targets.levels[level as usize].find(t_leaf / div).unwrap();
                    let s_cell = plan.sources.levels[level as usize].find(s_leaf / div).unwrap();
                    if plan.m2l[level as usize][t_cell].contains(&s_cell) {
                        routes += 1;
                    }
                }
                assert_eq!(routes, 1, "{s}: leaves {s_leaf} -> {t_leaf}");
            }
        }
        assert_eq!(direct_pairs, plan.direct_pair_count());

        let fmm = run_fmm(&src, &tgt, &config, 6).unwrap();
        assert_eq!(fmm.stats.direct_pair_count, plan.direct_pair_count());
        assert_eq!(fmm.stats.m2l_count, plan.m2l_count());
    }
}

#[test]
fn full_tree_counts_match_table() {
    for s in Structure::ALL {
        let config = TilingConfig::new(s, 3, 1.0).unwrap();
        let spec = DatasetSpec::new(config, OccupiedCells::All, 1, 4);
        let (src, tgt) = generate_dataset(&spec).unwrap();
        let tiling = config.build();
        let src_pts: Vec<Point> = src.iter().map(Source::point).collect();
        let tgt_pts: Vec<Point> = tgt.iter().map(Target::point).collect();
        let plan = InteractionPlan::build(tiling.as_ref(), &src_pts, &tgt_pts).unwrap();
        let c = constants_for(s);
        let full = c.p2 as usize - 1;
        let leaves = &plan.targets.levels[3];
        assert_eq!(leaves.len() as u64, config.leaf_count());
        let mut interior = 0;
        for (slot, &cell) in leaves.cells.iter().enumerate() {
            let n = CellRef::new(3, cell);
            let is_interior = tiling.neighbors(n).unwrap().len() == full
                && tiling.neighbors(tiling.parent(n).unwrap()).unwrap().len() == full;
            if is_interior {
                interior += 1;
                assert_eq!(plan.m2l[3][slot].len(), c.p4 as usize, "{s} {n:?}");
                assert_eq!(plan.near[slot].len(), c.p2 as usize, "{s} {n:?}");
            }
        }
        assert!(interior > 0);
    }
}

fn fitted_ratio(ps: &[usize], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = ps.iter().map(|&p| p as f64).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    (num / den).exp()
}

#[test]
fn quadtree_error_decays_geometrically() {
    let (config, src, tgt) = dataset(Structure::Quadtree, 512, StrengthMode::Unit, 21);
    let direct = direct_sum(&src, &tgt).unwrap();
    let ps = [4, 8, 12];
    let errors: Vec<f64> = ps
        .iter()
        .map(|&p| max_abs_error(&run_fmm(&src, &tgt, &config, p).unwrap().potentials, &direct.potentials))
        .collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    let ratio = fitted_ratio(&ps, &errors);
    let expected = 1.0 / (1.0 + 2.0 * (2f64.sqrt() - 1.0));
    assert!(ratio / expected < 3.0 && expected / ratio < 3.0, "{ratio}");
}

#[test]
fn error_does_not_depend_on_leaf_scale() {
    let s = Structure::TriangleQuadtree;
    let unit = TilingConfig::new(s, 3, 1.0).unwrap();
    let small = TilingConfig::new(s, 3, 1e-3).unwrap();
    let (src, tgt) = uniform_dataset(unit, 400, 400, 6, StrengthMode::Unit).unwrap();
    let shrink = |z: Complex64| z * 1e-3;
    let src_small: Vec<Source> = src.iter().map(|x| Source { position: shrink(x.position), ..*x }).collect();
    let tgt_small: Vec<Target> = tgt.iter().map(|t| Target { position: shrink(t.position) }).collect();
    let e1 = max_abs_error(
        &run_fmm(&src, &tgt, &unit, 10).unwrap().potentials,
        &direct_sum(&src, &tgt).unwrap().potentials,
    );
    let e2 = max_abs_error(
        &run_fmm(&src_small, &tgt_small, &small, 10).unwrap().potentials,
        &direct_sum(&src_small, &tgt_small).unwrap().potentials,
    );
    // Only the constant `Q ln(scale)` term and rounding differ.
    assert!((e1 - e2).abs() < 1e-9, "{e1} vs {e2}");
}
