use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use tilefmm::analysis::choose_lmax;
use tilefmm::fmm::{direct_sum, max_abs_error, run_fmm};
use tilefmm::sampling::pointfile::{read_sources, read_targets};
use tilefmm::sampling::uniform_dataset;
use tilefmm::{Structure, TilingConfig};

use crate::{Failure, RunArgs};

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

pub fn cmd_run(args: &RunArgs) -> Result<(), Failure> {
    let structure: Structure = args.structure.into();
    let file_sources = args.points_file.as_deref().map(open).transpose()?.map(read_sources).transpose()?;
    let file_targets = args.targets_file.as_deref().map(open).transpose()?.map(read_targets).transpose()?;
    let n = file_sources.as_ref().map_or(args.n, Vec::len);
    let m = file_targets.as_ref().map_or(args.m.unwrap_or(args.n), Vec::len);
    let l_max = args.levels.unwrap_or_else(|| choose_lmax(structure, n.max(1), m.max(1), args.terms));
    let config = TilingConfig::new(structure, l_max, args.scale)?;

    let (generated_sources, generated_targets) = if file_sources.is_none() || file_targets.is_none() {
        uniform_dataset(config, n, m, args.seed, args.strengths.into())?
    } else {
        (Vec::new(), Vec::new())
    };
    let sources = file_sources.unwrap_or(generated_sources);
    let targets = file_targets.unwrap_or(generated_targets);

    let start = Instant::now();
    let result = run_fmm(&sources, &targets, &config, args.terms)?;
    let elapsed = start.elapsed().as_secs_f64();

    println!("structure: {structure}");
    println!("n: {}", sources.len());
    println!("m: {}", targets.len());
    println!("p: {}", result.p);
    println!("l_max: {}", result.l_max);
    println!("time_fmm_s: {elapsed:.6}");
    println!("m2l_count: {}", result.stats.m2l_count);
    println!("direct_pair_count: {}", result.stats.direct_pair_count);
    println!("analytic_bound: {}", result.analytic_bound);

    if let Some(path) = &args.out {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "index,re,im")?;
        for (j, z) in result.potentials.iter().enumerate() {
            writeln!(w, "{j},{},{}", z.re, z.im)?;
        }
        w.flush()?;
    }

    if args.check {
        let direct = direct_sum(&sources, &targets)?;
        let err = max_abs_error(&result.potentials, &direct.potentials);
        let ok = err <= result.analytic_bound;
        println!("max_abs_err: {err}");
        println!("within_bound: {ok}");
        if !ok {
            return Err(Failure::Check(format!(
                "error {err} exceeds the analytic bound {}",
                result.analytic_bound
            )));
        }
    }
    Ok(())
}
