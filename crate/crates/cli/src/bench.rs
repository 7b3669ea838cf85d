use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::time::Instant;

use tilefmm::analysis::choose_lmax;
use tilefmm::fmm::{direct_sum, max_abs_error, run_fmm};
use tilefmm::sampling::uniform_dataset;
use tilefmm::{Structure, TilingConfig};

use crate::{BenchArgs, Failure, SweepArg};

pub const HEADER: &str =
    "structure,n,m,p,l_max,time_fmm_s,time_direct_s,max_abs_err,analytic_bound,m2l_count,direct_pair_count";

const DEFAULT_N: [usize; 5] = [320, 640, 1280, 2560, 5120];

struct BenchRecord {
    structure: Structure,
    n: usize,
    m: usize,
    p: usize,
    l_max: u32,
    time_fmm: f64,
    time_direct: Option<f64>,
    max_abs_err: Option<f64>,
    analytic_bound: f64,
    m2l_count: u64,
    direct_pair_count: u64,
}

impl BenchRecord {
    fn csv(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        format!(
            "{},{},{},{},{},{:.6},{},{},{},{},{}",
            self.structure,
            self.n,
            self.m,
            self.p,
            self.l_max,
            self.time_fmm,
            opt(self.time_direct.map(|t| format!("{t:.6}"))),
            opt(self.max_abs_err.map(|e| e.to_string())),
            self.analytic_bound,
            self.m2l_count,
            self.direct_pair_count,
        )
    }
}

fn parse_values(args: &BenchArgs) -> Result<Vec<usize>, Failure> {
    match &args.values {
        None => Ok(match args.sweep {
            SweepArg::N => DEFAULT_N.to_vec(),
            SweepArg::Terms => (2..=20).step_by(2).collect(),
        }),
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| Failure::Usage(format!("bad sweep value {v:?}")))
            })
            .collect(),
    }
}

fn bench_one(args: &BenchArgs, structure: Structure, n: usize, p: usize) -> Result<BenchRecord, Failure> {
    let l_max = args.levels.unwrap_or_else(|| choose_lmax(structure, n.max(1), n.max(1), p));
    let config = TilingConfig::new(structure, l_max, 1.0)?;
    let (sources, targets) = uniform_dataset(config, n, n, args.seed, args.strengths.into())?;

    let start = Instant::now();
    let result = run_fmm(&sources, &targets, &config, p)?;
    let time_fmm = start.elapsed().as_secs_f64();

    let (time_direct, max_abs_err) = if n <= args.direct_cutoff {
        let start = Instant::now();
        let direct = direct_sum(&sources, &targets)?;
        let t = start.elapsed().as_secs_f64();
        (Some(t), Some(max_abs_error(&result.potentials, &direct.potentials)))
    } else {
        (None, None)
    };
    Ok(BenchRecord {
        structure,
        n,
        m: n,
        p,
        l_max,
        time_fmm,
        time_direct,
        max_abs_err,
        analytic_bound: result.analytic_bound,
        m2l_count: result.stats.m2l_count,
        direct_pair_count: result.stats.direct_pair_count,
    })
}

pub fn cmd_bench(args: &BenchArgs) -> Result<(), Failure> {
    let values = parse_values(args)?;
    let structures: Vec<Structure> = match args.structure {
        Some(s) => vec![s.into()],
        None => Structure::ALL.to_vec(),
    };
    let mut out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    writeln!(out, "{HEADER}")?;
    for &structure in &structures {
        for &v in &values {
            let (n, p) = match args.sweep {
                SweepArg::N => (v, args.terms),
                SweepArg::Terms => (args.n, v),
            };
            let record = bench_one(args, structure, n, p)?;
            writeln!(out, "{}", record.csv())?;
            out.flush()?;
        }
    }
    Ok(())
}
