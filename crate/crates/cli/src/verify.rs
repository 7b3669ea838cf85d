use tilefmm::analysis::{constants_for, measure_separation, opt_cost_coefficient};
use tilefmm::gbt::{self, GbtDigits};
use tilefmm::geometry::Point;
use tilefmm::tiling::Septree;
use tilefmm::{CellRef, Result, Structure, TilingConfig};

use crate::Failure;

/// Reference unit sums, row `a` and column `b` for `a, b` in `1..=6`.
const UNIT_SUMS: [[&str; 6]; 6] = [
    ["63", "15", "2", "0", "6", "64"],
    ["15", "14", "26", "3", "0", "1"],
    ["2", "26", "25", "31", "4", "0"],
    ["0", "3", "31", "36", "42", "5"],
    ["6", "0", "4", "42", "41", "53"],
    ["64", "1", "0", "5", "53", "52"],
];

struct Report {
    failures: usize,
}

impl Report {
    fn check(&mut self, module: &str, name: &str, outcome: Result<(bool, String)>) {
        let (ok, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        if !ok {
            self.failures += 1;
        }
        println!("{} {module}::{name} {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn g(s: &str) -> GbtDigits {
    s.parse().expect("literal GBT address")
}

fn same(a: &GbtDigits, b: &GbtDigits) -> bool {
    let len = a.len().max(b.len());
    a.with_len(len).ok() == b.with_len(len).ok()
}

fn vector(septree: &Septree, a: &GbtDigits) -> Point {
    let n = a.len() as u32;
    a.digits()
        .iter()
        .enumerate()
        .fold(Point::ORIGIN, |acc, (i, &d)| acc + septree.digit_offset(d, n - 1 - i as u32))
}

fn gbt_table() -> Result<(bool, String)> {
    let septree = Septree::new(TilingConfig::new(Structure::Septree, 1, 1.0)?);
    let mut bad = Vec::new();
    for a in 1..=6u8 {
        for b in 1..=6u8 {
            let sum = gbt::gbt_add(&GbtDigits::new(vec![a])?, &GbtDigits::new(vec![b])?);
            let expected = g(UNIT_SUMS[a as usize - 1][b as usize - 1]);
            let geometric = vector(&septree, &sum)
                .distance(vector(&septree, &GbtDigits::new(vec![a])?) + vector(&septree, &GbtDigits::new(vec![b])?));
            if !same(&sum, &expected) || geometric > 1e-9 {
                bad.push(format!("{a}+{b}"));
            }
        }
    }
    Ok((bad.is_empty(), format!("36 unit sums, mismatches: {bad:?}")))
}

fn zero_extensions() -> Result<(bool, String)> {
    let mut ok = true;
    for j in 1..=6u8 {
        let u = 1 + j % 6;
        let one = |d: u8| GbtDigits::new(vec![d]);
        let sum = gbt::gbt_add(&gbt::gbt_add(&one(j)?, &one(u)?), &one(u)?);
        ok &= same(&sum, &GbtDigits::new(vec![j, 0])?);
    }
    ok &= same(&gbt::gbt_add(&gbt::gbt_add(&g("10"), &g("20")), &g("20")), &g("100"));
    let sum = gbt::gbt_add(&g("14"), &g("35"));
    ok &= same(&sum, &g("32"));
    Ok((ok, format!("six j+u+u identities, 10+20+20 = 100, 14+35 = {sum}")))
}

fn septree_neighbors() -> Result<(bool, String)> {
    let t = TilingConfig::new(Structure::Septree, 2, 1.0)?.build();
    let got: Vec<String> = t
        .neighbors(CellRef::new(2, g("52").to_index()))?
        .iter()
        .map(|c| GbtDigits::from_index(c.index, 2).map(|a| a.to_string()))
        .collect::<Result<_>>()?;
    let mut want: Vec<u64> = ["65", "64", "06", "53", "50", "51"].iter().map(|s| g(s).to_index()).collect();
    want.sort_unstable();
    let got_index: Vec<u64> = got.iter().map(|s| g(s).to_index()).collect();
    Ok((got_index == want, format!("neighbors of 52 = {got:?}")))
}

fn round_trips() -> Result<(bool, String)> {
    let mut checked = 0;
    for s in Structure::ALL {
        let t = TilingConfig::new(s, 4, 1.0)?.build();
        for level in 1..=4 {
            for index in 0..t.cell_count(level) {
                let n = CellRef::new(level, index);
                if t.cell_index(t.cell_center(n)?, level)? != n {
                    return Ok((false, format!("{s} {n:?} does not round-trip")));
                }
                checked += 1;
            }
        }
    }
    Ok((true, format!("{checked} cells on levels 1-4")))
}

fn interior_counts(s: Structure) -> Result<(bool, String)> {
    let t = TilingConfig::new(s, 3, 1.0)?.build();
    let c = constants_for(s);
    let full = c.p2 as usize - 1;
    let mut seen = 0;
    for index in 0..t.cell_count(3) {
        let n = CellRef::new(3, index);
        if t.neighbors(n)?.len() != full || t.neighbors(t.parent(n)?)?.len() != full {
            continue;
        }
        seen += 1;
        let (e4, near) = (t.neighbors_e4(n)?.len(), t.near_field(n)?.len());
        if e4 != c.p4 as usize || near != c.p2 as usize {
            return Ok((false, format!("{s} {n:?}: P4 = {e4}, P2 = {near}")));
        }
    }
    Ok((seen > 0, format!("{s}: P4 = {}, P2 = {} over {seen} interior cells", c.p4, c.p2)))
}

fn separation(s: Structure) -> Result<(bool, String)> {
    let m = measure_separation(&TilingConfig::new(s, 3, 1.0)?, 3)?;
    let c = constants_for(s);
    let ok = (m.r_over_big_r - c.r_over_big_r).abs() < 1e-9 && (m.rho_over_r - c.rho_over_r).abs() < 1e-9;
    Ok((ok, format!("{s}: r/R = {:.12}, rho/r = {:.12}", m.r_over_big_r, m.rho_over_r)))
}

fn cost_identities() -> Result<(bool, String)> {
    let reference = [32.64, 35.20, 46.65];
    let mut ok = true;
    let mut parts = Vec::new();
    for (s, want) in Structure::ALL.into_iter().zip(reference) {
        let c = constants_for(s);
        let coeff = opt_cost_coefficient(s);
        ok &= (coeff * 100.0).floor() / 100.0 == want;
        parts.push(format!("{s}: C = {coeff:.4}, (P4+2)P2 = {}", (c.p4 + 2) * c.p2));
    }
    Ok((ok, parts.join("; ")))
}

pub fn cmd_verify() -> std::result::Result<(), Failure> {
    let mut report = Report { failures: 0 };
    report.check("gbt", "unit_table", gbt_table());
    report.check("gbt", "zero_extension", zero_extensions());
    report.check("tiling", "septree_neighbors", septree_neighbors());
    report.check("tiling", "round_trip", round_trips());
    for s in Structure::ALL {
        report.check("tiling", "interaction_counts", interior_counts(s));
    }
    for s in Structure::ALL {
        report.check("analysis", "separation_ratios", separation(s));
    }
    report.check("analysis", "cost_coefficients", cost_identities());
    if report.failures > 0 {
        return Err(Failure::Check(format!("{} check(s) failed", report.failures)));
    }
    Ok(())
}
