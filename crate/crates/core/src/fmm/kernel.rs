use num_complex::Complex64;

use super::{FmmResult, FmmStats};
use crate::geometry::Point;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Source {
    pub position: Complex64,
    pub strength: f64,
}

impl Source {
    pub fn new(x: f64, y: f64, strength: f64) -> Self {
        Source { position: Complex64::new(x, y), strength }
    }

    pub fn point(&self) -> Point {
        self.position.into()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Target {
    pub position: Complex64,
}

impl Target {
    pub fn new(x: f64, y: f64) -> Self {
        Target { position: Complex64::new(x, y) }
    }

    pub fn point(&self) -> Point {
        self.position.into()
    }
}

/// Principal-branch `ln(z)` for nonzero `z`.
#[inline]
pub(crate) fn log(z: Complex64) -> Complex64 {
    Complex64::new(0.5 * z.norm_sqr().ln(), z.im.atan2(z.re))
}

/// `u * log(y - x)` on the principal branch.
pub fn kernel_eval(source: &Source, target: &Target) -> Result<Complex64> {
    let d = target.position - source.position;
    if d.re == 0.0 && d.im == 0.0 {
        return Err(Error::Singular { source_index: 0, target_index: 0 });
    }
    Ok(log(d) * source.strength)
}

/// Exact `O(NM)` summation, accumulated in source order for every target.
pub fn direct_sum(sources: &[Source], targets: &[Target]) -> Result<FmmResult> {
    let mut potentials = Vec::with_capacity(targets.len());
    for (j, t) in targets.iter().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, s) in sources.iter().enumerate() {
            let d = t.position - s.position;
            if d.re == 0.0 && d.im == 0.0 {
                return Err(Error::Singular { source_index: i, target_index: j });
            }
            acc += log(d) * s.strength;
        }
        potentials.push(acc);
    }
    Ok(FmmResult {
        potentials,
        p: 0,
        l_max: 0,
        structure: None,
        stats: FmmStats {
            direct_pair_count: (sources.len() * targets.len()) as u64,
            ..FmmStats::default()
        },
        analytic_bound: 0.0,
    })
}

/// Largest absolute difference between the real parts of two potential
/// vectors.
///
/// The imaginary part of each logarithm carries a branch choice that a
/// series expansion cannot follow across the cut, so FMM and direct results
/// can legitimately differ there by multiples of `2*pi*u_i`. The real part,
/// `sum u_i ln|y - x_i|`, is branch-free and is the quantity compared.
pub fn max_abs_error(approx: &[Complex64], reference: &[Complex64]) -> f64 {
    assert_eq!(approx.len(), reference.len(), "potential vectors differ in length");
    approx
        .iter()
        .zip(reference)
        .map(|(a, b)| (a.re - b.re).abs())
        .fold(0.0, f64::max)
}
