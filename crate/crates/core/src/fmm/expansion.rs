//! Multipole and local expansions of the 2D log kernel and the classical
//! translation operators between them.
//!
//! A multipole expansion about `c` represents
//! `Q ln(z - c) + sum_{k=1..p} a_k (z - c)^-k` and is valid outside a disk of
//! radius `radius` about `c` holding all its sources. A local expansion
//! represents `sum_{l=0..p} b_l (z - c)^l` inside a disk about `c`.
//!
//! M2M and L2L are exact for truncated series. M2L truncates the local
//! series and fails if the source and target disks overlap.

use num_complex::Complex64;

use super::kernel::{log, Source};
use crate::{Error, Result};

/// Largest supported number of expansion terms.
pub const MAX_TERMS: usize = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct MultipoleExpansion {
    pub center: Complex64,
    /// Radius about `center` containing every represented source.
    pub radius: f64,
    pub total_charge: f64,
    /// `a_1 ..= a_p`.
    pub coeffs: Vec<Complex64>,
}

impl MultipoleExpansion {
    pub fn zero(center: Complex64, p: usize) -> Self {
        MultipoleExpansion { center, radius: 0.0, total_charge: 0.0, coeffs: vec![ZERO; p] }
    }

    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let w = (z - self.center).inv();
        let series = self.coeffs.iter().rev().fold(ZERO, |acc, &a| (acc + a) * w);
        log(z - self.center) * self.total_charge + series
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalExpansion {
    pub center: Complex64,
    /// `b_0 ..= b_p`.
    pub coeffs: Vec<Complex64>,
}

impl LocalExpansion {
    pub fn zero(center: Complex64, p: usize) -> Self {
        LocalExpansion { center, coeffs: vec![ZERO; p + 1] }
    }

    pub fn terms(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let w = z - self.center;
        self.coeffs.iter().rev().fold(ZERO, |acc, &b| acc * w + b)
    }
}

/// Translation operators for a fixed term count, with the binomial table
/// they share.
#[derive(Clone, Debug)]
pub struct Operators {
    p: usize,
    /// `binom[n][k]` for `n <= 2p`.
    binom: Vec<Vec<f64>>,
}

impl Operators {
    pub fn new(p: usize) -> Result<Self> {
        if !(1..=MAX_TERMS).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "number of terms must be in 1..={MAX_TERMS}, got {p}"
            )));
        }
        let n_max = 2 * p;
        let mut binom = vec![vec![0.0; n_max + 1]; n_max + 1];
        for n in 0..=n_max {
            binom[n][0] = 1.0;
            for k in 1..=n {
                binom[n][k] = binom[n - 1][k - 1] + if k < n { binom[n - 1][k] } else { 0.0 };
            }
        }
        Ok(Operators { p, binom })
    }

    pub fn terms(&self) -> usize {
        self.p
    }

    pub fn p2m(&self, sources: &[Source], center: Complex64) -> MultipoleExpansion {
        let mut m = MultipoleExpansion::zero(center, self.p);
        self.p2m_accumulate(sources, &mut m);
        m
    }

    pub fn p2m_accumulate(&self, sources: &[Source], m: &mut MultipoleExpansion) {
        for s in sources {
            let d = s.position - m.center;
            m.total_charge += s.strength;
            m.radius = m.radius.max(d.norm());
            let mut power = Complex64::new(s.strength, 0.0);
            for (k, a) in m.coeffs.iter_mut().enumerate() {
                power *= d;
                *a -= power / (k + 1) as f64;
            }
        }
    }

    pub fn m2m(&self, child: &MultipoleExpansion, new_center: Complex64) -> MultipoleExpansion {
        let mut m = MultipoleExpansion::zero(new_center, self.p);
        self.m2m_accumulate(child, &mut m);
        m
    }

    /// Shifts `child` to `parent.center` and adds it into `parent`.
    pub fn m2m_accumulate(&self, child: &MultipoleExpansion, parent: &mut MultipoleExpansion) {
        let z0 = child.center - parent.center;
        let q = child.total_charge;
        let p = self.p;
        let mut pow = vec![Complex64::new(1.0, 0.0); p + 1];
        for l in 1..=p {
            pow[l] = pow[l - 1] * z0;
        }
        for l in 1..=p {
            let mut b = -pow[l] * q / l as f64;
            for k in 1..=l {
                b += child.coeffs[k - 1] * pow[l - k] * self.binom[l - 1][k - 1];
            }
            parent.coeffs[l - 1] += b;
        }
        parent.total_charge += q;
        if q != 0.0 || child.coeffs.iter().any(|a| *a != ZERO) {
            parent.radius = parent.radius.max(child.radius + z0.norm());
        }
    }

    /// Converts `m` into a local expansion about `center`, valid in the disk
    /// of radius `radius` about it.
    pub fn m2l(
        &self,
        m: &MultipoleExpansion,
        center: Complex64,
        radius: f64,
    ) -> Result<LocalExpansion> {
        let mut local = LocalExpansion::zero(center, self.p);
        self.m2l_accumulate(m, &mut local, radius)?;
        Ok(local)
    }

    pub fn m2l_accumulate(
        &self,
        m: &MultipoleExpansion,
        local: &mut LocalExpansion,
        radius: f64,
    ) -> Result<()> {
        let z0 = m.center - local.center;
        if !(z0.norm() > m.radius + radius) {
            return Err(Error::NotSeparated { from: m.center, to: local.center });
        }
        let p = self.p;
        let inv = z0.inv();
        let q = m.total_charge;
        // t_k = a_k (-1)^k / z0^k
        let mut t = Vec::with_capacity(p);
        let mut inv_pow = Complex64::new(1.0, 0.0);
        for (k, &a) in m.coeffs.iter().enumerate() {
            inv_pow *= inv;
            let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
            t.push(a * inv_pow * sign);
        }
        local.coeffs[0] += log(-z0) * q + t.iter().sum::<Complex64>();
        let mut scale = Complex64::new(1.0, 0.0);
        for l in 1..=p {
            scale *= inv;
            let mut acc = Complex64::new(-q / l as f64, 0.0);
            for k in 1..=p {
                acc += t[k - 1] * self.binom[l + k - 1][k - 1];
            }
            local.coeffs[l] += acc * scale;
        }
        Ok(())
    }

    pub fn l2l(&self, parent: &LocalExpansion, child_center: Complex64) -> LocalExpansion {
        let mut local = LocalExpansion::zero(child_center, self.p);
        self.l2l_accumulate(parent, &mut local);
        local
    }

    /// Re-centres `parent` on `child.center` and adds it into `child`.
    pub fn l2l_accumulate(&self, parent: &LocalExpansion, child: &mut LocalExpansion) {
        let d = child.center - parent.center;
        let p = self.p;
        let mut pow = vec![Complex64::new(1.0, 0.0); p + 1];
        for k in 1..=p {
            pow[k] = pow[k - 1] * d;
        }
        for k in 0..=p {
            let mut acc = ZERO;
            for l in k..=p {
                acc += parent.coeffs[l] * pow[l - k] * self.binom[l][k];
            }
            child.coeffs[k] += acc;
        }
    }
}

/// Multipole expansion of `sources` about `center` with `p` terms.
pub fn p2m(sources: &[Source], center: Complex64, p: usize) -> Result<MultipoleExpansion> {
    Ok(Operators::new(p)?.p2m(sources, center))
}

pub fn m2m(child: &MultipoleExpansion, new_center: Complex64) -> Result<MultipoleExpansion> {
    Ok(Operators::new(child.terms())?.m2m(child, new_center))
}

pub fn m2l(m: &MultipoleExpansion, center: Complex64, radius: f64) -> Result<LocalExpansion> {
    Operators::new(m.terms())?.m2l(m, center, radius)
}

pub fn l2l(parent: &LocalExpansion, child_center: Complex64) -> Result<LocalExpansion> {
    Ok(Operators::new(parent.terms())?.l2l(parent, child_center))
}
