//! Base-7 generalized balanced ternary (GBT) arithmetic.
//!
//! A GBT address is a string of base-7 digits. Digit `d` in `1..=6` names one
//! of the six unit directions of the hexagonal lattice, spaced by 60 degrees
//! counter-clockwise; digit 0 is the origin. A digit at position `i` (counted
//! from the least significant end) denotes the unit vector of its direction
//! scaled by `sqrt(7)^i` and rotated by `i * atan(sqrt(3)/2)`, so adding two
//! addresses digit-serially with carries reproduces lattice vector addition.
//!
//! Addresses are stored most-significant digit first so that the address of
//! a level-`l` septree cell is the `l`-digit prefix of any of its leaves.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Sum of two unit digits as `(digit, carry)`. Row and column 0 are the
/// identity; the rest is the pairwise unit-summation table of the hexagonal
/// lattice, where e.g. `1 + 1 = 63` means digit 3 with a carry of 6.
pub const ADD_TABLE: [[(u8, u8); 7]; 7] = [
    [(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (5, 0), (6, 0)],
    [(1, 0), (3, 6), (5, 1), (2, 0), (0, 0), (6, 0), (4, 6)],
    [(2, 0), (5, 1), (4, 1), (6, 2), (3, 0), (0, 0), (1, 0)],
    [(3, 0), (2, 0), (6, 2), (5, 2), (1, 3), (4, 0), (0, 0)],
    [(4, 0), (0, 0), (3, 0), (1, 3), (6, 3), (2, 4), (5, 0)],
    [(5, 0), (6, 0), (0, 0), (4, 0), (2, 4), (1, 4), (3, 5)],
    [(6, 0), (4, 6), (1, 0), (0, 0), (5, 0), (3, 5), (2, 5)],
];

/// Sum of two single digits as `(digit, carry)`.
#[inline]
pub fn unit_add(a: u8, b: u8) -> (u8, u8) {
    ADD_TABLE[a as usize][b as usize]
}

/// The direction opposite to digit `d`.
#[inline]
pub fn opposite(d: u8) -> u8 {
    if d == 0 {
        0
    } else {
        (d + 2) % 6 + 1
    }
}

/// A base-7 GBT address, most significant digit first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GbtDigits(Vec<u8>);

impl GbtDigits {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d > 6) {
            return Err(Error::InvalidArgument(format!("GBT digit {d} out of range")));
        }
        Ok(GbtDigits(digits))
    }

    /// The empty address (the septree root).
    pub fn empty() -> Self {
        GbtDigits(Vec::new())
    }

    pub fn zero(len: usize) -> Self {
        GbtDigits(vec![0; len])
    }

    /// The `len`-digit base-7 expansion of `index`.
    pub fn from_index(index: u64, len: usize) -> Result<Self> {
        let mut digits = vec![0u8; len];
        let mut rest = index;
        for slot in digits.iter_mut().rev() {
            *slot = (rest % 7) as u8;
            rest /= 7;
        }
        if rest != 0 {
            return Err(Error::AddressOverflow { max_digits: len });
        }
        Ok(GbtDigits(digits))
    }

    /// Base-7 value of the digit string.
    pub fn to_index(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &d| acc * 7 + d as u64)
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    /// Number of digits after stripping leading zeros.
    pub fn significant_len(&self) -> usize {
        self.0.len() - self.0.iter().take_while(|&&d| d == 0).count()
    }

    /// Re-express with exactly `len` digits. Fails if significant digits
    /// would be lost.
    pub fn with_len(&self, len: usize) -> Result<Self> {
        let sig = self.significant_len();
        if sig > len {
            return Err(Error::AddressOverflow { max_digits: len });
        }
        let mut digits = vec![0u8; len - sig];
        digits.extend_from_slice(&self.0[self.0.len() - sig..]);
        Ok(GbtDigits(digits))
    }

    /// The first `len` digits.
    pub fn prefix(&self, len: usize) -> Self {
        GbtDigits(self.0[..len.min(self.0.len())].to_vec())
    }
}

impl fmt::Display for GbtDigits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for GbtDigits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .chars()
            .map(|c| {
                c.to_digit(7)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::InvalidArgument(format!("not a base-7 digit: {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GbtDigits(digits))
    }
}

/// Adds digit `d` at little-endian position `pos` of `acc`, cascading carries
/// towards the most significant end.
fn add_digit_at(acc: &mut Vec<u8>, mut pos: usize, mut d: u8) {
    while d != 0 {
        if pos >= acc.len() {
            acc.resize(pos + 1, 0);
        }
        let (digit, carry) = unit_add(acc[pos], d);
        acc[pos] = digit;
        d = carry;
        pos += 1;
    }
}

/// GBT addition. The result keeps at least `max(a.len(), b.len())` digits and
/// grows when carries run past the most significant digit.
pub fn gbt_add(a: &GbtDigits, b: &GbtDigits) -> GbtDigits {
    let mut acc: Vec<u8> = a.0.iter().rev().copied().collect();
    if acc.len() < b.len() {
        acc.resize(b.len(), 0);
    }
    for (pos, &d) in b.0.iter().rev().enumerate() {
        add_digit_at(&mut acc, pos, d);
    }
    acc.reverse();
    GbtDigits(acc)
}

/// GBT negation: every digit is replaced by its opposite direction.
pub fn gbt_negate(a: &GbtDigits) -> GbtDigits {
    GbtDigits(a.0.iter().map(|&d| opposite(d)).collect())
}

/// Zero-extensions of all six unit digits by `m` places, built up one order at
/// a time from `j0^(k+1) = j0^k + u0^k + u0^k` with `u = 1 + (j mod 6)`.
///
/// Entry 0 of the returned array is the zero address.
pub fn zero_extensions(m: usize) -> [GbtDigits; 7] {
    let mut ext: [GbtDigits; 7] = std::array::from_fn(|j| GbtDigits(vec![j as u8]));
    for _ in 0..m {
        let prev = ext.clone();
        for j in 1..=6usize {
            let u = 1 + j % 6;
            ext[j] = gbt_add(&gbt_add(&prev[j], &prev[u]), &prev[u]);
        }
        ext[0] = GbtDigits::zero(ext[1].len());
    }
    ext
}

/// The address of digit `j` followed by `m` zeros, computed by repeated GBT
/// summation rather than by appending zeros.
pub fn zero_extend(j: u8, m: usize) -> Result<GbtDigits> {
    if !(1..=6).contains(&j) {
        return Err(Error::InvalidArgument(format!("zero_extend needs a unit digit, got {j}")));
    }
    Ok(zero_extensions(m)[j as usize].clone())
}

/// Address of the lattice point `k` steps along unit direction `unit`,
/// accumulated by GBT doubling. Negative `k` walks the opposite direction.
pub fn axis_address(unit: u8, k: i64) -> Result<GbtDigits> {
    if !(1..=6).contains(&unit) {
        return Err(Error::InvalidArgument(format!("axis unit must be 1..=6, got {unit}")));
    }
    let step = if k < 0 { opposite(unit) } else { unit };
    let mut remaining = k.unsigned_abs();
    let mut power = GbtDigits(vec![step]);
    let mut acc = GbtDigits(vec![0]);
    while remaining > 0 {
        if remaining & 1 == 1 {
            acc = gbt_add(&acc, &power);
        }
        remaining >>= 1;
        if remaining > 0 {
            power = gbt_add(&power, &power);
        }
    }
    Ok(acc)
}

/// [`axis_address`] restricted to addresses of at most `max_digits`
/// significant digits.
pub fn axis_address_bounded(unit: u8, k: i64, max_digits: usize) -> Result<GbtDigits> {
    let addr = axis_address(unit, k)?;
    if addr.significant_len() > max_digits {
        return Err(Error::AddressOverflow { max_digits });
    }
    addr.with_len(max_digits)
}
