//! Bit strings and Walsh labels.
//!
//! A [`BitString`] of width `n` stores positions `1..=n`; position 1 is the
//! leftmost character in text form and carries the least significant bit of
//! the encoded integer. Internally position `j` lives in bit `j - 1` of a
//! `u64`, so the integer value and the bit string are the same word.
//!
//! A [`WalshLabel`] `(x, z)` names the Pauli string `i^{x·z} X^x Z^z`. Per
//! position: `(0,0) = I`, `(1,0) = X`, `(0,1) = Z`, `(1,1) = Y`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Widest bit string supported by the packed representation.
pub const MAX_WIDTH: usize = 63;

fn check_width(width: usize) -> Result<()> {
    if width > MAX_WIDTH {
        return Err(Error::OutOfRange {
            what: "width",
            value: width as u64,
            limit: MAX_WIDTH as u64,
        });
    }
    Ok(())
}

fn mask(width: usize) -> u64 {
    if width == 0 {
        0
    } else {
        u64::MAX >> (64 - width)
    }
}

/// Fixed-width binary string, leftmost position = least significant bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BitString {
    bits: u64,
    width: usize,
}

impl BitString {
    pub fn new(bits: u64, width: usize) -> Result<Self> {
        check_width(width)?;
        if bits & !mask(width) != 0 {
            return Err(Error::OutOfRange {
                what: "bit pattern",
                value: bits,
                limit: mask(width),
            });
        }
        Ok(Self { bits, width })
    }

    pub fn zeros(width: usize) -> Result<Self> {
        Self::new(0, width)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Value at 1-based position `pos`.
    pub fn get(&self, pos: usize) -> bool {
        debug_assert!(pos >= 1 && pos <= self.width);
        (self.bits >> (pos - 1)) & 1 == 1
    }

    fn same_width(&self, other: &Self) -> Result<()> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        Ok(())
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.same_width(other)?;
        Ok(Self {
            bits: self.bits ^ other.bits,
            width: self.width,
        })
    }

    pub fn negate(&self) -> Self {
        Self {
            bits: !self.bits & mask(self.width),
            width: self.width,
        }
    }

    /// Position-wise exponentiation `x_j^{y_j} = x_j ⊕ ¬y_j`.
    pub fn pow(&self, exponent: &Self) -> Result<Self> {
        self.xor(&exponent.negate())
    }

    /// Integer inner product `Σ x_j y_j`.
    pub fn dot(&self, other: &Self) -> Result<u32> {
        self.same_width(other)?;
        Ok((self.bits & other.bits).count_ones())
    }

    pub fn count_ones(&self) -> u32 {
        self.bits.count_ones()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pos in 1..=self.width {
            f.write_str(if self.get(pos) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        check_width(s.len())?;
        let mut bits = 0u64;
        for (j, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << j,
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("invalid bit character {other:?}"),
                    })
                }
            }
        }
        Self::new(bits, s.len())
    }
}

/// `BIN(p)` at width `n`.
pub fn bin_encode(p: u64, n: usize) -> Result<BitString> {
    check_width(n)?;
    if p > mask(n) {
        return Err(Error::OutOfRange {
            what: "integer",
            value: p,
            limit: mask(n),
        });
    }
    BitString::new(p, n)
}

pub fn bin_decode(s: &BitString) -> u64 {
    s.bits
}

/// `V_m^n`: the first `m` positions set.
pub fn selector(m: usize, n: usize) -> Result<BitString> {
    check_width(n)?;
    if m > n {
        return Err(Error::OutOfRange {
            what: "set index m",
            value: m as u64,
            limit: n as u64,
        });
    }
    BitString::new(mask(m), n)
}

/// Action of `X^x` on the basis state `|p⟩`.
pub fn apply_x_mask(p: &BitString, x: &BitString) -> Result<BitString> {
    p.xor(x)
}

/// Single-position Pauli factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (false, true) => Pauli::Z,
            (true, true) => Pauli::Y,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Pauli string encoded as the bit-string pair `(x, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WalshLabel {
    x: BitString,
    z: BitString,
}

impl WalshLabel {
    pub fn new(x: BitString, z: BitString) -> Result<Self> {
        x.same_width(&z)?;
        Ok(Self { x, z })
    }

    /// Builds a label from raw integer parts.
    pub fn from_bits(x: u64, z: u64, width: usize) -> Result<Self> {
        Self::new(BitString::new(x, width)?, BitString::new(z, width)?)
    }

    pub fn identity(width: usize) -> Result<Self> {
        Self::from_bits(0, 0, width)
    }

    pub fn x(&self) -> BitString {
        self.x
    }

    pub fn z(&self) -> BitString {
        self.z
    }

    pub fn x_bits(&self) -> u64 {
        self.x.bits
    }

    pub fn z_bits(&self) -> u64 {
        self.z.bits
    }

    pub fn width(&self) -> usize {
        self.x.width
    }

    /// Factor at 1-based position `pos`.
    pub fn pauli_at(&self, pos: usize) -> Pauli {
        Pauli::from_bits(self.x.get(pos), self.z.get(pos))
    }

    /// Number of `Y` factors; equals `x·z`.
    pub fn y_count(&self) -> u32 {
        (self.x.bits & self.z.bits).count_ones()
    }

    pub fn is_diagonal(&self) -> bool {
        self.x.bits == 0
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        commutes(self, other)
    }
}

impl fmt::Display for WalshLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pos in 1..=self.width() {
            write!(f, "{}", self.pauli_at(pos).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for WalshLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        check_width(s.len())?;
        let (mut x, mut z) = (0u64, 0u64);
        for (j, ch) in s.chars().enumerate() {
            let (xb, zb) = match ch.to_ascii_uppercase() {
                'I' => (0, 0),
                'X' => (1, 0),
                'Z' => (0, 1),
                'Y' => (1, 1),
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("invalid Pauli character {other:?}"),
                    })
                }
            };
            x |= xb << j;
            z |= zb << j;
        }
        Self::from_bits(x, z, s.len())
    }
}

/// Symplectic commutation test: `x_P·z_Q + x_Q·z_P ≡ 0 (mod 2)`.
pub fn commutes(p: &WalshLabel, q: &WalshLabel) -> Result<bool> {
    let a = p.x.dot(&q.z)?;
    let b = q.x.dot(&p.z)?;
    Ok((a + b) % 2 == 0)
}

/// Parity of the number of `Y` factors.
pub fn y_parity(p: &WalshLabel) -> u32 {
    p.y_count() % 2
}
