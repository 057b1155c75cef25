//! Bit-flip patterns on a register of wires.
//!
//! A pattern records which wires currently carry an X error. Wire 0 is the
//! leftmost character in string renderings, so `"1000"` flips wire 0 of a
//! four-wire register. Internally wire `i` is bit `i` of a mask, which makes
//! the mask value double as the index into dense distribution tables.

use crate::error::Error;
use std::fmt;

/// Maximum register width supported by dense distribution tables.
pub const MAX_WIRES: usize = 24;

/// An n-wire flip pattern; wire `i` is in error iff bit `i` of `mask` is set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErrorPattern {
    mask: u32,
    n: u8,
}

impl ErrorPattern {
    /// Pattern from a raw wire mask. Fails if `n` is out of range or `mask`
    /// has bits beyond wire `n - 1`.
    pub fn new(mask: u32, n: usize) -> Result<Self, Error> {
        if n == 0 || n > MAX_WIRES {
            return Err(Error::BadWireCount { n });
        }
        if n < 32 && mask >= (1u32 << n) {
            return Err(Error::PatternOutOfRange { mask, n });
        }
        Ok(Self { mask, n: n as u8 })
    }

    /// The all-clear pattern on `n` wires.
    pub fn zero(n: usize) -> Result<Self, Error> {
        Self::new(0, n)
    }

    /// Parse a string rendering such as `"0101"`; the leftmost character is
    /// wire 0 and `'1'` marks an error.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let n = s.len();
        if n == 0 || n > MAX_WIRES {
            return Err(Error::BadWireCount { n });
        }
        let mut mask = 0u32;
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => mask |= 1 << i,
                '0' => {}
                other => return Err(Error::BadPatternChar { c: other }),
            }
        }
        Ok(Self { mask, n: n as u8 })
    }

    /// Raw wire mask (bit `i` = wire `i`), also the dense table index.
    pub fn mask(&self) -> u32 {
        self.mask
    }

    /// Number of wires in the register.
    pub fn wires(&self) -> usize {
        self.n as usize
    }

    /// Number of wires in error.
    pub fn weight(&self) -> u32 {
        self.mask.count_ones()
    }

    /// Whether wire `i` carries an error.
    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.wires());
        self.mask >> i & 1 == 1
    }

    /// Pattern with wire `i` toggled.
    pub fn toggled(&self, i: usize) -> Self {
        debug_assert!(i < self.wires());
        Self {
            mask: self.mask ^ (1 << i),
            n: self.n,
        }
    }

    /// Bitwise XOR with another pattern on the same register.
    pub fn xor(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self {
            mask: self.mask ^ other.mask,
            n: self.n,
        }
    }

    /// Whether every errored wire of `self` is also errored in `other`.
    pub fn subset_of(&self, other: &Self) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.mask & !other.mask == 0
    }
}

impl fmt::Display for ErrorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.wires() {
            write!(f, "{}", if self.bit(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for ErrorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
