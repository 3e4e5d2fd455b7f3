//! Subsets of a finite carrier, stored as a 64-bit membership mask.

use std::fmt;

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

/// Largest carrier any [`Subset`] (and therefore any `Space`) can describe.
pub const MAX_POINTS: usize = 64;

/// A subset of the carrier `{0, .., n-1}`.
///
/// Bit `i` of the mask is set iff point `i` is a member. The carrier size is
/// carried along so that operations can reject subsets built for a different
/// space.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    bits: u64,
    n: u8,
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_POINTS, "carrier of {n} points exceeds {MAX_POINTS}");
        Subset { bits: 0, n: n as u8 }
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_POINTS, "carrier of {n} points exceeds {MAX_POINTS}");
        Subset {
            bits: full_mask(n),
            n: n as u8,
        }
    }

    /// Builds a subset from a raw mask; bits at or above `n` are an error.
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        if n > MAX_POINTS {
            return Err(Error::CarrierTooLarge {
                n,
                max: MAX_POINTS,
            });
        }
        if bits & !full_mask(n) != 0 {
            return Err(Error::PointOutOfRange {
                point: 63 - (bits & !full_mask(n)).leading_zeros() as usize,
                n,
            });
        }
        Ok(Subset { bits, n: n as u8 })
    }

    /// Unchecked variant for internal loops where `bits` is known to fit.
    #[inline]
    pub(crate) fn from_bits_unchecked(n: usize, bits: u64) -> Self {
        debug_assert!(bits & !full_mask(n) == 0);
        Subset { bits, n: n as u8 }
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(n: usize, points: I) -> Result<Self> {
        let mut s = Subset::empty(n);
        for x in points {
            if x >= n {
                return Err(Error::PointOutOfRange { point: x, n });
            }
            s.bits |= 1 << x;
        }
        Ok(s)
    }

    pub fn singleton(n: usize, x: usize) -> Result<Self> {
        Subset::from_points(n, [x])
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    /// Size of the carrier this subset lives in.
    #[inline]
    pub fn carrier(self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn contains(self, x: usize) -> bool {
        x < self.carrier() && (self.bits >> x) & 1 == 1
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_subset_of(self, other: Subset) -> bool {
        self.bits & !other.bits == 0
    }

    #[inline]
    pub fn union(self, other: Subset) -> Subset {
        Subset {
            bits: self.bits | other.bits,
            n: self.n,
        }
    }

    #[inline]
    pub fn intersection(self, other: Subset) -> Subset {
        Subset {
            bits: self.bits & other.bits,
            n: self.n,
        }
    }

    #[inline]
    pub fn difference(self, other: Subset) -> Subset {
        Subset {
            bits: self.bits & !other.bits,
            n: self.n,
        }
    }

    /// Set complement within the carrier.
    #[inline]
    pub fn complement(self) -> Subset {
        Subset {
            bits: !self.bits & full_mask(self.carrier()),
            n: self.n,
        }
    }

    pub fn insert(&mut self, x: usize) {
        assert!(x < self.carrier(), "point {x} outside carrier of size {}", self.n);
        self.bits |= 1 << x;
    }

    pub fn remove(&mut self, x: usize) {
        if x < self.carrier() {
            self.bits &= !(1 << x);
        }
    }

    /// Members in increasing order.
    pub fn iter(self) -> Points {
        Points { bits: self.bits }
    }

    pub fn first(self) -> Option<usize> {
        self.iter().next()
    }

    pub(crate) fn check_carrier(self, n: usize) -> Result<()> {
        if self.carrier() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: self.carrier(),
            });
        }
        Ok(())
    }
}

/// Iterator over the members of a subset.
#[derive(Clone, Debug)]
pub struct Points {
    bits: u64,
}

impl Iterator for Points {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let x = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.bits.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Points {}

impl IntoIterator for Subset {
    type Item = usize;
    type IntoIter = Points;

    fn into_iter(self) -> Points {
        self.iter()
    }
}

/// Every subset of an `n`-point carrier, in increasing mask order.
pub fn all_subsets(n: usize) -> impl Iterator<Item = Subset> + Clone {
    assert!(n < 64, "cannot enumerate the power set of {n} points");
    (0..1u64 << n).map(move |bits| Subset::from_bits_unchecked(n, bits))
}

/// Every subset of `within`, including the empty set and `within` itself.
pub fn subsets_of(within: Subset) -> impl Iterator<Item = Subset> {
    let n = within.carrier();
    let mask = within.bits;
    // Standard submask walk, emitted in increasing order.
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask {
            None
        } else {
            Some(((cur | !mask).wrapping_add(1)) & mask)
        };
        Some(Subset::from_bits_unchecked(n, cur))
    })
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for x in self.iter() {
            seq.serialize_element(&x)?;
        }
        seq.end()
    }
}
