use std::fmt;

use crate::error::{Error, Result};

/// Maximum number of points a [`PointSet`] can address.
pub const MAX_POINTS: usize = 64;

/// A subset of the points `0..width` of some ambient finite space.
///
/// Binary operations require equal widths and panic otherwise; the
/// space-level API checks widths and reports [`Error::WidthMismatch`]
/// before it gets here.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet {
    width: u8,
    bits: u64,
}

fn mask(width: usize) -> u64 {
    if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

impl PointSet {
    pub fn empty(width: usize) -> Self {
        assert!(width <= MAX_POINTS, "width {width} above {MAX_POINTS}");
        PointSet { width: width as u8, bits: 0 }
    }

    pub fn full(width: usize) -> Self {
        assert!(width <= MAX_POINTS, "width {width} above {MAX_POINTS}");
        PointSet {
            width: width as u8,
            bits: mask(width),
        }
    }

    pub fn from_bits(width: usize, bits: u64) -> Result<Self> {
        if width > MAX_POINTS {
            return Err(Error::TooManyPoints(width));
        }
        if bits & !mask(width) != 0 {
            let point = 63 - (bits & !mask(width)).leading_zeros() as usize;
            return Err(Error::PointOutOfRange { point, n: width });
        }
        Ok(PointSet {
            width: width as u8,
            bits,
        })
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(width: usize, points: I) -> Result<Self> {
        if width > MAX_POINTS {
            return Err(Error::TooManyPoints(width));
        }
        let mut bits = 0u64;
        for p in points {
            if p >= width {
                return Err(Error::PointOutOfRange { point: p, n: width });
            }
            bits |= 1 << p;
        }
        Ok(PointSet {
            width: width as u8,
            bits,
        })
    }

    pub fn singleton(width: usize, point: usize) -> Self {
        assert!(point < width, "point {point} out of range {width}");
        PointSet {
            width: width as u8,
            bits: 1 << point,
        }
    }

    /// All `2^width` subsets in increasing bit order.
    pub fn all_subsets(width: usize) -> impl Iterator<Item = PointSet> {
        assert!(width < MAX_POINTS, "cannot enumerate subsets of {width} points");
        (0..(1u64 << width)).map(move |bits| PointSet {
            width: width as u8,
            bits,
        })
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width as usize
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn contains(&self, point: usize) -> bool {
        point < self.width() && self.bits >> point & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.bits == mask(self.width())
    }

    #[inline]
    fn check(&self, other: &PointSet) {
        assert_eq!(self.width, other.width, "point-set width mismatch");
    }

    #[inline]
    pub fn union(&self, other: &PointSet) -> PointSet {
        self.check(other);
        PointSet {
            width: self.width,
            bits: self.bits | other.bits,
        }
    }

    #[inline]
    pub fn intersection(&self, other: &PointSet) -> PointSet {
        self.check(other);
        PointSet {
            width: self.width,
            bits: self.bits & other.bits,
        }
    }

    #[inline]
    pub fn difference(&self, other: &PointSet) -> PointSet {
        self.check(other);
        PointSet {
            width: self.width,
            bits: self.bits & !other.bits,
        }
    }

    #[inline]
    pub fn complement(&self) -> PointSet {
        PointSet {
            width: self.width,
            bits: !self.bits & mask(self.width()),
        }
    }

    #[inline]
    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.check(other);
        self.bits & !other.bits == 0
    }

    #[inline]
    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.check(other);
        self.bits & other.bits == 0
    }

    pub fn with(&self, point: usize) -> PointSet {
        assert!(point < self.width(), "point {point} out of range");
        PointSet {
            width: self.width,
            bits: self.bits | 1 << point,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.bits;
        (0..self.width()).filter(move |p| bits >> p & 1 == 1)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize)
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}
