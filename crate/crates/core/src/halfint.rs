//! Exact half-integers, stored as doubled values.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// An element of (1/2)Z. `HalfInt::new(3)` is 3, `HalfInt::half(-1)` is -1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt {
    doubled: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { doubled: 0 };
    pub const ONE: HalfInt = HalfInt { doubled: 2 };

    pub fn new(whole: i64) -> Self {
        HalfInt { doubled: 2 * whole }
    }

    /// Value `halves`/2.
    pub fn half(halves: i64) -> Self {
        HalfInt { doubled: halves }
    }

    pub fn doubled(self) -> i64 {
        self.doubled
    }

    pub fn is_integer(self) -> bool {
        self.doubled % 2 == 0
    }

    pub fn is_zero(self) -> bool {
        self.doubled == 0
    }

    /// Integer value, if integral.
    pub fn as_integer(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.doubled / 2)
        } else {
            None
        }
    }

    /// Numerator over denominator in lowest terms (den is 1 or 2).
    pub fn frac(self) -> (i64, i64) {
        if self.is_integer() {
            (self.doubled / 2, 1)
        } else {
            (self.doubled, 2)
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { doubled: self.doubled + rhs.doubled }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { doubled: self.doubled - rhs.doubled }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { doubled: -self.doubled }
    }
}

impl AddAssign for HalfInt {
    fn add_assign(&mut self, rhs: HalfInt) {
        self.doubled += rhs.doubled;
    }
}

impl SubAssign for HalfInt {
    fn sub_assign(&mut self, rhs: HalfInt) {
        self.doubled -= rhs.doubled;
    }
}

impl Mul<i64> for HalfInt {
    type Output = HalfInt;
    fn mul(self, rhs: i64) -> HalfInt {
        HalfInt { doubled: self.doubled * rhs }
    }
}

impl From<i64> for HalfInt {
    fn from(v: i64) -> Self {
        HalfInt::new(v)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.frac();
        if d == 1 {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/2")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let a = HalfInt::half(3); // 3/2
        let b = HalfInt::new(-1);
        assert_eq!((a + b).doubled(), 1);
        assert_eq!((a - b).to_string(), "5/2");
        assert_eq!((-a).to_string(), "-3/2");
        assert_eq!(HalfInt::new(4).to_string(), "4");
        assert!(HalfInt::new(4).is_integer());
        assert!(!a.is_integer());
        assert_eq!(a.as_integer(), None);
        assert_eq!(HalfInt::new(4).as_integer(), Some(4));
    }
}
