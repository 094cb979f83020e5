//! Prime field arithmetic.
//!
//! Elements carry their modulus, so several primes can coexist in one
//! process (tests use F_5, F_7, F_101 alongside the default F_32003).
//! The modulus is restricted to odd primes below 2^31 so that products
//! fit in u64 without reduction tricks.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Default session modulus. Large enough that random-choice degeneracies
/// (split fibers hitting nodes, accidental rank drops) are rare at desk scale.
pub const DEFAULT_PRIME: u32 = 32003;

/// An element of F_p, stored as the least nonnegative residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    v: u32,
    p: u32,
}

impl Fp {
    pub fn new(v: i64, p: u32) -> Self {
        debug_assert!((3..(1 << 31)).contains(&p));
        let m = v.rem_euclid(p as i64) as u32;
        Fp { v: m, p }
    }

    pub fn from_u64(v: u64, p: u32) -> Self {
        Fp {
            v: (v % p as u64) as u32,
            p,
        }
    }

    pub fn zero(p: u32) -> Self {
        Fp { v: 0, p }
    }

    pub fn one(p: u32) -> Self {
        Fp { v: 1, p }
    }

    pub fn residue(self) -> u32 {
        self.v
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.v == 0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    /// Returns `None` for zero.
    pub fn inv(self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i64, self.v as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "modulus must be prime");
        Some(Fp::new(t0, self.p))
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        let s = self.v as u64 + rhs.v as u64;
        Fp {
            v: (s % self.p as u64) as u32,
            p: self.p,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        let s = self.v as u64 + (self.p - rhs.v) as u64;
        Fp {
            v: (s % self.p as u64) as u32,
            p: self.p,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        let s = self.v as u64 * rhs.v as u64;
        Fp {
            v: (s % self.p as u64) as u32,
            p: self.p,
        }
    }
}

impl Div for Fp {
    type Output = Fp;
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inv().expect("division by zero in F_p")
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.v == 0 {
            self
        } else {
            Fp {
                v: self.p - self.v,
                p: self.p,
            }
        }
    }
}

impl AddAssign for Fp {
    fn add_assign(&mut self, rhs: Fp) {
        *self = *self + rhs;
    }
}

impl SubAssign for Fp {
    fn sub_assign(&mut self, rhs: Fp) {
        *self = *self - rhs;
    }
}

impl MulAssign for Fp {
    fn mul_assign(&mut self, rhs: Fp) {
        *self = *self * rhs;
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl serde::Serialize for Fp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u32(self.v)
    }
}

/// Common interface of the coefficient rings used by the generic linear
/// algebra: the prime field itself and the dual numbers over it.
/// `try_inv` drives pivoting: an entry is a valid pivot iff it is a unit.
pub trait Ring:
    Copy
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero(p: u32) -> Self;
    fn one(p: u32) -> Self;
    /// Lift a base-field coefficient.
    fn from_base(c: Fp) -> Self;
    fn modulus(&self) -> u32;
    fn is_zero(&self) -> bool;
    fn try_inv(&self) -> Option<Self>;
}

impl Ring for Fp {
    fn zero(p: u32) -> Self {
        Fp::zero(p)
    }
    fn one(p: u32) -> Self {
        Fp::one(p)
    }
    fn from_base(c: Fp) -> Self {
        c
    }
    fn modulus(&self) -> u32 {
        self.p
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
}
