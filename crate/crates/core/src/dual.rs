//! Dual numbers over F_p: the ring F_p[eps]/(eps^2).
//!
//! These carry first-order deformations. A dual number is a unit iff its
//! value part is nonzero, with (a + b eps)^-1 = a^-1 - a^-2 b eps.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::field::{Fp, Ring};

#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Dual {
    pub val: Fp,
    pub eps: Fp,
}

impl Dual {
    pub fn new(val: Fp, eps: Fp) -> Self {
        Dual { val, eps }
    }

    pub fn constant(val: Fp) -> Self {
        Dual {
            val,
            eps: Fp::zero(val.modulus()),
        }
    }

    /// The infinitesimal eps itself.
    pub fn epsilon(p: u32) -> Self {
        Dual {
            val: Fp::zero(p),
            eps: Fp::one(p),
        }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, rhs: Dual) -> Dual {
        Dual {
            val: self.val + rhs.val,
            eps: self.eps + rhs.eps,
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, rhs: Dual) -> Dual {
        Dual {
            val: self.val - rhs.val,
            eps: self.eps - rhs.eps,
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, rhs: Dual) -> Dual {
        // (a + b eps)(c + d eps) = ac + (ad + bc) eps
        Dual {
            val: self.val * rhs.val,
            eps: self.val * rhs.eps + self.eps * rhs.val,
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual {
            val: -self.val,
            eps: -self.eps,
        }
    }
}

impl Ring for Dual {
    fn zero(p: u32) -> Self {
        Dual::constant(Fp::zero(p))
    }
    fn one(p: u32) -> Self {
        Dual::constant(Fp::one(p))
    }
    fn from_base(c: Fp) -> Self {
        Dual::constant(c)
    }
    fn modulus(&self) -> u32 {
        self.val.modulus()
    }
    fn is_zero(&self) -> bool {
        self.val.is_zero() && self.eps.is_zero()
    }
    fn try_inv(&self) -> Option<Self> {
        let a_inv = self.val.inv()?;
        Some(Dual {
            val: a_inv,
            eps: -(a_inv * a_inv * self.eps),
        })
    }
}

impl fmt::Debug for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}e", self.val, self.eps)
    }
}
