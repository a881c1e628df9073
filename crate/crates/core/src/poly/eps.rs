use std::ops::{Add, Mul, Neg, Sub};

use super::{Poly, PolyError, Result};
use crate::scalar::Scalar;

/// `base + eps * eps_part` with `eps^2 = 0`.
#[derive(Clone, PartialEq, Debug)]
pub struct EpsForm<T> {
    base: Poly<T>,
    eps_part: Poly<T>,
}

impl<T: Scalar> EpsForm<T> {
    pub fn new(base: Poly<T>, eps_part: Poly<T>) -> Result<Self> {
        if base.arity() != eps_part.arity() {
            return Err(PolyError::ArityMismatch {
                left: base.arity(),
                right: eps_part.arity(),
            });
        }
        Ok(EpsForm { base, eps_part })
    }

    pub fn pure(base: Poly<T>) -> Self {
        let arity = base.arity();
        EpsForm {
            base,
            eps_part: Poly::zero(arity),
        }
    }

    pub fn base(&self) -> &Poly<T> {
        &self.base
    }

    pub fn eps_part(&self) -> &Poly<T> {
        &self.eps_part
    }

    pub fn into_parts(self) -> (Poly<T>, Poly<T>) {
        (self.base, self.eps_part)
    }

    pub fn partial(&self, indices: &[usize]) -> Result<Self> {
        Ok(EpsForm {
            base: self.base.partial(indices)?,
            eps_part: self.eps_part.partial(indices)?,
        })
    }

    pub fn scale(&self, s: &T) -> Self {
        EpsForm {
            base: self.base.scale(s),
            eps_part: self.eps_part.scale(s),
        }
    }
}

impl<T: Scalar> Add for EpsForm<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        EpsForm {
            base: &self.base + &rhs.base,
            eps_part: &self.eps_part + &rhs.eps_part,
        }
    }
}

impl<T: Scalar> Sub for EpsForm<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        EpsForm {
            base: &self.base - &rhs.base,
            eps_part: &self.eps_part - &rhs.eps_part,
        }
    }
}

impl<T: Scalar> Mul for EpsForm<T> {
    type Output = Self;
    /// `(a + eps b)(c + eps d) = ac + eps (ad + bc)`.
    fn mul(self, rhs: Self) -> Self {
        let cross = &(&self.base * &rhs.eps_part) + &(&self.eps_part * &rhs.base);
        EpsForm {
            base: &self.base * &rhs.base,
            eps_part: cross,
        }
    }
}

impl<T: Scalar> Neg for EpsForm<T> {
    type Output = Self;
    fn neg(self) -> Self {
        EpsForm {
            base: -self.base,
            eps_part: -self.eps_part,
        }
    }
}
