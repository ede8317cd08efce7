use std::fmt;

use super::curve::Curve;
use super::element::FfElem;
use crate::error::{Error, Result};
use crate::exactnum::FieldValue;

/// Rational differential g·dx.
#[derive(Clone, PartialEq, Eq)]
pub struct Differential {
    coef: FfElem,
}

impl Differential {
    pub fn new(coef: FfElem) -> Differential {
        Differential { coef }
    }

    /// The coefficient g in ω = g·dx.
    pub fn coef(&self) -> &FfElem {
        &self.coef
    }

    pub fn curve(&self) -> &Curve {
        self.coef.curve()
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }

    pub fn add(&self, other: &Differential) -> Differential {
        Differential::new(self.coef.add(&other.coef))
    }

    pub fn scale(&self, u: &FfElem) -> Differential {
        Differential::new(self.coef.mul(u))
    }

    pub fn scale_const(&self, c: &FieldValue) -> Differential {
        Differential::new(self.coef.scale(c))
    }

    /// The function ω / η for η ≠ 0.
    pub fn ratio(&self, other: &Differential) -> Result<FfElem> {
        if other.is_zero() {
            return Err(Error::ZeroDifferential);
        }
        self.coef.div(&other.coef)
    }

    /// Coordinates (a, b) when ω = (a + b·x)·dx/y is a global regular form.
    pub fn global_coords(&self) -> Option<(FieldValue, FieldValue)> {
        let times_y = self.coef.mul(&self.curve().y());
        if !times_y.b().is_zero() || !times_y.d().is_one() {
            return None;
        }
        let lin = times_y.a();
        if lin.degree().is_some_and(|d| d > 1) {
            return None;
        }
        Some((lin.coeff(0), lin.coeff(1)))
    }
}

impl fmt::Display for Differential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·dx", self.coef)
    }
}

impl fmt::Debug for Differential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A derivation θ of the function field, determined by θ(x).
///
/// θ(y) = θ(x)·f'(x)/(2y) and constants are killed.
#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    on_x: FfElem,
}

impl Derivation {
    pub fn new(on_x: FfElem) -> Derivation {
        Derivation { on_x }
    }

    /// θ(x).
    pub fn on_x(&self) -> &FfElem {
        &self.on_x
    }

    pub fn curve(&self) -> &Curve {
        self.on_x.curve()
    }

    pub fn apply(&self, u: &FfElem) -> FfElem {
        if u.is_zero() {
            return u.clone();
        }
        self.on_x.mul(&u.d_dx())
    }

    /// θ^n(u), checking the degree cap after every step.
    pub fn iterate(&self, u: &FfElem, n: u64) -> Result<FfElem> {
        let mut cur = u.clone();
        for _ in 0..n {
            cur = self.apply(&cur);
            cur.check_cap()?;
        }
        Ok(cur)
    }

    /// θ^p, which is again a derivation in characteristic p; it is determined by
    /// its value θ^p(x).
    pub fn p_power(&self) -> Result<Derivation> {
        let p = self.curve().characteristic();
        let x = self.curve().x();
        Ok(Derivation::new(self.iterate(&x, p)?))
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·d/dx", self.on_x)
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// du = (∂u/∂x)·dx; kills p-th powers.
pub fn canonical_d(u: &FfElem) -> Differential {
    Differential::new(u.d_dx())
}

/// The derivation θ with pair(ω, θ) = 1, i.e. θ(x) = 1/g for ω = g·dx.
pub fn dual_derivation(omega: &Differential) -> Result<Derivation> {
    if omega.is_zero() {
        return Err(Error::ZeroDifferential);
    }
    Ok(Derivation::new(omega.coef.inverse()?))
}

/// Contraction ⟨ω, θ⟩ = g·θ(x) for ω = g·dx.
pub fn pair(omega: &Differential, theta: &Derivation) -> FfElem {
    omega.coef.mul(&theta.on_x)
}

pub fn iterate_derivation(theta: &Derivation, u: &FfElem, n: u64) -> Result<FfElem> {
    theta.iterate(u, n)
}

/// Objects acted on by the hyperelliptic involution y ↦ −y.
pub trait Involution {
    fn involution(&self) -> Self;
}

impl Involution for FfElem {
    fn involution(&self) -> Self {
        FfElem::involution(self)
    }
}

impl Involution for Differential {
    /// g·dx ↦ ı(g)·dx (x is fixed, so dx is too).
    fn involution(&self) -> Self {
        Differential::new(self.coef.involution())
    }
}

pub fn hyperelliptic_involution<T: Involution>(value: &T) -> T {
    value.involution()
}
