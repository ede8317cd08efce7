use std::fmt;

use super::ring::{FieldLike, Ring};
use crate::error::{Error, Result};

/// `body + ε·slope` in R[ε]/(ε²).
///
/// Dual numbers sit directly over a coefficient ring; they are never nested.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dual<R> {
    pub body: R,
    pub slope: R,
}

impl<R: Ring> Dual<R> {
    pub fn new(body: R, slope: R) -> Self {
        Dual { body, slope }
    }

    /// Embeds `a` as `a + ε·0`.
    pub fn constant(a: R) -> Self {
        let slope = a.zero_like();
        Dual { body: a, slope }
    }

    /// The pure infinitesimal `ε·b`.
    pub fn infinitesimal(b: R) -> Self {
        let body = b.zero_like();
        Dual { body, slope: b }
    }

    /// Applies `f` to body and slope separately.
    pub fn map(&self, f: impl Fn(&R) -> R) -> Self {
        Dual {
            body: f(&self.body),
            slope: f(&self.slope),
        }
    }

    /// Frobenius is not a ring map on R[ε]/(ε²) compatible with the slope; use
    /// [`Dual::map`] for a componentwise application.
    pub fn frobenius(&self) -> Result<Self> {
        Err(Error::UnsupportedRing("frobenius on dual numbers"))
    }
}

impl<R: FieldLike> Dual<R> {
    pub fn is_unit(&self) -> bool {
        !self.body.is_zero()
    }

    /// (a + εb)⁻¹ = a⁻¹ − ε·b·a⁻².
    pub fn inv(&self) -> Result<Self> {
        let a_inv = self.body.try_inverse().ok_or(Error::NonUnit)?;
        let slope = self.slope.times(&a_inv).times(&a_inv).negated();
        Ok(Dual { body: a_inv, slope })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.times(&other.inv()?))
    }
}

impl<R: Ring> Ring for Dual<R> {
    fn zero_like(&self) -> Self {
        Dual {
            body: self.body.zero_like(),
            slope: self.body.zero_like(),
        }
    }
    fn one_like(&self) -> Self {
        Dual {
            body: self.body.one_like(),
            slope: self.body.zero_like(),
        }
    }
    fn is_zero(&self) -> bool {
        self.body.is_zero() && self.slope.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        Dual {
            body: self.body.plus(&other.body),
            slope: self.slope.plus(&other.slope),
        }
    }
    fn minus(&self, other: &Self) -> Self {
        Dual {
            body: self.body.minus(&other.body),
            slope: self.slope.minus(&other.slope),
        }
    }
    fn times(&self, other: &Self) -> Self {
        Dual {
            body: self.body.times(&other.body),
            slope: self
                .body
                .times(&other.slope)
                .plus(&self.slope.times(&other.body)),
        }
    }
    fn negated(&self) -> Self {
        Dual {
            body: self.body.negated(),
            slope: self.slope.negated(),
        }
    }
    fn int_image(&self, n: i64) -> Self {
        Dual::constant(self.body.int_image(n))
    }
}

impl<R: fmt::Display> fmt::Display for Dual<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ε({})", self.body, self.slope)
    }
}

impl<R: fmt::Debug> fmt::Debug for Dual<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) + ε({:?})", self.body, self.slope)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn product_example() {
        let f5 = Field::prime(5).unwrap();
        let a = Dual::new(f5.one(), f5.from_u64(2));
        let b = Dual::new(f5.one(), f5.from_u64(3));
        assert_eq!(a.times(&b), Dual::new(f5.one(), f5.zero()));
    }

    #[test]
    fn epsilon_squares_to_zero() {
        let f7 = Field::prime(7).unwrap();
        let e = Dual::infinitesimal(f7.one());
        assert!(e.times(&e).is_zero());
        assert!(!e.is_unit());
        assert_eq!(e.inv(), Err(Error::NonUnit));
        assert!(e.frobenius().is_err());
    }

    #[test]
    fn units_and_inverse_formula() {
        let field = Field::extension_seeded(3, 2, 11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let x = Dual::new(field.random(&mut rng), field.random(&mut rng));
            let y = Dual::new(field.random(&mut rng), field.random(&mut rng));
            let z = Dual::new(field.random(&mut rng), field.random(&mut rng));
            assert_eq!(x.times(&y).times(&z), x.times(&y.times(&z)));
            assert_eq!(x.times(&y.plus(&z)), x.times(&y).plus(&x.times(&z)));
            assert_eq!(x.is_unit(), !x.body.is_zero());
            if x.is_unit() {
                let inv = x.inv().unwrap();
                assert_eq!(x.times(&inv), x.one_like());
                let a_inv = x.body.inv().unwrap();
                let expected = Dual::new(a_inv.clone(), -(&x.slope * &(&a_inv * &a_inv)));
                assert_eq!(inv, expected);
            }
        }
    }
}
