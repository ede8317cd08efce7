use std::fmt;

use super::curve::Curve;
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::exactnum::{FieldLike, FieldValue, Ring};

/// Element (A(x) + B(x)·y) / D(x) of the function field F_q(x)[y]/(y² − f).
///
/// Normal form: D monic, gcd(A, B, D) = 1, and zero is (0 + 0·y)/1.
#[derive(Clone, PartialEq, Eq)]
pub struct FfElem {
    curve: Curve,
    a: Poly,
    b: Poly,
    d: Poly,
}

impl FfElem {
    pub fn from_poly(curve: &Curve, a: Poly) -> FfElem {
        let field = curve.field();
        FfElem {
            curve: curve.clone(),
            a,
            b: Poly::zero(field),
            d: Poly::one(field),
        }
    }

    /// Builds (a + b·y)/d in normal form.
    pub fn from_parts(curve: &Curve, a: Poly, b: Poly, d: Poly) -> Result<FfElem> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(curve, a, b, d))
    }

    fn normalize(curve: &Curve, a: Poly, b: Poly, d: Poly) -> FfElem {
        let field = curve.field();
        if a.is_zero() && b.is_zero() {
            return FfElem {
                curve: curve.clone(),
                a,
                b,
                d: Poly::one(field),
            };
        }
        let (a, b, d) = if d.is_constant() {
            (a, b, d)
        } else {
            let g = a.gcd(&b).gcd(&d);
            if g.is_one() {
                (a, b, d)
            } else {
                (a.div_exact(&g), b.div_exact(&g), d.div_exact(&g))
            }
        };
        let (d, lead) = d.monic_with_lead();
        let (a, b) = if lead.is_one() {
            (a, b)
        } else {
            let inv = lead.inv().expect("nonzero lead");
            (a.scale(&inv), b.scale(&inv))
        };
        FfElem {
            curve: curve.clone(),
            a,
            b,
            d,
        }
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    /// Numerator part A.
    pub fn a(&self) -> &Poly {
        &self.a
    }

    /// Numerator part B (coefficient of y).
    pub fn b(&self) -> &Poly {
        &self.b
    }

    /// Monic denominator D.
    pub fn d(&self) -> &Poly {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.d.is_one()
    }

    /// True when the element lies in the constant field.
    pub fn as_constant(&self) -> Option<FieldValue> {
        if self.b.is_zero() && self.a.is_constant() && self.d.is_one() {
            Some(self.a.coeff(0))
        } else {
            None
        }
    }

    /// Largest degree among A, B, D.
    pub fn max_degree(&self) -> usize {
        self.a
            .degree_or_zero()
            .max(self.b.degree_or_zero())
            .max(self.d.degree_or_zero())
    }

    pub(crate) fn check_cap(&self) -> Result<()> {
        self.curve.check_cap(self.max_degree())
    }

    fn same_curve(&self, other: &FfElem) {
        assert!(self.curve == other.curve, "elements over different curves");
    }

    pub fn add(&self, other: &FfElem) -> FfElem {
        self.same_curve(other);
        if self.d == other.d {
            return Self::normalize(
                &self.curve,
                &self.a + &other.a,
                &self.b + &other.b,
                self.d.clone(),
            );
        }
        let l = self.d.lcm(&other.d);
        let s = l.div_exact(&self.d);
        let t = l.div_exact(&other.d);
        Self::normalize(
            &self.curve,
            &(&self.a * &s) + &(&other.a * &t),
            &(&self.b * &s) + &(&other.b * &t),
            l,
        )
    }

    pub fn neg(&self) -> FfElem {
        FfElem {
            curve: self.curve.clone(),
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    pub fn sub(&self, other: &FfElem) -> FfElem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FfElem) -> FfElem {
        self.same_curve(other);
        if self.is_zero() || other.is_zero() {
            return self.curve.zero();
        }
        let f = self.curve.f();
        let a = &(&self.a * &other.a) + &(&(&self.b * &other.b) * f);
        let b = &(&self.a * &other.b) + &(&self.b * &other.a);
        Self::normalize(&self.curve, a, b, &self.d * &other.d)
    }

    pub fn scale(&self, c: &FieldValue) -> FfElem {
        if c.is_zero() {
            return self.curve.zero();
        }
        FfElem {
            curve: self.curve.clone(),
            a: self.a.scale(c),
            b: self.b.scale(c),
            d: self.d.clone(),
        }
    }

    /// (A + By)⁻¹ = (A − By)·D / (A² − B²f).
    pub fn inverse(&self) -> Result<FfElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let norm = &(&self.a * &self.a) - &(&(&self.b * &self.b) * self.curve.f());
        Ok(Self::normalize(
            &self.curve,
            &self.a * &self.d,
            -&(&self.b * &self.d),
            norm,
        ))
    }

    pub fn div(&self, other: &FfElem) -> Result<FfElem> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, exp: u64) -> FfElem {
        Ring::power(self, exp)
    }

    /// Derivative with respect to x, using 2y·y' = f'.
    ///
    /// For u = (A + By)/D:
    /// u' = (2f(A'D − AD') + (2f(B'D − BD') + DBf')·y) / (2fD²).
    pub fn d_dx(&self) -> FfElem {
        if self.is_zero() {
            return self.curve.zero();
        }
        let field = self.curve.field();
        let two = Poly::constant(field.from_u64(2));
        let f = self.curve.f();
        let fp = self.curve.f_prime();
        if self.d.is_one() {
            // Fast path: no quotient rule needed.
            let a_part = self.a.derivative();
            if self.b.is_zero() {
                return FfElem::from_poly(&self.curve, a_part);
            }
            let two_f = &two * f;
            let a = &two_f * &a_part;
            let b = &(&two_f * &self.b.derivative()) + &(&self.b * fp);
            return Self::normalize(&self.curve, a, b, two_f);
        }
        let dd = self.d.derivative();
        let two_f = &two * f;
        let a = &two_f * &(&(&self.a.derivative() * &self.d) - &(&self.a * &dd));
        let b = &(&two_f * &(&(&self.b.derivative() * &self.d) - &(&self.b * &dd)))
            + &(&(&self.d * &self.b) * fp);
        let den = &two_f * &(&self.d * &self.d);
        Self::normalize(&self.curve, a, b, den)
    }

    /// The hyperelliptic involution y ↦ −y.
    pub fn involution(&self) -> FfElem {
        FfElem {
            curve: self.curve.clone(),
            a: self.a.clone(),
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    /// Random element with numerator parts of degree <= `max_degree` and a nonzero
    /// denominator of degree <= `max_degree / 2`.
    pub fn random<R: rand::Rng + ?Sized>(curve: &Curve, rng: &mut R, max_degree: usize) -> FfElem {
        let field = curve.field();
        let rand_poly = |rng: &mut R, deg: usize| {
            Poly::new(field, (0..=deg).map(|_| field.random(rng)).collect())
        };
        let a = rand_poly(rng, max_degree);
        let b = rand_poly(rng, max_degree);
        let d = loop {
            let d = rand_poly(rng, max_degree / 2);
            if !d.is_zero() {
                break d;
            }
        };
        Self::normalize(curve, a, b, d)
    }

    /// Evaluates the rational function at a point (x0, y0) of the affine curve.
    pub fn eval_at(&self, x0: &FieldValue, y0: &FieldValue) -> Result<FieldValue> {
        let den = self.d.eval(x0);
        let num = &self.a.eval(x0) + &(&self.b.eval(x0) * y0);
        num.div(&den).map_err(|_| Error::DivisionByZero)
    }
}

impl Ring for FfElem {
    fn zero_like(&self) -> Self {
        self.curve.zero()
    }
    fn one_like(&self) -> Self {
        self.curve.one()
    }
    fn is_zero(&self) -> bool {
        FfElem::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        FfElem::sub(self, other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn int_image(&self, n: i64) -> Self {
        self.curve.constant(self.curve.field().from_i64(n))
    }
}

impl FieldLike for FfElem {
    fn try_inverse(&self) -> Option<Self> {
        self.inverse().ok()
    }
}

impl fmt::Display for FfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => return write!(f, "0"),
            (false, true) => format!("{}", self.a),
            (true, false) => format!("({})y", self.b),
            (false, false) => format!("{} + ({})y", self.a, self.b),
        };
        if self.d.is_one() {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/({})", self.d)
        }
    }
}

impl serde::Serialize for FfElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Debug for FfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
