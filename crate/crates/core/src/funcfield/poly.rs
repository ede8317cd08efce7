use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::exactnum::{Field, FieldValue};

/// Dense univariate polynomial over a finite field, lowest degree first, with no
/// trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldValue>,
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldValue>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_u64s(field: &Field, coeffs: &[u64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_u64(c)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: FieldValue) -> Poly {
        let field = c.field().clone();
        Poly::new(&field, vec![c])
    }

    /// The indeterminate x.
    pub fn x(field: &Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    /// `c·x^n`.
    pub fn monomial(c: FieldValue, n: usize) -> Poly {
        let field = c.field().clone();
        let mut coeffs = vec![field.zero(); n];
        coeffs.push(c);
        Poly::new(&field, coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldValue] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldValue {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&FieldValue> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn scale(&self, c: &FieldValue) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.field);
        }
        Poly::new(&self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by the leading coefficient; returns the polynomial and that coefficient.
    pub fn monic_with_lead(&self) -> (Poly, FieldValue) {
        match self.leading() {
            None => (self.clone(), self.field.zero()),
            Some(lead) if lead.is_one() => (self.clone(), lead.clone()),
            Some(lead) => {
                let inv = lead.inv().expect("nonzero leading coefficient");
                (self.scale(&inv), lead.clone())
            }
        }
    }

    pub fn monic(&self) -> Poly {
        self.monic_with_lead().0
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(&self.field);
        }
        Poly::new(
            &self.field,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale_int(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, at: &FieldValue) -> FieldValue {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * at) + c)
    }

    pub fn pow(&self, mut exp: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let db = divisor.degree().expect("polynomial division by zero");
        if self.coeffs.len() <= db {
            return (Poly::zero(&self.field), self.clone());
        }
        let lead_inv = divisor.coeffs[db]
            .inv()
            .expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); rem.len() - db];
        for shift in (0..quot.len()).rev() {
            let top = &rem[shift + db];
            if top.is_zero() {
                continue;
            }
            let c = top * &lead_inv;
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] = &rem[shift + j] - &(&c * b);
            }
            quot[shift] = c;
        }
        rem.truncate(db);
        (Poly::new(&self.field, quot), Poly::new(&self.field, rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let g = self.gcd(other);
        (&self.div_exact(&g) * other).monic()
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            &self.field,
            (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            &self.field,
            (0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect(),
        )
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(&self.field, out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let simple = c.as_prime().is_some();
            let cs = if simple {
                c.to_string()
            } else {
                format!("({c})")
            };
            match i {
                0 => write!(f, "{cs}")?,
                1 if c.is_one() => write!(f, "x")?,
                1 => write!(f, "{cs}x")?,
                _ if c.is_one() => write!(f, "x^{i}")?,
                _ => write!(f, "{cs}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
