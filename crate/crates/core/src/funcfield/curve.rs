use std::fmt;
use std::sync::Arc;

use super::poly::Poly;
use super::{Differential, FfElem};
use crate::error::{Error, Result};
use crate::exactnum::{Field, FieldValue};

#[derive(PartialEq, Eq, Hash)]
struct CurveSpec {
    field: Field,
    f: Poly,
    f_prime: Poly,
    degree_cap: usize,
}

/// Genus-2 curve y² = f(x) with deg f = 5 and f squarefree, over F_p or F_{p^k}.
///
/// Global regular differentials are the span of dx/y and x·dx/y.
#[derive(Clone)]
pub struct Curve(Arc<CurveSpec>);

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for Curve {}

/// Default polynomial degree cap for a given characteristic.
pub fn default_degree_cap(p: u64) -> usize {
    let p = p.min(1 << 20) as usize;
    (16 * p * p).max(256)
}

impl Curve {
    /// Validates `f` (coefficients c0..c5, lowest first) over `field`.
    pub fn new(field: &Field, f_coeffs: &[FieldValue]) -> Result<Curve> {
        if f_coeffs.iter().any(|c| c.field() != field) {
            return Err(Error::Mismatch);
        }
        let f = Poly::new(field, f_coeffs.to_vec());
        if f.degree() != Some(5) {
            return Err(Error::DegreeNotFive(f.degree()));
        }
        if !f.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        let f_prime = f.derivative();
        Ok(Curve(Arc::new(CurveSpec {
            field: field.clone(),
            f,
            f_prime,
            degree_cap: default_degree_cap(field.characteristic()),
        })))
    }

    /// Convenience constructor over F_p from integer coefficients c0..c5.
    pub fn over_prime(p: u64, f_coeffs: &[i64]) -> Result<Curve> {
        let field = Field::prime(p)?;
        let coeffs: Vec<FieldValue> = f_coeffs.iter().map(|&c| field.from_i64(c)).collect();
        Curve::new(&field, &coeffs)
    }

    /// The same curve with a different polynomial degree cap.
    pub fn with_degree_cap(&self, cap: usize) -> Curve {
        Curve(Arc::new(CurveSpec {
            field: self.0.field.clone(),
            f: self.0.f.clone(),
            f_prime: self.0.f_prime.clone(),
            degree_cap: cap,
        }))
    }

    /// Base change of a curve defined over the prime field to an extension of it.
    pub fn base_change(&self, target: &Field) -> Result<Curve> {
        if !self.0.field.is_prime_field()
            || target.characteristic() != self.0.field.characteristic()
        {
            return Err(Error::Mismatch);
        }
        let coeffs: Vec<FieldValue> = self
            .0
            .f
            .coeffs()
            .iter()
            .map(|c| target.from_u64(c.as_prime().unwrap()))
            .collect();
        let curve = Curve::new(target, &coeffs)?;
        Ok(curve.with_degree_cap(self.0.degree_cap))
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn characteristic(&self) -> u64 {
        self.0.field.characteristic()
    }

    pub fn f(&self) -> &Poly {
        &self.0.f
    }

    pub fn f_prime(&self) -> &Poly {
        &self.0.f_prime
    }

    pub fn degree_cap(&self) -> usize {
        self.0.degree_cap
    }

    pub fn genus(&self) -> usize {
        2
    }

    pub(crate) fn check_cap(&self, degree: usize) -> Result<()> {
        if degree > self.0.degree_cap {
            Err(Error::DegreeOverflow {
                degree,
                cap: self.0.degree_cap,
            })
        } else {
            Ok(())
        }
    }

    pub fn zero(&self) -> FfElem {
        FfElem::from_poly(self, Poly::zero(self.field()))
    }

    pub fn one(&self) -> FfElem {
        FfElem::from_poly(self, Poly::one(self.field()))
    }

    pub fn x(&self) -> FfElem {
        FfElem::from_poly(self, Poly::x(self.field()))
    }

    pub fn y(&self) -> FfElem {
        FfElem::from_parts(
            self,
            Poly::zero(self.field()),
            Poly::one(self.field()),
            Poly::one(self.field()),
        )
        .expect("unit denominator")
    }

    pub fn constant(&self, c: FieldValue) -> FfElem {
        FfElem::from_poly(self, Poly::constant(c))
    }

    /// Stable identifier: SHA-256 of (p, k, modulus, f), hex, truncated to 16 bytes.
    pub fn canonical_id(&self) -> String {
        use sha2::{Digest, Sha256};
        let field = self.field();
        let f: Vec<Vec<u64>> = self.0.f.coeffs().iter().map(|c| c.coeffs()).collect();
        let text = format!(
            "p={};k={};modulus={:?};f={:?}",
            field.characteristic(),
            field.degree(),
            field.modulus().unwrap_or(&[]),
            f
        );
        let digest = Sha256::digest(text.as_bytes());
        digest[..16].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// The global form (a + b·x)·dx/y.
    pub fn global_form(&self, a: &FieldValue, b: &FieldValue) -> Differential {
        let lin = Poly::new(self.field(), vec![a.clone(), b.clone()]);
        let coef = FfElem::from_poly(self, lin).mul(&self.y().inverse().expect("y is a unit"));
        Differential::new(coef)
    }

    /// The chart form dx/y.
    pub fn omega0(&self) -> Differential {
        self.global_form(&self.field().one(), &self.field().zero())
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = {} over {}", self.0.f, self.0.field)
    }
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
