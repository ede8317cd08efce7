use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;

use super::fp_poly;
use super::ring::{FieldLike, Ring};
use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq, Hash)]
struct FieldSpec {
    p: u64,
    /// Monic defining polynomial, lowest coefficient first; `None` for F_p.
    modulus: Option<Vec<u64>>,
}

/// A finite field F_p or F_p[t]/(m(t)). Cheap to clone.
#[derive(Clone, Debug)]
pub struct Field(Arc<FieldSpec>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl Field {
    /// The prime field F_p for an odd prime p below 2^61.
    pub fn prime(p: u64) -> Result<Field> {
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if p >= 1 << 61 || !fp_poly::is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(Field(Arc::new(FieldSpec { p, modulus: None })))
    }

    /// F_p[t]/(modulus); the modulus is given lowest coefficient first and must be
    /// monic and irreducible.
    pub fn extension(p: u64, modulus: &[u64]) -> Result<Field> {
        Field::prime(p)?;
        let mut m: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        fp_poly::trim(&mut m);
        if m.len() < 2 || *m.last().unwrap() != 1 {
            return Err(Error::BadModulus);
        }
        if !fp_poly::is_irreducible(&m, p) {
            return Err(Error::NotIrreducible(p));
        }
        if m.len() == 2 {
            return Field::prime(p);
        }
        Ok(Field(Arc::new(FieldSpec {
            p,
            modulus: Some(m),
        })))
    }

    /// F_{p^k} with a modulus found by seeded random search. `k = 1` gives F_p.
    pub fn extension_seeded(p: u64, k: usize, seed: u64) -> Result<Field> {
        Field::prime(p)?;
        if k == 0 {
            return Err(Error::Range("extension degree must be >= 1".into()));
        }
        if k == 1 {
            return Field::prime(p);
        }
        let m = fp_poly::random_irreducible(p, k, seed);
        Ok(Field(Arc::new(FieldSpec {
            p,
            modulus: Some(m),
        })))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.modulus.as_ref().map_or(1, |m| m.len() - 1)
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        self.0.modulus.as_deref()
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.modulus.is_none()
    }

    /// Field size as u128, or `None` when p^k overflows.
    pub fn order(&self) -> Option<u128> {
        (self.0.p as u128).checked_pow(self.degree() as u32)
    }

    pub fn zero(&self) -> FieldValue {
        self.from_u64(0)
    }

    pub fn one(&self) -> FieldValue {
        self.from_u64(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_i64(&self, n: i64) -> FieldValue {
        let p = self.0.p as i128;
        self.from_u64((n as i128).rem_euclid(p) as u64)
    }

    pub fn from_u64(&self, n: u64) -> FieldValue {
        let c = n % self.0.p;
        FieldValue {
            field: self.clone(),
            coeffs: if c == 0 { Vec::new() } else { vec![c] },
        }
    }

    /// Element from coefficients in the power basis 1, t, t^2, ...
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldValue {
        let p = self.0.p;
        let mut c: Vec<u64> = coeffs.iter().map(|x| x % p).collect();
        fp_poly::trim(&mut c);
        if let Some(m) = &self.0.modulus {
            c = fp_poly::rem(&c, m, p);
        }
        FieldValue {
            field: self.clone(),
            coeffs: c,
        }
    }

    /// The power-basis generator t (1 in a prime field).
    pub fn generator(&self) -> FieldValue {
        if self.is_prime_field() {
            self.one()
        } else {
            self.from_coeffs(&[0, 1])
        }
    }

    /// Element with index `i` in the enumeration order: base-p digits of `i` are the
    /// power-basis coefficients.
    pub fn element(&self, mut i: u128) -> FieldValue {
        let p = self.0.p as u128;
        let mut c = Vec::with_capacity(self.degree());
        for _ in 0..self.degree() {
            c.push((i % p) as u64);
            i /= p;
        }
        self.from_coeffs(&c)
    }

    /// All field elements in index order. Caller is responsible for the size.
    pub fn elements(&self) -> impl Iterator<Item = FieldValue> + '_ {
        let n = self.order().expect("field too large to enumerate");
        (0..n).map(move |i| self.element(i))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldValue {
        let c: Vec<u64> = (0..self.degree())
            .map(|_| rng.gen_range(0..self.0.p))
            .collect();
        self.from_coeffs(&c)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.modulus {
            None => write!(f, "F_{}", self.0.p),
            Some(m) => write!(f, "F_{}^{} (modulus {:?})", self.0.p, m.len() - 1, m),
        }
    }
}

/// An exact element of F_p or F_{p^k}, stored as reduced power-basis coefficients.
#[derive(Clone)]
pub struct FieldValue {
    field: Field,
    coeffs: Vec<u64>,
}

impl FieldValue {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Power-basis coefficients, padded to the field degree.
    pub fn coeffs(&self) -> Vec<u64> {
        let mut c = self.coeffs.clone();
        c.resize(self.field.degree(), 0);
        c
    }

    /// The residue when the element lies in the prime subfield.
    pub fn as_prime(&self) -> Option<u64> {
        match self.coeffs.len() {
            0 => Some(0),
            1 => Some(self.coeffs[0]),
            _ => None,
        }
    }

    pub fn index(&self) -> u128 {
        let p = self.field.characteristic() as u128;
        self.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * p + c as u128)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 1
    }

    fn check(&self, other: &Self) {
        assert!(
            self.field == other.field,
            "field mismatch: {} vs {}",
            self.field,
            other.field
        );
    }

    fn with(&self, coeffs: Vec<u64>) -> FieldValue {
        FieldValue {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.field.characteristic();
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c: Vec<u64> = (0..n)
            .map(|i| {
                fp_poly::add_mod(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                    p,
                )
            })
            .collect();
        fp_poly::trim(&mut c);
        self.with(c)
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.check(other);
        self.with(fp_poly::sub(
            &self.coeffs,
            &other.coeffs,
            self.field.characteristic(),
        ))
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.field.characteristic();
        if self.coeffs.len() <= 1 && other.coeffs.len() <= 1 {
            if self.coeffs.is_empty() || other.coeffs.is_empty() {
                return self.with(Vec::new());
            }
            return self.with(vec![fp_poly::mul_mod(self.coeffs[0], other.coeffs[0], p)]);
        }
        let prod = fp_poly::mul(&self.coeffs, &other.coeffs, p);
        match &self.field.0.modulus {
            Some(m) if prod.len() >= m.len() => self.with(fp_poly::rem(&prod, m, p)),
            _ => self.with(prod),
        }
    }

    pub fn neg_ref(&self) -> Self {
        let p = self.field.characteristic();
        self.with(
            self.coeffs
                .iter()
                .map(|&c| if c == 0 { 0 } else { p - c })
                .collect(),
        )
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.mul_ref(&self.field.from_i64(n))
    }

    pub fn inv(&self) -> Result<Self> {
        let p = self.field.characteristic();
        if self.is_zero() {
            return Err(Error::NonUnit);
        }
        match &self.field.0.modulus {
            None => Ok(self.with(vec![fp_poly::inv_mod(self.coeffs[0], p).unwrap()])),
            Some(m) => fp_poly::inv_rem(&self.coeffs, m, p)
                .map(|c| self.with(c))
                .ok_or(Error::NonUnit),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// The absolute Frobenius a -> a^p; the identity on F_p.
    pub fn frobenius(&self) -> Self {
        if self.field.is_prime_field() {
            return self.clone();
        }
        self.pow(self.field.characteristic())
    }
}

impl PartialEq for FieldValue {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field == other.field
    }
}
impl Eq for FieldValue {}

impl Hash for FieldValue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state)
    }
}

impl PartialOrd for FieldValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by enumeration index (most significant power-basis coefficient first).
impl Ord for FieldValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

/// Serialized as an integer in a prime field, else as power-basis coefficients.
impl serde::Serialize for FieldValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.field.is_prime_field() {
            s.serialize_u64(self.as_prime().unwrap_or(0))
        } else {
            self.coeffs().serialize(s)
        }
    }
}

impl serde::Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Field", 2)?;
        st.serialize_field("p", &self.characteristic())?;
        st.serialize_field("modulus", &self.modulus())?;
        st.end()
    }
}

impl fmt::Debug for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.as_prime() {
            return write!(f, "{c}");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{c}t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{c}t^{i}")?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&FieldValue> for &FieldValue {
            type Output = FieldValue;
            fn $m(self, rhs: &FieldValue) -> FieldValue {
                self.$imp(rhs)
            }
        }
        impl $tr<FieldValue> for FieldValue {
            type Output = FieldValue;
            fn $m(self, rhs: FieldValue) -> FieldValue {
                self.$imp(&rhs)
            }
        }
        impl $tr<&FieldValue> for FieldValue {
            type Output = FieldValue;
            fn $m(self, rhs: &FieldValue) -> FieldValue {
                self.$imp(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for &FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        self.neg_ref()
    }
}

impl Neg for FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        self.neg_ref()
    }
}

impl Ring for FieldValue {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn is_zero(&self) -> bool {
        FieldValue::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add_ref(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub_ref(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn negated(&self) -> Self {
        self.neg_ref()
    }
    fn int_image(&self, n: i64) -> Self {
        self.field.from_i64(n)
    }
    fn power(&self, exp: u64) -> Self {
        self.pow(exp)
    }
}

impl FieldLike for FieldValue {
    fn try_inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_field_examples() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.from_u64(3) * f5.from_u64(4), f5.from_u64(2));
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.one().div(&f7.from_u64(3)).unwrap(), f7.from_u64(5));
        assert_eq!(f7.zero().inv(), Err(Error::NonUnit));
    }

    #[test]
    fn bad_characteristics() {
        assert_eq!(Field::prime(2), Err(Error::EvenCharacteristic));
        assert_eq!(Field::prime(9), Err(Error::NotOddPrime(9)));
        assert_eq!(Field::prime(1), Err(Error::NotOddPrime(1)));
        assert_eq!(
            Field::extension(5, &[1, 0, 1]),
            Err(Error::NotIrreducible(5))
        );
        assert_eq!(Field::extension(3, &[1, 0, 2]), Err(Error::BadModulus));
    }

    /// Repeated-squaring oracle for a^p in F_9 = F_3[t]/(t^2+1).
    fn frobenius_oracle(a: &FieldValue) -> FieldValue {
        let sq = a * a;
        &sq * a
    }

    #[test]
    fn frobenius_examples() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.from_u64(3).frobenius(), f5.from_u64(3));
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.zero().frobenius(), f3.zero());

        let f9 = Field::extension(3, &[1, 0, 1]).unwrap();
        let t = f9.generator();
        assert_eq!(frobenius_oracle(&t), -t.clone());
        assert_eq!(t.frobenius(), -t.clone());
        for a in f9.elements() {
            assert_eq!(a.frobenius(), frobenius_oracle(&a));
        }
    }

    #[test]
    fn extension_inverse_and_order() {
        let f27 = Field::extension_seeded(3, 3, 7).unwrap();
        assert_eq!(f27.order(), Some(27));
        let mut seen = std::collections::HashSet::new();
        for a in f27.elements() {
            seen.insert(a.clone());
            if !a.is_zero() {
                assert!((&a * &a.inv().unwrap()).is_one());
                // a^(q-1) = 1
                assert!(a.pow(26).is_one());
            }
        }
        assert_eq!(seen.len(), 27);
    }

    #[test]
    fn element_index_roundtrip_and_order() {
        let f25 = Field::extension_seeded(5, 2, 1).unwrap();
        let all: Vec<FieldValue> = f25.elements().collect();
        for (i, a) in all.iter().enumerate() {
            assert_eq!(a.index(), i as u128);
        }
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    fn axioms_hold(field: &Field, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let a = field.random(&mut rng);
            let b = field.random(&mut rng);
            let c = field.random(&mut rng);
            assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            assert_eq!(&a * &b, &b * &a);
            assert_eq!(&(&a - &b) + &b, a);
            if !a.is_zero() {
                assert!((&a * &a.inv().unwrap()).is_one());
            }
            assert_eq!((&a + &b).frobenius(), &a.frobenius() + &b.frobenius());
            assert_eq!((&a * &b).frobenius(), &a.frobenius() * &b.frobenius());
        }
    }

    #[test]
    fn field_axioms_random_triples() {
        axioms_hold(&Field::prime(3).unwrap(), 1);
        axioms_hold(&Field::prime(31).unwrap(), 2);
        axioms_hold(&Field::prime((1 << 61) - 1).unwrap(), 3);
        axioms_hold(&Field::extension(3, &[1, 0, 1]).unwrap(), 4);
        axioms_hold(&Field::extension_seeded(7, 4, 5).unwrap(), 5);
    }
}
