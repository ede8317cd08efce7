use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::{Field, FieldValue};
use crate::funcfield::{dual_derivation, pair, Curve, Differential, FfElem};
use crate::linalg;
use crate::pcurvature::{frobenius_pairing, p_curvature_rank1_with};

/// Largest field order accepted by the brute-force scan (|field|² candidates).
pub const BRUTE_FIELD_LIMIT: u128 = 1 << 14;

/// Seed for the moduli of the splitting extensions used by [`geometric_torsion`].
const SPLITTING_FIELD_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TorsionMethod {
    Brute,
    Semilinear,
}

impl FromStr for TorsionMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(TorsionMethod::Brute),
            "semilinear" => Ok(TorsionMethod::Semilinear),
            other => Err(Error::Range(format!("unknown torsion method {other:?}"))),
        }
    }
}

impl fmt::Display for TorsionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorsionMethod::Brute => "brute",
            TorsionMethod::Semilinear => "semilinear",
        })
    }
}

/// Global forms (a + b·x)·dx/y such that d + ω has vanishing p-curvature, stored as
/// sorted (a, b) pairs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorsionSet {
    field: Field,
    forms: Vec<(FieldValue, FieldValue)>,
}

impl TorsionSet {
    fn from_forms(field: &Field, mut forms: Vec<(FieldValue, FieldValue)>) -> TorsionSet {
        forms.sort();
        forms.dedup();
        TorsionSet {
            field: field.clone(),
            forms,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn forms(&self) -> &[(FieldValue, FieldValue)] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn contains(&self, a: &FieldValue, b: &FieldValue) -> bool {
        self.forms.binary_search(&(a.clone(), b.clone())).is_ok()
    }

    /// log_p of the size, when the size is a power of p.
    pub fn dimension(&self) -> Option<usize> {
        let p = self.field.characteristic() as usize;
        let (mut n, mut d) = (self.forms.len(), 0);
        if n == 0 {
            return None;
        }
        while n % p == 0 {
            n /= p;
            d += 1;
        }
        (n == 1).then_some(d)
    }

    /// Closed under addition and F_p-scaling, and contains zero.
    pub fn is_subspace(&self) -> bool {
        let set: HashSet<&(FieldValue, FieldValue)> = self.forms.iter().collect();
        let zero = (self.field.zero(), self.field.zero());
        if !set.contains(&zero) {
            return false;
        }
        let p = self.field.characteristic() as i64;
        for (a, b) in &self.forms {
            for s in 2..p {
                if !set.contains(&(a.scale_int(s), b.scale_int(s))) {
                    return false;
                }
            }
            for (c, d) in &self.forms {
                if !set.contains(&(a + c, b + d)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn nonzero_forms(&self, curve: &Curve) -> Vec<Differential> {
        self.forms
            .iter()
            .filter(|(a, b)| !(a.is_zero() && b.is_zero()))
            .map(|(a, b)| curve.global_form(a, b))
            .collect()
    }
}

/// All (a, b) with ψ(d + (a + b·x)·dx/y) = 0 in the chart (ω₀ = dx/y, θ₀).
pub fn enumerate_p_torsion(curve: &Curve, method: TorsionMethod) -> Result<TorsionSet> {
    match method {
        TorsionMethod::Brute => brute(curve),
        TorsionMethod::Semilinear => TorsionSystem::new(curve)?.solutions_over(curve.field()),
    }
}

fn brute(curve: &Curve) -> Result<TorsionSet> {
    let field = curve.field();
    let size = match field.order() {
        Some(n) if n <= BRUTE_FIELD_LIMIT => n,
        other => {
            return Err(Error::FieldTooLargeForBrute {
                size: other.unwrap_or(u128::MAX),
                limit: BRUTE_FIELD_LIMIT,
            })
        }
    };
    let omega0 = curve.omega0();
    let theta0 = dual_derivation(&omega0)?;
    let c = frobenius_pairing(&omega0, &theta0)?;
    let per_a: Vec<Vec<(FieldValue, FieldValue)>> = (0..size)
        .into_par_iter()
        .map(|i| {
            let a = field.element(i);
            let mut found = Vec::new();
            for j in 0..size {
                let b = field.element(j);
                let t = pair(&curve.global_form(&a, &b), &theta0);
                if p_curvature_rank1_with(&t, &theta0, &c)?.is_zero() {
                    found.push((a.clone(), b));
                }
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    Ok(TorsionSet::from_forms(
        field,
        per_a.into_iter().flatten().collect(),
    ))
}

/// The torsion condition as an F_p-semilinear system.
///
/// For T = a + b·x with a, b constants, ψ = a^p·1 + b^p·x^p + a·(−c) + b·(θ₀^{p−1}(x) − c·x)
/// with c = θ₀^p(ω₀). Splitting into coordinates over the constants gives equations
/// α·a^p + β·b^p + γ·a + δ·b = 0, stored row-reduced as (α, β, γ, δ).
#[derive(Clone, Debug)]
pub struct TorsionSystem {
    field: Field,
    equations: Vec<Vec<FieldValue>>,
}

impl TorsionSystem {
    pub fn new(curve: &Curve) -> Result<TorsionSystem> {
        let omega0 = curve.omega0();
        let theta0 = dual_derivation(&omega0)?;
        let c = frobenius_pairing(&omega0, &theta0)?;
        let p = curve.characteristic();
        let x = curve.x();
        let parts: [FfElem; 4] = [
            curve.one(),
            x.pow(p),
            c.neg(),
            theta0.iterate(&x, p - 1)?.sub(&c.mul(&x)),
        ];
        let mut equations = linalg::coordinate_rows(&parts);
        linalg::rref(&mut equations, 4);
        Ok(TorsionSystem {
            field: curve.field().clone(),
            equations,
        })
    }

    pub fn equations(&self) -> &[Vec<FieldValue>] {
        &self.equations
    }

    fn embed(&self, v: &FieldValue, target: &Field) -> FieldValue {
        if target == &self.field {
            v.clone()
        } else {
            target.from_u64(v.as_prime().expect("prime-field coefficient"))
        }
    }

    /// F_p-basis of the solutions over `target`, as coordinate vectors (a-part, b-part)
    /// in the power basis of `target`.
    fn kernel_over(&self, target: &Field) -> Result<Vec<Vec<u64>>> {
        if target != &self.field
            && !(self.field.is_prime_field()
                && target.characteristic() == self.field.characteristic())
        {
            return Err(Error::Mismatch);
        }
        let p = target.characteristic();
        let k = target.degree();
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(self.equations.len() * k);
        for eq in &self.equations {
            let [al, be, ga, de] = [0, 1, 2, 3].map(|i| self.embed(&eq[i], target));
            let ma = linalg::fp_matrix_of(target, |v| &(&al * &v.frobenius()) + &(&ga * v));
            let mb = linalg::fp_matrix_of(target, |v| &(&be * &v.frobenius()) + &(&de * v));
            for i in 0..k {
                rows.push(ma[i].iter().chain(&mb[i]).copied().collect());
            }
        }
        Ok(linalg::kernel_mod_p(rows, 2 * k, p))
    }

    /// F_p-dimension of the solution space over `target`.
    pub fn dimension_over(&self, target: &Field) -> Result<usize> {
        Ok(self.kernel_over(target)?.len())
    }

    pub fn solutions_over(&self, target: &Field) -> Result<TorsionSet> {
        let basis = self.kernel_over(target)?;
        let p = target.characteristic();
        let k = target.degree();
        let total = (p as u128)
            .checked_pow(basis.len() as u32)
            .filter(|&n| n <= 1 << 24)
            .ok_or(Error::FieldTooLargeForBrute {
                size: u128::MAX,
                limit: 1 << 24,
            })?;
        let mut forms = Vec::with_capacity(total as usize);
        for mut idx in 0..total {
            let mut acc = vec![0u64; 2 * k];
            for vec in &basis {
                let s = (idx % p as u128) as u64;
                idx /= p as u128;
                for (slot, v) in acc.iter_mut().zip(vec) {
                    *slot = (*slot + s * v) % p;
                }
            }
            forms.push((target.from_coeffs(&acc[..k]), target.from_coeffs(&acc[k..])));
        }
        Ok(TorsionSet::from_forms(target, forms))
    }
}

/// Torsion forms over an algebraic closure, for a curve over F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GeometricTorsion {
    /// F_p-dimension of the space of torsion forms over F̄_p.
    pub dimension: usize,
    /// Degree of the extension of F_p over which that dimension is reached.
    pub extension_degree: usize,
}

impl GeometricTorsion {
    pub fn count(&self, p: u64) -> u128 {
        (p as u128).pow(self.dimension as u32)
    }
}

/// Counts torsion forms over F̄_p by solving over two splitting extensions.
///
/// Frobenius acts on the (at most 2-dimensional) F_p-space of torsion forms through an
/// element of GL₂(F_p); every such element has order dividing p² − 1 or p(p − 1), so all
/// forms are defined over F_{p^m} for one of those m.
pub fn geometric_torsion(curve: &Curve) -> Result<GeometricTorsion> {
    if !curve.field().is_prime_field() {
        return Err(Error::UnsupportedRing(
            "geometric torsion count needs a curve over a prime field",
        ));
    }
    let p = curve.characteristic() as usize;
    let system = TorsionSystem::new(curve)?;
    let mut best = GeometricTorsion {
        dimension: system.dimension_over(curve.field())?,
        extension_degree: 1,
    };
    for m in [p * p - 1, p * (p - 1)] {
        let ext = splitting_field(p as u64, m)?;
        let dim = system.dimension_over(&ext)?;
        if dim > best.dimension {
            best = GeometricTorsion {
                dimension: dim,
                extension_degree: m,
            };
        }
    }
    Ok(best)
}

/// Seeded extension fields are deterministic, so they are built once per (p, m).
fn splitting_field(p: u64, m: usize) -> Result<Field> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Field>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.lock().expect("cache lock").get(&(p, m)) {
        return Ok(f.clone());
    }
    let field = Field::extension_seeded(p, m, SPLITTING_FIELD_SEED)?;
    cache
        .lock()
        .expect("cache lock")
        .insert((p, m), field.clone());
    Ok(field)
}
