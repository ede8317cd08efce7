//! Ordinarity via the Cartier–Manin matrix, torsion forms (the kernel of Verschiebung
//! seen as flat global forms) and the canonical split connection.

mod torsion;

pub use torsion::{
    enumerate_p_torsion, geometric_torsion, GeometricTorsion, TorsionMethod, TorsionSet,
    TorsionSystem, BRUTE_FIELD_LIMIT,
};

use crate::error::{Error, Result};
use crate::exactnum::FieldValue;
use crate::funcfield::{dual_derivation, pair, Curve, Differential, Poly};
use crate::pcurvature::{p_curvature_rank1, ConnectionMatrix, Matrix};

/// A[i][j] = coefficient of x^{ip−j} in f^{(p−1)/2}, for i, j ∈ {1, 2}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CartierManin {
    pub entries: [[FieldValue; 2]; 2],
}

impl CartierManin {
    pub fn det(&self) -> FieldValue {
        let e = &self.entries;
        &(&e[0][0] * &e[1][1]) - &(&e[0][1] * &e[1][0])
    }
}

/// Cartier–Manin matrix of y² = f; `f` is not validated.
pub fn cartier_manin_of(f: &Poly) -> CartierManin {
    let p = f.field().characteristic() as usize;
    let h = f.pow((p as u64 - 1) / 2);
    let entry = |i: usize, j: usize| h.coeff(i * p - j);
    CartierManin {
        entries: [[entry(1, 1), entry(1, 2)], [entry(2, 1), entry(2, 2)]],
    }
}

pub fn cartier_manin(curve: &Curve) -> CartierManin {
    cartier_manin_of(curve.f())
}

pub fn is_ordinary(curve: &Curve) -> bool {
    !cartier_manin(curve).det().is_zero()
}

/// Which form trivializes the canonical bundle in a [`CanonicalConnection`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    /// The torsion form ω_L itself: the matrix is diag(0, 1).
    TorsionForm,
    /// dx/y: the matrix is diag(0, ⟨ω_L, θ₀⟩).
    Omega0,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalConnection {
    pub connection: ConnectionMatrix<crate::funcfield::FfElem>,
    pub chart: Chart,
}

/// The split connection diag(d, d + ω_L) on O ⊕ O.
///
/// For ω_L = 0 the chart is always dx/y (ω_L cannot trivialize anything).
pub fn canonical_connection(omega_l: &Differential, chart: Chart) -> Result<CanonicalConnection> {
    let curve = omega_l.curve();
    let omega0 = curve.omega0();
    let theta0 = dual_derivation(&omega0)?;
    let t_l = pair(omega_l, &theta0);
    if !p_curvature_rank1(&t_l, &theta0, &omega0)?.is_zero() {
        return Err(Error::NotFlat);
    }
    let z = curve.zero();
    let (corner, chart_form, chart) = if omega_l.is_zero() || chart == Chart::Omega0 {
        (t_l, omega0, Chart::Omega0)
    } else {
        (curve.one(), omega_l.clone(), Chart::TorsionForm)
    };
    let m = Matrix::new(vec![vec![z.clone(), z.clone()], vec![z, corner]])?;
    Ok(CanonicalConnection {
        connection: ConnectionMatrix::new(m, chart_form)?,
        chart,
    })
}
