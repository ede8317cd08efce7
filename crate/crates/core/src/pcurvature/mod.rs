//! p-curvature of connections ∇ = d + T·ω₀ on a trivial bundle, computed in the chart
//! given by a form ω₀ and its dual derivation θ₀.
//!
//! ψ is returned as a bare matrix over the coefficient ring; the twist by ω₀^{⊗p} is
//! implicit. All identities are chart-level: they are checked on the affine open set
//! where ω₀ trivializes the canonical bundle.

mod coeff;
mod matrix;

pub use coeff::DiffCoeff;
pub use matrix::Matrix;

use crate::error::{Error, Result};
use crate::exactnum::Ring;
use crate::funcfield::{dual_derivation, pair, Derivation, Differential, FfElem};

/// The connection d + T·ω₀ in the trivialization ∇(f⊗e) = T(e)⊗ω₀ + e⊗df.
#[derive(Clone, PartialEq, Debug)]
pub struct ConnectionMatrix<R> {
    matrix: Matrix<R>,
    chart: Differential,
}

impl<R: DiffCoeff> ConnectionMatrix<R> {
    pub fn new(matrix: Matrix<R>, chart: Differential) -> Result<Self> {
        if chart.is_zero() {
            return Err(Error::ZeroDifferential);
        }
        Ok(ConnectionMatrix { matrix, chart })
    }

    pub fn matrix(&self) -> &Matrix<R> {
        &self.matrix
    }

    pub fn chart(&self) -> &Differential {
        &self.chart
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// The matrix of the determinant connection.
    pub fn trace(&self) -> R {
        self.matrix.trace()
    }
}

/// ψ(θ₀) as an r×r matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct PCurvature<R> {
    pub matrix: Matrix<R>,
}

impl<R: Ring> PCurvature<R> {
    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

/// Coefficients of (T + θ₀)^n = Σ_k T_k^(n) θ₀^k for a fixed n.
#[derive(Clone, PartialEq, Debug)]
pub struct CoefficientTable<R> {
    pub n: usize,
    /// entries[k] = T_k^(n), k = 0..=n.
    pub entries: Vec<Matrix<R>>,
}

impl<R> CoefficientTable<R> {
    pub fn get(&self, k: usize) -> &Matrix<R> {
        &self.entries[k]
    }
}

fn ensure_dual(omega0: &Differential, theta0: &Derivation) -> Result<()> {
    if omega0.curve() != theta0.curve() || !pair(omega0, theta0).is_one() {
        return Err(Error::ChartMismatch);
    }
    Ok(())
}

/// θ₀^p(ω₀) = ⟨ω₀, θ₀^p⟩.
pub fn frobenius_pairing(omega0: &Differential, theta0: &Derivation) -> Result<FfElem> {
    Ok(pair(omega0, &theta0.p_power()?))
}

/// Line-bundle case: ψ = T^p + θ₀^{p−1}(T) − θ₀^p(ω₀)·T.
pub fn p_curvature_rank1<R: DiffCoeff>(
    t: &R,
    theta0: &Derivation,
    omega0: &Differential,
) -> Result<R> {
    ensure_dual(omega0, theta0)?;
    let c = frobenius_pairing(omega0, theta0)?;
    p_curvature_rank1_with(t, theta0, &c)
}

/// As [`p_curvature_rank1`] with θ₀^p(ω₀) = `c` already known.
pub fn p_curvature_rank1_with<R: DiffCoeff>(t: &R, theta0: &Derivation, c: &FfElem) -> Result<R> {
    let p = theta0.curve().characteristic();
    let mut iter = t.clone();
    for _ in 0..p - 1 {
        iter = iter.derive(theta0);
        iter.check_cap()?;
    }
    let out = t.power(p).plus(&iter).minus(&t.mul_function(c));
    out.check_cap()?;
    Ok(out)
}

/// ψ = T_0^(p) − θ₀^p(ω₀)·T with T_0^(1) = T and T_0^(n+1) = T·T_0^(n) + θ₀(T_0^(n)).
pub fn p_curvature_matrix<R: DiffCoeff>(
    conn: &ConnectionMatrix<R>,
    theta0: &Derivation,
) -> Result<PCurvature<R>> {
    ensure_dual(&conn.chart, theta0)?;
    let c = frobenius_pairing(&conn.chart, theta0)?;
    p_curvature_matrix_with(conn.matrix(), theta0, &c)
}

/// As [`p_curvature_matrix`] with θ₀^p(ω₀) = `c` already known.
pub fn p_curvature_matrix_with<R: DiffCoeff>(
    t: &Matrix<R>,
    theta0: &Derivation,
    c: &FfElem,
) -> Result<PCurvature<R>> {
    let p = theta0.curve().characteristic();
    let mut t0 = t.clone();
    for _ in 1..p {
        t0 = t.mul(&t0).add(&t0.map(|a| a.derive(theta0)));
        for a in t0.rows().iter().flatten() {
            a.check_cap()?;
        }
    }
    Ok(PCurvature {
        matrix: t0.sub(&t.map(|a| a.mul_function(c))),
    })
}

/// The table T_0^(n), …, T_n^(n) via T_k^(n+1) = T·T_k^(n) + θ₀(T_k^(n)) + T_{k−1}^(n).
pub fn coefficient_table<R: DiffCoeff>(
    conn: &ConnectionMatrix<R>,
    theta0: &Derivation,
    n: usize,
) -> Result<CoefficientTable<R>> {
    ensure_dual(&conn.chart, theta0)?;
    let p = theta0.curve().characteristic();
    if n == 0 || n as u64 > p {
        return Err(Error::Range(format!(
            "table index n = {n} must lie in 1..={p}"
        )));
    }
    let t = conn.matrix();
    let sample = t.get(0, 0);
    let id = Matrix::identity_like(sample, t.rank());
    let mut entries = vec![t.clone(), id.clone()];
    for _ in 1..n {
        let mut next = Vec::with_capacity(entries.len() + 1);
        for k in 0..=entries.len() {
            let mut m = if k < entries.len() {
                let cur = &entries[k];
                t.mul(cur).add(&cur.map(|a| a.derive(theta0)))
            } else {
                Matrix::zero_like(sample, t.rank())
            };
            if k > 0 {
                m = m.add(&entries[k - 1]);
            }
            for a in m.rows().iter().flatten() {
                a.check_cap()?;
            }
            next.push(m);
        }
        entries = next;
    }
    Ok(CoefficientTable { n, entries })
}

/// Second fundamental form of the line K·v inside a rank-2 connection.
///
/// With w = θ₀(v) + T·v, returns β in w = α·v + β·e where e is the first standard basis
/// vector not proportional to v. Zero exactly when K·v is preserved by ∇.
pub fn second_fundamental_form(
    conn: &ConnectionMatrix<FfElem>,
    v: (&FfElem, &FfElem),
) -> Result<FfElem> {
    if conn.rank() != 2 {
        return Err(Error::Mismatch);
    }
    let (v1, v2) = v;
    if v1.is_zero() && v2.is_zero() {
        return Err(Error::ZeroVector);
    }
    let theta0 = dual_derivation(conn.chart())?;
    let t = conn.matrix();
    let w1 = theta0
        .apply(v1)
        .add(&t.get(0, 0).mul(v1))
        .add(&t.get(0, 1).mul(v2));
    let w2 = theta0
        .apply(v2)
        .add(&t.get(1, 0).mul(v1))
        .add(&t.get(1, 1).mul(v2));
    if v2.is_zero() {
        // complement e₂
        Ok(w2)
    } else {
        // complement e₁
        let alpha = w2.div(v2)?;
        Ok(w1.sub(&alpha.mul(v1)))
    }
}

#[cfg(test)]
mod tests;
