//! Executable checks of the computational lemmas about split canonical connections:
//! the two-sums lemma, the closed forms of the off-diagonal p-curvature, and
//! infinitesimal rigidity of ∇^can over dual numbers.
//!
//! Results are reports, not assertions: the lemmas are stated for general curves, and a
//! special small-field curve may legitimately violate them.

mod lemmas;
mod rigidity;

pub use lemmas::{check_offdiag_closed_forms, check_two_sums, two_sums};
pub use rigidity::{
    deformation_p_curvature, rigidity_scan, RigidityMode, RigidityOutcome, RigiditySolutionSet,
    Triple,
};

use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::FieldValue;
use crate::funcfield::{dual_derivation, pair, Curve, Differential};
use crate::pcurvature::p_curvature_rank1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    /// Σ θ_L^k(x) and Σ C(p−1, k) θ_L^k(x) do not vanish.
    TwoSums,
    /// ψ of [[0, x], [0, 1]] and [[1, x], [0, 0]] equals the two sums off the diagonal.
    OffdiagClosedForms,
    /// The first-order deformations of ∇^can with ψ = 0 are the conjugate-trivial ones.
    Rigidity,
    /// Closed forms of the R₀^(n) recursion and ψ(∇′_ε) = ε(R₀^(p) − R).
    RecursionClosedForms,
    /// ψ(∇_ε) = ψ(∇′_ε) − ε(θ_L^{p−1}(f¹¹) − f¹¹)·I for the scalar twist by εω₁₁.
    ScalarTwist,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Violated,
    Inapplicable,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub curve_id: String,
    pub lemma: LemmaId,
    pub status: Status,
    /// Inputs and computed values; enough to re-run the check.
    pub witness: serde_json::Value,
    /// Wall-clock time; excluded from serialized reports to keep them reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Coordinates (a, b) of a global form (a + b·x)·dx/y.
pub type FormCoords = (FieldValue, FieldValue);

pub(crate) fn coords(omega: &Differential) -> Result<FormCoords> {
    omega.global_coords().ok_or(Error::Range(
        "form is not a global regular differential".into(),
    ))
}

/// Fails with `NotTorsion` unless ω_L ≠ 0 and d + ω_L has vanishing p-curvature.
pub(crate) fn ensure_torsion(curve: &Curve, omega_l: &Differential) -> Result<()> {
    if omega_l.is_zero() || omega_l.curve() != curve {
        return Err(Error::NotTorsion);
    }
    let omega0 = curve.omega0();
    let theta0 = dual_derivation(&omega0)?;
    if !p_curvature_rank1(&pair(omega_l, &theta0), &theta0, &omega0)?.is_zero() {
        return Err(Error::NotTorsion);
    }
    Ok(())
}

/// C(n, k) reduced into the field of `one`, for k ≤ n < p.
pub(crate) fn binom_in(one: &FieldValue, n: u64, k: u64) -> FieldValue {
    (0..k).fold(one.clone(), |acc, i| {
        let num = one.scale_int((n - i) as i64);
        let den = one.scale_int((i + 1) as i64);
        (&acc * &num).div(&den).expect("k < p")
    })
}
