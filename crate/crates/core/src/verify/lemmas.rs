use std::time::Instant;

use serde_json::json;

use super::{binom_in, coords, ensure_torsion, LemmaId, LemmaReport, Status};
use crate::error::Result;
use crate::funcfield::{dual_derivation, Curve, Differential, FfElem};
use crate::pcurvature::{p_curvature_matrix, ConnectionMatrix, Matrix};

/// x = ω/ω_L, S₁ = Σ_{k=1}^{p−1} θ_L^k(x), S₂ = Σ_{k=1}^{p−1} C(p−1, k)·θ_L^k(x).
pub fn two_sums(omega_l: &Differential, omega: &Differential) -> Result<(FfElem, FfElem, FfElem)> {
    let curve = omega_l.curve();
    let p = curve.characteristic();
    let theta_l = dual_derivation(omega_l)?;
    let x = omega.ratio(omega_l)?;
    let one = curve.field().one();
    let (mut s1, mut s2) = (curve.zero(), curve.zero());
    let mut iter = x.clone();
    for k in 1..p {
        iter = theta_l.apply(&iter);
        iter.check_cap()?;
        s1 = s1.add(&iter);
        s2 = s2.add(&iter.scale(&binom_in(&one, p - 1, k)));
    }
    Ok((x, s1, s2))
}

pub fn check_two_sums(
    curve: &Curve,
    omega_l: &Differential,
    omega: &Differential,
) -> Result<LemmaReport> {
    let start = Instant::now();
    ensure_torsion(curve, omega_l)?;
    let (x, s1, s2) = two_sums(omega_l, omega)?;
    let status = if x.as_constant().is_some() {
        Status::Inapplicable
    } else if !s1.is_zero() && !s2.is_zero() {
        Status::Holds
    } else {
        Status::Violated
    };
    Ok(LemmaReport {
        curve_id: curve.canonical_id(),
        lemma: LemmaId::TwoSums,
        status,
        witness: json!({
            "omega_l": coords(omega_l)?,
            "omega": coords(omega)?,
            "x": x,
            "s1": s1,
            "s2": s2,
        }),
        elapsed: start.elapsed(),
    })
}

/// Runs the engine on ∇ = [[0, x], [0, 1]] and ∇′ = [[1, x], [0, 0]] in the chart ω_L and
/// compares with the closed-form sums.
pub fn check_offdiag_closed_forms(
    curve: &Curve,
    omega_l: &Differential,
    omega: &Differential,
) -> Result<LemmaReport> {
    let start = Instant::now();
    ensure_torsion(curve, omega_l)?;
    let theta_l = dual_derivation(omega_l)?;
    let (x, s1, s2) = two_sums(omega_l, omega)?;
    let (z, one) = (curve.zero(), curve.one());
    let nabla = Matrix::new(vec![
        vec![z.clone(), x.clone()],
        vec![z.clone(), one.clone()],
    ])?;
    let nabla_p = Matrix::new(vec![vec![one, x], vec![z.clone(), z]])?;
    let psi = p_curvature_matrix(&ConnectionMatrix::new(nabla, omega_l.clone())?, &theta_l)?.matrix;
    let psi_p =
        p_curvature_matrix(&ConnectionMatrix::new(nabla_p, omega_l.clone())?, &theta_l)?.matrix;
    let rest_zero = |m: &Matrix<FfElem>| {
        m.get(0, 0).is_zero() && m.get(1, 0).is_zero() && m.get(1, 1).is_zero()
    };
    let ok = rest_zero(&psi) && rest_zero(&psi_p) && psi.get(0, 1) == &s1 && psi_p.get(0, 1) == &s2;
    Ok(LemmaReport {
        curve_id: curve.canonical_id(),
        lemma: LemmaId::OffdiagClosedForms,
        status: if ok { Status::Holds } else { Status::Violated },
        witness: json!({
            "omega_l": coords(omega_l)?,
            "omega": coords(omega)?,
            "psi": psi.rows(),
            "psi_prime": psi_p.rows(),
            "s1": s1,
            "s2": s2,
        }),
        elapsed: start.elapsed(),
    })
}
