use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{binom_in, coords, ensure_torsion, FormCoords, LemmaId, LemmaReport, Status};
use crate::error::{Error, Result};
use crate::exactnum::{Dual, Field, FieldValue};
use crate::funcfield::{dual_derivation, Curve, Derivation, Differential, FfElem};
use crate::linalg;
use crate::pcurvature::{frobenius_pairing, p_curvature_matrix_with, Matrix};

/// Largest number of triples the brute-force scan will visit.
pub const RIGIDITY_BRUTE_LIMIT: u128 = 1 << 24;

/// (ω₁₁, ω₁₂, ω₂₁) for the traceless deformation T = [[ω₁₁, ω₁₂], [ω₂₁, −ω₁₁]].
pub type Triple = [FormCoords; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RigidityMode {
    Brute,
    Linear,
}

impl FromStr for RigidityMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(RigidityMode::Brute),
            "linear" => Ok(RigidityMode::Linear),
            other => Err(Error::Range(format!("unknown rigidity mode {other:?}"))),
        }
    }
}

impl fmt::Display for RigidityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RigidityMode::Brute => "brute",
            RigidityMode::Linear => "linear",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RigiditySolutionSet {
    /// All triples with ψ(∇^can + εT) = 0, sorted.
    pub solutions: Vec<Triple>,
    /// Dimension over the constant field.
    pub dimension: usize,
    /// True when the solutions are exactly {(0, c₁ω_L, c₂ω_L)}.
    pub is_conjugate_trivial_family: bool,
}

#[derive(Clone, Debug)]
pub struct RigidityOutcome {
    pub solutions: RigiditySolutionSet,
    pub rigidity: LemmaReport,
    pub closed_forms: LemmaReport,
    pub scalar_twist: LemmaReport,
}

struct Setup {
    curve: Curve,
    omega_l: Differential,
    theta_l: Derivation,
    c: FfElem,
    j: Matrix<Dual<FfElem>>,
}

impl Setup {
    fn new(curve: &Curve, omega_l: &Differential) -> Result<Setup> {
        ensure_torsion(curve, omega_l)?;
        let theta_l = dual_derivation(omega_l)?;
        let c = frobenius_pairing(omega_l, &theta_l)?;
        let z = Dual::constant(curve.zero());
        let j = Matrix::new(vec![
            vec![z.clone(), z.clone()],
            vec![z, Dual::constant(curve.one())],
        ])?;
        Ok(Setup {
            curve: curve.clone(),
            omega_l: omega_l.clone(),
            theta_l,
            c,
            j,
        })
    }

    /// f = ω/ω_L for ω = (a + b·x)·dx/y.
    fn ratio(&self, w: &FormCoords) -> Result<FfElem> {
        self.curve.global_form(&w.0, &w.1).ratio(&self.omega_l)
    }

    fn ratios(&self, t: &Triple) -> Result<[FfElem; 3]> {
        Ok([self.ratio(&t[0])?, self.ratio(&t[1])?, self.ratio(&t[2])?])
    }

    fn psi(&self, eps_part: &Matrix<FfElem>) -> Result<Matrix<Dual<FfElem>>> {
        let t = self
            .j
            .add(&eps_part.map_into(|u| Dual::infinitesimal(u.clone())));
        Ok(p_curvature_matrix_with(&t, &self.theta_l, &self.c)?.matrix)
    }

    fn deformation(&self, f: &[FfElem; 3]) -> Result<Matrix<FfElem>> {
        let [f11, f12, f21] = f;
        Matrix::new(vec![
            vec![f11.clone(), f12.clone()],
            vec![f21.clone(), f11.neg()],
        ])
    }
}

/// ψ(∇^can + εT) in the chart ω_L, for T given by a triple of global forms.
pub fn deformation_p_curvature(
    curve: &Curve,
    omega_l: &Differential,
    triple: &Triple,
) -> Result<Matrix<Dual<FfElem>>> {
    let s = Setup::new(curve, omega_l)?;
    s.psi(&s.deformation(&s.ratios(triple)?)?)
}

#[derive(Default)]
struct SampleChecks {
    closed_forms: bool,
    scalar_twist: bool,
    pth_variant: bool,
}

/// Per-sample checks of the R₀^(n) closed forms, ψ(∇′_ε) = ε(R₀^(p) − R) and the scalar
/// twist identity (both the corrected form and the variant with an (f¹¹)^p term).
fn sample_checks(s: &Setup, f: &[FfElem; 3], psi: &Matrix<Dual<FfElem>>) -> Result<SampleChecks> {
    let p = s.curve.characteristic();
    let [f11, f12, f21] = f;
    let (z, one) = (s.curve.zero(), s.curve.one());
    let th = &s.theta_l;
    let one_f = s.curve.field().one();

    let r = Matrix::new(vec![
        vec![f11.scale_int2(), f12.clone()],
        vec![f21.clone(), z.clone()],
    ])?;
    let jm = Matrix::new(vec![vec![z.clone(), z.clone()], vec![z.clone(), one]])?;
    let rj = r.mul(&jm);
    let mut r0 = r.clone();
    let mut closed = true;
    for n in 1..=p {
        if n > 1 {
            r0 = r0.map(|u| th.apply(u)).add(&jm.mul(&r0)).add(&rj);
            for u in r0.rows().iter().flatten() {
                u.check_cap()?;
            }
        }
        let f11_n = th.iterate(f11, n - 1)?;
        let (mut f12_n, mut f21_n) = (z.clone(), z.clone());
        for k in 0..n {
            f12_n = f12_n.add(&th.iterate(f12, k)?);
            f21_n = f21_n.add(&th.iterate(f21, k)?.scale(&binom_in(&one_f, n - 1, k)));
        }
        closed &= r0.get(0, 0) == &f11_n.scale_int2()
            && r0.get(0, 1) == &f12_n
            && r0.get(1, 0) == &f21_n
            && r0.get(1, 1).is_zero();
    }
    // ∇′_ε = ∇^can + εR
    let psi_prime = s.psi(&r)?;
    let predicted = r0.sub(&r).map_into(|u| Dual::infinitesimal(u.clone()));
    closed &= psi_prime == predicted;

    let theta_pm1 = th.iterate(f11, p - 1)?;
    let shift = theta_pm1.sub(f11);
    let corrected = psi_prime.sub(&Matrix::scalar(Dual::infinitesimal(shift), 2));
    let pth_shift = f11.pow(p).add(&theta_pm1).sub(f11);
    let pth = psi_prime.add(&Matrix::scalar(Dual::infinitesimal(pth_shift), 2));
    Ok(SampleChecks {
        closed_forms: closed,
        scalar_twist: psi == &corrected,
        pth_variant: psi == &pth,
    })
}

trait ScaleTwo {
    fn scale_int2(&self) -> Self;
}

impl ScaleTwo for FfElem {
    fn scale_int2(&self) -> Self {
        self.add(self)
    }
}

fn unflatten(v: &[FieldValue]) -> Triple {
    [
        (v[0].clone(), v[1].clone()),
        (v[2].clone(), v[3].clone()),
        (v[4].clone(), v[5].clone()),
    ]
}

/// {(0, c₁ω_L, c₂ω_L)}, sorted.
fn expected_family(field: &Field, wl: &FormCoords) -> Vec<Triple> {
    let zero = (field.zero(), field.zero());
    let mut out: Vec<Triple> = field
        .elements()
        .flat_map(|c1| {
            let zero = zero.clone();
            field.elements().map(move |c2| {
                [
                    zero.clone(),
                    (&c1 * &wl.0, &c1 * &wl.1),
                    (&c2 * &wl.0, &c2 * &wl.1),
                ]
            })
        })
        .collect();
    out.sort();
    out
}

struct Tally {
    sampled: usize,
    closed_failures: Vec<Triple>,
    twist_failures: Vec<Triple>,
    pth_variant_holds: usize,
}

const MAX_LISTED: usize = 10;

impl Tally {
    fn new() -> Self {
        Tally {
            sampled: 0,
            closed_failures: Vec::new(),
            twist_failures: Vec::new(),
            pth_variant_holds: 0,
        }
    }

    fn record(&mut self, t: &Triple, c: &SampleChecks) {
        self.sampled += 1;
        if !c.closed_forms {
            self.closed_failures.push(t.clone());
        }
        if !c.scalar_twist {
            self.twist_failures.push(t.clone());
        }
        self.pth_variant_holds += c.pth_variant as usize;
    }

    fn merge(mut self, other: Tally) -> Self {
        self.sampled += other.sampled;
        self.closed_failures.extend(other.closed_failures);
        self.twist_failures.extend(other.twist_failures);
        self.pth_variant_holds += other.pth_variant_holds;
        self
    }
}

/// Scans first-order traceless deformations ∇^can + εT for vanishing p-curvature.
pub fn rigidity_scan(
    curve: &Curve,
    omega_l: &Differential,
    mode: RigidityMode,
) -> Result<RigidityOutcome> {
    let start = Instant::now();
    let s = Setup::new(curve, omega_l)?;
    let field = curve.field().clone();
    let wl = coords(omega_l)?;
    let (solutions, dimension, tally, family_ok) = match mode {
        RigidityMode::Brute => scan_brute(&s, &field)?,
        RigidityMode::Linear => scan_linear(&s, &field, &wl)?,
    };
    let expected = expected_family(&field, &wl);
    let family_ok = family_ok.unwrap_or_else(|| solutions == expected);
    let unexpected: Vec<&Triple> = solutions
        .iter()
        .filter(|t| expected.binary_search(t).is_err())
        .take(MAX_LISTED)
        .collect();
    let missing: Vec<&Triple> = expected
        .iter()
        .filter(|t| solutions.binary_search(t).is_err())
        .take(MAX_LISTED)
        .collect();
    let elapsed = start.elapsed();
    let id = curve.canonical_id();
    let status = |ok: bool| if ok { Status::Holds } else { Status::Violated };
    let rigidity = LemmaReport {
        curve_id: id.clone(),
        lemma: LemmaId::Rigidity,
        status: status(family_ok),
        witness: json!({
            "omega_l": wl,
            "mode": mode,
            "solution_count": solutions.len(),
            "dimension": dimension,
            "unexpected": unexpected,
            "missing": missing,
        }),
        elapsed,
    };
    let closed_forms = LemmaReport {
        curve_id: id.clone(),
        lemma: LemmaId::RecursionClosedForms,
        status: status(tally.closed_failures.is_empty()),
        witness: json!({
            "omega_l": wl,
            "sampled": tally.sampled,
            "failures": tally.closed_failures.iter().take(MAX_LISTED).collect::<Vec<_>>(),
        }),
        elapsed,
    };
    let scalar_twist = LemmaReport {
        curve_id: id,
        lemma: LemmaId::ScalarTwist,
        status: status(tally.twist_failures.is_empty()),
        witness: json!({
            "omega_l": wl,
            "sampled": tally.sampled,
            "failures": tally.twist_failures.iter().take(MAX_LISTED).collect::<Vec<_>>(),
            "with_pth_power_term_holds": tally.pth_variant_holds,
        }),
        elapsed,
    };
    Ok(RigidityOutcome {
        solutions: RigiditySolutionSet {
            solutions,
            dimension,
            is_conjugate_trivial_family: family_ok,
        },
        rigidity,
        closed_forms,
        scalar_twist,
    })
}

type ScanResult = (Vec<Triple>, usize, Tally, Option<bool>);

fn scan_brute(s: &Setup, field: &Field) -> Result<ScanResult> {
    let q = field.order().unwrap_or(u128::MAX);
    let total = q
        .checked_pow(6)
        .filter(|&n| n <= RIGIDITY_BRUTE_LIMIT)
        .ok_or(Error::FieldTooLargeForBrute {
            size: q.saturating_pow(6),
            limit: RIGIDITY_BRUTE_LIMIT,
        })?;
    let per_lead = total / q;
    let parts: Vec<(Vec<Triple>, Tally)> = (0..q)
        .into_par_iter()
        .map(|lead| {
            let mut sols = Vec::new();
            let mut tally = Tally::new();
            for rest in 0..per_lead {
                let mut idx = lead * per_lead + rest;
                let mut v: Vec<FieldValue> = Vec::with_capacity(6);
                for _ in 0..6 {
                    v.push(field.element(idx % q));
                    idx /= q;
                }
                v.reverse();
                let t = unflatten(&v);
                let f = s.ratios(&t)?;
                let psi = s.psi(&s.deformation(&f)?)?;
                tally.record(&t, &sample_checks(s, &f, &psi)?);
                if psi.is_zero() {
                    sols.push(t);
                }
            }
            Ok((sols, tally))
        })
        .collect::<Result<_>>()?;
    let mut sols = Vec::new();
    let mut tally = Tally::new();
    for (sv, t) in parts {
        sols.extend(sv);
        tally = tally.merge(t);
    }
    sols.sort();
    let p = field.characteristic() as usize;
    let (mut n, mut dim_fp) = (sols.len(), 0);
    while n > 1 && n % p == 0 {
        n /= p;
        dim_fp += 1;
    }
    Ok((sols, dim_fp / field.degree(), tally, None))
}

/// ψ(J + εS) = ε·Λ(S) with Λ linear over the constants, so the solutions form the
/// kernel of Λ on the six coordinates.
fn scan_linear(s: &Setup, field: &Field, wl: &FormCoords) -> Result<ScanResult> {
    let mut tally = Tally::new();
    let unit = |i: usize| -> Triple {
        let mut v = vec![field.zero(); 6];
        v[i] = field.one();
        unflatten(&v)
    };
    let mut images = Vec::with_capacity(6);
    for i in 0..6 {
        let t = unit(i);
        let f = s.ratios(&t)?;
        let psi = s.psi(&s.deformation(&f)?)?;
        tally.record(&t, &sample_checks(s, &f, &psi)?);
        if psi.rows().iter().flatten().any(|d| !d.body.is_zero()) {
            return Err(Error::NotTorsion);
        }
        images.push(psi.map_into(|d| d.slope.clone()));
    }
    let mut rows = Vec::new();
    for (r, c) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let entries: Vec<FfElem> = images.iter().map(|m| m.get(r, c).clone()).collect();
        rows.extend(linalg::coordinate_rows(&entries));
    }
    let basis = linalg::kernel(field, &rows, 6);
    for v in &basis {
        let t = unflatten(v);
        let f = s.ratios(&t)?;
        let psi = s.psi(&s.deformation(&f)?)?;
        tally.record(&t, &sample_checks(s, &f, &psi)?);
    }
    // compare spans with the expected family
    let zero = field.zero();
    let fam = [
        [
            zero.clone(),
            zero.clone(),
            wl.0.clone(),
            wl.1.clone(),
            zero.clone(),
            zero.clone(),
        ],
        [
            zero.clone(),
            zero.clone(),
            zero.clone(),
            zero.clone(),
            wl.0.clone(),
            wl.1.clone(),
        ],
    ];
    let mut both: Vec<Vec<FieldValue>> = basis.clone();
    both.extend(fam.iter().map(|v| v.to_vec()));
    let family_ok = basis.len() == 2 && linalg::rank(&both, 6) == 2;

    let q = field.order().unwrap_or(u128::MAX);
    let count = q
        .checked_pow(basis.len() as u32)
        .filter(|&n| n <= RIGIDITY_BRUTE_LIMIT)
        .ok_or(Error::FieldTooLargeForBrute {
            size: u128::MAX,
            limit: RIGIDITY_BRUTE_LIMIT,
        })?;
    let mut sols = Vec::with_capacity(count as usize);
    for mut idx in 0..count {
        let mut acc = vec![zero.clone(); 6];
        for v in &basis {
            let c = field.element(idx % q);
            idx /= q;
            for (slot, x) in acc.iter_mut().zip(v) {
                *slot = &*slot + &(&c * x);
            }
        }
        sols.push(unflatten(&acc));
    }
    sols.sort();
    Ok((sols, basis.len(), tally, Some(family_ok)))
}
