//! Closed-form invariants: slope bounds for subbundles and quotients of F_*η, the
//! Nagata–Segre bound, and the degree/length counts for genus-2 Verschiebung.
//!
//! Everything is exact. The counts are evaluators of stated formulas; apart from the
//! consistency relation between them they are not derived independently here.

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::is_prime;

fn range(msg: impl Into<String>) -> Error {
    Error::Range(msg.into())
}

fn check_prime(p: i64) -> Result<()> {
    if p < 3 || !is_prime(p as u64) {
        return Err(range(format!("p = {p} must be an odd prime")));
    }
    Ok(())
}

fn check_genus(g: i64) -> Result<()> {
    if g < 2 {
        return Err(range(format!("genus g = {g} must be at least 2")));
    }
    Ok(())
}

fn check_rank(r: i64, p: i64) -> Result<()> {
    if !(1..=p).contains(&r) {
        return Err(range(format!("rank r = {r} must lie in 1..={p}")));
    }
    Ok(())
}

/// Upper bound on the slope of a rank-r subbundle of F_*η: ((r−1)(g−1) + d)/p.
pub fn mu_r(r: i64, g: i64, d: i64, p: i64) -> Result<Rational64> {
    check_prime(p)?;
    check_genus(g)?;
    check_rank(r, p)?;
    Ok(Rational64::new((r - 1) * (g - 1) + d, p))
}

/// Lower bound on the slope of a rank-r quotient of F_*η: ((2p−r−1)(g−1) + d)/p.
pub fn nu_r(r: i64, g: i64, d: i64, p: i64) -> Result<Rational64> {
    check_prime(p)?;
    check_genus(g)?;
    check_rank(r, p)?;
    Ok(Rational64::new((2 * p - r - 1) * (g - 1) + d, p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NagataSegre {
    pub epsilon: i64,
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational64,
}

fn ser_rational<S: serde::Serializer>(
    q: &Rational64,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(q)
}

/// For W of rank r and degree δ and 1 ≤ n ≤ r − 1: ε ∈ [0, r−1] with
/// ε + n(r−n)(g−1) ≡ nδ (mod r), and the slope bound
/// δ/r − ((r−n)/r)(g−1) − ε/(rn) for some rank-n subbundle.
pub fn nagata_segre(r: i64, delta: i64, n: i64, g: i64) -> Result<NagataSegre> {
    if r < 2 || !(1..r).contains(&n) {
        return Err(range(format!("need 1 <= n <= r - 1, got r = {r}, n = {n}")));
    }
    if g < 0 {
        return Err(range(format!("genus g = {g} must be nonnegative")));
    }
    let epsilon = (n * delta - n * (r - n) * (g - 1)).rem_euclid(r);
    let bound = Rational64::new(delta, r)
        - Rational64::new((r - n) * (g - 1), r)
        - Rational64::new(epsilon, r * n);
    Ok(NagataSegre { epsilon, bound })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Counts {
    pub p: u64,
    pub g: u64,
    /// Length of the base locus of Verschiebung (genus 2): 2(p³−p)/3.
    pub base_locus_length: u128,
    /// Degree of V_S (genus 2): (p³+2p)/3.
    pub verschiebung_degree: u128,
    /// Degree of H̄ (genus 2): 2(p−1).
    pub hbar_degree: u128,
    /// Degree of V^{-1}(K_X) (genus 2): 4p.
    pub preimage_degree: u128,
    /// τ-invariant points of H̄: 2^{2(g−1)−1}(p^g − 1).
    pub tau_invariant_count: u128,
    /// Largest destabilizing degree: g − 1.
    pub max_destab_degree: u128,
    /// preimageDegree = 4 + 2·hbarDegree (Kummer quartic plus twice H̄).
    pub consistent: bool,
}

pub fn counts(p: u64, g: u64) -> Result<Counts> {
    check_prime(i64::try_from(p).map_err(|_| range("p too large"))?)?;
    check_genus(i64::try_from(g).map_err(|_| range("g too large"))?)?;
    let overflow = || range(format!("counts overflow for p = {p}, g = {g}"));
    let pw = p as u128;
    let p3 = pw.checked_pow(3).ok_or_else(overflow)?;
    let base_locus_length = 2 * (p3 - pw) / 3;
    let verschiebung_degree = (p3 + 2 * pw) / 3;
    let hbar_degree = 2 * (pw - 1);
    let preimage_degree = 4 * pw;
    let exp = u32::try_from(2 * (g - 1) - 1).map_err(|_| overflow())?;
    let tau_invariant_count = 2u128
        .checked_pow(exp)
        .and_then(|two| {
            let pg = pw.checked_pow(u32::try_from(g).ok()?)?;
            two.checked_mul(pg - 1)
        })
        .ok_or_else(overflow)?;
    Ok(Counts {
        p,
        g,
        base_locus_length,
        verschiebung_degree,
        hbar_degree,
        preimage_degree,
        tau_invariant_count,
        max_destab_degree: (g - 1) as u128,
        consistent: preimage_degree == 4 + 2 * hbar_degree,
    })
}
