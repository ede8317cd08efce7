use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::exactnum::{Dual, Field, FieldValue};
use crate::funcfield::Curve;

fn omega0_theta0(curve: &Curve) -> (Differential, Derivation) {
    let w = curve.omega0();
    let t = dual_derivation(&w).unwrap();
    (w, t)
}

/// First curve (in a fixed list) carrying a nonzero F_p-rational form with ψ(d + ω) = 0,
/// found by scanning all (a, b) with an independent rank-1 evaluation.
fn curve_with_torsion(p: u64) -> (Curve, Differential) {
    let candidates: [[i64; 6]; 6] = [
        [1, 2, 0, 0, 0, 1],
        [1, 1, 0, 0, 0, 1],
        [2, 0, 1, 0, 0, 1],
        [1, 0, 0, 1, 0, 1],
        [3, 1, 0, 0, 1, 1],
        [1, 0, 2, 0, 1, 1],
    ];
    for f in candidates {
        let Ok(curve) = Curve::over_prime(p, &f) else {
            continue;
        };
        let (w0, t0) = omega0_theta0(&curve);
        let field = curve.field().clone();
        for a in 0..p {
            for b in 0..p {
                if a == 0 && b == 0 {
                    continue;
                }
                let (a, b) = (field.from_u64(a), field.from_u64(b));
                let omega = curve.global_form(&a, &b);
                let t = pair(&omega, &t0);
                if p_curvature_rank1(&t, &t0, &w0).unwrap().is_zero() {
                    return (curve, omega);
                }
            }
        }
    }
    panic!("no curve with rational torsion in the list for p = {p}");
}

fn random_matrix(curve: &Curve, rng: &mut ChaCha8Rng, r: usize, deg: usize) -> Matrix<FfElem> {
    Matrix::new(
        (0..r)
            .map(|_| (0..r).map(|_| FfElem::random(curve, rng, deg)).collect())
            .collect(),
    )
    .unwrap()
}

fn mat(rows: Vec<Vec<FfElem>>) -> Matrix<FfElem> {
    Matrix::new(rows).unwrap()
}

#[test]
fn zero_connection_is_flat() {
    let curve = Curve::over_prime(5, &[1, 1, 0, 0, 0, 1]).unwrap();
    let (w0, t0) = omega0_theta0(&curve);
    assert!(p_curvature_rank1(&curve.zero(), &t0, &w0)
        .unwrap()
        .is_zero());
    for r in 1..=3 {
        let conn = ConnectionMatrix::new(Matrix::zero_like(&curve.zero(), r), w0.clone()).unwrap();
        assert!(p_curvature_matrix(&conn, &t0).unwrap().is_zero());
    }
}

#[test]
fn torsion_form_in_its_own_chart() {
    for p in [3, 5] {
        let (curve, wl) = curve_with_torsion(p);
        let tl = dual_derivation(&wl).unwrap();
        // T = 1: 1 + 0 − θ_L^p(ω_L)
        assert!(p_curvature_rank1(&curve.one(), &tl, &wl).unwrap().is_zero());
        assert!(frobenius_pairing(&wl, &tl).unwrap().is_one());
        // diag(0, 1) is the canonical split connection
        let j = mat(vec![
            vec![curve.zero(), curve.zero()],
            vec![curve.zero(), curve.one()],
        ]);
        let conn = ConnectionMatrix::new(j, wl.clone()).unwrap();
        assert!(p_curvature_matrix(&conn, &tl).unwrap().is_zero());
    }
}

#[test]
fn rank1_closed_form_matches_recursion() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (p, f) in [
        (3, [1, 2, 0, 0, 0, 1]),
        (5, [1, 1, 0, 0, 0, 1]),
        (7, [1, 2, 0, 0, 0, 1]),
    ] {
        let curve = Curve::over_prime(p, &f).unwrap();
        let (w0, t0) = omega0_theta0(&curve);
        for _ in 0..15 {
            let t = FfElem::random(&curve, &mut rng, 2);
            let closed = p_curvature_rank1(&t, &t0, &w0).unwrap();
            let conn = ConnectionMatrix::new(mat(vec![vec![t]]), w0.clone()).unwrap();
            let rec = p_curvature_matrix(&conn, &t0).unwrap();
            assert_eq!(rec.matrix.get(0, 0), &closed);
        }
    }
}

#[test]
fn upper_triangular_lemma_matrix() {
    for p in [3, 5] {
        let (curve, wl) = curve_with_torsion(p);
        let tl = dual_derivation(&wl).unwrap();
        // any global form independent of ω_L
        let field = curve.field();
        let other = [(1, 0), (0, 1)]
            .into_iter()
            .map(|(a, b)| curve.global_form(&field.from_u64(a), &field.from_u64(b)))
            .find(|w| w.ratio(&wl).unwrap().as_constant().is_none())
            .unwrap();
        let x = other.ratio(&wl).unwrap();
        let s1 = (1..p).fold(curve.zero(), |acc, k| acc.add(&tl.iterate(&x, k).unwrap()));
        let t = mat(vec![vec![curve.zero(), x], vec![curve.zero(), curve.one()]]);
        let psi = p_curvature_matrix(&ConnectionMatrix::new(t, wl).unwrap(), &tl).unwrap();
        assert!(psi.matrix.get(0, 0).is_zero());
        assert!(psi.matrix.get(1, 0).is_zero());
        assert!(psi.matrix.get(1, 1).is_zero());
        assert_eq!(psi.matrix.get(0, 1), &s1);
    }
}

#[test]
fn table_small_n() {
    let curve = Curve::over_prime(5, &[1, 1, 0, 0, 0, 1]).unwrap();
    let (w0, t0) = omega0_theta0(&curve);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let t = random_matrix(&curve, &mut rng, 2, 2);
    let conn = ConnectionMatrix::new(t.clone(), w0).unwrap();
    let id = Matrix::identity_like(&curve.zero(), 2);

    let t1 = coefficient_table(&conn, &t0, 1).unwrap();
    assert_eq!(t1.entries, vec![t.clone(), id.clone()]);

    // (T + θ)² = T² + θ(T) + 2T·θ + θ²
    let t2 = coefficient_table(&conn, &t0, 2).unwrap();
    assert_eq!(t2.get(0), &t.mul(&t).add(&t.map(|a| t0.apply(a))));
    assert_eq!(t2.get(1), &t.scale_int(2));
    assert_eq!(t2.get(2), &id);

    assert!(coefficient_table(&conn, &t0, 0).is_err());
    assert!(coefficient_table(&conn, &t0, 6).is_err());
}

#[test]
fn table_binomial_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (p, f) in [(3, [1, 2, 0, 0, 0, 1]), (5, [1, 1, 0, 0, 0, 1])] {
        let curve = Curve::over_prime(p, &f).unwrap();
        let (w0, t0) = omega0_theta0(&curve);
        for _ in 0..3 {
            let conn =
                ConnectionMatrix::new(random_matrix(&curve, &mut rng, 2, 1), w0.clone()).unwrap();
            let tables: Vec<_> = (1..=p as usize)
                .map(|n| coefficient_table(&conn, &t0, n).unwrap())
                .collect();
            let id = Matrix::identity_like(&curve.zero(), 2);
            for (idx, table) in tables.iter().enumerate() {
                let n = idx + 1;
                assert_eq!(table.get(n), &id);
                for r in 1..=n {
                    let binom = binom(n as u64, r as u64) as i64;
                    assert_eq!(table.get(n - r), &tables[r - 1].get(0).scale_int(binom));
                }
            }
            if p == 5 {
                assert!(tables[4].get(3).is_zero());
            }
        }
    }
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn trace_is_determinant_connection() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (p, f) in [(3, [1, 2, 0, 0, 0, 1]), (5, [1, 1, 0, 0, 0, 1])] {
        let curve = Curve::over_prime(p, &f).unwrap();
        let (w0, t0) = omega0_theta0(&curve);
        for _ in 0..5 {
            let conn =
                ConnectionMatrix::new(random_matrix(&curve, &mut rng, 2, 1), w0.clone()).unwrap();
            let psi = p_curvature_matrix(&conn, &t0).unwrap();
            let det_psi = p_curvature_rank1(&conn.trace(), &t0, &w0).unwrap();
            assert_eq!(psi.matrix.trace(), det_psi);
        }
    }
}

#[test]
fn block_triangular() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let curve = Curve::over_prime(5, &[1, 1, 0, 0, 0, 1]).unwrap();
    let (w0, t0) = omega0_theta0(&curve);
    for _ in 0..5 {
        let mut t = random_matrix(&curve, &mut rng, 2, 1);
        t = mat(vec![
            vec![t.get(0, 0).clone(), t.get(0, 1).clone()],
            vec![curve.zero(), t.get(1, 1).clone()],
        ]);
        let psi = p_curvature_matrix(&ConnectionMatrix::new(t.clone(), w0.clone()).unwrap(), &t0)
            .unwrap();
        assert!(psi.matrix.is_upper_triangular());
        for i in 0..2 {
            let diag = p_curvature_rank1(t.get(i, i), &t0, &w0).unwrap();
            assert_eq!(psi.matrix.get(i, i), &diag);
        }
    }
}

#[test]
fn chart_mismatch_and_degree_cap() {
    let curve = Curve::over_prime(5, &[1, 1, 0, 0, 0, 1]).unwrap();
    let (w0, _) = omega0_theta0(&curve);
    let wrong = dual_derivation(&Differential::new(curve.one())).unwrap();
    let conn = ConnectionMatrix::new(mat(vec![vec![curve.x()]]), w0.clone()).unwrap();
    assert_eq!(
        p_curvature_matrix(&conn, &wrong).unwrap_err(),
        Error::ChartMismatch
    );
    assert_eq!(
        p_curvature_rank1(&curve.x(), &wrong, &w0).unwrap_err(),
        Error::ChartMismatch
    );
    assert_eq!(
        ConnectionMatrix::new(mat(vec![vec![curve.x()]]), Differential::new(curve.zero()))
            .unwrap_err(),
        Error::ZeroDifferential
    );

    let small = curve.with_degree_cap(6);
    let (w0, t0) = omega0_theta0(&small);
    assert!(matches!(
        p_curvature_rank1(&small.x().pow(4), &t0, &w0),
        Err(Error::DegreeOverflow { .. })
    ));
}

/// Twisting by the scalar connection d + s·ω_L shifts ψ by the rank-1 p-curvature of s:
/// over dual numbers with s = εf and θ_L^p(ω_L) = 1 this is ε(θ_L^{p−1}(f) − f)·I.
#[test]
fn scalar_twist_over_dual_numbers() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for p in [3, 5] {
        let (curve, wl) = curve_with_torsion(p);
        let tl = dual_derivation(&wl).unwrap();
        let field = curve.field().clone();
        let z = Dual::constant(curve.zero());
        let j = Matrix::new(vec![
            vec![z.clone(), z.clone()],
            vec![z.clone(), Dual::constant(curve.one())],
        ])
        .unwrap();
        for _ in 0..4 {
            let forms: Vec<FfElem> = (0..3)
                .map(|_| {
                    let (a, b) = (field.random(&mut rng), field.random(&mut rng));
                    curve.global_form(&a, &b).ratio(&wl).unwrap()
                })
                .collect();
            let (f11, f12, f21) = (&forms[0], &forms[1], &forms[2]);
            let eps = |u: &FfElem| Dual::infinitesimal(u.clone());
            let t = Matrix::new(vec![
                vec![eps(f11), eps(f12)],
                vec![eps(f21), eps(&f11.neg())],
            ])
            .unwrap();
            let t_prime = t.add(&Matrix::scalar(eps(f11), 2));
            let lhs =
                p_curvature_matrix(&ConnectionMatrix::new(j.add(&t), wl.clone()).unwrap(), &tl)
                    .unwrap();
            let rhs = p_curvature_matrix(
                &ConnectionMatrix::new(j.add(&t_prime), wl.clone()).unwrap(),
                &tl,
            )
            .unwrap();
            let shift = tl.iterate(f11, p - 1).unwrap().sub(f11);
            let expected = rhs.matrix.sub(&Matrix::scalar(eps(&shift), 2));
            assert_eq!(lhs.matrix, expected);
            // the scalar shift is itself the rank-1 p-curvature of −ε·f11
            let scalar = p_curvature_rank1(&eps(&f11.neg()), &tl, &wl).unwrap();
            assert_eq!(scalar, eps(&shift).negated());
        }
    }
}

#[test]
fn second_fundamental_form_examples() {
    let (curve, wl) = curve_with_torsion(3);
    let z = curve.zero();
    let one = curve.one();
    let zero_conn = ConnectionMatrix::new(Matrix::zero_like(&z, 2), curve.omega0()).unwrap();
    assert!(second_fundamental_form(&zero_conn, (&one, &z))
        .unwrap()
        .is_zero());
    assert_eq!(
        second_fundamental_form(&zero_conn, (&z, &z)).unwrap_err(),
        Error::ZeroVector
    );

    let j = mat(vec![
        vec![z.clone(), z.clone()],
        vec![z.clone(), one.clone()],
    ]);
    let can = ConnectionMatrix::new(j, wl).unwrap();
    assert!(second_fundamental_form(&can, (&one, &z)).unwrap().is_zero());
    assert!(second_fundamental_form(&can, (&z, &one)).unwrap().is_zero());
    // w = (0, 1) = 1·v − 1·e₁
    let sff = second_fundamental_form(&can, (&one, &one)).unwrap();
    assert_eq!(sff, one.neg());
}

#[test]
fn extension_field_curve() {
    let f9 = Field::extension(3, &[1, 0, 1]).unwrap();
    let curve = Curve::over_prime(3, &[1, 2, 0, 0, 0, 1])
        .unwrap()
        .base_change(&f9)
        .unwrap();
    let (w0, t0) = omega0_theta0(&curve);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let t = FfElem::random(&curve, &mut rng, 2);
        let conn = ConnectionMatrix::new(mat(vec![vec![t.clone()]]), w0.clone()).unwrap();
        assert_eq!(
            p_curvature_matrix(&conn, &t0).unwrap().matrix.get(0, 0),
            &p_curvature_rank1(&t, &t0, &w0).unwrap()
        );
    }
    let _: FieldValue = f9.generator();
}
