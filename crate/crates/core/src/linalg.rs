//! Dense linear algebra over finite fields, plus coordinate extraction for function
//! field elements so that F_q-linear conditions in K become matrix problems.

use crate::exactnum::{Field, FieldValue};
use crate::funcfield::{FfElem, Poly};

/// Row-reduces in place to reduced echelon form; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<FieldValue>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = &*v - &(&factor * pv);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of the right kernel {v : M·v = 0} of a matrix with `ncols` columns.
pub fn kernel(field: &Field, rows: &[Vec<FieldValue>], ncols: usize) -> Vec<Vec<FieldValue>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![field.zero(); ncols];
            v[fc] = field.one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = -&row[fc];
            }
            v
        })
        .collect()
}

pub fn rank(rows: &[Vec<FieldValue>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Coordinates of several elements of K over F_q, after clearing a common denominator:
/// returns a matrix with one row per coordinate (coefficients of x^j and x^j·y in the
/// numerators) and one column per input element. Two families of elements are
/// proportional coordinatewise exactly when they are as elements of K.
pub fn coordinate_rows(elems: &[FfElem]) -> Vec<Vec<FieldValue>> {
    let Some(first) = elems.first() else {
        return Vec::new();
    };
    let field = first.curve().field().clone();
    let den = elems
        .iter()
        .fold(Poly::one(&field), |acc, u| acc.lcm(u.d()));
    let nums: Vec<(Poly, Poly)> = elems
        .iter()
        .map(|u| {
            let s = den.div_exact(u.d());
            (u.a() * &s, u.b() * &s)
        })
        .collect();
    let len_a = nums
        .iter()
        .map(|(a, _)| a.coeffs().len())
        .max()
        .unwrap_or(0);
    let len_b = nums
        .iter()
        .map(|(_, b)| b.coeffs().len())
        .max()
        .unwrap_or(0);
    let mut rows = Vec::with_capacity(len_a + len_b);
    for j in 0..len_a {
        rows.push(nums.iter().map(|(a, _)| a.coeff(j)).collect());
    }
    for j in 0..len_b {
        rows.push(nums.iter().map(|(_, b)| b.coeff(j)).collect());
    }
    rows
}

/// Matrix over F_p of an F_p-linear map of F_{p^k}, in the power basis.
/// Column j holds the coordinates of map(t^j).
pub fn fp_matrix_of(field: &Field, map: impl Fn(&FieldValue) -> FieldValue) -> Vec<Vec<u64>> {
    let k = field.degree();
    let cols: Vec<Vec<u64>> = (0..k)
        .map(|j| {
            let mut e = vec![0; k];
            e[j] = 1;
            map(&field.from_coeffs(&e)).coeffs()
        })
        .collect();
    (0..k)
        .map(|i| (0..k).map(|j| cols[j][i]).collect())
        .collect()
}

/// Basis of the right kernel of a matrix over F_p given by residues in [0, p).
pub fn kernel_mod_p(mut rows: Vec<Vec<u64>>, ncols: usize, p: u64) -> Vec<Vec<u64>> {
    use crate::exactnum::fp_poly::{inv_mod, mul_mod, sub_mod};
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, found);
        let inv = inv_mod(rows[r][col], p).expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            let factor = row[col];
            if i == r || factor == 0 {
                continue;
            }
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                if pv != 0 {
                    *v = sub_mod(*v, mul_mod(factor, pv, p), p);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|fc| {
            let mut v = vec![0; ncols];
            v[fc] = 1;
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = (p - row[fc]) % p;
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_small_matrix() {
        let f = Field::prime(5).unwrap();
        let v = |xs: &[u64]| xs.iter().map(|&x| f.from_u64(x)).collect::<Vec<_>>();
        // x + 2y + 3z = 0, 2x + 4y + 2z = 0
        let m = vec![v(&[1, 2, 3]), v(&[2, 4, 2])];
        let ker = kernel(&f, &m, 3);
        assert_eq!(ker.len(), 1);
        for row in &m {
            let dot = row
                .iter()
                .zip(&ker[0])
                .fold(f.zero(), |acc, (a, b)| &acc + &(a * b));
            assert!(dot.is_zero());
        }
        assert_eq!(rank(&m, 3), 2);

        let k = kernel_mod_p(vec![vec![1, 2, 3], vec![2, 4, 2]], 3, 5);
        let expected: Vec<Vec<u64>> = ker
            .iter()
            .map(|v| v.iter().map(|x| x.as_prime().unwrap()).collect())
            .collect();
        assert_eq!(k, expected);
    }

    #[test]
    fn frobenius_matrix_squares_to_identity_on_f9() {
        let f9 = Field::extension(3, &[1, 0, 1]).unwrap();
        let m = fp_matrix_of(&f9, |a| a.frobenius());
        // t ↦ −t: diag(1, 2)
        assert_eq!(m, vec![vec![1, 0], vec![0, 2]]);
    }
}
