//! Integer lattice arithmetic: kernels of integer matrices via unimodular
//! column reduction, and short-vector search in small lattices.

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, Zero};

/// Extended gcd with `g ≥ 0` and `a·x + b·y = g`.
fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Basis of `{x ∈ ℤ^c : B x = 0}` for an `r × c` integer matrix given row
/// by row. Columns of the returned list are kernel vectors.
pub fn integer_kernel(b: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let rows = b.len();
    // Work on the stacked matrix [B; I] and apply column operations.
    let mut m: Vec<Vec<BigInt>> = (0..rows + cols)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    if i < rows {
                        b[i][j].clone()
                    } else if i - rows == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut pivot_col = 0;
    for r in 0..rows {
        if pivot_col == cols {
            break;
        }
        for j in pivot_col + 1..cols {
            if m[r][j].is_zero() {
                continue;
            }
            let a = m[r][pivot_col].clone();
            let bb = m[r][j].clone();
            let (g, x, y) = xgcd(&a, &bb);
            let (u, v) = (&a / &g, &bb / &g);
            // [p j] ← [p j]·[[x, -v], [y, u]], a unimodular step.
            for row in m.iter_mut() {
                let cp = row[pivot_col].clone();
                let cj = row[j].clone();
                row[pivot_col] = &cp * &x + &cj * &y;
                row[j] = &cj * &u - &cp * &v;
            }
        }
        if !m[r][pivot_col].is_zero() {
            pivot_col += 1;
        }
    }
    (pivot_col..cols)
        .map(|j| (rows..rows + cols).map(|i| m[i][j].clone()).collect())
        .collect()
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Pairwise size reduction until no basis vector shortens. In rank two
/// this is Lagrange–Gauss reduction.
pub fn reduce_basis(mut basis: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    basis.retain(|v| v.iter().any(|x| !x.is_zero()));
    let k = basis.len();
    loop {
        let mut changed = false;
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let njj = dot(&basis[j], &basis[j]);
                let nij = dot(&basis[i], &basis[j]);
                // round(nij / njj)
                let two = BigInt::from(2);
                let q = (&nij * &two + &njj).div_floor(&(&njj * &two));
                if q.is_zero() {
                    continue;
                }
                let cand: Vec<BigInt> = basis[i].iter().zip(&basis[j]).map(|(a, b)| a - &q * b).collect();
                if dot(&cand, &cand) < dot(&basis[i], &basis[i]) {
                    basis[i] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    basis.sort_by_key(|v| dot(v, v));
    basis
}

/// Ordering used for witnesses: ∞-norm, then ℓ¹-norm, then the
/// lexicographically larger vector. Witnesses are sign-normalized so the
/// first nonzero entry is positive.
pub fn witness_key(n: &[i64]) -> (i64, i64, std::cmp::Reverse<Vec<i64>>) {
    let inf = n.iter().map(|x| x.abs()).max().unwrap_or(0);
    let l1 = n.iter().map(|x| x.abs()).sum();
    (inf, l1, std::cmp::Reverse(n.to_vec()))
}

pub fn normalize_sign(n: &mut [i64]) {
    if let Some(first) = n.iter().find(|x| **x != 0) {
        if *first < 0 {
            n.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Shortest vector (by [`witness_key`]) among combinations of a reduced
/// basis with coefficients in `[-2, 2]`.
pub fn short_vector(basis: &[Vec<BigInt>]) -> Option<Vec<i64>> {
    use num::ToPrimitive;
    if basis.is_empty() {
        return None;
    }
    let k = basis.len();
    let dim = basis[0].len();
    let span = 5usize;
    let total = span.pow(k as u32);
    let mut best: Option<Vec<i64>> = None;
    for code in 1..total {
        let mut c = code;
        let mut v = vec![BigInt::zero(); dim];
        for b in basis {
            let coeff = (c % span) as i64 - 2;
            c /= span;
            if coeff != 0 {
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi += bi * coeff;
                }
            }
        }
        if v.iter().all(|x| x.is_zero()) {
            continue;
        }
        let Some(mut w) = v.iter().map(|x| x.to_i64()).collect::<Option<Vec<i64>>>() else {
            continue;
        };
        normalize_sign(&mut w);
        if best.as_ref().map_or(true, |b| witness_key(&w) < witness_key(b)) {
            best = Some(w);
        }
    }
    best
}
