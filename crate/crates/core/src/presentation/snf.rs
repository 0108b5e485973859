use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Result of a Smith normal form computation: `left * m * right = diag(divisors, 0, ...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero invariant factors `d_1 | d_2 | ...`, all positive.
    pub divisors: Vec<BigInt>,
    pub left: Vec<Vec<BigInt>>,
    pub right: Vec<Vec<BigInt>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// row_i -= q * row_j
fn row_axpy(m: &mut [Vec<BigInt>], i: usize, j: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let rj = m[j].clone();
    for (x, y) in m[i].iter_mut().zip(&rj) {
        *x -= q * y;
    }
}

/// col_i -= q * col_j
fn col_axpy(m: &mut [Vec<BigInt>], i: usize, j: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let y = row[j].clone();
        row[i] -= q * y;
    }
}

/// Smith normal form over the integers with minimal-absolute-value pivoting.
pub fn smith_normal_form(m: &[Vec<i64>]) -> SmithForm {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigInt>> =
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut left = identity(rows);
    let mut right = identity(cols);
    let mut divisors = Vec::new();

    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: nonzero entry of minimal absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        left.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut right, t, pj);

        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t].div_floor(&a[t][t]);
            row_axpy(&mut a, i, t, &q);
            row_axpy(&mut left, i, t, &q);
            clean &= a[i][t].is_zero();
        }
        for j in t + 1..cols {
            let q = a[t][j].div_floor(&a[t][t]);
            col_axpy(&mut a, j, t, &q);
            col_axpy(&mut right, j, t, &q);
            clean &= a[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // enforce divisibility: fold a non-multiple row into the pivot row and retry
        let bad = (t + 1..rows)
            .find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
        if let Some(i) = bad {
            let minus_one = -BigInt::one();
            row_axpy(&mut a, t, i, &minus_one);
            row_axpy(&mut left, t, i, &minus_one);
            continue;
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in left[t].iter_mut() {
                *x = -&*x;
            }
        }
        divisors.push(a[t][t].clone());
        t += 1;
    }
    SmithForm { divisors, left, right }
}

/// Free rank, torsion and free-part projection of a finitely presented group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianizationData {
    pub free_rank: usize,
    /// Invariant factors greater than one.
    pub torsion: Vec<BigInt>,
    /// `free_rank x generators` matrix sending an exponent-sum vector to the free part.
    pub projection: Vec<Vec<BigInt>>,
}

/// Abelianization from the relator exponent-sum matrix (rows = relators).
///
/// With `L * E * R = D` for the `b x a` exponent matrix `E`, the abelianization is
/// `Z^a / row-space(E)` and `v -> v R` identifies it with `Z^a / row-space(D)`, so the
/// free coordinates of a row vector `v` are the last `a - r` entries of `v R`.
pub fn abelianization_of_matrix(exponents: &[Vec<i64>], generators: usize) -> AbelianizationData {
    let m: Vec<Vec<i64>> = if exponents.is_empty() { Vec::new() } else { exponents.to_vec() };
    let snf = smith_normal_form(&m);
    let r = snf.divisors.len();
    let right = if m.is_empty() { identity(generators) } else { snf.right };
    let projection = (r..generators)
        .map(|j| (0..generators).map(|i| right[i][j].clone()).collect())
        .collect();
    let torsion = snf.divisors.into_iter().filter(|d| !d.is_one()).collect();
    AbelianizationData { free_rank: generators - r, torsion, projection }
}

/// Inverse of a unimodular integer matrix by exact fraction-free elimination.
pub fn unimodular_inverse(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut inv = identity(n);
    for c in 0..n {
        // Euclid on column c below the diagonal until a unit pivot remains
        loop {
            let mut best: Option<usize> = None;
            for i in c..n {
                if !a[i][c].is_zero() && best.is_none_or(|b| a[i][c].abs() < a[b][c].abs()) {
                    best = Some(i);
                }
            }
            let p = best.expect("matrix is not unimodular");
            a.swap(c, p);
            inv.swap(c, p);
            let mut done = true;
            for i in c + 1..n {
                let q = a[i][c].div_floor(&a[c][c]);
                row_axpy(&mut a, i, c, &q);
                row_axpy(&mut inv, i, c, &q);
                done &= a[i][c].is_zero();
            }
            if done {
                break;
            }
        }
        assert!(a[c][c].abs().is_one(), "matrix is not unimodular");
        if a[c][c].is_negative() {
            for x in a[c].iter_mut() {
                *x = -&*x;
            }
            for x in inv[c].iter_mut() {
                *x = -&*x;
            }
        }
    }
    for c in (0..n).rev() {
        for i in 0..c {
            let q = a[i][c].clone();
            row_axpy(&mut a, i, c, &q);
            row_axpy(&mut inv, i, c, &q);
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let n = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|r| {
                (0..n)
                    .map(|j| r.iter().zip(b).map(|(x, row)| x * &row[j]).sum())
                    .collect()
            })
            .collect()
    }

    fn big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn check(m: &[Vec<i64>]) -> SmithForm {
        let s = smith_normal_form(m);
        let d = mat_mul(&mat_mul(&s.left, &big(m)), &s.right);
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let want = if i == j && i < s.divisors.len() { s.divisors[i].clone() } else { BigInt::zero() };
                assert_eq!(*x, want);
            }
        }
        for w in s.divisors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        s
    }

    #[test]
    fn small_examples() {
        assert_eq!(check(&[vec![1, 0], vec![0, 1]]).divisors, vec![BigInt::from(1), BigInt::from(1)]);
        assert_eq!(check(&[vec![2, 4], vec![6, 8]]).divisors, vec![BigInt::from(2), BigInt::from(4)]);
        assert!(check(&[vec![0, 0], vec![0, 0]]).divisors.is_empty());
        assert_eq!(check(&[vec![2, 0], vec![0, 3]]).divisors, vec![BigInt::from(1), BigInt::from(6)]);
        check(&[vec![4, 6, 10], vec![6, 9, 15], vec![1, 2, 3]]);
    }

    #[test]
    fn abelianization_examples() {
        let trefoil = abelianization_of_matrix(&[vec![1, -1]], 2);
        assert_eq!(trefoil.free_rank, 1);
        assert!(trefoil.torsion.is_empty());
        let p = &trefoil.projection[0];
        assert_eq!(p[0].abs(), BigInt::one());
        assert_eq!(p[0], p[1]);

        let hopf = abelianization_of_matrix(&[vec![0, 0]], 2);
        assert_eq!(hopf.free_rank, 2);

        let z2 = abelianization_of_matrix(&[vec![2]], 1);
        assert_eq!(z2.free_rank, 0);
        assert_eq!(z2.torsion, vec![BigInt::from(2)]);

        let free = abelianization_of_matrix(&[], 1);
        assert_eq!(free.free_rank, 1);
        assert_eq!(free.projection, vec![vec![BigInt::one()]]);
    }
}
