//! Exact phase-one simplex for small feasibility problems `A x = b, x >= 0`.

use num_traits::{Signed, Zero};

use crate::ring::Rational;

/// Decides whether `{x >= 0 : A x = b}` is nonempty, using Bland's rule on a dense
/// tableau with one artificial variable per row.
pub fn feasible(a: &[Vec<Rational>], b: &[Rational]) -> bool {
    let m = a.len();
    if m == 0 {
        return true;
    }
    let n = a[0].len();
    let width = n + m + 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
    for (i, row) in a.iter().enumerate() {
        let flip = b[i].is_negative();
        let mut r = Vec::with_capacity(width);
        for x in row {
            r.push(if flip { -x } else { x.clone() });
        }
        for j in 0..m {
            r.push(if i == j { Rational::from_integer(1.into()) } else { Rational::zero() });
        }
        r.push(if flip { -&b[i] } else { b[i].clone() });
        t.push(r);
    }
    // objective row: minimize the sum of artificials, expressed in nonbasic terms
    let mut obj = vec![Rational::zero(); width];
    for row in &t {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..n + m).find(|&j| t[m][j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            // unbounded cannot happen for a phase-one objective bounded below by zero
            break;
        };
        pivot(&mut t, pr, enter);
        basis[pr] = enter;
    }
    t[m][width - 1].is_zero()
}

fn pivot(t: &mut [Vec<Rational>], pr: usize, pc: usize) {
    let inv = t[pr][pc].recip();
    for x in t[pr].iter_mut() {
        *x *= &inv;
    }
    let prow = t[pr].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for (x, p) in row.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
    }
}
