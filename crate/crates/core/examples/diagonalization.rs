//! Euclidean diagonalization of a matrix over a twisted Laurent ring: diagonal,
//! cokernel dimension and Dieudonne determinant class.

use l2euler::intmat::IntMatrix;
use l2euler::reduction::{diagonalize, ik_bound_check, SkewMatrix};
use l2euler::ring::{int, Poly, RationalFunction};
use l2euler::skew::{SkewLaurentPoly, Twist};

fn main() -> l2euler::Result<()> {
    // sigma(t) = t^-1
    let tw = Twist::new(IntMatrix::from_rows(vec![vec![-1]])?)?;
    let t = RationalFunction::from_poly(Poly::var(1, 0));
    let c = |n: i64| RationalFunction::constant(1, int(n));
    let e = |cs: Vec<(i64, RationalFunction)>| SkewLaurentPoly::from_coeffs(&tw, cs);
    let m = SkewMatrix::from_rows(
        &tw,
        vec![
            vec![e(vec![(0, t.clone()), (1, c(1))])?, e(vec![(1, c(2))])?],
            vec![e(vec![(-1, c(1))])?, e(vec![(0, c(1)), (2, t.clone())])?],
        ],
    )?;
    let d = diagonalize(&m)?;
    for (i, x) in d.diagonal.iter().enumerate() {
        println!("d{i} = {x}");
    }
    println!("injective: {}, coker dim: {:?}", d.injective, d.coker_dim());
    if let Some(det) = &d.det_class {
        println!("det class: {det}");
    }

    let a = vec![vec![t.clone(), c(1)], vec![c(0), t]];
    let r = ik_bound_check(&Twist::identity(1), &a, 1, 2)?;
    println!("A + u I_1: cokernel dimension {:?}, within the bound: {}", r.dimension, r.holds);
    Ok(())
}
