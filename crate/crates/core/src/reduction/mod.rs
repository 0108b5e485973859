//! Matrices over the twisted Laurent ring and their Euclidean diagonalization.
//!
//! Matrices act on row vectors from the right, `x -> x A`. Row operations replace
//! `A` by `E A` (adding a left multiple of one row to another), column operations by
//! `A F` (adding a right multiple of one column to another). Both preserve the
//! isomorphism type of the cokernel, and for a diagonal matrix the cokernel dimension
//! over the coefficient field is the sum of the entry degrees.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::RationalFunction;
use crate::skew::{SkewLaurentPoly, Twist};

/// Default bound on coefficient storage during a diagonalization.
pub const DEFAULT_LIMIT_BYTES: usize = 64 << 20;

/// Resource limits for [`diagonalize_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_bytes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_bytes: DEFAULT_LIMIT_BYTES }
    }
}

/// Rectangular matrix of twisted Laurent polynomials over one twist.
#[derive(Clone, PartialEq, Eq)]
pub struct SkewMatrix {
    twist: Arc<Twist>,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<SkewLaurentPoly>>,
}

impl SkewMatrix {
    pub fn zeros(twist: &Arc<Twist>, rows: usize, cols: usize) -> Self {
        SkewMatrix {
            twist: twist.clone(),
            rows,
            cols,
            entries: vec![vec![SkewLaurentPoly::zero(twist); cols]; rows],
        }
    }

    pub fn identity(twist: &Arc<Twist>, n: usize) -> Self {
        let mut m = Self::zeros(twist, n, n);
        for i in 0..n {
            m.entries[i][i] = SkewLaurentPoly::one(twist);
        }
        m
    }

    pub fn from_rows(twist: &Arc<Twist>, entries: Vec<Vec<SkewLaurentPoly>>) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        for row in &entries {
            if row.len() != cols {
                return Err(Error::Mismatch("ragged matrix rows".into()));
            }
            for x in row {
                if x.twist() != twist {
                    return Err(Error::Mismatch("matrix entries over different twists".into()));
                }
            }
        }
        Ok(SkewMatrix { twist: twist.clone(), rows, cols, entries })
    }

    pub fn diagonal(twist: &Arc<Twist>, diag: Vec<SkewLaurentPoly>) -> Result<Self> {
        let n = diag.len();
        let mut m = Self::zeros(twist, n, n);
        for (i, d) in diag.into_iter().enumerate() {
            if d.twist() != twist {
                return Err(Error::Mismatch("matrix entries over different twists".into()));
            }
            m.entries[i][i] = d;
        }
        Ok(m)
    }

    pub fn twist(&self) -> &Arc<Twist> {
        &self.twist
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &SkewLaurentPoly {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: SkewLaurentPoly) {
        self.entries[i][j] = x;
    }

    pub fn rows(&self) -> &[Vec<SkewLaurentPoly>] {
        &self.entries
    }

    pub fn transpose(&self) -> SkewMatrix {
        let entries = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.entries[i][j].clone()).collect())
            .collect();
        SkewMatrix { twist: self.twist.clone(), rows: self.cols, cols: self.rows, entries }
    }

    pub fn try_mul(&self, rhs: &SkewMatrix) -> Result<SkewMatrix> {
        if self.cols != rhs.rows || self.twist != rhs.twist {
            return Err(Error::Mismatch("matrix product shape or twist mismatch".into()));
        }
        let mut out = Self::zeros(&self.twist, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = SkewLaurentPoly::zero(&self.twist);
                for l in 0..self.cols {
                    if !self.entries[i][l].is_zero() && !rhs.entries[l][j].is_zero() {
                        acc = acc.try_add(&self.entries[i][l].try_mul(&rhs.entries[l][j])?)?;
                    }
                }
                out.entries[i][j] = acc;
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, x: &[SkewLaurentPoly]) -> Result<Vec<SkewLaurentPoly>> {
        if x.len() != self.rows {
            return Err(Error::Mismatch("vector length does not match row count".into()));
        }
        (0..self.cols)
            .map(|j| {
                let mut acc = SkewLaurentPoly::zero(&self.twist);
                for (i, xi) in x.iter().enumerate() {
                    acc = acc.try_add(&xi.try_mul(&self.entries[i][j])?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    /// Removes row `i` (if given) and column `j` (if given).
    pub fn delete(&self, row: Option<usize>, col: Option<usize>) -> SkewMatrix {
        let entries: Vec<Vec<SkewLaurentPoly>> = self
            .entries
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != row)
            .map(|(_, r)| {
                r.iter().enumerate().filter(|(j, _)| Some(*j) != col).map(|(_, x)| x.clone()).collect()
            })
            .collect();
        SkewMatrix {
            twist: self.twist.clone(),
            rows: self.rows - usize::from(row.is_some()),
            cols: self.cols - usize::from(col.is_some()),
            entries,
        }
    }

    pub fn byte_size(&self) -> usize {
        self.entries.iter().flatten().map(SkewLaurentPoly::byte_size).sum()
    }

    fn check_limit(&self, limits: &Limits) -> Result<()> {
        let bytes = self.byte_size();
        if bytes > limits.max_bytes {
            return Err(Error::SizeGuard { bytes, limit: limits.max_bytes });
        }
        Ok(())
    }
}

impl fmt::Debug for SkewMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for row in &self.entries {
            let parts: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
            writeln!(f, "  [{}]", parts.join(", "))?;
        }
        write!(f, "]")
    }
}

/// One elementary operation of the diagonalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryOp {
    SwapRows(usize, usize),
    SwapCols(usize, usize),
    /// `row[target] -= factor * row[source]`
    RowSubLeft { target: usize, source: usize, factor: SkewLaurentPoly },
    /// `col[target] -= col[source] * factor`
    ColSubRight { target: usize, source: usize, factor: SkewLaurentPoly },
}

impl ElementaryOp {
    /// Applies the operation in place.
    pub fn apply(&self, m: &mut SkewMatrix) -> Result<()> {
        match self {
            ElementaryOp::SwapRows(a, b) => m.entries.swap(*a, *b),
            ElementaryOp::SwapCols(a, b) => {
                for row in m.entries.iter_mut() {
                    row.swap(*a, *b);
                }
            }
            ElementaryOp::RowSubLeft { target, source, factor } => {
                for j in 0..m.cols {
                    let s = &m.entries[*source][j];
                    if s.is_zero() {
                        continue;
                    }
                    let d = factor.try_mul(s)?;
                    m.entries[*target][j] = m.entries[*target][j].try_sub(&d)?;
                }
            }
            ElementaryOp::ColSubRight { target, source, factor } => {
                for i in 0..m.rows {
                    let s = &m.entries[i][*source];
                    if s.is_zero() {
                        continue;
                    }
                    let d = s.try_mul(factor)?;
                    m.entries[i][*target] = m.entries[i][*target].try_sub(&d)?;
                }
            }
        }
        Ok(())
    }
}

/// Applies a sequence of operations to a copy of `m`.
pub fn replay(m: &SkewMatrix, ops: &[ElementaryOp]) -> Result<SkewMatrix> {
    let mut out = m.clone();
    for op in ops {
        op.apply(&mut out)?;
    }
    Ok(out)
}

/// Pivot selection rule for [`diagonalize_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PivotStrategy {
    /// Nonzero entry of minimal degree in the trailing block, ties row-major.
    #[default]
    MinDegree,
    /// First nonzero entry in row-major order; after an unfinished sweep, the
    /// remainder of smallest degree in the pivot row or column.
    FirstNonzero,
}

/// Outcome of a diagonalization.
#[derive(Clone, Debug)]
pub struct DiagonalizationResult {
    /// Diagonal entries in order; zero entries mean the map is not injective.
    pub diagonal: Vec<SkewLaurentPoly>,
    pub injective: bool,
    /// Product of the diagonal entries times the sign of the permutations used;
    /// `None` when not injective.
    pub det_class: Option<SkewLaurentPoly>,
    pub op_log: Vec<ElementaryOp>,
}

impl DiagonalizationResult {
    /// Degrees of the diagonal entries (`None` for zero entries).
    pub fn degrees(&self) -> Vec<Option<usize>> {
        self.diagonal.iter().map(|d| d.degree().ok()).collect()
    }

    /// Sum of the diagonal degrees when injective.
    pub fn coker_dim(&self) -> Option<usize> {
        if !self.injective {
            return None;
        }
        Some(self.diagonal.iter().map(|d| d.degree().unwrap_or(0)).sum())
    }
}

/// Diagonalizes a square matrix with the default strategy and limits.
pub fn diagonalize(m: &SkewMatrix) -> Result<DiagonalizationResult> {
    diagonalize_with(m, PivotStrategy::MinDegree, &Limits::default())
}

fn degree_of(x: &SkewLaurentPoly) -> usize {
    x.degree().unwrap_or(usize::MAX)
}

pub fn diagonalize_with(
    m: &SkewMatrix,
    strategy: PivotStrategy,
    limits: &Limits,
) -> Result<DiagonalizationResult> {
    if !m.is_square() {
        return Err(Error::Input(format!(
            "diagonalization needs a square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut log = Vec::new();
    let mut swaps = 0usize;
    let mut diagonal = Vec::with_capacity(n);
    let record = |a: &mut SkewMatrix, op: ElementaryOp, log: &mut Vec<ElementaryOp>| -> Result<()> {
        op.apply(a)?;
        log.push(op);
        Ok(())
    };

    let mut t = 0;
    let mut retry = false;
    while t < n {
        let pivot = if retry && strategy == PivotStrategy::FirstNonzero {
            let mut best: Option<(usize, usize)> = None;
            let cells = (t + 1..n).map(|i| (i, t)).chain((t + 1..n).map(|j| (t, j)));
            for (i, j) in cells {
                let x = &a.entries[i][j];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| degree_of(x) < degree_of(&a.entries[bi][bj])) {
                    best = Some((i, j));
                }
            }
            best
        } else {
            let mut best: Option<(usize, usize)> = None;
            'scan: for i in t..n {
                for j in t..n {
                    let x = &a.entries[i][j];
                    if x.is_zero() {
                        continue;
                    }
                    if strategy == PivotStrategy::FirstNonzero {
                        best = Some((i, j));
                        break 'scan;
                    }
                    if best.is_none_or(|(bi, bj)| degree_of(x) < degree_of(&a.entries[bi][bj])) {
                        best = Some((i, j));
                    }
                }
            }
            best
        };
        let Some((pi, pj)) = pivot else {
            // the trailing block vanishes
            for _ in t..n {
                diagonal.push(SkewLaurentPoly::zero(&a.twist));
            }
            break;
        };
        if pi != t {
            record(&mut a, ElementaryOp::SwapRows(t, pi), &mut log)?;
            swaps += 1;
        }
        if pj != t {
            record(&mut a, ElementaryOp::SwapCols(t, pj), &mut log)?;
            swaps += 1;
        }
        let mut clean = true;
        for i in t + 1..n {
            if a.entries[i][t].is_zero() {
                continue;
            }
            let (q, r) = SkewLaurentPoly::left_div_rem(&a.entries[i][t], &a.entries[t][t])?;
            if !q.is_zero() {
                record(&mut a, ElementaryOp::RowSubLeft { target: i, source: t, factor: q }, &mut log)?;
            }
            clean &= r.is_zero();
        }
        for j in t + 1..n {
            if a.entries[t][j].is_zero() {
                continue;
            }
            let (q, r) = SkewLaurentPoly::right_div_rem(&a.entries[t][j], &a.entries[t][t])?;
            if !q.is_zero() {
                record(&mut a, ElementaryOp::ColSubRight { target: j, source: t, factor: q }, &mut log)?;
            }
            clean &= r.is_zero();
        }
        a.check_limit(limits)?;
        if clean {
            diagonal.push(a.entries[t][t].clone());
            t += 1;
            retry = false;
        } else {
            retry = true;
        }
    }

    let injective = diagonal.iter().all(|d| !d.is_zero());
    let det_class = if injective {
        let mut det = SkewLaurentPoly::one(&m.twist);
        for d in &diagonal {
            det = det.try_mul(d)?;
        }
        if swaps % 2 == 1 {
            det = det.neg();
        }
        Some(det)
    } else {
        None
    };
    Ok(DiagonalizationResult { diagonal, injective, det_class, op_log: log })
}

/// Dimension over the coefficient field of the cokernel of `x -> x A`, or `None`
/// when the map is not injective.
pub fn coker_dim(m: &SkewMatrix) -> Result<Option<usize>> {
    Ok(diagonalize(m)?.coker_dim())
}

/// Dieudonne determinant class of an injective square matrix, with its degree.
pub fn dieudonne_det(m: &SkewMatrix) -> Result<(SkewLaurentPoly, usize)> {
    let d = diagonalize(m)?;
    match d.det_class {
        Some(det) => {
            let deg = det.degree()?;
            Ok((det, deg))
        }
        None => Err(Error::NotAcyclic("matrix is not invertible over the skew field".into())),
    }
}

/// Report of [`ik_bound_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IkBoundReport {
    pub injective: bool,
    pub dimension: Option<usize>,
    /// `true` when not injective or when the dimension is at most `k`.
    pub holds: bool,
}

/// Checks `dim coker(A + u I_k) <= k`, where `I_k` is the `n x n` matrix with `k`
/// leading ones on the diagonal and `A` has coefficients in the base field.
pub fn ik_bound_check(
    twist: &Arc<Twist>,
    a: &[Vec<RationalFunction>],
    k: usize,
    n: usize,
) -> Result<IkBoundReport> {
    if k > n || a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::Input(format!("ik_bound_check needs an {n}x{n} matrix and k <= n")));
    }
    let mut rows = Vec::with_capacity(n);
    for (i, r) in a.iter().enumerate() {
        let mut row = Vec::with_capacity(n);
        for (j, f) in r.iter().enumerate() {
            if f.nvars() != twist.k() {
                return Err(Error::Mismatch("coefficient field mismatch".into()));
            }
            let mut x = SkewLaurentPoly::constant(twist, f.clone());
            if i == j && i < k {
                x = x.try_add(&SkewLaurentPoly::u(twist))?;
            }
            row.push(x);
        }
        rows.push(row);
    }
    let m = SkewMatrix::from_rows(twist, rows)?;
    let dimension = coker_dim(&m)?;
    Ok(IkBoundReport {
        injective: dimension.is_some(),
        dimension,
        holds: dimension.is_none_or(|d| d <= k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::IntMatrix;
    use crate::ring::{int, Poly};

    fn c(twist: &Arc<Twist>, coeffs: &[(i64, i64)]) -> SkewLaurentPoly {
        SkewLaurentPoly::from_coeffs(
            twist,
            coeffs.iter().map(|&(m, x)| (m, RationalFunction::constant(twist.k(), int(x)))),
        )
        .unwrap()
    }

    #[test]
    fn empty_matrix_is_injective() {
        let tw = Twist::identity(0);
        let d = diagonalize(&SkewMatrix::zeros(&tw, 0, 0)).unwrap();
        assert!(d.injective && d.diagonal.is_empty());
        assert_eq!(d.coker_dim(), Some(0));
    }

    #[test]
    fn diagonal_input_is_kept() {
        let tw = Twist::identity(0);
        let m = SkewMatrix::diagonal(&tw, vec![c(&tw, &[(1, 1)]), c(&tw, &[(2, 1)])]).unwrap();
        let d = diagonalize(&m).unwrap();
        assert_eq!(d.coker_dim(), Some(0));
        let m = SkewMatrix::diagonal(&tw, vec![c(&tw, &[(0, 1), (1, 1)]), c(&tw, &[(0, 1), (2, 1)])]).unwrap();
        assert_eq!(coker_dim(&m).unwrap(), Some(3));
    }

    #[test]
    fn jordan_block_has_cokernel_two() {
        // [[u - 1, 1], [0, u - 1]]
        let tw = Twist::identity(0);
        let m = SkewMatrix::from_rows(
            &tw,
            vec![
                vec![c(&tw, &[(0, -1), (1, 1)]), c(&tw, &[(0, 1)])],
                vec![c(&tw, &[]), c(&tw, &[(0, -1), (1, 1)])],
            ],
        )
        .unwrap();
        for s in [PivotStrategy::MinDegree, PivotStrategy::FirstNonzero] {
            let d = diagonalize_with(&m, s, &Limits::default()).unwrap();
            assert_eq!(d.coker_dim(), Some(2));
            let replayed = replay(&m, &d.op_log).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    if i != j {
                        assert!(replayed.get(i, j).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn lemma_example_quadratic() {
        let tw = Twist::identity(0);
        let m = SkewMatrix::from_rows(&tw, vec![vec![c(&tw, &[(0, 1), (1, -1), (2, 1)])]]).unwrap();
        assert_eq!(coker_dim(&m).unwrap(), Some(2));
        let z = SkewMatrix::from_rows(&tw, vec![vec![c(&tw, &[])]]).unwrap();
        assert_eq!(coker_dim(&z).unwrap(), None);
        assert!(matches!(dieudonne_det(&z), Err(Error::NotAcyclic(_))));
    }

    #[test]
    fn twisted_matrix_and_size_guard() {
        let tw = Twist::new(IntMatrix::from_rows(vec![vec![-1]]).unwrap()).unwrap();
        let t = SkewLaurentPoly::constant(&tw, RationalFunction::from_poly(Poly::var(1, 0)));
        let u = SkewLaurentPoly::u(&tw);
        let m = SkewMatrix::from_rows(
            &tw,
            vec![vec![t.try_add(&u).unwrap(), t.clone()], vec![u.clone(), u.try_mul(&u).unwrap()]],
        )
        .unwrap();
        let d = diagonalize(&m).unwrap();
        let (_, deg) = dieudonne_det(&m).unwrap();
        assert_eq!(d.coker_dim(), Some(deg));
        let tiny = Limits { max_bytes: 1 };
        assert!(matches!(
            diagonalize_with(&m, PivotStrategy::MinDegree, &tiny),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn ik_bound_examples() {
        let tw = Twist::identity(1);
        let one = RationalFunction::one(1);
        let zero = RationalFunction::zero(1);
        let a = vec![vec![one.clone(), zero.clone()], vec![zero.clone(), one.clone()]];
        let r = ik_bound_check(&tw, &a, 2, 2).unwrap();
        assert!(r.injective && r.holds && r.dimension.unwrap() <= 2);
        let r = ik_bound_check(&tw, &a, 0, 2).unwrap();
        assert_eq!(r.dimension, Some(0));
        assert!(ik_bound_check(&tw, &a, 3, 2).is_err());
    }
}
