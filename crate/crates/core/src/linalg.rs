//! Dense Gaussian elimination over a [`FieldSpec`].

use crate::field::{FieldSpec, Scalar};

pub(crate) type Row = Vec<Scalar>;

/// Brings `rows` to reduced row echelon form, taking pivot columns in the
/// sequence given by `order`. Zero rows are dropped. Returns the pivot column
/// of each remaining row; a row whose pivot comes later in `order` is zero on
/// every column that comes earlier.
pub(crate) fn rref_ordered(f: FieldSpec, rows: &mut Vec<Row>, order: &[usize]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for &c in order {
        if r == rows.len() {
            break;
        }
        let Some(k) = (r..rows.len()).find(|&k| !f.is_zero(&rows[k][c])) else {
            continue;
        };
        rows.swap(r, k);
        if !f.is_one(&rows[r][c]) {
            let inv = f.inv(&rows[r][c]);
            for x in rows[r].iter_mut() {
                *x = f.mul(x, &inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub(crate) fn rref(f: FieldSpec, rows: &mut Vec<Row>, ncols: usize) -> Vec<usize> {
    let order: Vec<usize> = (0..ncols).collect();
    rref_ordered(f, rows, &order)
}

pub(crate) fn rank(f: FieldSpec, mut rows: Vec<Row>, ncols: usize) -> usize {
    rref(f, &mut rows, ncols).len()
}

/// A basis of `{x : A x = 0}` where `A` has the given rows.
pub(crate) fn kernel(f: FieldSpec, rows: &[Row], ncols: usize) -> Vec<Row> {
    let mut a = rows.to_vec();
    let pivots = rref(f, &mut a, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = vec![f.zero(); ncols];
            x[free] = f.one();
            for (row, &p) in a.iter().zip(&pivots) {
                x[p] = f.neg(&row[free]);
            }
            x
        })
        .collect()
}

/// One solution of `A x = b`, with free variables set to zero.
pub(crate) fn solve(f: FieldSpec, rows: &[Row], rhs: &[Scalar], ncols: usize) -> Option<Row> {
    debug_assert_eq!(rows.len(), rhs.len());
    let mut aug: Vec<Row> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(f, &mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![f.zero(); ncols];
    for (row, &p) in aug.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// `sum_i c_i rows_i`.
pub(crate) fn combine(f: FieldSpec, rows: &[Row], coeffs: &[Scalar], ncols: usize) -> Row {
    let mut out = vec![f.zero(); ncols];
    for (row, c) in rows.iter().zip(coeffs) {
        if f.is_zero(c) {
            continue;
        }
        for (x, y) in out.iter_mut().zip(row) {
            if !f.is_zero(y) {
                *x = f.add(x, &f.mul(c, y));
            }
        }
    }
    out
}

pub(crate) fn dot(f: FieldSpec, a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        if !f.is_zero(x) && !f.is_zero(y) {
            acc = f.add(&acc, &f.mul(x, y));
        }
    }
    acc
}

pub(crate) fn support(f: FieldSpec, row: &[Scalar]) -> u64 {
    row.iter()
        .enumerate()
        .filter(|(_, x)| !f.is_zero(x))
        .fold(0, |m, (i, _)| m | 1 << i)
}
