//! Subspaces of `F_p^n` carried as matrices whose columns span them.

use super::matrix::Matrix;

/// Independent columns spanning the same space.
pub fn basis(span: &Matrix) -> Matrix {
    span.column_space_basis()
}

pub fn dim(span: &Matrix) -> usize {
    span.rank()
}

pub fn sum(a: &Matrix, b: &Matrix) -> Matrix {
    basis(&a.hstack(b))
}

/// Basis of `span(a) ∩ span(b)`; both inputs may be redundant.
pub fn intersection(a: &Matrix, b: &Matrix) -> Matrix {
    let a = basis(a);
    let b = basis(b);
    let f = a.field();
    let stacked = a.hstack(&b.scale(f.neg(1)));
    let k = stacked.kernel_basis();
    let coeffs = k.block(0, 0, a.cols(), k.cols());
    basis(&a.mul(&coeffs))
}

pub fn contains(span: &Matrix, v: &Matrix) -> bool {
    if v.cols() == 0 {
        return true;
    }
    span.rank() == span.hstack(v).rank()
}

pub fn equal(a: &Matrix, b: &Matrix) -> bool {
    let r = a.rank();
    r == b.rank() && r == a.hstack(b).rank()
}

/// Columns of `whole` (in order) that extend a basis of `span(sub)` to a
/// basis of `span(sub) + span(whole)`.
pub fn complement(sub: &Matrix, whole: &Matrix) -> Matrix {
    let ech = sub.hstack(whole).rref();
    let picked: Vec<usize> = ech
        .pivots
        .iter()
        .filter(|&&c| c >= sub.cols())
        .map(|&c| c - sub.cols())
        .collect();
    whole.select_columns(&picked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffmat::PrimeField;

    #[test]
    fn intersection_of_planes() {
        let f = PrimeField::new(2).unwrap();
        let a = Matrix::from_rows(f, &[vec![1, 0], vec![0, 1], vec![0, 0]]);
        let b = Matrix::from_rows(f, &[vec![0, 0], vec![1, 0], vec![0, 1]]);
        let i = intersection(&a, &b);
        assert_eq!(i.cols(), 1);
        assert_eq!(i.column(0), vec![0, 1, 0]);
        assert_eq!(dim(&sum(&a, &b)), 3);
    }

    #[test]
    fn complement_extends_basis() {
        let f = PrimeField::new(3).unwrap();
        let sub = Matrix::from_rows(f, &[vec![1], vec![1], vec![0]]);
        let whole = Matrix::identity(f, 3);
        let c = complement(&sub, &whole);
        assert_eq!(c.cols(), 2);
        assert_eq!(sub.hstack(&c).rank(), 3);
    }
}
