use super::field::PrimeField;
use super::matrix::{kernel_from_echelon, Matrix};

/// Linear system whose unknowns are a list of matrices `X_k` and whose
/// equations have the shape `sum_k A_k X_k B_k = C`.
///
/// Every hom-space, lifting and factorization question in the crate is
/// phrased through this builder. Unknown entries are flattened row-major,
/// block after block.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    field: PrimeField,
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    width: usize,
    coeffs: Vec<u32>,
    rhs: Vec<u32>,
    n_rows: usize,
}

/// General solution of a [`LinearSystem`].
#[derive(Clone, Debug)]
pub struct Solution {
    /// Particular solution with free variables zero, `None` if inconsistent.
    pub particular: Option<Vec<u32>>,
    /// Columns span the homogeneous solution space.
    pub kernel: Matrix,
    /// Free variable positions; kernel column `j` is 1 at `free[j]` and 0
    /// at every other free position.
    pub free: Vec<usize>,
}

pub enum Factor<'a> {
    Identity,
    Mat(&'a Matrix),
}

impl LinearSystem {
    pub fn new(field: PrimeField, shapes: &[(usize, usize)]) -> Self {
        let mut offsets = Vec::with_capacity(shapes.len());
        let mut width = 0;
        for &(r, c) in shapes {
            offsets.push(width);
            width += r * c;
        }
        Self {
            field,
            shapes: shapes.to_vec(),
            offsets,
            width,
            coeffs: Vec::new(),
            rhs: Vec::new(),
            n_rows: 0,
        }
    }

    pub fn num_unknowns(&self) -> usize {
        self.width
    }

    pub fn num_equations(&self) -> usize {
        self.n_rows
    }

    /// Add the block equation `sum (left * X_k * right) = rhs`; `rhs = None`
    /// means zero. `Identity` factors are taken with the size forced by the
    /// unknown's shape.
    pub fn add_equation(&mut self, terms: &[(usize, Factor<'_>, Factor<'_>)], rhs: Option<&Matrix>) {
        let f = self.field;
        let Some(first) = terms.first() else {
            return;
        };
        let (e, g) = self.term_shape(first);
        for t in terms {
            assert_eq!(self.term_shape(t), (e, g), "equation terms disagree in shape");
        }
        if let Some(c) = rhs {
            assert_eq!(c.shape(), (e, g), "right-hand side has the wrong shape");
        }
        if e * g == 0 {
            return;
        }
        let base = self.coeffs.len();
        self.coeffs.resize(base + e * g * self.width, 0);
        for (k, left, right) in terms {
            let (rk, ck) = self.shapes[*k];
            let off = self.offsets[*k];
            for r in 0..e {
                for c in 0..g {
                    let row = base + (r * g + c) * self.width;
                    // coefficient of X[i][j] is left[r][i] * right[j][c]
                    for i in 0..rk {
                        let a = match left {
                            Factor::Identity => u32::from(r == i),
                            Factor::Mat(m) => m[(r, i)],
                        };
                        if a == 0 {
                            continue;
                        }
                        for j in 0..ck {
                            let b = match right {
                                Factor::Identity => u32::from(j == c),
                                Factor::Mat(m) => m[(j, c)],
                            };
                            if b == 0 {
                                continue;
                            }
                            let slot = &mut self.coeffs[row + off + i * ck + j];
                            *slot = f.mul_add(*slot, a, b);
                        }
                    }
                }
            }
        }
        for r in 0..e {
            for c in 0..g {
                self.rhs.push(rhs.map_or(0, |m| m[(r, c)]));
            }
        }
        self.n_rows += e * g;
    }

    fn term_shape(&self, (k, left, right): &(usize, Factor<'_>, Factor<'_>)) -> (usize, usize) {
        let (rk, ck) = self.shapes[*k];
        let e = match left {
            Factor::Identity => rk,
            Factor::Mat(m) => {
                assert_eq!(m.cols(), rk, "left factor does not match unknown {k}");
                m.rows()
            }
        };
        let g = match right {
            Factor::Identity => ck,
            Factor::Mat(m) => {
                assert_eq!(m.rows(), ck, "right factor does not match unknown {k}");
                m.cols()
            }
        };
        (e, g)
    }

    pub fn solve(&self) -> Solution {
        let f = self.field;
        let w = self.width;
        let mut aug = Matrix::zeros(f, self.n_rows, w + 1);
        for r in 0..self.n_rows {
            for c in 0..w {
                aug[(r, c)] = self.coeffs[r * w + c];
            }
            aug[(r, w)] = self.rhs[r];
        }
        let ech = aug.rref();
        let consistent = ech.pivots.last().map_or(true, |&c| c < w);
        let coeff_pivots: Vec<usize> = ech.pivots.iter().copied().filter(|&c| c < w).collect();
        let coeff_ech = super::matrix::Echelon {
            reduced: ech.reduced.clone(),
            pivots: coeff_pivots.clone(),
        };
        let kernel = kernel_from_echelon(&coeff_ech, w);
        let mut is_pivot = vec![false; w];
        for &c in &coeff_pivots {
            is_pivot[c] = true;
        }
        let free = (0..w).filter(|&c| !is_pivot[c]).collect();
        let particular = consistent.then(|| {
            let mut x = vec![0u32; w];
            for (r, &c) in coeff_pivots.iter().enumerate() {
                x[c] = ech.reduced[(r, w)];
            }
            x
        });
        Solution {
            particular,
            kernel,
            free,
        }
    }

    /// Split a flat solution vector back into the unknown matrices.
    pub fn unflatten(&self, v: &[u32]) -> Vec<Matrix> {
        self.shapes
            .iter()
            .zip(&self.offsets)
            .map(|(&(r, c), &off)| Matrix::from_vec(self.field, r, c, v[off..off + r * c].to_vec()))
            .collect()
    }
}
