use crate::ffmat::{subspace, Matrix};
use crate::posetrep::{EndAlgebra, Morphism};

/// Jacobson radical of an endomorphism algebra, as coordinates in the
/// algebra's basis.
#[derive(Clone, Debug)]
pub struct RadicalData {
    /// Columns are coordinate vectors of a basis of the radical.
    pub coords: Matrix,
    pub basis: Vec<Morphism>,
    pub quotient_dim: usize,
}

impl RadicalData {
    pub fn dim(&self) -> usize {
        self.coords.cols()
    }

    pub fn contains(&self, coords: &[u32]) -> bool {
        let f = self.coords.field();
        subspace::contains(&self.coords, &Matrix::from_columns(f, coords.len(), &[coords.to_vec()]))
    }
}

/// Trace of `m^(p^i)` for the integer lift of `m`, modulo `p^(i+1)`.
fn lifted_trace(m: &Matrix, p: u64, i: u32) -> u64 {
    let modulus = p.pow(i + 1);
    let n = m.rows();
    if n == 0 {
        return 0;
    }
    let mut base: Vec<u64> = m.data().iter().map(|&x| u64::from(x)).collect();
    let mut acc: Vec<u64> = (0..n * n).map(|k| u64::from(k % (n + 1) == 0)).collect();
    let mul = |a: &[u64], b: &[u64]| {
        let mut c = vec![0u64; n * n];
        for r in 0..n {
            for k in 0..n {
                let x = a[r * n + k];
                if x == 0 {
                    continue;
                }
                for col in 0..n {
                    c[r * n + col] = (c[r * n + col] + x * b[k * n + col]) % modulus;
                }
            }
        }
        c
    };
    let mut e = p.pow(i);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    (0..n).fold(0u64, |s, r| (s + acc[r * n + r]) % modulus)
}

/// `g_i(a)`: the lifted trace of the block-diagonal matrix, divided by
/// `p^i`.
fn trace_functional(a: &Morphism, p: u64, i: u32) -> u32 {
    let modulus = p.pow(i + 1);
    let tr = a.components().iter().fold(0u64, |s, c| (s + lifted_trace(c, p, i)) % modulus);
    (tr / p.pow(i)) as u32
}

/// Radical of an algebra of block-diagonal matrices via the iterated
/// trace-form criterion (valid in every characteristic):
/// `I_i = { a in I_(i-1) : g_i(ab) = 0 for all b }`, radical `= I_l` with
/// `l = floor(log_p N)` for matrices of size `N`.
pub fn radical(alg: &EndAlgebra) -> RadicalData {
    let f = alg.field();
    let p = u64::from(f.p());
    let d = alg.dim();
    let basis = alg.basis();
    let size: usize = basis.first().map_or(0, |b| b.components().iter().map(Matrix::rows).sum());
    let mut levels = 0u32;
    let mut pw = p;
    while pw <= size as u64 {
        levels += 1;
        pw *= p;
    }
    // current ideal as coordinate columns
    let mut cur = Matrix::identity(f, d);
    for i in 0..=levels {
        if cur.cols() == 0 {
            break;
        }
        let elems: Vec<Morphism> = (0..cur.cols()).map(|j| alg.hom.combine(&cur.column(j))).collect();
        let mut g = Matrix::zeros(f, d, elems.len());
        for (k, a) in elems.iter().enumerate() {
            for (l, b) in basis.iter().enumerate() {
                g[(l, k)] = trace_functional(&a.compose(b), p, i);
            }
        }
        let ker = g.kernel_basis();
        cur = cur.mul(&ker);
    }
    let coords = cur;
    let rad_basis = (0..coords.cols()).map(|j| alg.hom.combine(&coords.column(j))).collect();
    RadicalData {
        quotient_dim: d - coords.cols(),
        coords,
        basis: rad_basis,
    }
}

/// Two-sided ideal and nilpotent: the post-hoc certificate of a radical.
pub fn is_nilpotent_ideal(alg: &EndAlgebra, rad: &RadicalData) -> bool {
    let f = alg.field();
    let d = alg.dim();
    let col = |v: Vec<u32>| Matrix::from_columns(f, d, &[v]);
    for j in 0..rad.dim() {
        let a = rad.coords.column(j);
        for b in 0..d {
            let mut e = vec![0u32; d];
            e[b] = 1;
            if !subspace::contains(&rad.coords, &col(alg.mul(&a, &e)))
                || !subspace::contains(&rad.coords, &col(alg.mul(&e, &a)))
            {
                return false;
            }
        }
    }
    // powers J^k shrink to zero
    let mut power = rad.coords.clone();
    for _ in 0..=d {
        if power.cols() == 0 {
            return true;
        }
        let mut prods = Vec::new();
        for i in 0..power.cols() {
            for j in 0..rad.dim() {
                prods.push(alg.mul(&power.column(i), &rad.coords.column(j)));
            }
        }
        power = subspace::basis(&Matrix::from_columns(f, d, &prods));
    }
    power.cols() == 0
}

/// Is `End/J` a division ring? Exhaustive over the quotient when it has at
/// most `2^16` elements, otherwise `10^4` random elements.
pub fn quotient_is_division_ring<R: rand::Rng + ?Sized>(alg: &EndAlgebra, rad: &RadicalData, rng: &mut R) -> bool {
    let f = alg.field();
    let d = alg.dim();
    if rad.quotient_dim == 0 {
        return false;
    }
    if rad.quotient_dim == 1 {
        return true;
    }
    let comp = subspace::complement(&rad.coords, &Matrix::identity(f, d));
    let q = comp.cols();
    let invertible = |coeffs: &[u32]| {
        let v = comp.mul(&Matrix::from_columns(f, q, &[coeffs.to_vec()])).column(0);
        alg.hom.combine(&v).is_iso()
    };
    let p = u64::from(f.p());
    let total = p.checked_pow(q as u32);
    match total {
        Some(t) if t <= 1 << 16 => (1..t).all(|mut code| {
            let coeffs: Vec<u32> = (0..q)
                .map(|_| {
                    let c = (code % p) as u32;
                    code /= p;
                    c
                })
                .collect();
            invertible(&coeffs)
        }),
        _ => (0..10_000).all(|_| {
            let coeffs: Vec<u32> = (0..q).map(|_| f.random(rng)).collect();
            coeffs.iter().all(|&c| c == 0) || invertible(&coeffs)
        }),
    }
}
