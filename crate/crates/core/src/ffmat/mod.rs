//! Exact dense linear algebra and polynomial arithmetic over prime fields.

mod field;
mod linsys;
mod matrix;
mod poly;
pub mod subspace;

pub use field::PrimeField;
pub use linsys::{Factor, LinearSystem, Solution};
pub use matrix::{kernel_from_echelon, Echelon, Matrix};
pub use poly::{char_poly, min_poly, Poly};

use crate::error::Result;

/// `rref(m) -> (reduced, pivot columns, rank)`.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>, usize) {
    let ech = m.rref();
    let rank = ech.rank();
    (ech.reduced, ech.pivots, rank)
}

pub fn kernel_basis(m: &Matrix) -> Matrix {
    m.kernel_basis()
}

pub fn solve(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rref_duplicate_rows_f2() {
        let f = fp(2);
        let (r, piv, rank) = rref(&Matrix::from_rows(f, &[vec![1, 1], vec![1, 1]]));
        assert_eq!(r, Matrix::from_rows(f, &[vec![1, 1], vec![0, 0]]));
        assert_eq!(piv, vec![0]);
        assert_eq!(rank, 1);
    }

    #[test]
    fn rref_identity_f5() {
        let f = fp(5);
        let id = Matrix::identity(f, 3);
        let (r, _, rank) = rref(&id);
        assert_eq!(r, id);
        assert_eq!(rank, 3);
    }

    #[test]
    fn rref_hand_reduction_f7() {
        // [[2,4],[1,2]]: scale row 0 by 2^-1 = 4 -> [1,2]; row 1 - row 0 -> 0
        let f = fp(7);
        let (r, _, rank) = rref(&Matrix::from_rows(f, &[vec![2, 4], vec![1, 2]]));
        assert_eq!(r, Matrix::from_rows(f, &[vec![1, 2], vec![0, 0]]));
        assert_eq!(rank, 1);
    }

    #[test]
    fn kernel_examples() {
        let f2 = fp(2);
        assert_eq!(kernel_basis(&Matrix::zeros(f2, 2, 3)).cols(), 3);
        assert_eq!(
            kernel_basis(&Matrix::from_rows(f2, &[vec![1, 1]])),
            Matrix::from_rows(f2, &[vec![1], vec![1]])
        );
        // enumerate all 9 vectors of F_3^2 against [[0,1],[0,0]]
        let f3 = fp(3);
        let m = Matrix::from_rows(f3, &[vec![0, 1], vec![0, 0]]);
        let brute: Vec<Vec<u32>> = (0..3)
            .flat_map(|a| (0..3).map(move |b| vec![a, b]))
            .filter(|v| m.mul_vec(v).iter().all(|&x| x == 0))
            .collect();
        assert_eq!(brute, vec![vec![0, 0], vec![1, 0], vec![2, 0]]);
        assert_eq!(kernel_basis(&m), Matrix::from_rows(f3, &[vec![1], vec![0]]));
    }

    #[test]
    fn solve_examples() {
        let f = fp(2);
        let b = Matrix::from_rows(f, &[vec![1, 0], vec![1, 1]]);
        assert_eq!(solve(&Matrix::identity(f, 2), &b).unwrap(), b);
        // candidates (0,0),(0,1),(1,0),(1,1) for x1 + x2 = 1: the free-zero one is (1,0)
        let x = solve(&Matrix::from_rows(f, &[vec![1, 1]]), &Matrix::from_rows(f, &[vec![1]])).unwrap();
        assert_eq!(x, Matrix::from_rows(f, &[vec![1], vec![0]]));
        let err = solve(&Matrix::zeros(f, 2, 2), &Matrix::from_rows(f, &[vec![1], vec![0]]));
        assert!(matches!(err, Err(Error::NoSolution)));
    }

    fn arb_matrix(p: u32, max: usize) -> impl Strategy<Value = Matrix> {
        (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(0..p, r * c)
                .prop_map(move |d| Matrix::from_vec(fp(p), r, c, d))
        })
    }

    proptest! {
        #[test]
        fn kernel_is_annihilated(m in prop_oneof![arb_matrix(2, 7), arb_matrix(3, 6), arb_matrix(5, 5)]) {
            let k = kernel_basis(&m);
            prop_assert!(m.mul(&k).is_zero());
            prop_assert_eq!(m.rank() + k.cols(), m.cols());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn solve_is_exact_or_rank_jumps(a in arb_matrix(3, 6), seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = Matrix::random(a.field(), a.rows(), 1, &mut rng);
            match solve(&a, &b) {
                Ok(x) => prop_assert_eq!(a.mul(&x), b),
                Err(_) => prop_assert!(a.hstack(&b).rank() > a.rank()),
            }
        }

        #[test]
        fn cayley_hamilton(m in prop_oneof![arb_matrix(2, 6), arb_matrix(3, 5), arb_matrix(5, 5)]
            .prop_filter("square", |m| m.is_square())) {
            let cp = char_poly(&m);
            let mp = min_poly(&m);
            prop_assert_eq!(cp.degree(), Some(m.rows()));
            prop_assert!(cp.is_monic());
            prop_assert!(cp.eval_matrix(&m).is_zero());
            prop_assert!(mp.eval_matrix(&m).is_zero());
            prop_assert!(cp.rem(&mp).is_zero());
        }
    }

    /// No monic divisor of degree 1..=deg/2, by enumeration.
    fn brute_irreducible(q: &Poly) -> bool {
        let f = q.field();
        let p = f.p();
        let deg = q.degree().unwrap();
        for d in 1..=deg / 2 {
            for code in 0..(p as usize).pow(d as u32) {
                let mut c = Vec::with_capacity(d + 1);
                let mut k = code;
                for _ in 0..d {
                    c.push((k % p as usize) as u32);
                    k /= p as usize;
                }
                c.push(1);
                if q.rem(&Poly::new(f, c)).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn factor_multiplies_back_1000_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        use rand::Rng;
        for trial in 0..1000 {
            let p = [2u32, 3, 5][trial % 3];
            let f = fp(p);
            let deg = rng.gen_range(0..=8);
            let mut c: Vec<u32> = (0..=deg).map(|_| f.random(&mut rng)).collect();
            c[deg] = f.random_nonzero(&mut rng);
            let poly = Poly::new(f, c);
            let fac = poly.factor(&mut rng).unwrap();
            let mut back = Poly::constant(f, poly.leading());
            for (q, m) in &fac {
                assert!(q.is_monic());
                assert!(brute_irreducible(q), "{q} reducible");
                back = back.mul(&q.pow(*m as u64));
            }
            assert_eq!(back, poly, "trial {trial}");
        }
    }
}
