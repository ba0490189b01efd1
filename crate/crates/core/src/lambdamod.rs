//! Finite-dimensional modules over the truncated polynomial ring
//! `Λ = k[T]/T^n`.
//!
//! A module is a vector space with a nilpotent operator `t` (the action of
//! `T`) satisfying `t^n = 0`. Λ is self-injective, so the injective modules
//! are exactly the free ones and every envelope has the closed form
//! `Λ^s` with one free generator per Jordan block.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::ffmat::{subspace, Factor, LinearSystem, Matrix, PrimeField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LambdaAlgebra {
    field: PrimeField,
    n: usize,
}

impl LambdaAlgebra {
    pub fn new(field: PrimeField, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPoset("nilpotency bound must be at least 1".into()));
        }
        Ok(Self { field, n })
    }

    /// `k[T]/T^2` over `F_p`.
    pub fn dual_numbers(p: u32) -> Result<Self> {
        Self::new(PrimeField::new(p)?, 2)
    }

    pub fn field(self) -> PrimeField {
        self.field
    }

    pub fn n(self) -> usize {
        self.n
    }

    /// Nilpotent Jordan block of size `d` in the basis `g, Tg, ..., T^(d-1)g`.
    pub fn jordan_block(self, d: usize) -> Matrix {
        let mut t = Matrix::zeros(self.field, d, d);
        for a in 1..d {
            t[(a, a - 1)] = 1;
        }
        t
    }

    pub fn zero_module(self) -> LambdaModule {
        LambdaModule {
            algebra: self,
            t: Matrix::zeros(self.field, 0, 0),
        }
    }

    /// The regular module Λ with basis `1, T, ..., T^(n-1)`.
    pub fn regular(self) -> LambdaModule {
        self.from_blocks(&[self.n])
    }

    /// The simple module `k = Λ/(T)`.
    pub fn simple(self) -> LambdaModule {
        self.from_blocks(&[1])
    }

    pub fn free(self, s: usize) -> LambdaModule {
        self.from_blocks(&vec![self.n; s])
    }

    /// Direct sum of Jordan blocks of the given sizes, in order.
    pub fn from_blocks(self, sizes: &[usize]) -> LambdaModule {
        let blocks: Vec<Matrix> = sizes
            .iter()
            .map(|&d| {
                assert!(d >= 1 && d <= self.n, "block size {d} outside [1, {}]", self.n);
                self.jordan_block(d)
            })
            .collect();
        let refs: Vec<&Matrix> = blocks.iter().collect();
        LambdaModule {
            algebra: self,
            t: Matrix::block_diag(self.field, &refs),
        }
    }

    /// A module of the given dimension with random block structure,
    /// presented in a random basis.
    pub fn random_module<R: Rng + ?Sized>(self, dim: usize, rng: &mut R) -> LambdaModule {
        let mut sizes = Vec::new();
        let mut left = dim;
        while left > 0 {
            let d = rng.gen_range(1..=left.min(self.n));
            sizes.push(d);
            left -= d;
        }
        let m = self.from_blocks(&sizes);
        let p = Matrix::random_invertible(self.field, dim, rng);
        m.conjugate(&p)
    }
}

/// A Λ-module: a square matrix `t` with `t^n = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LambdaModule {
    algebra: LambdaAlgebra,
    t: Matrix,
}

impl LambdaModule {
    pub fn new(algebra: LambdaAlgebra, t: Matrix) -> Result<Self> {
        if !t.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "T-action must be square, got {}x{}",
                t.rows(),
                t.cols()
            )));
        }
        if t.field() != algebra.field() {
            return Err(Error::DimensionMismatch("T-action over the wrong field".into()));
        }
        if !t.pow(algebra.n() as u64).is_zero() {
            return Err(Error::Invalid(format!("T-action is not nilpotent of index <= {}", algebra.n())));
        }
        Ok(Self { algebra, t })
    }

    pub fn algebra(&self) -> LambdaAlgebra {
        self.algebra
    }

    pub fn field(&self) -> PrimeField {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.t.rows()
    }

    pub fn t(&self) -> &Matrix {
        &self.t
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// The same module in the basis given by the columns of `p`:
    /// `p^-1 t p`.
    pub fn conjugate(&self, p: &Matrix) -> LambdaModule {
        let inv = p.inverse().expect("change of basis must be invertible");
        LambdaModule {
            algebra: self.algebra,
            t: inv.mul(&self.t).mul(p),
        }
    }

    /// Is `map: self -> target` a Λ-homomorphism?
    pub fn is_equivariant(&self, map: &Matrix, target: &LambdaModule) -> bool {
        map.shape() == (target.dim(), self.dim()) && map.mul(&self.t) == target.t.mul(map)
    }

    pub fn direct_sum(mods: &[&LambdaModule]) -> LambdaModule {
        let algebra = mods[0].algebra;
        let ts: Vec<&Matrix> = mods.iter().map(|m| &m.t).collect();
        LambdaModule {
            algebra,
            t: Matrix::block_diag(algebra.field(), &ts),
        }
    }

    /// Submodule on the span of the columns of `basis` (assumed independent
    /// and T-invariant), in that basis.
    pub fn restrict(&self, basis: &Matrix) -> LambdaModule {
        let t = basis
            .solve(&self.t.mul(basis))
            .expect("restricted subspace is not T-invariant");
        LambdaModule {
            algebra: self.algebra,
            t,
        }
    }

    /// Basis of the smallest submodule containing the given columns.
    pub fn generated_submodule(&self, gens: &Matrix) -> Matrix {
        let mut acc = gens.clone();
        let mut cur = gens.clone();
        for _ in 1..self.algebra.n() {
            cur = self.t.mul(&cur);
            acc = acc.hstack(&cur);
        }
        subspace::basis(&acc)
    }

    /// Vector-space dual with the transposed action.
    pub fn dual(&self) -> LambdaModule {
        LambdaModule {
            algebra: self.algebra,
            t: self.t.transpose(),
        }
    }

    pub fn is_injective(&self) -> bool {
        self.block_invariants().sizes().iter().all(|&d| d == self.algebra.n())
    }

    pub fn block_invariants(&self) -> BlockInvariants {
        block_invariants(self)
    }

    /// A Jordan basis: block sizes (largest first) and a matrix whose
    /// columns are `g, Tg, ..., T^(d-1)g` for each block generator `g`.
    pub fn jordan_basis(&self) -> (Vec<usize>, Matrix) {
        let f = self.field();
        let dim = self.dim();
        let n = self.algebra.n();
        // kernels of powers of t
        let mut kernels = Vec::with_capacity(n + 2);
        let mut power = Matrix::identity(f, dim);
        kernels.push(Matrix::zeros(f, dim, 0));
        for _ in 1..=n {
            power = power.mul(&self.t);
            kernels.push(power.kernel_basis());
        }
        kernels.push(kernels[n].clone());
        let mut sizes = Vec::new();
        let mut cols: Vec<Vec<u32>> = Vec::new();
        for k in (1..=n).rev() {
            let lower = kernels[k - 1].hstack(&self.t.mul(&kernels[k + 1]));
            let gens = subspace::complement(&lower, &kernels[k]);
            for j in 0..gens.cols() {
                let mut v = gens.column(j);
                for _ in 0..k {
                    cols.push(v.clone());
                    v = self.t.mul_vec(&v);
                }
                sizes.push(k);
            }
        }
        (sizes, Matrix::from_columns(f, dim, &cols))
    }
}

impl fmt::Debug for LambdaModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LambdaModule(dim {}, t = {:?})", self.dim(), self.t.to_rows())
    }
}

/// Multiset of Jordan block sizes, sorted largest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockInvariants(Vec<usize>);

impl BlockInvariants {
    pub fn new(mut sizes: Vec<usize>) -> Self {
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Self(sizes)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    /// Number of indecomposable summands.
    pub fn count(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Cyclic modules have at most one block.
    pub fn is_cyclic(&self) -> bool {
        self.0.len() <= 1
    }
}

impl fmt::Display for BlockInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

/// Block sizes from the ranks of the powers of `t`.
pub fn block_invariants(m: &LambdaModule) -> BlockInvariants {
    let n = m.algebra.n();
    let mut ranks = Vec::with_capacity(n + 2);
    let mut power = Matrix::identity(m.field(), m.dim());
    ranks.push(m.dim());
    for _ in 1..=n + 1 {
        power = power.mul(&m.t);
        ranks.push(power.rank());
    }
    let mut sizes = Vec::new();
    for k in 1..=n {
        // blocks of size >= k minus blocks of size >= k+1
        let exact = (ranks[k - 1] - ranks[k]) - (ranks[k] - ranks[k + 1]);
        sizes.extend(std::iter::repeat(k).take(exact));
    }
    BlockInvariants::new(sizes)
}

/// Columns span `soc m = ker t`.
pub fn socle(m: &LambdaModule) -> Matrix {
    m.t.kernel_basis()
}

/// Injective envelope `m -> Λ^s`, one free summand per block of `m`; a
/// block generator of size `d` goes to `T^(n-d)` times its free generator.
pub fn injective_envelope(m: &LambdaModule) -> (LambdaModule, Matrix) {
    let alg = m.algebra;
    let n = alg.n();
    let (sizes, g) = m.jordan_basis();
    let env = alg.free(sizes.len());
    let mut images = Matrix::zeros(alg.field(), env.dim(), m.dim());
    let mut col = 0;
    for (b, &d) in sizes.iter().enumerate() {
        for a in 0..d {
            images[(b * n + n - d + a, col)] = 1;
            col += 1;
        }
    }
    let emb = if m.dim() == 0 {
        images
    } else {
        images.mul(&g.inverse().expect("Jordan basis is a basis"))
    };
    (env, emb)
}

/// Extend `a_to_i` along the monomorphism `a_to_b` into the injective
/// module `i`: returns a Λ-map `e: b -> i` with `e * a_to_b = a_to_i`.
pub fn lift_through_mono(
    a_to_b: &Matrix,
    a_to_i: &Matrix,
    b: &LambdaModule,
    i: &LambdaModule,
) -> Result<Matrix> {
    let f = b.field();
    let mut sys = LinearSystem::new(f, &[(i.dim(), b.dim())]);
    let neg_ti = i.t.scale(f.neg(1));
    sys.add_equation(
        &[
            (0, Factor::Identity, Factor::Mat(&b.t)),
            (0, Factor::Mat(&neg_ti), Factor::Identity),
        ],
        None,
    );
    sys.add_equation(&[(0, Factor::Identity, Factor::Mat(a_to_b))], Some(a_to_i));
    let sol = sys.solve();
    let x = sol.particular.ok_or_else(|| {
        Error::InternalContractViolation("no lift through monomorphism; target is not injective".into())
    })?;
    Ok(sys.unflatten(&x).remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alg(p: u32) -> LambdaAlgebra {
        LambdaAlgebra::dual_numbers(p).unwrap()
    }

    #[test]
    fn block_invariant_examples() {
        let a = alg(2);
        let lam = LambdaModule::new(a, Matrix::from_rows(a.field(), &[vec![0, 1], vec![0, 0]])).unwrap();
        assert_eq!(block_invariants(&lam).sizes(), &[2]);
        let kk = LambdaModule::new(a, Matrix::zeros(a.field(), 2, 2)).unwrap();
        assert_eq!(block_invariants(&kk).sizes(), &[1, 1]);
        assert_eq!(block_invariants(&a.free(2)).sizes(), &[2, 2]);
    }

    #[test]
    fn rejects_non_nilpotent_action() {
        let a = alg(3);
        assert!(LambdaModule::new(a, Matrix::identity(a.field(), 1)).is_err());
        // T^2 != 0 for a 3-block when n = 2
        let t3 = LambdaAlgebra::new(a.field(), 3).unwrap().jordan_block(3);
        assert!(LambdaModule::new(a, t3).is_err());
    }

    #[test]
    fn socle_examples() {
        let a = alg(3);
        let s = socle(&a.regular());
        assert_eq!(s, Matrix::from_rows(a.field(), &[vec![0], vec![1]]));
        assert_eq!(socle(&a.simple()).cols(), 1);
        assert_eq!(socle(&a.zero_module()).cols(), 0);
    }

    #[test]
    fn envelope_of_simple_is_socle_inclusion() {
        let a = alg(2);
        let (env, emb) = injective_envelope(&a.simple());
        assert_eq!(env, a.regular());
        assert_eq!(emb, Matrix::from_rows(a.field(), &[vec![0], vec![1]]));
    }

    #[test]
    fn envelope_of_regular_is_identity() {
        let a = alg(5);
        let (env, emb) = injective_envelope(&a.regular());
        assert_eq!(env, a.regular());
        assert!(emb.is_identity());
    }

    #[test]
    fn envelope_of_k_plus_lambda() {
        let a = alg(3);
        let m = a.from_blocks(&[1, 2]);
        let (env, emb) = injective_envelope(&m);
        assert_eq!(env.block_invariants().sizes(), &[2, 2]);
        assert_eq!(emb.rank(), 3);
        assert!(m.is_equivariant(&emb, &env));
    }

    #[test]
    fn lift_examples() {
        let a = alg(2);
        let f = a.field();
        let lam = a.regular();
        let id = Matrix::identity(f, 2);
        // identity mono: lift is the given map
        let g = Matrix::from_rows(f, &[vec![1, 0], vec![1, 1]]);
        assert_eq!(lift_through_mono(&id, &g, &lam, &lam).unwrap(), g);
        // socle inclusion into Λ, extended along itself
        let soc = socle(&lam);
        let e = lift_through_mono(&soc, &soc, &lam, &lam).unwrap();
        assert_eq!(e.mul(&soc), soc);
        assert!(lam.is_equivariant(&e, &lam));
        // zero map on the socle
        let zero = Matrix::zeros(f, 2, 1);
        let e = lift_through_mono(&soc, &zero, &lam, &lam).unwrap();
        assert!(e.mul(&soc).is_zero());
        assert!(lam.is_equivariant(&e, &lam));
    }

    #[test]
    fn lift_into_non_injective_is_contract_violation() {
        let a = alg(2);
        let f = a.field();
        // k -> Λ socle inclusion, map k -> k identity; k is not injective
        let soc = socle(&a.regular());
        let id1 = Matrix::identity(f, 1);
        let err = lift_through_mono(&soc, &id1, &a.regular(), &a.simple());
        assert!(matches!(err, Err(Error::InternalContractViolation(_))));
    }

    #[test]
    fn invariants_survive_base_change() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..500 {
            let p = [2, 3, 5][trial % 3];
            let n = 1 + trial % 4;
            let a = LambdaAlgebra::new(PrimeField::new(p).unwrap(), n).unwrap();
            let dim = rng.gen_range(0..=8);
            let m = a.random_module(dim, &mut rng);
            let q = Matrix::random_invertible(a.field(), dim, &mut rng);
            assert_eq!(block_invariants(&m), block_invariants(&m.conjugate(&q)));
            assert_eq!(block_invariants(&m).total(), dim);
        }
    }

    #[test]
    fn envelope_is_equivariant_mono() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..300 {
            let p = [2, 3, 5][trial % 3];
            let n = 1 + trial % 3;
            let a = LambdaAlgebra::new(PrimeField::new(p).unwrap(), n).unwrap();
            let m = a.random_module(rng.gen_range(0..=8), &mut rng);
            let (env, emb) = injective_envelope(&m);
            assert!(env.is_injective());
            assert_eq!(emb.rank(), m.dim());
            assert!(m.is_equivariant(&emb, &env));
            // socle maps onto the socle of the envelope
            let s = emb.mul(&socle(&m));
            assert!(subspace::equal(&s, &socle(&env)));
        }
    }

    /// Every nonzero submodule of the envelope meets the image: checked on
    /// all cyclic submodules `Λv` for `p = 2`, `dim env <= 6`.
    #[test]
    fn envelope_is_essential_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = alg(2);
        let f = a.field();
        for _ in 0..40 {
            let dim = rng.gen_range(1..=4);
            let m = a.random_module(dim, &mut rng);
            let (env, emb) = injective_envelope(&m);
            if env.dim() > 6 {
                continue;
            }
            for code in 1u32..(1 << env.dim()) {
                let v: Vec<u32> = (0..env.dim()).map(|i| (code >> i) & 1).collect();
                let cyc = env.generated_submodule(&Matrix::from_columns(f, env.dim(), &[v]));
                let meet = subspace::intersection(&cyc, &emb);
                assert!(meet.cols() > 0, "cyclic submodule misses the image");
            }
        }
    }

    #[test]
    fn lift_satisfies_both_equations_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = alg(3);
        for _ in 0..100 {
            let b = a.random_module(rng.gen_range(1..=6), &mut rng);
            // random submodule A of B, and its envelope as the map to lift
            let gens = Matrix::random(a.field(), b.dim(), 1, &mut rng);
            let sub = b.generated_submodule(&gens);
            let am = b.restrict(&sub);
            let (i, emb) = injective_envelope(&am);
            let e = lift_through_mono(&sub, &emb, &b, &i).unwrap();
            assert_eq!(e.mul(&sub), emb);
            assert!(b.is_equivariant(&e, &i));
        }
    }
}
