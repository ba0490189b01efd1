//! Random representations for property tests and benchmarks.

use std::sync::Arc;

use rand::Rng;

use crate::ffmat::{subspace, Factor, LinearSystem, Matrix};
use crate::lambdamod::{LambdaAlgebra, LambdaModule};
use crate::posetrep::{from_subspaces, Morphism, Quiver, Representation};

/// Random submodule of the T-invariant subspace spanned by `within`, of
/// dimension at most `max_dim`, returned as a basis in ambient coordinates.
pub fn random_submodule<R: Rng + ?Sized>(
    total: &LambdaModule,
    within: &Matrix,
    max_dim: usize,
    rng: &mut R,
) -> Matrix {
    let f = total.field();
    let amb = total.dim();
    let cap = max_dim.min(within.cols());
    let target = rng.gen_range(0..=cap);
    let mut cur = Matrix::zeros(f, amb, 0);
    let mut attempts = 0;
    while cur.cols() < target && attempts < 8 * (target + 1) {
        attempts += 1;
        let coeffs = Matrix::random(f, within.cols(), 1, rng);
        let mut v = within.mul(&coeffs);
        for _ in 0..rng.gen_range(0..total.algebra().n()) {
            v = total.t().mul(&v);
        }
        let next = total.generated_submodule(&cur.hstack(&v));
        if next.cols() <= target {
            cur = next;
        }
    }
    cur
}

/// Random subspace representation of a star quiver: a random Λ-module at
/// the star, then vertices top-down as random submodules of the
/// intersection of the subspaces above, then a random basis at each vertex.
pub fn random_subspace_rep<R: Rng + ?Sized>(
    quiver: &Arc<Quiver>,
    algebra: LambdaAlgebra,
    max_dims: &[usize],
    rng: &mut R,
) -> Representation {
    let f = algebra.field();
    let top = quiver.top();
    let total_dim = rng.gen_range(0..=max_dims[top]);
    let total = algebra.random_module(total_dim, rng);
    let nv = quiver.num_vertices();
    let mut bases = vec![Matrix::identity(f, total_dim); nv];
    for &v in quiver.order().iter().rev() {
        if v == top {
            continue;
        }
        let mut within = Matrix::identity(f, total_dim);
        for (_, t) in quiver.arrows_from(v) {
            within = subspace::intersection(&within, &bases[t]);
        }
        bases[v] = random_submodule(&total, &within, max_dims[v], rng);
    }
    let x = from_subspaces(quiver.clone(), &total, &bases).expect("constructed subspaces are nested and invariant");
    random_base_change(&x, rng).0
}

/// The same representation in random bases, with the isomorphism to the
/// original.
pub fn random_base_change<R: Rng + ?Sized>(x: &Representation, rng: &mut R) -> (Representation, Morphism) {
    let f = x.field();
    let bases: Vec<Matrix> = x.dims().into_iter().map(|d| Matrix::random_invertible(f, d, rng)).collect();
    x.change_basis(&bases)
}

/// Random representation (arrows need not be injective): random modules,
/// then arrows out of each vertex, latest in the linear extension first,
/// drawn uniformly from the solutions of the equivariance and
/// commutativity system.
pub fn random_rep<R: Rng + ?Sized>(
    quiver: &Arc<Quiver>,
    algebra: LambdaAlgebra,
    max_dims: &[usize],
    rng: &mut R,
) -> Representation {
    let f = algebra.field();
    let nv = quiver.num_vertices();
    let spaces: Vec<LambdaModule> = (0..nv)
        .map(|v| algebra.random_module(rng.gen_range(0..=max_dims[v]), rng))
        .collect();
    let mut maps: Vec<Matrix> = quiver
        .arrows()
        .iter()
        .map(|&(s, t)| Matrix::zeros(f, spaces[t].dim(), spaces[s].dim()))
        .collect();
    let neg = f.neg(1);
    for &s in quiver.order().iter().rev() {
        let out: Vec<(usize, usize)> = quiver.arrows_from(s).collect();
        if out.is_empty() {
            continue;
        }
        let partial = Representation::new(quiver.clone(), algebra, spaces.clone(), maps.clone())
            .expect("shapes agree");
        let comps: Vec<Vec<Option<Matrix>>> = out.iter().map(|&(_, t)| partial.composites_from(t)).collect();
        let shapes: Vec<(usize, usize)> = out.iter().map(|&(_, t)| (spaces[t].dim(), spaces[s].dim())).collect();
        let mut sys = LinearSystem::new(f, &shapes);
        for (u, &(_, t)) in out.iter().enumerate() {
            let nt = spaces[t].t().scale(neg);
            sys.add_equation(
                &[
                    (u, Factor::Identity, Factor::Mat(spaces[s].t())),
                    (u, Factor::Mat(&nt), Factor::Identity),
                ],
                None,
            );
        }
        for a in 0..out.len() {
            for b in a + 1..out.len() {
                for w in 0..nv {
                    if let (Some(pa), Some(pb)) = (&comps[a][w], &comps[b][w]) {
                        let npb = pb.scale(neg);
                        sys.add_equation(
                            &[(a, Factor::Mat(pa), Factor::Identity), (b, Factor::Mat(&npb), Factor::Identity)],
                            None,
                        );
                    }
                }
            }
        }
        let sol = sys.solve();
        let coeffs = Matrix::random(f, sol.kernel.cols(), 1, rng);
        let flat = sol.kernel.mul(&coeffs).column(0);
        for ((k, _), m) in out.iter().zip(sys.unflatten(&flat)) {
            maps[*k] = m;
        }
    }
    Representation::new(quiver.clone(), algebra, spaces, maps).expect("shapes agree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffmat::PrimeField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_subspace_reps_are_valid() {
        let q = Arc::new(Quiver::example());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [2, 3] {
            let alg = LambdaAlgebra::new(PrimeField::new(p).unwrap(), 2).unwrap();
            for _ in 0..100 {
                let x = random_subspace_rep(&q, alg, &[4, 8, 8, 10], &mut rng);
                assert!(x.is_valid());
                assert!(x.is_subspace_rep());
                let d = x.dims();
                assert!(d[0] <= 4 && d[1] <= 8 && d[3] <= 10);
            }
        }
    }

    #[test]
    fn random_reps_are_valid_and_sometimes_not_mono() {
        let q = Arc::new(Quiver::example());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let alg = LambdaAlgebra::dual_numbers(2).unwrap();
        let mut non_mono = 0;
        for _ in 0..100 {
            let x = random_rep(&q, alg, &[4, 4, 4, 4], &mut rng);
            assert!(x.is_valid(), "{:?}", x.validate());
            non_mono += usize::from(!x.is_subspace_rep());
        }
        assert!(non_mono > 20);
    }
}
