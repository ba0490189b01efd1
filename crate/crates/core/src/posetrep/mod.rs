//! Posets, the star quiver `P*`, representations over Λ, morphism spaces
//! and endomorphism algebras.

mod morphism;
mod poset;
mod rep;

pub mod examples;

pub use morphism::{
    end_algebra, factors_through_left, factors_through_right, hom_basis, solve_in_span, split_by_retraction,
    EndAlgebra, HomSpace, Morphism, Split,
};
pub use poset::{Poset, Quiver, STAR};
pub use rep::{Representation, Violation};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffmat::{subspace, Matrix};
use crate::lambdamod::LambdaModule;

/// Representation of a star quiver given by T-invariant subspaces of a
/// total module, one basis per vertex (the star's entry is ignored).
/// Arrows are the inclusions written in those bases.
pub fn from_subspaces(quiver: Arc<Quiver>, total: &LambdaModule, bases: &[Matrix]) -> Result<Representation> {
    let top = quiver.top();
    let nv = quiver.num_vertices();
    if bases.len() != nv {
        return Err(Error::DimensionMismatch(format!("{} bases for {nv} vertices", bases.len())));
    }
    let bases: Vec<Matrix> = (0..nv)
        .map(|v| {
            if v == top {
                Matrix::identity(total.field(), total.dim())
            } else {
                subspace::basis(&bases[v])
            }
        })
        .collect();
    for (v, b) in bases.iter().enumerate() {
        if !subspace::contains(b, &total.t().mul(b)) {
            return Err(Error::Invalid(format!("subspace at {} is not T-invariant", quiver.label(v))));
        }
    }
    let spaces: Vec<LambdaModule> = bases.iter().map(|b| total.restrict(b)).collect();
    let mut maps = Vec::with_capacity(quiver.arrows().len());
    for &(s, t) in quiver.arrows() {
        let m = bases[t].solve(&bases[s]).map_err(|_| Error::Invalid(format!(
            "subspace at {} is not contained in the one at {}",
            quiver.label(s),
            quiver.label(t)
        )))?;
        maps.push(m);
    }
    Representation::new(quiver, total.algebra(), spaces, maps)
}

/// Subspaces of the star space spanned by the images of each vertex.
pub fn images_in_top(x: &Representation) -> Vec<Matrix> {
    let top = x.quiver().top();
    (0..x.quiver().num_vertices())
        .map(|v| x.composite_map(v, top).expect("every vertex lies below the star"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffmat::PrimeField;
    use crate::lambdamod::LambdaAlgebra;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validate_examples() {
        let q = Arc::new(Quiver::example());
        let alg = LambdaAlgebra::dual_numbers(2).unwrap();
        assert!(Representation::zero(q.clone(), alg).is_valid());
        let m = examples::module_m(2);
        assert!(m.is_valid());
        assert!(m.is_subspace_rep());
        assert!(examples::module_n(3).is_valid());
    }

    #[test]
    fn one_bad_action_gives_one_violation() {
        let m = examples::module_m(2);
        let alg = m.algebra();
        let f = alg.field();
        // zero action at vertex 2 against identity arrows on Λ
        let mut spaces = m.spaces().to_vec();
        spaces[1] = LambdaModule::new(alg, Matrix::zeros(f, 2, 2)).unwrap();
        let bad = Representation::new(m.quiver().clone(), alg, spaces, m.maps().to_vec()).unwrap();
        let v = bad.validate();
        assert_eq!(v.len(), 2);
        assert!(v.iter().all(|x| matches!(x, Violation::NotEquivariant { .. })));
        assert!(v.iter().any(|x| x.to_string().contains("1->2")));
        assert!(v.iter().any(|x| x.to_string().contains("2->*")));
    }

    #[test]
    fn non_commuting_square_is_reported() {
        let m = examples::module_m(3);
        let f = m.field();
        let mut maps = m.maps().to_vec();
        maps[3] = Matrix::scalar(f, 2, 2);
        let bad = Representation::new(m.quiver().clone(), m.algebra(), m.spaces().to_vec(), maps).unwrap();
        let v = bad.validate();
        assert_eq!(v.len(), 1);
        assert!(matches!(&v[0], Violation::PathMismatch { from, to, .. } if from == "1" && to == "*"));
    }

    #[test]
    fn composite_maps() {
        let m = examples::module_m(2);
        let q = m.quiver().clone();
        assert!(m.composite_map(0, q.top()).unwrap().is_identity());
        assert!(m.composite_map(1, 1).unwrap().is_identity());
        assert!(matches!(m.composite_map(1, 2), Err(Error::NotComparable { .. })));
        // chain of two random monos on a three-point chain
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let chain = Arc::new(Quiver::from_poset(
            Poset::from_labels(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap(),
        ));
        let alg = LambdaAlgebra::new(PrimeField::new(5).unwrap(), 1).unwrap();
        for _ in 0..20 {
            let d: Vec<usize> = (0..3).map(|i| 1 + i + rng.gen_range(0..2)).collect();
            let a = Matrix::random(alg.field(), d[1], d[0], &mut rng);
            let b = Matrix::random(alg.field(), d[2], d[1], &mut rng);
            let spaces = d.iter().map(|&k| alg.from_blocks(&vec![1; k])).collect();
            let x = Representation::new(chain.clone(), alg, spaces, vec![a.clone(), b.clone()]).unwrap();
            assert_eq!(x.composite_map(0, 2).unwrap(), b.mul(&a));
        }
    }

    #[test]
    fn zero_arrow_is_not_subspace_rep() {
        let m = examples::module_m(2);
        let f = m.field();
        let mut maps = m.maps().to_vec();
        maps[0] = Matrix::zeros(f, 2, 2);
        maps[1] = Matrix::zeros(f, 2, 2);
        let x = Representation::new(m.quiver().clone(), m.algebra(), m.spaces().to_vec(), maps).unwrap();
        assert!(x.is_valid());
        assert!(!x.is_subspace_rep());
    }

    #[test]
    fn direct_sum_dims_add() {
        let m = examples::module_m(2);
        let n = examples::module_n(2);
        let (s, inc, proj) = Representation::direct_sum(&[&n, &m]);
        assert_eq!(s.dims(), vec![3, 5, 5, 6]);
        assert!(s.is_valid());
        for i in 0..2 {
            for j in 0..2 {
                let c = proj[i].compose(&inc[j]);
                if i == j {
                    assert!(c.is_identity());
                } else {
                    assert!(c.is_zero());
                }
            }
        }
        let (one, inc, _) = Representation::direct_sum(&[&m]);
        assert_eq!(one, m);
        assert!(inc[0].is_identity());
        // blocks at the star: N_* = {2,2} and M_* = {2}
        assert_eq!(s.space(3).block_invariants().sizes(), &[2, 2, 2]);
    }
}
