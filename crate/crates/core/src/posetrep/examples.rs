//! Named representations of the example star quiver over `F_p[T]/T^2`.

use std::sync::Arc;

use crate::ffmat::{Matrix, PrimeField};
use crate::lambdamod::{LambdaAlgebra, LambdaModule};

use super::{from_subspaces, Quiver, Representation};

fn algebra(p: u32) -> LambdaAlgebra {
    LambdaAlgebra::new(PrimeField::new(p).expect("prime"), 2).expect("n = 2")
}

/// Λ at every vertex with identity arrows.
pub fn module_m(p: u32) -> Representation {
    Representation::constant(Arc::new(Quiver::example()), &algebra(p).regular())
}

/// Star space `Λa ⊕ Λb` (basis `1a, Ta, 1b, Tb`) with
/// `N1 = <Ta>`, `N2 = <Ta, 1b, Tb>`, `N3 = <1a + 1b, Ta + Tb, Ta>`.
pub fn module_n(p: u32) -> Representation {
    let alg = algebra(p);
    let f = alg.field();
    let total = alg.free(2);
    let n1 = Matrix::from_rows(f, &[vec![0], vec![1], vec![0], vec![0]]);
    let n2 = Matrix::from_rows(f, &[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    let n3 = Matrix::from_rows(f, &[vec![1, 0, 0], vec![0, 1, 1], vec![1, 0, 0], vec![0, 1, 0]]);
    let top = Matrix::identity(f, 4);
    from_subspaces(Arc::new(Quiver::example()), &total, &[n1, n2, n3, top]).expect("N is a subspace representation")
}

/// `k` at the star, zero elsewhere.
pub fn simple_at_top(quiver: &Arc<Quiver>, p: u32) -> Representation {
    let alg = algebra(p);
    let top = quiver.top();
    let f = alg.field();
    let spaces: Vec<LambdaModule> = (0..quiver.num_vertices())
        .map(|v| if v == top { alg.simple() } else { alg.zero_module() })
        .collect();
    let maps = quiver
        .arrows()
        .iter()
        .map(|&(s, t)| Matrix::zeros(f, spaces[t].dim(), spaces[s].dim()))
        .collect();
    Representation::new(quiver.clone(), alg, spaces, maps).expect("shapes agree")
}
