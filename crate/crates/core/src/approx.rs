//! Approximations of arbitrary representations by subspace
//! representations: the torsion-free quotient `L(X)` (left) and the
//! iterated monomorphism correction `R(X)` (right).

use crate::error::{Error, Result};
use crate::ffmat::Matrix;
use crate::lambdamod::{injective_envelope, lift_through_mono, LambdaModule};
use crate::posetrep::{hom_basis, solve_in_span, Morphism, Representation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproxKind {
    Left,
    Right,
    Mimo(usize),
}

#[derive(Clone, Debug)]
pub struct ApproxResult {
    pub approx: Representation,
    /// `l: X -> L(X)` for left approximations, `r: R(X) -> X` otherwise.
    pub structure_map: Morphism,
    pub kind: ApproxKind,
}

/// `L_i = im X_{i*}` inside `X_*`, arrows are inclusions.
pub fn left_approx(x: &Representation) -> ApproxResult {
    let q = x.quiver();
    let top = q.top();
    let f = x.field();
    let nv = q.num_vertices();
    let to_top: Vec<Matrix> = (0..nv).map(|v| x.composite_map(v, top).expect("below the star")).collect();
    let bases: Vec<Matrix> = (0..nv)
        .map(|v| {
            if v == top {
                Matrix::identity(f, x.space(top).dim())
            } else {
                to_top[v].column_space_basis()
            }
        })
        .collect();
    let top_module = x.space(top);
    let spaces: Vec<LambdaModule> = bases.iter().map(|b| top_module.restrict(b)).collect();
    let maps = q
        .arrows()
        .iter()
        .map(|&(s, t)| bases[t].solve(&bases[s]).expect("images are nested"))
        .collect();
    let l = Morphism::new(
        (0..nv)
            .map(|v| bases[v].solve(&to_top[v]).expect("corestriction onto the image"))
            .collect(),
    );
    let approx = Representation::new(q.clone(), x.algebra(), spaces, maps).expect("shapes agree");
    ApproxResult {
        approx,
        structure_map: l,
        kind: ApproxKind::Left,
    }
}

/// Adjoin the injective envelope of `ker X_{k*}` at every vertex not below
/// `k`, making the arrows out of `k` injective.
pub fn mimo_k(x: &Representation, k: usize) -> Result<ApproxResult> {
    let q = x.quiver();
    let nv = q.num_vertices();
    if k >= nv {
        return Err(Error::UnknownVertex(k.to_string()));
    }
    let f = x.field();
    let top = q.top();
    let xk = x.space(k);
    let ker = x.composite_map(k, top)?.kernel_basis();
    let ker_mod = xk.restrict(&ker);
    let (env, emb) = injective_envelope(&ker_mod);
    let e_k = lift_through_mono(&ker, &emb, xk, &env)?;
    let id_env = Matrix::identity(f, env.dim());
    let above = |i: usize| !q.leq(i, k);
    let spaces: Vec<LambdaModule> = (0..nv)
        .map(|i| {
            if above(i) {
                LambdaModule::direct_sum(&[x.space(i), &env])
            } else {
                x.space(i).clone()
            }
        })
        .collect();
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, &(s, t))| {
            let xa = x.map(a);
            match (above(s), above(t)) {
                (false, false) => xa.clone(),
                (false, true) => {
                    let to_k = x.composite_map(s, k).expect("s below k");
                    xa.vstack(&e_k.mul(&to_k))
                }
                (true, true) => Matrix::block_diag(f, &[xa, &id_env]),
                (true, false) => unreachable!("arrows go upwards"),
            }
        })
        .collect();
    let proj = Morphism::new(
        (0..nv)
            .map(|i| {
                let d = x.space(i).dim();
                if above(i) {
                    Matrix::identity(f, d).hstack(&Matrix::zeros(f, d, env.dim()))
                } else {
                    Matrix::identity(f, d)
                }
            })
            .collect(),
    );
    let approx = Representation::new(q.clone(), x.algebra(), spaces, maps)?;
    Ok(ApproxResult {
        approx,
        structure_map: proj,
        kind: ApproxKind::Mimo(k),
    })
}

/// `Mimo` at every vertex of the base poset, last in the linear extension
/// first; the structure map is the composite of the projections.
pub fn right_approx(x: &Representation) -> ApproxResult {
    let q = x.quiver();
    let mut cur = x.clone();
    let mut r = Morphism::identity(x);
    for &k in q.base_vertices().iter().rev() {
        let step = mimo_k(&cur, k).expect("vertex of the quiver");
        r = r.compose(&step.structure_map);
        cur = step.approx;
    }
    ApproxResult {
        approx: cur,
        structure_map: r,
        kind: ApproxKind::Right,
    }
}

/// A test object and a hom basis element that does not factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub test: usize,
    pub basis_element: usize,
}

/// Every map from a test object into `X` factors through `r`.
pub fn verify_right_approx(res: &ApproxResult, x: &Representation, tests: &[Representation]) -> Result<(), Counterexample> {
    use rayon::prelude::*;
    let r = &res.structure_map;
    let failures: Vec<Option<Counterexample>> = tests
        .par_iter()
        .enumerate()
        .map(|(ti, test)| {
            let to_x = hom_basis(test, x);
            if to_x.is_zero() {
                return None;
            }
            let to_r = hom_basis(test, &res.approx);
            let images: Vec<Morphism> = to_r.basis().iter().map(|h| r.compose(h)).collect();
            to_x.basis()
                .iter()
                .position(|h| solve_in_span(&images, h).is_none())
                .map(|b| Counterexample {
                    test: ti,
                    basis_element: b,
                })
        })
        .collect();
    match failures.into_iter().flatten().next() {
        Some(c) => Err(c),
        None => Ok(()),
    }
}

/// Every map from `X` into a test object factors through `l`.
pub fn verify_left_approx(res: &ApproxResult, x: &Representation, tests: &[Representation]) -> Result<(), Counterexample> {
    let l = &res.structure_map;
    for (ti, test) in tests.iter().enumerate() {
        let from_x = hom_basis(x, test);
        if from_x.is_zero() {
            continue;
        }
        let from_l = hom_basis(&res.approx, test);
        let images: Vec<Morphism> = from_l.basis().iter().map(|h| h.compose(l)).collect();
        if let Some(b) = from_x.basis().iter().position(|h| solve_in_span(&images, h).is_none()) {
            return Err(Counterexample {
                test: ti,
                basis_element: b,
            });
        }
    }
    Ok(())
}
