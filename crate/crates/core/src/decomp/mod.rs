//! Krull–Schmidt decomposition by idempotents of the endomorphism
//! algebra, isomorphism tests, and finite-scale checks of the generator
//! properties of a complete set of indecomposables.

mod radical;

pub use radical::{is_nilpotent_ideal, quotient_is_division_ring, radical, RadicalData};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ffmat::{min_poly, Matrix};
use crate::posetrep::{end_algebra, hom_basis, Morphism, Representation};

/// Random endomorphisms tried per split before giving up.
pub const SPLIT_BUDGET: usize = 256;

/// Attempts made before the locality certificate is computed.
const ATTEMPTS_BEFORE_CERTIFY: usize = 4;

#[derive(Clone, Debug)]
pub struct Summand {
    pub rep: Representation,
    /// `rep -> object`.
    pub inclusion: Morphism,
    /// `object -> rep`.
    pub projection: Morphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Idempotent,
    Chase,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub seed: u64,
    pub method: Method,
    pub steps: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub object: Representation,
    pub summands: Vec<Summand>,
    pub certificate: Certificate,
}

impl Decomposition {
    /// Projections after inclusions give the identity matrix of summands,
    /// and the inclusion-projection composites sum to the identity.
    pub fn is_consistent(&self) -> bool {
        for (i, a) in self.summands.iter().enumerate() {
            for (j, b) in self.summands.iter().enumerate() {
                let c = a.projection.compose(&b.inclusion);
                if (i == j && !c.is_identity()) || (i != j && !c.is_zero()) {
                    return false;
                }
            }
        }
        let mut total = Morphism::zero(&self.object, &self.object);
        for s in &self.summands {
            total = total.add(&s.inclusion.compose(&s.projection));
        }
        total.is_identity()
    }

    pub fn reps(&self) -> Vec<&Representation> {
        self.summands.iter().map(|s| &s.rep).collect()
    }
}

/// Decompose into summands with local endomorphism rings.
pub fn indecompose(x: &Representation, seed: u64) -> Result<Decomposition> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut steps = Vec::new();
    let summands = split_rec(x, &mut rng, &mut steps)?;
    Ok(Decomposition {
        object: x.clone(),
        summands,
        certificate: Certificate {
            seed,
            method: Method::Idempotent,
            steps,
        },
    })
}

fn split_rec(x: &Representation, rng: &mut ChaCha8Rng, steps: &mut Vec<String>) -> Result<Vec<Summand>> {
    if x.is_zero() {
        return Ok(Vec::new());
    }
    let whole = || Summand {
        rep: x.clone(),
        inclusion: Morphism::identity(x),
        projection: Morphism::identity(x),
    };
    let alg = end_algebra(x);
    if alg.dim() == 1 {
        steps.push(format!("{:?}: End = k", x.dims()));
        return Ok(vec![whole()]);
    }
    for attempt in 0..SPLIT_BUDGET {
        if attempt == ATTEMPTS_BEFORE_CERTIFY {
            let rad = radical(&alg);
            if quotient_is_division_ring(&alg, &rad, rng) {
                steps.push(format!(
                    "{:?}: local, dim End {} radical {}",
                    x.dims(),
                    alg.dim(),
                    rad.dim()
                ));
                return Ok(vec![whole()]);
            }
        }
        let a = alg.hom.random(rng);
        let Some(e) = splitting_idempotent(&a, rng)? else {
            continue;
        };
        steps.push(format!("{:?}: split by idempotent after {} tries", x.dims(), attempt + 1));
        let nv = x.quiver().num_vertices();
        let one_minus = Morphism::identity(x).sub(&e);
        let mut out = Vec::new();
        for idem in [&e, &one_minus] {
            let bases: Vec<Matrix> = (0..nv).map(|v| idem.component(v).column_space_basis()).collect();
            let (part, inc) = x.restrict(&bases);
            let proj = Morphism::new(
                (0..nv)
                    .map(|v| bases[v].solve(idem.component(v)).expect("idempotent maps onto its image"))
                    .collect(),
            );
            for s in split_rec(&part, rng, steps)? {
                out.push(Summand {
                    rep: s.rep,
                    inclusion: inc.compose(&s.inclusion),
                    projection: s.projection.compose(&proj),
                });
            }
        }
        return Ok(out);
    }
    Err(Error::BudgetExceeded(format!(
        "no split of {:?} after {SPLIT_BUDGET} random endomorphisms and End/J is not a division ring",
        x.dims()
    )))
}

/// A nontrivial idempotent polynomial in `a`, when the minimal polynomial
/// of `a` has two coprime primary factors.
fn splitting_idempotent(a: &Morphism, rng: &mut ChaCha8Rng) -> Result<Option<Morphism>> {
    let m = a.total_matrix();
    let mp = min_poly(&m);
    let factors = mp.factor(rng)?;
    if factors.len() < 2 {
        return Ok(None);
    }
    let (q, mult) = &factors[0];
    let primary = q.pow(*mult as u64);
    let rest = mp.divrem(&primary).0;
    let (g, _u, v) = primary.ext_gcd(&rest);
    debug_assert!(g.degree() == Some(0));
    // v * rest is 1 on the primary component of q and 0 on the others
    let poly = v.mul(&rest).rem(&mp);
    let e = Morphism::new(a.components().iter().map(|c| poly.eval_matrix(c)).collect());
    Ok(Some(e))
}

/// Isomorphism test for indecomposables. With `End x` local, `x ≅ y` iff
/// some composite `g ∘ f` of hom basis elements is invertible, and then `f`
/// itself is an isomorphism; so it suffices to look for an invertible
/// basis element of `Hom(x, y)`, which is returned.
pub fn is_isomorphic(x: &Representation, y: &Representation) -> Option<Morphism> {
    if x.dims() != y.dims() {
        return None;
    }
    if x
        .spaces()
        .iter()
        .zip(y.spaces())
        .any(|(a, b)| a.block_invariants() != b.block_invariants())
    {
        return None;
    }
    if x.is_zero() {
        return Some(Morphism::identity(x));
    }
    hom_basis(x, y).basis().iter().find(|f| f.is_iso()).cloned()
}

/// Group summands by isomorphism class; returns `(representative index,
/// multiplicity)` in order of first appearance.
pub fn iso_classes(reps: &[&Representation]) -> Vec<(usize, usize)> {
    let mut classes: Vec<(usize, usize)> = Vec::new();
    for (i, r) in reps.iter().enumerate() {
        match classes.iter_mut().find(|(j, _)| is_isomorphic(reps[*j], r).is_some()) {
            Some(c) => c.1 += 1,
            None => classes.push((i, 1)),
        }
    }
    classes
}

/// Index of the first element of `list` isomorphic to `x`.
pub fn find_isomorphic(list: &[Representation], x: &Representation) -> Option<usize> {
    list.iter().position(|y| is_isomorphic(y, x).is_some())
}

/// A vertex where a generator check failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexFailure {
    pub vertex: usize,
    pub expected: usize,
    pub found: usize,
}

/// The images of all maps from the summands of `M` cover `X` at every
/// vertex.
pub fn lemma9_check(summands: &[Representation], x: &Representation) -> Result<(), VertexFailure> {
    let homs: Vec<_> = summands.iter().map(|m| hom_basis(m, x)).collect();
    for v in 0..x.quiver().num_vertices() {
        let d = x.space(v).dim();
        let mut span = Matrix::zeros(x.field(), d, 0);
        for h in homs.iter().flat_map(|h| h.basis()) {
            span = span.hstack(h.component(v));
        }
        let r = span.rank();
        if r != d {
            return Err(VertexFailure {
                vertex: v,
                expected: d,
                found: r,
            });
        }
    }
    Ok(())
}

/// `(M, X) ⊗_S M -> X` is bijective at every vertex, with `S = End M`
/// split into the blocks `Hom(M_b, M_a)`.
pub fn lemma12_check(summands: &[Representation], x: &Representation) -> Result<(), VertexFailure> {
    let f = x.field();
    let to_x: Vec<_> = summands.iter().map(|m| hom_basis(m, x)).collect();
    // between[a][b] = Hom(M_b, M_a)
    let between: Vec<Vec<_>> = summands
        .iter()
        .map(|ma| summands.iter().map(|mb| hom_basis(mb, ma)).collect())
        .collect();
    for v in 0..x.quiver().num_vertices() {
        let dims: Vec<usize> = summands.iter().map(|m| m.space(v).dim()).collect();
        let mut offsets = Vec::with_capacity(summands.len());
        let mut width = 0;
        for (a, h) in to_x.iter().enumerate() {
            offsets.push(width);
            width += h.dim() * dims[a];
        }
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for a in 0..summands.len() {
            for b in 0..summands.len() {
                for s in between[a][b].basis() {
                    for (i, phi) in to_x[a].basis().iter().enumerate() {
                        let coords = to_x[b].coordinates(&phi.compose(s));
                        for m in 0..dims[b] {
                            let mut row = vec![0u32; width];
                            for (k, &c) in coords.iter().enumerate() {
                                row[offsets[b] + k * dims[b] + m] = c;
                            }
                            let sm = s.component(v).column(m);
                            for (l, &w) in sm.iter().enumerate() {
                                let slot = &mut row[offsets[a] + i * dims[a] + l];
                                *slot = f.sub(*slot, w);
                            }
                            if row.iter().any(|&c| c != 0) {
                                rows.push(row);
                            }
                        }
                    }
                }
            }
        }
        let rel_rank = if rows.is_empty() {
            0
        } else {
            Matrix::from_columns(f, width, &rows).rank()
        };
        let tensor_dim = width - rel_rank;
        let d = x.space(v).dim();
        if tensor_dim != d {
            return Err(VertexFailure {
                vertex: v,
                expected: d,
                found: tensor_dim,
            });
        }
    }
    lemma9_check(summands, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambdamod::LambdaAlgebra;
    use crate::posetrep::{examples, Quiver};
    use crate::random::{random_base_change, random_subspace_rep};
    use rand::Rng;
    use std::sync::Arc;

    fn brute_radical_dim(alg: &crate::posetrep::EndAlgebra) -> usize {
        // a is in J iff a*b is nilpotent for every b; enumerate all of A
        let f = alg.field();
        let d = alg.dim();
        let p = f.p() as usize;
        let all: Vec<Vec<u32>> = (0..p.pow(d as u32))
            .map(|mut code| {
                (0..d)
                    .map(|_| {
                        let c = (code % p) as u32;
                        code /= p;
                        c
                    })
                    .collect()
            })
            .collect();
        let nilpotent = |v: &Vec<u32>| {
            let m = alg.hom.combine(v).total_matrix();
            m.pow(m.rows().max(1) as u64).is_zero()
        };
        let members = all
            .iter()
            .filter(|a| all.iter().all(|b| nilpotent(&alg.mul(a, b))))
            .count();
        (members as f64).log(p as f64).round() as usize
    }

    #[test]
    fn radical_of_field_is_zero() {
        let s = examples::simple_at_top(&Arc::new(Quiver::example()), 3);
        let alg = end_algebra(&s);
        assert_eq!(radical(&alg).dim(), 0);
    }

    #[test]
    fn radical_of_end_m_is_t_action() {
        let m = examples::module_m(2);
        let alg = end_algebra(&m);
        let rad = radical(&alg);
        assert_eq!(rad.dim(), 1);
        let j = &rad.basis[0];
        assert!(!j.is_zero());
        assert!(j.compose(j).is_zero());
        assert!(is_nilpotent_ideal(&alg, &rad));
    }

    #[test]
    fn radical_matches_brute_force() {
        let q = Arc::new(Quiver::example());
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut checked = 0;
        for p in [2, 3] {
            let alg = LambdaAlgebra::dual_numbers(p).unwrap();
            for _ in 0..60 {
                let x = random_subspace_rep(&q, alg, &[2, 3, 3, 4], &mut rng);
                let e = end_algebra(&x);
                if (p as usize).pow(e.dim() as u32) > 800 {
                    continue;
                }
                let rad = radical(&e);
                assert!(is_nilpotent_ideal(&e, &rad));
                assert_eq!(rad.dim(), brute_radical_dim(&e), "dims {:?}", x.dims());
                checked += 1;
            }
        }
        assert!(checked > 30);
    }

    #[test]
    fn radical_of_cross_maps() {
        // End(M ⊕ N): Hom(M, N) and Hom(N, M) lie in the radical
        let m = examples::module_m(2);
        let n = examples::module_n(2);
        let (x, inc, proj) = Representation::direct_sum(&[&m, &n]);
        let alg = end_algebra(&x);
        let rad = radical(&alg);
        assert!(is_nilpotent_ideal(&alg, &rad));
        for h in hom_basis(&m, &n).basis() {
            let cross = inc[1].compose(h).compose(&proj[0]);
            assert!(rad.contains(&alg.hom.coordinates(&cross)));
        }
        for h in hom_basis(&n, &m).basis() {
            let cross = inc[0].compose(h).compose(&proj[1]);
            assert!(rad.contains(&alg.hom.coordinates(&cross)));
        }
        assert_eq!(rad.quotient_dim, 2);
    }

    #[test]
    fn indecomposable_stays_whole() {
        let n = examples::module_n(2);
        let d = indecompose(&n, 1).unwrap();
        assert_eq!(d.summands.len(), 1);
        assert!(d.summands[0].inclusion.is_identity());
    }

    #[test]
    fn m_plus_n_splits_into_m_and_n() {
        for p in [2, 3] {
            let m = examples::module_m(p);
            let n = examples::module_n(p);
            let x = m.plus(&n);
            let d = indecompose(&x, 7).unwrap();
            assert!(d.is_consistent());
            assert_eq!(d.summands.len(), 2);
            let hits_m = d.summands.iter().filter(|s| is_isomorphic(&s.rep, &m).is_some()).count();
            let hits_n = d.summands.iter().filter(|s| is_isomorphic(&s.rep, &n).is_some()).count();
            assert_eq!((hits_m, hits_n), (1, 1));
        }
    }

    #[test]
    fn double_splits_into_two_copies() {
        let n = examples::module_n(2);
        let d = indecompose(&n.plus(&n).plus(&n), 3).unwrap();
        assert!(d.is_consistent());
        assert_eq!(d.summands.len(), 3);
        assert!(d.summands.iter().all(|s| is_isomorphic(&s.rep, &n).is_some()));
    }

    #[test]
    fn iso_examples() {
        let m = examples::module_m(3);
        let n = examples::module_n(3);
        assert!(is_isomorphic(&m, &m).unwrap().is_iso());
        assert!(is_isomorphic(&m, &n).is_none());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..200 {
            let (y, iso) = random_base_change(&n, &mut rng);
            assert!(iso.is_morphism(&y, &n));
            let w = is_isomorphic(&n, &y).expect("base change is an isomorphism");
            assert!(w.is_morphism(&n, &y) && w.is_iso());
        }
    }

    #[test]
    fn decompositions_agree_across_seeds() {
        let q = Arc::new(Quiver::example());
        let alg = LambdaAlgebra::dual_numbers(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..15 {
            let x = random_subspace_rep(&q, alg, &[2, 4, 4, 6], &mut rng);
            let base = indecompose(&x, 0).unwrap();
            assert!(base.is_consistent());
            let seed = rng.gen();
            let other = indecompose(&x, seed).unwrap();
            let mut all: Vec<&Representation> = base.reps();
            let k = all.len();
            all.extend(other.reps());
            // every class appears equally often on both sides
            for (rep, _) in iso_classes(&all) {
                let left = all[..k].iter().filter(|r| is_isomorphic(all[rep], r).is_some()).count();
                let right = all[k..].iter().filter(|r| is_isomorphic(all[rep], r).is_some()).count();
                assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn lemma_checks_on_named_objects() {
        let m = examples::module_m(2);
        let n = examples::module_n(2);
        let summands = vec![m.clone(), n.clone()];
        assert!(lemma9_check(&summands, &m).is_ok());
        assert!(lemma12_check(&summands, &m.plus(&n)).is_ok());
        let z = Representation::zero(m.quiver().clone(), m.algebra());
        assert!(lemma9_check(&summands, &z).is_ok());
        assert!(lemma12_check(&summands, &z).is_ok());
        // M alone does not generate N at the star
        assert!(lemma9_check(&[m], &n).is_err());
    }
}
