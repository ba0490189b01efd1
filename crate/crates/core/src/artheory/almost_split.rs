use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::decomp::{radical, RadicalData};
use crate::ffmat::Matrix;
use crate::posetrep::{end_algebra, hom_basis, solve_in_span, EndAlgebra, Morphism, Representation};
use crate::random::random_subspace_rep;

/// An object with a local endomorphism ring together with the radical of
/// that ring, ready for radical-map computations.
#[derive(Clone, Debug)]
pub struct LocalObject {
    pub rep: Representation,
    pub end: EndAlgebra,
    pub rad: RadicalData,
    /// Rows cut out the radical: `kill · coords = 0` iff the endomorphism
    /// is radical.
    kill: Matrix,
}

impl LocalObject {
    pub fn new(rep: Representation) -> Self {
        let end = end_algebra(&rep);
        let rad = radical(&end);
        let kill = rad.coords.transpose().kernel_basis().transpose();
        LocalObject { rep, end, rad, kill }
    }

    fn radical_solutions(&self, blocks: &[Vec<Morphism>], count: usize) -> Matrix {
        // blocks[j][i]: i-th candidate composed with the j-th test map
        let f = self.rep.field();
        let q = self.kill.rows();
        let mut m = Matrix::zeros(f, q * blocks.len(), count);
        for (j, row) in blocks.iter().enumerate() {
            for (i, e) in row.iter().enumerate() {
                let coords = self.end.hom.coordinates(e);
                let v = self.kill.mul_vec(&coords);
                for (r, x) in v.into_iter().enumerate() {
                    m[(j * q + r, i)] = x;
                }
            }
        }
        m.kernel_basis()
    }

    /// Basis of `rad(X, self)`: maps `h` with `h ∘ s` radical for every
    /// `s: self -> X`.
    pub fn radical_maps_into(&self, x: &Representation) -> Vec<Morphism> {
        let hom = hom_basis(x, &self.rep);
        if hom.is_zero() {
            return Vec::new();
        }
        let back = hom_basis(&self.rep, x);
        let blocks: Vec<Vec<Morphism>> = back
            .basis()
            .iter()
            .map(|s| hom.basis().iter().map(|h| h.compose(s)).collect())
            .collect();
        let sol = self.radical_solutions(&blocks, hom.dim());
        (0..sol.cols()).map(|j| hom.combine(&sol.column(j))).collect()
    }

    /// Basis of `rad(self, Y)`: maps `u` with `s ∘ u` radical for every
    /// `s: Y -> self`.
    pub fn radical_maps_from(&self, y: &Representation) -> Vec<Morphism> {
        let hom = hom_basis(&self.rep, y);
        if hom.is_zero() {
            return Vec::new();
        }
        let back = hom_basis(y, &self.rep);
        let blocks: Vec<Vec<Morphism>> = back
            .basis()
            .iter()
            .map(|s| hom.basis().iter().map(|u| s.compose(u)).collect())
            .collect();
        let sol = self.radical_solutions(&blocks, hom.dim());
        (0..sol.cols()).map(|j| hom.combine(&sol.column(j))).collect()
    }
}

/// Is `g: B -> C` a split epimorphism?
pub fn is_split_epi(g: &Morphism, b: &Representation, c: &Representation) -> bool {
    let sections: Vec<Morphism> = hom_basis(c, b).basis().iter().map(|s| g.compose(s)).collect();
    solve_in_span(&sections, &Morphism::identity(c)).is_some()
}

/// Is `f: A -> B` a split monomorphism?
pub fn is_split_mono(f: &Morphism, a: &Representation, b: &Representation) -> bool {
    let retractions: Vec<Morphism> = hom_basis(b, a).basis().iter().map(|r| r.compose(f)).collect();
    solve_in_span(&retractions, &Morphism::identity(a)).is_some()
}

/// First test whose radical maps into `c` do not all factor through `g`.
fn right_failure(g: &Morphism, b: &Representation, c: &LocalObject, tests: &[Representation]) -> Option<usize> {
    tests
        .par_iter()
        .enumerate()
        .find_map_first(|(ti, x)| {
            let rad = c.radical_maps_into(x);
            if rad.is_empty() {
                return None;
            }
            let through: Vec<Morphism> = hom_basis(x, b).basis().iter().map(|h| g.compose(h)).collect();
            rad.iter().any(|h| solve_in_span(&through, h).is_none()).then_some(ti)
        })
}

fn left_failure(f: &Morphism, b: &Representation, a: &LocalObject, tests: &[Representation]) -> Option<usize> {
    tests
        .par_iter()
        .enumerate()
        .find_map_first(|(ti, y)| {
            let rad = a.radical_maps_from(y);
            if rad.is_empty() {
                return None;
            }
            let through: Vec<Morphism> = hom_basis(b, y).basis().iter().map(|h| h.compose(f)).collect();
            rad.iter().any(|u| solve_in_span(&through, u).is_none()).then_some(ti)
        })
}

/// `g: B -> C` (with `C` indecomposable) is not a split epi and every
/// non-split-epi map from a test object into `C` factors through it.
pub fn is_right_almost_split(g: &Morphism, b: &Representation, c: &Representation, tests: &[Representation]) -> bool {
    !is_split_epi(g, b, c) && right_failure(g, b, &LocalObject::new(c.clone()), tests).is_none()
}

/// Dual of [`is_right_almost_split`] for `f: A -> B`.
pub fn is_left_almost_split(f: &Morphism, a: &Representation, b: &Representation, tests: &[Representation]) -> bool {
    !is_split_mono(f, a, b) && left_failure(f, b, &LocalObject::new(a.clone()), tests).is_none()
}

/// `0 -> A -f-> B -g-> C -> 0`.
#[derive(Clone, Debug)]
pub struct ARSequence {
    pub a: Representation,
    pub b: Representation,
    pub c: Representation,
    pub f: Morphism,
    pub g: Morphism,
    verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MeshFailure {
    #[error("sequence is not exact")]
    NotExact,
    #[error("sequence splits")]
    Split,
    #[error("right lifting fails for test {0}")]
    Right(usize),
    #[error("left lifting fails for test {0}")]
    Left(usize),
    #[error("right lifting fails for random test object {0}")]
    RandomRight(usize),
    #[error("left lifting fails for random test object {0}")]
    RandomLeft(usize),
}

impl ARSequence {
    pub fn new(a: Representation, b: Representation, c: Representation, f: Morphism, g: Morphism) -> Self {
        ARSequence {
            a,
            b,
            c,
            f,
            g,
            verified: false,
        }
    }

    pub fn verified(&self) -> bool {
        self.verified
    }

    pub fn is_exact(&self) -> bool {
        let nv = self.b.quiver().num_vertices();
        self.f.is_morphism(&self.a, &self.b)
            && self.g.is_morphism(&self.b, &self.c)
            && self.f.is_mono()
            && self.g.is_epi()
            && self.g.compose(&self.f).is_zero()
            && (0..nv).all(|v| self.a.space(v).dim() + self.c.space(v).dim() == self.b.space(v).dim())
    }
}

/// Random subspace representations used as extra lifting tests.
pub const RANDOM_TESTS: usize = 20;

/// Run the lifting tests against `tests` and [`RANDOM_TESTS`] random
/// subspace representations drawn from `seed`; the flag is set on success.
pub fn verify_ar_sequence(s: &mut ARSequence, tests: &[Representation], seed: u64) -> Result<(), MeshFailure> {
    s.verified = false;
    if !s.is_exact() {
        return Err(MeshFailure::NotExact);
    }
    if is_split_mono(&s.f, &s.a, &s.b) || is_split_epi(&s.g, &s.b, &s.c) {
        return Err(MeshFailure::Split);
    }
    let c = LocalObject::new(s.c.clone());
    let a = LocalObject::new(s.a.clone());
    if let Some(t) = right_failure(&s.g, &s.b, &c, tests) {
        return Err(MeshFailure::Right(t));
    }
    if let Some(t) = left_failure(&s.f, &s.b, &a, tests) {
        return Err(MeshFailure::Left(t));
    }
    let q = s.c.quiver();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_dims: Vec<usize> = (0..q.num_vertices()).map(|v| if Some(v) == q.star_vertex() { 6 } else { 4 }).collect();
    let random: Vec<Representation> = (0..RANDOM_TESTS)
        .map(|_| random_subspace_rep(q, s.c.algebra(), &max_dims, &mut rng))
        .collect();
    if let Some(t) = right_failure(&s.g, &s.b, &c, &random) {
        return Err(MeshFailure::RandomRight(t));
    }
    if let Some(t) = left_failure(&s.f, &s.b, &a, &random) {
        return Err(MeshFailure::RandomLeft(t));
    }
    s.verified = true;
    Ok(())
}
