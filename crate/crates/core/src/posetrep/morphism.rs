use rand::Rng;

use crate::error::{Error, Result};
use crate::ffmat::{Factor, LinearSystem, Matrix, PrimeField};

use super::rep::Representation;

/// A morphism of representations: one matrix per vertex. Source and target
/// are not stored; callers keep track of them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    components: Vec<Matrix>,
}

impl Morphism {
    pub fn new(components: Vec<Matrix>) -> Self {
        Self { components }
    }

    pub fn identity(x: &Representation) -> Self {
        let f = x.field();
        Self::new(x.dims().into_iter().map(|d| Matrix::identity(f, d)).collect())
    }

    pub fn zero(x: &Representation, y: &Representation) -> Self {
        let f = x.field();
        Self::new(
            x.dims()
                .into_iter()
                .zip(y.dims())
                .map(|(dx, dy)| Matrix::zeros(f, dy, dx))
                .collect(),
        )
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    pub fn component(&self, v: usize) -> &Matrix {
        &self.components[v]
    }

    pub fn field(&self) -> PrimeField {
        self.components[0].field()
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &Morphism) -> Morphism {
        Morphism::new(
            self.components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a.mul(b))
                .collect(),
        )
    }

    pub fn add(&self, rhs: &Morphism) -> Morphism {
        Morphism::new(
            self.components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &Morphism) -> Morphism {
        Morphism::new(
            self.components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a.sub(b))
                .collect(),
        )
    }

    pub fn scale(&self, c: u32) -> Morphism {
        Morphism::new(self.components.iter().map(|a| a.scale(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().all(Matrix::is_identity)
    }

    /// Invertible at every vertex.
    pub fn is_iso(&self) -> bool {
        self.components.iter().all(|c| c.is_square() && (c.rows() == 0 || c.is_invertible()))
    }

    pub fn inverse(&self) -> Option<Morphism> {
        self.components
            .iter()
            .map(|c| if c.rows() == 0 && c.cols() == 0 { Some(c.clone()) } else { c.inverse() })
            .collect::<Option<Vec<_>>>()
            .map(Morphism::new)
    }

    pub fn is_mono(&self) -> bool {
        self.components.iter().all(Matrix::has_full_column_rank)
    }

    pub fn is_epi(&self) -> bool {
        self.components.iter().all(|c| c.rank() == c.rows())
    }

    /// Block-diagonal matrix on the total space.
    pub fn total_matrix(&self) -> Matrix {
        let refs: Vec<&Matrix> = self.components.iter().collect();
        Matrix::block_diag(self.field(), &refs)
    }

    /// Does this commute with T and with every arrow?
    pub fn is_morphism(&self, x: &Representation, y: &Representation) -> bool {
        if self.components.len() != x.quiver().num_vertices() {
            return false;
        }
        for v in 0..self.components.len() {
            if !x.space(v).is_equivariant(&self.components[v], y.space(v)) {
                return false;
            }
        }
        x.quiver().arrows().iter().enumerate().all(|(k, &(s, t))| {
            self.components[t].mul(x.map(k)) == y.map(k).mul(&self.components[s])
        })
    }

    /// Entries of all components, row-major, vertex after vertex.
    pub fn flatten(&self) -> Vec<u32> {
        self.components.iter().flat_map(|c| c.data().iter().copied()).collect()
    }

    pub fn from_flat(f: PrimeField, shapes: &[(usize, usize)], v: &[u32]) -> Morphism {
        let mut off = 0;
        Morphism::new(
            shapes
                .iter()
                .map(|&(r, c)| {
                    let m = Matrix::from_vec(f, r, c, v[off..off + r * c].to_vec());
                    off += r * c;
                    m
                })
                .collect(),
        )
    }
}

/// A basis of `Hom(x, y)`.
///
/// Coordinates of a morphism in the space are its entries at the `free`
/// positions of the flattened form.
#[derive(Clone, Debug)]
pub struct HomSpace {
    shapes: Vec<(usize, usize)>,
    basis: Vec<Morphism>,
    free: Vec<usize>,
    field: PrimeField,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Morphism] {
        &self.basis
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Coordinates of a morphism known to lie in this space.
    pub fn coordinates(&self, h: &Morphism) -> Vec<u32> {
        let flat = h.flatten();
        self.free.iter().map(|&i| flat[i]).collect()
    }

    pub fn combine(&self, coeffs: &[u32]) -> Morphism {
        let f = self.field;
        let width: usize = self.shapes.iter().map(|&(r, c)| r * c).sum();
        let mut acc = vec![0u32; width];
        for (b, &c) in self.basis.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (slot, x) in acc.iter_mut().zip(b.flatten()) {
                *slot = f.mul_add(*slot, c, x);
            }
        }
        Morphism::from_flat(f, &self.shapes, &acc)
    }

    pub fn zero(&self) -> Morphism {
        Morphism::from_flat(self.field, &self.shapes, &vec![0; self.shapes.iter().map(|&(r, c)| r * c).sum()])
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Morphism {
        let coeffs: Vec<u32> = (0..self.dim()).map(|_| self.field.random(rng)).collect();
        self.combine(&coeffs)
    }
}

/// Solution space of the T-equivariance and naturality system.
pub fn hom_basis(x: &Representation, y: &Representation) -> HomSpace {
    let f = x.field();
    let q = x.quiver();
    let nv = q.num_vertices();
    let shapes: Vec<(usize, usize)> = (0..nv).map(|v| (y.space(v).dim(), x.space(v).dim())).collect();
    let mut sys = LinearSystem::new(f, &shapes);
    let neg = f.neg(1);
    for v in 0..nv {
        let ty = y.space(v).t().scale(neg);
        sys.add_equation(
            &[
                (v, Factor::Identity, Factor::Mat(x.space(v).t())),
                (v, Factor::Mat(&ty), Factor::Identity),
            ],
            None,
        );
    }
    for (k, &(s, t)) in q.arrows().iter().enumerate() {
        let ym = y.map(k).scale(neg);
        sys.add_equation(
            &[
                (t, Factor::Identity, Factor::Mat(x.map(k))),
                (s, Factor::Mat(&ym), Factor::Identity),
            ],
            None,
        );
    }
    let sol = sys.solve();
    let basis = (0..sol.kernel.cols())
        .map(|j| Morphism::from_flat(f, &shapes, &sol.kernel.column(j)))
        .collect();
    HomSpace {
        shapes,
        basis,
        free: sol.free,
        field: f,
    }
}

/// Coefficients `c` with `sum c_k vectors[k] = target`, if any.
pub fn solve_in_span(vectors: &[Morphism], target: &Morphism) -> Option<Vec<u32>> {
    let f = target.field();
    let t = target.flatten();
    if vectors.is_empty() {
        return t.iter().all(|&x| x == 0).then(Vec::new);
    }
    let cols: Vec<Vec<u32>> = vectors.iter().map(Morphism::flatten).collect();
    let a = Matrix::from_columns(f, t.len(), &cols);
    let b = Matrix::from_columns(f, t.len(), &[t]);
    a.solve(&b).ok().map(|x| x.column(0))
}

/// Does `h: F -> x` factor as `g ∘ h'` with `h': F -> B`, given a basis of
/// `Hom(F, B)`?
pub fn factors_through_left(h: &Morphism, g: &Morphism, hom_fb: &HomSpace) -> bool {
    let images: Vec<Morphism> = hom_fb.basis().iter().map(|b| g.compose(b)).collect();
    solve_in_span(&images, h).is_some()
}

/// Does `h: A -> Y` factor as `h' ∘ f` with `h': B -> Y`, given a basis of
/// `Hom(B, Y)`?
pub fn factors_through_right(h: &Morphism, f: &Morphism, hom_by: &HomSpace) -> bool {
    let images: Vec<Morphism> = hom_by.basis().iter().map(|b| b.compose(f)).collect();
    solve_in_span(&images, h).is_some()
}

/// Endomorphism algebra with structure constants:
/// `basis[i] ∘ basis[j] = sum_k table[i][j][k] basis[k]`.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub hom: HomSpace,
    pub table: Vec<Vec<Vec<u32>>>,
    pub identity: Vec<u32>,
}

impl EndAlgebra {
    pub fn dim(&self) -> usize {
        self.hom.dim()
    }

    pub fn basis(&self) -> &[Morphism] {
        self.hom.basis()
    }

    pub fn field(&self) -> PrimeField {
        self.hom.field()
    }

    /// Product of two coordinate vectors.
    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let f = self.field();
        let d = self.dim();
        let mut out = vec![0u32; d];
        for i in 0..d {
            if a[i] == 0 {
                continue;
            }
            for j in 0..d {
                if b[j] == 0 {
                    continue;
                }
                let c = f.mul(a[i], b[j]);
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot = f.mul_add(*slot, c, self.table[i][j][k]);
                }
            }
        }
        out
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| self.table[i][j] == self.table[j][i]))
    }
}

pub fn end_algebra(x: &Representation) -> EndAlgebra {
    let hom = hom_basis(x, x);
    let table = hom
        .basis()
        .iter()
        .map(|a| hom.basis().iter().map(|b| hom.coordinates(&a.compose(b))).collect())
        .collect();
    let identity = hom.coordinates(&Morphism::identity(x));
    EndAlgebra { hom, table, identity }
}

/// Result of [`split_by_retraction`].
#[derive(Clone, Debug)]
pub struct Split {
    pub summand: Representation,
    pub complement: Representation,
    /// Inclusion of the complement into `x`.
    pub complement_inclusion: Morphism,
    /// Projection of `x` onto the complement along the summand.
    pub complement_projection: Morphism,
    /// Isomorphism `summand ⊕ complement -> x`.
    pub iso: Morphism,
}

/// Split `x = im(mono) ⊕ ker(mono ∘ retraction)`.
pub fn split_by_retraction(
    x: &Representation,
    summand: &Representation,
    mono: &Morphism,
    retraction: &Morphism,
) -> Result<Split> {
    if !retraction.compose(mono).is_identity() {
        return Err(Error::NotARetraction);
    }
    let f = x.field();
    let nv = x.quiver().num_vertices();
    let mut kernels = Vec::with_capacity(nv);
    let mut projections = Vec::with_capacity(nv);
    let mut iso = Vec::with_capacity(nv);
    for v in 0..nv {
        let e = mono.component(v).mul(retraction.component(v));
        let one_minus = Matrix::identity(f, e.rows()).sub(&e);
        let k = e.kernel_basis();
        projections.push(k.solve(&one_minus).expect("1 - e maps into ker e"));
        iso.push(mono.component(v).hstack(&k));
        kernels.push(k);
    }
    let (complement, inclusion) = x.restrict(&kernels);
    Ok(Split {
        summand: summand.clone(),
        complement,
        complement_inclusion: inclusion,
        complement_projection: Morphism::new(projections),
        iso: Morphism::new(iso),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::posetrep::{examples, Quiver};
    use std::sync::Arc;

    #[test]
    fn end_of_m_is_lambda() {
        let m = examples::module_m(2);
        let e = end_algebra(&m);
        assert_eq!(e.dim(), 2);
        assert!(e.is_commutative());
        // one basis element is nilpotent of order 2 and not zero
        let nil = e
            .basis()
            .iter()
            .filter(|b| !b.is_zero() && b.compose(b).is_zero())
            .count();
        assert!(nil >= 1);
    }

    #[test]
    fn hom_from_zero_is_empty() {
        let q = Arc::new(Quiver::example());
        let m = examples::module_m(3);
        let z = Representation::zero(q, m.algebra());
        assert_eq!(hom_basis(&z, &m).dim(), 0);
        assert_eq!(hom_basis(&m, &z).dim(), 0);
    }

    #[test]
    fn hom_into_double_is_additive() {
        let n = examples::module_n(2);
        let nn = n.plus(&n);
        assert_eq!(hom_basis(&n, &nn).dim(), 2 * end_algebra(&n).dim());
        assert_eq!(end_algebra(&nn).dim(), 4 * end_algebra(&n).dim());
    }

    #[test]
    fn simple_at_star_has_trivial_end() {
        let s = examples::simple_at_top(&Arc::new(Quiver::example()), 5);
        assert_eq!(end_algebra(&s).dim(), 1);
    }

    #[test]
    fn split_recovers_second_summand() {
        let m = examples::module_m(2);
        let n = examples::module_n(2);
        let (x, inc, proj) = Representation::direct_sum(&[&m, &n]);
        let s = split_by_retraction(&x, &m, &inc[0], &proj[0]).unwrap();
        assert_eq!(s.complement.dims(), n.dims());
        assert!(s.iso.is_iso());
        assert!(s.complement_inclusion.is_morphism(&s.complement, &x));
        assert!(s.complement_projection.compose(&s.complement_inclusion).is_identity());
        // not a retraction
        let z = Morphism::zero(&x, &m);
        assert!(matches!(
            split_by_retraction(&x, &m, &inc[0], &z),
            Err(Error::NotARetraction)
        ));
    }

    #[test]
    fn split_off_zero_summand() {
        let m = examples::module_m(2);
        let z = Representation::zero(m.quiver().clone(), m.algebra());
        let s = split_by_retraction(&m, &z, &Morphism::zero(&z, &m), &Morphism::zero(&m, &z)).unwrap();
        assert_eq!(s.complement, m);
    }
}
