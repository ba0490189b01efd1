use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffmat::{Matrix, PrimeField};
use crate::lambdamod::{LambdaAlgebra, LambdaModule};

use super::morphism::Morphism;
use super::poset::Quiver;

/// A representation of a poset quiver over Λ: a Λ-module per vertex and a
/// matrix per arrow (target dim × source dim).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Representation {
    quiver: Arc<Quiver>,
    algebra: LambdaAlgebra,
    spaces: Vec<LambdaModule>,
    maps: Vec<Matrix>,
}

/// A failed constraint found by [`Representation::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotEquivariant { arrow: String },
    PathMismatch { from: String, to: String, via: (String, String) },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotEquivariant { arrow } => write!(f, "arrow {arrow} does not commute with T"),
            Violation::PathMismatch { from, to, via } => write!(
                f,
                "paths {from} -> {to} disagree (square through arrows {} and {})",
                via.0, via.1
            ),
        }
    }
}

impl Representation {
    /// Checks shapes only; use [`validate`](Self::validate) for the
    /// equivariance and commutativity constraints.
    pub fn new(
        quiver: Arc<Quiver>,
        algebra: LambdaAlgebra,
        spaces: Vec<LambdaModule>,
        maps: Vec<Matrix>,
    ) -> Result<Self> {
        if spaces.len() != quiver.num_vertices() {
            return Err(Error::DimensionMismatch(format!(
                "{} spaces for {} vertices",
                spaces.len(),
                quiver.num_vertices()
            )));
        }
        if maps.len() != quiver.arrows().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} maps for {} arrows",
                maps.len(),
                quiver.arrows().len()
            )));
        }
        for (k, &(s, t)) in quiver.arrows().iter().enumerate() {
            let want = (spaces[t].dim(), spaces[s].dim());
            if maps[k].shape() != want {
                return Err(Error::DimensionMismatch(format!(
                    "map {} is {}x{}, expected {}x{}",
                    quiver.arrow_name(k),
                    maps[k].rows(),
                    maps[k].cols(),
                    want.0,
                    want.1
                )));
            }
        }
        if spaces.iter().any(|m| m.algebra() != algebra) {
            return Err(Error::DimensionMismatch("spaces over different algebras".into()));
        }
        Ok(Self {
            quiver,
            algebra,
            spaces,
            maps,
        })
    }

    pub fn zero(quiver: Arc<Quiver>, algebra: LambdaAlgebra) -> Self {
        let f = algebra.field();
        let spaces = vec![algebra.zero_module(); quiver.num_vertices()];
        let maps = vec![Matrix::zeros(f, 0, 0); quiver.arrows().len()];
        Self {
            quiver,
            algebra,
            spaces,
            maps,
        }
    }

    /// The same module at every vertex with identity arrows.
    pub fn constant(quiver: Arc<Quiver>, module: &LambdaModule) -> Self {
        let f = module.field();
        let spaces = vec![module.clone(); quiver.num_vertices()];
        let maps = vec![Matrix::identity(f, module.dim()); quiver.arrows().len()];
        Self {
            algebra: module.algebra(),
            quiver,
            spaces,
            maps,
        }
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn algebra(&self) -> LambdaAlgebra {
        self.algebra
    }

    pub fn field(&self) -> PrimeField {
        self.algebra.field()
    }

    pub fn spaces(&self) -> &[LambdaModule] {
        &self.spaces
    }

    pub fn space(&self, v: usize) -> &LambdaModule {
        &self.spaces[v]
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn map(&self, arrow: usize) -> &Matrix {
        &self.maps[arrow]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(LambdaModule::dim).collect()
    }

    /// Composition length over ΛP*: all simples are one-dimensional.
    pub fn total_dim(&self) -> usize {
        self.spaces.iter().map(LambdaModule::dim).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Composites `X_{i j}` for every `j >= i` (None elsewhere), following
    /// the first incoming arrow from the cone above `i`.
    pub fn composites_from(&self, i: usize) -> Vec<Option<Matrix>> {
        let q = &*self.quiver;
        let mut out: Vec<Option<Matrix>> = vec![None; q.num_vertices()];
        out[i] = Some(Matrix::identity(self.field(), self.spaces[i].dim()));
        for &j in q.order() {
            if j == i || !q.leq(i, j) {
                continue;
            }
            let (k, s) = q
                .arrows_into(j)
                .find(|&(_, s)| q.leq(i, s))
                .expect("cover chain exists between comparable vertices");
            let prev = out[s].as_ref().expect("earlier in the linear extension");
            out[j] = Some(self.maps[k].mul(prev));
        }
        out
    }

    /// `X_{i j}` for `i <= j`.
    pub fn composite_map(&self, i: usize, j: usize) -> Result<Matrix> {
        let q = &*self.quiver;
        if !q.leq(i, j) {
            return Err(Error::NotComparable {
                from: q.label(i).to_string(),
                to: q.label(j).to_string(),
            });
        }
        Ok(self.composites_from(i).swap_remove(j).expect("comparable"))
    }

    /// Every failed equivariance or path-commutativity constraint.
    pub fn validate(&self) -> Vec<Violation> {
        let q = &*self.quiver;
        let mut out = Vec::new();
        for (k, &(s, t)) in q.arrows().iter().enumerate() {
            if !self.spaces[s].is_equivariant(&self.maps[k], &self.spaces[t]) {
                out.push(Violation::NotEquivariant {
                    arrow: q.arrow_name(k),
                });
            }
        }
        // By induction on the linear extension it suffices that, for each
        // i and j > i, all arrows into j from the cone of i agree.
        for i in 0..q.num_vertices() {
            let comp = self.composites_from(i);
            for &j in q.order() {
                if j == i || !q.leq(i, j) {
                    continue;
                }
                let incoming: Vec<(usize, usize)> = q.arrows_into(j).filter(|&(_, s)| q.leq(i, s)).collect();
                let (k0, s0) = incoming[0];
                let reference = self.maps[k0].mul(comp[s0].as_ref().unwrap());
                for &(k, s) in &incoming[1..] {
                    if self.maps[k].mul(comp[s].as_ref().unwrap()) != reference {
                        out.push(Violation::PathMismatch {
                            from: q.label(i).to_string(),
                            to: q.label(j).to_string(),
                            via: (q.arrow_name(k0), q.arrow_name(k)),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Every arrow map injective.
    pub fn is_subspace_rep(&self) -> bool {
        self.maps.iter().all(Matrix::has_full_column_rank)
    }

    /// Subrepresentation on the given bases (one per vertex, each
    /// independent, T-invariant and mapped into the next by the arrows),
    /// together with its inclusion.
    pub fn restrict(&self, bases: &[Matrix]) -> (Representation, Morphism) {
        let spaces = self
            .spaces
            .iter()
            .zip(bases)
            .map(|(m, b)| m.restrict(b))
            .collect();
        let maps = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, &(s, t))| {
                bases[t]
                    .solve(&self.maps[k].mul(&bases[s]))
                    .expect("arrow leaves the restricted subspace")
            })
            .collect();
        let sub = Representation {
            quiver: self.quiver.clone(),
            algebra: self.algebra,
            spaces,
            maps,
        };
        (sub, Morphism::new(bases.to_vec()))
    }

    /// Apply a change of basis at each vertex: the columns of `basis[v]`
    /// become the new basis of `X_v`. Returns the new representation and
    /// the isomorphism from it to `self`.
    pub fn change_basis(&self, basis: &[Matrix]) -> (Representation, Morphism) {
        self.restrict(basis)
    }

    /// Vector-space dual on the opposite quiver: transposed actions and
    /// transposed maps.
    pub fn dual(&self) -> Representation {
        Representation {
            quiver: Arc::new(self.quiver.opposite()),
            algebra: self.algebra,
            spaces: self.spaces.iter().map(LambdaModule::dual).collect(),
            maps: self.maps.iter().map(Matrix::transpose).collect(),
        }
    }

    /// Dual of a representation of the opposite quiver, landing back on
    /// `quiver`.
    pub fn dual_onto(&self, quiver: Arc<Quiver>) -> Representation {
        debug_assert_eq!(self.quiver.opposite(), *quiver);
        Representation {
            quiver,
            algebra: self.algebra,
            spaces: self.spaces.iter().map(LambdaModule::dual).collect(),
            maps: self.maps.iter().map(Matrix::transpose).collect(),
        }
    }

    /// Direct sum with inclusions and projections.
    pub fn direct_sum(xs: &[&Representation]) -> (Representation, Vec<Morphism>, Vec<Morphism>) {
        let first = xs[0];
        let f = first.field();
        let q = first.quiver.clone();
        let nv = q.num_vertices();
        let spaces: Vec<LambdaModule> = (0..nv)
            .map(|v| {
                let mods: Vec<&LambdaModule> = xs.iter().map(|x| &x.spaces[v]).collect();
                LambdaModule::direct_sum(&mods)
            })
            .collect();
        let maps: Vec<Matrix> = (0..q.arrows().len())
            .map(|k| {
                let ms: Vec<&Matrix> = xs.iter().map(|x| &x.maps[k]).collect();
                Matrix::block_diag(f, &ms)
            })
            .collect();
        let mut inclusions = Vec::with_capacity(xs.len());
        let mut projections = Vec::with_capacity(xs.len());
        let mut offsets = vec![0usize; nv];
        for x in xs {
            let mut inc = Vec::with_capacity(nv);
            let mut proj = Vec::with_capacity(nv);
            for v in 0..nv {
                let d = x.spaces[v].dim();
                let total = spaces[v].dim();
                let mut i = Matrix::zeros(f, total, d);
                i.set_block(offsets[v], 0, &Matrix::identity(f, d));
                proj.push(i.transpose());
                inc.push(i);
                offsets[v] += d;
            }
            inclusions.push(Morphism::new(inc));
            projections.push(Morphism::new(proj));
        }
        let sum = Representation {
            quiver: q,
            algebra: first.algebra,
            spaces,
            maps,
        };
        (sum, inclusions, projections)
    }

    pub fn sum(xs: &[&Representation]) -> Representation {
        Self::direct_sum(xs).0
    }

    /// `self ⊕ other`.
    pub fn plus(&self, other: &Representation) -> Representation {
        Self::sum(&[self, other])
    }
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Representation(dims {:?})", self.dims())
    }
}
