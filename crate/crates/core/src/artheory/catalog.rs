use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;

use super::almost_split::{verify_ar_sequence, ARSequence, LocalObject, MeshFailure};
use super::translate::{
    cokernel, indecomposable_injectives, indecomposable_projectives, radical_subrep, relative_translate_candidate,
    tau_inverse,
};
use crate::approx::left_approx;
use crate::decomp::{find_isomorphic, indecompose};
use crate::error::{Error, Result};
use crate::ffmat::{subspace, Matrix};
use crate::lambdamod::LambdaAlgebra;
use crate::posetrep::{hom_basis, Morphism, Quiver, Representation};

/// Closure passes allowed by default.
pub const DEFAULT_BUDGET: usize = 200;

/// Seed for the decompositions and random lifting tests of the builder.
const BUILD_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IrreducibleArrow {
    pub from: usize,
    pub to: usize,
    /// `dim rad/rad²` between the two objects.
    pub multiplicity: usize,
}

/// An almost split sequence between catalog objects: `start = τ end`.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub start: usize,
    pub end: usize,
    pub sequence: ARSequence,
}

/// A minimal almost split map assembled from irreducible maps: the sink
/// map `⊕ B_k -> C` or the source map `A -> ⊕ B_k`.
#[derive(Clone, Debug)]
pub struct AlmostSplitMap {
    pub center: usize,
    /// Catalog index of each summand `B_k`, repeated by multiplicity.
    pub parts: Vec<usize>,
    /// The irreducible map belonging to each part.
    pub components: Vec<Morphism>,
    pub other: Representation,
    pub map: Morphism,
    pub inclusions: Vec<Morphism>,
    pub projections: Vec<Morphism>,
}

/// Radical and irreducible maps between a list of indecomposables.
#[derive(Clone, Debug)]
struct RadicalTable {
    rad: Vec<Vec<Vec<Morphism>>>,
    irr: Vec<Vec<Vec<Morphism>>>,
}

impl RadicalTable {
    fn new(objects: &[Representation], locals: &[LocalObject]) -> Self {
        let k = objects.len();
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
        let homs: Vec<_> = pairs.par_iter().map(|&(i, j)| hom_basis(&objects[i], &objects[j])).collect();
        let hom = |i: usize, j: usize| &homs[i * k + j];
        let rad: Vec<Vec<Vec<Morphism>>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            locals[i].rad.basis.clone()
                        } else {
                            hom(i, j).basis().to_vec()
                        }
                    })
                    .collect()
            })
            .collect();
        let irr: Vec<Vec<Vec<Morphism>>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let h = hom(i, j);
                let field = objects[i].field();
                if rad[i][j].is_empty() {
                    return Vec::new();
                }
                let mut squares = Vec::new();
                for z in 0..k {
                    for r in &rad[z][j] {
                        for s in &rad[i][z] {
                            let c = r.compose(s);
                            if !c.is_zero() {
                                squares.push(h.coordinates(&c));
                            }
                        }
                    }
                }
                let sq = subspace::basis(&Matrix::from_columns(field, h.dim(), &squares));
                let rc: Vec<Vec<u32>> = rad[i][j].iter().map(|m| h.coordinates(m)).collect();
                let joined = sq.hstack(&Matrix::from_columns(field, h.dim(), &rc));
                joined
                    .rref()
                    .pivots
                    .into_iter()
                    .filter(|&p| p >= sq.cols())
                    .map(|p| rad[i][j][p - sq.cols()].clone())
                    .collect()
            })
            .collect::<Vec<_>>()
            .chunks(k.max(1))
            .map(<[_]>::to_vec)
            .collect();
        RadicalTable { rad, irr }
    }

    fn sink_map(&self, objects: &[Representation], c: usize) -> AlmostSplitMap {
        let mut parts = Vec::new();
        let mut components = Vec::new();
        for (i, row) in self.irr.iter().enumerate() {
            for m in &row[c] {
                parts.push(i);
                components.push(m.clone());
            }
        }
        let refs: Vec<&Representation> = parts.iter().map(|&i| &objects[i]).collect();
        let (other, inclusions, projections) = sum_of(&objects[c], &refs);
        let mut map = Morphism::zero(&other, &objects[c]);
        for (m, p) in components.iter().zip(&projections) {
            map = map.add(&m.compose(p));
        }
        AlmostSplitMap {
            center: c,
            parts,
            components,
            other,
            map,
            inclusions,
            projections,
        }
    }

    fn source_map(&self, objects: &[Representation], a: usize) -> AlmostSplitMap {
        let mut parts = Vec::new();
        let mut components = Vec::new();
        for (j, m) in self.irr[a].iter().enumerate() {
            for h in m {
                parts.push(j);
                components.push(h.clone());
            }
        }
        let refs: Vec<&Representation> = parts.iter().map(|&j| &objects[j]).collect();
        let (other, inclusions, projections) = sum_of(&objects[a], &refs);
        let mut map = Morphism::zero(&objects[a], &other);
        for (m, inc) in components.iter().zip(&inclusions) {
            map = map.add(&inc.compose(m));
        }
        AlmostSplitMap {
            center: a,
            parts,
            components,
            other,
            map,
            inclusions,
            projections,
        }
    }
}

fn sum_of(like: &Representation, parts: &[&Representation]) -> (Representation, Vec<Morphism>, Vec<Morphism>) {
    if parts.is_empty() {
        (Representation::zero(like.quiver().clone(), like.algebra()), Vec::new(), Vec::new())
    } else {
        Representation::direct_sum(parts)
    }
}

/// A finite set of indecomposable subspace representations closed under
/// almost split sequences, with its irreducible maps and meshes.
#[derive(Clone, Debug)]
pub struct Catalog {
    pub algebra: LambdaAlgebra,
    pub quiver: Arc<Quiver>,
    pub objects: Vec<Representation>,
    pub projective: Vec<bool>,
    pub meshes: Vec<Mesh>,
    pub arrows: Vec<IrreducibleArrow>,
    /// Closure passes used by the builder (0 when assembled from a list).
    pub passes: usize,
    locals: Vec<LocalObject>,
    table: RadicalTable,
}

impl Catalog {
    /// Assemble the catalog structure for a known list of pairwise
    /// non-isomorphic indecomposables and verify every mesh.
    pub fn from_objects(quiver: Arc<Quiver>, algebra: LambdaAlgebra, objects: Vec<Representation>) -> Result<Catalog> {
        let projectives = indecomposable_projectives(&quiver, algebra);
        let projective: Vec<bool> = objects
            .iter()
            .map(|x| find_isomorphic(&projectives, x).is_some())
            .collect();
        let locals: Vec<LocalObject> = objects.par_iter().map(|x| LocalObject::new(x.clone())).collect();
        let table = RadicalTable::new(&objects, &locals);
        let mut arrows = Vec::new();
        for (i, row) in table.irr.iter().enumerate() {
            for (j, m) in row.iter().enumerate() {
                if !m.is_empty() {
                    arrows.push(IrreducibleArrow {
                        from: i,
                        to: j,
                        multiplicity: m.len(),
                    });
                }
            }
        }
        let mut meshes = Vec::new();
        for c in (0..objects.len()).filter(|&c| !projective[c]) {
            let sink = table.sink_map(&objects, c);
            if !sink.map.is_epi() {
                return Err(Error::InternalContractViolation(format!("sink map into object {c} is not onto")));
            }
            let kernels: Vec<Matrix> = sink.map.components().iter().map(Matrix::kernel_basis).collect();
            let (a, f) = sink.other.restrict(&kernels);
            let start = find_isomorphic(&objects, &a).ok_or_else(|| {
                Error::InternalContractViolation(format!("translate of object {c} (dims {:?}) is not in the catalog", a.dims()))
            })?;
            meshes.push(Mesh {
                start,
                end: c,
                sequence: ARSequence::new(a, sink.other, objects[c].clone(), f, sink.map),
            });
        }
        let failures: Vec<(usize, MeshFailure)> = meshes
            .iter_mut()
            .filter_map(|m| {
                verify_ar_sequence(&mut m.sequence, &objects, BUILD_SEED ^ m.end as u64)
                    .err()
                    .map(|e| (m.end, e))
            })
            .collect();
        if let Some((c, e)) = failures.first() {
            return Err(Error::InternalContractViolation(format!("mesh ending at object {c}: {e}")));
        }
        Ok(Catalog {
            algebra,
            quiver,
            objects,
            projective,
            meshes,
            arrows,
            passes: 0,
            locals,
            table,
        })
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Index of the catalog object isomorphic to `x`.
    pub fn find(&self, x: &Representation) -> Option<usize> {
        find_isomorphic(&self.objects, x)
    }

    /// Basis of `rad(objects[i], objects[j])`.
    pub fn radical_maps(&self, i: usize, j: usize) -> &[Morphism] {
        &self.table.rad[i][j]
    }

    /// Irreducible maps `objects[i] -> objects[j]` spanning `rad/rad²`.
    pub fn irreducible_maps(&self, i: usize, j: usize) -> &[Morphism] {
        &self.table.irr[i][j]
    }

    pub fn local(&self, i: usize) -> &LocalObject {
        &self.locals[i]
    }

    pub fn sink_map(&self, c: usize) -> AlmostSplitMap {
        self.table.sink_map(&self.objects, c)
    }

    pub fn source_map(&self, a: usize) -> AlmostSplitMap {
        self.table.source_map(&self.objects, a)
    }

    /// Largest composition length `Σ dim` over the objects.
    pub fn max_length(&self) -> usize {
        self.objects.iter().map(Representation::total_dim).max().unwrap_or(0)
    }

    /// Re-run every mesh's lifting tests with fresh random objects.
    pub fn verify_meshes(&mut self, seed: u64) -> Vec<(usize, MeshFailure)> {
        let objects = &self.objects;
        self.meshes
            .iter_mut()
            .filter_map(|m| {
                verify_ar_sequence(&mut m.sequence, objects, seed ^ m.end as u64)
                    .err()
                    .map(|e| (m.end, e))
            })
            .collect()
    }

    /// Is the underlying graph of irreducible maps connected?
    pub fn is_connected(&self) -> bool {
        let k = self.len();
        if k == 0 {
            return true;
        }
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for a in &self.arrows {
                for (x, y) in [(a.from, a.to), (a.to, a.from)] {
                    if x == i && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Candidates produced by one object: radical of a projective, or the
/// relative translate candidates and the torsion-free part of `τ^-1`.
fn object_candidates(x: &Representation, is_projective: bool, is_injective: bool) -> Vec<Representation> {
    let mut out = Vec::new();
    if is_projective {
        out.push(radical_subrep(x).0);
    } else if let Ok(c) = relative_translate_candidate(x, BUILD_SEED) {
        out.extend(c);
    }
    if !is_injective {
        if let Ok(t) = tau_inverse(x) {
            out.push(left_approx(&t).approx);
        }
    }
    out
}

/// Closure from the indecomposable projectives: translate candidates,
/// kernels of sink maps and torsion-free cokernels of source maps are
/// decomposed and every new indecomposable is admitted, until a pass
/// admits nothing. The result is then assembled and every mesh verified.
pub fn build_catalog(quiver: &Arc<Quiver>, algebra: LambdaAlgebra, budget: usize) -> Result<Catalog> {
    let projectives = indecomposable_projectives(quiver, algebra);
    let injectives = indecomposable_injectives(quiver, algebra);
    let mut objects = projectives.clone();
    let mut processed = 0;
    for pass in 1..=budget {
        let fresh: Vec<Representation> = objects[processed..].to_vec();
        processed = objects.len();
        let mut candidates: Vec<Representation> = fresh
            .par_iter()
            .flat_map_iter(|x| {
                let p = find_isomorphic(&projectives, x).is_some();
                let i = find_isomorphic(&injectives, x).is_some();
                object_candidates(x, p, i)
            })
            .collect();
        let locals: Vec<LocalObject> = objects.par_iter().map(|x| LocalObject::new(x.clone())).collect();
        let table = RadicalTable::new(&objects, &locals);
        for c in 0..objects.len() {
            if find_isomorphic(&projectives, &objects[c]).is_none() {
                let sink = table.sink_map(&objects, c);
                let kernels: Vec<Matrix> = sink.map.components().iter().map(Matrix::kernel_basis).collect();
                candidates.push(sink.other.restrict(&kernels).0);
            }
            let source = table.source_map(&objects, c);
            candidates.push(left_approx(&cokernel(&source.other, &source.map).0).approx);
        }
        let before = objects.len();
        for cand in candidates {
            if cand.is_zero() || !cand.is_subspace_rep() {
                continue;
            }
            let d = indecompose(&cand, BUILD_SEED)?;
            for s in d.summands {
                if find_isomorphic(&objects, &s.rep).is_none() {
                    objects.push(s.rep);
                }
            }
        }
        if objects.len() == before && processed == objects.len() {
            let mut cat = Catalog::from_objects(quiver.clone(), algebra, objects)?;
            cat.passes = pass;
            return Ok(cat);
        }
    }
    let frontier: Vec<String> = objects[processed..].iter().map(|x| format!("{:?}", x.dims())).collect();
    Err(Error::BudgetExceeded(format!(
        "{} objects after {budget} passes; unprocessed: {}",
        objects.len(),
        frontier.join(" ")
    )))
}

fn node_label(x: &Representation) -> String {
    let dims: Vec<String> = x.dims().iter().map(usize::to_string).collect();
    let blocks: String = x.spaces().iter().map(|s| s.block_invariants().to_string()).collect();
    format!("({}) {}", dims.join(","), blocks)
}

/// DOT graph: one node per object, irreducible maps as solid edges with
/// their multiplicity, the translate as dashed edges `C -> τC`.
pub fn export_quiver(c: &Catalog) -> String {
    let mut out = String::from("digraph ar {\n");
    for (i, x) in c.objects.iter().enumerate() {
        let shape = if c.projective[i] { ", shape=box" } else { "" };
        writeln!(out, "  n{i} [label=\"{}\"{shape}];", node_label(x)).unwrap();
    }
    for a in &c.arrows {
        if a.multiplicity == 1 {
            writeln!(out, "  n{} -> n{};", a.from, a.to).unwrap();
        } else {
            writeln!(out, "  n{} -> n{} [label=\"{}\"];", a.from, a.to, a.multiplicity).unwrap();
        }
    }
    for m in &c.meshes {
        writeln!(out, "  n{} -> n{} [style=dashed];", m.end, m.start).unwrap();
    }
    out.push_str("}\n");
    out
}
