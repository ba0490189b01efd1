use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffmat::{subspace, Matrix};
use crate::lambdamod::{LambdaAlgebra, LambdaModule};
use crate::posetrep::{hom_basis, Morphism, Quiver, Representation};

/// `P(i)`: Λ at every vertex above `i`, identity arrows.
pub fn projective(quiver: &Arc<Quiver>, algebra: LambdaAlgebra, i: usize) -> Representation {
    cone(quiver, algebra, |v| quiver.leq(i, v))
}

/// `I(i)`: Λ at every vertex below `i`, identity arrows.
pub fn injective(quiver: &Arc<Quiver>, algebra: LambdaAlgebra, i: usize) -> Representation {
    cone(quiver, algebra, |v| quiver.leq(v, i))
}

fn cone(quiver: &Arc<Quiver>, algebra: LambdaAlgebra, inside: impl Fn(usize) -> bool) -> Representation {
    let f = algebra.field();
    let n = algebra.n();
    let spaces: Vec<LambdaModule> = (0..quiver.num_vertices())
        .map(|v| if inside(v) { algebra.regular() } else { algebra.zero_module() })
        .collect();
    let maps = quiver
        .arrows()
        .iter()
        .map(|&(s, t)| match (inside(s), inside(t)) {
            (true, true) => Matrix::identity(f, n),
            _ => Matrix::zeros(f, spaces[t].dim(), spaces[s].dim()),
        })
        .collect();
    Representation::new(quiver.clone(), algebra, spaces, maps).expect("shapes agree")
}

/// One indecomposable projective per vertex, in vertex order.
pub fn indecomposable_projectives(quiver: &Arc<Quiver>, algebra: LambdaAlgebra) -> Vec<Representation> {
    (0..quiver.num_vertices()).map(|i| projective(quiver, algebra, i)).collect()
}

pub fn indecomposable_injectives(quiver: &Arc<Quiver>, algebra: LambdaAlgebra) -> Vec<Representation> {
    (0..quiver.num_vertices()).map(|i| injective(quiver, algebra, i)).collect()
}

/// Span of `T X_v` and the images of the arrows into `v`.
fn radical_span(x: &Representation, v: usize) -> Matrix {
    let xv = x.space(v);
    let mut span = xv.t().clone();
    for (k, _) in x.quiver().arrows_into(v) {
        span = span.hstack(x.map(k));
    }
    span
}

/// The radical subrepresentation and its inclusion.
pub fn radical_subrep(x: &Representation) -> (Representation, Morphism) {
    let bases: Vec<Matrix> = (0..x.quiver().num_vertices())
        .map(|v| subspace::basis(&radical_span(x, v)))
        .collect();
    x.restrict(&bases)
}

/// Top generators: for each vertex, vectors spanning a complement of the
/// radical.
fn top_generators(x: &Representation) -> Vec<(usize, Vec<u32>)> {
    let f = x.field();
    let mut out = Vec::new();
    for v in 0..x.quiver().num_vertices() {
        let d = x.space(v).dim();
        let comp = subspace::complement(&radical_span(x, v), &Matrix::identity(f, d));
        out.extend(comp.columns().into_iter().map(|g| (v, g)));
    }
    out
}

/// Does `x` have the indecomposable `p` (with local endomorphism ring) as
/// a direct summand?
pub fn has_summand(x: &Representation, p: &Representation) -> bool {
    let into = hom_basis(p, x);
    if into.is_zero() {
        return false;
    }
    let back = hom_basis(x, p);
    into.basis()
        .iter()
        .any(|f| back.basis().iter().any(|g| g.compose(f).is_iso()))
}

/// The minimal projective presentation data needed for the translate:
/// generator vertices of `P0`, generator vertices of `P1`, and for each
/// `P1` generator its Λ-coefficients in each `P0` summand.
struct Presentation {
    p0: Vec<usize>,
    p1: Vec<usize>,
    coeffs: Vec<Vec<Vec<u32>>>,
}

fn presentation(x: &Representation) -> Presentation {
    let q = x.quiver();
    let alg = x.algebra();
    let f = alg.field();
    let n = alg.n();
    let nv = q.num_vertices();
    let gens = top_generators(x);
    // cover P0 -> X
    let p0: Vec<usize> = gens.iter().map(|(v, _)| *v).collect();
    let parts: Vec<Representation> = p0.iter().map(|&i| projective(q, alg, i)).collect();
    let refs: Vec<&Representation> = parts.iter().collect();
    let p0_rep = if refs.is_empty() {
        Representation::zero(q.clone(), alg)
    } else {
        Representation::sum(&refs)
    };
    let mut cover = Vec::with_capacity(nv);
    for v in 0..nv {
        let mut cols: Vec<Vec<u32>> = Vec::new();
        for (i, g) in &gens {
            if !q.leq(*i, v) {
                continue;
            }
            let to_v = x.composite_map(*i, v).expect("comparable");
            let mut w = g.clone();
            for _ in 0..n {
                cols.push(to_v.mul_vec(&w));
                w = x.space(*i).t().mul_vec(&w);
            }
        }
        cover.push(Matrix::from_columns(f, x.space(v).dim(), &cols));
    }
    // kernel of the cover and its top
    let kernels: Vec<Matrix> = cover.iter().map(Matrix::kernel_basis).collect();
    let (k_rep, k_inc) = p0_rep.restrict(&kernels);
    let k_gens = top_generators(&k_rep);
    let p1: Vec<usize> = k_gens.iter().map(|(v, _)| *v).collect();
    let coeffs = k_gens
        .iter()
        .map(|(j, h)| {
            let in_p0 = k_inc.component(*j).mul_vec(h);
            // blocks of (P0)_j, one per summand below j
            let mut off = 0;
            p0.iter()
                .map(|&i| {
                    if q.leq(i, *j) {
                        let c = in_p0[off..off + n].to_vec();
                        off += n;
                        c
                    } else {
                        vec![0; n]
                    }
                })
                .collect()
        })
        .collect();
    Presentation { p0, p1, coeffs }
}

/// Multiplication by `sum c_a T^a` on Λ in the basis `1, T, ...`.
fn multiplication(alg: LambdaAlgebra, c: &[u32]) -> Matrix {
    let f = alg.field();
    let j = alg.jordan_block(alg.n());
    let mut acc = Matrix::zeros(f, alg.n(), alg.n());
    let mut power = Matrix::identity(f, alg.n());
    for &ca in c {
        acc.add_scaled(&power, ca);
        power = j.mul(&power);
    }
    acc
}

/// Auslander–Reiten translate `D Tr x` as the kernel of the Nakayama
/// functor applied to a minimal projective presentation.
pub fn dtr(x: &Representation) -> Result<Representation> {
    let q = x.quiver();
    let alg = x.algebra();
    for i in 0..q.num_vertices() {
        if has_summand(x, &projective(q, alg, i)) {
            return Err(Error::HasProjectiveSummand);
        }
    }
    Ok(translate_unchecked(x))
}

fn translate_unchecked(x: &Representation) -> Representation {
    let q = x.quiver();
    let alg = x.algebra();
    let f = alg.field();
    let n = alg.n();
    let pres = presentation(x);
    let parts: Vec<Representation> = pres.p1.iter().map(|&j| injective(q, alg, j)).collect();
    if parts.is_empty() {
        return Representation::zero(q.clone(), alg);
    }
    let refs: Vec<&Representation> = parts.iter().collect();
    let nu_p1 = Representation::sum(&refs);
    let mut kernels = Vec::with_capacity(q.num_vertices());
    for v in 0..q.num_vertices() {
        let rows: Vec<usize> = (0..pres.p0.len()).filter(|&s| q.leq(v, pres.p0[s])).collect();
        let cols: Vec<usize> = (0..pres.p1.len()).filter(|&c| q.leq(v, pres.p1[c])).collect();
        let mut m = Matrix::zeros(f, rows.len() * n, cols.len() * n);
        for (ri, &s) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                m.set_block(ri * n, ci * n, &multiplication(alg, &pres.coeffs[c][s]));
            }
        }
        kernels.push(m.kernel_basis());
    }
    nu_p1.restrict(&kernels).0
}

/// `τ^-1 x = D τ D x`, computed on the opposite quiver.
pub fn tau_inverse(x: &Representation) -> Result<Representation> {
    let q = x.quiver();
    let alg = x.algebra();
    for i in 0..q.num_vertices() {
        if has_summand(x, &injective(q, alg, i)) {
            return Err(Error::Invalid("representation has an injective direct summand".into()));
        }
    }
    let d = x.dual();
    Ok(translate_unchecked(&d).dual_onto(q.clone()))
}

/// Candidates for the relative translate: indecomposable summands of
/// `R(D Tr x)`.
pub fn relative_translate_candidate(x: &Representation, seed: u64) -> Result<Vec<Representation>> {
    let t = dtr(x)?;
    let r = crate::approx::right_approx(&t).approx;
    let d = crate::decomp::indecompose(&r, seed)?;
    Ok(d.summands.into_iter().map(|s| s.rep).collect())
}

/// Cokernel of `f: x -> y` with the quotient map.
pub fn cokernel(y: &Representation, f: &Morphism) -> (Representation, Morphism) {
    let q = y.quiver();
    let field = y.field();
    let nv = q.num_vertices();
    let mut quots = Vec::with_capacity(nv);
    let mut comps = Vec::with_capacity(nv);
    for v in 0..nv {
        let img = subspace::basis(f.component(v));
        let d = y.space(v).dim();
        let comp = subspace::complement(&img, &Matrix::identity(field, d));
        let full = img.hstack(&comp);
        let inv = full.inverse().expect("basis of the whole space");
        let proj = inv.block(img.cols(), 0, comp.cols(), d);
        quots.push(proj.clone());
        comps.push(comp);
    }
    let spaces: Vec<LambdaModule> = (0..nv)
        .map(|v| {
            let t = quots[v].mul(y.space(v).t()).mul(&comps[v]);
            LambdaModule::new(y.algebra(), t).expect("quotient of a module")
        })
        .collect();
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, &(s, t))| quots[t].mul(y.map(k)).mul(&comps[s]))
        .collect();
    let rep = Representation::new(q.clone(), y.algebra(), spaces, maps).expect("shapes agree");
    (rep, Morphism::new(quots))
}
