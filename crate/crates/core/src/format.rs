//! Line-oriented text formats for representations and invariant-subspace
//! configurations.
//!
//! Representation files:
//!
//! ```text
//! # comment
//! field 2
//! nilpotency 2
//! points 1 2 3
//! covers 1<2 1<3
//! order 1 2 3
//! space 1 2 [[0,0],[1,0]]
//! map 1->2 2x2 [[1,0],[0,1]]
//! ```
//!
//! `points`, `covers` and `order` describe the base poset; the star `*` is
//! added on top. Every vertex (including `*`) has one `space` line giving
//! its dimension and the matrix of `T`; every arrow has one `map` line.
//! Matrices are JSON arrays of rows with entries in `[0, p)`, acting on
//! column vectors, so a map from a `d`- to an `e`-dimensional space is
//! `e x d`. An `n x 0` matrix is written as `n` empty rows.
//!
//! Configuration files give `field`, optionally `nilpotency` (default 2),
//! `dim`, `t` and `v1`, `v2`, `v3`; each subspace is a JSON list of
//! spanning column vectors.

use std::fmt::{self, Write as _};
use std::sync::Arc;

use crate::birkhoff::SubspaceConfig;
use crate::error::{Error, Result};
use crate::ffmat::{Matrix, PrimeField};
use crate::lambdamod::{LambdaAlgebra, LambdaModule};
use crate::posetrep::{Poset, Quiver, Representation};

/// A matrix as written in a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixLiteral {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<u32>>,
}

impl MatrixLiteral {
    pub fn from_matrix(m: &Matrix) -> Self {
        MatrixLiteral {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.to_rows(),
        }
    }

    pub fn to_matrix(&self, field: PrimeField) -> Matrix {
        Matrix::from_vec(field, self.rows, self.cols, self.entries.concat())
    }
}

impl fmt::Display for MatrixLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(&self.entries).expect("integers serialize"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceLine {
    pub vertex: String,
    pub t: MatrixLiteral,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapLine {
    pub source: String,
    pub target: String,
    pub matrix: MatrixLiteral,
}

/// Parsed contents of a representation file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepFile {
    pub field: u32,
    pub nilpotency: usize,
    pub points: Vec<String>,
    pub covers: Vec<(String, String)>,
    pub order: Vec<String>,
    pub spaces: Vec<SpaceLine>,
    pub maps: Vec<MapLine>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Meaningful lines with their 1-based numbers, comments stripped.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn split_keyword(l: &str) -> (&str, &str) {
    match l.split_once(char::is_whitespace) {
        Some((k, rest)) => (k, rest.trim()),
        None => (l, ""),
    }
}

fn parse_number<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.parse().map_err(|_| parse_err(line, format!("expected {what}, found `{s}`")))
}

fn parse_entries(s: &str, line: usize, p: u32) -> Result<Vec<Vec<u32>>> {
    let raw: Vec<Vec<i64>> = serde_json::from_str(s).map_err(|e| parse_err(line, format!("bad matrix: {e}")))?;
    raw.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| {
                    u32::try_from(x)
                        .ok()
                        .filter(|&x| x < p)
                        .ok_or_else(|| parse_err(line, format!("entry {x} is not in [0, {p})")))
                })
                .collect()
        })
        .collect()
}

fn literal(entries: Vec<Vec<u32>>, rows: usize, cols: usize, line: usize) -> Result<MatrixLiteral> {
    if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
        return Err(parse_err(line, format!("matrix is not {rows}x{cols}")));
    }
    Ok(MatrixLiteral { rows, cols, entries })
}

fn require<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| parse_err(0, format!("missing `{what}` line")))
}

impl RepFile {
    pub fn parse(text: &str) -> Result<RepFile> {
        let mut field = None;
        let mut nilpotency = None;
        let mut points = None;
        let mut covers = Vec::new();
        let mut order = None;
        let mut spaces = Vec::new();
        let mut maps = Vec::new();
        for (no, l) in lines(text) {
            let (key, rest) = split_keyword(l);
            match key {
                "field" => {
                    let p: u32 = parse_number(rest, no, "a prime")?;
                    PrimeField::new(p).map_err(|e| parse_err(no, e.to_string()))?;
                    field = Some(p);
                }
                "nilpotency" => nilpotency = Some(parse_number(rest, no, "a positive integer")?),
                "points" => points = Some(rest.split_whitespace().map(str::to_string).collect()),
                "covers" => {
                    for c in rest.split_whitespace() {
                        let (a, b) = c
                            .split_once('<')
                            .ok_or_else(|| parse_err(no, format!("cover `{c}` is not of the form a<b")))?;
                        covers.push((a.to_string(), b.to_string()));
                    }
                }
                "order" => order = Some(rest.split_whitespace().map(str::to_string).collect()),
                "space" => {
                    let p = field.ok_or_else(|| parse_err(no, "`field` must come before matrices"))?;
                    let mut parts = rest.splitn(3, char::is_whitespace);
                    let vertex = parts.next().unwrap_or("").to_string();
                    let dim: usize = parse_number(parts.next().unwrap_or(""), no, "a dimension")?;
                    let entries = parse_entries(parts.next().unwrap_or("").trim(), no, p)?;
                    spaces.push(SpaceLine {
                        vertex,
                        t: literal(entries, dim, dim, no)?,
                    });
                }
                "map" => {
                    let p = field.ok_or_else(|| parse_err(no, "`field` must come before matrices"))?;
                    let mut parts = rest.splitn(3, char::is_whitespace);
                    let arrow = parts.next().unwrap_or("");
                    let (source, target) = arrow
                        .split_once("->")
                        .ok_or_else(|| parse_err(no, format!("arrow `{arrow}` is not of the form a->b")))?;
                    let shape = parts.next().unwrap_or("");
                    let (r, c) = shape
                        .split_once('x')
                        .ok_or_else(|| parse_err(no, format!("shape `{shape}` is not of the form RxC")))?;
                    let rows = parse_number(r, no, "a row count")?;
                    let cols = parse_number(c, no, "a column count")?;
                    let entries = parse_entries(parts.next().unwrap_or("").trim(), no, p)?;
                    maps.push(MapLine {
                        source: source.to_string(),
                        target: target.to_string(),
                        matrix: literal(entries, rows, cols, no)?,
                    });
                }
                other => return Err(parse_err(no, format!("unknown keyword `{other}`"))),
            }
        }
        let points: Vec<String> = require(points, "points")?;
        Ok(RepFile {
            field: require(field, "field")?,
            nilpotency: require(nilpotency, "nilpotency")?,
            order: order.unwrap_or_else(|| points.clone()),
            points,
            covers,
            spaces,
            maps,
        })
    }

    pub fn poset(&self) -> Result<Poset> {
        let labels: Vec<&str> = self.points.iter().map(String::as_str).collect();
        let rel: Vec<(&str, &str)> = self.covers.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let base = Poset::from_labels(&labels, &rel)?;
        let order = self
            .order
            .iter()
            .map(|l| base.index_of(l))
            .collect::<Result<Vec<_>>>()?;
        base.with_order(order)
    }

    pub fn quiver(&self) -> Result<Quiver> {
        Quiver::star(&self.poset()?)
    }

    pub fn to_representation(&self) -> Result<Representation> {
        let q = Arc::new(self.quiver()?);
        let field = PrimeField::new(self.field)?;
        let alg = LambdaAlgebra::new(field, self.nilpotency)?;
        let nv = q.num_vertices();
        let mut spaces: Vec<Option<LambdaModule>> = vec![None; nv];
        for s in &self.spaces {
            let v = q.vertex(&s.vertex)?;
            if spaces[v].is_some() {
                return Err(Error::Invalid(format!("vertex `{}` has two spaces", s.vertex)));
            }
            spaces[v] = Some(LambdaModule::new(alg, s.t.to_matrix(field))?);
        }
        let spaces: Vec<LambdaModule> = spaces
            .into_iter()
            .enumerate()
            .map(|(v, s)| s.ok_or_else(|| Error::Invalid(format!("no space for vertex `{}`", q.label(v)))))
            .collect::<Result<_>>()?;
        let mut maps: Vec<Option<Matrix>> = vec![None; q.arrows().len()];
        for m in &self.maps {
            let (s, t) = (q.vertex(&m.source)?, q.vertex(&m.target)?);
            let k = q
                .arrow_index(s, t)
                .ok_or_else(|| Error::Invalid(format!("`{}->{}` is not an arrow", m.source, m.target)))?;
            maps[k] = Some(m.matrix.to_matrix(field));
        }
        let maps: Vec<Matrix> = maps
            .into_iter()
            .enumerate()
            .map(|(k, m)| m.ok_or_else(|| Error::Invalid(format!("no map for arrow `{}`", q.arrow_name(k)))))
            .collect::<Result<_>>()?;
        Representation::new(q, alg, spaces, maps)
    }

    pub fn from_representation(x: &Representation) -> RepFile {
        let q = x.quiver();
        let star = q.star_vertex();
        let base: Vec<usize> = q.base_vertices();
        let label = |v: usize| q.label(v).to_string();
        let covers = q
            .arrows()
            .iter()
            .filter(|&&(_, t)| Some(t) != star)
            .map(|&(s, t)| (label(s), label(t)))
            .collect();
        let mut points: Vec<usize> = base.clone();
        points.sort_unstable();
        RepFile {
            field: x.field().p(),
            nilpotency: x.algebra().n(),
            points: points.into_iter().map(label).collect(),
            covers,
            order: q.order().iter().filter(|&&v| Some(v) != star).map(|&v| label(v)).collect(),
            spaces: (0..q.num_vertices())
                .map(|v| SpaceLine {
                    vertex: label(v),
                    t: MatrixLiteral::from_matrix(x.space(v).t()),
                })
                .collect(),
            maps: q
                .arrows()
                .iter()
                .enumerate()
                .map(|(k, &(s, t))| MapLine {
                    source: label(s),
                    target: label(t),
                    matrix: MatrixLiteral::from_matrix(x.map(k)),
                })
                .collect(),
        }
    }
}

impl fmt::Display for RepFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field {}", self.field)?;
        writeln!(f, "nilpotency {}", self.nilpotency)?;
        writeln!(f, "points {}", self.points.join(" "))?;
        if !self.covers.is_empty() {
            let cs: Vec<String> = self.covers.iter().map(|(a, b)| format!("{a}<{b}")).collect();
            writeln!(f, "covers {}", cs.join(" "))?;
        }
        writeln!(f, "order {}", self.order.join(" "))?;
        for s in &self.spaces {
            writeln!(f, "space {} {} {}", s.vertex, s.t.rows, s.t)?;
        }
        for m in &self.maps {
            writeln!(
                f,
                "map {}->{} {}x{} {}",
                m.source, m.target, m.matrix.rows, m.matrix.cols, m.matrix
            )?;
        }
        Ok(())
    }
}

/// A poset file: `points`, `covers` and an optional `order` line, in the
/// syntax of representation files.
pub fn parse_poset(text: &str) -> Result<Poset> {
    let mut header = String::from("field 2\nnilpotency 1\n");
    for (no, l) in lines(text) {
        match split_keyword(l).0 {
            "points" | "covers" | "order" => {}
            other => return Err(parse_err(no, format!("unknown keyword `{other}` in a poset file"))),
        }
        header.push_str(l);
        header.push('\n');
    }
    RepFile::parse(&header)?.poset()
}

pub fn parse_representation(text: &str) -> Result<Representation> {
    RepFile::parse(text)?.to_representation()
}

pub fn write_representation(x: &Representation) -> String {
    RepFile::from_representation(x).to_string()
}

/// Parsed contents of a configuration file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceFile {
    pub field: u32,
    pub nilpotency: usize,
    pub t: MatrixLiteral,
    /// Spanning column vectors of `V1`, `V2`, `V3`.
    pub subspaces: [Vec<Vec<u32>>; 3],
}

impl SubspaceFile {
    pub fn parse(text: &str) -> Result<SubspaceFile> {
        let mut field = None;
        let mut nilpotency = 2;
        let mut dim = None;
        let mut t = None;
        let mut subspaces: [Option<Vec<Vec<u32>>>; 3] = [None, None, None];
        for (no, l) in lines(text) {
            let (key, rest) = split_keyword(l);
            match key {
                "field" => {
                    let p: u32 = parse_number(rest, no, "a prime")?;
                    PrimeField::new(p).map_err(|e| parse_err(no, e.to_string()))?;
                    field = Some(p);
                }
                "nilpotency" => nilpotency = parse_number(rest, no, "a positive integer")?,
                "dim" => dim = Some(parse_number::<usize>(rest, no, "a dimension")?),
                "t" | "v1" | "v2" | "v3" => {
                    let p = field.ok_or_else(|| parse_err(no, "`field` must come first"))?;
                    let d = dim.ok_or_else(|| parse_err(no, "`dim` must come before matrices"))?;
                    let entries = parse_entries(rest, no, p)?;
                    if key == "t" {
                        t = Some(literal(entries, d, d, no)?);
                    } else {
                        if entries.iter().any(|c| c.len() != d) {
                            return Err(parse_err(no, format!("vectors must have {d} entries")));
                        }
                        let j: usize = key[1..].parse().expect("v1, v2 or v3");
                        subspaces[j - 1] = Some(entries);
                    }
                }
                other => return Err(parse_err(no, format!("unknown keyword `{other}`"))),
            }
        }
        let [a, b, c] = subspaces;
        Ok(SubspaceFile {
            field: require(field, "field")?,
            nilpotency,
            t: require(t, "t")?,
            subspaces: [require(a, "v1")?, require(b, "v2")?, require(c, "v3")?],
        })
    }

    /// The configuration; invariance and nesting are not checked here.
    pub fn to_config(&self) -> Result<SubspaceConfig> {
        let field = PrimeField::new(self.field)?;
        let alg = LambdaAlgebra::new(field, self.nilpotency)?;
        let v = LambdaModule::new(alg, self.t.to_matrix(field))?;
        let span = |cols: &Vec<Vec<u32>>| Matrix::from_columns(field, v.dim(), cols);
        Ok(SubspaceConfig {
            v1: span(&self.subspaces[0]),
            v2: span(&self.subspaces[1]),
            v3: span(&self.subspaces[2]),
            v,
        })
    }

    pub fn from_config(cfg: &SubspaceConfig) -> SubspaceFile {
        SubspaceFile {
            field: cfg.v.field().p(),
            nilpotency: cfg.v.algebra().n(),
            t: MatrixLiteral::from_matrix(cfg.v.t()),
            subspaces: cfg.subspaces().map(Matrix::columns),
        }
    }
}

impl fmt::Display for SubspaceFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field {}", self.field)?;
        writeln!(f, "nilpotency {}", self.nilpotency)?;
        writeln!(f, "dim {}", self.t.rows)?;
        writeln!(f, "t {}", self.t)?;
        for (j, s) in self.subspaces.iter().enumerate() {
            writeln!(f, "v{} {}", j + 1, serde_json::to_string(s).expect("integers serialize"))?;
        }
        Ok(())
    }
}

/// Summary line for a multiplicity table: `"(2,2,2,2)": 1`.
pub fn dims_key(x: &Representation) -> String {
    let mut s = String::from("(");
    for (i, d) in x.dims().iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        write!(s, "{d}").expect("writing to a string");
    }
    s.push(')');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::posetrep::examples;
    use crate::random::{random_rep, random_subspace_rep};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn m_round_trip_and_text() {
        let m = examples::module_m(2);
        let text = write_representation(&m);
        assert!(text.contains("map 1->2 2x2 [[1,0],[0,1]]"));
        assert!(text.contains("space * 2 [[0,0],[1,0]]"));
        assert_eq!(parse_representation(&text).unwrap(), m);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = format!("# header\n\n{}  # trailing\n", write_representation(&examples::module_n(3)));
        assert_eq!(parse_representation(&text).unwrap(), examples::module_n(3));
    }

    #[test]
    fn bad_shape_reports_its_line() {
        let text = write_representation(&examples::module_m(2)).replace("map 1->2 2x2", "map 1->2 2x3");
        let line = text.lines().position(|l| l.starts_with("map 1->2")).unwrap() + 1;
        match RepFile::parse(&text) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn entries_out_of_range_are_rejected() {
        let text = write_representation(&examples::module_m(2)).replace("[[1,0],[0,1]]", "[[2,0],[0,1]]");
        assert!(matches!(RepFile::parse(&text), Err(Error::Parse { .. })));
    }

    #[test]
    fn zero_dimensional_spaces() {
        let q = Arc::new(Quiver::example());
        let s = examples::simple_at_top(&q, 5);
        let text = write_representation(&s);
        assert!(text.contains("space 1 0 []"));
        assert!(text.contains("map 2->* 1x0 [[]]"));
        assert_eq!(parse_representation(&text).unwrap(), s);
    }

    #[test]
    fn poset_file() {
        let p = parse_poset("points 1 2 3\ncovers 1<2 1<3\norder 1 3 2\n").unwrap();
        assert_eq!(p.order(), &[0, 2, 1]);
        assert!(p.less(0, 2));
        assert!(matches!(parse_poset("points a\nfield 2\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn subspace_file_round_trip() {
        let alg = LambdaAlgebra::dual_numbers(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let cfg = crate::birkhoff::random_config(alg, 6, &mut rng);
            let file = SubspaceFile::from_config(&cfg);
            let back = SubspaceFile::parse(&file.to_string()).unwrap();
            assert_eq!(back, file);
            assert_eq!(back.to_config().unwrap(), cfg);
        }
    }

    proptest! {
        #[test]
        fn rep_files_round_trip(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 5]), sub in any::<bool>()) {
            let q = Arc::new(Quiver::example());
            let alg = LambdaAlgebra::dual_numbers(p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = if sub {
                random_subspace_rep(&q, alg, &[3, 4, 4, 5], &mut rng)
            } else {
                random_rep(&q, alg, &[3, 3, 3, 3], &mut rng)
            };
            let file = RepFile::from_representation(&x);
            let text = file.to_string();
            let parsed = RepFile::parse(&text).unwrap();
            prop_assert_eq!(&parsed, &file);
            prop_assert_eq!(parsed.to_string(), text);
            prop_assert_eq!(parsed.to_representation().unwrap(), x);
        }
    }
}
