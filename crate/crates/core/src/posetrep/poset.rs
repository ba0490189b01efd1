use crate::error::{Error, Result};

/// Label reserved for the adjoined largest point.
pub const STAR: &str = "*";

/// A finite poset with a fixed linear extension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
    order: Vec<usize>,
}

impl Poset {
    /// Poset generated by the relations `a < b` (indices into `labels`);
    /// the linear extension defaults to the lexicographically smallest
    /// topological order by index.
    pub fn new(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidPoset(format!("duplicate point `{l}`")));
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::InvalidPoset(format!("relation ({a}, {b}) out of range")));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::InvalidPoset(format!(
                        "`{}` and `{}` lie on a cycle",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        while order.len() < n {
            let next = (0..n)
                .find(|&j| !placed[j] && (0..n).all(|i| i == j || !leq[i][j] || placed[i]))
                .expect("acyclic relation has a minimal element");
            placed[next] = true;
            order.push(next);
        }
        Ok(Self { labels, leq, order })
    }

    /// Build from string labels and `(smaller, larger)` label pairs.
    pub fn from_labels(labels: &[&str], relations: &[(&str, &str)]) -> Result<Self> {
        let owned: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let find = |l: &str| {
            labels
                .iter()
                .position(|x| *x == l)
                .ok_or_else(|| Error::UnknownVertex(l.to_string()))
        };
        let rel = relations
            .iter()
            .map(|&(a, b)| Ok((find(a)?, find(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(owned, &rel)
    }

    /// The three-point poset `1 < 2`, `1 < 3`.
    pub fn example() -> Self {
        Self::from_labels(&["1", "2", "3"], &[("1", "2"), ("1", "3")]).expect("valid poset")
    }

    /// Replace the linear extension; every point must appear once and
    /// smaller points must come first.
    pub fn with_order(mut self, order: Vec<usize>) -> Result<Self> {
        let n = self.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || seen[v] {
                return Err(Error::InvalidPoset("order is not a permutation of the points".into()));
            }
            seen[v] = true;
        }
        if order.len() != n {
            return Err(Error::InvalidPoset("order is not a permutation of the points".into()));
        }
        for (a, &i) in order.iter().enumerate() {
            for &j in &order[..a] {
                if self.leq[i][j] {
                    return Err(Error::InvalidPoset(format!(
                        "order lists `{}` after the larger `{}`",
                        self.labels[j], self.labels[i]
                    )));
                }
            }
        }
        self.order = order;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn less(&self, i: usize, j: usize) -> bool {
        i != j && self.leq[i][j]
    }

    /// The linear extension, smallest first.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Hasse covers `(i, j)` with `i < j`, sorted by position of `i` then
    /// `j` in the linear extension.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &i in &self.order {
            for &j in &self.order {
                if self.less(i, j) && !(0..self.len()).any(|k| self.less(i, k) && self.less(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn maximal(&self) -> Vec<usize> {
        self.order
            .iter()
            .copied()
            .filter(|&i| !(0..self.len()).any(|j| self.less(i, j)))
            .collect()
    }

    /// `P` with a new largest point `*` appended (last in the order).
    pub fn with_star(&self) -> Result<Self> {
        if self.labels.iter().any(|l| l == STAR) {
            return Err(Error::InvalidPoset("label `*` is reserved".into()));
        }
        let mut labels = self.labels.clone();
        labels.push(STAR.to_string());
        let star = self.len();
        let mut rel: Vec<(usize, usize)> = self.covers();
        rel.extend(self.maximal().into_iter().map(|m| (m, star)));
        let mut order = self.order.clone();
        order.push(star);
        Self::new(labels, &rel)?.with_order(order)
    }

    /// Reversed order relation; the linear extension is reversed too.
    pub fn opposite(&self) -> Self {
        let n = self.len();
        let leq = (0..n).map(|i| (0..n).map(|j| self.leq[j][i]).collect()).collect();
        let order = self.order.iter().rev().copied().collect();
        Self {
            labels: self.labels.clone(),
            leq,
            order,
        }
    }
}

/// Hasse quiver of a poset: one arrow per cover, representations are
/// required to commute along parallel paths.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    poset: Poset,
    arrows: Vec<(usize, usize)>,
    star: Option<usize>,
}

impl Quiver {
    pub fn from_poset(poset: Poset) -> Self {
        let arrows = poset.covers();
        Self {
            poset,
            arrows,
            star: None,
        }
    }

    /// `P*`: covers of `P` plus `m -> *` for every maximal `m`.
    pub fn star(base: &Poset) -> Result<Self> {
        let poset = base.with_star()?;
        let star = poset.len() - 1;
        let mut q = Self::from_poset(poset);
        q.star = Some(star);
        Ok(q)
    }

    /// `P*` for the three-point example poset.
    pub fn example() -> Self {
        Self::star(&Poset::example()).expect("valid poset")
    }

    /// Same vertices, reversed arrows (arrow `k` of the result is arrow
    /// `k` turned around).
    pub fn opposite(&self) -> Self {
        Self {
            poset: self.poset.opposite(),
            arrows: self.arrows.iter().map(|&(s, t)| (t, s)).collect(),
            star: self.star,
        }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn num_vertices(&self) -> usize {
        self.poset.len()
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn star_vertex(&self) -> Option<usize> {
        self.star
    }

    /// The adjoined star; panics on quivers built without one.
    pub fn top(&self) -> usize {
        self.star.expect("quiver has no star vertex")
    }

    pub fn label(&self, v: usize) -> &str {
        self.poset.label(v)
    }

    pub fn vertex(&self, label: &str) -> Result<usize> {
        self.poset.index_of(label)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.poset.leq(i, j)
    }

    pub fn order(&self) -> &[usize] {
        self.poset.order()
    }

    /// Vertices other than the star, in linear-extension order.
    pub fn base_vertices(&self) -> Vec<usize> {
        self.order().iter().copied().filter(|&v| Some(v) != self.star).collect()
    }

    pub fn arrows_into(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arrows
            .iter()
            .enumerate()
            .filter(move |(_, &(_, t))| t == v)
            .map(|(k, &(s, _))| (k, s))
    }

    pub fn arrows_from(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arrows
            .iter()
            .enumerate()
            .filter(move |(_, &(s, _))| s == v)
            .map(|(k, &(_, t))| (k, t))
    }

    pub fn arrow_index(&self, s: usize, t: usize) -> Option<usize> {
        self.arrows.iter().position(|&a| a == (s, t))
    }

    pub fn arrow_name(&self, k: usize) -> String {
        let (s, t) = self.arrows[k];
        format!("{}->{}", self.label(s), self.label(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_star_quiver() {
        let q = Quiver::example();
        assert_eq!(q.num_vertices(), 4);
        let names: Vec<String> = (0..q.arrows().len()).map(|k| q.arrow_name(k)).collect();
        assert_eq!(names, ["1->2", "1->3", "2->*", "3->*"]);
        assert_eq!(q.label(q.top()), "*");
        assert!(q.leq(0, 3));
        assert!(!q.leq(1, 2));
        assert_eq!(q.base_vertices(), vec![0, 1, 2]);
    }

    #[test]
    fn rejects_cycles_and_bad_orders() {
        assert!(Poset::from_labels(&["a", "b"], &[("a", "b"), ("b", "a")]).is_err());
        let p = Poset::example();
        assert!(p.clone().with_order(vec![1, 0, 2]).is_err());
        assert!(p.with_order(vec![0, 2, 1]).is_ok());
    }

    #[test]
    fn covers_skip_transitive_relations() {
        let p = Poset::from_labels(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
        assert_eq!(p.maximal(), vec![2]);
    }

    #[test]
    fn opposite_is_involutive() {
        let q = Quiver::example();
        assert_eq!(q.opposite().opposite(), q);
        let op = q.opposite();
        assert!(op.leq(3, 0));
        assert_eq!(op.order(), &[3, 2, 1, 0]);
    }
}
