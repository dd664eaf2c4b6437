//! Uniform hypergraphs over a dense vertex range and the pattern families
//! used throughout the crate.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{domain, Error, Result};

/// A `k`-uniform hypergraph on the vertices `0..n`.
///
/// Edges are kept sorted within and lexicographically across, without
/// duplicates, so two hypergraphs with the same edge set compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Edgeless `k`-graph on `n` vertices.
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k < 2 {
            return domain(format!("uniformity must be at least 2, got {k}"));
        }
        Ok(Hypergraph { k, n, edges: Vec::new() })
    }

    pub fn from_edges<I, E>(k: usize, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        let mut h = Hypergraph::new(k, n)?;
        let mut set = BTreeSet::new();
        for e in edges {
            set.insert(h.canonical_edge(e.as_ref())?);
        }
        h.edges = set.into_iter().collect();
        Ok(h)
    }

    /// Complete `k`-graph on `n` vertices.
    pub fn complete(k: usize, n: usize) -> Result<Self> {
        let mut h = Hypergraph::new(k, n)?;
        h.edges = (0..n).combinations(k).collect();
        Ok(h)
    }

    fn canonical_edge(&self, edge: &[usize]) -> Result<Vec<usize>> {
        if edge.len() != self.k {
            return domain(format!("edge {edge:?} has {} vertices, expected {}", edge.len(), self.k));
        }
        let mut e = edge.to_vec();
        e.sort_unstable();
        if e.windows(2).any(|w| w[0] == w[1]) {
            return domain(format!("edge {edge:?} repeats a vertex"));
        }
        if let Some(&v) = e.last().filter(|&&v| v >= self.n) {
            return domain(format!("vertex {v} out of range 0..{}", self.n));
        }
        Ok(e)
    }

    /// Inserts an edge; returns `false` if it was already present.
    pub fn add_edge(&mut self, edge: &[usize]) -> Result<bool> {
        let e = self.canonical_edge(edge)?;
        match self.edges.binary_search(&e) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.edges.insert(pos, e);
                Ok(true)
            }
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Position of `edge` in [`edges`](Self::edges), if present.
    pub fn edge_index(&self, edge: &[usize]) -> Option<usize> {
        let mut e = edge.to_vec();
        e.sort_unstable();
        self.edges.binary_search(&e).ok()
    }

    pub fn contains_edge(&self, edge: &[usize]) -> bool {
        self.edge_index(edge).is_some()
    }

    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for v in self.edges.iter().flatten() {
            deg[*v] += 1;
        }
        deg
    }

    /// Number of edges containing every vertex of `set`.
    pub fn degree_of_set(&self, set: &[usize]) -> Result<usize> {
        if set.len() > self.k {
            return domain(format!("set of size {} exceeds uniformity {}", set.len(), self.k));
        }
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.len() != set.len() {
            return domain("set repeats a vertex");
        }
        if let Some(&v) = s.last().filter(|&&v| v >= self.n) {
            return domain(format!("vertex {v} out of range 0..{}", self.n));
        }
        Ok(self.edges.iter().filter(|e| is_sorted_subset(&s, e)).count())
    }

    /// Minimum of [`degree_of_set`](Self::degree_of_set) over all `d`-subsets.
    pub fn min_d_degree(&self, d: usize) -> Result<usize> {
        if d == 0 || d >= self.k {
            return domain(format!("d must lie in 1..={}, got {d}", self.k - 1));
        }
        if d > self.n {
            return domain(format!("no {d}-subsets on {} vertices", self.n));
        }
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for e in &self.edges {
            for s in e.iter().copied().combinations(d) {
                *counts.entry(s).or_default() += 1;
            }
        }
        let total = binomial(self.n as u64, d as u64);
        if (counts.len() as u128) < total.unwrap_or(u128::MAX) {
            return Ok(0);
        }
        Ok(counts.values().copied().min().unwrap_or(0))
    }

    /// Minimum codegree, i.e. the minimum `(k-1)`-degree.
    pub fn min_codegree(&self) -> Result<usize> {
        self.min_d_degree(self.k - 1)
    }

    /// Sub-hypergraph induced on `vertices`, relabelled to `0..vertices.len()`
    /// in the order given.
    pub fn induced(&self, vertices: &[usize]) -> Result<Hypergraph> {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.n {
                return domain(format!("vertex {v} out of range 0..{}", self.n));
            }
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| pos[v] != usize::MAX))
            .map(|e| e.iter().map(|&v| pos[v]).collect::<Vec<_>>());
        Hypergraph::from_edges(self.k, vertices.len(), edges)
    }

    /// Number of edges lying entirely inside `vertices`.
    pub fn edges_within(&self, vertices: &[usize]) -> usize {
        let mut inside = vec![false; self.n];
        for &v in vertices {
            if v < self.n {
                inside[v] = true;
            }
        }
        self.edges.iter().filter(|e| e.iter().all(|&v| inside[v])).count()
    }

    /// Image of the hypergraph under the vertex map `v -> perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Hypergraph> {
        if perm.len() != self.n || !is_permutation(perm) {
            return domain("relabelling is not a permutation of the vertex set");
        }
        Hypergraph::from_edges(
            self.k,
            self.n,
            self.edges.iter().map(|e| e.iter().map(|&v| perm[v]).collect::<Vec<_>>()),
        )
    }

    /// Disjoint union; the vertices of `other` are shifted past ours.
    pub fn disjoint_union(&self, other: &Hypergraph) -> Result<Hypergraph> {
        if self.k != other.k {
            return domain("cannot join hypergraphs of different uniformity");
        }
        let shift = self.n;
        let edges = self
            .edges
            .iter()
            .cloned()
            .chain(other.edges.iter().map(|e| e.iter().map(|v| v + shift).collect()));
        Hypergraph::from_edges(self.k, self.n + other.n, edges)
    }

    /// Same edges on `n + extra` vertices.
    pub fn with_isolated(&self, extra: usize) -> Hypergraph {
        Hypergraph { k: self.k, n: self.n + extra, edges: self.edges.clone() }
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-graph on {} vertices with {} edges", self.k, self.n, self.edges.len())
    }
}

/// Part sizes `a1 <= ... <= ak` of a complete k-partite k-graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PartiteProfile {
    sizes: Vec<usize>,
}

impl PartiteProfile {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.len() < 2 {
            return Err(Error::InvalidProfile(format!("need at least 2 parts, got {}", sizes.len())));
        }
        if sizes.contains(&0) {
            return Err(Error::InvalidProfile("part sizes must be positive".into()));
        }
        if sizes.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidProfile(format!("part sizes {sizes:?} are not sorted")));
        }
        Ok(PartiteProfile { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn m(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Smallest part size `a1`.
    pub fn smallest(&self) -> usize {
        self.sizes[0]
    }

    /// Vertex ranges occupied by each part in [`complete_partite`].
    pub fn parts(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.sizes
            .iter()
            .map(|&a| {
                let r = start..start + a;
                start += a;
                r
            })
            .collect()
    }

    /// Differences `a2 - a1, ..., ak - a1`.
    pub fn differences(&self) -> Vec<u64> {
        self.sizes[1..].iter().map(|&a| (a - self.sizes[0]) as u64).collect()
    }

    /// `Some((a, b))` when the profile has the shape `(a, b, ..., b)` with `a < b`.
    pub fn small_large(&self) -> Option<(usize, usize)> {
        let (a, b) = (self.sizes[0], self.sizes[1]);
        (a < b && self.sizes[1..].iter().all(|&x| x == b)).then_some((a, b))
    }
}

impl TryFrom<Vec<usize>> for PartiteProfile {
    type Error = Error;
    fn try_from(sizes: Vec<usize>) -> Result<Self> {
        PartiteProfile::new(sizes)
    }
}

impl From<PartiteProfile> for Vec<usize> {
    fn from(p: PartiteProfile) -> Vec<usize> {
        p.sizes
    }
}

impl fmt::Display for PartiteProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K({})", self.sizes.iter().join(","))
    }
}

/// Complete k-partite k-graph; part `i` occupies the `i`-th range of
/// [`PartiteProfile::parts`].
pub fn complete_partite(profile: &PartiteProfile) -> Hypergraph {
    let edges = profile.parts().into_iter().multi_cartesian_product();
    Hypergraph::from_edges(profile.k(), profile.m(), edges).expect("transversals are valid edges")
}

fn check_loose(k: usize, s: usize, min_s: usize) -> Result<()> {
    if k < 3 {
        return domain(format!("loose cycles and paths need k >= 3, got {k}"));
    }
    if s < min_s {
        return domain(format!("need at least {min_s} edges, got {s}"));
    }
    Ok(())
}

/// Loose cycle with `s` edges: vertices `0..s(k-1)`, edge `j` is
/// `{j(k-1), ..., j(k-1)+k-1}` taken modulo `s(k-1)`.
pub fn loose_cycle(k: usize, s: usize) -> Result<Hypergraph> {
    check_loose(k, s, 2)?;
    let n = s * (k - 1);
    let edges = (0..s).map(|j| (0..k).map(|i| (j * (k - 1) + i) % n).collect::<Vec<_>>());
    Hypergraph::from_edges(k, n, edges)
}

/// Loose path with `s` edges: the loose cycle pattern without the wrap-around,
/// so consecutive edges share exactly one vertex and `n = s(k-1)+1`.
pub fn loose_path(k: usize, s: usize) -> Result<Hypergraph> {
    check_loose(k, s, 1)?;
    let n = s * (k - 1) + 1;
    let edges = (0..s).map(|j| (j * (k - 1)..j * (k - 1) + k).collect::<Vec<_>>());
    Hypergraph::from_edges(k, n, edges)
}

/// Vertex of the large class through which [`khat_extension`] attaches its
/// extra edge: the first vertex of part 2.
pub fn khat_attachment(profile: &PartiteProfile) -> usize {
    profile.smallest()
}

/// Complete k-partite graph of shape `(a, b, ..., b)` plus `k-1` new vertices
/// `m..m+k-1` and one new edge joining them to [`khat_attachment`].
pub fn khat_extension(profile: &PartiteProfile) -> Result<Hypergraph> {
    if profile.small_large().is_none() {
        return Err(Error::Shape(format!("{profile} is not of the form (a, b, ..., b) with a < b")));
    }
    let (k, m) = (profile.k(), profile.m());
    let base = complete_partite(profile);
    let mut h = base.with_isolated(k - 1);
    let mut extra = vec![khat_attachment(profile)];
    extra.extend(m..m + k - 1);
    h.add_edge(&extra)?;
    Ok(h)
}

/// The Fano plane as a 3-graph on 7 vertices.
pub fn fano_plane() -> Hypergraph {
    let lines = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
    Hypergraph::from_edges(3, 7, lines).expect("valid lines")
}

/// Brute-force isomorphism test, intended for small vertex counts.
pub fn is_isomorphic(a: &Hypergraph, b: &Hypergraph, budget: &mut Budget) -> Result<bool> {
    if a.k != b.k || a.n != b.n || a.edges.len() != b.edges.len() {
        return Ok(false);
    }
    let (da, db) = (a.vertex_degrees(), b.vertex_degrees());
    let mut sa = da.clone();
    let mut sb = db.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(false);
    }
    let mut map = vec![usize::MAX; a.n];
    let mut used = vec![false; b.n];
    iso_extend(a, b, &da, &db, 0, &mut map, &mut used, budget)
}

#[allow(clippy::too_many_arguments)]
fn iso_extend(
    a: &Hypergraph,
    b: &Hypergraph,
    da: &[usize],
    db: &[usize],
    v: usize,
    map: &mut [usize],
    used: &mut [bool],
    budget: &mut Budget,
) -> Result<bool> {
    budget.tick()?;
    if v == a.n {
        let image = a.relabel(map)?;
        return Ok(image.edges == b.edges);
    }
    for w in 0..b.n {
        if used[w] || da[v] != db[w] {
            continue;
        }
        map[v] = w;
        used[w] = true;
        // Edges of `a` whose vertices are all mapped must land on edges of `b`.
        let consistent = a
            .edges
            .iter()
            .filter(|e| e.contains(&v) && e.iter().all(|&x| x <= v))
            .all(|e| b.contains_edge(&e.iter().map(|&x| map[x]).collect::<Vec<_>>()));
        if consistent && iso_extend(a, b, da, db, v + 1, map, used, budget)? {
            return Ok(true);
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    Ok(false)
}

/// `true` when sorted `small` is a subset of sorted `big`.
pub(crate) fn is_sorted_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    perm.iter().all(|&v| v < perm.len() && !std::mem::replace(&mut seen[v], true))
}

/// Exact binomial coefficient, `None` on overflow.
pub fn binomial(n: u64, r: u64) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(sizes: &[usize]) -> PartiteProfile {
        PartiteProfile::new(sizes.to_vec()).unwrap()
    }

    #[test]
    fn complete_partite_counts() {
        for (sizes, n, e) in [(&[1, 1, 2][..], 4, 2), (&[1, 2, 2], 5, 4), (&[2, 3, 3], 8, 18)] {
            let h = complete_partite(&profile(sizes));
            assert_eq!((h.n(), h.edge_count()), (n, e), "{sizes:?}");
        }
    }

    #[test]
    fn profile_validation() {
        assert!(matches!(PartiteProfile::new(vec![2, 1]), Err(Error::InvalidProfile(_))));
        assert!(matches!(PartiteProfile::new(vec![0, 1]), Err(Error::InvalidProfile(_))));
        assert!(matches!(PartiteProfile::new(vec![3]), Err(Error::InvalidProfile(_))));
    }

    #[test]
    fn loose_cycle_shapes() {
        let c = loose_cycle(3, 4).unwrap();
        assert_eq!((c.n(), c.edge_count()), (8, 4));
        let c = loose_cycle(4, 2).unwrap();
        assert_eq!((c.n(), c.edge_count()), (6, 2));
        let (e0, e1) = (&c.edges()[0], &c.edges()[1]);
        assert_eq!(e0.iter().filter(|v| e1.contains(v)).count(), 2);
        assert!(loose_cycle(3, 1).is_err());
        assert!(loose_cycle(2, 4).is_err());
    }

    #[test]
    fn loose_cycle_3_2_is_k112() {
        let c = loose_cycle(3, 2).unwrap();
        let k = complete_partite(&profile(&[1, 1, 2]));
        assert!(is_isomorphic(&c, &k, &mut Budget::default()).unwrap());
        assert!(!is_isomorphic(&c, &Hypergraph::complete(3, 4).unwrap(), &mut Budget::default()).unwrap());
    }

    #[test]
    fn loose_path_shapes() {
        let p = loose_path(4, 2).unwrap();
        assert_eq!((p.n(), p.edge_count()), (7, 2));
        assert_eq!(p.edges()[0].iter().filter(|v| p.edges()[1].contains(v)).count(), 1);
        let p = loose_path(3, 1).unwrap();
        assert_eq!((p.n(), p.edge_count()), (3, 1));
        let p = loose_path(3, 2).unwrap();
        assert_eq!((p.n(), p.edge_count()), (5, 2));
        assert_eq!(p.edges()[0].iter().filter(|v| p.edges()[1].contains(v)).count(), 1);
        assert!(loose_path(3, 0).is_err());
    }

    #[test]
    fn khat_counts_and_shape() {
        let h = khat_extension(&profile(&[1, 2, 2])).unwrap();
        assert_eq!((h.n(), h.edge_count()), (7, 5));
        assert!(h.contains_edge(&[1, 5, 6]));
        let h = khat_extension(&profile(&[2, 3, 3, 3])).unwrap();
        assert_eq!((h.n(), h.edge_count()), (14, 55));
        assert!(matches!(khat_extension(&profile(&[1, 1, 2])), Err(Error::Shape(_))));
    }

    #[test]
    fn degrees() {
        let k5 = Hypergraph::complete(3, 5).unwrap();
        assert_eq!(k5.degree_of_set(&[1, 3]).unwrap(), 3);
        assert_eq!(k5.min_d_degree(2).unwrap(), 3);
        let c = loose_cycle(3, 4).unwrap();
        assert_eq!(c.degree_of_set(&[0, 1]).unwrap(), 1);
        assert_eq!(c.min_d_degree(2).unwrap(), 0);
        assert_eq!(c.degree_of_set(&c.edges()[2].clone()).unwrap(), 1);
        assert!(c.degree_of_set(&[0, 1, 2, 3]).is_err());
        assert!(c.min_d_degree(3).is_err());
        assert!(c.min_d_degree(0).is_err());
    }

    #[test]
    fn duplicate_insertion_is_idempotent() {
        let mut h = Hypergraph::new(3, 5).unwrap();
        assert!(h.add_edge(&[2, 0, 1]).unwrap());
        assert!(!h.add_edge(&[0, 1, 2]).unwrap());
        assert_eq!(h.edges(), &[vec![0, 1, 2]]);
        assert!(h.add_edge(&[0, 1, 5]).is_err());
        assert!(h.add_edge(&[0, 1, 1]).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(60, 30), Some(118264581564861424));
    }
}
