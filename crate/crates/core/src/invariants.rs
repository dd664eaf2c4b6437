//! k-partite realizations of a pattern and the invariants built from them:
//! the realized class sizes S(F), their differences D(F), gcd(F), the
//! smallest class ratio σ(F) and the vertex cover number τ(F).
//!
//! A realization is a partition of V(F) into exactly `k` nonempty classes
//! such that every edge meets every class once. Classes are never empty, so
//! every element of S(F) is positive.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{domain, Error, Result};
use crate::hypergraph::Hypergraph;
use crate::rational::{self, Rational};

/// Largest pattern the realization and vertex cover searches accept.
pub const MAX_PATTERN_VERTICES: usize = 24;

/// A partition of V(F) into `k` classes with every edge rainbow. Classes are
/// sorted internally and ordered by `(size, smallest element)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Realization {
    classes: Vec<Vec<usize>>,
}

impl Realization {
    fn from_coloring(colors: &[usize], k: usize) -> Realization {
        let mut classes = vec![Vec::new(); k];
        for (v, &c) in colors.iter().enumerate() {
            classes[c].push(v);
        }
        classes.sort_by(|a, b| (a.len(), a.first()).cmp(&(b.len(), b.first())));
        Realization { classes }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Class sizes in nondecreasing order.
    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Checks the realization conditions against `f`.
    pub fn is_valid_for(&self, f: &Hypergraph) -> bool {
        if self.classes.len() != f.k() || self.classes.iter().any(Vec::is_empty) {
            return false;
        }
        let mut class_of = vec![usize::MAX; f.n()];
        for (i, class) in self.classes.iter().enumerate() {
            for &v in class {
                if v >= f.n() || class_of[v] != usize::MAX {
                    return false;
                }
                class_of[v] = i;
            }
        }
        if class_of.contains(&usize::MAX) {
            return false;
        }
        f.edges().iter().all(|e| {
            let mut hit = vec![false; f.k()];
            e.iter().all(|&v| !std::mem::replace(&mut hit[class_of[v]], true))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    /// S(F): every class size occurring in some realization.
    pub s_set: BTreeSet<usize>,
    /// D(F): every difference of two class sizes within one realization,
    /// including 0.
    pub d_set: BTreeSet<usize>,
    /// gcd(F); absent when D(F) = {0}.
    pub gcd: Option<u64>,
    #[serde(with = "rational::as_string")]
    pub sigma: Rational,
    pub tau: usize,
}

impl InvariantReport {
    pub fn gcd_of_s(&self) -> u64 {
        gcd_ignoring_zero(self.s_set.iter().map(|&s| s as u64)).unwrap_or(0)
    }
}

/// gcd of the nonzero entries; `None` when there are none.
pub fn gcd_ignoring_zero(values: impl IntoIterator<Item = u64>) -> Option<u64> {
    values.into_iter().filter(|&v| v != 0).reduce(|a, b| a.gcd(&b))
}

fn check_pattern(f: &Hypergraph) -> Result<()> {
    if f.edge_count() == 0 {
        return Err(Error::Edgeless);
    }
    if f.n() > MAX_PATTERN_VERTICES {
        return domain(format!("pattern has {} vertices, limit is {MAX_PATTERN_VERTICES}", f.n()));
    }
    Ok(())
}

/// Vertices with identical edge incidences. Members of a class with at least
/// one edge must receive pairwise distinct colors, and permuting colors among
/// them never changes class sizes.
struct TwinClasses {
    /// Non-isolated classes, highest degree first.
    classes: Vec<Vec<usize>>,
    /// For each class, the edges (indices into `f.edges()`) it lies in.
    class_edges: Vec<Vec<usize>>,
    isolated: Vec<usize>,
}

impl TwinClasses {
    fn of(f: &Hypergraph) -> TwinClasses {
        let mut incidence: Vec<Vec<usize>> = vec![Vec::new(); f.n()];
        for (i, e) in f.edges().iter().enumerate() {
            for &v in e {
                incidence[v].push(i);
            }
        }
        let mut groups: BTreeMap<&[usize], Vec<usize>> = BTreeMap::new();
        let mut isolated = Vec::new();
        for (v, inc) in incidence.iter().enumerate() {
            if inc.is_empty() {
                isolated.push(v);
            } else {
                groups.entry(inc).or_default().push(v);
            }
        }
        let mut pairs: Vec<(Vec<usize>, Vec<usize>)> =
            groups.into_iter().map(|(inc, vs)| (vs, inc.to_vec())).collect();
        pairs.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0[0].cmp(&b.0[0])));
        let (classes, class_edges) = pairs.into_iter().unzip();
        TwinClasses { classes, class_edges, isolated }
    }
}

/// Depth-first assignment of a color set to each twin class such that the
/// classes of every edge receive disjoint sets. `visit` sees one color mask
/// per class.
struct ClassColoring<'a> {
    k: usize,
    twins: &'a TwinClasses,
    edge_used: Vec<u32>,
    masks: Vec<u32>,
    budget: &'a mut Budget,
}

impl ClassColoring<'_> {
    fn run(&mut self, visit: &mut dyn FnMut(&[u32], &mut Budget) -> Result<()>) -> Result<()> {
        self.extend(0, visit)
    }

    fn extend(&mut self, depth: usize, visit: &mut dyn FnMut(&[u32], &mut Budget) -> Result<()>) -> Result<()> {
        self.budget.tick()?;
        if depth == self.twins.classes.len() {
            return visit(&self.masks, self.budget);
        }
        let size = self.twins.classes[depth].len();
        let edges = &self.twins.class_edges[depth];
        let blocked = edges.iter().fold(0u32, |acc, &e| acc | self.edge_used[e]);
        let full = (1u32 << self.k) - 1;
        // Color permutations map realizations onto each other, so the first
        // class may take the lowest colors.
        let candidates: Vec<u32> = if depth == 0 {
            vec![(1u32 << size) - 1]
        } else {
            subsets_of_size(full & !blocked, size)
        };
        for mask in candidates {
            for &e in edges {
                self.edge_used[e] |= mask;
            }
            self.masks[depth] = mask;
            let r = self.extend(depth + 1, visit);
            for &e in edges {
                self.edge_used[e] &= !mask;
            }
            r?;
        }
        Ok(())
    }
}

fn subsets_of_size(pool: u32, size: usize) -> Vec<u32> {
    let bits: Vec<u32> = (0..32).filter(|b| pool >> b & 1 == 1).collect();
    let mut out = Vec::new();
    for combo in itertools::Itertools::combinations(bits.into_iter(), size) {
        out.push(combo.into_iter().fold(0, |m, b| m | 1 << b));
    }
    out
}

fn class_coloring_search(
    f: &Hypergraph,
    budget: &mut Budget,
    visit: &mut dyn FnMut(&TwinClasses, &[u32], &mut Budget) -> Result<()>,
) -> Result<()> {
    let twins = TwinClasses::of(f);
    let mut search = ClassColoring {
        k: f.k(),
        twins: &twins,
        edge_used: vec![0; f.edge_count()],
        masks: vec![0; twins.classes.len()],
        budget,
    };
    search.run(&mut |masks, b| visit(&twins, masks, b))
}

/// Every sorted class-size vector occurring in a realization of `f`.
///
/// Works on the twin quotient of `f`, so it stays cheap on patterns like loose
/// cycles whose realization count is exponential.
pub fn size_profiles(f: &Hypergraph, budget: &mut Budget) -> Result<BTreeSet<Vec<usize>>> {
    check_pattern(f)?;
    let k = f.k();
    let mut profiles = BTreeSet::new();
    let start = budget.used();
    class_coloring_search(f, budget, &mut |twins, masks, budget| {
        let mut sizes = vec![0usize; k];
        for (class, &mask) in twins.classes.iter().zip(masks) {
            debug_assert_eq!(mask.count_ones() as usize, class.len());
            for (c, size) in sizes.iter_mut().enumerate() {
                if mask >> c & 1 == 1 {
                    *size += 1;
                }
            }
        }
        distribute_isolated(&mut sizes, 0, twins.isolated.len(), &mut profiles, budget)
    })?;
    if profiles.is_empty() {
        return Err(Error::NotPartite { k, nodes: budget.used() - start });
    }
    Ok(profiles)
}

fn distribute_isolated(
    sizes: &mut Vec<usize>,
    color: usize,
    left: usize,
    out: &mut BTreeSet<Vec<usize>>,
    budget: &mut Budget,
) -> Result<()> {
    budget.tick()?;
    if color + 1 == sizes.len() {
        sizes[color] += left;
        if sizes.iter().all(|&s| s > 0) {
            let mut sorted = sizes.clone();
            sorted.sort_unstable();
            out.insert(sorted);
        }
        sizes[color] -= left;
        return Ok(());
    }
    for take in 0..=left {
        sizes[color] += take;
        let r = distribute_isolated(sizes, color + 1, left - take, out, budget);
        sizes[color] -= take;
        r?;
    }
    Ok(())
}

/// All k-partite realizations of `f`, sorted and deduplicated. Empty when `f`
/// is not k-partite.
pub fn realizations(f: &Hypergraph, budget: &mut Budget) -> Result<Vec<Realization>> {
    check_pattern(f)?;
    let k = f.k();
    let mut found = BTreeSet::new();
    let mut colors = vec![usize::MAX; f.n()];
    class_coloring_search(f, budget, &mut |twins, masks, budget| {
        expand_classes(twins, masks, 0, &mut colors, k, &mut found, budget)
    })?;
    Ok(found.into_iter().collect())
}

/// Turns a class-level coloring into every vertex-level coloring it stands for.
fn expand_classes(
    twins: &TwinClasses,
    masks: &[u32],
    depth: usize,
    colors: &mut Vec<usize>,
    k: usize,
    found: &mut BTreeSet<Realization>,
    budget: &mut Budget,
) -> Result<()> {
    budget.tick()?;
    if depth == twins.classes.len() {
        return expand_isolated(&twins.isolated, 0, colors, k, found, budget);
    }
    let palette: Vec<usize> = (0..k).filter(|c| masks[depth] >> c & 1 == 1).collect();
    let class = &twins.classes[depth];
    for order in itertools::Itertools::permutations(palette.iter().copied(), palette.len()) {
        for (&v, c) in class.iter().zip(order) {
            colors[v] = c;
        }
        expand_classes(twins, masks, depth + 1, colors, k, found, budget)?;
    }
    Ok(())
}

fn expand_isolated(
    isolated: &[usize],
    idx: usize,
    colors: &mut Vec<usize>,
    k: usize,
    found: &mut BTreeSet<Realization>,
    budget: &mut Budget,
) -> Result<()> {
    budget.tick()?;
    if idx == isolated.len() {
        let mut used = vec![false; k];
        for &c in colors.iter() {
            used[c] = true;
        }
        if used.iter().all(|&u| u) {
            found.insert(Realization::from_coloring(colors, k));
        }
        return Ok(());
    }
    for c in 0..k {
        colors[isolated[idx]] = c;
        expand_isolated(isolated, idx + 1, colors, k, found, budget)?;
    }
    Ok(())
}

/// S(F), D(F), gcd(F), σ(F) and τ(F) for a k-partite pattern.
pub fn structural_invariants(f: &Hypergraph, budget: &mut Budget) -> Result<InvariantReport> {
    let profiles = size_profiles(f, budget)?;
    Ok(report_from_profiles(f, &profiles, vertex_cover_number(f, budget)?))
}

pub(crate) fn report_from_profiles(f: &Hypergraph, profiles: &BTreeSet<Vec<usize>>, tau: usize) -> InvariantReport {
    let mut s_set = BTreeSet::new();
    let mut d_set = BTreeSet::new();
    for sizes in profiles {
        s_set.extend(sizes.iter().copied());
        for &x in sizes {
            for &y in sizes {
                d_set.insert(x.abs_diff(y));
            }
        }
    }
    let gcd = gcd_ignoring_zero(d_set.iter().map(|&d| d as u64));
    let min_s = *s_set.iter().next().expect("realizations are nonempty");
    InvariantReport {
        s_set,
        d_set,
        gcd,
        sigma: rational::ratio(min_s as i64, f.n() as i64),
        tau,
    }
}

/// Exact vertex cover number by branch and bound.
pub fn vertex_cover_number(f: &Hypergraph, budget: &mut Budget) -> Result<usize> {
    if f.n() > MAX_PATTERN_VERTICES {
        return domain(format!("pattern has {} vertices, limit is {MAX_PATTERN_VERTICES}", f.n()));
    }
    let edges: Vec<u32> = f.edges().iter().map(|e| e.iter().fold(0, |m, &v| m | 1 << v)).collect();
    let mut best = f.n().min(edges.len());
    cover_search(&edges, 0, 0, &mut best, budget)?;
    Ok(best)
}

fn cover_search(edges: &[u32], chosen: u32, size: usize, best: &mut usize, budget: &mut Budget) -> Result<()> {
    budget.tick()?;
    let Some(&open) = edges.iter().find(|&&e| e & chosen == 0) else {
        *best = (*best).min(size);
        return Ok(());
    };
    // Pairwise disjoint uncovered edges each need their own cover vertex.
    let mut packed = 0u32;
    let mut bound = 0;
    for &e in edges {
        if e & chosen == 0 && e & packed == 0 {
            packed |= e;
            bound += 1;
        }
    }
    if size + bound >= *best {
        return Ok(());
    }
    let mut bits = open;
    while bits != 0 {
        let v = bits.trailing_zeros();
        bits &= bits - 1;
        cover_search(edges, chosen | 1 << v, size + 1, best, budget)?;
    }
    Ok(())
}
