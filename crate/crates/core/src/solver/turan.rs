//! Turán and codegree Turán numbers of a pattern on tiny vertex counts.
//!
//! Two independent searches are available. The exhaustive one is a plain
//! include/exclude branch and bound over all k-sets. The isomorph-reduced one
//! grows F-free hypergraphs one edge at a time, level by level, keeping a
//! single canonical representative per isomorphism class. F-freeness is
//! closed under deleting edges, so every F-free class on `j + 1` edges
//! extends some class on `j` edges and the levels reach all of them.

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{domain, Result};
use crate::hypergraph::{binomial, Hypergraph};

use super::is_subgraph_free;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TuranMode {
    Exhaustive,
    IsomorphReduced,
    /// Exhaustive up to 5 vertices, isomorph-reduced from 6 on.
    Auto,
}

impl TuranMode {
    fn resolve(self, n: usize) -> TuranMode {
        match self {
            TuranMode::Auto if n <= 5 => TuranMode::Exhaustive,
            TuranMode::Auto => TuranMode::IsomorphReduced,
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuranResult {
    pub value: u64,
    /// An F-free hypergraph attaining the value.
    pub witness: Hypergraph,
    pub mode: TuranMode,
}

/// Edge masks are `u128`, so the number of k-sets is capped.
const MAX_KSETS: u128 = 128;

/// Largest vertex count for the permutation-based canonical form.
const MAX_REDUCED_VERTICES: usize = 8;

struct Universe<'a> {
    n: usize,
    k: usize,
    pattern: &'a Hypergraph,
    ksets: Vec<Vec<usize>>,
    /// For each (k-1)-set, the k-sets containing it.
    ridge_members: Vec<Vec<usize>>,
}

impl<'a> Universe<'a> {
    fn new(n: usize, pattern: &'a Hypergraph) -> Result<Self> {
        let k = pattern.k();
        let count = binomial(n as u64, k as u64).unwrap_or(u128::MAX);
        if count > MAX_KSETS {
            return domain(format!("{count} candidate edges on {n} vertices, limit is {MAX_KSETS}"));
        }
        let ksets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
        let ridges: Vec<Vec<usize>> = (0..n).combinations(k - 1).collect();
        let ridge_members = ridges
            .iter()
            .map(|r| {
                ksets
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| crate::hypergraph::is_sorted_subset(r, e))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Ok(Universe { n, k, pattern, ksets, ridge_members })
    }

    fn graph(&self, mask: u128) -> Hypergraph {
        let edges = (0..self.ksets.len()).filter(|&i| mask >> i & 1 == 1).map(|i| &self.ksets[i]);
        Hypergraph::from_edges(self.k, self.n, edges).expect("k-sets are valid edges")
    }

    fn is_free(&self, mask: u128, budget: &mut Budget) -> Result<bool> {
        is_subgraph_free(&self.graph(mask), self.pattern, budget)
    }

    fn min_codegree(&self, mask: u128) -> u64 {
        self.ridge_members
            .iter()
            .map(|members| members.iter().filter(|&&i| mask >> i & 1 == 1).count() as u64)
            .min()
            .unwrap_or(0)
    }
}

#[derive(Clone, Copy)]
enum Objective {
    Edges,
    MinCodegree,
}

/// ex(n, F): the most edges in an F-free k-graph on `n` vertices.
pub fn turan_brute(n: usize, f: &Hypergraph, mode: TuranMode, budget: &mut Budget) -> Result<TuranResult> {
    solve(n, f, mode, Objective::Edges, budget)
}

/// coex(n, F): the largest minimum codegree of an F-free k-graph on `n` vertices.
pub fn coex_brute(n: usize, f: &Hypergraph, mode: TuranMode, budget: &mut Budget) -> Result<TuranResult> {
    solve(n, f, mode, Objective::MinCodegree, budget)
}

fn solve(n: usize, f: &Hypergraph, mode: TuranMode, objective: Objective, budget: &mut Budget) -> Result<TuranResult> {
    if f.edge_count() == 0 {
        return domain("pattern has no edges, every hypergraph contains it");
    }
    if n < f.k() {
        return domain(format!("need n >= k = {}, got {n}", f.k()));
    }
    let universe = Universe::new(n, f)?;
    let mode = mode.resolve(n);
    let (value, mask) = match mode {
        TuranMode::Exhaustive => exhaustive(&universe, objective, budget)?,
        _ => reduced(&universe, objective, budget)?,
    };
    Ok(TuranResult { value, witness: universe.graph(mask), mode })
}

struct Exhaustive<'a, 'b> {
    universe: &'a Universe<'b>,
    objective: Objective,
    /// `remaining[i][r]`: k-sets with index >= i containing ridge r.
    remaining: Vec<Vec<u64>>,
    degree: Vec<u64>,
    best: (u64, u128),
}

fn exhaustive(universe: &Universe, objective: Objective, budget: &mut Budget) -> Result<(u64, u128)> {
    let total = universe.ksets.len();
    let ridges = universe.ridge_members.len();
    let mut remaining = vec![vec![0u64; ridges]; total + 1];
    for (r, members) in universe.ridge_members.iter().enumerate() {
        for &i in members {
            for row in remaining.iter_mut().take(i + 1) {
                row[r] += 1;
            }
        }
    }
    let mut search = Exhaustive { universe, objective, remaining, degree: vec![0; ridges], best: (0, 0) };
    search.dfs(0, 0, 0, budget)?;
    Ok(search.best)
}

impl Exhaustive<'_, '_> {
    fn bound(&self, idx: usize, count: u64) -> u64 {
        match self.objective {
            Objective::Edges => count + (self.universe.ksets.len() - idx) as u64,
            Objective::MinCodegree => {
                self.degree.iter().zip(&self.remaining[idx]).map(|(d, r)| d + r).min().unwrap_or(0)
            }
        }
    }

    fn dfs(&mut self, idx: usize, mask: u128, count: u64, budget: &mut Budget) -> Result<()> {
        budget.tick()?;
        if self.bound(idx, count) <= self.best.0 {
            return Ok(());
        }
        if idx == self.universe.ksets.len() {
            // The bound is exact at a leaf and beats the incumbent.
            self.best = (self.bound(idx, count), mask);
            return Ok(());
        }
        let with = mask | 1 << idx;
        if self.universe.is_free(with, budget)? {
            self.toggle(idx, true);
            let r = self.dfs(idx + 1, with, count + 1, budget);
            self.toggle(idx, false);
            r?;
        }
        self.dfs(idx + 1, mask, count, budget)
    }

    fn toggle(&mut self, idx: usize, on: bool) {
        for (r, members) in self.universe.ridge_members.iter().enumerate() {
            if members.contains(&idx) {
                if on {
                    self.degree[r] += 1;
                } else {
                    self.degree[r] -= 1;
                }
            }
        }
    }
}

/// Images of every k-set index under every vertex permutation.
struct Relabelings {
    maps: Vec<Vec<u8>>,
}

impl Relabelings {
    fn new(universe: &Universe, budget: &mut Budget) -> Result<Self> {
        if universe.n > MAX_REDUCED_VERTICES {
            return domain(format!(
                "isomorph-reduced search supports at most {MAX_REDUCED_VERTICES} vertices"
            ));
        }
        let index: std::collections::HashMap<&[usize], u8> =
            universe.ksets.iter().enumerate().map(|(i, e)| (e.as_slice(), i as u8)).collect();
        let mut maps = Vec::new();
        for perm in (0..universe.n).permutations(universe.n) {
            budget.tick()?;
            let map = universe
                .ksets
                .iter()
                .map(|e| {
                    let mut img: Vec<usize> = e.iter().map(|&v| perm[v]).collect();
                    img.sort_unstable();
                    index[img.as_slice()]
                })
                .collect();
            maps.push(map);
        }
        Ok(Relabelings { maps })
    }

    fn canonical(&self, mask: u128, budget: &mut Budget) -> Result<u128> {
        budget.charge(self.maps.len() as u64)?;
        let bits: Vec<usize> = (0..128).filter(|&i| mask >> i & 1 == 1).collect();
        Ok(self
            .maps
            .iter()
            .map(|map| bits.iter().fold(0u128, |m, &i| m | 1 << map[i]))
            .min()
            .unwrap_or(0))
    }
}

fn reduced(universe: &Universe, objective: Objective, budget: &mut Budget) -> Result<(u64, u128)> {
    let relabel = Relabelings::new(universe, budget)?;
    let total = universe.ksets.len();
    let mut level: BTreeSet<u128> = BTreeSet::from([0]);
    let mut rejected: HashSet<u128> = HashSet::new();
    let mut best = match objective {
        Objective::Edges => (0, 0),
        Objective::MinCodegree => (universe.min_codegree(0), 0),
    };
    let mut edges = 0u64;
    loop {
        let mut next: BTreeSet<u128> = BTreeSet::new();
        for &g in &level {
            for e in (0..total).filter(|&e| g >> e & 1 == 0) {
                budget.tick()?;
                let canon = relabel.canonical(g | 1 << e, budget)?;
                if next.contains(&canon) || rejected.contains(&canon) {
                    continue;
                }
                if universe.is_free(canon, budget)? {
                    next.insert(canon);
                } else {
                    rejected.insert(canon);
                }
            }
        }
        let Some(&first) = next.iter().next() else {
            break;
        };
        edges += 1;
        match objective {
            Objective::Edges => best = (edges, first),
            Objective::MinCodegree => {
                for &g in &next {
                    let c = universe.min_codegree(g);
                    if c > best.0 {
                        best = (c, g);
                    }
                }
            }
        }
        level = next;
    }
    Ok(best)
}
