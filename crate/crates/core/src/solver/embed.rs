//! Backtracking embeddings of a pattern into a host hypergraph.

use std::collections::HashSet;
use std::ops::ControlFlow;

use crate::budget::Budget;
use crate::error::{domain, Result};
use crate::hypergraph::Hypergraph;

/// Hosts are addressed through `u128` vertex masks.
pub const MAX_HOST_VERTICES: usize = 128;

pub type Mask = u128;

pub fn mask_of(vertices: &[usize]) -> Mask {
    vertices.iter().fold(0, |m, &v| m | 1 << v)
}

pub fn vertices_of(mut mask: Mask) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

/// Constant-time edge and shadow lookups on a host.
pub struct HostIndex {
    edges: HashSet<Mask>,
    /// Every nonempty subset of every edge.
    shadow: HashSet<Mask>,
    degrees: Vec<usize>,
    n: usize,
}

impl HostIndex {
    pub fn new(h: &Hypergraph) -> Result<Self> {
        if h.n() > MAX_HOST_VERTICES {
            return domain(format!("host has {} vertices, limit is {MAX_HOST_VERTICES}", h.n()));
        }
        let edges: HashSet<Mask> = h.edges().iter().map(|e| mask_of(e)).collect();
        let mut shadow = HashSet::new();
        for e in h.edges() {
            let k = e.len();
            for sub in 1u32..(1 << k) {
                let m = (0..k).filter(|i| sub >> i & 1 == 1).fold(0, |m, i| m | 1 << e[i]);
                shadow.insert(m);
            }
        }
        Ok(HostIndex { edges, shadow, degrees: h.vertex_degrees(), n: h.n() })
    }

    pub fn has_edge(&self, mask: Mask) -> bool {
        self.edges.contains(&mask)
    }
}

/// Pattern preprocessed for the natural-order search.
pub struct PatternPlan {
    m: usize,
    degrees: Vec<usize>,
    /// For each pattern vertex `i`, the pattern edges containing `i`, as
    /// (vertices of the edge that are `<= i`, whether `i` is the edge's last
    /// vertex).
    checks: Vec<Vec<(Vec<usize>, bool)>>,
    /// Previous member of `i`'s twin class, if any. Twins are vertices whose
    /// transposition is an automorphism; their images are kept increasing.
    prev_twin: Vec<Option<usize>>,
    /// Product of twin class factorials: embeddings per twin-sorted one.
    twin_multiplier: u128,
}

impl PatternPlan {
    pub fn new(f: &Hypergraph) -> PatternPlan {
        let m = f.n();
        let mut checks = vec![Vec::new(); m];
        for e in f.edges() {
            let last = *e.last().expect("nonempty edge");
            for (pos, &v) in e.iter().enumerate() {
                checks[v].push((e[..=pos].to_vec(), v == last));
            }
        }
        let mut prev_twin = vec![None; m];
        let mut class_size = vec![1u128; m];
        let mut leader: Vec<usize> = (0..m).collect();
        for v in 0..m {
            if let Some(u) = (0..v).rev().find(|&u| leader[u] == u && are_twins(f, u, v)) {
                leader[v] = u;
                // Last member so far of u's class.
                let last = (0..v).rev().find(|&w| leader[w] == u).expect("u itself");
                prev_twin[v] = Some(last);
                class_size[u] += 1;
            }
        }
        let twin_multiplier = (0..m)
            .filter(|&v| leader[v] == v)
            .map(|v| (1..=class_size[v]).product::<u128>())
            .product();
        PatternPlan { m, degrees: f.vertex_degrees(), checks, prev_twin, twin_multiplier }
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn twin_multiplier(&self) -> u128 {
        self.twin_multiplier
    }
}

/// `true` when swapping `u` and `v` maps the edge set of `f` onto itself.
fn are_twins(f: &Hypergraph, u: usize, v: usize) -> bool {
    f.edges().iter().all(|e| {
        let has_u = e.contains(&u);
        let has_v = e.contains(&v);
        if has_u == has_v {
            return true;
        }
        let swapped: Vec<usize> = e
            .iter()
            .map(|&x| if x == u { v } else if x == v { u } else { x })
            .collect();
        f.contains_edge(&swapped)
    })
}

/// Visits every twin-sorted embedding of the pattern into the host, in
/// lexicographic order of `(image(0), image(1), ...)`.
///
/// The first embedding visited for a given image set is the lexicographically
/// least embedding onto that set: sorting images within twin classes never
/// increases an embedding lexicographically.
pub fn for_each_embedding(
    host: &HostIndex,
    plan: &PatternPlan,
    budget: &mut Budget,
    visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
) -> Result<ControlFlow<()>> {
    if plan.m > host.n {
        return Ok(ControlFlow::Continue(()));
    }
    let mut image = vec![usize::MAX; plan.m];
    extend(host, plan, 0, 0, &mut image, budget, visit)
}

fn extend(
    host: &HostIndex,
    plan: &PatternPlan,
    i: usize,
    used: Mask,
    image: &mut Vec<usize>,
    budget: &mut Budget,
    visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
) -> Result<ControlFlow<()>> {
    budget.tick()?;
    if i == plan.m {
        return Ok(visit(image));
    }
    let start = plan.prev_twin[i].map_or(0, |t| image[t] + 1);
    for w in start..host.n {
        if used >> w & 1 == 1 || host.degrees[w] < plan.degrees[i] {
            continue;
        }
        image[i] = w;
        let fits = plan.checks[i].iter().all(|(prefix, complete)| {
            let m = prefix.iter().fold(0, |m, &x| m | 1 << image[x]);
            if *complete {
                host.edges.contains(&m)
            } else {
                host.shadow.contains(&m)
            }
        });
        if fits {
            if let ControlFlow::Break(()) = extend(host, plan, i + 1, used | 1 << w, image, budget, visit)? {
                return Ok(ControlFlow::Break(()));
            }
        }
    }
    image[i] = usize::MAX;
    Ok(ControlFlow::Continue(()))
}
