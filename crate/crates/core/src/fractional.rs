//! Fractional homomorphic tilings: nonnegative weights on vertex-edge
//! incidences of a k-graph `L`, relative to a profile `a1 <= ... <= ak`.
//!
//! A weighting `h` is valid when
//! 1. `h(v, e) != 0` only if `v` lies in `e`,
//! 2. every vertex carries total weight at most 1, and
//! 3. every edge has a labeling `v1 ... vk` with `h(v1,e) <= ... <= h(vk,e)`
//!    and `h(v1,e)/a1 >= ... >= h(vk,e)/ak`.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{domain, Error, Result};
use crate::hypergraph::{complete_partite, khat_attachment, khat_extension, Hypergraph, PartiteProfile};
use crate::rational::{self, Rational};
use crate::simplex;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FractionalTiling {
    /// `(vertex, edge index)` to weight.
    pub weights: BTreeMap<(usize, usize), Rational>,
    /// Edge index to a labeling certifying condition 3.
    pub labelings: BTreeMap<usize, Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    vertex: usize,
    edge: usize,
    #[serde(with = "rational::as_string")]
    weight: Rational,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    entries: Vec<Entry>,
    #[serde(default)]
    labelings: BTreeMap<usize, Vec<usize>>,
}

impl Serialize for FractionalTiling {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self
            .weights
            .iter()
            .map(|(&(vertex, edge), w)| Entry { vertex, edge, weight: w.clone() })
            .collect();
        Wire { entries, labelings: self.labelings.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FractionalTiling {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = Wire::deserialize(d)?;
        let mut weights = BTreeMap::new();
        for e in wire.entries {
            if weights.insert((e.vertex, e.edge), e.weight).is_some() {
                return Err(serde::de::Error::custom(format!("duplicate entry ({}, {})", e.vertex, e.edge)));
            }
        }
        Ok(FractionalTiling { weights, labelings: wire.labelings })
    }
}

impl FractionalTiling {
    pub fn weight(&self) -> Rational {
        self.weights.values().sum()
    }

    /// Multiplies every weight by `c`.
    pub fn scaled(&self, c: &Rational) -> FractionalTiling {
        FractionalTiling {
            weights: self.weights.iter().map(|(k, w)| (*k, w * c)).collect(),
            labelings: self.labelings.clone(),
        }
    }

    fn edge_weights(&self, edge_idx: usize, edge: &[usize]) -> Vec<Rational> {
        edge.iter()
            .map(|&v| self.weights.get(&(v, edge_idx)).cloned().unwrap_or_else(Rational::zero))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub valid: bool,
    #[serde(with = "rational::as_string")]
    pub weight: Rational,
    /// Smallest nonzero weight; `None` stands for infinity when `h = 0`.
    #[serde(with = "rational::as_option_string")]
    pub h_min: Option<Rational>,
    /// Total weight at each vertex of `L`.
    #[serde(with = "rational_vec")]
    pub vertex_sums: Vec<Rational>,
    /// A labeling satisfying condition 3 for every weighted edge that has one.
    pub labelings: BTreeMap<usize, Vec<usize>>,
    pub violations: Vec<String>,
}

mod rational_vec {
    use serde::{Serialize, Serializer};

    use crate::rational::{to_string, Rational};

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        values.iter().map(to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw: Vec<String> = serde::Deserialize::deserialize(d)?;
        raw.iter()
            .map(|t| crate::rational::parse(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Condition 3 for weights listed in labeling order.
fn labeling_ok(weights: &[Rational], divisors: &[usize]) -> bool {
    weights.windows(2).zip(divisors.windows(2)).all(|(w, a)| {
        w[0] <= w[1] && &w[0] * Rational::from_integer(a[1].into()) >= &w[1] * Rational::from_integer(a[0].into())
    })
}

/// A labeling of `edge` satisfying condition 3: the stored one, then the
/// weight-sorted order, then every permutation.
fn find_labeling(edge: &[usize], weights: &[Rational], divisors: &[usize], stored: Option<&Vec<usize>>) -> Option<Vec<usize>> {
    let weight_of = |v: usize| &weights[edge.iter().position(|&x| x == v).expect("vertex of edge")];
    let works = |labeling: &[usize]| {
        let ws: Vec<Rational> = labeling.iter().map(|&v| weight_of(v).clone()).collect();
        labeling_ok(&ws, divisors)
    };
    let is_permutation = |l: &Vec<usize>| l.iter().copied().sorted().eq(edge.iter().copied());
    if let Some(l) = stored.filter(|l| is_permutation(l)) {
        if works(l) {
            return Some(l.clone());
        }
    }
    let sorted: Vec<usize> = edge.iter().copied().sorted_by(|&u, &v| weight_of(u).cmp(weight_of(v))).collect();
    if works(&sorted) {
        return Some(sorted);
    }
    edge.iter().copied().permutations(edge.len()).find(|l| works(l))
}

/// Checks conditions 1 to 3 and reports `w(h)` and `h_min`.
pub fn validate(l: &Hypergraph, profile: &PartiteProfile, h: &FractionalTiling) -> Result<Validation> {
    if profile.k() != l.k() {
        return domain(format!("profile has {} parts but L is {}-uniform", profile.k(), l.k()));
    }
    let mut violations = Vec::new();
    let mut vertex_sums = vec![Rational::zero(); l.n()];
    let mut weighted_edges = BTreeSet::new();
    for (&(v, e), w) in &h.weights {
        let edge = l.edges().get(e).ok_or_else(|| Error::Structural(format!("edge {e} does not exist")))?;
        if !edge.contains(&v) {
            if w.is_zero() {
                continue;
            }
            return Err(Error::Structural(format!("weight on ({v}, {e}) but vertex {v} is not in edge {e}")));
        }
        if w.is_negative() {
            violations.push(format!("negative weight {} on ({v}, {e})", rational::to_string(w)));
        }
        vertex_sums[v] += w;
        if !w.is_zero() {
            weighted_edges.insert(e);
        }
    }
    for (v, s) in vertex_sums.iter().enumerate() {
        if *s > Rational::one() {
            violations.push(format!("vertex {v} carries {} > 1", rational::to_string(s)));
        }
    }
    let mut labelings = BTreeMap::new();
    for &e in &weighted_edges {
        let edge = &l.edges()[e];
        let weights = h.edge_weights(e, edge);
        match find_labeling(edge, &weights, profile.sizes(), h.labelings.get(&e)) {
            Some(lab) => {
                labelings.insert(e, lab);
            }
            None => violations.push(format!("edge {e} has no labeling satisfying the ordering condition")),
        }
    }
    let h_min = h.weights.values().filter(|w| !w.is_zero()).min().cloned();
    Ok(Validation { valid: violations.is_empty(), weight: h.weight(), h_min, vertex_sums, labelings, violations })
}

fn shape(profile: &PartiteProfile) -> Result<(i64, i64)> {
    profile
        .small_large()
        .map(|(a, b)| (a as i64, b as i64))
        .ok_or_else(|| Error::Shape(format!("{profile} is not of the form (a, b, ..., b) with a < b")))
}

fn pow(base: i64, exp: i64) -> Rational {
    Rational::from_integer(base.into()).pow(exp as i32)
}

/// Weight vector of an edge of `K(a, b, ..., b)`: `1/b^(k-1)` on the small
/// class and `1/(a b^(k-2))` on the others.
fn standard_vector(a: i64, b: i64, k: i64) -> (Rational, Rational) {
    (pow(b, 1 - k), pow(b, 2 - k) / rational::int(a))
}

fn set_edge(h: &mut FractionalTiling, idx: usize, labeling: &[usize], weights: &[Rational]) {
    for (&v, w) in labeling.iter().zip(weights) {
        h.weights.insert((v, idx), w.clone());
    }
    h.labelings.insert(idx, labeling.to_vec());
}

/// The balanced weighting of `K(a, b, ..., b)`: weight `m`, every vertex
/// sum exactly 1.
pub fn standard_weights(profile: &PartiteProfile) -> Result<(Hypergraph, FractionalTiling)> {
    let (a, b) = shape(profile)?;
    let k = profile.k() as i64;
    let l = complete_partite(profile);
    let (small, large) = standard_vector(a, b, k);
    let mut vector = vec![small];
    vector.extend(std::iter::repeat(large).take(profile.k() - 1));
    let mut h = FractionalTiling::default();
    for (i, e) in l.edges().iter().enumerate() {
        // Edges of a complete partite graph list their parts in order.
        set_edge(&mut h, i, e, &vector);
    }
    Ok((l, h))
}

/// `m - m/(a b^(k-1)) + m/(a^2 b^(k-2))`.
pub fn extended_weight_formula(profile: &PartiteProfile) -> Result<Rational> {
    let (a, b) = shape(profile)?;
    let (k, m) = (profile.k() as i64, rational::int(profile.m() as i64));
    Ok(&m - &m / (rational::int(a) * pow(b, k - 1)) + &m / (rational::int(a * a) * pow(b, k - 2)))
}

/// A weighting of the extension of `K(a, b, ..., b)` by one edge through a
/// large-class vertex `v`: the least original edge through `v` is zeroed,
/// the new edge carries `1/(a b^(k-2))` on `v` and `1/(a^2 b^(k-3))` on each
/// new vertex, and every other edge keeps its standard weights.
pub fn extended_weights(profile: &PartiteProfile) -> Result<(Hypergraph, FractionalTiling)> {
    let (a, b) = shape(profile)?;
    let k = profile.k() as i64;
    if k < 3 {
        return Err(Error::Shape("the extended weighting needs k >= 3".into()));
    }
    let (_, standard) = standard_weights(profile)?;
    let l = khat_extension(profile)?;
    let v = khat_attachment(profile);
    let base = complete_partite(profile);
    let zeroed = base.edges().iter().find(|e| e.contains(&v)).expect("v lies in an edge");
    let mut h = FractionalTiling::default();
    for (i, e) in l.edges().iter().enumerate() {
        if e == zeroed {
            continue;
        }
        if let Some(j) = base.edge_index(e) {
            let labeling = &standard.labelings[&j];
            let weights: Vec<Rational> = labeling.iter().map(|&u| standard.weights[&(u, j)].clone()).collect();
            set_edge(&mut h, i, labeling, &weights);
        } else {
            let mut weights = vec![pow(b, 2 - k) / rational::int(a)];
            weights.extend(std::iter::repeat(pow(b, 3 - k) / rational::int(a * a)).take(profile.k() - 1));
            set_edge(&mut h, i, e, &weights);
        }
    }
    Ok((l, h))
}

/// Largest accepted instance for [`maximize_small`].
pub const MAX_EDGES: usize = 12;
pub const MAX_UNIFORMITY: usize = 5;

/// Distinct ways of assigning the profile's divisors to an edge's vertices,
/// each as its lexicographically least labeling.
fn labeling_options(edge: &[usize], divisors: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for labeling in edge.iter().copied().permutations(edge.len()) {
        let key: Vec<(usize, usize)> = labeling.iter().copied().zip(divisors.iter().copied()).sorted().collect();
        if seen.insert(key) {
            out.push(labeling);
        }
    }
    out
}

struct Program<'a> {
    l: &'a Hypergraph,
    divisors: &'a [usize],
    /// Variable index of each incidence `(vertex, edge)`.
    vars: Vec<(usize, usize)>,
    options: Vec<Vec<Vec<usize>>>,
}

impl Program<'_> {
    fn var(&self, v: usize, e: usize) -> usize {
        self.vars.binary_search(&(v, e)).expect("incidence")
    }

    /// LP with condition 2 everywhere and condition 3 on the chosen edges.
    fn solve(&self, chosen: &[usize], budget: &mut Budget) -> Result<simplex::LpSolution> {
        let cols = self.vars.len();
        budget.charge((cols * cols) as u64)?;
        let zero_row = || vec![Rational::zero(); cols];
        let mut a = Vec::new();
        let mut b = Vec::new();
        for v in 0..self.l.n() {
            let mut row = zero_row();
            let mut any = false;
            for (j, &(u, _)) in self.vars.iter().enumerate() {
                if u == v {
                    row[j] = Rational::one();
                    any = true;
                }
            }
            if any {
                a.push(row);
                b.push(Rational::one());
            }
        }
        for (e, &opt) in chosen.iter().enumerate() {
            let labeling = &self.options[e][opt];
            for i in 0..labeling.len() - 1 {
                let (x, y) = (self.var(labeling[i], e), self.var(labeling[i + 1], e));
                let mut row = zero_row();
                row[x] = rational::int(1);
                row[y] = rational::int(-1);
                a.push(row);
                b.push(Rational::zero());
                let mut row = zero_row();
                row[y] = rational::int(self.divisors[i] as i64);
                row[x] = rational::int(-(self.divisors[i + 1] as i64));
                // a_i h(v_{i+1}) <= a_{i+1} h(v_i)
                a.push(row);
                b.push(Rational::zero());
            }
        }
        simplex::maximize(&vec![Rational::one(); cols], &a, &b)
    }

    fn search(
        &self,
        chosen: &mut Vec<usize>,
        best: &mut Option<(Rational, Vec<usize>, simplex::LpSolution)>,
        budget: &mut Budget,
    ) -> Result<()> {
        budget.tick()?;
        let relaxed = self.solve(chosen, budget)?;
        if best.as_ref().is_some_and(|(value, _, _)| relaxed.value <= *value) {
            return Ok(());
        }
        if chosen.len() == self.options.len() {
            *best = Some((relaxed.value.clone(), chosen.clone(), relaxed));
            return Ok(());
        }
        for opt in 0..self.options[chosen.len()].len() {
            chosen.push(opt);
            self.search(chosen, best, budget)?;
            chosen.pop();
        }
        Ok(())
    }
}

/// A maximum-weight valid weighting of `L`, by branch and bound over the
/// labeling of each edge with an exact linear program at every node. Among
/// optimal labeling assignments the lexicographically least is returned.
pub fn maximize_small(
    l: &Hypergraph,
    profile: &PartiteProfile,
    budget: &mut Budget,
) -> Result<(FractionalTiling, Rational)> {
    if profile.k() != l.k() {
        return domain(format!("profile has {} parts but L is {}-uniform", profile.k(), l.k()));
    }
    if l.edge_count() > MAX_EDGES || l.k() > MAX_UNIFORMITY {
        return domain(format!("need at most {MAX_EDGES} edges and k <= {MAX_UNIFORMITY}"));
    }
    let divisors = profile.sizes();
    let vars: Vec<(usize, usize)> = l
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(e, edge)| edge.iter().map(move |&v| (v, e)))
        .sorted()
        .collect();
    let options = l.edges().iter().map(|e| labeling_options(e, divisors)).collect();
    let program = Program { l, divisors, vars, options };
    let mut best = None;
    program.search(&mut Vec::new(), &mut best, budget)?;
    let (value, chosen, solution) = best.expect("the zero weighting is always feasible");
    let mut h = FractionalTiling::default();
    for (j, &(v, e)) in program.vars.iter().enumerate() {
        if !solution.x[j].is_zero() {
            h.weights.insert((v, e), solution.x[j].clone());
            h.labelings.insert(e, program.options[e][chosen[e]].clone());
        }
    }
    Ok((h, value))
}
