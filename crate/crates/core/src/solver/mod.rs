//! Exact ground truth on small instances: copies of a pattern, perfect and
//! maximum tilings, Turán numbers, Steiner systems and extremality deficits.
//!
//! Copies are identified by their vertex set. A tiling is a family of
//! pairwise disjoint copy sets, found by a deterministic depth-first exact
//! cover that always branches on the smallest uncovered vertex and tries the
//! copy sets containing it in lexicographic order, so the first perfect
//! tiling found is the lexicographically least one.

pub mod embed;
mod turan;

use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;

use itertools::Itertools;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{domain, Result};
use crate::hypergraph::{binomial, Hypergraph};
use crate::rational::{self, Rational};

use embed::{for_each_embedding, mask_of, HostIndex, Mask, PatternPlan};

pub use turan::{coex_brute, turan_brute, TuranMode, TuranResult};

/// Largest pattern accepted by the copy search.
pub const MAX_PATTERN_VERTICES: usize = 12;

/// A vertex set spanning a copy of the pattern, with the lexicographically
/// least embedding onto it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CopySet {
    pub vertices: Vec<usize>,
    /// Pattern vertex to host vertex.
    pub embedding: BTreeMap<usize, usize>,
}

impl CopySet {
    fn new(image: &[usize]) -> CopySet {
        let mut vertices = image.to_vec();
        vertices.sort_unstable();
        CopySet { vertices, embedding: image.iter().copied().enumerate().collect() }
    }

    /// Checks that the embedding is a bijection onto `vertices` carrying
    /// every pattern edge to a host edge.
    pub fn verify(&self, host: &Hypergraph, pattern: &Hypergraph) -> bool {
        if self.embedding.len() != pattern.n() || self.vertices.len() != pattern.n() {
            return false;
        }
        let mut image: Vec<usize> = self.embedding.values().copied().collect();
        image.sort_unstable();
        if image != self.vertices || (0..pattern.n()).any(|v| !self.embedding.contains_key(&v)) {
            return false;
        }
        pattern.edges().iter().all(|e| {
            let mapped: Vec<usize> = e.iter().map(|v| self.embedding[v]).collect();
            host.contains_edge(&mapped)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingCertificate {
    pub copies: Vec<CopySet>,
    pub covered: usize,
}

impl TilingCertificate {
    /// Disjointness, witness embeddings and the covered count.
    pub fn verify(&self, host: &Hypergraph, pattern: &Hypergraph) -> bool {
        let mut seen = vec![false; host.n()];
        for c in &self.copies {
            if !c.verify(host, pattern) {
                return false;
            }
            for &v in &c.vertices {
                if v >= host.n() || std::mem::replace(&mut seen[v], true) {
                    return false;
                }
            }
        }
        self.covered == self.copies.len() * pattern.n()
    }

    pub fn is_perfect(&self, host: &Hypergraph) -> bool {
        self.covered == host.n()
    }
}

fn check_copy_search(h: &Hypergraph, f: &Hypergraph, budget: &Budget) -> Result<()> {
    if h.k() != f.k() {
        return domain(format!("host is {}-uniform but pattern is {}-uniform", h.k(), f.k()));
    }
    if f.n() > MAX_PATTERN_VERTICES {
        return domain(format!("pattern has {} vertices, limit is {MAX_PATTERN_VERTICES}", f.n()));
    }
    budget.require(binomial(h.n() as u64, f.n() as u64).unwrap_or(u128::MAX))
}

/// Copy sets keyed by vertex mask, each with its first (least) embedding and
/// the number of twin-sorted embeddings onto it.
fn collect_copies(h: &Hypergraph, f: &Hypergraph, budget: &mut Budget) -> Result<(BTreeMap<Vec<usize>, (CopySet, u128)>, u128)> {
    check_copy_search(h, f, budget)?;
    let host = HostIndex::new(h)?;
    let plan = PatternPlan::new(f);
    let mut by_mask: HashMap<Mask, (CopySet, u128)> = HashMap::new();
    let _ = for_each_embedding(&host, &plan, budget, &mut |image| {
        by_mask
            .entry(mask_of(image))
            .and_modify(|(_, count)| *count += 1)
            .or_insert_with(|| (CopySet::new(image), 1));
        ControlFlow::Continue(())
    })?;
    let sorted = by_mask.into_values().map(|(c, n)| (c.vertices.clone(), (c, n))).collect();
    Ok((sorted, plan.twin_multiplier()))
}

/// Every vertex set of size |V(F)| on which the host contains a spanning
/// copy of `f`, in lexicographic order.
pub fn enumerate_copies(h: &Hypergraph, f: &Hypergraph, budget: &mut Budget) -> Result<Vec<CopySet>> {
    let (copies, _) = collect_copies(h, f, budget)?;
    Ok(copies.into_values().map(|(c, _)| c).collect())
}

/// Copy sets together with the number of spanning embeddings of `f` onto each.
pub fn enumerate_copies_counted(h: &Hypergraph, f: &Hypergraph, budget: &mut Budget) -> Result<Vec<(CopySet, u128)>> {
    let (copies, mult) = collect_copies(h, f, budget)?;
    Ok(copies.into_values().map(|(c, n)| (c, n * mult)).collect())
}

/// `true` iff the host contains no copy of `f`. Stops at the first copy.
pub fn is_subgraph_free(h: &Hypergraph, f: &Hypergraph, budget: &mut Budget) -> Result<bool> {
    if h.k() != f.k() {
        return domain(format!("host is {}-uniform but pattern is {}-uniform", h.k(), f.k()));
    }
    let host = HostIndex::new(h)?;
    let plan = PatternPlan::new(f);
    let flow = for_each_embedding(&host, &plan, budget, &mut |_| ControlFlow::Break(()))?;
    Ok(flow.is_continue())
}

struct CoverProblem {
    masks: Vec<Mask>,
    /// For each vertex, the copies containing it, in lexicographic order.
    containing: Vec<Vec<usize>>,
    n: usize,
}

impl CoverProblem {
    fn new(h: &Hypergraph, copies: &[CopySet]) -> CoverProblem {
        let masks: Vec<Mask> = copies.iter().map(|c| mask_of(&c.vertices)).collect();
        let mut containing = vec![Vec::new(); h.n()];
        for (i, c) in copies.iter().enumerate() {
            for &v in &c.vertices {
                containing[v].push(i);
            }
        }
        CoverProblem { masks, containing, n: h.n() }
    }

    fn exact_cover(&self, covered: Mask, chosen: &mut Vec<usize>, budget: &mut Budget) -> Result<bool> {
        budget.tick()?;
        let Some(v) = (0..self.n).find(|&v| covered >> v & 1 == 0) else {
            return Ok(true);
        };
        // Every uncovered vertex still needs an available copy.
        let stuck = (v..self.n).any(|u| {
            covered >> u & 1 == 0 && self.containing[u].iter().all(|&c| self.masks[c] & covered != 0)
        });
        if stuck {
            return Ok(false);
        }
        for &c in &self.containing[v] {
            if self.masks[c] & covered != 0 {
                continue;
            }
            chosen.push(c);
            if self.exact_cover(covered | self.masks[c], chosen, budget)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }

    /// `blocked` holds covered vertices and vertices given up as uncovered.
    fn max_packing(
        &self,
        blocked: Mask,
        m: usize,
        chosen: &mut Vec<usize>,
        best: &mut Vec<usize>,
        budget: &mut Budget,
    ) -> Result<()> {
        budget.tick()?;
        let free = (0..self.n).filter(|&u| blocked >> u & 1 == 0).count();
        if chosen.len() + free / m <= best.len() {
            return Ok(());
        }
        let next = (0..self.n).find(|&u| {
            blocked >> u & 1 == 0 && self.containing[u].iter().any(|&c| self.masks[c] & blocked == 0)
        });
        let Some(v) = next else {
            if chosen.len() > best.len() {
                best.clone_from(chosen);
            }
            return Ok(());
        };
        for &c in &self.containing[v] {
            if self.masks[c] & blocked != 0 {
                continue;
            }
            chosen.push(c);
            self.max_packing(blocked | self.masks[c], m, chosen, best, budget)?;
            chosen.pop();
        }
        self.max_packing(blocked | 1 << v, m, chosen, best, budget)
    }
}

fn certificate(copies: &[CopySet], chosen: &[usize], m: usize) -> TilingCertificate {
    let mut picked: Vec<CopySet> = chosen.iter().map(|&i| copies[i].clone()).collect();
    picked.sort();
    TilingCertificate { covered: picked.len() * m, copies: picked }
}

/// A perfect `f`-tiling of `h` if one exists: the lexicographically least
/// one in copy-set order.
pub fn has_perfect_tiling(h: &Hypergraph, f: &Hypergraph, budget: &mut Budget) -> Result<Option<TilingCertificate>> {
    if f.n() == 0 || h.n() % f.n() != 0 {
        return domain(format!("|V(F)| = {} does not divide n = {}", f.n(), h.n()));
    }
    let copies = enumerate_copies(h, f, budget)?;
    let problem = CoverProblem::new(h, &copies);
    let mut chosen = Vec::new();
    Ok(problem
        .exact_cover(0, &mut chosen, budget)?
        .then(|| certificate(&copies, &chosen, f.n())))
}

/// A maximum family of vertex-disjoint copies of `f`.
pub fn max_tiling(h: &Hypergraph, f: &Hypergraph, budget: &mut Budget) -> Result<TilingCertificate> {
    if f.n() == 0 {
        return domain("pattern has no vertices");
    }
    let copies = enumerate_copies(h, f, budget)?;
    let problem = CoverProblem::new(h, &copies);
    let mut best = Vec::new();
    problem.max_packing(0, f.n(), &mut Vec::new(), &mut best, budget)?;
    Ok(certificate(&copies, &best, f.n()))
}

fn subset_degrees(h: &Hypergraph, t: usize) -> HashMap<Vec<usize>, usize> {
    let mut counts = HashMap::new();
    for e in h.edges() {
        for s in e.iter().copied().combinations(t) {
            *counts.entry(s).or_insert(0) += 1;
        }
    }
    counts
}

/// `true` iff every `t`-subset of the vertices lies in exactly one edge.
pub fn is_steiner_system(h: &Hypergraph, t: usize) -> Result<bool> {
    if t == 0 || t >= h.k() {
        return domain(format!("t must lie in 1..{}, got {t}", h.k()));
    }
    let counts = subset_degrees(h, t);
    let total = binomial(h.n() as u64, t as u64).unwrap_or(u128::MAX);
    Ok(counts.len() as u128 == total && counts.values().all(|&c| c == 1))
}

/// Largest host for the exhaustive minimisation in [`extremal_deficit`].
pub const MAX_EXTREMAL_VERTICES: usize = 16;

/// `e(B) / binom(|B|, k)` for `|B| = floor((1 - sigma) n)`: for the given set,
/// or minimised over every set of that size. The host is ξ-extremal iff the
/// result is at most ξ. When `|B| < k` the ratio is taken to be 0.
pub fn extremal_deficit(
    h: &Hypergraph,
    sigma: &Rational,
    set: Option<&[usize]>,
    budget: &mut Budget,
) -> Result<Rational> {
    let one = rational::int(1);
    if *sigma < Rational::zero() || *sigma > one {
        return domain("sigma must lie in [0, 1]");
    }
    let size = rational::floor(&((&one - sigma) * rational::int(h.n() as i64)));
    let size = usize::try_from(size).map_err(|_| crate::Error::Domain("set size out of range".into()))?;
    let denom = binomial(size as u64, h.k() as u64).expect("small binomial");
    let ratio = |edges: usize| {
        if denom == 0 {
            Rational::zero()
        } else {
            Rational::new(edges.into(), denom.into())
        }
    };
    match set {
        Some(b) => {
            let mut sorted = b.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != b.len() || sorted.iter().any(|&v| v >= h.n()) {
                return domain("set must consist of distinct vertices of the host");
            }
            if b.len() != size {
                return domain(format!("set has {} vertices, expected floor((1 - sigma) n) = {size}", b.len()));
            }
            Ok(ratio(h.edges_within(b)))
        }
        None => {
            if h.n() > MAX_EXTREMAL_VERTICES {
                return domain(format!("exhaustive minimisation needs n <= {MAX_EXTREMAL_VERTICES}"));
            }
            let mut best = usize::MAX;
            for b in (0..h.n()).combinations(size) {
                budget.tick()?;
                best = best.min(h.edges_within(&b));
            }
            Ok(ratio(best))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{complete_partite, fano_plane, loose_cycle, PartiteProfile};
    use proptest::prelude::*;

    fn kp(sizes: &[usize]) -> Hypergraph {
        complete_partite(&PartiteProfile::new(sizes.to_vec()).unwrap())
    }

    /// All 3-sets of `0..n` meeting `0..a`.
    fn barrier(n: usize, a: usize) -> Hypergraph {
        let edges = (0..n).combinations(3).filter(|e| e[0] < a);
        Hypergraph::from_edges(3, n, edges).unwrap()
    }

    fn b() -> Budget {
        Budget::default()
    }

    /// Copy sets by checking every m-set and every arrangement on it.
    fn brute_copy_sets(h: &Hypergraph, f: &Hypergraph) -> Vec<Vec<usize>> {
        (0..h.n())
            .combinations(f.n())
            .filter(|set| {
                set.iter().copied().permutations(f.n()).any(|img| {
                    f.edges().iter().all(|e| h.contains_edge(&e.iter().map(|&x| img[x]).sorted().collect::<Vec<_>>()))
                })
            })
            .collect()
    }

    #[test]
    fn copy_examples() {
        let k112 = kp(&[1, 1, 2]);
        let k4 = Hypergraph::complete(3, 4).unwrap();
        assert_eq!(enumerate_copies(&k4, &k112, &mut b()).unwrap().len(), 1);
        let c2 = loose_cycle(3, 2).unwrap();
        assert_eq!(enumerate_copies(&c2, &k112, &mut b()).unwrap().len(), 1);
        let copies = enumerate_copies(&k112, &k112, &mut b()).unwrap();
        assert_eq!(copies.len(), 1);
        assert_eq!(copies[0].vertices, vec![0, 1, 2, 3]);
        assert!(copies[0].verify(&k112, &k112));
    }

    #[test]
    fn copies_match_brute_force() {
        let hosts = [barrier(7, 2), kp(&[2, 2, 3]), loose_cycle(3, 4).unwrap(), fano_plane()];
        for h in &hosts {
            for f in [kp(&[1, 1, 2]), kp(&[1, 2, 2]), loose_cycle(3, 2).unwrap()] {
                let got: Vec<Vec<usize>> = enumerate_copies(h, &f, &mut b()).unwrap().into_iter().map(|c| c.vertices).collect();
                assert_eq!(got, brute_copy_sets(h, &f));
            }
        }
    }

    #[test]
    fn embedding_counts() {
        // K4^3 holds 4! labelled copies of K(1,1,2) on its only copy set.
        let counted = enumerate_copies_counted(&Hypergraph::complete(3, 4).unwrap(), &kp(&[1, 1, 2]), &mut b()).unwrap();
        assert_eq!(counted[0].1, 24);
    }

    #[test]
    fn freeness_examples() {
        let k112 = kp(&[1, 1, 2]);
        assert!(!is_subgraph_free(&Hypergraph::complete(3, 4).unwrap(), &k112, &mut b()).unwrap());
        assert!(is_subgraph_free(&Hypergraph::new(3, 9).unwrap(), &k112, &mut b()).unwrap());
        assert!(is_subgraph_free(&fano_plane(), &k112, &mut b()).unwrap());
    }

    #[test]
    fn tiling_examples() {
        let k112 = kp(&[1, 1, 2]);
        let host = kp(&[2, 3, 3]);
        let cert = has_perfect_tiling(&host, &k112, &mut b()).unwrap().unwrap();
        assert_eq!(cert.copies.len(), 2);
        assert!(cert.verify(&host, &k112) && cert.is_perfect(&host));

        let trivial = has_perfect_tiling(&k112, &k112, &mut b()).unwrap().unwrap();
        assert_eq!(trivial.copies.len(), 1);

        let h0 = barrier(8, 1);
        assert!(has_perfect_tiling(&h0, &k112, &mut b()).unwrap().is_none());
        assert_eq!(max_tiling(&h0, &k112, &mut b()).unwrap().copies.len(), 1);
        assert!(has_perfect_tiling(&h0, &kp(&[1, 2, 2]), &mut b()).is_err());
    }

    #[test]
    fn max_tiling_examples() {
        let f = kp(&[1, 1, 2]);
        let two = f.disjoint_union(&f).unwrap().with_isolated(1);
        let cert = max_tiling(&two, &f, &mut b()).unwrap();
        assert_eq!((cert.copies.len(), cert.covered), (2, 8));
        assert!(cert.verify(&two, &f));
        assert_eq!(max_tiling(&Hypergraph::new(3, 8).unwrap(), &f, &mut b()).unwrap().copies.len(), 0);
    }

    #[test]
    fn certificate_is_lexicographically_least() {
        // In K_6^3 every split into two triples tiles; the least is {0,1,2},{3,4,5}.
        let k6 = Hypergraph::complete(3, 6).unwrap();
        let edge = Hypergraph::from_edges(3, 3, [[0, 1, 2]]).unwrap();
        let cert = has_perfect_tiling(&k6, &edge, &mut b()).unwrap().unwrap();
        let sets: Vec<_> = cert.copies.iter().map(|c| c.vertices.clone()).collect();
        assert_eq!(sets, vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn tight_budget_is_a_resource_error() {
        let host = kp(&[2, 3, 3]);
        let r = has_perfect_tiling(&host, &kp(&[1, 1, 2]), &mut Budget::new(5));
        assert!(matches!(r, Err(crate::Error::Resource { .. })));
    }

    #[test]
    fn steiner_examples() {
        assert!(is_steiner_system(&fano_plane(), 2).unwrap());
        assert!(is_steiner_system(&Hypergraph::complete(3, 3).unwrap(), 2).unwrap());
        assert!(!is_steiner_system(&loose_cycle(3, 2).unwrap(), 2).unwrap());
        assert!(is_steiner_system(&fano_plane(), 3).is_err());
    }

    #[test]
    fn deficit_examples() {
        let quarter = rational::ratio(1, 4);
        let h0 = barrier(8, 1);
        let b_side: Vec<usize> = (1..7).collect();
        assert_eq!(extremal_deficit(&h0, &quarter, Some(&b_side), &mut b()).unwrap(), rational::int(0));
        assert_eq!(extremal_deficit(&h0, &quarter, None, &mut b()).unwrap(), rational::int(0));
        let k8 = Hypergraph::complete(3, 8).unwrap();
        assert_eq!(extremal_deficit(&k8, &quarter, None, &mut b()).unwrap(), rational::int(1));
        assert_eq!(extremal_deficit(&k8, &quarter, Some(&b_side), &mut b()).unwrap(), rational::int(1));
        assert_eq!(extremal_deficit(&Hypergraph::new(3, 8).unwrap(), &quarter, None, &mut b()).unwrap(), rational::int(0));
        assert!(extremal_deficit(&h0, &quarter, Some(&[1, 2]), &mut b()).is_err());
        assert!(extremal_deficit(&h0, &rational::int(2), None, &mut b()).is_err());
        // |B| = 2 < k: ratio 0 by convention.
        assert_eq!(extremal_deficit(&k8, &rational::ratio(3, 4), None, &mut b()).unwrap(), rational::int(0));
    }

    #[test]
    fn turan_inequality_holds() {
        let f = kp(&[1, 1, 2]);
        for n in 3..=6 {
            let ex = turan_brute(n, &f, TuranMode::Auto, &mut Budget::new(100_000_000)).unwrap().value;
            let coex = coex_brute(n, &f, TuranMode::Auto, &mut Budget::new(100_000_000)).unwrap().value;
            let pairs = binomial(n as u64, 2).unwrap() as u64;
            assert!(3 * ex <= pairs, "ex({n}) = {ex}");
            assert!(coex * pairs <= 3 * ex, "coex({n}) = {coex}, ex = {ex}");
        }
    }

    fn random_host(n: usize, bits: u64) -> Hypergraph {
        let edges = (0..n).combinations(3).enumerate().filter(|(i, _)| bits >> (i % 64) & 1 == 1).map(|(_, e)| e);
        Hypergraph::from_edges(3, n, edges).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn perfect_iff_max_covers_everything(bits in any::<u64>(), dense in 0u32..3) {
            let bits = (0..dense).fold(bits, |acc, i| acc | bits.rotate_left(7 * (i + 1)));
            let h = random_host(8, bits);
            let f = kp(&[1, 1, 2]);
            let perfect = has_perfect_tiling(&h, &f, &mut b()).unwrap();
            let max = max_tiling(&h, &f, &mut b()).unwrap();
            prop_assert!(max.verify(&h, &f));
            prop_assert_eq!(perfect.is_some(), max.is_perfect(&h));
            if let Some(cert) = perfect {
                prop_assert!(cert.verify(&h, &f));
            }
        }

        #[test]
        fn answers_are_relabelling_invariant(bits in any::<u64>(), perm in Just((0..8usize).collect::<Vec<_>>()).prop_shuffle()) {
            let h = random_host(8, bits | bits.rotate_left(13));
            let g = h.relabel(&perm).unwrap();
            let f = kp(&[1, 1, 2]);
            let copies = |x: &Hypergraph| enumerate_copies(x, &f, &mut b()).unwrap().into_iter().map(|c| c.vertices).collect::<Vec<_>>();
            let mut mapped: Vec<Vec<usize>> = copies(&h).into_iter().map(|s| s.iter().map(|&v| perm[v]).sorted().collect()).collect();
            mapped.sort();
            prop_assert_eq!(mapped, copies(&g));
            prop_assert_eq!(
                has_perfect_tiling(&h, &f, &mut b()).unwrap().is_some(),
                has_perfect_tiling(&g, &f, &mut b()).unwrap().is_some()
            );
            prop_assert_eq!(max_tiling(&h, &f, &mut b()).unwrap().covered, max_tiling(&g, &f, &mut b()).unwrap().covered);
            prop_assert_eq!(is_subgraph_free(&h, &f, &mut b()).unwrap(), is_subgraph_free(&g, &f, &mut b()).unwrap());
        }
    }
}
