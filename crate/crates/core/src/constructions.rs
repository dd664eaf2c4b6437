//! Lower-bound hypergraphs for the tiling thresholds, each with a
//! certificate listing what it claims.
//!
//! Certificates are claims, not proofs: codegrees can be checked with
//! [`ConstructionCertificate::check_codegree`], and the freeness and
//! no-tiling claims with the exact solver.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{domain, Result};
use crate::hypergraph::{binomial, Hypergraph, PartiteProfile};
use crate::invariants::vertex_cover_number;

/// Generated hypergraphs are capped at this many candidate k-sets.
pub const MAX_CANDIDATE_EDGES: u128 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionCertificate {
    pub construction: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<Partition>,
    pub claimed_min_codegree: u64,
    /// `true` when the claim is only `min codegree >= claimed_min_codegree`.
    pub codegree_is_lower_bound: bool,
    /// Profiles of complete k-partite graphs the host claims to avoid.
    pub freeness_claims: Vec<PartiteProfile>,
    /// `true` when the host claims to have no perfect tiling by the pattern
    /// it was built from.
    pub no_perfect_tiling: bool,
    pub notes: Vec<String>,
}

impl ConstructionCertificate {
    fn new(construction: &str, claimed_min_codegree: u64) -> Self {
        ConstructionCertificate {
            construction: construction.to_string(),
            partition: None,
            claimed_min_codegree,
            codegree_is_lower_bound: false,
            freeness_claims: Vec::new(),
            no_perfect_tiling: false,
            notes: Vec::new(),
        }
    }

    /// Compares the claimed codegree with the actual minimum codegree.
    pub fn check_codegree(&self, h: &Hypergraph) -> Result<bool> {
        let actual = h.min_codegree()? as u64;
        Ok(if self.codegree_is_lower_bound {
            actual >= self.claimed_min_codegree
        } else {
            actual == self.claimed_min_codegree
        })
    }

    /// `true` when the stored partition splits `0..h.n()`.
    pub fn check_partition(&self, h: &Hypergraph) -> bool {
        self.partition.as_ref().map_or(true, |p| {
            let mut all: Vec<usize> = p.a.iter().chain(&p.b).copied().collect();
            all.sort_unstable();
            all == (0..h.n()).collect::<Vec<_>>()
        })
    }
}

fn check_size(n: usize, k: usize) -> Result<()> {
    match binomial(n as u64, k as u64) {
        Some(c) if c <= MAX_CANDIDATE_EDGES => Ok(()),
        _ => domain(format!("binom({n}, {k}) candidate edges exceed {MAX_CANDIDATE_EDGES}")),
    }
}

/// All k-sets of `0..n` meeting `0..a`, plus the given extra edges.
fn meeting_prefix(k: usize, n: usize, a: usize, extra: impl IntoIterator<Item = Vec<usize>>) -> Result<Hypergraph> {
    check_size(n, k)?;
    let mut h = Hypergraph::from_edges(k, n, (0..n).combinations(k).filter(|e| e[0] < a))?;
    for e in extra {
        h.add_edge(&e)?;
    }
    Ok(h)
}

fn split(n: usize, a: usize) -> Partition {
    Partition { a: (0..a).collect(), b: (a..n).collect() }
}

/// Host on `n` vertices whose edges are all k-sets meeting a set `A` of
/// `tau(F) n / m - 1` vertices; every copy of `F` needs `tau(F)` vertices of
/// `A`, so no perfect tiling exists.
pub fn space_barrier(f: &Hypergraph, n: usize, budget: &mut Budget) -> Result<(Hypergraph, ConstructionCertificate)> {
    let m = f.n();
    if m == 0 || n % m != 0 {
        return domain(format!("|V(F)| = {m} does not divide n = {n}"));
    }
    let tau = vertex_cover_number(f, budget)?;
    let scaled = tau * n / m;
    if scaled == 0 {
        return domain("tau(F) n / m must be at least 1");
    }
    let a = scaled - 1;
    let h = meeting_prefix(f.k(), n, a, [])?;
    let mut cert = ConstructionCertificate::new("space_barrier", a as u64);
    cert.partition = Some(split(n, a));
    cert.no_perfect_tiling = true;
    cert.notes.push(format!("tau(F) = {tau}, m = {m}, |A| = {a}"));
    Ok((h, cert))
}

/// Profiles `(b1 <= ... <= bk)` with `1 <= bi <= ai` summing to `m - a1 + 1`.
pub fn freeness_obligations(profile: &PartiteProfile) -> Vec<PartiteProfile> {
    let a = profile.sizes();
    let target = profile.m() - profile.smallest() + 1;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(a.len());
    obligations(a, target, 1, &mut current, &mut out);
    out
}

fn obligations(a: &[usize], left: usize, min: usize, current: &mut Vec<usize>, out: &mut Vec<PartiteProfile>) {
    let i = current.len();
    if i == a.len() {
        if left == 0 {
            out.push(PartiteProfile::new(current.clone()).expect("sorted positive sizes"));
        }
        return;
    }
    for b in min..=a[i].min(left) {
        current.push(b);
        obligations(a, left - b, b, current, out);
        current.pop();
    }
}

/// The space barrier with `|A| = a1 n / m - 1` and the given `G` placed on
/// `B`. `G` must avoid every profile in [`freeness_obligations`]; that is
/// recorded in the certificate, not checked here.
pub fn strengthened_barrier(
    profile: &PartiteProfile,
    n: usize,
    g: &Hypergraph,
) -> Result<(Hypergraph, ConstructionCertificate)> {
    let (m, k) = (profile.m(), profile.k());
    if n % m != 0 {
        return domain(format!("m = {m} does not divide n = {n}"));
    }
    let scaled = profile.smallest() * n / m;
    if scaled < 2 {
        return domain(format!("|A| = a1 n / m - 1 = {} must be at least 1", scaled as i64 - 1));
    }
    let a = scaled - 1;
    if g.k() != k {
        return domain(format!("G is {}-uniform, expected {k}", g.k()));
    }
    if g.n() != n - a {
        return domain(format!("G has {} vertices, expected n - |A| = {}", g.n(), n - a));
    }
    let shifted = g.edges().iter().map(|e| e.iter().map(|&v| v + a).collect::<Vec<_>>());
    let h = meeting_prefix(k, n, a, shifted)?;
    let delta_g = g.min_codegree()? as u64;
    let mut cert = ConstructionCertificate::new("strengthened_barrier", a as u64 + delta_g);
    cert.partition = Some(split(n, a));
    cert.freeness_claims = freeness_obligations(profile);
    cert.no_perfect_tiling = true;
    cert.notes.push(format!("|A| = {a}, min codegree of G = {delta_g}; freeness of G is an obligation"));
    Ok((h, cert))
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

fn primitive_root(q: u64) -> u64 {
    let order = q - 1;
    let primes: Vec<u64> = (2..=order).filter(|&p| order % p == 0 && is_prime(p)).collect();
    (1..q)
        .find(|&g| primes.iter().all(|&p| pow_mod(g, order / p, q) != 1))
        .expect("prime fields have primitive roots")
}

/// Classes of `(F_q^*)^2` under coordinatewise scaling by the subgroup of
/// order `t - 1`, numbered by their lexicographically least member.
#[derive(Debug, Clone)]
pub struct MubayiClasses {
    q: u64,
    subgroup: BTreeSet<u64>,
    /// Members of each class, least first.
    classes: Vec<Vec<(u64, u64)>>,
}

impl MubayiClasses {
    pub fn new(t: u64, q: u64) -> Result<Self> {
        if !is_prime(q) {
            return domain(format!("q = {q} is not prime"));
        }
        if q > 1 << 16 {
            return domain(format!("q = {q} is too large to enumerate (q-1)^2 pairs"));
        }
        if t < 2 {
            return domain(format!("need t >= 2, got {t}"));
        }
        if (q - 1) % (t - 1) != 0 {
            return domain(format!("F_{q}^* has no subgroup of order t - 1 = {}", t - 1));
        }
        let gen = pow_mod(primitive_root(q), (q - 1) / (t - 1), q);
        let subgroup: BTreeSet<u64> = (0..t - 1).map(|j| pow_mod(gen, j, q)).collect();
        let side = (q - 1) as usize;
        let mut class_of = vec![usize::MAX; side * side];
        let mut classes = Vec::new();
        for (x, y) in (1..q).cartesian_product(1..q) {
            if class_of[(x as usize - 1) * side + y as usize - 1] != usize::MAX {
                continue;
            }
            let members: Vec<(u64, u64)> = subgroup.iter().map(|&s| (s * x % q, s * y % q)).sorted().collect();
            for &(a, b) in &members {
                class_of[(a as usize - 1) * side + b as usize - 1] = classes.len();
            }
            classes.push(members);
        }
        Ok(MubayiClasses { q, subgroup, classes })
    }

    pub fn subgroup(&self) -> &BTreeSet<u64> {
        &self.subgroup
    }

    pub fn classes(&self) -> &[Vec<(u64, u64)>] {
        &self.classes
    }

    /// `prod a_i + prod b_i` lies in the subgroup.
    pub fn relation(&self, reps: &[(u64, u64)]) -> bool {
        let (pa, pb) = reps.iter().fold((1, 1), |(pa, pb), &(a, b)| (pa * a % self.q, pb * b % self.q));
        self.subgroup.contains(&((pa + pb) % self.q))
    }

    /// The relation evaluated on the least representatives.
    pub fn is_edge(&self, classes: &[usize]) -> bool {
        let reps: Vec<(u64, u64)> = classes.iter().map(|&c| self.classes[c][0]).collect();
        self.relation(&reps)
    }

    /// `true` when every choice of representatives of the given classes
    /// agrees with [`Self::is_edge`].
    pub fn is_well_defined_on(&self, classes: &[usize], budget: &mut Budget) -> Result<bool> {
        let expected = self.is_edge(classes);
        for reps in classes.iter().map(|&c| self.classes[c].iter().copied()).multi_cartesian_product() {
            budget.tick()?;
            if self.relation(&reps) != expected {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// [`Self::is_well_defined_on`] for every k-set of classes.
    pub fn is_well_defined(&self, k: usize, budget: &mut Budget) -> Result<bool> {
        for set in (0..self.classes.len()).combinations(k) {
            if !self.is_well_defined_on(&set, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The k-graph on the classes of [`MubayiClasses`] whose edges are the
/// k-sets satisfying the product relation. It avoids
/// `K(1, ..., 1, 2, t)`.
///
/// Fixing `k - 1` classes, the classes completing them to an edge are the
/// `q - 2` solution classes of a linear equation, minus those among the
/// fixed ones, so the minimum codegree is at least `q - k - 1`. That bound is
/// attained, for instance at `(k, t, q) = (3, 2, 5)`.
pub fn mubayi_graph(k: usize, t: u64, q: u64) -> Result<(Hypergraph, ConstructionCertificate)> {
    if k < 3 {
        return domain(format!("need k >= 3, got {k}"));
    }
    let classes = MubayiClasses::new(t, q)?;
    let n = classes.classes().len();
    check_size(n, k)?;
    let edges = (0..n).combinations(k).filter(|set| classes.is_edge(set));
    let h = Hypergraph::from_edges(k, n, edges)?;
    let mut cert = ConstructionCertificate::new("mubayi_graph", q.saturating_sub(k as u64 + 1));
    cert.codegree_is_lower_bound = true;
    let mut forbidden = vec![1; k - 2];
    forbidden.extend([2, t as usize]);
    forbidden.sort_unstable();
    cert.freeness_claims.push(PartiteProfile::new(forbidden)?);
    cert.notes.push(format!(
        "q = {q}, t = {t}, subgroup = {:?}, {n} vertices; only the exact size (q-1)^2/(t-1) is produced",
        classes.subgroup()
    ));
    Ok((h, cert))
}

/// `G` plus every k-set meeting `A` in an even number of vertices.
pub fn parity_construction(g: &Hypergraph, a: &[usize]) -> Result<Hypergraph> {
    let (k, n) = (g.k(), g.n());
    let mut in_a = vec![false; n];
    for &v in a {
        if v >= n {
            return domain(format!("vertex {v} of A is not a vertex of G"));
        }
        in_a[v] = true;
    }
    check_size(n, k)?;
    let mut h = g.clone();
    for e in (0..n).combinations(k) {
        if e.iter().filter(|&&v| in_a[v]).count() % 2 == 0 {
            h.add_edge(&e)?;
        }
    }
    Ok(h)
}
