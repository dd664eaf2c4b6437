//! Index vectors of vertex sets relative to a partition, robust index
//! vectors of pattern copies, and integer lattice membership.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{domain, Result};
use crate::hypergraph::{Hypergraph, PartiteProfile};
use crate::rational::Rational;
use crate::solver::enumerate_copies_counted;

/// Sizes of the intersections of a set with each part.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexVector(pub Vec<usize>);

impl IndexVector {
    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn to_integers(&self) -> Vec<i64> {
        self.0.iter().map(|&x| x as i64).collect()
    }
}

/// Part index of each vertex, rejecting overlapping parts.
fn part_lookup(partition: &[Vec<usize>]) -> Result<BTreeMap<usize, usize>> {
    let mut part_of = BTreeMap::new();
    for (i, part) in partition.iter().enumerate() {
        for &v in part {
            if let Some(j) = part_of.insert(v, i) {
                return domain(format!("vertex {v} lies in parts {j} and {i}"));
            }
        }
    }
    Ok(part_of)
}

fn index_with(part_of: &BTreeMap<usize, usize>, r: usize, set: &[usize]) -> Result<IndexVector> {
    let mut coords = vec![0; r];
    for v in set {
        match part_of.get(v) {
            Some(&i) => coords[i] += 1,
            None => return domain(format!("vertex {v} is in no part")),
        }
    }
    Ok(IndexVector(coords))
}

pub fn index_vector(partition: &[Vec<usize>], set: &[usize]) -> Result<IndexVector> {
    index_with(&part_lookup(partition)?, partition.len(), set)
}

/// An index vector together with its number of labelled copies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobustVector {
    pub vector: IndexVector,
    pub copies: u128,
}

/// Index vectors of copies of `f` occurring at least `mu n^m` times, copies
/// counted as spanning embeddings. Vectors with no copy are never reported.
pub fn robust_vectors(
    h: &Hypergraph,
    partition: &[Vec<usize>],
    f: &Hypergraph,
    mu: &Rational,
    budget: &mut Budget,
) -> Result<Vec<RobustVector>> {
    if mu.is_negative() {
        return domain("mu must be nonnegative");
    }
    let part_of = part_lookup(partition)?;
    if let Some(v) = (0..h.n()).find(|v| !part_of.contains_key(v)) {
        return domain(format!("vertex {v} is in no part"));
    }
    let mut counts: BTreeMap<IndexVector, u128> = BTreeMap::new();
    for (copy, labelled) in enumerate_copies_counted(h, f, budget)? {
        *counts.entry(index_with(&part_of, partition.len(), &copy.vertices)?).or_insert(0) += labelled;
    }
    let threshold = mu * Rational::from_integer(BigInt::from(h.n()).pow(f.n() as u32));
    Ok(counts
        .into_iter()
        .filter(|(_, c)| Rational::from_integer((*c).into()) >= threshold)
        .map(|(vector, copies)| RobustVector { vector, copies })
        .collect())
}

/// Row echelon basis of the lattice spanned by a set of integer vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    /// `(leading column, row)`, leading entries positive, columns increasing.
    basis: Vec<(usize, Vec<BigInt>)>,
}

impl Lattice {
    pub fn new(generators: &[Vec<i64>], dim: usize) -> Result<Lattice> {
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return domain(format!("generator {g:?} has length {}, expected {dim}", g.len()));
        }
        let mut rows: Vec<Vec<BigInt>> = generators.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let mut basis = Vec::new();
        for col in 0..dim {
            // Euclid on the column until a single row is left nonzero there.
            loop {
                let mut nonzero: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
                if nonzero.len() <= 1 {
                    break;
                }
                nonzero.sort_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
                let pivot = rows[nonzero[0]].clone();
                for &i in &nonzero[1..] {
                    let q = rows[i][col].div_floor(&pivot[col]);
                    for (x, p) in rows[i].iter_mut().zip(&pivot) {
                        *x -= &q * p;
                    }
                }
            }
            if let Some(i) = rows.iter().position(|r| !r[col].is_zero()) {
                let mut row = rows.swap_remove(i);
                if row[col].is_negative() {
                    row.iter_mut().for_each(|x| *x = -&*x);
                }
                basis.push((col, row));
            }
            rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        }
        Ok(Lattice { dim, basis })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, target: &[i64]) -> Result<bool> {
        if target.len() != self.dim {
            return domain(format!("target has length {}, expected {}", target.len(), self.dim));
        }
        let mut t: Vec<BigInt> = target.iter().map(|&x| BigInt::from(x)).collect();
        let mut next = 0;
        for col in 0..self.dim {
            match self.basis.get(next) {
                Some((lead, row)) if *lead == col => {
                    let (q, rem) = t[col].div_rem(&row[col]);
                    if !rem.is_zero() {
                        return Ok(false);
                    }
                    for (x, p) in t.iter_mut().zip(row) {
                        *x -= &q * p;
                    }
                    next += 1;
                }
                _ if !t[col].is_zero() => return Ok(false),
                _ => {}
            }
        }
        Ok(true)
    }
}

/// `true` iff `target` is an integer combination of `generators`.
pub fn lattice_contains(generators: &[Vec<i64>], target: &[i64]) -> Result<bool> {
    Lattice::new(generators, target.len())?.contains(target)
}

fn transferral(r: usize, i: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0; r];
    v[i] = 1;
    v[j] = -1;
    v
}

/// `true` iff every `u_i - u_j` lies in the lattice of the generators.
pub fn transferral_complete(generators: &[Vec<i64>], r: usize) -> Result<bool> {
    if r < 2 {
        return domain(format!("need r >= 2, got {r}"));
    }
    let lattice = Lattice::new(generators, r)?;
    for i in 0..r {
        for j in i + 1..r {
            if !lattice.contains(&transferral(r, i, j))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The vectors `(a_p - a_q)(u_i - u_j)` obtained by placing two classes of
/// the profile in parts `i` and `j` and then swapping them, for all distinct
/// `p, q` and `i, j` in `0..r`.
pub fn difference_generators(profile: &PartiteProfile, r: usize) -> Vec<Vec<i64>> {
    let a = profile.sizes();
    let mut out = Vec::new();
    for p in 0..a.len() {
        for q in 0..a.len() {
            let d = a[p] as i64 - a[q] as i64;
            if p == q || d == 0 {
                continue;
            }
            for i in 0..r {
                for j in 0..r {
                    if i != j {
                        out.push(transferral(r, i, j).into_iter().map(|x| x * d).collect());
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}
