//! Frobenius numbers and the closed-form minimum codegree thresholds for
//! perfect tilings.
//!
//! Every threshold is returned as an exact rational main term. Lower order
//! error terms are not estimated; callers round according to their own
//! divisibility context.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{domain, Error, Result};
use crate::hypergraph::{binomial, Hypergraph, PartiteProfile};
use crate::invariants::{gcd_ignoring_zero, structural_invariants};
use crate::rational::{self, Rational};

/// Largest integer that is not a nonnegative integer combination of `b`.
///
/// Zero entries are ignored, and the result is `-1` when some entry is 1.
/// Computed as shortest paths over the residues modulo the smallest positive
/// entry: `dist[r]` is the least representable number congruent to `r`, and
/// the answer is `max(dist) - min(b)`.
pub fn frobenius(b: &[u64]) -> Result<i64> {
    let positive: BTreeSet<u64> = b.iter().copied().filter(|&x| x > 0).collect();
    let Some(&modulus) = positive.iter().next() else {
        return domain("Frobenius number needs a positive entry");
    };
    let gcd = gcd_ignoring_zero(positive.iter().copied()).unwrap_or(0);
    if gcd != 1 {
        return Err(Error::UndefinedFrobenius { gcd });
    }
    if modulus == 1 {
        return Ok(-1);
    }
    let a = modulus as usize;
    let mut dist = vec![u64::MAX; a];
    dist[0] = 0;
    let mut heap = BinaryHeap::from([Reverse((0u64, 0usize))]);
    while let Some(Reverse((d, r))) = heap.pop() {
        if d > dist[r] {
            continue;
        }
        for &step in positive.iter().skip(1) {
            let next = (r + (step % modulus) as usize) % a;
            let nd = d + step;
            if nd < dist[next] {
                dist[next] = nd;
                heap.push(Reverse((nd, next)));
            }
        }
    }
    let worst = *dist.iter().max().expect("modulus > 1");
    Ok(worst as i64 - modulus as i64)
}

/// `C = g(a2-a1, ..., ak-a1) + 1`, defined when the differences are coprime.
pub fn profile_constant(profile: &PartiteProfile) -> Result<i64> {
    let diffs = profile.differences();
    match gcd_ignoring_zero(diffs.iter().copied()) {
        Some(1) => Ok(frobenius(&diffs)? + 1),
        Some(g) => domain(format!("{profile}: part size differences have gcd {g}, not 1")),
        None => domain(format!("{profile}: all parts are equal, the differences have no gcd")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// S(F) = {1} or gcd(S(F)) > 1: main term n/2.
    HalfN,
    /// gcd(F) = 1: main term σ(F)n.
    SigmaN,
    /// gcd(S(F)) = 1 and gcd(F) = d > 1: main term max(σ(F)n, n/p), p the
    /// smallest prime factor of d.
    MaxSigmaOverPrime,
    /// Every Steiner divisibility condition holds: n/(k+1) + 1.
    SteinerDivisible,
    /// Some divisibility condition fails: n/(k+1).
    SteinerNotDivisible,
}

/// Quantities that determine which case of a threshold formula applies.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_set: Option<BTreeSet<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gcd_s: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gcd_f: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smallest_prime: Option<u64>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "rational::as_option_string"
    )]
    pub sigma: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_prime: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divisibility: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdReport {
    #[serde(with = "rational::as_string")]
    pub value: Rational,
    pub case: CaseTag,
    pub witnesses: Witnesses,
}

pub fn smallest_prime_factor(d: u64) -> Option<u64> {
    if d < 2 {
        return None;
    }
    (2..).take_while(|p| p * p <= d).find(|p| d % p == 0).or(Some(d))
}

/// Main term of the general codegree threshold for a k-partite pattern `f`
/// on `n` vertices.
pub fn mycroft_threshold(f: &Hypergraph, n: u64, budget: &mut Budget) -> Result<ThresholdReport> {
    let order = f.n() as u64;
    if order == 0 || n % order != 0 {
        return domain(format!("n = {n} is not divisible by |V(F)| = {order}"));
    }
    let inv = structural_invariants(f, budget)?;
    let gcd_s = inv.gcd_of_s();
    let n_rat = rational::int(n as i64);
    let sigma_n = &inv.sigma * &n_rat;
    let mut witnesses = Witnesses {
        s_set: Some(inv.s_set.clone()),
        gcd_s: Some(gcd_s),
        gcd_f: inv.gcd,
        sigma: Some(inv.sigma.clone()),
        ..Witnesses::default()
    };
    let (value, case) = if inv.s_set == BTreeSet::from([1]) || gcd_s > 1 {
        (n_rat / rational::int(2), CaseTag::HalfN)
    } else {
        match inv.gcd {
            Some(1) => (sigma_n, CaseTag::SigmaN),
            Some(d) => {
                let p = smallest_prime_factor(d).expect("d > 1");
                witnesses.smallest_prime = Some(p);
                let over_p = n_rat / rational::int(p as i64);
                (sigma_n.max(over_p), CaseTag::MaxSigmaOverPrime)
            }
            // D(F) = {0} forces a single class size s, so S(F) = {s} and the
            // first branch has already applied.
            None => unreachable!("gcd(F) undefined with gcd(S(F)) = 1 and S(F) != {{1}}"),
        }
    };
    Ok(ThresholdReport { value, case, witnesses })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBound {
    #[serde(with = "rational::as_string")]
    pub value: Rational,
    /// The maximised Turán density term.
    #[serde(with = "rational::as_string")]
    pub f: Rational,
    pub c: i64,
    /// Shift `i` attaining the maximum in the Turán term.
    pub argmax_shift: i64,
}

/// `a1 n/m + f(n) + C` where
/// `f(n) = max over 1-C <= i <= 1 of ex(N_i, K) k / binom(N_i, k-1)` and
/// `N_i = (m-a1)n/m + i`.
///
/// `turan` supplies `ex(N, K)`, either exactly for tiny `N` or as an upper
/// bound. When `C = 0` the range is the single shift `i = 1`.
pub fn degree_bound(
    profile: &PartiteProfile,
    n: u64,
    turan: &mut dyn FnMut(u64) -> Result<u64>,
) -> Result<DegreeBound> {
    let (m, a1, k) = (profile.m() as u64, profile.smallest() as u64, profile.k() as u64);
    if n % m != 0 {
        return domain(format!("n = {n} is not divisible by m = {m}"));
    }
    let c = profile_constant(profile)?;
    let base = ((m - a1) * (n / m)) as i64;
    let mut best: Option<(Rational, i64)> = None;
    for shift in (1 - c)..=1 {
        let size = base + shift;
        if size < 0 {
            return domain(format!("N = {size} is negative for shift {shift}"));
        }
        let size = size as u64;
        let denom = binomial(size, k - 1).ok_or_else(|| Error::Domain("binomial overflow".into()))?;
        if denom == 0 {
            return domain(format!("binom({size}, {}) is zero", k - 1));
        }
        let ex = turan(size)?;
        let term = Rational::new((u128::from(ex) * u128::from(k)).into(), denom.into());
        if best.as_ref().map_or(true, |(b, _)| term > *b) {
            best = Some((term, shift));
        }
    }
    let (f, argmax_shift) = best.expect("range 1-C..=1 is nonempty since C >= 0");
    let value = rational::ratio((a1 * n) as i64, m as i64) + &f + rational::int(c);
    Ok(DegreeBound { value, f, c, argmax_shift })
}

/// `true` iff `k - i` divides `binom(n' - i, k - 1 - i)` for every
/// `0 <= i <= k - 2`; necessary for a Steiner system S(k-1, k, n') to exist.
pub fn steiner_divisibility(k: u64, n_prime: u64) -> Result<bool> {
    if k < 2 || n_prime < k {
        return domain(format!("need k >= 2 and n' >= k, got k = {k}, n' = {n_prime}"));
    }
    Ok((0..=k - 2).all(|i| binomial_mod(n_prime - i, k - 1 - i, k - i) == 0))
}

fn binomial_mod(n: u64, r: u64, modulus: u64) -> u64 {
    if let Some(b) = binomial(n, r) {
        return (b % u128::from(modulus)) as u64;
    }
    let r = r.min(n - r);
    let mut acc = BigUint::from(1u32);
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    (acc % BigUint::from(modulus)).to_u64().expect("residue fits")
}

/// Exact threshold for tiling K(1, ..., 1, 2) with `n` divisible by `k + 1`.
pub fn k112_threshold(k: u64, n: u64) -> Result<ThresholdReport> {
    if k < 3 {
        return domain(format!("need k >= 3, got {k}"));
    }
    if n % (k + 1) != 0 || n == 0 {
        return domain(format!("n = {n} is not a positive multiple of k + 1 = {}", k + 1));
    }
    let n_prime = k * n / (k + 1) + 1;
    let divisible = steiner_divisibility(k, n_prime)?;
    let base = n / (k + 1);
    let (value, case) = if divisible {
        (base + 1, CaseTag::SteinerDivisible)
    } else {
        (base, CaseTag::SteinerNotDivisible)
    };
    Ok(ThresholdReport {
        value: rational::int(value as i64),
        case,
        witnesses: Witnesses { n_prime: Some(n_prime), divisibility: Some(divisible), ..Witnesses::default() },
    })
}

/// Codegree threshold `ceil(s/2) n / (s(k-1))` for tiling loose cycles.
pub fn cycle_threshold(k: u64, s: u64, n: u64) -> Result<Rational> {
    if k < 4 || s < 2 {
        return domain(format!("need k >= 4 and s >= 2, got k = {k}, s = {s}"));
    }
    let order = s * (k - 1);
    if n % order != 0 {
        return domain(format!("n = {n} is not divisible by s(k-1) = {order}"));
    }
    Ok(rational::ratio((s.div_ceil(2) * n) as i64, order as i64))
}

/// `floor(binom(x, k-1) / k)`, the Turán bound for K(1, ..., 1, 2) obtained
/// from every (k-1)-set having degree at most one.
pub fn k112_turan_upper(k: u64) -> impl FnMut(u64) -> Result<u64> {
    move |x| {
        let b = binomial(x, k - 1).ok_or_else(|| Error::Domain("binomial overflow".into()))?;
        u64::try_from(b / u128::from(k)).map_err(|_| Error::Domain("bound overflows u64".into()))
    }
}

impl ThresholdReport {
    /// Integer value, when the threshold happens to be integral.
    pub fn integer_value(&self) -> Option<i64> {
        rational::is_integer(&self.value).then(|| self.value.to_integer().to_i64()).flatten()
    }
}
