//! End-to-end acceptance checks. Each test prints one `PASS` or `FAIL` line;
//! run with `--nocapture` to see them all.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_integer::Integer;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use tilelab::constructions::{mubayi_graph, parity_construction, space_barrier, MubayiClasses};
use tilelab::fractional::{extended_weight_formula, extended_weights, standard_weights, validate};
use tilelab::hypergraph::{binomial, complete_partite, loose_cycle};
use tilelab::invariants::{gcd_ignoring_zero, structural_invariants};
use tilelab::lattice::{difference_generators, lattice_contains, transferral_complete};
use tilelab::rational::{self, Rational};
use tilelab::solver::{
    coex_brute, enumerate_copies, has_perfect_tiling, is_steiner_system, is_subgraph_free, turan_brute, TuranMode,
};
use tilelab::thresholds::{frobenius, k112_threshold, profile_constant};
use tilelab::{Budget, Hypergraph, PartiteProfile};

type Check = Result<String, String>;

/// Runs a check, prints its verdict line and fails the test on `FAIL`.
fn criterion(name: &str, limit: Duration, check: impl FnOnce() -> Check) {
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let result = match result {
        Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
        other => other,
    };
    match result {
        Ok(detail) => println!("PASS {name} ({elapsed:.2?}): {detail}"),
        Err(why) => {
            println!("FAIL {name} ({elapsed:.2?}): {why}");
            panic!("{name}: {why}");
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn profile(sizes: &[usize]) -> PartiteProfile {
    PartiteProfile::new(sizes.to_vec()).unwrap()
}

fn big_budget() -> Budget {
    Budget::new(50_000_000_000)
}

fn err(e: tilelab::Error) -> String {
    e.to_string()
}

#[test]
fn loose_cycle_invariants() {
    criterion("loose cycle invariants", Duration::from_secs(30), || {
        let mut checked = 0;
        for k in 3..=5usize {
            for s in 2..=6usize {
                let f = loose_cycle(k, s).map_err(err)?;
                let inv = structural_invariants(&f, &mut big_budget()).map_err(err)?;
                let half = s.div_ceil(2);
                let sigma = rational::ratio(half as i64, (s * (k - 1)) as i64);
                ensure(inv.sigma == sigma, || format!("k={k} s={s}: sigma {} != {}", inv.sigma, sigma))?;
                let gcd = if (k, s) == (3, 3) { None } else { Some(1) };
                ensure(inv.gcd == gcd, || format!("k={k} s={s}: gcd {:?} != {gcd:?}", inv.gcd))?;
                ensure(inv.tau == half, || format!("k={k} s={s}: tau {} != {half}", inv.tau))?;
                checked += 1;
            }
        }
        Ok(format!("{checked} cycles match sigma, gcd and tau"))
    });
}

/// Largest integer not representable, from a representability table.
fn frobenius_dp(b: &[u64]) -> i64 {
    let max = *b.iter().max().unwrap() as usize;
    let limit = max * max + max;
    let mut ok = vec![false; limit + 1];
    ok[0] = true;
    for x in 1..=limit {
        ok[x] = b.iter().any(|&s| s > 0 && s as usize <= x && ok[x - s as usize]);
    }
    (0..=limit).rev().find(|&x| !ok[x]).map_or(-1, |x| x as i64)
}

#[test]
fn frobenius_suite() {
    criterion("frobenius numbers", Duration::from_secs(5), || {
        let mut cases: Vec<Vec<u64>> = Vec::new();
        for a in 2u64..=30 {
            for b in a + 1..=30 {
                if a.gcd(&b) == 1 {
                    cases.push(vec![a, b]);
                }
            }
        }
        let pairs = cases.len();
        let mut rng = StdRng::seed_from_u64(0x5eed);
        while cases.len() < pairs + 50 {
            let t: Vec<u64> = (0..3).map(|_| rng.gen_range(1..=20)).collect();
            if gcd_ignoring_zero(t.iter().copied()) == Some(1) {
                cases.push(t);
            }
        }
        for b in &cases {
            let g = frobenius(b).map_err(err)?;
            ensure(g == frobenius_dp(b), || format!("{b:?}: {g} != {}", frobenius_dp(b)))?;
            let max = *b.iter().max().unwrap() as i64;
            ensure(g <= (max - 1) * (max - 1), || format!("{b:?}: {g} above (max-1)^2"))?;
        }
        let c = profile_constant(&profile(&[1, 1, 2])).map_err(err)?;
        ensure(c == 0, || format!("C(1,1,2) = {c}"))?;
        Ok(format!("{pairs} pairs and 50 triples agree with the table; C(1,1,2) = 0"))
    });
}

#[test]
fn space_barrier_has_no_factor() {
    criterion("space barrier for K(1,1,2)", Duration::from_secs(60), || {
        let f = complete_partite(&profile(&[1, 1, 2]));
        for n in [8usize, 12] {
            let (h, _) = space_barrier(&f, n, &mut big_budget()).map_err(err)?;
            let delta = h.min_d_degree(2).map_err(err)?;
            ensure(delta == n / 4 - 1, || format!("n={n}: min codegree {delta}"))?;
            let tiling = has_perfect_tiling(&h, &f, &mut big_budget()).map_err(err)?;
            ensure(tiling.is_none(), || format!("n={n}: found a perfect tiling"))?;
        }
        Ok("n = 8, 12: min codegree n/4 - 1 and no perfect tiling".into())
    });
}

#[test]
fn reduction_hosts_tile() {
    criterion("complete partite hosts tile", Duration::from_secs(120), || {
        let mut out = Vec::new();
        for (host, pattern) in [([2, 3, 3], [1, 1, 2]), ([2, 4, 4], [1, 2, 2])] {
            let h = complete_partite(&profile(&host));
            let f = complete_partite(&profile(&pattern));
            let cert = has_perfect_tiling(&h, &f, &mut big_budget())
                .map_err(err)?
                .ok_or_else(|| format!("K{host:?} has no K{pattern:?}-factor"))?;
            ensure(cert.verify(&h, &f) && cert.is_perfect(&h), || format!("K{host:?}: certificate fails"))?;
            out.push(format!("K{host:?} by K{pattern:?}: {} copies", cert.copies.len()));
        }
        Ok(out.join("; "))
    });
}

#[test]
fn finite_field_construction() {
    criterion("finite field construction q=5", Duration::from_secs(120), || {
        let (h, _) = mubayi_graph(3, 2, 5).map_err(err)?;
        let delta = h.min_d_degree(2).map_err(err)?;
        let classes = MubayiClasses::new(2, 5).map_err(err)?;
        let well_defined = classes.is_well_defined(3, &mut big_budget()).map_err(err)?;
        let free = is_subgraph_free(&h, &complete_partite(&profile(&[1, 2, 2])), &mut big_budget()).map_err(err)?;
        let summary = format!("{} vertices, min codegree {delta}, well defined {well_defined}, K(1,2,2)-free {free}", h.n());
        ensure(h.n() == 16 && well_defined && free && delta >= 2, || summary.clone())?;
        Ok(summary)
    });
}

fn ab_profile(a: usize, b: usize, k: usize) -> PartiteProfile {
    let mut sizes = vec![a];
    sizes.extend(std::iter::repeat(b).take(k - 1));
    profile(&sizes)
}

#[test]
fn fractional_weightings() {
    criterion("fractional weightings", Duration::from_secs(1), || {
        let one = rational::int(1);
        let (mut standard, mut extended) = (0, 0);
        for k in 2..=5usize {
            for b in 2..=4usize {
                for a in 1..b {
                    let p = ab_profile(a, b, k);
                    let m = rational::int(p.m() as i64);
                    let (l, h) = standard_weights(&p).map_err(err)?;
                    let r = validate(&l, &p, &h).map_err(err)?;
                    ensure(r.valid && r.weight == m, || format!("{p}: standard weight {}", r.weight))?;
                    ensure(r.vertex_sums.iter().all(|s| *s == one), || format!("{p}: vertex sums not all 1"))?;
                    standard += 1;
                    // The extension carries a new edge of weight m/(a^2 b^(k-2)),
                    // which only fits under the vertex cap for k >= 3.
                    if k < 3 {
                        continue;
                    }
                    let (l, h) = extended_weights(&p).map_err(err)?;
                    let r = validate(&l, &p, &h).map_err(err)?;
                    let (ar, br) = (rational::int(a as i64), rational::int(b as i64));
                    let exact = &m - &m / (&ar * br.pow(k as i32 - 1)) + &m / (&ar * &ar * br.pow(k as i32 - 2));
                    let floor = &m + Rational::new(1.into(), (a * b.pow(k as u32 - 1)).into());
                    ensure(r.valid, || format!("{p}: extended invalid: {:?}", r.violations))?;
                    ensure(r.weight == exact, || format!("{p}: extended weight {} != {exact}", r.weight))?;
                    ensure(extended_weight_formula(&p).map_err(err)? == exact, || format!("{p}: formula"))?;
                    ensure(r.weight >= floor, || format!("{p}: {} < {floor}", r.weight))?;
                    ensure(r.h_min == Some(br.pow(1 - k as i32)), || format!("{p}: h_min {:?}", r.h_min))?;
                    extended += 1;
                }
            }
        }
        Ok(format!("{standard} standard and {extended} extended weightings exact"))
    });
}

#[test]
fn k112_threshold_formula() {
    criterion("K(1,...,1,2) threshold formula", Duration::from_secs(5), || {
        let mut count = 0;
        for n in (4..=1_000_000u64).step_by(4) {
            let v = k112_threshold(3, n).map_err(err)?.integer_value().ok_or("non-integral value")?;
            let expected = if n % 8 == 0 { n / 4 + 1 } else { n / 4 };
            ensure(v == expected as i64, || format!("k=3 n={n}: {v} != {expected}"))?;
            count += 1;
        }
        for n in (5..=1_000_000u64).step_by(5) {
            let v = k112_threshold(4, n).map_err(err)?.integer_value().ok_or("non-integral value")?;
            ensure(v == (n / 5) as i64, || format!("k=4 n={n}: {v} != {}", n / 5))?;
            count += 1;
        }
        Ok(format!("{count} values up to 10^6"))
    });
}

#[test]
fn turan_oracles() {
    criterion("Turan numbers of K(1,1,2)", Duration::from_secs(600), || {
        let f = complete_partite(&profile(&[1, 1, 2]));
        let mut ex = Vec::new();
        let mut coex = Vec::new();
        for n in 4..=7usize {
            ex.push(turan_brute(n, &f, TuranMode::Auto, &mut big_budget()).map_err(err)?);
            coex.push(coex_brute(n, &f, TuranMode::Auto, &mut big_budget()).map_err(err)?);
        }
        ensure(ex[0].value == 1 && ex[1].value == 2, || format!("ex(4), ex(5) = {}, {}", ex[0].value, ex[1].value))?;
        let fano = &coex[3];
        ensure(fano.value == 1, || format!("coex(7) = {}", fano.value))?;
        let steiner = is_steiner_system(&fano.witness, 2).map_err(err)?;
        ensure(steiner, || "coex(7) witness is not a Steiner triple system".into())?;
        for (i, n) in (4..=7u64).enumerate() {
            let pairs = binomial(n, 2).unwrap() as u64;
            ensure(coex[i].value * pairs <= 3 * ex[i].value, || {
                format!("n={n}: coex {} ex {}", coex[i].value, ex[i].value)
            })?;
        }
        let ex: Vec<u64> = ex.iter().map(|r| r.value).collect();
        let coex: Vec<u64> = coex.iter().map(|r| r.value).collect();
        Ok(format!("n = 4..7: ex {ex:?}, coex {coex:?}, Steiner witness at 7"))
    });
}

/// Searches integer coefficients in `[-bound, bound]`.
fn bounded_search(generators: &[Vec<i64>], target: &[i64], bound: i64) -> bool {
    if generators.is_empty() {
        return target.iter().all(|&x| x == 0);
    }
    (0..generators.len()).map(|_| -bound..=bound).multi_cartesian_product().any(|coef| {
        (0..target.len()).all(|c| generators.iter().zip(&coef).map(|(g, k)| g[c] * k).sum::<i64>() == target[c])
    })
}

/// Nondecreasing positive sequences with the given sum and at least two terms.
fn profiles_of(m: usize) -> Vec<Vec<usize>> {
    fn go(left: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            if cur.len() >= 2 {
                out.push(cur.clone());
            }
            return;
        }
        for x in min..=left {
            cur.push(x);
            go(left - x, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, 1, &mut Vec::new(), &mut out);
    out
}

#[test]
fn lattice_arguments() {
    criterion("transferral lattices", Duration::from_secs(30), || {
        let mut coprime = 0;
        for m in 2..=10 {
            for sizes in profiles_of(m) {
                let p = profile(&sizes);
                if gcd_ignoring_zero(p.differences()) != Some(1) {
                    continue;
                }
                for r in 2..=p.k().max(2) {
                    let complete = transferral_complete(&difference_generators(&p, r), r).map_err(err)?;
                    ensure(complete, || format!("{p} with r = {r}: transferrals missing"))?;
                }
                coprime += 1;
            }
        }
        let mut rng = StdRng::seed_from_u64(0x1a77);
        let (mut members, mut widened) = (0, 0);
        for _ in 0..200 {
            let r = rng.gen_range(1..=4);
            let g = rng.gen_range(0..=3);
            let gens: Vec<Vec<i64>> = (0..g).map(|_| (0..r).map(|_| rng.gen_range(-5..=5)).collect()).collect();
            let target: Vec<i64> = if g > 0 && rng.gen_bool(0.5) {
                let coef: Vec<i64> = (0..g).map(|_| rng.gen_range(-3..=3)).collect();
                (0..r).map(|c| gens.iter().zip(&coef).map(|(v, k)| v[c] * k).sum()).collect()
            } else {
                (0..r).map(|_| rng.gen_range(-5..=5)).collect()
            };
            let member = lattice_contains(&gens, &target).map_err(err)?;
            let mut search = bounded_search(&gens, &target, 10);
            if member && !search {
                // Small lattices can need coefficients beyond the first box.
                search = bounded_search(&gens, &target, 40);
                widened += search as usize;
            }
            ensure(search == member, || format!("{gens:?} -> {target:?}: member {member}, search {search}"))?;
            members += member as usize;
        }
        Ok(format!(
            "{coprime} coprime profiles complete; 200 random instances agree ({members} members, {widened} needed a wider box)"
        ))
    });
}

#[test]
fn parity_construction_blocks_factor() {
    criterion("parity construction n=18", Duration::from_secs(900), || {
        let (g0, _) = mubayi_graph(3, 2, 5).map_err(err)?;
        let g: Hypergraph = g0.with_isolated(2);
        let a: Vec<usize> = (0..8).collect();
        let h = parity_construction(&g, &a).map_err(err)?;
        let k = complete_partite(&profile(&[3, 3, 3]));
        let copies = enumerate_copies(&h, &k, &mut big_budget()).map_err(err)?;
        let sizes: BTreeSet<usize> = copies.iter().map(|c| c.vertices.iter().filter(|&&v| v < 8).count()).collect();
        ensure(sizes.iter().all(|s| s % 3 == 0), || format!("intersection sizes {sizes:?}"))?;
        let tiling = has_perfect_tiling(&h, &k, &mut big_budget()).map_err(err)?;
        ensure(tiling.is_none(), || "found a perfect tiling".into())?;
        Ok(format!("{} copies, |V cap A| in {sizes:?}, no perfect tiling", copies.len()))
    });
}
