//! Shared fixture corpus, random instance generators, and independent
//! oracles. Oracles work by exhaustive enumeration so that the library's
//! closed-form computations are checked against first principles.

// not every test binary touches every helper
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use ultrapath_core::fixtures;
use ultrapath_core::generators::{max_space, prop2_space, ultv_approx};
use ultrapath_core::path::{enumerate_paths, path_bar_leq, path_leq, AlphaPath, PathBar};
use ultrapath_core::rat::{ExtRat, Rat};
use ultrapath_core::space::{Space, SpectrumSet};

/// Named hosts with at most 6 points, covering one to three nerve
/// levels, repeated diameters, and fractional spectra.
pub fn corpus() -> Vec<(&'static str, Space)> {
    let spec = |vals: &[Rat]| SpectrumSet::from_values(vals.iter().copied());
    vec![
        ("singleton", fixtures::singleton()),
        ("pair", max_space(&spec(&[Rat::zero(), Rat::int(1)])).unwrap()),
        ("t3", fixtures::t3()),
        ("eq3", fixtures::equilateral(3, Rat::int(1))),
        ("eq4_half", fixtures::equilateral(4, Rat::new(1, 2))),
        ("two_sons", fixtures::two_sons()),
        ("doubled_far_pair", fixtures::doubled_far_pair()),
        ("three_level_chain", fixtures::three_level_chain()),
        ("max_012", max_space(&spec(&[Rat::zero(), Rat::int(1), Rat::int(2)])).unwrap()),
        (
            "max_frac",
            max_space(&spec(&[Rat::zero(), Rat::new(1, 2), Rat::int(3)])).unwrap(),
        ),
        ("ultv_012_w2", ultv_approx(&spec(&[Rat::zero(), Rat::int(1), Rat::int(2)]), 2).unwrap()),
        ("ultv_013_w2", ultv_approx(&spec(&[Rat::zero(), Rat::int(1), Rat::int(3)]), 2).unwrap()),
        ("prop2_012_w2", prop2_space(&spec(&[Rat::zero(), Rat::int(1), Rat::int(2)]), 2, 2).unwrap()),
        ("wide_pair_block", {
            // two deep blocks of unequal depth under one diameter-4 roof
            Space::new(
                vec![
                    vec![Rat::int(0), Rat::int(2), Rat::int(2), Rat::int(4), Rat::int(4)],
                    vec![Rat::int(2), Rat::int(0), Rat::int(2), Rat::int(4), Rat::int(4)],
                    vec![Rat::int(2), Rat::int(2), Rat::int(0), Rat::int(4), Rat::int(4)],
                    vec![Rat::int(4), Rat::int(4), Rat::int(4), Rat::int(0), Rat::int(1)],
                    vec![Rat::int(4), Rat::int(4), Rat::int(4), Rat::int(1), Rat::int(0)],
                ],
                Some(vec!["x".into(), "y".into(), "z".into(), "w1".into(), "w2".into()]),
            )
            .unwrap()
        }),
    ]
}

/// Word levels for the monoid acceptance hosts: at most 3 levels,
/// width at most 4.
pub fn word_configs() -> Vec<(Vec<Rat>, u32)> {
    vec![
        (vec![Rat::int(1)], 4),
        (vec![Rat::int(2), Rat::int(1)], 3),
        (vec![Rat::int(2), Rat::int(1)], 4),
        (vec![Rat::int(4), Rat::int(2), Rat::int(1)], 2),
    ]
}

/// Every alpha-path of the space, over all realized final diameters.
pub fn all_paths(space: &Space, alpha: ExtRat) -> Vec<AlphaPath> {
    let mut betas: Vec<Rat> = space.nerve().iter().map(|b| b.diameter()).collect();
    betas.sort();
    betas.dedup();
    let mut out = Vec::new();
    for beta in betas {
        if ExtRat::finite(beta) < alpha {
            out.extend(enumerate_paths(space, alpha, beta).expect("beta below alpha"));
        }
    }
    out
}

/// Greatest lower bound by exhaustive scan over the full path poset:
/// collect every lower bound of the pair and insist one of them
/// dominates all others.
pub fn oracle_glb(pool: &[AlphaPath], p: &AlphaPath, q: &AlphaPath) -> PathBar {
    let mut lower: Vec<PathBar> = vec![PathBar::Bottom(p.alpha())];
    for r in pool {
        if path_leq(r, p).expect("shared alpha") && path_leq(r, q).expect("shared alpha") {
            lower.push(PathBar::Path(r.clone()));
        }
    }
    let greatest: Vec<&PathBar> = lower
        .iter()
        .filter(|cand| lower.iter().all(|o| path_bar_leq(o, cand).expect("shared alpha")))
        .collect();
    assert_eq!(greatest.len(), 1, "the lower bounds of a pair must have a greatest element");
    greatest[0].clone()
}

/// Random ultrametric space as a set of distinct words: at most four
/// strictly decreasing positive levels sharing one denominator, distance
/// given by the level of the first differing coordinate.
pub fn random_ultrametric(rng: &mut ChaCha8Rng, max_n: usize) -> Space {
    let k = rng.gen_range(1..=4usize);
    let denom = rng.gen_range(1..=3i64);
    let mut numers = BTreeSet::new();
    while numers.len() < k {
        numers.insert(rng.gen_range(1..=30i64));
    }
    let levels: Vec<Rat> = numers.into_iter().rev().map(|n| Rat::new(n, denom)).collect();

    let width = 4u32;
    let cap = (width as usize).pow(k as u32);
    let n = rng.gen_range(1..=max_n).min(cap);
    let mut words = BTreeSet::new();
    while words.len() < n {
        let w: Vec<u32> = (0..k).map(|_| rng.gen_range(0..width)).collect();
        words.insert(w);
    }
    let words: Vec<Vec<u32>> = words.into_iter().collect();

    let dist: Vec<Vec<Rat>> = words
        .iter()
        .map(|a| {
            words
                .iter()
                .map(|b| match a.iter().zip(b).position(|(x, y)| x != y) {
                    Some(lvl) => levels[lvl],
                    None => Rat::zero(),
                })
                .collect()
        })
        .collect();
    Space::new(dist, None).expect("word metric is ultrametric")
}

/// Random finite metric: integer weights closed under shortest paths.
pub fn random_metric(rng: &mut ChaCha8Rng, max_n: usize) -> Vec<Vec<Rat>> {
    let n = rng.gen_range(2..=max_n);
    let mut d = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = Rat::int(rng.gen_range(1..=20i64));
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let alt = d[i][k] + d[k][j];
                    if alt < d[i][j] {
                        d[i][j] = alt;
                    }
                }
            }
        }
    }
    d
}

/// Bottleneck distance by enumeration of simple chains from `a` to `b`:
/// the least over chains of the largest step.
pub fn oracle_bottleneck(dist: &[Vec<Rat>], a: usize, b: usize) -> Rat {
    fn walk(
        dist: &[Vec<Rat>],
        here: usize,
        goal: usize,
        worst: Rat,
        visited: &mut Vec<bool>,
        best: &mut Rat,
    ) {
        if worst >= *best {
            return;
        }
        if here == goal {
            *best = worst;
            return;
        }
        for next in 0..dist.len() {
            if !visited[next] {
                visited[next] = true;
                walk(dist, next, goal, worst.max(dist[here][next]), visited, best);
                visited[next] = false;
            }
        }
    }
    let mut best = dist[a][b];
    let mut visited = vec![false; dist.len()];
    visited[a] = true;
    walk(dist, a, b, Rat::zero(), &mut visited, &mut best);
    best
}

/// Position of a path in an enumerated list.
pub fn path_index(paths: &[AlphaPath], p: &AlphaPath) -> usize {
    paths.iter().position(|q| q == p).expect("path is enumerated")
}
