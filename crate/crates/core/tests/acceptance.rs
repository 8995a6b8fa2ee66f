//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line. Every check compares library output against an
//! independent oracle or a frozen expected value; nothing here consults
//! the code paths it is judging.

mod common;

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ultrapath_core::embed::check_scheme_criteria;
use ultrapath_core::fixtures;
use ultrapath_core::generators::{ultv_approx, uniform_scheme, LevelSpec};
use ultrapath_core::monoid::{ball_meet_alpha, ball_sum, run_check, BallBar, MonoidError, WordHost};
use ultrapath_core::path::{
    enumerate_paths, path_ball, path_ball_isometry, path_distance, path_infimum, path_space, phi,
    PathBar,
};
use ultrapath_core::ramsey::{check_divisible, subdominant_dstar, DivisibilityVerdict, SearchMode};
use ultrapath_core::rat::{ExtRat, Rat};
use ultrapath_core::space::{Space, SpectrumSet};
use ultrapath_core::tree::{space_to_tree, tree_to_space, Degree, SchemeNode, TreeScheme};
use ultrapath_core::{embed, json};

use common::{
    all_paths, corpus, oracle_bottleneck, oracle_glb, path_index, random_metric,
    random_ultrametric, word_configs,
};

fn report(number: usize, name: &str, failures: &[String]) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    // write straight to the process stdout so the line survives the
    // harness capture and shows up in plain `cargo test` runs
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    writeln!(out, "criterion {number:2} [{verdict}] {name}").ok();
    out.flush().ok();
    assert!(
        failures.is_empty(),
        "criterion {number} ({name}) failed:\n  {}",
        failures.join("\n  ")
    );
}

#[test]
fn c01_tree_codec_roundtrip() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..200 {
        let space = random_ultrametric(&mut rng, 12);
        let back = tree_to_space(&space_to_tree(&space));
        match back {
            Ok(back) => {
                if back.matrix() != space.matrix() || back.labels() != space.labels() {
                    failures.push(format!("case {case}: roundtrip changed the space"));
                }
            }
            Err(e) => failures.push(format!("case {case}: decode failed: {e}")),
        }
    }
    report(1, "tree codec roundtrip on 200 random spaces", &failures);
}

#[test]
fn c02_point_map_preserves_distances_and_spectra() {
    let mut failures = Vec::new();
    for (name, space) in corpus() {
        let (paths, pspace) = path_space(&space, ExtRat::Infinity).expect("enumerable");
        let at: Vec<usize> =
            (0..space.len()).map(|x| path_index(&paths, &phi(&space, x, ExtRat::Infinity))).collect();
        for x in 0..space.len() {
            for y in 0..space.len() {
                if pspace.dist(at[x], at[y]) != space.dist(x, y) {
                    failures.push(format!("{name}: distance broken at ({x},{y})"));
                }
            }
            if pspace.point_spectrum(at[x]) != space.point_spectrum(x) {
                failures.push(format!("{name}: point spectrum broken at {x}"));
            }
        }
        if pspace.spectrum() != space.spectrum() {
            failures.push(format!("{name}: total spectrum broken"));
        }
    }
    report(2, "point embedding into the path space is spectrum-exact", &failures);
}

#[test]
fn c03_path_space_of_t3() {
    let mut failures = Vec::new();
    let t3 = fixtures::t3();
    let (paths, pspace) = path_space(&t3, ExtRat::Infinity).expect("enumerable");
    if paths.len() != 4 {
        failures.push(format!("expected 4 paths, found {}", paths.len()));
    } else {
        let j = 0; // two-ball path through {x,y} then {z}
        let (px, py, pz) = (1, 2, 3);
        if paths[j].pure().len() != 2 || paths[px].pure().len() != 1 {
            failures.push("enumeration order changed".to_string());
        }
        let expected = [
            (px, py, 1),
            (px, j, 1),
            (py, j, 1),
            (px, pz, 2),
            (py, pz, 2),
            (j, pz, 2),
        ];
        for (a, b, want) in expected {
            if pspace.dist(a, b) != Rat::int(want) {
                failures.push(format!("d({a},{b}) = {} not {want}", pspace.dist(a, b)));
            }
        }
        // cross-check every entry against the exhaustive infimum oracle
        let pool = all_paths(&t3, ExtRat::Infinity);
        for a in 0..4 {
            for b in 0..4 {
                let want = match oracle_glb(&pool, &paths[a], &paths[b]) {
                    PathBar::Path(ref p) => ExtRat::finite(p.delta()),
                    PathBar::Bottom(alpha) => alpha,
                };
                if ExtRat::finite(pspace.dist(a, b)) != want {
                    failures.push(format!("oracle disagrees at ({a},{b})"));
                }
            }
        }
    }
    report(3, "4-path space of the 3-point host matches its oracle", &failures);
}

#[test]
fn c04_infimum_matches_exhaustive_glb() {
    let mut failures = Vec::new();
    let mut hosts = 0;
    for (name, space) in corpus() {
        hosts += 1;
        let mut alphas = vec![ExtRat::Infinity];
        if let Some(top) = space.spectrum().max().filter(|r| r.is_positive()) {
            alphas.push(ExtRat::finite(top));
        }
        for alpha in alphas {
            let pool = all_paths(&space, alpha);
            for p in &pool {
                for q in &pool {
                    let got = path_infimum(&space, p, q).expect("shared alpha");
                    let want = oracle_glb(&pool, p, q);
                    if got != want {
                        failures.push(format!("{name} (alpha {alpha}): {p:?} vs {q:?}"));
                    }
                }
            }
        }
    }
    if hosts < 10 {
        failures.push(format!("only {hosts} hosts in corpus"));
    }
    report(4, "path infimum equals the exhaustive lower-bound scan", &failures);
}

#[test]
fn c05_path_families_are_ultrametric() {
    let mut failures = Vec::new();
    for (name, space) in corpus() {
        let mut alphas = vec![ExtRat::Infinity];
        for r in space.spectrum().iter().filter(|r| r.is_positive()) {
            alphas.push(ExtRat::finite(*r));
        }
        for alpha in alphas {
            let mut betas: Vec<Rat> = space.nerve().iter().map(|b| b.diameter()).collect();
            betas.sort();
            betas.dedup();
            for beta in betas {
                if ExtRat::finite(beta) >= alpha {
                    continue;
                }
                let family = enumerate_paths(&space, alpha, beta).expect("beta below alpha");
                if family.is_empty() {
                    continue;
                }
                let d = |i: usize, j: usize| {
                    path_distance(&space, &family[i], &family[j]).expect("shared alpha")
                };
                let k = family.len();
                // same-final-diameter family: distance beta exactly on the diagonal
                for i in 0..k {
                    for j in 0..k {
                        if (d(i, j) == ExtRat::finite(beta)) != (i == j) {
                            failures.push(format!(
                                "{name} ({alpha},{beta}): identity of indiscernibles broken"
                            ));
                        }
                    }
                }
                for i in 0..k {
                    for j in 0..k {
                        for l in 0..k {
                            if d(i, j) > d(i, l).max(d(j, l)) {
                                failures.push(format!(
                                    "{name} ({alpha},{beta}): triple ({i},{j},{l})"
                                ));
                            }
                        }
                    }
                }
                // the induced matrix with a zero diagonal is a valid ultrametric
                let dist: Vec<Vec<Rat>> = (0..k)
                    .map(|i| {
                        (0..k)
                            .map(|j| {
                                if i == j {
                                    Rat::zero()
                                } else {
                                    d(i, j).as_finite().unwrap_or_else(|| {
                                        alpha.as_finite().expect("bottom only below finite alpha")
                                    })
                                }
                            })
                            .collect()
                    })
                    .collect();
                if let Err(e) = Space::new(dist, None) {
                    failures.push(format!("{name} ({alpha},{beta}): {e}"));
                }
            }
        }
    }
    report(5, "every enumerated path family is ultrametric", &failures);
}

#[test]
fn c06_path_space_balls_are_truncation_products() {
    let mut failures = Vec::new();
    for (name, space) in corpus() {
        let (paths, pspace) = path_space(&space, ExtRat::Infinity).expect("enumerable");
        let nerve = pspace.nerve();
        for ball in &nerve {
            let r = ball.diameter();
            if !r.is_positive() {
                continue;
            }
            let center = &paths[ball.least_point()];
            match path_ball(&space, center, r) {
                Ok(members) => {
                    let got: BTreeSet<usize> =
                        members.iter().map(|p| path_index(&paths, p)).collect();
                    let want: BTreeSet<usize> = ball.points().iter().copied().collect();
                    if got != want {
                        failures.push(format!("{name}: ball at radius {r} mismatched"));
                    }
                }
                Err(e) => failures.push(format!("{name}: ball at radius {r}: {e}")),
            }
        }
        // product form also lands back in the nerve from any member path
        for (i, p) in paths.iter().enumerate() {
            for r in pspace.point_spectrum(i).iter().filter(|r| r.is_positive()) {
                match path_ball(&space, p, *r) {
                    Ok(members) => {
                        let got: BTreeSet<usize> =
                            members.iter().map(|q| path_index(&paths, q)).collect();
                        let want: BTreeSet<usize> =
                            pspace.closed_ball(i, *r).points().iter().copied().collect();
                        if got != want {
                            failures.push(format!("{name}: member ball ({i},{r}) mismatched"));
                        }
                    }
                    Err(e) => failures.push(format!("{name}: member ball ({i},{r}): {e}")),
                }
            }
        }
        // every same-diameter ball pair is exchanged by a surjective isometry
        for b1 in &nerve {
            for b2 in &nerve {
                if b1.diameter() != b2.diameter() || !b1.diameter().is_positive() {
                    continue;
                }
                let r = b1.diameter();
                let p1 = &paths[b1.least_point()];
                let p2 = &paths[b2.least_point()];
                let mapping = match path_ball_isometry(&space, p1, p2, r) {
                    Ok(m) => m,
                    Err(e) => {
                        failures.push(format!("{name}: isometry at radius {r}: {e}"));
                        continue;
                    }
                };
                let dom: BTreeSet<usize> =
                    mapping.iter().map(|(q, _)| path_index(&paths, q)).collect();
                let img: BTreeSet<usize> =
                    mapping.iter().map(|(_, f)| path_index(&paths, f)).collect();
                let want1: BTreeSet<usize> = b1.points().iter().copied().collect();
                let want2: BTreeSet<usize> = b2.points().iter().copied().collect();
                if dom != want1 {
                    failures.push(format!("{name}: isometry domain at radius {r}"));
                }
                if img != want2 {
                    failures.push(format!("{name}: isometry not onto at radius {r}"));
                }
                for (a, fa) in &mapping {
                    for (b, fb) in &mapping {
                        let left = pspace.dist(path_index(&paths, a), path_index(&paths, b));
                        let right = pspace.dist(path_index(&paths, fa), path_index(&paths, fb));
                        if left != right {
                            failures.push(format!("{name}: isometry bends at radius {r}"));
                        }
                    }
                }
            }
        }
    }
    report(6, "path-space balls factor as truncation products", &failures);
}

#[test]
fn c07_monoid_laws_exhaustive_in_window() {
    let mut failures = Vec::new();
    for (levels, width) in word_configs() {
        let tag = format!("levels {levels:?} width {width}");
        let rep = match run_check(&levels, width, 5) {
            Ok(rep) => rep,
            Err(e) => {
                failures.push(format!("{tag}: {e}"));
                continue;
            }
        };
        if !rep.all_ok {
            failures.push(format!("{tag}: a law failed: {rep:?}"));
            continue;
        }
        let n = rep.points as u64;
        let m = rep.paths as u64;
        let full = [
            ("word pairs", &rep.word_compatibility, n * n * n),
            ("pointwise quads", &rep.pointwise_bound, n * n * n * n),
            ("sum pairs", &rep.path_commutative, m * m),
            ("sum triples", &rep.path_associative, m * m * m),
            ("translated pairs", &rep.path_translation, m * m * m),
            ("point images", &rep.phi_homomorphism, n * n),
            ("neutral sums", &rep.path_neutral, m),
        ];
        for (what, stat, want) in full {
            if stat.checked + stat.skipped != want {
                failures.push(format!(
                    "{tag}: {what} not exhaustive: visited {} of {want}",
                    stat.checked + stat.skipped
                ));
            }
        }
        if rep.path_associative.checked == 0 || rep.phi_homomorphism.checked == 0 {
            failures.push(format!("{tag}: laws vacuous"));
        }
    }
    report(7, "monoid laws hold exhaustively inside each window", &failures);
}

#[test]
fn c08_ball_sum_delta_and_distributivity() {
    let mut failures = Vec::new();
    for (levels, width) in word_configs() {
        let tag = format!("levels {levels:?} width {width}");
        let host = WordHost::new(&levels, width).expect("valid window");
        let space = host.space();
        let op = host.point_op();
        let nerve = space.nerve();
        let mut alphas = vec![ExtRat::Infinity];
        for r in space.spectrum().iter().filter(|r| r.is_positive()) {
            alphas.push(ExtRat::finite(*r));
        }
        let mut delta_checked = 0u64;
        for b1 in &nerve {
            for b2 in &nerve {
                if let Ok(s) = ball_sum(space, &op, b1, b2) {
                    delta_checked += 1;
                    if s.diameter() != b1.diameter().max(b2.diameter()) {
                        failures.push(format!("{tag}: delta law at {b1:?} + {b2:?}"));
                    }
                }
            }
        }
        let mut dist_checked = 0u64;
        for c in &nerve {
            for b1 in &nerve {
                for b2 in &nerve {
                    for &alpha in &alphas {
                        if ExtRat::finite(c.diameter()) >= alpha
                            || ExtRat::finite(b1.diameter()) >= alpha
                            || ExtRat::finite(b2.diameter()) >= alpha
                        {
                            continue;
                        }
                        let lhs = match ball_meet_alpha(space, b1, b2, alpha) {
                            BallBar::Bottom(_) => BallBar::Bottom(alpha),
                            BallBar::Ball(m) => match ball_sum(space, &op, c, &m) {
                                Ok(s) => BallBar::Ball(s),
                                Err(MonoidError::OutOfWindow { .. }) => continue,
                                Err(e) => panic!("{e}"),
                            },
                        };
                        let rhs = match (
                            ball_sum(space, &op, c, b1),
                            ball_sum(space, &op, c, b2),
                        ) {
                            (Ok(s1), Ok(s2)) => ball_meet_alpha(space, &s1, &s2, alpha),
                            _ => continue,
                        };
                        dist_checked += 1;
                        if lhs != rhs {
                            failures.push(format!(
                                "{tag}: distributivity at {c:?}, {b1:?}, {b2:?}, alpha {alpha}"
                            ));
                        }
                    }
                }
            }
        }
        if delta_checked == 0 || dist_checked == 0 {
            failures.push(format!("{tag}: no triples landed in the window"));
        }
    }
    report(8, "ball sums respect the delta law and distribute over meets", &failures);
}

#[test]
fn c09_subdominant_matches_chain_oracle() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for case in 0..100 {
        let dist = random_metric(&mut rng, 7);
        let star = match subdominant_dstar(&dist, None) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("case {case}: {e}"));
                continue;
            }
        };
        let n = dist.len();
        for a in 0..n {
            for b in (a + 1)..n {
                let want = oracle_bottleneck(&dist, a, b);
                if star.dist(a, b) != want {
                    failures.push(format!(
                        "case {case}: d*({a},{b}) = {} but chains give {want}",
                        star.dist(a, b)
                    ));
                }
            }
        }
        match subdominant_dstar(&star.matrix(), None) {
            Ok(again) => {
                if again.matrix() != star.matrix() {
                    failures.push(format!("case {case}: not idempotent"));
                }
            }
            Err(e) => failures.push(format!("case {case}: second pass rejected: {e}")),
        }
    }
    report(9, "subdominant ultrametric equals bottleneck chains", &failures);
}

#[test]
fn c10_finite_divisibility_sanity() {
    let mut failures = Vec::new();
    for (name, space) in corpus() {
        if space.len() < 2 || space.len() > 5 {
            continue;
        }
        match check_divisible(&space, &space, 2, SearchMode::Exhaustive) {
            Ok(DivisibilityVerdict::Divisible { witness }) => {
                // re-verify the witness from first principles
                for part in witness.parts() {
                    if part.is_empty() {
                        continue;
                    }
                    let sub = space.restrict(&part);
                    if embed::find_isometric_embedding(&space, &sub).is_some() {
                        failures.push(format!("{name}: witness part holds a copy"));
                    }
                }
            }
            Ok(v) => failures.push(format!("{name}: expected a witness, got {v:?}")),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    let six = ultv_approx(
        &SpectrumSet::from_values([Rat::zero(), Rat::int(1)]),
        6,
    )
    .expect("valid spectrum");
    let triangle = fixtures::equilateral(3, Rat::int(1));
    match check_divisible(&six, &triangle, 2, SearchMode::Exhaustive) {
        Ok(DivisibilityVerdict::Indivisible) => {}
        other => failures.push(format!("pigeonhole case: {other:?}")),
    }
    report(10, "small spaces split against themselves, pigeonhole resists", &failures);
}

#[test]
fn c11_scheme_criteria_and_single_mutations() {
    let mut failures = Vec::new();
    for levels in [
        vec![Rat::int(1)],
        vec![Rat::int(2), Rat::int(1)],
        vec![Rat::int(4), Rat::int(2), Rat::int(1)],
    ] {
        let spec = LevelSpec::unbounded(levels.clone()).expect("valid levels");
        let rep = check_scheme_criteria(&uniform_scheme(&spec));
        if !(rep.singleton_extension && rep.well_founded && rep.all_unbounded && rep.up_directed)
            || !rep.satisfies_all
        {
            failures.push(format!("uniform {levels:?}: {rep:?}"));
        }
    }

    // a single finite degree flips exactly the degree condition
    let leaf = SchemeNode::leaf();
    let inner = SchemeNode::internal(Rat::int(1), Degree::Finite(3), vec![leaf]);
    let root = SchemeNode::internal(Rat::int(2), Degree::Unbounded, vec![inner]);
    let rep = check_scheme_criteria(&TreeScheme::new(root).expect("valid scheme"));
    if rep.all_unbounded
        || !rep.singleton_extension
        || !rep.well_founded
        || !rep.up_directed
        || rep.satisfies_all
    {
        failures.push(format!("finite-degree mutant: {rep:?}"));
    }

    // incomparable sibling spectra flip exactly up-directedness
    let sib1 = SchemeNode::internal(Rat::int(1), Degree::Unbounded, vec![]);
    let sib2 = SchemeNode::internal(Rat::int(2), Degree::Unbounded, vec![]);
    let root = SchemeNode::internal(Rat::int(3), Degree::Unbounded, vec![sib1, sib2]);
    let rep = check_scheme_criteria(&TreeScheme::new(root).expect("valid scheme"));
    if rep.up_directed
        || !rep.singleton_extension
        || !rep.well_founded
        || !rep.all_unbounded
        || rep.satisfies_all
    {
        failures.push(format!("sibling mutant: {rep:?}"));
    }
    report(11, "scheme criteria pass uniformly and flip one at a time", &failures);
}

#[test]
fn c12_reports_are_byte_identical_across_runs() {
    let mut failures = Vec::new();
    let battery = || -> String {
        let mut out = String::new();
        for (levels, width) in word_configs() {
            let rep = run_check(&levels, width, 11).expect("suite runs");
            out.push_str(&serde_json::to_string(&rep).expect("serializes"));
            out.push('\n');
        }
        // a window large enough to force seeded sampling
        let rep = run_check(&[Rat::int(2), Rat::int(1)], 5, 11).expect("suite runs");
        out.push_str(&serde_json::to_string(&rep).expect("serializes"));
        out.push('\n');
        let verdict = check_divisible(
            &fixtures::two_sons(),
            &fixtures::t3(),
            2,
            SearchMode::Sampled { samples: 500, seed: 11 },
        )
        .expect("sampled run");
        out.push_str(&serde_json::to_string(&verdict).expect("serializes"));
        out.push('\n');
        let star = subdominant_dstar(
            &random_metric(&mut ChaCha8Rng::seed_from_u64(11), 7),
            None,
        )
        .expect("metric");
        out.push_str(&json::print_space(&star));
        out.push('\n');
        let rep = embed::check_extension_properties(&fixtures::two_sons());
        out.push_str(&serde_json::to_string(&rep).expect("serializes"));
        out.push('\n');
        out
    };
    let first = battery();
    let second = battery();
    if first != second {
        failures.push("reports differ between identically seeded runs".to_string());
    }
    if first.is_empty() {
        failures.push("battery produced no output".to_string());
    }
    report(12, "identically seeded runs emit identical bytes", &failures);
}
