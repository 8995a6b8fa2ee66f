//! Weighted words, their additive monoid, and its lift to balls and paths.
//!
//! A word over a descending chain of positive levels `w_0 > w_1 > ...` is a
//! tuple of natural coordinates; the distance between two distinct words is
//! the level value at their first differing coordinate. Pointwise addition
//! is compatible with this distance, which lets sums descend to balls
//! (`ball_sum`) and to paths (`path_sum`).
//!
//! Finite windows: a `WordHost` materializes all words with coordinates
//! below a width cap. Addition on the host is partial; out-of-window
//! results are reported, never wrapped or clamped.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::path::{self, AlphaPath, PathError};
use crate::rat::{ExtRat, Rat};
use crate::space::{Ball, Space};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("level list must be non-empty")]
    EmptyLevels,
    #[error("levels must be strictly decreasing: {prev} then {next}")]
    LevelsNotDecreasing { prev: Rat, next: Rat },
    #[error("level {0} is not positive")]
    NonPositiveLevel(Rat),
    #[error("word has {got} coordinates, expected {expected}")]
    WordLength { expected: usize, got: usize },
    #[error("duplicate word in word list")]
    DuplicateWord,
    #[error("empty word list")]
    NoWords,
    #[error("width {0} is below 2")]
    WidthTooSmall(u32),
    #[error("word host would have {0} points; cap is 65536")]
    TooLarge(u128),
}

/// Validates a strictly decreasing list of positive level values.
pub fn validate_levels(levels: &[Rat]) -> Result<(), WordError> {
    if levels.is_empty() {
        return Err(WordError::EmptyLevels);
    }
    for w in levels {
        if !w.is_positive() {
            return Err(WordError::NonPositiveLevel(*w));
        }
    }
    for pair in levels.windows(2) {
        if pair[0] <= pair[1] {
            return Err(WordError::LevelsNotDecreasing { prev: pair[0], next: pair[1] });
        }
    }
    Ok(())
}

/// Pointwise sum of two equal-length words.
pub fn add_words(f: &[u32], g: &[u32]) -> Result<Vec<u32>, WordError> {
    if f.len() != g.len() {
        return Err(WordError::WordLength { expected: f.len(), got: g.len() });
    }
    Ok(f.iter().zip(g).map(|(a, b)| a + b).collect())
}

/// Word distance: the level value at the first differing coordinate,
/// zero for equal words.
pub fn word_distance(levels: &[Rat], f: &[u32], g: &[u32]) -> Rat {
    debug_assert_eq!(levels.len(), f.len());
    debug_assert_eq!(levels.len(), g.len());
    for (mu, (a, b)) in f.iter().zip(g).enumerate() {
        if a != b {
            return levels[mu];
        }
    }
    Rat::zero()
}

/// Renders a word as `(b0,b1,...)`; the empty word renders as `()`.
pub fn word_label(word: &[u32]) -> String {
    let coords: Vec<String> = word.iter().map(u32::to_string).collect();
    format!("({})", coords.join(","))
}

/// The space on an explicit set of words under the word distance.
/// Words must be distinct and of length `levels.len()`.
pub fn word_space(levels: &[Rat], words: &[Vec<u32>]) -> Result<Space, WordError> {
    if words.is_empty() {
        return Err(WordError::NoWords);
    }
    if !levels.is_empty() {
        validate_levels(levels)?;
    }
    let mut seen = BTreeSet::new();
    for w in words {
        if w.len() != levels.len() {
            return Err(WordError::WordLength { expected: levels.len(), got: w.len() });
        }
        if !seen.insert(w.clone()) {
            return Err(WordError::DuplicateWord);
        }
    }
    let n = words.len();
    let mut dist = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = word_distance(levels, &words[i], &words[j]);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let labels = words.iter().map(|w| word_label(w)).collect();
    Ok(Space::new(dist, Some(labels)).expect("word distances are ultrametric"))
}

/// All words with coordinate `mu` ranging over `0..caps[mu]`, in
/// lexicographic order (leftmost coordinate most significant).
pub fn enumerate_words(caps: &[u32]) -> Result<Vec<Vec<u32>>, WordError> {
    let mut total: u128 = 1;
    for &c in caps {
        total = total.saturating_mul(c.max(1) as u128);
        if total > 65536 {
            return Err(WordError::TooLarge(total));
        }
    }
    let mut words = vec![vec![0u32; caps.len()]];
    for (mu, &cap) in caps.iter().enumerate() {
        let prev = std::mem::take(&mut words);
        for w in prev {
            for v in 0..cap.max(1) {
                let mut next = w.clone();
                next[mu] = v;
                words.push(next);
            }
        }
        words.sort();
    }
    words.sort();
    Ok(words)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonoidError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("sum of points {x} and {y} leaves the window")]
    OutOfWindow { x: usize, y: usize },
    #[error("operands have different alpha")]
    AlphaMismatch,
    #[error("operands have diameters {p} and {q}, expected equal")]
    DeltaMismatch { p: Rat, q: Rat },
    #[error("operation is not compatible at points z={z}, x={x}, y={y}")]
    Incompatible { z: usize, x: usize, y: usize },
    #[error("neutral element fails at point {0}")]
    BadNeutral(usize),
}

/// The space of all words below a coordinate cap, with its levels and
/// the partial pointwise addition inherited from the full word monoid.
#[derive(Debug, Clone)]
pub struct WordHost {
    levels: Vec<Rat>,
    width: u32,
    words: Vec<Vec<u32>>,
    space: Space,
}

impl WordHost {
    pub fn new(levels: &[Rat], width: u32) -> Result<WordHost, WordError> {
        validate_levels(levels)?;
        if width < 2 {
            return Err(WordError::WidthTooSmall(width));
        }
        let caps = vec![width; levels.len()];
        let words = enumerate_words(&caps)?;
        let space = word_space(levels, &words)?;
        Ok(WordHost { levels: levels.to_vec(), width, words, space })
    }

    pub fn levels(&self) -> &[Rat] {
        &self.levels
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn words(&self) -> &[Vec<u32>] {
        &self.words
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    /// Index of the zero word, the additive neutral.
    pub fn zero(&self) -> usize {
        0
    }

    pub fn word_index(&self, w: &[u32]) -> Option<usize> {
        self.words.binary_search_by(|x| x.as_slice().cmp(w)).ok()
    }

    /// Pointwise sum by index; None when a coordinate reaches the cap.
    pub fn add(&self, i: usize, j: usize) -> Option<usize> {
        let sum = add_words(&self.words[i], &self.words[j]).expect("host words share length");
        if sum.iter().any(|&c| c >= self.width) {
            return None;
        }
        self.word_index(&sum)
    }

    pub fn point_op(&self) -> PointOp {
        let n = self.words.len();
        let mut table = vec![vec![None; n]; n];
        for (i, row) in table.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.add(i, j);
            }
        }
        PointOp { table, neutral: Some(self.zero()) }
    }
}

/// The canonical embedding of a space into a word host: levels are the
/// nonzero spectrum values in decreasing order, and the coordinate of a
/// point at level r is the index of its open r-ball among the open
/// r-balls partitioning its closed r-ball, ordered by least member.
/// Point 0 maps to the zero word.
pub fn embed_into_omega(space: &Space) -> (Vec<Rat>, Vec<Vec<u32>>) {
    let mut levels: Vec<Rat> =
        space.spectrum().iter().copied().filter(Rat::is_positive).collect();
    levels.sort();
    levels.reverse();
    let words = (0..space.len())
        .map(|x| {
            levels
                .iter()
                .map(|&r| {
                    let ball = space.closed_ball(x, r);
                    let mut seen = vec![false; space.len()];
                    let mut idx = 0u32;
                    for &m in ball.points() {
                        if seen[m] {
                            continue;
                        }
                        let class = space.open_ball_points(m, r);
                        if class.contains(&x) {
                            return idx;
                        }
                        for &c in &class {
                            seen[c] = true;
                        }
                        idx += 1;
                    }
                    unreachable!("x belongs to some class of its own ball")
                })
                .collect()
        })
        .collect();
    (levels, words)
}

/// All sums of at most k members of X (with repetition), plus the zero
/// word, in lexicographic order. Every member of X must have `len`
/// coordinates.
pub fn star_closure(len: usize, x: &[Vec<u32>], k: u32) -> Result<Vec<Vec<u32>>, WordError> {
    for w in x {
        if w.len() != len {
            return Err(WordError::WordLength { expected: len, got: w.len() });
        }
    }
    let mut acc: BTreeSet<Vec<u32>> = BTreeSet::new();
    acc.insert(vec![0; len]);
    for _ in 0..k {
        let prev: Vec<Vec<u32>> = acc.iter().cloned().collect();
        for s in &prev {
            for w in x {
                acc.insert(add_words(s, w)?);
            }
        }
    }
    Ok(acc.into_iter().collect())
}

/// Longest common prefix of two words.
pub fn word_meet(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).take_while(|(x, y)| x == y).map(|(x, _)| *x).collect()
}

/// The set of pairwise meets of X in the prefix tree, sorted. Contains
/// X itself (meets of equal members).
pub fn meet_tree(x: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut out = BTreeSet::new();
    for a in x {
        for b in x {
            out.insert(word_meet(a, b));
        }
    }
    out.into_iter().collect()
}

/// Length of the longest chain of strict prefixes within `t`.
pub fn max_prefix_chain(t: &[Vec<u32>]) -> usize {
    let set: BTreeSet<&[u32]> = t.iter().map(Vec::as_slice).collect();
    let mut best = 0;
    for w in &set {
        let chain = (0..w.len()).filter(|&k| set.contains(&w[..k])).count() + 1;
        best = best.max(chain);
    }
    best
}

/// A partial binary operation on the points of a space, given by
/// table, together with an optional neutral element.
#[derive(Debug, Clone)]
pub struct PointOp {
    table: Vec<Vec<Option<usize>>>,
    neutral: Option<usize>,
}

impl PointOp {
    pub fn new(table: Vec<Vec<Option<usize>>>, neutral: Option<usize>) -> PointOp {
        PointOp { table, neutral }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn neutral(&self) -> Option<usize> {
        self.neutral
    }

    pub fn apply(&self, x: usize, y: usize) -> Option<usize> {
        self.table[x][y]
    }

    /// Checks compatibility on every defined triple: translating two
    /// points by a common third, on either side, preserves distance.
    /// Also checks the neutral element where declared.
    pub fn validate(&self, space: &Space) -> Result<(), MonoidError> {
        let n = self.table.len();
        for z in 0..n {
            for x in 0..n {
                for y in 0..n {
                    if let (Some(a), Some(b)) = (self.apply(z, x), self.apply(z, y)) {
                        if space.dist(a, b) != space.dist(x, y) {
                            return Err(MonoidError::Incompatible { z, x, y });
                        }
                    }
                    if let (Some(a), Some(b)) = (self.apply(x, z), self.apply(y, z)) {
                        if space.dist(a, b) != space.dist(x, y) {
                            return Err(MonoidError::Incompatible { z, x, y });
                        }
                    }
                }
            }
        }
        if let Some(e) = self.neutral {
            for x in 0..n {
                if self.apply(e, x) != Some(x) || self.apply(x, e) != Some(x) {
                    return Err(MonoidError::BadNeutral(x));
                }
            }
        }
        Ok(())
    }
}

/// Sum of two nerve balls: the ball around the sum of their least
/// points whose radius is the larger diameter. Errors when that
/// representative sum is undefined in the window.
pub fn ball_sum(
    space: &Space,
    op: &PointOp,
    b1: &Ball,
    b2: &Ball,
) -> Result<Ball, MonoidError> {
    let x = b1.least_point();
    let y = b2.least_point();
    let rep = op.apply(x, y).ok_or(MonoidError::OutOfWindow { x, y })?;
    Ok(space.closed_ball(rep, b1.diameter().max(b2.diameter())))
}

/// A nerve ball or the formal bottom, mirroring the path bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BallBar {
    Bottom(ExtRat),
    Ball(Ball),
}

/// Meet of two nerve balls relative to alpha: the least nerve ball
/// containing both when its diameter stays below alpha, else bottom.
pub fn ball_meet_alpha(space: &Space, b1: &Ball, b2: &Ball, alpha: ExtRat) -> BallBar {
    let mut pts: Vec<usize> = b1.points().iter().chain(b2.points()).copied().collect();
    pts.sort_unstable();
    pts.dedup();
    let span = space.spanned_ball(&pts);
    if ExtRat::finite(span.diameter()) < alpha {
        BallBar::Ball(span)
    } else {
        BallBar::Bottom(alpha)
    }
}

/// The member of a slim set with the largest diameter not above `a`.
pub fn slim_select<'a>(gens: &'a [Ball], a: Rat) -> Option<&'a Ball> {
    gens.iter().filter(|b| b.diameter() <= a).max_by_key(|b| b.diameter())
}

/// Sum of two paths given by arbitrary slim generating sets over a
/// common alpha: for every value in the union of the diameter spectra,
/// sum the selected balls; the results generate the output.
pub fn path_sum_from_gens(
    space: &Space,
    op: &PointOp,
    gens_p: &[Ball],
    gens_q: &[Ball],
    alpha: ExtRat,
) -> Result<AlphaPath, MonoidError> {
    let mut u: BTreeSet<Rat> = gens_p.iter().map(Ball::diameter).collect();
    u.extend(gens_q.iter().map(Ball::diameter));
    let mut out = Vec::with_capacity(u.len());
    for &a in &u {
        let bp = slim_select(gens_p, a).expect("common minimum diameter");
        let bq = slim_select(gens_q, a).expect("common minimum diameter");
        out.push(ball_sum(space, op, bp, bq)?);
    }
    Ok(path::assemble(alpha, out))
}

/// Sum of two paths of a common alpha and a common diameter.
pub fn path_sum(
    space: &Space,
    op: &PointOp,
    p: &AlphaPath,
    q: &AlphaPath,
) -> Result<AlphaPath, MonoidError> {
    if p.alpha() != q.alpha() {
        return Err(MonoidError::AlphaMismatch);
    }
    if p.delta() != q.delta() {
        return Err(MonoidError::DeltaMismatch { p: p.delta(), q: q.delta() });
    }
    path_sum_from_gens(space, op, p.pure(), q.pure(), p.alpha())
}

/// Outcome counters for one law of the invariant suite. `skipped`
/// counts instances whose operands or results leave the window.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct LawStat {
    pub checked: u64,
    pub skipped: u64,
    pub ok: bool,
}

impl LawStat {
    fn new() -> LawStat {
        LawStat { checked: 0, skipped: 0, ok: true }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct MonoidCheckReport {
    pub levels: Vec<Rat>,
    pub width: u32,
    pub points: usize,
    pub paths: usize,
    pub seed: u64,
    pub word_compatibility: LawStat,
    pub pointwise_bound: LawStat,
    pub ball_delta_law: LawStat,
    pub ball_monotonicity: LawStat,
    pub ball_distributivity: LawStat,
    pub slim_spec_union: LawStat,
    pub path_associative: LawStat,
    pub path_commutative: LawStat,
    pub path_neutral: LawStat,
    pub phi_homomorphism: LawStat,
    pub path_translation: LawStat,
    pub point_translation: LawStat,
    pub ball_isometries: LawStat,
    pub all_ok: bool,
}

const EXHAUSTIVE_BUDGET: u64 = 1 << 20;
const SAMPLE_SIZE: u64 = 100_000;

/// Runs the full invariant suite on a word host window. Scans are
/// exhaustive when their instance count fits the budget, otherwise
/// uniformly sampled with the given seed; verdicts never depend on the
/// seed, only on which instances get visited.
pub fn run_check(levels: &[Rat], width: u32, seed: u64) -> Result<MonoidCheckReport, MonoidError> {
    let host = WordHost::new(levels, width)?;
    let space = host.space();
    let op = host.point_op();
    let n = space.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut word_compatibility = LawStat::new();
    for z in 0..n {
        for x in 0..n {
            for y in 0..n {
                let mut sides = 0;
                if let (Some(a), Some(b)) = (op.apply(z, x), op.apply(z, y)) {
                    word_compatibility.ok &= space.dist(a, b) == space.dist(x, y);
                    sides += 1;
                }
                if let (Some(a), Some(b)) = (op.apply(x, z), op.apply(y, z)) {
                    word_compatibility.ok &= space.dist(a, b) == space.dist(x, y);
                    sides += 1;
                }
                if sides > 0 {
                    word_compatibility.checked += 1;
                } else {
                    word_compatibility.skipped += 1;
                }
            }
        }
    }

    let mut pointwise_bound = LawStat::new();
    {
        let visit = |quad: [usize; 4], stat: &mut LawStat| {
            let [x, xt, y, yt] = quad;
            match (op.apply(x, xt), op.apply(y, yt)) {
                (Some(a), Some(b)) => {
                    stat.checked += 1;
                    stat.ok &= space.dist(a, b) <= space.dist(x, y).max(space.dist(xt, yt));
                }
                _ => stat.skipped += 1,
            }
        };
        let total = (n as u64).pow(4);
        if total <= EXHAUSTIVE_BUDGET {
            for x in 0..n {
                for xt in 0..n {
                    for y in 0..n {
                        for yt in 0..n {
                            visit([x, xt, y, yt], &mut pointwise_bound);
                        }
                    }
                }
            }
        } else {
            for _ in 0..SAMPLE_SIZE {
                let quad = [
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                ];
                visit(quad, &mut pointwise_bound);
            }
        }
    }

    let nerve = space.nerve();
    let mut ball_delta_law = LawStat::new();
    for b1 in &nerve {
        for b2 in &nerve {
            match ball_sum(space, &op, b1, b2) {
                Ok(s) => {
                    ball_delta_law.checked += 1;
                    ball_delta_law.ok &= s.diameter() == b1.diameter().max(b2.diameter());
                }
                Err(_) => ball_delta_law.skipped += 1,
            }
        }
    }

    // pairs (inner, outer) with inner contained in outer
    let mut comparable: Vec<(usize, usize)> = Vec::new();
    for i in 0..nerve.len() {
        for j in 0..nerve.len() {
            if nerve[i].is_subset_of(&nerve[j]) {
                comparable.push((i, j));
            }
        }
    }
    let mut ball_monotonicity = LawStat::new();
    for &(a1, a2) in &comparable {
        for &(b1, b2) in &comparable {
            match (
                ball_sum(space, &op, &nerve[a1], &nerve[b1]),
                ball_sum(space, &op, &nerve[a2], &nerve[b2]),
            ) {
                (Ok(small), Ok(big)) => {
                    ball_monotonicity.checked += 1;
                    ball_monotonicity.ok &= small.is_subset_of(&big);
                }
                _ => ball_monotonicity.skipped += 1,
            }
        }
    }

    let mut alphas: Vec<ExtRat> = space
        .spectrum()
        .iter()
        .filter(|r| r.is_positive())
        .map(|&r| ExtRat::finite(r))
        .collect();
    alphas.push(ExtRat::Infinity);
    let mut ball_distributivity = LawStat::new();
    {
        let visit = |c: &Ball, b1: &Ball, b2: &Ball, alpha: ExtRat, stat: &mut LawStat| {
            // the law lives on balls with diameter below alpha
            if ExtRat::finite(c.diameter()) >= alpha
                || ExtRat::finite(b1.diameter()) >= alpha
                || ExtRat::finite(b2.diameter()) >= alpha
            {
                return;
            }
            let lhs = match ball_meet_alpha(space, b1, b2, alpha) {
                BallBar::Bottom(_) => BallBar::Bottom(alpha),
                BallBar::Ball(m) => match ball_sum(space, &op, c, &m) {
                    Ok(s) => BallBar::Ball(s),
                    Err(_) => return stat.skipped += 1,
                },
            };
            let rhs = match (ball_sum(space, &op, c, b1), ball_sum(space, &op, c, b2)) {
                (Ok(s1), Ok(s2)) => ball_meet_alpha(space, &s1, &s2, alpha),
                _ => return stat.skipped += 1,
            };
            stat.checked += 1;
            stat.ok &= lhs == rhs;
        };
        let total = (nerve.len() as u64).pow(3) * alphas.len() as u64;
        if total <= EXHAUSTIVE_BUDGET {
            for c in &nerve {
                for b1 in &nerve {
                    for b2 in &nerve {
                        for &alpha in &alphas {
                            visit(c, b1, b2, alpha, &mut ball_distributivity);
                        }
                    }
                }
            }
        } else {
            for _ in 0..SAMPLE_SIZE {
                let c = &nerve[rng.gen_range(0..nerve.len())];
                let b1 = &nerve[rng.gen_range(0..nerve.len())];
                let b2 = &nerve[rng.gen_range(0..nerve.len())];
                let alpha = alphas[rng.gen_range(0..alphas.len())];
                visit(c, b1, b2, alpha, &mut ball_distributivity);
            }
        }
    }

    let (paths, pspace) = path::path_space(space, ExtRat::Infinity)?;
    let index: BTreeMap<&AlphaPath, usize> = paths.iter().zip(0..).collect();
    let m = paths.len();
    // cache of path sums by index; None marks out-of-window pairs
    let mut sums: Vec<Vec<Option<usize>>> = vec![vec![None; m]; m];
    let mut slim_spec_union = LawStat::new();
    for i in 0..m {
        for j in 0..m {
            match path_sum(space, &op, &paths[i], &paths[j]) {
                Ok(s) => {
                    sums[i][j] = Some(*index.get(&s).expect("window sums stay enumerated"));
                    // the merged generators carry exactly the union of
                    // the two diameter spectra
                    let mut u: BTreeSet<Rat> =
                        paths[i].pure().iter().map(Ball::diameter).collect();
                    u.extend(paths[j].pure().iter().map(Ball::diameter));
                    slim_spec_union.checked += 1;
                    for &a in &u {
                        let bp = slim_select(paths[i].pure(), a).expect("delta is a member");
                        let bq = slim_select(paths[j].pure(), a).expect("delta is a member");
                        let merged = ball_sum(space, &op, bp, bq)
                            .expect("sum defined when the whole path sum is");
                        slim_spec_union.ok &= merged.diameter() == a;
                    }
                }
                Err(MonoidError::OutOfWindow { .. }) => slim_spec_union.skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }

    let mut path_commutative = LawStat::new();
    for i in 0..m {
        for j in 0..m {
            match (sums[i][j], sums[j][i]) {
                (Some(a), Some(b)) => {
                    path_commutative.checked += 1;
                    path_commutative.ok &= a == b;
                }
                (None, None) => path_commutative.skipped += 1,
                _ => {
                    path_commutative.checked += 1;
                    path_commutative.ok = false;
                }
            }
        }
    }

    let zero_path = path::phi(space, host.zero(), ExtRat::Infinity);
    let zero_idx = *index.get(&zero_path).expect("zero path enumerated");
    let mut path_neutral = LawStat::new();
    for (i, row) in sums.iter().enumerate() {
        path_neutral.checked += 1;
        path_neutral.ok &= row[zero_idx] == Some(i) && sums[zero_idx][i] == Some(i);
    }

    let mut path_associative = LawStat::new();
    {
        let visit = |i: usize, j: usize, k: usize, stat: &mut LawStat| {
            let left = sums[i][j].and_then(|ij| sums[ij][k]);
            let right = sums[j][k].and_then(|jk| sums[i][jk]);
            match (left, right) {
                (Some(a), Some(b)) => {
                    stat.checked += 1;
                    stat.ok &= a == b;
                }
                // a one-sided window exit is not a violation
                _ => stat.skipped += 1,
            }
        };
        let total = (m as u64).pow(3);
        if total <= EXHAUSTIVE_BUDGET {
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        visit(i, j, k, &mut path_associative);
                    }
                }
            }
        } else {
            for _ in 0..SAMPLE_SIZE {
                visit(
                    rng.gen_range(0..m),
                    rng.gen_range(0..m),
                    rng.gen_range(0..m),
                    &mut path_associative,
                );
            }
        }
    }

    let mut phi_homomorphism = LawStat::new();
    let phi_idx: Vec<usize> = (0..n)
        .map(|x| *index.get(&path::phi(space, x, ExtRat::Infinity)).expect("phi enumerated"))
        .collect();
    for x in 0..n {
        for y in 0..n {
            match op.apply(x, y) {
                Some(z) => {
                    phi_homomorphism.checked += 1;
                    phi_homomorphism.ok &= sums[phi_idx[x]][phi_idx[y]] == Some(phi_idx[z]);
                }
                None => phi_homomorphism.skipped += 1,
            }
        }
    }

    let mut path_translation = LawStat::new();
    {
        let visit = |j: usize, i1: usize, i2: usize, stat: &mut LawStat| {
            match (sums[j][i1], sums[j][i2]) {
                (Some(a), Some(b)) => {
                    stat.checked += 1;
                    stat.ok &= pspace.dist(a, b) == pspace.dist(i1, i2);
                }
                _ => stat.skipped += 1,
            }
        };
        let total = (m as u64).pow(3);
        if total <= EXHAUSTIVE_BUDGET {
            for j in 0..m {
                for i1 in 0..m {
                    for i2 in 0..m {
                        visit(j, i1, i2, &mut path_translation);
                    }
                }
            }
        } else {
            for _ in 0..SAMPLE_SIZE {
                visit(
                    rng.gen_range(0..m),
                    rng.gen_range(0..m),
                    rng.gen_range(0..m),
                    &mut path_translation,
                );
            }
        }
    }

    // translations embed, and translating grows point spectra
    let mut point_translation = LawStat::new();
    for a in 0..n {
        for b in 0..n {
            match op.apply(a, b) {
                Some(c) => {
                    point_translation.checked += 1;
                    point_translation.ok &=
                        space.point_spectrum(a).is_subset(&space.point_spectrum(c));
                }
                None => point_translation.skipped += 1,
            }
        }
    }

    let mut ball_isometries = LawStat::new();
    {
        let path_nerve = pspace.nerve();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for i in 0..path_nerve.len() {
            for j in 0..path_nerve.len() {
                if path_nerve[i].diameter() == path_nerve[j].diameter()
                    && path_nerve[i].diameter().is_positive()
                {
                    pairs.push((i, j));
                }
            }
        }
        if pairs.len() as u64 > 512 {
            let mut sampled = Vec::with_capacity(512);
            for _ in 0..512 {
                sampled.push(pairs[rng.gen_range(0..pairs.len())]);
            }
            pairs = sampled;
        }
        for (i, j) in pairs {
            let r = path_nerve[i].diameter();
            let p1 = &paths[path_nerve[i].least_point()];
            let p2 = &paths[path_nerve[j].least_point()];
            let mapping = path::path_ball_isometry(space, p1, p2, r)?;
            let mut ok = true;
            let image: BTreeSet<usize> = mapping
                .iter()
                .map(|(_, fq)| *index.get(fq).expect("image path enumerated"))
                .collect();
            let expect: BTreeSet<usize> = path_nerve[j].points().iter().copied().collect();
            ok &= image == expect;
            for (q1, f1) in &mapping {
                for (q2, f2) in &mapping {
                    ok &= pspace.dist(index[q1], index[q2])
                        == pspace.dist(index[f1], index[f2]);
                }
            }
            ball_isometries.checked += 1;
            ball_isometries.ok &= ok;
        }
    }

    let all_ok = word_compatibility.ok
        && pointwise_bound.ok
        && ball_delta_law.ok
        && ball_monotonicity.ok
        && ball_distributivity.ok
        && slim_spec_union.ok
        && path_associative.ok
        && path_commutative.ok
        && path_neutral.ok
        && phi_homomorphism.ok
        && path_translation.ok
        && point_translation.ok
        && ball_isometries.ok;

    Ok(MonoidCheckReport {
        levels: levels.to_vec(),
        width,
        points: n,
        paths: m,
        seed,
        word_compatibility,
        pointwise_bound,
        ball_delta_law,
        ball_monotonicity,
        ball_distributivity,
        slim_spec_union,
        path_associative,
        path_commutative,
        path_neutral,
        phi_homomorphism,
        path_translation,
        point_translation,
        ball_isometries,
        all_ok,
    })
}
