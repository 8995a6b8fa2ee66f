//! The path extension of a finite ultrametric space.
//!
//! An alpha-path over a host space is a down-directed family of nerve
//! balls, represented canonically by its unique pure generating
//! sequence: strictly decreasing diameters, consecutive balls
//! incomparable, first diameter below alpha. Paths of a common alpha
//! carry a partial order, a greatest-lower-bound operation, and the
//! induced distance d(p, q) = diameter(inf(p, q)), which makes the set
//! of (alpha, 0)-paths an ultrametric space extending the host.

use thiserror::Error;

use crate::rat::{ExtRat, Rat};
use crate::space::{Ball, Space};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("generating set is empty")]
    EmptyGenerators,
    #[error("generators are not slim: two balls share diameter {0}")]
    NotSlim(Rat),
    #[error("not a ball of the host nerve: {0}")]
    NotANerveBall(String),
    #[error("ball diameter {diam} is not below alpha {alpha}")]
    DiamNotBelowAlpha { diam: Rat, alpha: ExtRat },
    #[error("alpha values differ: {0} vs {1}")]
    AlphaMismatch(ExtRat, ExtRat),
    #[error("beta {beta} must be below alpha {alpha}")]
    BetaNotBelowAlpha { beta: Rat, alpha: ExtRat },
    #[error("radius {0} is not realized on this path")]
    UnrealizedRadius(Rat),
}

/// An alpha-path in canonical form. Equality, ordering and hashing go
/// through the pure sequence, which is unique per path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlphaPath {
    alpha: ExtRat,
    pure: Vec<Ball>,
}

impl AlphaPath {
    pub fn alpha(&self) -> ExtRat {
        self.alpha
    }

    pub fn pure(&self) -> &[Ball] {
        &self.pure
    }

    /// Number of balls in the pure sequence.
    pub fn len(&self) -> usize {
        self.pure.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The largest ball of the pure sequence.
    pub fn init(&self) -> &Ball {
        &self.pure[0]
    }

    /// The smallest ball of the pure sequence.
    pub fn last(&self) -> &Ball {
        self.pure.last().expect("pure sequence is non-empty")
    }

    /// Diameter of the path: the least represented ball diameter.
    pub fn delta(&self) -> Rat {
        self.last().diameter()
    }

    /// Diameter of the init ball.
    pub fn mu(&self) -> Rat {
        self.init().diameter()
    }

    /// The represented set: every nerve ball C containing some B_i with
    /// diameter(C) below the previous ball's diameter (alpha for B_0).
    /// Sorted by decreasing diameter, then least point.
    pub fn covered(&self, space: &Space) -> Vec<Ball> {
        let nerve = space.nerve();
        let mut bound = self.alpha;
        let mut out = Vec::new();
        for b in &self.pure {
            for c in &nerve {
                if ExtRat::finite(c.diameter()) < bound && b.is_subset_of(c) {
                    out.push(c.clone());
                }
            }
            bound = ExtRat::finite(b.diameter());
        }
        out.sort_by(|a, b| {
            b.diameter().cmp(&a.diameter()).then_with(|| a.least_point().cmp(&b.least_point()))
        });
        out.dedup();
        out
    }
}

/// A path or the formal bottom element below all paths of its alpha.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathBar {
    Bottom(ExtRat),
    Path(AlphaPath),
}

impl PathBar {
    pub fn alpha(&self) -> ExtRat {
        match self {
            PathBar::Bottom(a) => *a,
            PathBar::Path(p) => p.alpha(),
        }
    }

    /// Path diameter; alpha itself for the bottom element.
    pub fn delta(&self) -> ExtRat {
        match self {
            PathBar::Bottom(a) => *a,
            PathBar::Path(p) => ExtRat::finite(p.delta()),
        }
    }

    pub fn as_path(&self) -> Option<&AlphaPath> {
        match self {
            PathBar::Bottom(_) => None,
            PathBar::Path(p) => Some(p),
        }
    }
}

/// Drops every generator comparable with its successor (the successor
/// is always the smaller ball), yielding the pure sequence. Input must
/// be sorted by strictly decreasing diameter.
fn reduce_to_pure(mut balls: Vec<Ball>) -> Vec<Ball> {
    let mut i = 0;
    while i + 1 < balls.len() {
        if balls[i + 1].is_subset_of(&balls[i]) {
            balls.remove(i);
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }
    balls
}

/// Builds a path from balls already known to belong to the nerve with
/// diameters below alpha; sorts, drops duplicates and reduces.
pub(crate) fn assemble(alpha: ExtRat, mut balls: Vec<Ball>) -> AlphaPath {
    balls.sort_by(|a, b| b.diameter().cmp(&a.diameter()));
    balls.dedup();
    debug_assert!(!balls.is_empty());
    debug_assert!(balls.windows(2).all(|w| w[0].diameter() > w[1].diameter()));
    AlphaPath { alpha, pure: reduce_to_pure(balls) }
}

/// The path generated by a slim set of nerve balls whose diameters lie
/// below `alpha`.
pub fn path_from_slim(
    space: &Space,
    gens: &[Ball],
    alpha: ExtRat,
) -> Result<AlphaPath, PathError> {
    if gens.is_empty() {
        return Err(PathError::EmptyGenerators);
    }
    let mut balls = gens.to_vec();
    balls.sort_by(|a, b| b.diameter().cmp(&a.diameter()));
    for w in balls.windows(2) {
        if w[0].diameter() == w[1].diameter() && w[0] != w[1] {
            return Err(PathError::NotSlim(w[0].diameter()));
        }
    }
    balls.dedup();
    for b in &balls {
        if !space.is_nerve_ball(b) {
            return Err(PathError::NotANerveBall(space.ball_label(b)));
        }
        if ExtRat::finite(b.diameter()) >= alpha {
            return Err(PathError::DiamNotBelowAlpha { diam: b.diameter(), alpha });
        }
    }
    Ok(AlphaPath { alpha, pure: reduce_to_pure(balls) })
}

/// The path with pure sequence ({x}): every ball around x below alpha.
pub fn phi(space: &Space, x: usize, alpha: ExtRat) -> AlphaPath {
    space.check_point(x).expect("point in range");
    AlphaPath { alpha, pure: vec![space.closed_ball(x, Rat::zero())] }
}

/// Order on paths of a common alpha: p is below q when p's pure
/// sequence is an initial segment of q's except that p's final ball may
/// properly contain its counterpart.
pub fn path_leq(p: &AlphaPath, q: &AlphaPath) -> Result<bool, PathError> {
    if p.alpha != q.alpha {
        return Err(PathError::AlphaMismatch(p.alpha, q.alpha));
    }
    let n = p.pure.len();
    if n > q.pure.len() {
        return Ok(false);
    }
    if p.pure[..n - 1] != q.pure[..n - 1] {
        return Ok(false);
    }
    Ok(q.pure[n - 1].is_subset_of(&p.pure[n - 1]))
}

pub fn path_bar_leq(p: &PathBar, q: &PathBar) -> Result<bool, PathError> {
    if p.alpha() != q.alpha() {
        return Err(PathError::AlphaMismatch(p.alpha(), q.alpha()));
    }
    match (p, q) {
        (PathBar::Bottom(_), _) => Ok(true),
        (PathBar::Path(_), PathBar::Bottom(_)) => Ok(false),
        (PathBar::Path(a), PathBar::Path(b)) => path_leq(a, b),
    }
}

/// Greatest lower bound of two paths of a common alpha. Comparable
/// pairs return the smaller path. Otherwise, equal init balls recurse
/// on the tails below the init diameter; distinct init balls span the
/// least ball containing both, which is the infimum when its diameter
/// is still below alpha and bottom otherwise.
pub fn path_infimum(space: &Space, p: &AlphaPath, q: &AlphaPath) -> Result<PathBar, PathError> {
    if p.alpha != q.alpha {
        return Err(PathError::AlphaMismatch(p.alpha, q.alpha));
    }
    if path_leq(p, q)? {
        return Ok(PathBar::Path(p.clone()));
    }
    if path_leq(q, p)? {
        return Ok(PathBar::Path(q.clone()));
    }
    if p.init() == q.init() {
        let head = p.init().clone();
        let beta = ExtRat::finite(head.diameter());
        // incomparable paths with equal inits have tails on both sides
        let pt = AlphaPath { alpha: beta, pure: p.pure[1..].to_vec() };
        let qt = AlphaPath { alpha: beta, pure: q.pure[1..].to_vec() };
        match path_infimum(space, &pt, &qt)? {
            PathBar::Bottom(_) => Ok(PathBar::Path(AlphaPath { alpha: p.alpha, pure: vec![head] })),
            PathBar::Path(rest) => {
                let mut gens = vec![head];
                gens.extend(rest.pure.iter().cloned());
                Ok(PathBar::Path(path_from_slim(space, &gens, p.alpha)?))
            }
        }
    } else {
        let mut pts: Vec<usize> =
            p.init().points().iter().chain(q.init().points()).copied().collect();
        pts.sort_unstable();
        pts.dedup();
        let span = space.spanned_ball(&pts);
        if ExtRat::finite(span.diameter()) < p.alpha {
            Ok(PathBar::Path(AlphaPath { alpha: p.alpha, pure: vec![span] }))
        } else {
            Ok(PathBar::Bottom(p.alpha))
        }
    }
}

pub fn path_bar_infimum(
    space: &Space,
    p: &PathBar,
    q: &PathBar,
) -> Result<PathBar, PathError> {
    if p.alpha() != q.alpha() {
        return Err(PathError::AlphaMismatch(p.alpha(), q.alpha()));
    }
    match (p, q) {
        (PathBar::Bottom(a), _) | (_, PathBar::Bottom(a)) => Ok(PathBar::Bottom(*a)),
        (PathBar::Path(a), PathBar::Path(b)) => path_infimum(space, a, b),
    }
}

/// d(p, q) = diameter of the infimum; alpha itself when the infimum is
/// the bottom element.
pub fn path_distance(space: &Space, p: &AlphaPath, q: &AlphaPath) -> Result<ExtRat, PathError> {
    Ok(path_infimum(space, p, q)?.delta())
}

/// All (alpha, beta)-paths: pure sequences over the nerve with first
/// diameter below alpha and final diameter exactly beta, in
/// lexicographic order of nerve indices.
pub fn enumerate_paths(
    space: &Space,
    alpha: ExtRat,
    beta: Rat,
) -> Result<Vec<AlphaPath>, PathError> {
    if ExtRat::finite(beta) >= alpha {
        return Err(PathError::BetaNotBelowAlpha { beta, alpha });
    }
    let nerve = space.nerve();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();

    fn extend(
        space: &Space,
        nerve: &[Ball],
        stack: &mut Vec<usize>,
        alpha: ExtRat,
        beta: Rat,
        out: &mut Vec<AlphaPath>,
    ) {
        let last = &nerve[*stack.last().expect("stack is non-empty")];
        if last.diameter() == beta {
            let pure: Vec<Ball> = stack.iter().map(|&i| nerve[i].clone()).collect();
            out.push(AlphaPath { alpha, pure });
            return;
        }
        for (i, c) in nerve.iter().enumerate() {
            if c.diameter() < last.diameter()
                && c.diameter() >= beta
                && c.is_disjoint_from(last)
            {
                stack.push(i);
                extend(space, nerve, stack, alpha, beta, out);
                stack.pop();
            }
        }
    }

    for (i, b) in nerve.iter().enumerate() {
        if ExtRat::finite(b.diameter()) < alpha && b.diameter() >= beta {
            stack.push(i);
            extend(space, &nerve, &mut stack, alpha, beta, &mut out);
            stack.pop();
        }
    }
    Ok(out)
}

/// The (alpha, 0)-paths together with their distance matrix as a
/// space. Point labels concatenate the pure-sequence ball labels.
pub fn path_space(space: &Space, alpha: ExtRat) -> Result<(Vec<AlphaPath>, Space), PathError> {
    let paths = enumerate_paths(space, alpha, Rat::zero())?;
    let n = paths.len();
    let mut dist = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = match path_distance(space, &paths[i], &paths[j])? {
                ExtRat::Finite(d) => d,
                ExtRat::Infinity => unreachable!("distinct (alpha,0)-paths meet below alpha"),
            };
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let labels = paths
        .iter()
        .map(|p| {
            let parts: Vec<String> = p.pure.iter().map(|b| space.ball_label(b)).collect();
            parts.join("")
        })
        .collect();
    let out = Space::new(dist, Some(labels)).expect("path distance is ultrametric");
    Ok((paths, out))
}

/// The part of `p` strictly above radius r, as an (alpha, r)-path. The
/// cut ball is the closed r-ball around the first pure ball smaller
/// than r; the radius must be realized there.
pub fn truncate_above(space: &Space, p: &AlphaPath, r: Rat) -> Result<AlphaPath, PathError> {
    if !r.is_positive() {
        return Err(PathError::UnrealizedRadius(r));
    }
    let k = match p.pure.iter().position(|b| b.diameter() < r) {
        Some(k) => k,
        None => return Err(PathError::UnrealizedRadius(r)),
    };
    // no cut ball needed when the kept prefix already ends at radius r
    if k > 0 && p.pure[k - 1].diameter() == r {
        return Ok(AlphaPath { alpha: p.alpha, pure: p.pure[..k].to_vec() });
    }
    let cut = space.closed_ball(p.pure[k].least_point(), r);
    if cut.diameter() != r {
        return Err(PathError::UnrealizedRadius(r));
    }
    let mut pure: Vec<Ball> = p.pure[..k].to_vec();
    pure.push(cut);
    Ok(AlphaPath { alpha: p.alpha, pure })
}

/// The part of `p` strictly below radius r, as an (r, delta(p))-path.
pub fn truncate_below(p: &AlphaPath, r: Rat) -> Result<AlphaPath, PathError> {
    let k = match p.pure.iter().position(|b| b.diameter() < r) {
        Some(k) => k,
        None => return Err(PathError::UnrealizedRadius(r)),
    };
    Ok(AlphaPath { alpha: ExtRat::finite(r), pure: p.pure[k..].to_vec() })
}

/// The ball of diameter r around `p` in the path space: the upper
/// truncation extended by every (r, 0)-path. Requires r to be realized
/// among the diameters represented by `p`.
pub fn path_ball(space: &Space, p: &AlphaPath, r: Rat) -> Result<Vec<AlphaPath>, PathError> {
    let upper = truncate_above(space, p, r)?;
    let tails = enumerate_paths(space, ExtRat::finite(r), Rat::zero())?;
    let mut out = Vec::with_capacity(tails.len());
    for tail in &tails {
        let mut gens = upper.pure.clone();
        gens.extend(tail.pure.iter().cloned());
        out.push(path_from_slim(space, &gens, p.alpha)?);
    }
    Ok(out)
}

/// The canonical isometry between the r-balls around p1 and p2 in the
/// path space: swap the upper truncation, keep the tail. Returns the
/// members of the first ball paired with their images in the second.
pub fn path_ball_isometry(
    space: &Space,
    p1: &AlphaPath,
    p2: &AlphaPath,
    r: Rat,
) -> Result<Vec<(AlphaPath, AlphaPath)>, PathError> {
    if p1.alpha != p2.alpha {
        return Err(PathError::AlphaMismatch(p1.alpha, p2.alpha));
    }
    let upper2 = truncate_above(space, p2, r)?;
    let members = path_ball(space, p1, r)?;
    let mut pairs = Vec::with_capacity(members.len());
    for q in members {
        let tail = truncate_below(&q, r)?;
        let mut gens = upper2.pure.clone();
        gens.extend(tail.pure.iter().cloned());
        let image = path_from_slim(space, &gens, p2.alpha)?;
        pairs.push((q, image));
    }
    Ok(pairs)
}
