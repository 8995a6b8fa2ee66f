//! Finite ultrametric spaces, their spectra, and the nerve of closed balls.
//!
//! A `Space` is a validated symmetric matrix of exact rational distances
//! satisfying the strong triangle inequality `d(x,z) <= max(d(x,y), d(y,z))`.
//! Closed balls of realized radii form the nerve: a laminar family that,
//! ordered by reverse inclusion, is a ramified tree (every non-singleton
//! ball splits into at least two sons).

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::rat::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpaceError {
    #[error("space must contain at least one point")]
    Empty,
    #[error("distance matrix is not square: row {row} has {got} entries, expected {expected}")]
    NotSquare { row: usize, expected: usize, got: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("d({i},{i}) = {value}, diagonal must be 0")]
    NonzeroDiagonal { i: usize, value: Rat },
    #[error("d({i},{j}) = {dij} but d({j},{i}) = {dji}")]
    Asymmetric { i: usize, j: usize, dij: Rat, dji: Rat },
    #[error("d({i},{j}) = {value}, off-diagonal distances must be positive")]
    NonPositive { i: usize, j: usize, value: Rat },
    #[error("strong triangle inequality fails: d({i},{k}) = {dik} > max(d({i},{j}), d({j},{k})) = {bound}")]
    StrongTriangle { i: usize, j: usize, k: usize, dik: Rat, bound: Rat },
    #[error("point index {index} out of range for a space of {size} points")]
    PointOutOfRange { index: usize, size: usize },
    #[error("ball {0} is not a closed ball of this space")]
    NotANerveBall(String),
    #[error("ball {0} is a single point and has no sons")]
    TrivialBall(String),
}

/// A finite sorted set of spectrum values.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct SpectrumSet(BTreeSet<Rat>);

impl SpectrumSet {
    pub fn from_values<I: IntoIterator<Item = Rat>>(values: I) -> SpectrumSet {
        SpectrumSet(values.into_iter().collect())
    }

    pub fn contains(&self, r: &Rat) -> bool {
        self.0.contains(r)
    }

    pub fn is_subset(&self, other: &SpectrumSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &SpectrumSet) -> SpectrumSet {
        SpectrumSet(self.0.union(&other.0).copied().collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rat> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> Option<Rat> {
        self.0.iter().next_back().copied()
    }

    /// Largest value `<= bound`, if any.
    pub fn floor(&self, bound: Rat) -> Option<Rat> {
        self.0.range(..=bound).next_back().copied()
    }
}

impl fmt::Display for SpectrumSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A closed ball, stored as its sorted point set plus its diameter.
///
/// Identity is the point set; the diameter is determined by it. In an
/// ultrametric space every ball equals the closed ball of its own diameter
/// around any of its points, so `points == closed_ball(points[0], diameter)`
/// holds for every `Ball` produced by this module.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Ball {
    points: Vec<usize>,
    #[serde(rename = "diam")]
    diameter: Rat,
}

impl Ball {
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn diameter(&self) -> Rat {
        self.diameter
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn least_point(&self) -> usize {
        self.points[0]
    }

    pub fn contains(&self, p: usize) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    pub fn is_subset_of(&self, other: &Ball) -> bool {
        self.points.iter().all(|p| other.contains(*p))
    }

    pub fn is_disjoint_from(&self, other: &Ball) -> bool {
        !self.points.iter().any(|p| other.contains(*p))
    }
}

/// A finite ultrametric space with labeled points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Space {
    n: usize,
    labels: Vec<String>,
    dist: Vec<Rat>, // row-major n*n
}

impl Space {
    /// Validates and builds a space. Labels default to `p0, p1, ...`.
    pub fn new(dist: Vec<Vec<Rat>>, labels: Option<Vec<String>>) -> Result<Space, SpaceError> {
        let n = dist.len();
        if n == 0 {
            return Err(SpaceError::Empty);
        }
        for (row, r) in dist.iter().enumerate() {
            if r.len() != n {
                return Err(SpaceError::NotSquare { row, expected: n, got: r.len() });
            }
        }
        let labels = match labels {
            Some(l) => {
                if l.len() != n {
                    return Err(SpaceError::LabelCount { expected: n, got: l.len() });
                }
                let mut seen = BTreeSet::new();
                for name in &l {
                    if !seen.insert(name.clone()) {
                        return Err(SpaceError::DuplicateLabel(name.clone()));
                    }
                }
                l
            }
            None => (0..n).map(|i| format!("p{i}")).collect(),
        };
        for i in 0..n {
            if !dist[i][i].is_zero() {
                return Err(SpaceError::NonzeroDiagonal { i, value: dist[i][i] });
            }
            for j in (i + 1)..n {
                if dist[i][j] != dist[j][i] {
                    return Err(SpaceError::Asymmetric { i, j, dij: dist[i][j], dji: dist[j][i] });
                }
                if !dist[i][j].is_positive() {
                    return Err(SpaceError::NonPositive { i, j, value: dist[i][j] });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let bound = dist[i][j].max(dist[j][k]);
                    if dist[i][k] > bound {
                        return Err(SpaceError::StrongTriangle { i, j, k, dik: dist[i][k], bound });
                    }
                }
            }
        }
        let flat = dist.into_iter().flatten().collect();
        Ok(Space { n, labels, dist: flat })
    }

    /// Builds a space from integer distances; panics on invalid input.
    /// Convenience for tests and fixtures.
    pub fn from_ints(dist: &[&[i64]], labels: &[&str]) -> Space {
        let rows = dist
            .iter()
            .map(|r| r.iter().map(|&v| Rat::int(v)).collect())
            .collect();
        let labels = if labels.is_empty() {
            None
        } else {
            Some(labels.iter().map(|s| s.to_string()).collect())
        };
        Space::new(rows, labels).expect("invalid fixture distances")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false // a validated space has at least one point
    }

    pub fn dist(&self, i: usize, j: usize) -> Rat {
        self.dist[i * self.n + j]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn check_point(&self, i: usize) -> Result<(), SpaceError> {
        if i < self.n {
            Ok(())
        } else {
            Err(SpaceError::PointOutOfRange { index: i, size: self.n })
        }
    }

    pub fn matrix(&self) -> Vec<Vec<Rat>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.dist(i, j)).collect())
            .collect()
    }

    /// All distances realized from `a`, always including 0.
    pub fn point_spectrum(&self, a: usize) -> SpectrumSet {
        SpectrumSet::from_values((0..self.n).map(|x| self.dist(a, x)))
    }

    /// All distances realized anywhere in the space.
    pub fn spectrum(&self) -> SpectrumSet {
        let mut values = BTreeSet::new();
        for i in 0..self.n {
            for j in i..self.n {
                values.insert(self.dist(i, j));
            }
        }
        SpectrumSet(values)
    }

    /// Per-point spectra, indexed by point.
    pub fn multispectrum(&self) -> Vec<SpectrumSet> {
        (0..self.n).map(|a| self.point_spectrum(a)).collect()
    }

    pub fn diameter(&self) -> Rat {
        self.spectrum().max().unwrap_or_else(Rat::zero)
    }

    /// Diameter of a nonempty point set.
    pub fn set_diameter(&self, pts: &[usize]) -> Rat {
        let mut d = Rat::zero();
        for (k, &i) in pts.iter().enumerate() {
            for &j in &pts[k + 1..] {
                d = d.max(self.dist(i, j));
            }
        }
        d
    }

    /// Closed ball `{x : d(a,x) <= r}` as a `Ball` carrying its own diameter.
    pub fn closed_ball(&self, a: usize, r: Rat) -> Ball {
        let points: Vec<usize> = (0..self.n).filter(|&x| self.dist(a, x) <= r).collect();
        let diameter = self.set_diameter(&points);
        Ball { points, diameter }
    }

    /// Open ball `{x : d(a,x) < r}` as a point set.
    pub fn open_ball_points(&self, a: usize, r: Rat) -> Vec<usize> {
        (0..self.n).filter(|&x| self.dist(a, x) < r).collect()
    }

    /// Sphere `{x : d(a,x) = r}`.
    pub fn sphere(&self, a: usize, r: Rat) -> Vec<usize> {
        (0..self.n).filter(|&x| self.dist(a, x) == r).collect()
    }

    /// The ball spanned by a nonempty point set: the least closed ball
    /// containing it. Equals the closed ball of the set's diameter around
    /// any member.
    pub fn spanned_ball(&self, pts: &[usize]) -> Ball {
        debug_assert!(!pts.is_empty());
        let d = self.set_diameter(pts);
        self.closed_ball(pts[0], d)
    }

    /// Whether `b` is a ball of this space (and hence a nerve member).
    pub fn is_nerve_ball(&self, b: &Ball) -> bool {
        if b.points.is_empty()
            || b.points.windows(2).any(|w| w[0] >= w[1])
            || b.points.iter().any(|&p| p >= self.n)
        {
            return false;
        }
        let span = self.closed_ball(b.points[0], self.set_diameter(&b.points));
        span == *b
    }

    /// The nerve: every closed ball of every realized radius, deduplicated,
    /// sorted by decreasing diameter and then least point index.
    pub fn nerve(&self) -> Vec<Ball> {
        let mut seen = BTreeSet::new();
        for a in 0..self.n {
            for r in self.point_spectrum(a).iter() {
                seen.insert(self.closed_ball(a, *r));
            }
        }
        let mut balls: Vec<Ball> = seen.into_iter().collect();
        balls.sort_by(|x, y| {
            y.diameter
                .cmp(&x.diameter)
                .then_with(|| x.least_point().cmp(&y.least_point()))
        });
        debug_assert!(self.nerve_is_laminar_and_ramified(&balls));
        balls
    }

    fn nerve_is_laminar_and_ramified(&self, balls: &[Ball]) -> bool {
        for (k, a) in balls.iter().enumerate() {
            for b in &balls[k + 1..] {
                let laminar =
                    a.is_subset_of(b) || b.is_subset_of(a) || a.is_disjoint_from(b);
                if !laminar {
                    return false;
                }
            }
        }
        balls
            .iter()
            .filter(|b| b.len() > 1)
            .all(|b| self.sons(b).map(|s| s.len() >= 2).unwrap_or(false))
    }

    /// Sons of a non-trivial nerve ball: the open balls of radius
    /// `diameter(b)` inside `b`. They partition `b`; there are at least two.
    pub fn sons(&self, b: &Ball) -> Result<Vec<Ball>, SpaceError> {
        if !self.is_nerve_ball(b) {
            return Err(SpaceError::NotANerveBall(self.ball_label(b)));
        }
        if b.diameter.is_zero() {
            return Err(SpaceError::TrivialBall(self.ball_label(b)));
        }
        let mut sons = Vec::new();
        let mut assigned = vec![false; b.points.len()];
        for (k, &a) in b.points.iter().enumerate() {
            if assigned[k] {
                continue;
            }
            let members: Vec<usize> = b
                .points
                .iter()
                .filter(|&&x| self.dist(a, x) < b.diameter)
                .copied()
                .collect();
            for (m, &x) in b.points.iter().enumerate() {
                if members.binary_search(&x).is_ok() {
                    assigned[m] = true;
                }
            }
            let diameter = self.set_diameter(&members);
            sons.push(Ball { points: members, diameter });
        }
        debug_assert!(sons.len() >= 2);
        debug_assert_eq!(sons.iter().map(Ball::len).sum::<usize>(), b.len());
        Ok(sons)
    }

    /// The subspace induced on a sorted set of points. Point `k` of the
    /// result is `pts[k]` of the original space; labels carry over.
    pub fn restrict(&self, pts: &[usize]) -> Space {
        assert!(!pts.is_empty(), "cannot restrict to an empty point set");
        debug_assert!(pts.windows(2).all(|w| w[0] < w[1]));
        let n = pts.len();
        let labels = pts.iter().map(|&p| self.labels[p].clone()).collect();
        let mut dist = Vec::with_capacity(n * n);
        for &i in pts {
            for &j in pts {
                dist.push(self.dist(i, j));
            }
        }
        Space { n, labels, dist }
    }

    /// `{y : point_spectrum(x) subset of point_spectrum(y)}`.
    pub fn spec_dominators(&self, x: usize) -> Vec<usize> {
        let sx = self.point_spectrum(x);
        (0..self.n)
            .filter(|&y| sx.is_subset(&self.point_spectrum(y)))
            .collect()
    }

    /// Human-readable ball rendering, e.g. `{x,y}`.
    pub fn ball_label(&self, b: &Ball) -> String {
        let names: Vec<&str> = b.points.iter().map(|&p| self.label(p)).collect();
        format!("{{{}}}", names.join(","))
    }
}
