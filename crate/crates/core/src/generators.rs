//! Constructions of standard finite ultrametric spaces.
//!
//! All generators are deterministic: point order, labels, and distances
//! are fixed functions of the arguments. Sizes grow like width^levels,
//! so `width` is the single knob for desk-scale experiments.

use thiserror::Error;

use crate::monoid::{enumerate_words, word_space, WordError};
use crate::rat::Rat;
use crate::space::{Space, SpectrumSet};
use crate::tree::{Degree, SchemeNode, TreeScheme};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("spectrum must contain 0")]
    ZeroMissing,
    #[error("spectrum value {0} is negative")]
    NegativeValue(Rat),
    #[error("spectrum has {got} values, need at least {need}")]
    TooFewValues { need: usize, got: usize },
    #[error("width {0} is below 2")]
    WidthTooSmall(u32),
    #[error("family_cap must be positive")]
    FamilyCapZero,
    #[error("degree list has {got} entries, expected {expected}")]
    DegreeCount { expected: usize, got: usize },
    #[error("finite degree {0} is below 2")]
    DegreeTooSmall(u32),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A descending chain of positive level values with a branching bound
/// per level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSpec {
    levels: Vec<Rat>,
    degrees: Vec<Degree>,
}

impl LevelSpec {
    pub fn new(levels: Vec<Rat>, degrees: Vec<Degree>) -> Result<Self, GenError> {
        crate::monoid::validate_levels(&levels)?;
        if degrees.len() != levels.len() {
            return Err(GenError::DegreeCount { expected: levels.len(), got: degrees.len() });
        }
        for d in &degrees {
            if let Degree::Finite(k) = d {
                if *k < 2 {
                    return Err(GenError::DegreeTooSmall(*k));
                }
            }
        }
        Ok(LevelSpec { levels, degrees })
    }

    /// All-unbounded degrees.
    pub fn unbounded(levels: Vec<Rat>) -> Result<Self, GenError> {
        let degrees = vec![Degree::Unbounded; levels.len()];
        LevelSpec::new(levels, degrees)
    }

    pub fn levels(&self) -> &[Rat] {
        &self.levels
    }

    pub fn degrees(&self) -> &[Degree] {
        &self.degrees
    }
}

fn require_zero(v: &SpectrumSet) -> Result<(), GenError> {
    for x in v.iter() {
        if x.is_negative() {
            return Err(GenError::NegativeValue(*x));
        }
    }
    if !v.contains(&Rat::zero()) {
        return Err(GenError::ZeroMissing);
    }
    Ok(())
}

/// The space on the elements of `v` with d(u,v) = max(u,v) for u != v.
/// Its spectrum is exactly `v`.
pub fn max_space(v: &SpectrumSet) -> Result<Space, GenError> {
    require_zero(v)?;
    let pts: Vec<Rat> = v.iter().copied().collect();
    let n = pts.len();
    let mut dist = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = pts[i].max(pts[j]);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let labels = pts.iter().map(Rat::to_string).collect();
    Ok(Space::new(dist, Some(labels)).expect("max distance is ultrametric"))
}

/// All words with coordinate mu below min(degree_mu, width), under the
/// level-valued word distance. Point order is lexicographic on words.
pub fn omega_space(spec: &LevelSpec, width: u32) -> Result<Space, GenError> {
    if width < 2 {
        return Err(GenError::WidthTooSmall(width));
    }
    let caps: Vec<u32> = spec
        .degrees
        .iter()
        .map(|d| match d {
            Degree::Finite(k) => width.min(*k),
            Degree::Unbounded => width,
        })
        .collect();
    let words = enumerate_words(&caps)?;
    Ok(word_space(&spec.levels, &words)?)
}

/// The single-branch scheme with one descriptor per level; its
/// materialization at a given width equals `omega_space`.
pub fn uniform_scheme(spec: &LevelSpec) -> TreeScheme {
    let mut node = SchemeNode::leaf();
    for (w, d) in spec.levels.iter().zip(&spec.degrees).rev() {
        node = SchemeNode::internal(*w, *d, vec![node]);
    }
    TreeScheme::new(node).expect("level spec is a valid scheme")
}

/// Width-truncation of the homogeneous space with spectrum `v`: levels
/// are the nonzero values of `v` descending, every degree unbounded.
pub fn ultv_approx(v: &SpectrumSet, width: u32) -> Result<Space, GenError> {
    if width < 2 {
        return Err(GenError::WidthTooSmall(width));
    }
    require_zero(v)?;
    let mut levels: Vec<Rat> = v.iter().copied().filter(|x| !x.is_zero()).collect();
    levels.reverse();
    if levels.is_empty() {
        return Ok(word_space(&[], &[Vec::new()])?);
    }
    let spec = LevelSpec::unbounded(levels)?;
    omega_space(&spec, width)
}

/// Advances `idx` to the next k-combination of 0..n in lexicographic
/// order; false when exhausted.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in (i + 1)..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Sub-spectra of `v`: subsets of v minus its maximum that contain 0,
/// in (size, lexicographic) order, at most `cap` of them.
fn sub_families(v: &SpectrumSet, cap: usize) -> Vec<Vec<Rat>> {
    let r = v.max().expect("spectrum is non-empty");
    let tail: Vec<Rat> = v
        .iter()
        .copied()
        .filter(|x| !x.is_zero() && *x != r)
        .collect();
    let mut families = Vec::new();
    'outer: for size in 0..=tail.len() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let mut f = vec![Rat::zero()];
            f.extend(idx.iter().map(|&i| tail[i]));
            families.push(f);
            if families.len() == cap {
                break 'outer;
            }
            if !next_combination(&mut idx, tail.len()) {
                break;
            }
        }
    }
    families
}

/// Disjoint union of `family_cap` homogeneous blocks at mutual distance
/// max(v). Block b uses the b-th sub-family of `v` in (size, lex) order,
/// cycling when there are fewer families than blocks. The spectrum is
/// all of `v` once the blocks exhaust the families.
pub fn prop2_space(v: &SpectrumSet, width: u32, family_cap: u32) -> Result<Space, GenError> {
    if v.len() < 2 {
        return Err(GenError::TooFewValues { need: 2, got: v.len() });
    }
    if family_cap == 0 {
        return Err(GenError::FamilyCapZero);
    }
    require_zero(v)?;
    let r = v.max().expect("spectrum is non-empty");
    let families = sub_families(v, family_cap as usize);
    let blocks: Vec<Space> = (0..family_cap as usize)
        .map(|b| {
            let f = SpectrumSet::from_values(families[b % families.len()].iter().copied());
            ultv_approx(&f, width)
        })
        .collect::<Result<_, _>>()?;
    let n: usize = blocks.iter().map(Space::len).sum();
    let mut dist = vec![vec![r; n]; n];
    let mut labels = Vec::with_capacity(n);
    let mut off = 0;
    for (b, block) in blocks.iter().enumerate() {
        for i in 0..block.len() {
            for j in 0..block.len() {
                dist[off + i][off + j] = block.dist(i, j);
            }
            labels.push(format!("F{}:{}", b, block.label(i)));
        }
        off += block.len();
    }
    Ok(Space::new(dist, Some(labels)).expect("block union is ultrametric"))
}
