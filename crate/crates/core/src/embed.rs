//! Embedding search, one-point spectral extension, and the structural
//! criteria for spec-endogeneous indivisible spaces.
//!
//! Space-level checks are exhaustive over the finite input. Scheme-level
//! checks reason about the described countable space directly: unbounded
//! degrees stand for countably many sons, and son-matching questions
//! reduce to Hall conditions on descriptor multiplicities.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::rat::Rat;
use crate::space::{Ball, Space, SpectrumSet};
use crate::tree::{Degree, SchemeNode, TreeScheme};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmbedError {
    #[error("point {0} out of range")]
    PointOutOfRange(usize),
    #[error("duplicate domain point {0}")]
    DuplicateDomain(usize),
    #[error("points {0} and {1} share the image {2}")]
    NotInjective(usize, usize, usize),
    #[error("distance not preserved on pair ({0},{1})")]
    NotIsometric(usize, usize),
    #[error("point {0} is already in the domain")]
    AlreadyInDomain(usize),
    #[error("not a local spec-embedding: point {0} is missing distance {1}")]
    NotSpecEmbedding(usize, Rat),
}

/// A finite injective distance-preserving map between two spaces,
/// stored as (source point, target point) pairs sorted by source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMap {
    pairs: Vec<(usize, usize)>,
}

impl PartialMap {
    pub fn empty() -> PartialMap {
        PartialMap { pairs: Vec::new() }
    }

    pub fn new(
        mut pairs: Vec<(usize, usize)>,
        source: &Space,
        target: &Space,
    ) -> Result<PartialMap, EmbedError> {
        pairs.sort();
        for &(x, y) in &pairs {
            if x >= source.len() || y >= target.len() {
                return Err(EmbedError::PointOutOfRange(x.max(y)));
            }
        }
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(EmbedError::DuplicateDomain(w[0].0));
            }
        }
        for i in 0..pairs.len() {
            for j in (i + 1)..pairs.len() {
                let (x, fx) = pairs[i];
                let (y, fy) = pairs[j];
                if fx == fy {
                    return Err(EmbedError::NotInjective(x, y, fx));
                }
                if source.dist(x, y) != target.dist(fx, fy) {
                    return Err(EmbedError::NotIsometric(x, y));
                }
            }
        }
        Ok(PartialMap { pairs })
    }

    pub fn singleton(
        x: usize,
        y: usize,
        source: &Space,
        target: &Space,
    ) -> Result<PartialMap, EmbedError> {
        PartialMap::new(vec![(x, y)], source, target)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn get(&self, x: usize) -> Option<usize> {
        self.pairs
            .binary_search_by_key(&x, |&(s, _)| s)
            .ok()
            .map(|k| self.pairs[k].1)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_total_on(&self, source: &Space) -> bool {
        self.pairs.len() == source.len()
    }
}

/// First total distance-preserving injection of `source` into `target`
/// in lexicographic order: source points in index order, candidate
/// images in index order, backtracking.
pub fn find_isometric_embedding(source: &Space, target: &Space) -> Option<PartialMap> {
    fn rec(source: &Space, target: &Space, img: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = img.len();
        if i == source.len() {
            return true;
        }
        'cand: for j in 0..target.len() {
            if used[j] {
                continue;
            }
            for (k, &fk) in img.iter().enumerate() {
                if target.dist(j, fk) != source.dist(i, k) {
                    continue 'cand;
                }
            }
            img.push(j);
            used[j] = true;
            if rec(source, target, img, used) {
                return true;
            }
            img.pop();
            used[j] = false;
        }
        false
    }

    if source.len() > target.len() {
        return None;
    }
    let mut img = Vec::with_capacity(source.len());
    let mut used = vec![false; target.len()];
    if rec(source, target, &mut img, &mut used) {
        let pairs = img.into_iter().enumerate().collect();
        Some(PartialMap::new(pairs, source, target).expect("search preserves distances"))
    } else {
        None
    }
}

/// First point of the domain whose spectrum is not carried into its
/// image's spectrum, with the least missing distance; None when the map
/// is a local spec-embedding.
pub fn spec_embedding_witness(
    f: &PartialMap,
    source: &Space,
    target: &Space,
) -> Option<(usize, Rat)> {
    for &(x, fx) in f.pairs() {
        let sx = source.point_spectrum(x);
        let tfx = target.point_spectrum(fx);
        for v in sx.iter() {
            if !tfx.contains(v) {
                return Some((x, *v));
            }
        }
    }
    None
}

pub fn is_local_spec_embedding(f: &PartialMap, source: &Space, target: &Space) -> bool {
    spec_embedding_witness(f, source, target).is_none()
}

/// One step of the canonical extension procedure for a local
/// spec-embedding of `space` into itself. With a non-empty domain, let
/// r be the distance from `x` to the domain, A0 the nearest domain
/// points and y0 the least of them; the image is the least point of
/// `spec_dominators(x)` on the sphere S(f(y0), r) avoiding every open
/// ball B(f(y), r) with y in A0. Returns None when no candidate is
/// left. An empty map sends x to the least of its spec dominators.
pub fn extend_one_point(
    f: &PartialMap,
    x: usize,
    space: &Space,
) -> Result<Option<PartialMap>, EmbedError> {
    space
        .check_point(x)
        .map_err(|_| EmbedError::PointOutOfRange(x))?;
    if f.get(x).is_some() {
        return Err(EmbedError::AlreadyInDomain(x));
    }
    if let Some((p, missing)) = spec_embedding_witness(f, space, space) {
        return Err(EmbedError::NotSpecEmbedding(p, missing));
    }
    let dominators = space.spec_dominators(x);
    let image = if f.is_empty() {
        Some(dominators[0])
    } else {
        let r = f
            .pairs()
            .iter()
            .map(|&(y, _)| space.dist(x, y))
            .min()
            .expect("domain is non-empty");
        let nearest: Vec<(usize, usize)> = f
            .pairs()
            .iter()
            .copied()
            .filter(|&(y, _)| space.dist(x, y) == r)
            .collect();
        let (_, fy0) = nearest[0];
        dominators
            .iter()
            .copied()
            .filter(|&c| space.dist(fy0, c) == r)
            .find(|&c| nearest.iter().all(|&(_, fy)| space.dist(fy, c) >= r))
    };
    match image {
        None => Ok(None),
        Some(c) => {
            let mut pairs = f.pairs().to_vec();
            pairs.push((x, c));
            let extended =
                PartialMap::new(pairs, space, space).expect("candidate rule preserves distances");
            debug_assert!(is_local_spec_embedding(&extended, space, space));
            Ok(Some(extended))
        }
    }
}

/// Witness for a failed greedy extension: the starting singleton map
/// and the first point it could not absorb.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionWitness {
    pub dom: usize,
    pub image: usize,
    pub stuck: usize,
}

/// Per-son embedding multiplicity: how many sons of `ball` the
/// restriction to `son` embeds into, out of `son_count`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SonEmbedEntry {
    pub ball: Ball,
    pub son: Ball,
    pub embeds_into: usize,
    pub son_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    /// Every singleton local spec-embedding extends greedily, point by
    /// point in index order, to a total spec-embedding.
    pub spec_extension: bool,
    pub spec_extension_witness: Option<ExtensionWitness>,
    /// For every nerve ball, the ball-relative point spectra are
    /// up-directed.
    pub up_directed: bool,
    pub up_directed_witness: Option<(Ball, usize, usize)>,
    pub son_embeds: Vec<SonEmbedEntry>,
}

fn up_directed_witness(space: &Space, ball: &Ball) -> Option<(usize, usize)> {
    let sub = space.restrict(ball.points());
    let spectra: Vec<SpectrumSet> = (0..sub.len()).map(|k| sub.point_spectrum(k)).collect();
    for a in 0..sub.len() {
        for b in (a + 1)..sub.len() {
            let need = spectra[a].union(&spectra[b]);
            if !spectra.iter().any(|sc| need.is_subset(sc)) {
                return Some((ball.points()[a], ball.points()[b]));
            }
        }
    }
    None
}

pub fn check_extension_properties(space: &Space) -> ExtensionReport {
    let mut spec_extension = true;
    let mut spec_extension_witness = None;
    'pairs: for y in 0..space.len() {
        for y2 in 0..space.len() {
            let Ok(singleton) = PartialMap::singleton(y, y2, space, space) else {
                continue;
            };
            if !is_local_spec_embedding(&singleton, space, space) {
                continue;
            }
            let mut f = singleton;
            for x in 0..space.len() {
                if x == y {
                    continue;
                }
                match extend_one_point(&f, x, space).expect("chain stays a spec-embedding") {
                    Some(g) => f = g,
                    None => {
                        spec_extension = false;
                        spec_extension_witness =
                            Some(ExtensionWitness { dom: y, image: y2, stuck: x });
                        break 'pairs;
                    }
                }
            }
        }
    }

    let mut up_directed = true;
    let mut up_witness = None;
    let nerve = space.nerve();
    for ball in &nerve {
        if let Some((a, b)) = up_directed_witness(space, ball) {
            up_directed = false;
            up_witness = Some((ball.clone(), a, b));
            break;
        }
    }

    let mut son_embeds = Vec::new();
    for ball in &nerve {
        if ball.diameter().is_zero() {
            continue;
        }
        let sons = space.sons(ball).expect("nerve ball with positive diameter");
        let subs: Vec<Space> = sons.iter().map(|s| space.restrict(s.points())).collect();
        for (i, son) in sons.iter().enumerate() {
            let embeds_into = subs
                .iter()
                .filter(|t| find_isometric_embedding(&subs[i], t).is_some())
                .count();
            son_embeds.push(SonEmbedEntry {
                ball: ball.clone(),
                son: son.clone(),
                embeds_into,
                son_count: sons.len(),
            });
        }
    }

    ExtensionReport {
        spec_extension,
        spec_extension_witness,
        up_directed,
        up_directed_witness: up_witness,
        son_embeds,
    }
}

// ---------------------------------------------------------------------
// Scheme-level criteria.

/// Son multiplicity of one descriptor slot in the described space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Count {
    Fin(u64),
    Inf,
}

impl Count {
    fn add(self, other: Count) -> Count {
        match (self, other) {
            (Count::Fin(a), Count::Fin(b)) => Count::Fin(a + b),
            _ => Count::Inf,
        }
    }

    fn le(self, other: Count) -> bool {
        match (self, other) {
            (Count::Fin(a), Count::Fin(b)) => a <= b,
            (_, Count::Inf) => true,
            (Count::Inf, Count::Fin(_)) => false,
        }
    }

    fn dec(self) -> Count {
        match self {
            Count::Fin(k) => Count::Fin(k.saturating_sub(1)),
            Count::Inf => Count::Inf,
        }
    }
}

/// Flattened scheme: one node per descriptor, with the implied leaf
/// child synthesized under childless internal descriptors.
struct Arena {
    diam: Vec<Rat>,
    degree: Vec<Option<Degree>>,
    children: Vec<Vec<usize>>,
    path: Vec<Vec<usize>>,
}

impl Arena {
    fn build(scheme: &TreeScheme) -> Arena {
        fn add(arena: &mut Arena, node: &SchemeNode, path: Vec<usize>) -> usize {
            let id = arena.diam.len();
            arena.diam.push(node.diam);
            arena.degree.push(node.degree);
            arena.children.push(Vec::new());
            arena.path.push(path.clone());
            if node.is_leaf() {
                return id;
            }
            if node.children.is_empty() {
                let mut p = path;
                p.push(0);
                let leaf = add(arena, &SchemeNode::leaf(), p);
                arena.children[id].push(leaf);
            } else {
                for (i, child) in node.children.iter().enumerate() {
                    let mut p = path.clone();
                    p.push(i);
                    let cid = add(arena, child, p);
                    arena.children[id].push(cid);
                }
            }
            id
        }

        let mut arena =
            Arena { diam: Vec::new(), degree: Vec::new(), children: Vec::new(), path: Vec::new() };
        add(&mut arena, scheme.root(), Vec::new());
        arena
    }

    fn is_leaf(&self, u: usize) -> bool {
        self.children[u].is_empty()
    }

    fn label(&self, u: usize) -> String {
        let coords: Vec<String> = self.path[u].iter().map(usize::to_string).collect();
        format!("({})", coords.join(","))
    }

    /// Multiplicity of each child slot among the sons of `u`.
    fn slot_counts(&self, u: usize) -> Vec<Count> {
        let c = self.children[u].len();
        match self.degree[u].expect("internal descriptor has a degree") {
            Degree::Unbounded => vec![Count::Inf; c],
            Degree::Finite(k) => (0..c)
                .map(|i| Count::Fin((0..k as usize).filter(|j| j % c == i).count() as u64))
                .collect(),
        }
    }

    fn leaves(&self) -> Vec<usize> {
        (0..self.diam.len()).filter(|&u| self.is_leaf(u)).collect()
    }

    fn descendants(&self, u: usize) -> Vec<usize> {
        let mut out = vec![u];
        let mut k = 0;
        while k < out.len() {
            out.extend(self.children[out[k]].iter().copied());
            k += 1;
        }
        out
    }

    /// {0} plus the diameters of the internal descriptors on the path
    /// from `top` (inclusive) down to the leaf `l`.
    fn leaf_spectrum_below(&self, top: usize, l: usize) -> SpectrumSet {
        let mut values = vec![Rat::zero()];
        let from = self.path[top].len();
        let mut u = 0;
        let mut on_path = Vec::new();
        for &step in &self.path[l] {
            on_path.push(u);
            u = self.children[u][step];
        }
        for &anc in &on_path[from.min(on_path.len())..] {
            values.push(self.diam[anc]);
        }
        SpectrumSet::from_values(values)
    }
}

/// Multiset Hall condition: every subset of demand slots must have
/// enough compatible supply, with unbounded counts absorbing any
/// countable demand.
fn hall_feasible(demand: &[Count], supply: &[Count], compat: &[Vec<bool>]) -> bool {
    let d = demand.len();
    for mask in 1u32..(1 << d) {
        let mut need = Count::Fin(0);
        for (i, &cnt) in demand.iter().enumerate() {
            if mask & (1 << i) != 0 {
                need = need.add(cnt);
            }
        }
        let mut have = Count::Fin(0);
        for (j, &cnt) in supply.iter().enumerate() {
            let reachable = (0..d).any(|i| mask & (1 << i) != 0 && compat[i][j]);
            if reachable {
                have = have.add(cnt);
            }
        }
        if !need.le(have) {
            return false;
        }
    }
    true
}

struct SchemeEmbedder<'a> {
    arena: &'a Arena,
    aligned_memo: BTreeMap<(usize, usize), bool>,
    into_memo: BTreeMap<(usize, usize), bool>,
}

impl<'a> SchemeEmbedder<'a> {
    fn new(arena: &'a Arena) -> Self {
        SchemeEmbedder { arena, aligned_memo: BTreeMap::new(), into_memo: BTreeMap::new() }
    }

    /// The space below `u` embeds into the space below `v` with images
    /// spanning all of v's diameter (requires equal diameters).
    fn aligned(&mut self, u: usize, v: usize) -> bool {
        if self.arena.diam[u] != self.arena.diam[v] {
            return false;
        }
        if let Some(&hit) = self.aligned_memo.get(&(u, v)) {
            return hit;
        }
        let result = if self.arena.is_leaf(u) {
            true
        } else {
            let demand = self.arena.slot_counts(u);
            let supply = self.arena.slot_counts(v);
            let compat: Vec<Vec<bool>> = self.arena.children[u]
                .clone()
                .iter()
                .map(|&cu| {
                    self.arena.children[v]
                        .clone()
                        .iter()
                        .map(|&cv| self.embeds_into(cu, cv))
                        .collect()
                })
                .collect();
            hall_feasible(&demand, &supply, &compat)
        };
        self.aligned_memo.insert((u, v), result);
        result
    }

    /// The space below `u` embeds into the space below `v` somewhere:
    /// into a descendant of matching diameter, aligned there.
    fn embeds_into(&mut self, u: usize, v: usize) -> bool {
        if let Some(&hit) = self.into_memo.get(&(u, v)) {
            return hit;
        }
        let result = self
            .arena
            .descendants(v)
            .into_iter()
            .filter(|&c| self.arena.diam[c] == self.arena.diam[u])
            .any(|c| self.aligned(u, c));
        self.into_memo.insert((u, v), result);
        result
    }

    /// Aligned embedding of `u` into `v` mapping the leaf at relative
    /// slot path `pu` to the leaf at relative slot path `pv`.
    fn aligned_anchored(&mut self, u: usize, v: usize, pu: &[usize], pv: &[usize]) -> bool {
        if self.arena.diam[u] != self.arena.diam[v] {
            return false;
        }
        if self.arena.is_leaf(u) {
            return pu.is_empty() && pv.is_empty() && self.arena.is_leaf(v);
        }
        if pu.is_empty() || pv.is_empty() {
            return false;
        }
        let (su, sv) = (pu[0], pv[0]);
        let cu = self.arena.children[u][su];
        let cv = self.arena.children[v][sv];
        if !self.anchored_into(cu, cv, &pu[1..], &pv[1..]) {
            return false;
        }
        let mut demand = self.arena.slot_counts(u);
        let mut supply = self.arena.slot_counts(v);
        demand[su] = demand[su].dec();
        supply[sv] = supply[sv].dec();
        let compat: Vec<Vec<bool>> = self.arena.children[u]
            .clone()
            .iter()
            .map(|&a| {
                self.arena.children[v]
                    .clone()
                    .iter()
                    .map(|&b| self.embeds_into(a, b))
                    .collect()
            })
            .collect();
        hall_feasible(&demand, &supply, &compat)
    }

    /// Embedding of `u` into the subtree of `v` mapping the anchored
    /// leaves onto each other; the image must contain the leaf at `pv`,
    /// so the aligned landing site sits on that chain.
    fn anchored_into(&mut self, u: usize, v: usize, pu: &[usize], pv: &[usize]) -> bool {
        let mut t = v;
        let mut rest = pv;
        loop {
            if self.arena.diam[t] == self.arena.diam[u] {
                return self.aligned_anchored(u, t, pu, rest);
            }
            if self.arena.diam[t] < self.arena.diam[u] || rest.is_empty() {
                return false;
            }
            t = self.arena.children[t][rest[0]];
            rest = &rest[1..];
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeUpWitness {
    pub node: String,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeCheckReport {
    /// (1) every singleton local spec-embedding of the described space
    /// extends to a self-embedding, checked per leaf-type pair.
    pub singleton_extension: bool,
    pub singleton_extension_witness: Option<(String, String)>,
    /// (2) the ball family is well founded; schemes are finite, so this
    /// always holds and the longest chain is reported.
    pub well_founded: bool,
    pub max_chain: usize,
    /// (3) every internal descriptor has unbounded degree.
    pub all_unbounded: bool,
    pub bounded_witness: Option<String>,
    /// (4) leaf spectra below every internal descriptor are up-directed.
    pub up_directed: bool,
    pub up_directed_witness: Option<SchemeUpWitness>,
    pub satisfies_all: bool,
}

pub fn check_scheme_criteria(scheme: &TreeScheme) -> SchemeCheckReport {
    let arena = Arena::build(scheme);
    let leaves = arena.leaves();

    let mut all_unbounded = true;
    let mut bounded_witness = None;
    for u in 0..arena.diam.len() {
        if let Some(Degree::Finite(_)) = arena.degree[u] {
            all_unbounded = false;
            bounded_witness = Some(arena.label(u));
            break;
        }
    }

    let mut up_directed = true;
    let mut up_directed_witness = None;
    'nodes: for u in 0..arena.diam.len() {
        if arena.is_leaf(u) {
            continue;
        }
        let below: Vec<usize> = arena
            .descendants(u)
            .into_iter()
            .filter(|&l| arena.is_leaf(l))
            .collect();
        let spectra: Vec<SpectrumSet> =
            below.iter().map(|&l| arena.leaf_spectrum_below(u, l)).collect();
        for a in 0..below.len() {
            for b in (a + 1)..below.len() {
                let need = spectra[a].union(&spectra[b]);
                if !spectra.iter().any(|s| need.is_subset(s)) {
                    up_directed = false;
                    up_directed_witness = Some(SchemeUpWitness {
                        node: arena.label(u),
                        left: arena.label(below[a]),
                        right: arena.label(below[b]),
                    });
                    break 'nodes;
                }
            }
        }
    }

    let mut embedder = SchemeEmbedder::new(&arena);
    let root_spectra: Vec<SpectrumSet> =
        leaves.iter().map(|&l| arena.leaf_spectrum_below(0, l)).collect();
    let mut singleton_extension = true;
    let mut singleton_extension_witness = None;
    'leafpairs: for (i, &y) in leaves.iter().enumerate() {
        for (j, &y2) in leaves.iter().enumerate() {
            if !root_spectra[i].is_subset(&root_spectra[j]) {
                continue;
            }
            let py = arena.path[y].clone();
            let py2 = arena.path[y2].clone();
            if !embedder.aligned_anchored(0, 0, &py, &py2) {
                singleton_extension = false;
                singleton_extension_witness = Some((arena.label(y), arena.label(y2)));
                break 'leafpairs;
            }
        }
    }

    let satisfies_all = singleton_extension && all_unbounded && up_directed;
    SchemeCheckReport {
        singleton_extension,
        singleton_extension_witness,
        well_founded: true,
        max_chain: scheme.depth(),
        all_unbounded,
        bounded_witness,
        up_directed,
        up_directed_witness,
        satisfies_all,
    }
}
