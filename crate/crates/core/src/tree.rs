//! The codec between finite ultrametric spaces and valued trees, plus
//! finite tree schemes.
//!
//! `space_to_tree` arranges the nerve of a space as a rooted tree whose
//! node values are ball diameters; `tree_to_space` recovers the space as
//! `d(x,y) = value(meet of the two leaves)`. The two maps are mutually
//! inverse, with leaves enumerated in node order corresponding to points
//! in index order.
//!
//! A `TreeScheme` is a finite description of a (possibly infinite) space:
//! each internal descriptor carries a diameter and a son count that is
//! either a finite integer `>= 2` or unbounded. `materialize` expands a
//! scheme into a concrete space at a given width.

use std::fmt::Write as _;

use thiserror::Error;

use crate::rat::Rat;
use crate::space::{Space, SpaceError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree has no nodes")]
    Empty,
    #[error("tree has no root")]
    NoRoot,
    #[error("nodes {0} and {1} are both roots")]
    MultipleRoots(usize, usize),
    #[error("node {node} has out-of-range parent {parent}")]
    BadParent { node: usize, parent: usize },
    #[error("node {0} is not reachable from the root (cycle or disconnected)")]
    Unreachable(usize),
    #[error("node {node} has negative value {value}")]
    NegativeValue { node: usize, value: Rat },
    #[error("value does not decrease from node {parent} ({pv}) to node {child} ({cv})")]
    ValueNotDecreasing { parent: usize, child: usize, pv: Rat, cv: Rat },
    #[error("leaf {node} has value {value}, leaves must carry 0")]
    LeafNonzeroValue { node: usize, value: Rat },
    #[error("internal node {node} has a single child; ramified trees need at least 2")]
    UnaryInternalNode { node: usize },
    #[error("leaf labels do not form a valid point labeling: {0}")]
    BadLabels(String),
}

/// A rooted tree with strictly decreasing nonnegative rational values,
/// zero-valued leaves, and at least two children under every internal node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedTree {
    parents: Vec<Option<usize>>,
    values: Vec<Rat>,
    labels: Vec<Option<String>>,
    children: Vec<Vec<usize>>,
    root: usize,
}

impl ValuedTree {
    pub fn new(
        parents: Vec<Option<usize>>,
        values: Vec<Rat>,
        labels: Vec<Option<String>>,
    ) -> Result<ValuedTree, TreeError> {
        let n = parents.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        assert_eq!(values.len(), n, "values length mismatch");
        assert_eq!(labels.len(), n, "labels length mismatch");
        let mut root = None;
        let mut children = vec![Vec::new(); n];
        for (node, parent) in parents.iter().enumerate() {
            match parent {
                None => match root {
                    None => root = Some(node),
                    Some(r) => return Err(TreeError::MultipleRoots(r, node)),
                },
                Some(p) => {
                    if *p >= n {
                        return Err(TreeError::BadParent { node, parent: *p });
                    }
                    children[*p].push(node);
                }
            }
        }
        let root = root.ok_or(TreeError::NoRoot)?;
        // Reachability doubles as a cycle check.
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            stack.extend(children[v].iter().copied());
        }
        if let Some(node) = seen.iter().position(|s| !s) {
            return Err(TreeError::Unreachable(node));
        }
        for node in 0..n {
            if values[node].is_negative() {
                return Err(TreeError::NegativeValue { node, value: values[node] });
            }
            match children[node].len() {
                0 => {
                    if !values[node].is_zero() {
                        return Err(TreeError::LeafNonzeroValue { node, value: values[node] });
                    }
                }
                1 => return Err(TreeError::UnaryInternalNode { node }),
                _ => {
                    for &c in &children[node] {
                        if values[c] >= values[node] {
                            return Err(TreeError::ValueNotDecreasing {
                                parent: node,
                                child: c,
                                pv: values[node],
                                cv: values[c],
                            });
                        }
                    }
                }
            }
        }
        Ok(ValuedTree { parents, values, labels, children, root })
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn value(&self, node: usize) -> Rat {
        self.values[node]
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parents[node]
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    pub fn label(&self, node: usize) -> Option<&str> {
        self.labels[node].as_deref()
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        self.children[node].is_empty()
    }

    /// Leaves in node-id order; this order defines the point order of
    /// `tree_to_space`.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.is_leaf(v)).collect()
    }

    /// Number of nodes on the longest root-to-leaf chain.
    pub fn depth(&self) -> usize {
        fn rec(t: &ValuedTree, v: usize) -> usize {
            1 + t.children(v).iter().map(|&c| rec(t, c)).max().unwrap_or(0)
        }
        rec(self, self.root)
    }

    /// Graphviz rendering; every node is labeled with its value.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tree {\n");
        for node in 0..self.len() {
            let _ = writeln!(out, "  n{} [label=\"δ={}\"];", node, self.values[node]);
        }
        for node in 0..self.len() {
            for &c in &self.children[node] {
                let _ = writeln!(out, "  n{node} -> n{c};");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Arranges the nerve of a space as a valued tree. Node `k` is the `k`-th
/// nerve ball (decreasing diameter, then least point); leaves are the
/// singletons, in point order, labeled with the point labels.
pub fn space_to_tree(space: &Space) -> ValuedTree {
    let nerve = space.nerve();
    let mut parents = vec![None; nerve.len()];
    for (i, ball) in nerve.iter().enumerate() {
        let mut best: Option<usize> = None;
        for (j, other) in nerve.iter().enumerate() {
            if i != j && ball.is_subset_of(other) && ball.len() < other.len() {
                best = match best {
                    None => Some(j),
                    Some(b) if other.diameter() < nerve[b].diameter() => Some(j),
                    keep => keep,
                };
            }
        }
        parents[i] = best;
    }
    let values = nerve.iter().map(|b| b.diameter()).collect();
    let labels = nerve
        .iter()
        .map(|b| {
            if b.len() == 1 {
                Some(space.label(b.least_point()).to_string())
            } else {
                None
            }
        })
        .collect();
    ValuedTree::new(parents, values, labels).expect("nerve always forms a valid tree")
}

/// Recovers the space encoded by a valued tree: points are the leaves in
/// node order, and the distance between two leaves is the value of their
/// deepest common ancestor.
pub fn tree_to_space(tree: &ValuedTree) -> Result<Space, TreeError> {
    let leaves = tree.leaves();
    let n = leaves.len();
    // Root paths, deepest node last.
    let paths: Vec<Vec<usize>> = leaves
        .iter()
        .map(|&leaf| {
            let mut path = vec![leaf];
            let mut v = leaf;
            while let Some(p) = tree.parent(v) {
                path.push(p);
                v = p;
            }
            path.reverse();
            path
        })
        .collect();
    let mut dist = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let mut meet = tree.root();
            for (a, b) in paths[i].iter().zip(paths[j].iter()) {
                if a != b {
                    break;
                }
                meet = *a;
            }
            let d = tree.value(meet);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let labels: Vec<String> = leaves
        .iter()
        .enumerate()
        .map(|(k, &leaf)| {
            tree.label(leaf)
                .map(str::to_string)
                .unwrap_or_else(|| format!("p{k}"))
        })
        .collect();
    Space::new(dist, Some(labels)).map_err(|e: SpaceError| TreeError::BadLabels(e.to_string()))
}

/// Son count of a scheme descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Finite(u32),
    Unbounded,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchemeError {
    #[error("descriptor diameter {0} is negative")]
    NegativeDiam(Rat),
    #[error("leaf descriptor (diameter 0) cannot carry children")]
    LeafWithChildren,
    #[error("leaf descriptor (diameter 0) cannot carry a degree")]
    LeafWithDegree,
    #[error("internal descriptor (diameter {0}) needs a degree")]
    MissingDegree(Rat),
    #[error("degree {0} is below 2")]
    DegreeTooSmall(u32),
    #[error("degree {degree} is below the {children} listed child descriptors")]
    DegreeBelowChildCount { degree: u32, children: usize },
    #[error("child diameter {child} is not below parent diameter {parent}")]
    ChildDiamNotSmaller { parent: Rat, child: Rat },
    #[error("materialization width {0} is below 2")]
    WidthTooSmall(u32),
    #[error("effective son count {sons} cannot cover {types} listed child descriptors")]
    SonsBelowChildTypes { sons: u32, types: usize },
}

/// One descriptor of a tree scheme. A leaf descriptor has diameter 0 and
/// neither degree nor children; an internal descriptor carries a positive
/// diameter, a degree, and a (possibly empty) list of son descriptors.
/// Unlisted sons default to leaves; listed sons repeat round-robin up to
/// the realized son count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeNode {
    pub diam: Rat,
    pub degree: Option<Degree>,
    pub children: Vec<SchemeNode>,
}

impl SchemeNode {
    pub fn leaf() -> SchemeNode {
        SchemeNode { diam: Rat::zero(), degree: None, children: Vec::new() }
    }

    pub fn internal(diam: Rat, degree: Degree, children: Vec<SchemeNode>) -> SchemeNode {
        SchemeNode { diam, degree: Some(degree), children }
    }

    pub fn is_leaf(&self) -> bool {
        self.diam.is_zero()
    }

    fn validate(&self) -> Result<(), SchemeError> {
        if self.diam.is_negative() {
            return Err(SchemeError::NegativeDiam(self.diam));
        }
        if self.diam.is_zero() {
            if !self.children.is_empty() {
                return Err(SchemeError::LeafWithChildren);
            }
            if self.degree.is_some() {
                return Err(SchemeError::LeafWithDegree);
            }
            return Ok(());
        }
        match self.degree {
            None => return Err(SchemeError::MissingDegree(self.diam)),
            Some(Degree::Finite(k)) => {
                if k < 2 {
                    return Err(SchemeError::DegreeTooSmall(k));
                }
                if (k as usize) < self.children.len() {
                    return Err(SchemeError::DegreeBelowChildCount {
                        degree: k,
                        children: self.children.len(),
                    });
                }
            }
            Some(Degree::Unbounded) => {}
        }
        for child in &self.children {
            if child.diam >= self.diam {
                return Err(SchemeError::ChildDiamNotSmaller {
                    parent: self.diam,
                    child: child.diam,
                });
            }
            child.validate()?;
        }
        Ok(())
    }
}

/// A finite rooted tree of ball descriptors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeScheme {
    root: SchemeNode,
}

impl TreeScheme {
    pub fn new(root: SchemeNode) -> Result<TreeScheme, SchemeError> {
        root.validate()?;
        Ok(TreeScheme { root })
    }

    pub fn root(&self) -> &SchemeNode {
        &self.root
    }

    /// Number of descriptors on the longest root-to-leaf chain, counting an
    /// implied leaf level under internal descriptors without listed children.
    pub fn depth(&self) -> usize {
        fn rec(node: &SchemeNode) -> usize {
            if node.is_leaf() {
                1
            } else if node.children.is_empty() {
                2
            } else {
                1 + node.children.iter().map(rec).max().unwrap()
            }
        }
        rec(&self.root)
    }

    /// Realized son count of an internal descriptor at a given width:
    /// unbounded degrees become `width`, finite degrees are capped by it.
    pub fn realized_sons(degree: Degree, width: u32) -> u32 {
        match degree {
            Degree::Finite(k) => k.min(width),
            Degree::Unbounded => width,
        }
    }

    /// Expands the scheme into a concrete space. Every descriptor becomes
    /// `realized_sons(degree, width)` sons, filled round-robin from the
    /// listed child descriptors (leaves if none are listed). Points are
    /// labeled by their child-index paths, e.g. `(0,1)`.
    pub fn materialize(&self, width: u32) -> Result<Space, SchemeError> {
        if width < 2 {
            return Err(SchemeError::WidthTooSmall(width));
        }
        // Pre-check that every internal descriptor can cover its listed types.
        fn check_widths(node: &SchemeNode, width: u32) -> Result<(), SchemeError> {
            if let Some(degree) = node.degree {
                let m = TreeScheme::realized_sons(degree, width);
                if (m as usize) < node.children.len() {
                    return Err(SchemeError::SonsBelowChildTypes {
                        sons: m,
                        types: node.children.len(),
                    });
                }
                for child in &node.children {
                    check_widths(child, width)?;
                }
            }
            Ok(())
        }
        check_widths(&self.root, width)?;

        let mut parents: Vec<Option<usize>> = Vec::new();
        let mut values: Vec<Rat> = Vec::new();
        let mut labels: Vec<Option<String>> = Vec::new();

        fn expand(
            node: &SchemeNode,
            parent: Option<usize>,
            path: &mut Vec<u32>,
            width: u32,
            parents: &mut Vec<Option<usize>>,
            values: &mut Vec<Rat>,
            labels: &mut Vec<Option<String>>,
        ) {
            let id = parents.len();
            parents.push(parent);
            values.push(node.diam);
            if node.is_leaf() {
                let coords: Vec<String> = path.iter().map(u32::to_string).collect();
                labels.push(Some(format!("({})", coords.join(","))));
                return;
            }
            labels.push(None);
            let m = TreeScheme::realized_sons(node.degree.unwrap(), width);
            let leaf = SchemeNode::leaf();
            for i in 0..m {
                let child = if node.children.is_empty() {
                    &leaf
                } else {
                    &node.children[(i as usize) % node.children.len()]
                };
                path.push(i);
                expand(child, Some(id), path, width, parents, values, labels);
                path.pop();
            }
        }
        let mut path = Vec::new();
        expand(&self.root, None, &mut path, width, &mut parents, &mut values, &mut labels);

        let tree = ValuedTree::new(parents, values, labels)
            .expect("a validated scheme expands to a valid tree");
        Ok(tree_to_space(&tree).expect("scheme leaves have unique labels"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn roundtrip(s: &Space) {
        let tree = space_to_tree(s);
        let back = tree_to_space(&tree).unwrap();
        assert_eq!(&back, s);
    }

    #[test]
    fn roundtrip_fixtures() {
        roundtrip(&fixtures::singleton());
        roundtrip(&fixtures::t3());
        roundtrip(&fixtures::equilateral(4, Rat::new(3, 2)));
        roundtrip(&fixtures::two_sons());
        roundtrip(&fixtures::doubled_far_pair());
        roundtrip(&fixtures::three_level_chain());
    }

    #[test]
    fn t3_tree_shape() {
        let tree = space_to_tree(&fixtures::t3());
        assert_eq!(tree.len(), 5);
        assert_eq!(tree.root(), 0);
        assert_eq!(tree.value(0), Rat::int(2));
        assert_eq!(tree.children(0), &[1, 4]); // {x,y} and {z}
        assert_eq!(tree.children(1), &[2, 3]);
        assert_eq!(tree.leaves(), vec![2, 3, 4]);
        assert_eq!(tree.label(2), Some("x"));
        assert_eq!(tree.label(4), Some("z"));
        assert_eq!(tree.depth(), 3);
    }

    #[test]
    fn rejects_unary_internal_node() {
        let err = ValuedTree::new(
            vec![None, Some(0)],
            vec![Rat::int(1), Rat::zero()],
            vec![None, None],
        )
        .unwrap_err();
        assert_eq!(err, TreeError::UnaryInternalNode { node: 0 });
    }

    #[test]
    fn rejects_non_decreasing_values() {
        let err = ValuedTree::new(
            vec![None, Some(0), Some(0)],
            vec![Rat::int(1), Rat::int(1), Rat::zero()],
            vec![None, None, None],
        )
        .unwrap_err();
        assert!(matches!(err, TreeError::ValueNotDecreasing { .. }));
    }

    #[test]
    fn rejects_nonzero_leaf() {
        let err = ValuedTree::new(
            vec![None, Some(0), Some(0)],
            vec![Rat::int(2), Rat::int(1), Rat::zero()],
            vec![None, None, None],
        )
        .unwrap_err();
        assert_eq!(
            err,
            TreeError::LeafNonzeroValue { node: 1, value: Rat::int(1) }
        );
    }

    #[test]
    fn dot_output_lists_every_node() {
        let dot = space_to_tree(&fixtures::t3()).to_dot();
        assert!(dot.starts_with("digraph tree {"));
        assert!(dot.contains("n0 [label=\"δ=2\"];"));
        assert!(dot.contains("n1 [label=\"δ=1\"];"));
        assert!(dot.contains("n0 -> n4;"));
    }

    #[test]
    fn flat_scheme_materializes_to_equilateral() {
        let scheme = TreeScheme::new(SchemeNode::internal(
            Rat::int(1),
            Degree::Unbounded,
            vec![],
        ))
        .unwrap();
        let space = scheme.materialize(3).unwrap();
        assert_eq!(space.matrix(), fixtures::equilateral(3, Rat::int(1)).matrix());
        assert_eq!(space.labels(), &["(0)", "(1)", "(2)"]);
    }

    #[test]
    fn two_level_scheme_materializes_to_blocks() {
        let scheme = TreeScheme::new(SchemeNode::internal(
            Rat::int(2),
            Degree::Unbounded,
            vec![SchemeNode::internal(Rat::int(1), Degree::Unbounded, vec![])],
        ))
        .unwrap();
        let space = scheme.materialize(2).unwrap();
        assert_eq!(space.len(), 4);
        assert_eq!(space.label(0), "(0,0)");
        assert_eq!(space.label(3), "(1,1)");
        assert_eq!(space.dist(0, 1), Rat::int(1));
        assert_eq!(space.dist(0, 2), Rat::int(2));
        assert_eq!(space.dist(2, 3), Rat::int(1));
    }

    #[test]
    fn finite_degree_is_capped_by_width() {
        let scheme = TreeScheme::new(SchemeNode::internal(
            Rat::int(1),
            Degree::Finite(3),
            vec![],
        ))
        .unwrap();
        assert_eq!(scheme.materialize(2).unwrap().len(), 2);
        assert_eq!(scheme.materialize(5).unwrap().len(), 3);
    }

    #[test]
    fn scheme_validation_errors() {
        assert_eq!(
            TreeScheme::new(SchemeNode::internal(Rat::int(1), Degree::Finite(1), vec![]))
                .unwrap_err(),
            SchemeError::DegreeTooSmall(1)
        );
        assert_eq!(
            TreeScheme::new(SchemeNode::internal(
                Rat::int(1),
                Degree::Unbounded,
                vec![SchemeNode::internal(Rat::int(1), Degree::Unbounded, vec![])],
            ))
            .unwrap_err(),
            SchemeError::ChildDiamNotSmaller { parent: Rat::int(1), child: Rat::int(1) }
        );
        let leafy = SchemeNode { diam: Rat::zero(), degree: Some(Degree::Unbounded), children: vec![] };
        assert_eq!(TreeScheme::new(leafy).unwrap_err(), SchemeError::LeafWithDegree);
    }
}
